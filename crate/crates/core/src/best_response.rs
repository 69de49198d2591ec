//! Constructive adversary best responses against an arbitrary defender bid
//! set, reaching the equilibrium lower bound in every regime.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bids::{expected_win_exact, BidProfile};
use crate::ellset::{
    build_i1, build_i2, build_i3, build_i4, build_i5, build_j_sets, choose_delta,
    satisfies_property_p, to_adversary_bids, EllSet,
};
use crate::equilibrium::{
    ell_one, ell_two, equilibrium, f_value, r_ell, spectrum, AuctionInstance, Branch, Fidelity,
};
use crate::error::{Error, Result};
use crate::oracle::{threshold_best_response, DEFAULT_ORACLE_CAP};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponseReport {
    pub adversary_bids: BidProfile,
    pub case_tag: String,
    /// The ℓ of the ℓ-set used; 0 when no ℓ-set is involved.
    pub ell_used: usize,
    pub guarantee: Rational,
    pub achieved: Rational,
    pub fidelity: Fidelity,
}

struct Built {
    bids: BidProfile,
    tag: &'static str,
    ell: usize,
    disjoint: bool,
}

/// Best response of an adversary with budget `R·β`, `β` the defender total.
pub fn best_response(defender: &BidProfile, ratio: &Rational) -> Result<BestResponseReport> {
    let n = defender.len();
    let beta = defender.total().clone();
    if !beta.is_positive() {
        return Err(Error::Validation(format!(
            "defender total must be positive, got {beta}"
        )));
    }
    let inst = AuctionInstance::new(n, beta.clone(), ratio.clone())?;
    let budget = inst.adversary_budget();
    let (built, guarantee) = match inst.regime() {
        Branch::ZerosPlusUnbeatable => {
            let l1 = ell_one(n, ratio)?;
            (
                few_bids(defender, &budget, l1)?,
                Rational::from_usize(l1) / Rational::from_usize(n),
            )
        }
        Branch::Proportional if ratio <= &Rational::one() => (
            main_range_low(defender, ratio)?,
            f_value(n, ratio, n)?,
        ),
        Branch::Proportional => {
            let l2 = ell_two(n, ratio)?;
            (
                main_range_high(defender, ratio, l2)?,
                f_value(n, ratio, l2)?,
            )
        }
        Branch::BelowRange | Branch::AtLowerBoundary | Branch::AboveRange => {
            (outer(defender, ratio, &budget)?, equilibrium(&inst)?.value)
        }
    };
    let tag = built.tag;
    let fail = |detail: String| Err(Error::invariant(tag, detail));
    let bids = built.bids;
    if bids.len() != n {
        return fail(format!("{} bids for {n} objects", bids.len()));
    }
    if bids.total() > &budget {
        return fail(format!("spends {} over the budget {budget}", bids.total()));
    }
    if built.disjoint {
        if let Some(b) = bids.sorted().iter().find(|b| defender.contains(b)) {
            return fail(format!("bid {b} coincides with a defender bid"));
        }
    }
    let achieved = expected_win_exact(&bids, defender)?;
    if achieved < guarantee {
        return fail(format!("wins {achieved}, below the guarantee {guarantee}"));
    }
    Ok(BestResponseReport {
        adversary_bids: bids,
        case_tag: String::from(tag),
        ell_used: built.ell,
        guarantee,
        achieved,
        fidelity: Fidelity::Proved,
    })
}

/// `1/n < R ≤ 2/(n+1)`: at most two nonzero bids win `ℓ1` objects in total.
fn few_bids(defender: &BidProfile, budget: &Rational, l1: usize) -> Result<Built> {
    let n = defender.len();
    let below = defender.count_below(budget);
    if below >= l1 {
        // One bid just under the budget beats every defender bid below it.
        let tag = "sliver-single-big";
        let top = defender.beta(below);
        let big = (&top + budget) / Rational::from_int(2);
        let zeros: Vec<Rational> = alloc::vec![Rational::zero(); n - 1];
        let delta = choose_delta(&(budget - &big), &zeros, defender).map_err(|e| retag(e, tag))?;
        let mut bids: Vec<Rational> = zeros.into_iter().map(|z| z + &delta).collect();
        bids.push(big);
        return Ok(Built {
            bids: BidProfile::new(bids)?,
            tag,
            ell: 0,
            disjoint: true,
        });
    }
    let tag = "sliver-two-bid";
    if 2 * below < l1 {
        return Err(Error::invariant(
            tag,
            format!("2ℓ = {} < ℓ1 = {l1}", 2 * below),
        ));
    }
    let pair = |i: usize| defender.beta(below - i) + defender.beta(l1 - below + i);
    let star = (0..=2 * below - l1)
        .min_by(|&a, &b| pair(a).cmp(&pair(b)))
        .unwrap();
    let mut x: Vec<Rational> = alloc::vec![Rational::zero(); n - 2];
    x.push(defender.beta(below - star));
    x.push(defender.beta(l1 - below + star));
    let spent: Rational = x.iter().sum();
    if &spent >= budget {
        return Err(Error::invariant(
            tag,
            format!("base bids cost {spent}, budget {budget}"),
        ));
    }
    let delta = choose_delta(&(budget - &spent), &x, defender).map_err(|e| retag(e, tag))?;
    let bids = x.into_iter().map(|v| v + &delta).collect();
    Ok(Built {
        bids: BidProfile::new(bids)?,
        tag,
        ell: 0,
        disjoint: true,
    })
}

/// `2/(n+1) < R ≤ 1`: an `(n, R_n)`-set with at most `n` elements.
fn main_range_low(defender: &BidProfile, ratio: &Rational) -> Result<Built> {
    let n = defender.len();
    let rn = r_ell(ratio, n)?;
    let (set, tag) = if rn == Rational::from_int(2) / Rational::from_usize(n + 1) {
        let tag = "low-pair";
        let pair = |i: usize| defender.beta(i) + defender.beta(n - i);
        let star = (1..=n).min_by(|&a, &b| pair(a).cmp(&pair(b))).unwrap();
        (EllSet::new(n, alloc::vec![star, n - star])?, tag)
    } else {
        let s = spectrum(ratio, n)?;
        if 2 * s.d + 2 <= n {
            (
                build_i4(n, s.d, s.h, defender).map_err(|e| retag(e, "low-I4"))?,
                "low-I4",
            )
        } else {
            let tag = "low-I2";
            if n.is_multiple_of(2) || 2 * s.h > n {
                return Err(Error::invariant(
                    tag,
                    format!("d_n = {}, h_n = {} for n = {n}", s.d, s.h),
                ));
            }
            let h = n.div_ceil(2) - s.h;
            (build_i2(n, h, defender).map_err(|e| retag(e, tag))?, tag)
        }
    };
    convert(set, defender, ratio, tag)
}

/// `1 < R ≤ n` with `ℓ = ⌊n/R⌋`: one of three cases by where `n` falls.
fn main_range_high(defender: &BidProfile, ratio: &Rational, ell: usize) -> Result<Built> {
    let n = defender.len();
    let s = spectrum(ratio, ell)?;
    let k = s.k;
    let l_r_floor = (Rational::from_usize(ell) * &s.r_ell)
        .floor()
        .to_usize()
        .ok_or_else(|| Error::invariant("high", "ℓ·R_ℓ out of range"))?;
    let at = |tag: &'static str| move |e| retag(e, tag);
    if n <= l_r_floor + k {
        let tag = "high-case1";
        let set = build_i1(ell, s.d, defender)
            .and_then(|a| Ok(a.union(&build_i3(ell, k, s.h, defender)?)))
            .map_err(at(tag))?;
        return convert(set, defender, ratio, tag);
    }
    if n <= k * (ell + 1) + 2 * s.d_prime + (2 * s.h_prime) / (ell + 1) {
        let tag = "high-case2";
        let set = build_i5(ell, s.d_prime, defender)
            .and_then(|a| Ok(a.union(&build_i3(ell, k, s.h_prime, defender)?)))
            .map_err(at(tag))?;
        return convert(set, defender, ratio, tag);
    }
    if n != k * (ell + 1) + 2 * s.d_prime + 1 {
        return Err(Error::invariant(
            "high-case3",
            format!("n = {n} outside every case for ℓ = {ell}"),
        ));
    }
    let up = spectrum(ratio, ell + 1)?;
    let scaled = Rational::from_usize(ell + 1) * &up.r_ell;
    if Rational::from_usize(n) == scaled.ceil() {
        let tag = "high-case3a";
        let set = build_i1(ell + 1, up.d, defender)
            .and_then(|a| Ok(a.union(&build_i3(ell + 1, k, up.h, defender)?)))
            .map_err(at(tag))?;
        return convert(set, defender, ratio, tag);
    }
    if Rational::from_usize(n) != scaled.floor() {
        return Err(Error::invariant(
            "high-case3",
            format!("n = {n} is neither bracket of (ℓ+1)R_(ℓ+1) = {scaled}"),
        ));
    }
    let (j1, j2) = build_j_sets(ell, defender, &s).map_err(at("high-case3b"))?;
    let threshold =
        Rational::from_int(2) * (Rational::from_usize(s.h_prime) + &s.delta) * defender.total()
            / Rational::from_usize(ell * (ell + 1));
    if defender.beta(n - ell + s.h_prime) < threshold {
        convert(j1, defender, ratio, "high-case3b-J1")
    } else {
        convert(j2, defender, ratio, "high-case3b-J2")
    }
}

/// `R ≤ 1/n` or `R > n`: the exact threshold search for small `n`, a direct
/// construction otherwise.
fn outer(defender: &BidProfile, ratio: &Rational, budget: &Rational) -> Result<Built> {
    let n = defender.len();
    if n <= DEFAULT_ORACLE_CAP {
        let res = threshold_best_response(defender, ratio, None)?;
        return Ok(Built {
            bids: res.witness,
            tag: "oracle",
            ell: 0,
            disjoint: false,
        });
    }
    let tag = "outer-direct";
    let share = budget / Rational::from_usize(n);
    if ratio * Rational::from_usize(n) > Rational::one() {
        // Each bid exceeds the defender's whole budget.
        let bids = BidProfile::new(alloc::vec![share; n])?;
        return Ok(Built {
            bids,
            tag,
            ell: 0,
            disjoint: true,
        });
    }
    let low = defender.beta(1);
    if &low < budget {
        let mut x = alloc::vec![Rational::zero(); n - 1];
        x.push(low.clone());
        let delta = choose_delta(&(budget - &low), &x, defender).map_err(|e| retag(e, tag))?;
        let bids = BidProfile::new(x.into_iter().map(|v| v + &delta).collect())?;
        return Ok(Built {
            bids,
            tag,
            ell: 0,
            disjoint: true,
        });
    }
    // Every defender bid is at least the whole adversary budget: tie the smallest.
    let mut bids = alloc::vec![Rational::zero(); n - 1];
    bids.push(budget.clone());
    Ok(Built {
        bids: BidProfile::new(bids)?,
        tag,
        ell: 0,
        disjoint: false,
    })
}

fn convert(
    set: EllSet,
    defender: &BidProfile,
    ratio: &Rational,
    tag: &'static str,
) -> Result<Built> {
    let check = satisfies_property_p(&set, defender, ratio)?;
    if let Some(c) = check.failing {
        return Err(Error::invariant(tag, format!("{set:?} violates {c}")));
    }
    let ell = set.ell();
    let bids = to_adversary_bids(&set, defender, ratio).map_err(|e| retag(e, tag))?;
    Ok(Built {
        bids,
        tag,
        ell,
        disjoint: true,
    })
}

fn retag(e: Error, tag: &str) -> Error {
    match e {
        Error::Invariant { tag: inner, detail } => {
            Error::invariant(tag, format!("{inner}: {detail}"))
        }
        other => Error::invariant(tag, format!("{other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::threshold_best_response;
    use crate::psi::optimal_bid_set;
    use crate::rational::rat;
    use alloc::vec;

    fn profile(v: &[(i64, i64)]) -> BidProfile {
        BidProfile::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn respond(d: &BidProfile, r: Rational) -> BestResponseReport {
        let rep = best_response(d, &r).unwrap();
        assert!(rep.achieved >= rep.guarantee);
        if d.len() <= 10 {
            assert!(threshold_best_response(d, &r, None).unwrap().value >= rep.achieved);
        }
        rep
    }

    #[test]
    fn best_response_examples() {
        let psi52 = profile(&[(0, 1), (0, 1), (0, 1), (1, 3), (2, 3)]);
        let rep = respond(&psi52, rat(2, 1));
        assert_eq!(
            (rep.achieved.clone(), rep.guarantee.clone()),
            (rat(4, 1), rat(4, 1))
        );
        assert!(rep.case_tag.starts_with("high"));

        let flat = profile(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        let rep = respond(&flat, rat(1, 1));
        assert_eq!(rep.guarantee, rat(9, 4));

        let psi41 = profile(&[(1, 10), (2, 10), (3, 10), (4, 10)]);
        let rep = respond(&psi41, rat(1, 1));
        assert_eq!((rep.achieved, rep.guarantee), (rat(9, 4), rat(9, 4)));

        let mut v = vec![(0, 1); 4];
        v.extend(vec![(1, 6); 6]);
        let rep = respond(&profile(&v), rat(3, 20));
        assert!(rep.case_tag.starts_with("sliver"));
        assert!(rep.achieved >= rat(7, 10));
    }

    #[test]
    fn single_big_bid_branch() {
        // Seven bids under the budget 3/20 reach ℓ1 = 7 for n = 10.
        let mut v = vec![(1, 100); 7];
        v.extend(vec![(31, 100); 3]);
        let rep = respond(&profile(&v), rat(3, 20));
        assert_eq!(rep.case_tag, "sliver-single-big");
    }

    #[test]
    fn outer_regimes() {
        let psi = optimal_bid_set(&AuctionInstance::normalized(4, rat(5, 1)).unwrap()).unwrap();
        assert_eq!(respond(&psi.bids, rat(5, 1)).achieved, rat(4, 1));
        let psi = optimal_bid_set(&AuctionInstance::normalized(4, rat(1, 8)).unwrap()).unwrap();
        assert_eq!(respond(&psi.bids, rat(1, 8)).achieved, rat(0, 1));
        let big = BidProfile::new(vec![rat(1, 1); 12]).unwrap();
        for r in [rat(13, 1), rat(1, 20), rat(1, 12)] {
            let rep = respond(&big, r);
            assert_eq!(rep.case_tag, "outer-direct");
        }
    }

    #[test]
    fn psi_is_tight_in_main_range() {
        for n in 2..=7usize {
            for (p, q) in [(3, 4), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1)] {
                let r = rat(p, q);
                let inst = AuctionInstance::normalized(n, r.clone()).unwrap();
                if inst.regime() != Branch::Proportional {
                    continue;
                }
                let psi = optimal_bid_set(&inst).unwrap();
                let rep = respond(&psi.bids, r);
                assert_eq!(
                    rep.achieved,
                    equilibrium(&inst).unwrap().value,
                    "n={n} R={p}/{q}"
                );
            }
        }
    }

    #[test]
    fn rejects_empty_budget() {
        let zero = profile(&[(0, 1), (0, 1)]);
        assert!(matches!(
            best_response(&zero, &rat(1, 1)),
            Err(Error::Validation(_))
        ));
    }
}
