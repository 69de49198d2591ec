//! Bid multisets and the exact expected-win evaluator.

use alloc::format;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A multiset of `n` nonnegative bids, kept sorted ascending. The sums `t_ℓ`
/// of the `ℓ` largest elements are computed on first use.
#[derive(Clone, Debug)]
pub struct BidProfile {
    original: Vec<Rational>,
    sorted: Vec<Rational>,
    total: Rational,
    /// `top[ℓ]` is the sum of the `ℓ` largest bids, `top[0] = 0`.
    top: OnceCell<Vec<Rational>>,
}

impl PartialEq for BidProfile {
    fn eq(&self, other: &Self) -> bool {
        self.sorted == other.sorted && self.bids() == other.bids()
    }
}

impl Eq for BidProfile {}

impl BidProfile {
    pub fn new(bids: Vec<Rational>) -> Result<Self> {
        if bids.is_empty() {
            return Err(Error::Validation(
                "a bid profile needs at least one bid".into(),
            ));
        }
        if let Some(bad) = bids.iter().find(|b| b.is_negative()) {
            return Err(Error::Validation(format!("negative bid {bad}")));
        }
        let mut sorted = bids.clone();
        sorted.sort();
        let total = sorted.iter().sum();
        Ok(BidProfile {
            original: bids,
            sorted,
            total,
            top: OnceCell::new(),
        })
    }

    /// Builds a profile from bids already in ascending order whose sum is
    /// `total`. The caller guarantees all three; used on hot construction paths.
    pub(crate) fn from_sorted_unchecked(sorted: Vec<Rational>, total: Rational) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        BidProfile {
            original: Vec::new(),
            sorted,
            total,
            top: OnceCell::new(),
        }
    }

    fn top(&self) -> &[Rational] {
        self.top.get_or_init(|| {
            let mut top = Vec::with_capacity(self.sorted.len() + 1);
            let mut acc = Rational::zero();
            top.push(acc.clone());
            for b in self.sorted.iter().rev() {
                acc += b;
                top.push(acc.clone());
            }
            top
        })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Bids in the order they were supplied.
    pub fn bids(&self) -> &[Rational] {
        if self.original.is_empty() {
            &self.sorted
        } else {
            &self.original
        }
    }

    /// Bids ascending, `β_1 ≤ … ≤ β_n`.
    pub fn sorted(&self) -> &[Rational] {
        &self.sorted
    }

    /// `β_j` for `j` in `0..=n`, with `β_0 = 0`.
    pub fn beta(&self, j: usize) -> Rational {
        if j == 0 {
            Rational::zero()
        } else {
            self.sorted[j - 1].clone()
        }
    }

    /// `t_ℓ`, the sum of the `ℓ` largest bids.
    pub fn top_sum(&self, ell: usize) -> &Rational {
        &self.top()[ell]
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn max(&self) -> &Rational {
        self.sorted.last().expect("profiles are nonempty")
    }

    /// Number of bids strictly below `v`.
    pub fn count_below(&self, v: &Rational) -> usize {
        self.sorted.partition_point(|b| b < v)
    }

    /// Number of bids equal to `v`.
    pub fn count_equal(&self, v: &Rational) -> usize {
        self.sorted.partition_point(|b| b <= v) - self.count_below(v)
    }

    /// Distinct values, ascending.
    pub fn distinct(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for b in &self.sorted {
            if out.last() != Some(b) {
                out.push(b.clone());
            }
        }
        out
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.sorted.binary_search(v).is_ok()
    }
}

/// Convenience wrapper for [`BidProfile::new`].
pub fn make_profile(bids: Vec<Rational>) -> Result<BidProfile> {
    BidProfile::new(bids)
}

/// Expected wins, in units of `1/(2n)`, of a single bid `a` against a
/// uniformly permuted profile: `2·#{d < a} + #{d = a}`.
pub(crate) fn half_units(a: &Rational, against: &BidProfile) -> usize {
    let below = against.count_below(a);
    let equal = against.count_equal(a);
    2 * below + equal
}

fn one_sided(bidder: &BidProfile, against: &BidProfile) -> Rational {
    let units: usize = bidder.sorted().iter().map(|a| half_units(a, against)).sum();
    Rational::from_usize(units) / Rational::from_usize(2 * against.len())
}

/// Expected number of objects the adversary wins when the defender's bids
/// are uniformly permuted: `(1/n)·Σ_a [#{d < a} + ½·#{d = a}]`.
pub fn expected_win_exact(adversary: &BidProfile, defender: &BidProfile) -> Result<Rational> {
    if adversary.len() != defender.len() {
        return Err(Error::Validation(format!(
            "size mismatch: adversary has {} bids, defender has {}",
            adversary.len(),
            defender.len()
        )));
    }
    Ok(one_sided(adversary, defender))
}

/// `(w_A, w_D)`, each computed from its own side; their sum must be `n`.
pub fn zero_sum_check(
    adversary: &BidProfile,
    defender: &BidProfile,
) -> Result<(Rational, Rational)> {
    let w_a = expected_win_exact(adversary, defender)?;
    let w_d = one_sided(defender, adversary);
    let n = Rational::from_usize(defender.len());
    if &w_a + &w_d != n {
        return Err(Error::invariant(
            "zero-sum",
            format!("w_A = {w_a} and w_D = {w_d} do not add up to {n}"),
        ));
    }
    Ok((w_a, w_d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;
    use proptest::prelude::*;

    fn profile(v: &[(i64, i64)]) -> BidProfile {
        BidProfile::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn psi41() -> BidProfile {
        profile(&[(1, 10), (2, 10), (3, 10), (4, 10)])
    }

    #[test]
    fn make_profile_examples() {
        let p = profile(&[(1, 10), (3, 10), (2, 10), (4, 10)]);
        assert_eq!(
            p.sorted(),
            &[rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10)]
        );
        assert_eq!(p.top_sum(2), &rat(7, 10));
        assert_eq!(p.bids()[1], rat(3, 10));

        let p = profile(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(p.beta(0), Rational::zero());
        assert_eq!(
            (p.beta(1), p.beta(2), p.beta(3)),
            (rat(0, 1), rat(0, 1), rat(1, 1))
        );
        assert_eq!(p.top_sum(1), &rat(1, 1));

        let p = profile(&[(1, 3), (1, 3)]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.top_sum(2), &rat(2, 3));
        assert_eq!(p.total(), &rat(2, 3));
    }

    #[test]
    fn make_profile_rejects() {
        assert!(matches!(BidProfile::new(vec![]), Err(Error::Validation(_))));
        assert!(matches!(
            BidProfile::new(vec![rat(1, 2), rat(-1, 3)]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn evaluator_examples() {
        let a = profile(&[(0, 1), (0, 1), (0, 1), (1, 2)]);
        assert_eq!(expected_win_exact(&a, &psi41()).unwrap(), rat(1, 1));
        assert_eq!(expected_win_exact(&psi41(), &psi41()).unwrap(), rat(2, 1));
        let eps = (1, 1000);
        let a = profile(&[eps, eps, eps, eps, eps]);
        let d = profile(&[(0, 1), (0, 1), (0, 1), (1, 3), (2, 3)]);
        assert_eq!(expected_win_exact(&a, &d).unwrap(), rat(3, 1));
        let short = profile(&[(1, 1)]);
        assert!(matches!(
            expected_win_exact(&short, &d),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn zero_sum_examples() {
        let a = profile(&[(0, 1), (0, 1), (0, 1), (1, 2)]);
        assert_eq!(
            zero_sum_check(&a, &psi41()).unwrap(),
            (rat(1, 1), rat(3, 1))
        );
        assert_eq!(
            zero_sum_check(&psi41(), &psi41()).unwrap(),
            (rat(2, 1), rat(2, 1))
        );
        let z = profile(&[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(zero_sum_check(&z, &z).unwrap(), (rat(3, 2), rat(3, 2)));
    }

    /// Full enumeration of the `n!` defender orderings, each object resolved
    /// by the tie rule.
    fn permutation_oracle(a: &[Rational], d: &[Rational]) -> Rational {
        fn permute(
            d: &mut Vec<Rational>,
            k: usize,
            a: &[Rational],
            total: &mut Rational,
            count: &mut usize,
        ) {
            if k == d.len() {
                for (x, y) in a.iter().zip(d.iter()) {
                    if x > y {
                        *total += Rational::one();
                    } else if x == y {
                        *total += rat(1, 2);
                    }
                }
                *count += 1;
                return;
            }
            for i in k..d.len() {
                d.swap(k, i);
                permute(d, k + 1, a, total, count);
                d.swap(k, i);
            }
        }
        let mut total = Rational::zero();
        let mut count = 0;
        permute(&mut d.to_vec(), 0, a, &mut total, &mut count);
        total / Rational::from_usize(count)
    }

    fn bids(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((0i64..6, 1i64..4).prop_map(|(p, q)| rat(p, q)), n)
    }

    fn pair() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
        (1usize..=6).prop_flat_map(|n| (bids(n), bids(n)))
    }

    proptest! {
        #[test]
        fn matches_permutation_enumeration((a, d) in pair()) {
            let pa = BidProfile::new(a.clone()).unwrap();
            let pd = BidProfile::new(d.clone()).unwrap();
            prop_assert_eq!(expected_win_exact(&pa, &pd).unwrap(), permutation_oracle(&a, &d));
        }

        #[test]
        fn permutation_invariant((a, d) in pair(), seed in any::<u64>()) {
            let mut shuffled = a.clone();
            let len = shuffled.len();
            shuffled.rotate_left((seed as usize) % len);
            shuffled.reverse();
            let x = expected_win_exact(&BidProfile::new(a).unwrap(), &BidProfile::new(d.clone()).unwrap()).unwrap();
            let y = expected_win_exact(&BidProfile::new(shuffled).unwrap(), &BidProfile::new(d).unwrap()).unwrap();
            prop_assert_eq!(x, y);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn raising_a_bid_never_hurts((a, d) in pair(), idx in any::<usize>(), bump in (1i64..5, 1i64..5)) {
            let pd = BidProfile::new(d).unwrap();
            let before = expected_win_exact(&BidProfile::new(a.clone()).unwrap(), &pd).unwrap();
            let mut raised = a;
            let i = idx % raised.len();
            raised[i] = &raised[i] + rat(bump.0, bump.1);
            let after = expected_win_exact(&BidProfile::new(raised).unwrap(), &pd).unwrap();
            prop_assert!(after >= before);
        }

        #[test]
        fn zero_sum_and_bounds((a, d) in pair()) {
            let pa = BidProfile::new(a).unwrap();
            let pd = BidProfile::new(d).unwrap();
            let (wa, wd) = zero_sum_check(&pa, &pd).unwrap();
            let n = Rational::from_usize(pd.len());
            prop_assert!(wa >= Rational::zero() && wa <= n);
            prop_assert_eq!(&wa + &wd, n.clone());
            let all_above = pa.sorted()[0] > *pd.max();
            prop_assert_eq!(wa == n, all_above);
        }

        #[test]
        fn single_bid_linearity(d in (1usize..=6).prop_flat_map(bids), a in (0i64..6, 1i64..4)) {
            let n = d.len();
            let a = rat(a.0, a.1);
            let pd = BidProfile::new(d).unwrap();
            let mut adv = vec![Rational::zero(); n];
            adv[0] = a.clone();
            let got = expected_win_exact(&BidProfile::new(adv).unwrap(), &pd).unwrap();
            let half = rat(1, 2);
            let zero = Rational::zero();
            let expect = (Rational::from_usize(pd.count_below(&a))
                + &half * Rational::from_usize(pd.count_equal(&a))
                + Rational::from_usize(n - 1) * &half * Rational::from_usize(pd.count_equal(&zero)))
                / Rational::from_usize(n);
            prop_assert_eq!(got, expect);
        }
    }
}
