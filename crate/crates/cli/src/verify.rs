//! Conformance checks for one `(n, R)`: spectrum identities, Ψ structure,
//! constructor sweeps on a handful of defender shapes, and best-response and
//! oracle agreement against Ψ.

use prauction_core::ellset::{build_i1, build_i2, build_i3, build_i4, build_i5, build_j_sets};
use prauction_core::equilibrium::{equilibrium, spectrum, AuctionInstance, Branch};
use prauction_core::oracle::{threshold_best_response, DEFAULT_ORACLE_CAP};
use prauction_core::{best_response, optimal_bid_set, BidProfile, Error, Rational};

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

impl Check {
    pub fn line(&self) -> String {
        match &self.outcome {
            Ok(()) => format!("PASS {}", self.name),
            Err(why) => format!("FAIL {}: {why}", self.name),
        }
    }
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(), String>) -> Check {
    Check { name, outcome: f() }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn shapes(n: usize, psi: &BidProfile) -> Vec<BidProfile> {
    let from = |f: &dyn Fn(usize) -> i64| {
        BidProfile::new((1..=n).map(|i| Rational::from_int(f(i))).collect()).unwrap()
    };
    vec![
        psi.clone(),
        from(&|_| 1),
        from(&|i| (i * i) as i64),
        from(&|i| if i <= n / 2 { 0 } else { 1 }),
        from(&|i| 1 << i.min(40)),
    ]
}

pub fn run(n: usize, ratio: &Rational) -> Result<Vec<Check>, Error> {
    let inst = AuctionInstance::normalized(n, ratio.clone())?;
    let eq = equilibrium(&inst)?;
    let psi = optimal_bid_set(&inst)?;
    let mut out = Vec::new();

    out.push(check("spectrum-identities", || {
        let mut k0 = None;
        for ell in 1..=n {
            let s = spectrum(ratio, ell).map_err(err)?;
            let l = Rational::from_usize(ell);
            let tri = Rational::from_usize(ell * (ell + 1));
            let k = Rational::from_usize(s.k);
            let two = Rational::from_int(2);
            let via_d = &k
                + &two * Rational::from_usize(s.d) / &l
                + &two * Rational::from_usize(s.h) / &tri;
            let via_dp = &k
                + &two * Rational::from_usize(s.d_prime) / (&l + Rational::one())
                + &two * Rational::from_usize(s.h_prime) / &tri;
            if via_d != s.r_ell || via_dp != s.r_ell {
                return Err(format!(
                    "ℓ = {ell}: decomposition does not sum to R_ℓ = {}",
                    s.r_ell
                ));
            }
            if ratio != &(&s.r_ell + &two * &s.delta / &tri)
                || !s.delta.is_positive()
                || s.delta > Rational::one()
            {
                return Err(format!("ℓ = {ell}: δ = {} out of range", s.delta));
            }
            if *k0.get_or_insert(s.k) != s.k {
                return Err(format!("k changes at ℓ = {ell}"));
            }
            if ell < n && spectrum(ratio, ell + 1).map_err(err)?.d != s.d_prime {
                return Err(format!("d at ℓ+1 differs from d′ at ℓ = {ell}"));
            }
        }
        Ok(())
    }));

    out.push(check("psi-structure", || psi.validate().map_err(err)));

    out.push(check("constructor-sweep", || {
        for p in shapes(n, &psi.bids) {
            for ell in 1..=n {
                for d in 0..=ell / 2 + 1 {
                    build_i1(ell, d, &p).map_err(err)?;
                    if ell < n {
                        build_i5(ell, d, &p).map_err(err)?;
                    }
                }
                for h in 0..=ell.div_ceil(2) {
                    build_i2(ell, h, &p).map_err(err)?;
                }
                for k in 1..=2 {
                    for h in 0..=ell {
                        build_i3(ell, k, h, &p).map_err(err)?;
                    }
                }
                if ell == n {
                    for d in 1..=ell / 2 + 1 {
                        for h in 0..=ell {
                            build_i4(ell, d, h, &p).map_err(err)?;
                        }
                    }
                }
                let s = spectrum(ratio, ell).map_err(err)?;
                if ell < n && s.k >= 1 && s.h_prime >= 1 {
                    build_j_sets(ell, &p, &s).map_err(err)?;
                }
            }
        }
        Ok(())
    }));

    out.push(check("best-response-against-psi", || {
        let rep = best_response(&psi.bids, ratio).map_err(err)?;
        if rep.achieved < rep.guarantee {
            return Err(format!(
                "achieved {} < guarantee {}",
                rep.achieved, rep.guarantee
            ));
        }
        if eq.branch == Branch::Proportional && rep.achieved != eq.value {
            return Err(format!(
                "achieved {} ≠ equilibrium {}",
                rep.achieved, eq.value
            ));
        }
        Ok(())
    }));

    if n <= DEFAULT_ORACLE_CAP {
        out.push(check("oracle-against-psi", || {
            let best = threshold_best_response(&psi.bids, ratio, None)
                .map_err(err)?
                .value;
            match eq.branch {
                Branch::Proportional | Branch::BelowRange | Branch::AboveRange
                    if best != eq.value =>
                {
                    Err(format!("oracle {best} ≠ equilibrium {}", eq.value))
                }
                _ if best < eq.value => Err(format!("oracle {best} < equilibrium {}", eq.value)),
                _ => Ok(()),
            }
        }));
    }
    Ok(out)
}
