//! The disadvantaged bidder's optimal bid set `Ψ`.
//!
//! `Ψ` is built from up to three blocks: zero bids, a proportional block
//! `2iβ/(ℓ(ℓ+1))` for `i = 1..ℓ`, and unbeatable bids exceeding the
//! adversary's whole budget. The outer regimes `R ≤ 1/n` and `R > n` use a
//! uniform split `{β/n}^n`.

use alloc::format;
use alloc::vec::Vec;

use crate::bids::BidProfile;
use crate::equilibrium::{ell_one, ell_two, AuctionInstance, Branch, Fidelity};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiConstruction {
    pub instance: AuctionInstance,
    pub bids: BidProfile,
    pub zero_count: usize,
    pub proportional_count: usize,
    pub unbeatable_count: usize,
    /// Bids of the uniform split `β/n` that are not unbeatable (`R = 1/n`
    /// and `R > n`).
    pub uniform_count: usize,
    pub branch: Branch,
    pub fidelity: Fidelity,
}

/// Builds `Ψ` for `inst` in a single pass.
pub fn optimal_bid_set(inst: &AuctionInstance) -> Result<PsiConstruction> {
    let n = inst.n;
    let beta = &inst.beta;
    let budget = inst.adversary_budget();
    let branch = inst.regime();
    let mut out = PsiConstruction {
        instance: inst.clone(),
        bids: BidProfile::from_sorted_unchecked(Vec::new(), Rational::zero()),
        zero_count: 0,
        proportional_count: 0,
        unbeatable_count: 0,
        uniform_count: 0,
        branch,
        fidelity: branch.fidelity(),
    };
    let mut sorted = Vec::with_capacity(n);
    match branch {
        Branch::BelowRange | Branch::AtLowerBoundary | Branch::AboveRange => {
            let share = beta / Rational::from_usize(n);
            if share > budget {
                out.unbeatable_count = n;
            } else {
                out.uniform_count = n;
            }
            sorted.resize(n, share);
        }
        Branch::ZerosPlusUnbeatable => {
            let zeros = ell_one(n, &inst.ratio)?;
            let big = beta / Rational::from_usize(n - zeros);
            if big <= budget {
                return Err(Error::invariant(
                    "psi-unbeatable",
                    format!("block bid {big} does not exceed the adversary budget {budget}"),
                ));
            }
            sorted.resize(zeros, Rational::zero());
            sorted.resize(n, big);
            out.zero_count = zeros;
            out.unbeatable_count = n - zeros;
        }
        Branch::Proportional => {
            let ell = ell_two(n, &inst.ratio)?;
            let unit = Rational::from_int(2) * beta / Rational::from_usize(ell * (ell + 1));
            sorted.resize(n - ell, Rational::zero());
            sorted.extend((1..=ell).map(|i| unit.mul_usize(i)));
            out.zero_count = n - ell;
            out.proportional_count = ell;
        }
    }
    out.bids = BidProfile::from_sorted_unchecked(sorted, beta.clone());
    Ok(out)
}

impl PsiConstruction {
    /// The proportional block, ascending.
    pub fn proportional_part(&self) -> &[Rational] {
        let s = self.bids.sorted();
        &s[self.zero_count..self.zero_count + self.proportional_count]
    }

    /// Checks the construction's structural invariants.
    pub fn validate(&self) -> Result<()> {
        let inst = &self.instance;
        let n = inst.n;
        let counts =
            self.zero_count + self.proportional_count + self.unbeatable_count + self.uniform_count;
        let fail = |detail: alloc::string::String| Err(Error::invariant("psi", detail));
        if counts != n || self.bids.len() != n {
            return fail(format!(
                "block sizes {counts} / {} do not match n = {n}",
                self.bids.len()
            ));
        }
        if self.bids.total() > &inst.beta {
            return fail(format!(
                "total {} exceeds budget {}",
                self.bids.total(),
                inst.beta
            ));
        }
        if self.proportional_count + self.unbeatable_count + self.uniform_count > 0
            && self.bids.total() != &inst.beta
        {
            return fail(format!(
                "total {} does not use the budget {}",
                self.bids.total(),
                inst.beta
            ));
        }
        let budget = inst.adversary_budget();
        let s = self.bids.sorted();
        if s[..self.zero_count].iter().any(|b| !b.is_zero()) {
            return fail("nonzero bid in the zero block".into());
        }
        if self.unbeatable_count > 0 && s[n - self.unbeatable_count..].iter().any(|b| b <= &budget)
        {
            return fail("beatable bid in the unbeatable block".into());
        }
        let prop = self.proportional_part();
        if let Some(first) = prop.first() {
            for (i, b) in prop.iter().enumerate() {
                if b != &(first * Rational::from_usize(i + 1)) {
                    return fail(format!(
                        "bid {b} breaks proportionality at position {}",
                        i + 1
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;

    fn psi(n: usize, r: Rational) -> PsiConstruction {
        let c = optimal_bid_set(&AuctionInstance::normalized(n, r).unwrap()).unwrap();
        c.validate().unwrap();
        c
    }

    #[test]
    fn psi_examples() {
        let c = psi(4, rat(1, 1));
        assert_eq!(
            c.bids.sorted(),
            &[rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10)]
        );
        assert_eq!(c.proportional_count, 4);

        let c = psi(5, rat(2, 1));
        assert_eq!(
            c.bids.sorted(),
            &[rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 3), rat(2, 3)]
        );
        assert_eq!(c.zero_count, 3);

        let c = psi(10, rat(3, 20));
        let mut expect = vec![Rational::zero(); 7];
        expect.extend(vec![rat(1, 3); 3]);
        assert_eq!(c.bids.sorted(), expect.as_slice());
        assert_eq!((c.unbeatable_count, c.fidelity), (3, Fidelity::PaperStated));

        let c = psi(3, rat(1, 4));
        assert_eq!(c.bids.sorted(), &[rat(1, 3), rat(1, 3), rat(1, 3)]);
        assert_eq!((c.unbeatable_count, c.fidelity), (3, Fidelity::Proved));
    }

    #[test]
    fn psi_edge_regimes() {
        let c = psi(4, rat(1, 4));
        assert_eq!((c.uniform_count, c.fidelity), (4, Fidelity::PaperStated));
        let c = psi(3, rat(7, 2));
        assert_eq!((c.uniform_count, c.branch), (3, Branch::AboveRange));
        let beta = rat(5, 2);
        let c =
            optimal_bid_set(&AuctionInstance::new(4, beta.clone(), rat(1, 1)).unwrap()).unwrap();
        c.validate().unwrap();
        assert_eq!(c.bids.total(), &beta);
        assert_eq!(c.bids.sorted()[0], rat(1, 4));
    }

    #[test]
    fn psi_grid_is_feasible_and_proportional() {
        let mut points = 0;
        for n in 1..=20usize {
            for (p, q) in [
                (1, 40),
                (1, 20),
                (1, 10),
                (1, 7),
                (1, 5),
                (1, 3),
                (1, 2),
                (2, 3),
                (1, 1),
                (3, 2),
                (2, 1),
                (5, 2),
                (4, 1),
                (10, 1),
            ] {
                psi(n, rat(p, q));
                points += 1;
            }
        }
        assert!(points >= 200);
    }

    #[test]
    fn large_construction_is_exact() {
        let n = 100_000;
        let c = psi(n, rat(1, 1));
        assert_eq!(c.proportional_count, n);
        assert_eq!(c.bids.total(), &Rational::one());
    }
}
