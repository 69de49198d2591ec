//! Closed-form equilibrium quantities.
//!
//! `R` is always the adversary's budget divided by the disadvantaged
//! bidder's budget `β`; `n` is the number of objects.

use alloc::format;
use core::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::{integral_floor, strict_multiple_floor, Rational};

/// An auction between an adversary and a disadvantaged bidder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuctionInstance {
    pub n: usize,
    /// Budget of the disadvantaged bidder.
    pub beta: Rational,
    /// Adversary budget over `beta`.
    pub ratio: Rational,
}

impl AuctionInstance {
    pub fn new(n: usize, beta: Rational, ratio: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        if !beta.is_positive() {
            return Err(Error::Domain(format!(
                "budget must be positive, got {beta}"
            )));
        }
        if !ratio.is_positive() {
            return Err(Error::Domain(format!(
                "ratio must be positive, got {ratio}"
            )));
        }
        Ok(AuctionInstance { n, beta, ratio })
    }

    /// Instance with `β = 1`.
    pub fn normalized(n: usize, ratio: Rational) -> Result<Self> {
        Self::new(n, Rational::one(), ratio)
    }

    pub fn adversary_budget(&self) -> Rational {
        &self.beta * &self.ratio
    }

    pub fn regime(&self) -> Branch {
        Branch::classify(self.n, &self.ratio)
    }
}

/// The budget-ratio regime an instance falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `R < 1/n`.
    BelowRange,
    /// `R = 1/n`.
    AtLowerBoundary,
    /// `1/n < R ≤ 2/(n+1)`.
    ZerosPlusUnbeatable,
    /// `2/(n+1) < R ≤ n`.
    Proportional,
    /// `R > n`.
    AboveRange,
}

impl Branch {
    /// Boundaries are strict on the left and inclusive on the right.
    pub fn classify(n: usize, ratio: &Rational) -> Branch {
        let lower = Rational::new(1, n as i64);
        let middle = Rational::new(2, n as i64 + 1);
        let upper = Rational::from_usize(n);
        if ratio < &lower {
            Branch::BelowRange
        } else if ratio == &lower {
            Branch::AtLowerBoundary
        } else if ratio <= &middle {
            Branch::ZerosPlusUnbeatable
        } else if ratio <= &upper {
            Branch::Proportional
        } else {
            Branch::AboveRange
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::BelowRange => "belowRange",
            Branch::AtLowerBoundary => "atLowerBoundary",
            Branch::ZerosPlusUnbeatable => "zerosPlusUnbeatable",
            Branch::Proportional => "proportional",
            Branch::AboveRange => "aboveRange",
        }
    }

    /// Whether the equilibrium value in this regime carries a proof.
    pub fn fidelity(self) -> Fidelity {
        match self {
            Branch::AtLowerBoundary | Branch::ZerosPlusUnbeatable => Fidelity::PaperStated,
            _ => Fidelity::Proved,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Separates values backed by a complete argument from values that are
/// reported as published but not independently established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fidelity {
    Proved,
    PaperStated,
}

impl Fidelity {
    pub fn as_str(self) -> &'static str {
        match self {
            Fidelity::Proved => "proved",
            Fidelity::PaperStated => "paperStated",
        }
    }
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumResult {
    /// Expected number of objects the adversary wins.
    pub value: Rational,
    pub branch: Branch,
    pub fidelity: Fidelity,
}

fn triangle(ell: usize) -> Rational {
    Rational::from_usize(ell * (ell + 1) / 2)
}

/// `R_ℓ`: the largest multiple of `2/(ℓ(ℓ+1))` strictly below `R`.
pub fn r_ell(ratio: &Rational, ell: usize) -> Result<Rational> {
    if ell < 1 {
        return Err(Error::Domain("ℓ must be at least 1".into()));
    }
    strict_multiple_floor(ratio, &triangle(ell).recip())
}

/// `f(ℓ) = n − ℓ + ℓ(ℓ+1)·R_ℓ / (2n)`.
pub fn f_value(n: usize, ratio: &Rational, ell: usize) -> Result<Rational> {
    if ell < 1 || ell > n {
        return Err(Error::Domain(format!("ℓ = {ell} outside 1..={n}")));
    }
    let r = r_ell(ratio, ell)?;
    Ok(Rational::from_usize(n - ell) + triangle(ell) * r / Rational::from_usize(n))
}

/// `ℓ1`: the largest integer strictly below `2n − 2/R + 1`.
/// Valid for `1/n < R ≤ 2/(n+1)`.
pub fn ell_one(n: usize, ratio: &Rational) -> Result<usize> {
    if Branch::classify(n, ratio) != Branch::ZerosPlusUnbeatable {
        return Err(Error::Domain(format!(
            "ℓ1 needs 1/{n} < R ≤ 2/{}, got R = {ratio}",
            n + 1
        )));
    }
    let arg = Rational::from_usize(2 * n) - Rational::from_int(2) / ratio + Rational::one();
    let v = integral_floor(&arg)?;
    v.to_usize()
        .ok_or_else(|| Error::invariant("ell_one", format!("non-integral ℓ1 {v}")))
}

/// `ℓ2 = min(n, ⌊n/R⌋)` with the ordinary floor. Valid for `2/(n+1) < R ≤ n`.
pub fn ell_two(n: usize, ratio: &Rational) -> Result<usize> {
    if Branch::classify(n, ratio) != Branch::Proportional {
        return Err(Error::Domain(format!(
            "ℓ2 needs 2/{} < R ≤ {n}, got R = {ratio}",
            n + 1
        )));
    }
    let q = (Rational::from_usize(n) / ratio).floor_int();
    Ok(q.to_usize().map_or(n, |q| q.min(n)))
}

/// The min-max expected number of objects won by the adversary.
pub fn equilibrium(inst: &AuctionInstance) -> Result<EquilibriumResult> {
    let n = inst.n;
    let ratio = &inst.ratio;
    let branch = inst.regime();
    let value = match branch {
        Branch::BelowRange => Rational::zero(),
        Branch::AtLowerBoundary => Rational::new(1, 2).min(Rational::new(1, n as i64)),
        Branch::ZerosPlusUnbeatable => {
            Rational::from_usize(ell_one(n, ratio)?) / Rational::from_usize(n)
        }
        Branch::Proportional => f_value(n, ratio, ell_two(n, ratio)?)?,
        Branch::AboveRange => Rational::from_usize(n),
    };
    Ok(EquilibriumResult {
        value,
        branch,
        fidelity: branch.fidelity(),
    })
}

/// Decomposition of `R_ℓ` into whole, pair and remainder parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumDecomposition {
    pub ell: usize,
    pub r_ell: Rational,
    /// `(R − R_ℓ)·ℓ(ℓ+1)/2`, in `(0, 1]`.
    pub delta: Rational,
    pub k: usize,
    pub d: usize,
    pub d_prime: usize,
    pub h: usize,
    pub h_prime: usize,
}

fn to_count(v: &Rational, what: &str) -> Result<usize> {
    v.to_integer().and_then(|i| i.to_usize()).ok_or_else(|| {
        Error::invariant(
            "spectrum",
            format!("{what} = {v} is not a small nonnegative integer"),
        )
    })
}

/// Computes `R_ℓ, δ_ℓ, k, d, d′, h, h′` with
/// `R_ℓ = k + 2d/ℓ + 2h/(ℓ(ℓ+1)) = k + 2d′/(ℓ+1) + 2h′/(ℓ(ℓ+1))`.
pub fn spectrum(ratio: &Rational, ell: usize) -> Result<SpectrumDecomposition> {
    if !ratio.is_positive() {
        return Err(Error::Domain(format!(
            "ratio must be positive, got {ratio}"
        )));
    }
    let r = r_ell(ratio, ell)?;
    let tri = triangle(ell);
    let l = Rational::from_usize(ell);
    let l1 = Rational::from_usize(ell + 1);
    let two = Rational::from_int(2);

    let delta = (ratio - &r) * &tri;
    let k = r.floor();
    let frac = &r - &k;
    let d = (&frac * &l / &two).floor();
    let d_prime = (&frac * &l1 / &two).floor();
    let h = (&frac - &two * &d / &l) * &tri;
    let h_prime = (&frac - &two * &d_prime / &l1) * &tri;

    let out = SpectrumDecomposition {
        ell,
        k: to_count(&k, "k")?,
        d: to_count(&d, "d")?,
        d_prime: to_count(&d_prime, "d'")?,
        h: to_count(&h, "h")?,
        h_prime: to_count(&h_prime, "h'")?,
        r_ell: r,
        delta,
    };
    debug_assert!(out.h < ell + 1 && out.h_prime < ell);
    Ok(out)
}

/// `(E_A, E_D)`: each side's expected winnings over its budget-proportional share.
pub fn effective_ratios(inst: &AuctionInstance) -> Result<(Rational, Rational)> {
    let eq = equilibrium(inst)?.value;
    Ok(ratios_from_value(inst.n, &inst.ratio, &eq))
}

pub(crate) fn ratios_from_value(n: usize, ratio: &Rational, eq: &Rational) -> (Rational, Rational) {
    let n_r = Rational::from_usize(n);
    let r1 = ratio + Rational::one();
    let e_a = eq * &r1 / (&n_r * ratio);
    let e_d = (&n_r - eq) * &r1 / &n_r;
    (e_a, e_d)
}

/// Limits of `(E_A, E_D)` as `n → ∞`.
pub fn limit_ratios(ratio: &Rational) -> Result<(Rational, Rational)> {
    if !ratio.is_positive() {
        return Err(Error::Domain(format!(
            "ratio must be positive, got {ratio}"
        )));
    }
    let one = Rational::one();
    let two = Rational::from_int(2);
    let r1 = ratio + &one;
    if ratio >= &one {
        let e_a = (&two * ratio - &one) * &r1 / (&two * ratio * ratio);
        let e_d = &r1 / (&two * ratio);
        Ok((e_a, e_d))
    } else {
        let e_a = &r1 / &two;
        let e_d = (&two - ratio) * &r1 / &two;
        Ok((e_a, e_d))
    }
}
