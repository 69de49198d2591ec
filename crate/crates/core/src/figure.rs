//! Tables of effective winning ratios over `(n, R)`.

use alloc::format;
use alloc::vec::Vec;

use crate::equilibrium::{equilibrium, limit_ratios, ratios_from_value, AuctionInstance, Fidelity};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub n: usize,
    pub ratio: Rational,
    pub equilibrium: Rational,
    pub e_a: Rational,
    pub e_d: Rational,
    pub fidelity: Fidelity,
}

pub fn ratio_row(n: usize, ratio: &Rational) -> Result<RatioRow> {
    let eq = equilibrium(&AuctionInstance::normalized(n, ratio.clone())?)?;
    let (e_a, e_d) = ratios_from_value(n, ratio, &eq.value);
    Ok(RatioRow {
        n,
        ratio: ratio.clone(),
        equilibrium: eq.value,
        e_a,
        e_d,
        fidelity: eq.fidelity,
    })
}

/// One row per `(n, R)` with `n = 1..=n_max`, grouped by `R` in input order.
pub fn figure_grid(n_max: usize, ratios: &[Rational]) -> Result<Vec<RatioRow>> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(n_max * ratios.len());
    for r in ratios {
        for n in 1..=n_max {
            rows.push(ratio_row(n, r)?);
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub e_d: Rational,
    /// `|E_D(n, R) − lim E_D(R)|`.
    pub limit_gap: Rational,
}

pub fn convergence_table(ratio: &Rational, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let (_, limit) = limit_ratios(ratio)?;
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::Domain(format!("n must be positive, got {n}")));
            }
            let row = ratio_row(n, ratio)?;
            let limit_gap = (&row.e_d - &limit).abs();
            Ok(ConvergenceRow {
                n,
                e_d: row.e_d,
                limit_gap,
            })
        })
        .collect()
}
