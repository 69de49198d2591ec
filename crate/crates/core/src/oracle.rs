//! Ground truth for small instances: an exact adversary best response over
//! threshold-form bid sets, a grid min-max over defender bid sets, and a
//! seeded Monte Carlo run of the randomized auction itself.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bids::{half_units, BidProfile};
use crate::ellset::choose_delta;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_ORACLE_CAP: usize = 10;
pub const DEFAULT_GRID_MAX_N: usize = 4;
pub const DEFAULT_GRID_MAX_DENOMINATOR: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LevelMode {
    /// Bid exactly the base value.
    TieAt,
    /// Bid infinitesimally above the base value.
    JustAbove,
}

/// One adversary bid shape against a fixed defender profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdLevel {
    pub base: Rational,
    pub mode: LevelMode,
    /// Expected objects won per use.
    pub win_weight: Rational,
    units: usize,
}

impl ThresholdLevel {
    fn new(base: Rational, mode: LevelMode, defender: &BidProfile) -> Self {
        let units = match mode {
            LevelMode::TieAt => half_units(&base, defender),
            LevelMode::JustAbove => 2 * (defender.count_below(&base) + defender.count_equal(&base)),
        };
        let win_weight = Rational::from_usize(units) / Rational::from_usize(2 * defender.len());
        ThresholdLevel {
            base,
            mode,
            win_weight,
            units,
        }
    }
}

/// `tieAt(0)` plus `tieAt(v)` and `justAbove(v)` for each distinct defender value `v`.
pub fn threshold_levels(defender: &BidProfile) -> Vec<ThresholdLevel> {
    let mut levels = Vec::new();
    let values = defender.distinct();
    if values.first().is_none_or(|v| !v.is_zero()) {
        levels.push(ThresholdLevel::new(
            Rational::zero(),
            LevelMode::TieAt,
            defender,
        ));
    }
    for v in values {
        levels.push(ThresholdLevel::new(v.clone(), LevelMode::TieAt, defender));
        levels.push(ThresholdLevel::new(v, LevelMode::JustAbove, defender));
    }
    levels
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Rational,
    pub witness: BidProfile,
    /// The chosen levels, one per witness bid.
    pub levels: Vec<ThresholdLevel>,
    pub nodes_explored: u64,
}

/// Exact best response of an adversary with budget `R·β`, `β` the defender total.
pub fn threshold_best_response(
    defender: &BidProfile,
    ratio: &Rational,
    cap: Option<usize>,
) -> Result<OracleResult> {
    if !ratio.is_positive() {
        return Err(Error::Domain(format!("R must be positive, got {ratio}")));
    }
    threshold_best_response_with_budget(defender, &(ratio * defender.total()), cap)
}

/// Exact best response for an explicit adversary budget.
pub fn threshold_best_response_with_budget(
    defender: &BidProfile,
    budget: &Rational,
    cap: Option<usize>,
) -> Result<OracleResult> {
    let n = defender.len();
    let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
    if n > cap {
        return Err(Error::Capacity(format!(
            "oracle limited to n ≤ {cap}, got n = {n}"
        )));
    }
    if budget.is_negative() {
        return Err(Error::Domain(format!("negative budget {budget}")));
    }
    let levels = threshold_levels(defender);
    let max_units = 2 * n * n;
    let width = max_units + 1;
    // best[flag][c * width + u]: least base total for `c` bids worth `u`
    // half-units; flag 1 once any justAbove level is used.
    let mut best: [Vec<Option<Rational>>; 2] =
        [vec![None; (n + 1) * width], vec![None; (n + 1) * width]];
    best[0][0] = Some(Rational::zero());
    let mut nodes = 0u64;
    for level in &levels {
        let to = usize::from(level.mode == LevelMode::JustAbove);
        for c in 1..=n {
            for u in level.units..=max_units {
                let prev = (c - 1) * width + u - level.units;
                for from in 0..2 {
                    let Some(cost) = &best[from][prev] else {
                        continue;
                    };
                    let cost = cost + &level.base;
                    let flag = from.max(to);
                    let slot = &mut best[flag][c * width + u];
                    nodes += 1;
                    if slot.as_ref().is_none_or(|s| &cost < s) {
                        *slot = Some(cost);
                    }
                }
            }
        }
    }
    let feasible = |flag: usize, u: usize| match &best[flag][n * width + u] {
        Some(c) if flag == 0 => c <= budget,
        Some(c) => c < budget,
        None => false,
    };
    let (units, flag) = (0..=max_units)
        .rev()
        .find_map(|u| (0..2).find(|&f| feasible(f, u)).map(|f| (u, f)))
        .ok_or_else(|| Error::invariant("oracle", "no feasible level selection"))?;

    let mut chosen = Vec::with_capacity(n);
    let (mut c, mut u, mut f) = (n, units, flag);
    while c > 0 {
        let target = best[f][c * width + u].clone().unwrap();
        let step = levels.iter().find_map(|level| {
            let is_above = level.mode == LevelMode::JustAbove;
            if level.units > u || (is_above && f == 0) {
                return None;
            }
            let froms: &[usize] = if is_above { &[0, 1] } else { &[f] };
            froms.iter().find_map(|&from| {
                let prev = best[from][(c - 1) * width + u - level.units].as_ref()?;
                (prev + &level.base == target).then_some((level, from))
            })
        });
        let (level, from) =
            step.ok_or_else(|| Error::invariant("oracle", "witness reconstruction failed"))?;
        chosen.push(level.clone());
        u -= level.units;
        f = from;
        c -= 1;
    }

    let spent: Rational = chosen.iter().map(|l| &l.base).sum();
    let shifted: Vec<Rational> = chosen
        .iter()
        .filter(|l| l.mode == LevelMode::JustAbove)
        .map(|l| l.base.clone())
        .collect();
    let delta = if shifted.is_empty() {
        Rational::zero()
    } else {
        choose_delta(&(budget - &spent), &shifted, defender)?
    };
    let bids = chosen
        .iter()
        .map(|l| match l.mode {
            LevelMode::TieAt => l.base.clone(),
            LevelMode::JustAbove => &l.base + &delta,
        })
        .collect();
    Ok(OracleResult {
        value: Rational::from_usize(units) / Rational::from_usize(2 * n),
        witness: BidProfile::new(bids)?,
        levels: chosen,
        nodes_explored: nodes,
    })
}

/// Minimum over defender multisets on the grid `{0, 1/g, …, 1}` with total
/// at most 1 of the exact adversary best response at budget `R`. Ties go to
/// the lexicographically smallest ascending bid vector.
pub fn grid_minmax(n: usize, ratio: &Rational, grid: usize) -> Result<(Rational, BidProfile)> {
    grid_minmax_with_limits(
        n,
        ratio,
        grid,
        DEFAULT_GRID_MAX_N,
        DEFAULT_GRID_MAX_DENOMINATOR,
    )
}

pub fn grid_minmax_with_limits(
    n: usize,
    ratio: &Rational,
    grid: usize,
    max_n: usize,
    max_grid: usize,
) -> Result<(Rational, BidProfile)> {
    if n == 0 || grid == 0 {
        return Err(Error::Domain(
            "n and the grid denominator must be positive".into(),
        ));
    }
    if !ratio.is_positive() {
        return Err(Error::Domain(format!("R must be positive, got {ratio}")));
    }
    if n > max_n || grid > max_grid {
        return Err(Error::Capacity(format!(
            "grid search limited to n ≤ {max_n}, g ≤ {max_grid}; got n = {n}, g = {grid}"
        )));
    }
    let step = Rational::from_usize(grid).recip();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut current = vec![0usize; n];
    loop {
        let profile = BidProfile::new(
            current
                .iter()
                .map(|&a| &step * Rational::from_usize(a))
                .collect(),
        )?;
        let value = threshold_best_response_with_budget(&profile, ratio, Some(n))?.value;
        if best.as_ref().is_none_or(|(b, _)| &value < b) {
            best = Some((value, current.clone()));
        }
        if !next_multiset(&mut current, grid) {
            break;
        }
    }
    let (value, grid_point) = best.unwrap();
    let argmin = BidProfile::new(
        grid_point
            .into_iter()
            .map(|a| &step * Rational::from_usize(a))
            .collect(),
    )?;
    Ok((value, argmin))
}

/// Advances a nondecreasing sequence with sum ≤ `total` in lexicographic order.
fn next_multiset(seq: &mut [usize], total: usize) -> bool {
    let n = seq.len();
    for i in (0..n).rev() {
        let candidate = seq[i] + 1;
        let prefix: usize = seq[..i].iter().sum();
        if prefix + candidate * (n - i) <= total {
            for s in &mut seq[i..] {
                *s = candidate;
            }
            return true;
        }
    }
    false
}

/// Sample statistics of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub mean: Rational,
    /// Unbiased sample variance of the per-trial object counts.
    pub variance: Rational,
    pub stderr: f64,
}

impl McEstimate {
    /// `|mean − exact| ≤ k·stderr`, decided without rounding.
    pub fn within_sigmas(&self, exact: &Rational, k: u32) -> bool {
        let gap = &self.mean - exact;
        let k2 = Rational::from_usize((k * k) as usize);
        &gap * &gap <= k2 * &self.variance / Rational::from_bigint(BigInt::from(self.trials))
    }
}

/// Plays the auction `trials` times: both bid sets are assigned to objects
/// by independent uniform permutations and ties are split by a fair coin.
pub fn mc_simulate(
    adversary: &BidProfile,
    defender: &BidProfile,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let n = defender.len();
    if adversary.len() != n {
        return Err(Error::Validation(format!(
            "bid sets differ in size: {} vs {n}",
            adversary.len()
        )));
    }
    if trials == 0 {
        return Err(Error::Validation("trials must be positive".into()));
    }
    let mut values: Vec<&Rational> = adversary.bids().iter().chain(defender.bids()).collect();
    values.sort();
    values.dedup();
    let rank = |v: &Rational| values.binary_search(&v).unwrap() as u32;
    let mut a: Vec<u32> = adversary.bids().iter().map(rank).collect();
    let mut d: Vec<u32> = defender.bids().iter().map(rank).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0u128, 0u128);
    for _ in 0..trials {
        a.shuffle(&mut rng);
        d.shuffle(&mut rng);
        let mut won = 0u128;
        for (x, y) in a.iter().zip(&d) {
            if x > y || (x == y && rng.random::<bool>()) {
                won += 1;
            }
        }
        sum += won;
        sum_sq += won * won;
    }
    let t = Rational::from_bigint(BigInt::from(trials));
    let s = Rational::from_bigint(BigInt::from(sum));
    let s2 = Rational::from_bigint(BigInt::from(sum_sq));
    let mean = &s / &t;
    let variance = if trials > 1 {
        (s2 - &s * &s / &t) / (&t - Rational::one())
    } else {
        Rational::zero()
    };
    let stderr = libm::sqrt(variance.to_f64() / trials as f64);
    Ok(McEstimate {
        trials,
        mean,
        variance,
        stderr,
    })
}
