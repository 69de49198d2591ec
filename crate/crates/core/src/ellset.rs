//! Index multisets over the top of a defender profile and the constructions
//! that turn them into budget-efficient adversary bid sets.
//!
//! An ℓ-set is a multiset over `{0, …, ℓ}`; index `i` refers to the defender
//! bid `x_i = β_{n−ℓ+i}`, so `1..=ℓ` are the `ℓ` largest bids and `0` is the
//! bid just below them. An ℓ-set is an `(ℓ, q)`-set when its index sum is at
//! least `q·ℓ(ℓ+1)/2` while its bid sum is at most `q·t_ℓ`.
//!
//! Every constructor checks its own postcondition and returns
//! [`Error::Invariant`] tagged with the case that produced the set.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::bids::BidProfile;
use crate::equilibrium::{r_ell, SpectrumDecomposition};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A multiset over `{0, …, ℓ}`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EllSet {
    ell: usize,
    indices: Vec<usize>,
}

impl EllSet {
    pub fn new(ell: usize, mut indices: Vec<usize>) -> Result<Self> {
        if let Some(bad) = indices.iter().find(|&&i| i > ell) {
            return Err(Error::Domain(format!("index {bad} outside 0..={ell}")));
        }
        indices.sort_unstable();
        Ok(EllSet { ell, indices })
    }

    pub fn empty(ell: usize) -> Self {
        EllSet {
            ell,
            indices: Vec::new(),
        }
    }

    /// `{1, …, ℓ}` repeated `times` times.
    pub fn full(ell: usize, times: usize) -> Self {
        let mut indices = Vec::with_capacity(ell * times);
        for i in 1..=ell {
            indices.extend(core::iter::repeat_n(i, times));
        }
        EllSet { ell, indices }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn count(&self, i: usize) -> usize {
        self.indices.iter().filter(|&&j| j == i).count()
    }

    /// Multiset union.
    pub fn union(mut self, other: &EllSet) -> EllSet {
        debug_assert_eq!(self.ell, other.ell);
        self.indices.extend_from_slice(&other.indices);
        self.indices.sort_unstable();
        self
    }

    fn insert(&mut self, i: usize) {
        let at = self.indices.partition_point(|&j| j < i);
        self.indices.insert(at, i);
    }

    /// Removes one copy of `i`; `false` if absent.
    fn remove_one(&mut self, i: usize) -> bool {
        match self.indices.binary_search(&i) {
            Ok(at) => {
                self.indices.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    fn index_sum_usize(&self) -> usize {
        self.indices.iter().sum()
    }
}

impl fmt::Debug for EllSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.indices, self.ell)
    }
}

/// `Σ I`, counting multiplicity.
pub fn index_sum(set: &EllSet) -> Rational {
    Rational::from_usize(set.index_sum_usize())
}

/// `Σ_{i∈I} β_{n−ℓ+i}`, with `β_0 = 0`.
pub fn bid_sum(set: &EllSet, profile: &BidProfile) -> Result<Rational> {
    let n = profile.len();
    let ell = set.ell;
    if ell > n {
        return Err(Error::Domain(format!("ℓ = {ell} exceeds n = {n}")));
    }
    Ok(set.indices.iter().map(|&i| profile.beta(n - ell + i)).sum())
}

/// The three conditions that make an ℓ-set convertible into an adversary bid set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyCondition {
    /// `|I| ≤ n`.
    Size,
    /// `Σ I ≥ R_ℓ·ℓ(ℓ+1)/2`.
    IndexSum,
    /// `β_Σ(I, ℓ) + (n − |I|)·β_{n−ℓ} < β·R`.
    Budget,
}

impl fmt::Display for PropertyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyCondition::Size => "P1",
            PropertyCondition::IndexSum => "P2",
            PropertyCondition::Budget => "P3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub ok: bool,
    /// First failing condition, if any.
    pub failing: Option<PropertyCondition>,
}

/// Cost `β_Σ(I, ℓ) + (n − |I|)·β_{n−ℓ}` of the adversary bid set an ℓ-set
/// describes, before the infinitesimal shift.
fn padded_cost(set: &EllSet, profile: &BidProfile) -> Result<Rational> {
    let n = profile.len();
    let pad = n.saturating_sub(set.len());
    Ok(bid_sum(set, profile)? + Rational::from_usize(pad) * profile.beta(n - set.ell))
}

/// Checks the size, index-sum and strict budget conditions. The defender
/// budget `β` is the profile total.
pub fn satisfies_property_p(
    set: &EllSet,
    profile: &BidProfile,
    ratio: &Rational,
) -> Result<PropertyCheck> {
    let n = profile.len();
    let fail = |c| {
        Ok(PropertyCheck {
            ok: false,
            failing: Some(c),
        })
    };
    if set.ell > n || set.ell == 0 {
        return Err(Error::Domain(format!("ℓ = {} outside 1..={n}", set.ell)));
    }
    if set.len() > n {
        return fail(PropertyCondition::Size);
    }
    let tri = Rational::from_usize(set.ell * (set.ell + 1) / 2);
    if index_sum(set) < r_ell(ratio, set.ell)? * tri {
        return fail(PropertyCondition::IndexSum);
    }
    if padded_cost(set, profile)? >= ratio * profile.total() {
        return fail(PropertyCondition::Budget);
    }
    Ok(PropertyCheck {
        ok: true,
        failing: None,
    })
}

/// Whether `set` is an `(ℓ, q)`-set for `profile`.
pub fn is_lq_set(set: &EllSet, profile: &BidProfile, q: &Rational) -> Result<bool> {
    let tri = Rational::from_usize(set.ell * (set.ell + 1) / 2);
    Ok(index_sum(set) >= q * tri && bid_sum(set, profile)? <= q * profile.top_sum(set.ell))
}

/// Derived quantities shared by the constructors: the top-`ℓ` view
/// `x_i = β_{n−ℓ+i}`, the linear reference `y(i) = 2i·t_ℓ/(ℓ(ℓ+1))`, and the
/// selectors `i0..i3`. Ties go to the smallest index.
#[derive(Clone, Debug)]
pub struct EllSetScratch {
    ell: usize,
    x: Vec<Rational>,
    t: Rational,
    unit: Rational,
    /// argmax over `1..=ℓ` of `x_i − y(i)`.
    pub i0: usize,
    /// argmin over `1..=ℓ` of `x_i + x_{ℓ+1−i}`.
    pub i1: usize,
    /// argmax over `1..=ℓ` of `x_i + x_{ℓ+1−i}`.
    pub i2: usize,
    /// argmax over `1..ℓ` of `x_i + x_{ℓ−i}`; absent when `ℓ = 1`.
    pub i3: Option<usize>,
}

fn argbest<F: Fn(usize) -> Rational>(
    range: impl Iterator<Item = usize>,
    key: F,
    maximize: bool,
) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for i in range {
        let v = key(i);
        let better = match &best {
            None => true,
            Some((_, b)) => {
                if maximize {
                    v > *b
                } else {
                    v < *b
                }
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

impl EllSetScratch {
    pub fn new(profile: &BidProfile, ell: usize) -> Result<Self> {
        let n = profile.len();
        if ell == 0 || ell > n {
            return Err(Error::Domain(format!("ℓ = {ell} outside 1..={n}")));
        }
        let x: Vec<Rational> = (0..=ell).map(|i| profile.beta(n - ell + i)).collect();
        let t = profile.top_sum(ell).clone();
        let unit = Rational::from_int(2) * &t / Rational::from_usize(ell * (ell + 1));
        let mut s = EllSetScratch {
            ell,
            x,
            t,
            unit,
            i0: 1,
            i1: 1,
            i2: 1,
            i3: None,
        };
        s.i0 = argbest(1..=ell, |i| &s.x[i] - s.y(i as i64), true).unwrap();
        s.i1 = argbest(1..=ell, |i| s.pair(i), false).unwrap();
        s.i2 = argbest(1..=ell, |i| s.pair(i), true).unwrap();
        s.i3 = argbest(1..ell, |i| &s.x[i] + &s.x[ell - i], true);
        Ok(s)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `x_i = β_{n−ℓ+i}` for `i` in `0..=ℓ`.
    pub fn x(&self, i: usize) -> &Rational {
        &self.x[i]
    }

    /// `t_ℓ`.
    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// `y(i) = 2i·t_ℓ/(ℓ(ℓ+1))`; defined for every integer `i`.
    pub fn y(&self, i: i64) -> Rational {
        &self.unit * Rational::from_int(i)
    }

    /// `x_i + x_{ℓ+1−i}` for `i` in `1..=ℓ`.
    pub fn pair(&self, i: usize) -> Rational {
        &self.x[i] + &self.x[self.ell + 1 - i]
    }

    fn in_range(&self, i: i64) -> bool {
        i >= 1 && i <= self.ell as i64
    }
}

fn check_lq(tag: &str, set: &EllSet, profile: &BidProfile, q: &Rational) -> Result<()> {
    if !is_lq_set(set, profile, q)? {
        let tri = Rational::from_usize(set.ell * (set.ell + 1) / 2);
        return Err(Error::invariant(
            tag,
            format!(
                "{set:?} is not an (ℓ, {q})-set: index sum {} vs {}, bid sum {} vs {}",
                index_sum(set),
                q * &tri,
                bid_sum(set, profile)?,
                q * profile.top_sum(set.ell)
            ),
        ));
    }
    Ok(())
}

fn check_size(tag: &str, set: &EllSet, lo: usize, hi: usize) -> Result<()> {
    if set.len() < lo || set.len() > hi {
        return Err(Error::invariant(
            tag,
            format!("{set:?} has size {} outside [{lo}, {hi}]", set.len()),
        ));
    }
    Ok(())
}

/// `L ∪ add − remove` as multisets over `L = {1..ℓ}` repeated `times`.
fn edit(tag: &str, mut base: EllSet, add: &[usize], remove: &[usize]) -> Result<EllSet> {
    for &a in add {
        if a > base.ell {
            return Err(Error::invariant(
                tag,
                format!("added index {a} outside 0..={}", base.ell),
            ));
        }
        base.insert(a);
    }
    for &r in remove {
        if !base.remove_one(r) {
            return Err(Error::invariant(
                tag,
                format!("index {r} not present in {base:?}"),
            ));
        }
    }
    Ok(base)
}

fn to_index(tag: &str, s: &EllSetScratch, i: i64) -> Result<usize> {
    if s.in_range(i) {
        Ok(i as usize)
    } else {
        Err(Error::invariant(
            tag,
            format!("index {i} outside 1..={}", s.ell),
        ))
    }
}

fn frac(p: usize, q: usize) -> Rational {
    Rational::from_usize(p) / Rational::from_usize(q)
}

// ---------------------------------------------------------------------------
// I1: pairs of complementary indices.

fn i1_raw(s: &EllSetScratch, d: usize) -> EllSet {
    let a = s.i1;
    let b = s.ell + 1 - s.i1;
    let mut indices = Vec::with_capacity(2 * d);
    for _ in 0..d {
        indices.push(a);
        indices.push(b);
    }
    indices.sort_unstable();
    EllSet {
        ell: s.ell,
        indices,
    }
}

/// An `(ℓ, 2d/ℓ)`-set of size exactly `2d` without index 0.
pub fn build_i1(ell: usize, d: usize, profile: &BidProfile) -> Result<EllSet> {
    let s = EllSetScratch::new(profile, ell)?;
    let set = i1_raw(&s, d);
    check_lq("I1", &set, profile, &frac(2 * d, ell))?;
    check_size("I1", &set, 2 * d, 2 * d)?;
    if set.count(0) > 0 {
        return Err(Error::invariant("I1", "contains index 0"));
    }
    Ok(set)
}

// ---------------------------------------------------------------------------
// I2: `L` with a deficit of `h` in the index sum.

fn i2_raw(s: &EllSetScratch, h: usize) -> Result<(EllSet, &'static str)> {
    let ell = s.ell;
    let full = || EllSet::full(ell, 1);
    if h == 0 {
        return Ok((full(), "I2:h=0"));
    }
    if 2 * h == ell + 1 {
        return Ok((i1_raw(s, (ell - 1) / 2), "I2:h=(l+1)/2"));
    }
    let i0 = s.i0;
    if i0 == h {
        return Ok((edit("I2:i0=h", full(), &[], &[h])?, "I2:i0=h"));
    }
    if i0 > h {
        return Ok((edit("I2:i0>h", full(), &[i0 - h], &[i0])?, "I2:i0>h"));
    }
    // 1 ≤ i0 < h < (ℓ+1)/2.
    let tag = "I2:i0<h";
    let (l, h_i, i0_i) = (ell as i64, h as i64, i0 as i64);
    let lo = to_index(tag, s, l - h_i)?;
    let hi = to_index(tag, s, l + 1 - h_i)?;
    let shifted_lo = to_index(tag, s, i0_i - 2 * h_i + l)?;
    let shifted_hi = to_index(tag, s, i0_i - 2 * h_i + l + 1)?;
    if i0 == lo || i0 == hi {
        return Err(Error::invariant(
            tag,
            format!("i0 = {i0} collides with ℓ−h or ℓ+1−h"),
        ));
    }
    if s.x(lo) >= &s.y(lo as i64) {
        let t = "I2:x[l-h]>=y";
        return Ok((edit(t, full(), &[shifted_lo], &[i0, lo])?, t));
    }
    if s.x(hi) >= &s.y(hi as i64) {
        let t = "I2:x[l+1-h]>=y";
        return Ok((edit(t, full(), &[shifted_hi], &[i0, hi])?, t));
    }
    if ell.is_multiple_of(2) {
        let t = "I2:even";
        let partner = ell + 1 - s.i2;
        return Ok((edit(t, full(), &[hi], &[s.i2, partner])?, t));
    }
    let t = "I2:odd";
    let i3 = s.i3.ok_or_else(|| Error::invariant(t, "no i3 for ℓ = 1"))?;
    let j: Vec<usize> = if &(s.x(i3) + s.x(ell - i3)) >= s.x(ell) {
        alloc::vec![i3, ell - i3]
    } else {
        alloc::vec![ell]
    };
    Ok((edit(t, full(), &[lo], &j)?, t))
}

/// An `(ℓ, 1 − 2h/(ℓ(ℓ+1)))`-set with `ℓ − 1 ≤ size ≤ ℓ`, for `0 ≤ h ≤ (ℓ+1)/2`.
pub fn build_i2(ell: usize, h: usize, profile: &BidProfile) -> Result<EllSet> {
    let s = EllSetScratch::new(profile, ell)?;
    i2_checked(&s, h, profile)
}

fn i2_q(ell: usize, h: usize) -> Rational {
    Rational::one() - frac(2 * h, ell * (ell + 1))
}

fn i2_checked(s: &EllSetScratch, h: usize, profile: &BidProfile) -> Result<EllSet> {
    let ell = s.ell;
    if 2 * h > ell + 1 {
        return Err(Error::Domain(format!(
            "I2 needs 0 ≤ h ≤ (ℓ+1)/2, got h = {h}, ℓ = {ell}"
        )));
    }
    let (set, tag) = i2_raw(s, h)?;
    check_lq(tag, &set, profile, &i2_q(ell, h))?;
    check_size(tag, &set, ell - 1, ell)?;
    Ok(set)
}

// ---------------------------------------------------------------------------
// I3: `L^k` plus a surplus of `h` in the index sum.

fn i3_raw(
    s: &EllSetScratch,
    k: usize,
    h: usize,
    profile: &BidProfile,
) -> Result<(EllSet, &'static str)> {
    let ell = s.ell;
    if h == 0 {
        return Ok((EllSet::full(ell, k), "I3:h=0"));
    }
    if 2 * h > ell {
        // An I1 pair adds 2/ℓ = 2(ℓ+1)/(ℓ(ℓ+1)); the I2 deficit of ℓ+1−h
        // brings the surplus back down to h.
        let t = "I3:h>=(l+1)/2";
        let set = EllSet::full(ell, k - 1)
            .union(&i1_raw(s, 1))
            .union(&i2_checked(s, ell + 1 - h, profile)?);
        return Ok((set, t));
    }
    if s.x(h) <= &s.y(h as i64) {
        let t = "I3:x[h]<=y";
        return Ok((edit(t, EllSet::full(ell, k), &[h], &[])?, t));
    }
    // 1 ≤ h ≤ ℓ/2 and x_h > y(h).
    let i0 = s.i0;
    let back = i0 as i64 + 2 * h as i64 - ell as i64 - 1;
    if s.in_range(back) && i0 != h {
        let t = "I3:pair-swap";
        let base = EllSet::full(ell, k).union(&i1_raw(s, 1));
        return Ok((edit(t, base, &[back as usize], &[i0, h])?, t));
    }
    let t = "I3:shift";
    let up = to_index(t, s, i0 as i64 + h as i64)?;
    Ok((edit(t, EllSet::full(ell, k), &[up], &[i0])?, t))
}

/// An `(ℓ, k + 2h/(ℓ(ℓ+1)))`-set with
/// `kℓ + ⌊2h/(ℓ+1)⌋ ≤ size ≤ kℓ + ⌈2h/(ℓ+1)⌉`, for `k ≥ 1`, `0 ≤ h ≤ ℓ`.
pub fn build_i3(ell: usize, k: usize, h: usize, profile: &BidProfile) -> Result<EllSet> {
    let s = EllSetScratch::new(profile, ell)?;
    i3_checked(&s, k, h, profile)
}

fn i3_checked(s: &EllSetScratch, k: usize, h: usize, profile: &BidProfile) -> Result<EllSet> {
    let ell = s.ell;
    if k == 0 || h > ell {
        return Err(Error::Domain(format!(
            "I3 needs k ≥ 1 and 0 ≤ h ≤ ℓ, got k = {k}, h = {h}, ℓ = {ell}"
        )));
    }
    let (set, tag) = i3_raw(s, k, h, profile)?;
    let q = Rational::from_usize(k) + frac(2 * h, ell * (ell + 1));
    check_lq(tag, &set, profile, &q)?;
    let lo = k * ell + (2 * h) / (ell + 1);
    let hi = k * ell + (2 * h).div_ceil(ell + 1);
    check_size(tag, &set, lo, hi)?;
    Ok(set)
}

// ---------------------------------------------------------------------------
// I4: `d` pairs plus an `h` surplus, at most two extra elements.

fn i4_raw(s: &EllSetScratch, d: usize, h: usize) -> Result<(EllSet, &'static str)> {
    let ell = s.ell;
    let target = s.y(h as i64);
    if let Some(i4) = (0..=h).find(|&i| (s.x(i) + s.x(h - i)) <= target) {
        let t = "I4:i4";
        return Ok((edit(t, i1_raw(s, d), &[i4, h - i4], &[])?, t));
    }
    let target = s.y((ell + 1 + h) as i64);
    if let Some(i5) = (1..=ell - h).find(|&i| (s.x(h + i) + s.x(ell + 1 - i)) <= target) {
        let t = "I4:i5";
        return Ok((edit(t, i1_raw(s, d - 1), &[h + i5, ell + 1 - i5], &[])?, t));
    }
    Err(Error::invariant(
        "I4:none",
        format!("neither search succeeded for d = {d}, h = {h}, ℓ = {ell}"),
    ))
}

/// An `(ℓ, 2d/ℓ + 2h/(ℓ(ℓ+1)))`-set of size at most `2d + 2`, for `d ≥ 1`, `0 ≤ h ≤ ℓ`.
pub fn build_i4(ell: usize, d: usize, h: usize, profile: &BidProfile) -> Result<EllSet> {
    let s = EllSetScratch::new(profile, ell)?;
    if d == 0 || h > ell {
        return Err(Error::Domain(format!(
            "I4 needs d ≥ 1 and 0 ≤ h ≤ ℓ, got d = {d}, h = {h}, ℓ = {ell}"
        )));
    }
    let (set, tag) = i4_raw(&s, d, h)?;
    let q = frac(2 * d, ell) + frac(2 * h, ell * (ell + 1));
    check_lq(tag, &set, profile, &q)?;
    check_size(tag, &set, 0, 2 * d + 2)?;
    Ok(set)
}

// ---------------------------------------------------------------------------
// I5: an (ℓ+1)-level I1 shifted down by one.

/// An ℓ-set of size `2d` with index sum at least `ℓd` and bid sum at most
/// `2d·t_{ℓ+1}/(ℓ+1)`. Requires `ℓ ≤ n − 1`.
pub fn build_i5(ell: usize, d: usize, profile: &BidProfile) -> Result<EllSet> {
    let n = profile.len();
    if ell == 0 || ell + 1 > n {
        return Err(Error::Domain(format!(
            "I5 needs 1 ≤ ℓ ≤ n − 1, got ℓ = {ell}, n = {n}"
        )));
    }
    let upper = EllSetScratch::new(profile, ell + 1)?;
    let lifted = i1_raw(&upper, d);
    let set = EllSet {
        ell,
        indices: lifted.indices.iter().map(|&j| j - 1).collect(),
    };
    let tag = "I5";
    check_size(tag, &set, 2 * d, 2 * d)?;
    if set.index_sum_usize() < ell * d {
        return Err(Error::invariant(
            tag,
            format!("index sum {} < ℓd = {}", set.index_sum_usize(), ell * d),
        ));
    }
    let bound = frac(2 * d, ell + 1) * profile.top_sum(ell + 1);
    let bids = bid_sum(&set, profile)?;
    if bids > bound {
        return Err(Error::invariant(
            tag,
            format!("bid sum {bids} exceeds {bound}"),
        ));
    }
    Ok(set)
}

/// The pair of candidate sets for the last sub-case of the `1 < R ≤ n`
/// lower bound: `J1 = L^k ∪ I5(ℓ, d′) ∪ {h′}` and
/// `J2 = L^k ∪ I5(ℓ, d′+1) − {h′}`.
pub fn build_j_sets(
    ell: usize,
    profile: &BidProfile,
    decomp: &SpectrumDecomposition,
) -> Result<(EllSet, EllSet)> {
    if decomp.ell != ell {
        return Err(Error::Domain(format!(
            "spectrum is for ℓ = {}, not {ell}",
            decomp.ell
        )));
    }
    let base = EllSet::full(ell, decomp.k);
    let j1 = edit(
        "J1",
        base.clone().union(&build_i5(ell, decomp.d_prime, profile)?),
        &[decomp.h_prime],
        &[],
    )?;
    let j2 = edit(
        "J2",
        base.union(&build_i5(ell, decomp.d_prime + 1, profile)?),
        &[],
        &[decomp.h_prime],
    )?;
    let size = decomp.k * ell + 2 * decomp.d_prime + 1;
    check_size("J1", &j1, size, size)?;
    check_size("J2", &j2, size, size)?;
    Ok((j1, j2))
}

/// Picks the infinitesimal shift for adversary bids: with
/// `g = slack/(n+1)`, the first of `g, g/2, g/3, …` that does not land any
/// shifted bid exactly on a defender value.
pub(crate) fn choose_delta(
    slack: &Rational,
    shifted: &[Rational],
    defender: &BidProfile,
) -> Result<Rational> {
    if !slack.is_positive() {
        return Err(Error::invariant(
            "delta",
            format!("no positive slack ({slack}) for the shift"),
        ));
    }
    let g = slack / Rational::from_usize(defender.len() + 1);
    let values = defender.distinct();
    let mut bases: Vec<&Rational> = shifted.iter().collect();
    bases.sort();
    bases.dedup();
    let forbidden: BTreeSet<Rational> = values
        .iter()
        .flat_map(|d| bases.iter().filter(move |x| **x < d).map(move |x| d - *x))
        .collect();
    let mut j = 1usize;
    loop {
        let delta = &g / Rational::from_usize(j);
        if !forbidden.contains(&delta) {
            return Ok(delta);
        }
        j += 1;
    }
}

/// Turns a Property-P ℓ-set into a concrete adversary bid set:
/// `{β_{n−ℓ}}^{n−|I|} ∪ {β_{n−ℓ+i} : i ∈ I}`, every bid raised by a small
/// `δ > 0` that keeps the total within `β·R` and avoids all defender values.
pub fn to_adversary_bids(
    set: &EllSet,
    profile: &BidProfile,
    ratio: &Rational,
) -> Result<BidProfile> {
    let check = satisfies_property_p(set, profile, ratio)?;
    if let Some(c) = check.failing {
        return Err(Error::Domain(format!("{set:?} violates {c}")));
    }
    let n = profile.len();
    let ell = set.ell;
    let mut x: Vec<Rational> = Vec::with_capacity(n);
    x.resize(n - set.len(), profile.beta(n - ell));
    x.extend(set.indices.iter().map(|&i| profile.beta(n - ell + i)));
    let spent: Rational = x.iter().sum();
    let delta = choose_delta(&(ratio * profile.total() - spent), &x, profile)?;
    let bids: Vec<Rational> = x.into_iter().map(|v| v + &delta).collect();
    BidProfile::new(bids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bids::expected_win_exact;
    use crate::equilibrium::f_value;
    use crate::rational::rat;
    use alloc::vec;

    fn profile(v: &[(i64, i64)]) -> BidProfile {
        BidProfile::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn psi41() -> BidProfile {
        profile(&[(1, 10), (2, 10), (3, 10), (4, 10)])
    }

    fn set(ell: usize, v: &[usize]) -> EllSet {
        EllSet::new(ell, v.to_vec()).unwrap()
    }

    #[test]
    fn sums() {
        assert_eq!(index_sum(&set(4, &[1, 4])), rat(5, 1));
        assert_eq!(index_sum(&set(4, &[4, 4, 1])), rat(9, 1));
        assert_eq!(index_sum(&EllSet::empty(3)), rat(0, 1));
        assert_eq!(bid_sum(&set(4, &[1, 4]), &psi41()).unwrap(), rat(1, 2));
        assert_eq!(bid_sum(&set(3, &[0, 3]), &psi41()).unwrap(), rat(1, 2));
        assert_eq!(bid_sum(&set(4, &[0]), &psi41()).unwrap(), rat(0, 1));
        assert!(EllSet::new(3, vec![4]).is_err());
    }

    #[test]
    fn property_p_examples() {
        let flat = profile(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        let one = rat(1, 1);
        let c = satisfies_property_p(&set(4, &[4, 4, 1]), &flat, &one).unwrap();
        assert_eq!(
            c,
            PropertyCheck {
                ok: true,
                failing: None
            }
        );
        let c = satisfies_property_p(&set(4, &[1, 2, 3, 4]), &flat, &one).unwrap();
        assert_eq!(c.failing, Some(PropertyCondition::Budget));
        let c = satisfies_property_p(&EllSet::empty(2), &flat, &one).unwrap();
        assert_eq!(c.failing, Some(PropertyCondition::IndexSum));
        let c = satisfies_property_p(&set(1, &[1, 1, 1, 1, 1]), &flat, &one).unwrap();
        assert_eq!(c.failing, Some(PropertyCondition::Size));
    }

    #[test]
    fn lq_examples() {
        assert!(is_lq_set(&set(4, &[1, 4]), &psi41(), &rat(1, 2)).unwrap());
        assert!(!is_lq_set(&set(4, &[1]), &psi41(), &rat(1, 1)).unwrap());
    }

    #[test]
    fn i1_examples() {
        assert_eq!(build_i1(4, 1, &psi41()).unwrap(), set(4, &[1, 4]));
        assert_eq!(build_i1(4, 0, &psi41()).unwrap(), EllSet::empty(4));
        let p = profile(&[(0, 1), (1, 10), (2, 10), (7, 10)]);
        assert_eq!(build_i1(3, 2, &p).unwrap(), set(3, &[2, 2, 2, 2]));
    }

    #[test]
    fn i2_examples() {
        assert_eq!(build_i2(4, 0, &psi41()).unwrap(), set(4, &[1, 2, 3, 4]));
        let s = EllSetScratch::new(&psi41(), 3).unwrap();
        let expect = set(3, &[s.i1, 3 - s.i1 + 1]);
        assert_eq!(build_i2(3, 2, &psi41()).unwrap(), expect);
        let got = build_i2(4, 1, &psi41()).unwrap();
        assert!(is_lq_set(&got, &psi41(), &rat(9, 10)).unwrap());
        assert!(build_i2(4, 3, &psi41()).is_err());
    }

    #[test]
    fn i3_examples() {
        assert_eq!(build_i3(2, 1, 0, &psi41()).unwrap(), set(2, &[1, 2]));
        // x = (3/10, 4/10): 2x_1 ≤ x_2 fails, so the I2(2, 1) half keeps {2}
        // and the I1 pair contributes {1, 2}.
        let got = build_i3(2, 1, 2, &psi41()).unwrap();
        assert!(is_lq_set(&got, &psi41(), &rat(5, 3)).unwrap());
        assert_eq!(got, set(2, &[1, 2, 2]));
        let got = build_i3(3, 2, 1, &psi41()).unwrap();
        assert!((6..=7).contains(&got.len()));
        assert!(build_i3(3, 0, 1, &psi41()).is_err());
        assert!(build_i3(3, 1, 4, &psi41()).is_err());
    }

    #[test]
    fn i4_examples() {
        assert_eq!(build_i4(4, 1, 0, &psi41()).unwrap(), set(4, &[0, 0, 1, 4]));
        assert_eq!(build_i4(2, 1, 1, &psi41()).unwrap(), set(2, &[2, 2]));
        assert!(build_i4(2, 0, 1, &psi41()).is_err());
    }

    #[test]
    fn i5_examples() {
        assert_eq!(build_i5(3, 1, &psi41()).unwrap(), set(3, &[0, 3]));
        assert_eq!(build_i5(3, 0, &psi41()).unwrap(), EllSet::empty(3));
        assert!(build_i5(4, 1, &psi41()).is_err());
    }

    #[test]
    fn adversary_bids_from_property_p_set() {
        let flat = profile(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        let a = to_adversary_bids(&set(4, &[4, 4, 1]), &flat, &rat(1, 1)).unwrap();
        assert!(a.total() <= &rat(1, 1));
        assert!(a.sorted().iter().all(|b| !flat.contains(b)));
        let w = expected_win_exact(&a, &flat).unwrap();
        assert_eq!(w, rat(3, 1));
        assert!(w >= f_value(4, &rat(1, 1), 4).unwrap());
        assert!(to_adversary_bids(&set(4, &[1, 2, 3, 4]), &flat, &rat(1, 1)).is_err());
    }

    #[test]
    fn delta_avoids_defender_values() {
        // Slack 2/5 over n+1 = 5 gives g = 2/25; 0 + 2/25 would sit on a
        // defender value, so the shift halves.
        let d = profile(&[(2, 25), (1, 2), (1, 2), (3, 5)]);
        let delta = choose_delta(&rat(2, 5), &[rat(0, 1)], &d).unwrap();
        assert_eq!(delta, rat(1, 25));
    }
}
