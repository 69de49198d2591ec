//! Exact rational numbers and the strict-multiple floor.
//!
//! Every budget, bid, probability and expected win in this crate is a
//! [`Rational`]. The canonical text form is `p/q` with `q` omitted when it
//! is 1; decimal literals such as `0.15` are accepted on input and converted
//! exactly.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_usize(v: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }

    /// `p/q`, reduced. Panics if `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big(p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(p, q)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Ordinary floor, as an integer.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Ordinary ceiling, as an integer.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rational(self.0.ceil())
    }

    /// The value as an integer if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    /// The value as a `usize` if it is a nonnegative integer that fits.
    pub fn to_usize(&self) -> Option<usize> {
        self.to_integer().and_then(|v| v.to_usize())
    }

    /// `self · k`, reducing only by `gcd(k, denominator)`.
    pub fn mul_usize(&self, k: usize) -> Self {
        if k == 0 || self.0.is_zero() {
            return Rational::zero();
        }
        let k = k as u64;
        let rem = (self.0.denom() % k).to_u64().unwrap_or(0);
        let g = k.gcd(&rem);
        let numer = self.0.numer() * BigInt::from(k / g);
        let denom = if g == 1 {
            self.0.denom().clone()
        } else {
            self.0.denom() / g
        };
        Rational(BigRational::new_raw(numer, denom))
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Self) -> Self {
        core::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        core::cmp::max(self, other)
    }

    /// Fixed-point decimal rendering with `digits` fractional digits,
    /// rounded half away from zero. Display only.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.sign() == Sign::Minus;
        let (int_part, frac_part) = rounded.abs().div_rem(&scale);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{int_part}");
        }
        let frac = frac_part.to_string();
        let pad = digits - frac.len();
        format!("{sign}{int_part}.{}{frac}", "0".repeat(pad))
    }
}

/// `⌊x, y⌋`: the largest integral multiple of `y` strictly less than `x`,
/// i.e. `y · (⌈x/y⌉ − 1)`. Defined for positive `x` and `y`.
pub fn strict_multiple_floor(x: &Rational, y: &Rational) -> Result<Rational> {
    if !y.is_positive() {
        return Err(Error::Domain(format!("step must be positive, got {y}")));
    }
    if !x.is_positive() {
        return Err(Error::Domain(format!("argument must be positive, got {x}")));
    }
    let steps = (x / y).ceil() - Rational::one();
    Ok(y * &steps)
}

/// `⌊x⌋` in the strict sense: the largest integer strictly less than `x`.
pub fn integral_floor(x: &Rational) -> Result<Rational> {
    strict_multiple_floor(x, &Rational::one())
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(whole.to_string()));
    }
    BigInt::from_str(digits).map_err(|_| Error::Parse(whole.to_string()))
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, `p`, or a decimal such as `-0.15`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p = parse_int(p.trim(), s)?;
            let q = parse_int(q.trim(), s)?;
            if q.is_zero() {
                return Err(Error::Parse(s.to_string()));
            }
            return Ok(Rational(BigRational::new(p, q)));
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(s.to_string()));
            }
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(s.to_string()));
            }
            let mut digits = String::with_capacity(int_digits.len() + frac_part.len());
            digits.push_str(if int_digits.is_empty() {
                "0"
            } else {
                int_digits
            });
            digits.push_str(frac_part);
            let mut numer = parse_int(&digits, s)?;
            if negative {
                numer = -numer;
            }
            let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Rational(BigRational::new(numer, denom)));
        }
        Ok(Rational(BigRational::from_integer(parse_int(t, s)?)))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational::from_usize(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_bigint(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        let mut acc = Rational::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from_int(*other)))
    }
}

/// Shorthand used throughout the crate and its tests.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn strict_floor_examples() {
        assert_eq!(strict_multiple_floor(&r("7"), &r("2")).unwrap(), r("6"));
        assert_eq!(strict_multiple_floor(&r("6"), &r("2")).unwrap(), r("4"));
        assert_eq!(strict_multiple_floor(&r("1"), &r("1/3")).unwrap(), r("2/3"));
    }

    #[test]
    fn integral_floor_examples() {
        assert_eq!(integral_floor(&r("23/3")).unwrap(), r("7"));
        assert_eq!(integral_floor(&r("5")).unwrap(), r("4"));
        assert_eq!(integral_floor(&r("1/2")).unwrap(), r("0"));
    }

    #[test]
    fn floor_rejects_nonpositive() {
        assert!(matches!(
            strict_multiple_floor(&r("1"), &r("0")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            strict_multiple_floor(&r("1"), &r("-2")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            strict_multiple_floor(&r("0"), &r("1")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(integral_floor(&r("-1/2")), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(r("3/20"), rat(3, 20));
        assert_eq!(r("-6/4"), rat(-3, 2));
        assert_eq!(r("0.15"), rat(3, 20));
        assert_eq!(r("-.5"), rat(-1, 2));
        assert_eq!(r(" 42 "), rat(42, 1));
        assert_eq!(r("+7/2"), rat(7, 2));
        for bad in [
            "", "/", "1/0", "a", "1.2.3", "1/2/3", "0x10", "1e3", "--1", "2.", ".",
        ] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(rat(2, 4).to_string(), "1/2");
        assert_eq!(rat(4, 2).to_string(), "2");
        assert_eq!(rat(3, -6).to_string(), "-1/2");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn decimal_display() {
        assert_eq!(rat(1, 3).to_decimal_string(4), "0.3333");
        assert_eq!(rat(2, 3).to_decimal_string(2), "0.67");
        assert_eq!(rat(-1, 8).to_decimal_string(2), "-0.13");
        assert_eq!(rat(7, 2).to_decimal_string(0), "4");
        assert_eq!(rat(1, 20).to_decimal_string(3), "0.050");
    }

    fn pos_rat() -> impl Strategy<Value = Rational> {
        (1i64..10_000, 1i64..500).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn mul_usize_matches_general_product(p in -1000i64..1000, q in 1i64..5000, k in 0usize..100_000) {
            let x = Rational::new(p, q);
            prop_assert_eq!(x.mul_usize(k), &x * Rational::from_usize(k));
        }

        #[test]
        fn strict_floor_brackets(x in pos_rat(), y in pos_rat()) {
            let f = strict_multiple_floor(&x, &y).unwrap();
            prop_assert!((&f / &y).is_integer());
            prop_assert!(f < x);
            prop_assert!(x <= &f + &y);
        }
    }

    proptest! {
        #[test]
        fn scaling_identity(x in pos_rat(), y in pos_rat()) {
            let lhs = strict_multiple_floor(&x, &y).unwrap();
            let rhs = &y * integral_floor(&(&x / &y)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn print_parse_roundtrip(p in -100_000i64..100_000, q in 1i64..100_000) {
            let v = rat(p, q);
            let text = v.to_string();
            let back: Rational = text.parse().unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, v);
        }
    }
}
