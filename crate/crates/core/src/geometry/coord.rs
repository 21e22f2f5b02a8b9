use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational scalar carrying a nearest-double shadow.
///
/// Arithmetic is performed on the rational value; the shadow is recomputed
/// from the result so it is always the correctly rounded double.
#[derive(Clone)]
pub struct Coord {
    exact: BigRational,
    approx: f64,
}

impl Coord {
    pub fn new(exact: BigRational) -> Self {
        let approx = exact.to_f64().unwrap_or(f64::NAN);
        Coord { exact, approx }
    }

    pub fn from_int(v: i64) -> Self {
        Coord::new(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coord::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact value of a finite double.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(|exact| Coord { exact, approx: v })
    }

    pub fn zero() -> Self {
        Coord { exact: BigRational::zero(), approx: 0.0 }
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn signum(&self) -> i32 {
        if self.exact.is_positive() {
            1
        } else if self.exact.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    pub fn half(&self) -> Coord {
        Coord::new(&self.exact / BigRational::from_integer(BigInt::from(2)))
    }

    /// Parses a decimal literal (`-1.25`, `3e-2`, `.5`) or a fraction `p/q`
    /// into its exact rational value.
    pub fn parse_decimal(s: &str) -> Result<Coord, Error> {
        parse_rational(s).map(Coord::new)
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator: {text:?}")));
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = body[pos + 1..].parse().map_err(|_| bad())?;
            (&body[..pos], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.abs() > 10_000 {
        return Err(Error::Parse(format!("exponent out of range: {text:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

impl FromStr for Coord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Coord::parse_decimal(s)
    }
}

impl From<BigRational> for Coord {
    fn from(exact: BigRational) -> Self {
        Coord::new(exact)
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::from_int(v)
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.exact == other.exact
    }
}

impl Eq for Coord {}

impl std::hash::Hash for Coord {
    // equal rationals have equal shadows; + 0.0 folds -0.0 into 0.0
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.approx + 0.0).to_bits().hash(state)
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        if next_up(next_up(self.approx)) < other.approx {
            // shadows sit within an ulp of the exact values
            return Ordering::Less;
        }
        if next_up(next_up(other.approx)) < self.approx {
            return Ordering::Greater;
        }
        self.exact.cmp(&other.exact)
    }
}

fn next_up(v: f64) -> f64 {
    if v.is_nan() || v == f64::INFINITY {
        return v;
    }
    if v == 0.0 {
        return f64::from_bits(1);
    }
    let bits = v.to_bits();
    if v > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

macro_rules! coord_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a Coord> for &'a Coord {
            type Output = Coord;
            fn $method(self, rhs: &'a Coord) -> Coord {
                Coord::new((&self.exact).$method(&rhs.exact))
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $method(self, rhs: Coord) -> Coord {
                Coord::new(self.exact.$method(rhs.exact))
            }
        }
    };
}

coord_binop!(Add, add);
coord_binop!(Sub, sub);
coord_binop!(Mul, mul);

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord { exact: -&self.exact, approx: -self.approx }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact.denom().is_one() {
            write!(f, "{}", self.exact.numer())
        } else {
            write!(f, "{}", self.approx)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(Coord::parse_decimal("0.1").unwrap(), Coord::from_ratio(1, 10));
        assert_eq!(Coord::parse_decimal("-2.50").unwrap(), Coord::from_ratio(-5, 2));
        assert_eq!(Coord::parse_decimal("1e3").unwrap(), Coord::from_int(1000));
        assert_eq!(Coord::parse_decimal("1.5E-2").unwrap(), Coord::from_ratio(3, 200));
        assert_eq!(Coord::parse_decimal(".5").unwrap(), Coord::from_ratio(1, 2));
        assert_eq!(Coord::parse_decimal("21/10").unwrap(), Coord::from_ratio(21, 10));
        assert_eq!(Coord::parse_decimal(" +7 ").unwrap(), Coord::from_int(7));
    }

    #[test]
    fn garbage_is_rejected() {
        for s in ["", "abc", "1.2.3", "1e", "--1", ".", "1/0", "nan"] {
            assert!(Coord::parse_decimal(s).is_err(), "{s}");
        }
    }

    #[test]
    fn ordering_uses_exact_value_when_shadows_tie() {
        let a = Coord::from_ratio(1, 10);
        let b = Coord::new(a.exact() + BigRational::new(BigInt::from(1), BigInt::from(10).pow(40)));
        assert_eq!(a.approx(), b.approx());
        assert!(a < b);
        assert_eq!(Coord::from_f64(0.1).unwrap().approx(), 0.1);
        assert_ne!(Coord::from_f64(0.1).unwrap(), a);
    }
}
