//! Exact rationals and the circle group `R/Z`.
//!
//! Every value here is an immutable, normalized rational, so equality is
//! structural and traces built from these values are reproducible.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("interval [{lo}, {hi}] has width >= 1/2, its circle norm is uninformative")]
    TooWide { lo: Rational, hi: Rational },
    #[error("interval endpoints out of order: lo = {lo} > hi = {hi}")]
    Inverted { lo: Rational, hi: Rational },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Builds `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_big(n: &BigUint, d: &BigUint) -> Rational {
    Rational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.05`.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let t = s.trim();
    let err = || ArithError::Parse(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches('-');
        let ip_val: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().map_err(|_| err())? };
        let fp_val: BigInt = fp.parse().map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10u32), fp.len());
        let mag = Rational::new(ip_val * &scale + fp_val, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// A point of the circle group, represented by its unique representative in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircleValue(Rational);

impl CircleValue {
    pub fn new(rep: Rational) -> Option<Self> {
        if !rep.is_negative() && rep < Rational::one() {
            Some(CircleValue(rep))
        } else {
            None
        }
    }
    pub fn zero() -> Self {
        CircleValue(Rational::zero())
    }
    pub fn rep(&self) -> &Rational {
        &self.0
    }
    pub fn into_rep(self) -> Rational {
        self.0
    }
    /// The reflected point `-v` in the circle group.
    pub fn neg(&self) -> CircleValue {
        if self.0.is_zero() {
            self.clone()
        } else {
            CircleValue(Rational::one() - &self.0)
        }
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Distance to the nearest integer, a value in `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormValue(Rational);

impl NormValue {
    pub fn value(&self) -> &Rational {
        &self.0
    }
    pub fn into_value(self) -> Rational {
        self.0
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A closed rational interval `[lo, hi]` known to contain some exact value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalValue {
    pub lo: Rational,
    pub hi: Rational,
}

impl IntervalValue {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::Inverted { lo, hi });
        }
        Ok(IntervalValue { lo, hi })
    }
    pub fn point(v: Rational) -> Self {
        IntervalValue { lo: v.clone(), hi: v }
    }
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `r - floor(r)`, using the mathematical floor so that `-1/4` maps to `3/4`.
pub fn frac(r: &Rational) -> CircleValue {
    CircleValue(r - r.floor())
}

pub fn circle_norm(v: &CircleValue) -> NormValue {
    let other = Rational::one() - &v.0;
    NormValue(if v.0 <= other { v.0.clone() } else { other })
}

/// Circle norm of a real number.
pub fn norm_of(r: &Rational) -> NormValue {
    circle_norm(&frac(r))
}

/// Residue `a mod q` turned into the circle norm of `a/q`.
pub fn norm_of_residue(a: &BigUint, q: &BigUint) -> NormValue {
    let r = a.mod_floor(q);
    let twice = &r << 1u32;
    let num = if &twice <= q { r } else { q - r };
    NormValue(rat_big(&num, q))
}

/// Rigorous enclosure of `{ circle_norm(frac(t)) : t in [lo, hi] }`.
pub fn interval_norm(v: &IntervalValue) -> Result<IntervalValue, ArithError> {
    let half = rat(1, 2);
    let w = v.width();
    if w.is_negative() {
        return Err(ArithError::Inverted { lo: v.lo.clone(), hi: v.hi.clone() });
    }
    if w >= half {
        return Err(ArithError::TooWide { lo: v.lo.clone(), hi: v.hi.clone() });
    }
    // Translate so that lo lies in [0, 1); then hi < 3/2 and the norm is
    // the tent function t, 1 - t, t - 1 on [0,1/2], [1/2,1], [1,3/2].
    let lo = frac(&v.lo).into_rep();
    let hi = &lo + &w;
    let one = Rational::one();
    let tent = |t: &Rational| -> Rational {
        if *t <= half {
            t.clone()
        } else if *t <= one {
            &one - t
        } else {
            t - &one
        }
    };
    let (fl, fh) = (tent(&lo), tent(&hi));
    let max = if lo <= half && half <= hi { half.clone() } else { fl.clone().max(fh.clone()) };
    let min = if lo.is_zero() || (lo <= one && one <= hi) { Rational::zero() } else { fl.min(fh) };
    Ok(IntervalValue { lo: min, hi: max })
}

/// Exact test `count^q < t^q * n^p`, i.e. `count / n^(p/q) < t`.
pub fn ratio_power_lt(count: u64, n: u64, p: u64, q: u64, t: &Rational) -> bool {
    // count / n^(p/q) < t  <=>  count^q * den^q < num^q * n^p  (all nonnegative)
    if t.is_negative() || t.is_zero() {
        return false;
    }
    let lhs = num_traits::pow(BigInt::from(count), q as usize) * num_traits::pow(t.denom().clone(), q as usize);
    let rhs = num_traits::pow(t.numer().clone(), q as usize) * num_traits::pow(BigInt::from(n), p as usize);
    lhs < rhs
}

/// Decimal rendering of `count / n^(p/q)` truncated to `digits` places, computed exactly.
pub fn ratio_power_decimal(count: u64, n: u64, p: u64, q: u64, digits: u32) -> String {
    let scale = num_traits::pow(BigUint::from(10u32), digits as usize);
    // floor( (count*scale)^q / n^p ) ^ (1/q)
    let num = num_traits::pow(BigUint::from(count) * &scale, q as usize);
    let den = num_traits::pow(BigUint::from(n), p as usize);
    let quotient = num / den;
    let root = quotient.nth_root(q as u32);
    let s = root.to_str_radix(10);
    let d = digits as usize;
    let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let split = padded.len() - d;
    format!("{}.{}", &padded[..split], &padded[split..])
}
