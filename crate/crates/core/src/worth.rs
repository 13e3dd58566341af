//! Numeric domains for coalition worth.
//!
//! A game evaluates entirely in one domain: exact rationals ([`Rational`]) or
//! binary64 ([`f64`]). Weights are always formed as exact rationals first and
//! converted only at the end, so the float domain does not accumulate error
//! from products of factorials.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Exact,
    Approx,
}

impl Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::Exact => "exact",
            Domain::Approx => "approx",
        })
    }
}

pub trait Worth:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const DOMAIN: Domain;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &Rational) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn mul_rational(&self, r: &Rational) -> Self;

    /// `p/q` for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String;

    /// Domain-aware closeness: exact equality for rationals, relative
    /// tolerance for floats.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool;
}

impl Worth for Rational {
    const DOMAIN: Domain = Domain::Exact;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn mul_rational(&self, r: &Rational) -> Self {
        self * r
    }

    fn render(&self) -> String {
        format_rational(self)
    }

    fn approx_eq(&self, other: &Self, _rel_tol: f64) -> bool {
        self == other
    }
}

impl Worth for f64 {
    const DOMAIN: Domain = Domain::Approx;

    fn zero() -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mul_rational(&self, r: &Rational) -> Self {
        self * rational_to_f64(r)
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= rel_tol * scale
    }
}

/// Nearest-ish binary64 for a big rational, robust to numerators and
/// denominators that overflow f64 on their own.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let numer = r.numer();
    let denom = r.denom();
    let shift = numer.bits().max(denom.bits()).saturating_sub(900) as usize;
    let n = (numer >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Parses `"7"`, `"-3"`, or `"5/3"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("`{text}` is not an integer or p/q fraction"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidArgument(format!("`{text}` has a zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Renders a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}
