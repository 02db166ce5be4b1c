//! `L_p` exponents and norm evaluation for both scalar modes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::{root_enclosure, Interval, Real, DEFAULT_PRECISION};
use crate::scalar::{format_rational, rational_to_f64, Rational};

/// Exponent `p` of an `L_p` norm: a rational `p >= 1` or infinity (maximum of `|f|`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LpExponent {
    Finite(Rational),
    Infinity,
}

impl LpExponent {
    pub fn finite(p: Rational) -> Result<Self> {
        if p < Rational::one() {
            return Err(Error::InvalidParameters(format!(
                "L_p exponent must be at least 1, got {}",
                format_rational(&p)
            )));
        }
        Ok(LpExponent::Finite(p))
    }

    pub fn integer(p: u32) -> Self {
        assert!(p >= 1);
        LpExponent::Finite(Rational::from_integer(BigInt::from(p)))
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn two() -> Self {
        Self::integer(2)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LpExponent::Infinity)
    }

    /// `Some(p)` for integral finite exponents.
    pub fn as_integer(&self) -> Option<u32> {
        match self {
            LpExponent::Finite(p) if p.is_integer() => p.to_integer().to_u32(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            LpExponent::Finite(p) => rational_to_f64(p),
            LpExponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpExponent::Finite(p) => f.write_str(&format_rational(p)),
            LpExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for LpExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(LpExponent::Infinity),
            _ => LpExponent::finite(crate::parse::parse_rational(t)?),
        }
    }
}

/// Quantity that is monotone in the norm and can be maximized before the final root.
#[derive(Clone, Debug, PartialEq)]
pub enum NormGauge {
    /// `mean |f|^degree`; the norm is its `degree`-th root.
    PowerMean { mean: Rational, degree: u32 },
    /// `max |f|`, the norm itself.
    Max(Rational),
    /// Certified enclosure of the norm (non-integral `p`).
    Enclosure(Interval),
    Float(f64),
}

impl NormGauge {
    pub fn max(self, other: NormGauge) -> NormGauge {
        use NormGauge::*;
        match (self, other) {
            (PowerMean { mean: a, degree }, PowerMean { mean: b, .. }) => PowerMean { mean: a.max(b), degree },
            (Max(a), Max(b)) => Max(a.max(b)),
            (Enclosure(a), Enclosure(b)) => Enclosure(a.max(&b)),
            (Float(a), Float(b)) => Float(a.max(b)),
            (a, b) => panic!("mismatched norm gauges {a:?} and {b:?}"),
        }
    }

    pub fn into_real(self) -> Real {
        match self {
            NormGauge::PowerMean { mean, degree } => Real::root(mean, degree),
            NormGauge::Max(m) => Real::rational(m),
            NormGauge::Enclosure(i) => {
                if i.is_point() {
                    Real::rational(i.lo)
                } else {
                    Real::Approx(i)
                }
            }
            NormGauge::Float(v) => Real::Float(v),
        }
    }
}

/// Gauge of the normalized `L_p` norm of the cell values `(2^-N Σ |v|^p)^(1/p)`.
pub fn rational_gauge<'a, I>(values: I, count: usize, p: &LpExponent) -> NormGauge
where
    I: IntoIterator<Item = &'a Rational>,
{
    match p {
        LpExponent::Infinity => NormGauge::Max(
            values
                .into_iter()
                .map(|v| v.abs())
                .max()
                .unwrap_or_else(Rational::zero),
        ),
        LpExponent::Finite(e) => {
            if let Some(degree) = p.as_integer() {
                let mut sum = Rational::zero();
                for v in values {
                    if !v.is_zero() {
                        sum += num_traits::pow(v.abs(), degree as usize);
                    }
                }
                NormGauge::PowerMean { mean: sum / Rational::from_integer(BigInt::from(count)), degree }
            } else {
                NormGauge::Enclosure(fractional_norm(values, count, e, DEFAULT_PRECISION))
            }
        }
    }
}

/// Enclosure of `(mean |v|^(a/b))^(b/a)`.
fn fractional_norm<'a, I>(values: I, count: usize, p: &Rational, prec: u32) -> Interval
where
    I: IntoIterator<Item = &'a Rational>,
{
    let a = p.numer().to_u32().expect("exponent numerator too large");
    let b = p.denom().to_u32().expect("exponent denominator too large");
    let mut sum = Interval::point(Rational::zero());
    for v in values {
        if v.is_zero() {
            continue;
        }
        let powered = num_traits::pow(v.abs(), a as usize);
        sum = sum.add(&root_enclosure(&powered, b, prec));
    }
    let mean = sum.scale(&Rational::new(BigInt::one(), BigInt::from(count)));
    // x -> x^(b/a) is increasing; take outward-rounded roots of the endpoint powers.
    let lo = root_enclosure(&num_traits::pow(mean.lo.clone(), b as usize), a, prec).lo;
    let hi = root_enclosure(&num_traits::pow(mean.hi.clone(), b as usize), a, prec).hi;
    Interval::new(lo, hi)
}

pub fn float_gauge<'a, I>(values: I, count: usize, p: &LpExponent) -> NormGauge
where
    I: IntoIterator<Item = &'a f64>,
{
    match p {
        LpExponent::Infinity => NormGauge::Float(values.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))),
        LpExponent::Finite(e) => {
            let pf = rational_to_f64(e);
            let sum: f64 = if pf == 1.0 {
                values.into_iter().map(|v| v.abs()).sum()
            } else if pf == 2.0 {
                values.into_iter().map(|v| v * v).sum()
            } else {
                values.into_iter().map(|v| v.abs().powf(pf)).sum()
            };
            NormGauge::Float((sum / count as f64).powf(1.0 / pf))
        }
    }
}
