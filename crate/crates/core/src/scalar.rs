//! Scalar arithmetic in two modes: exact big rationals and binary64 floats.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::norm::{float_gauge, rational_gauge, LpExponent, NormGauge};
use crate::real::Real;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Relative tolerance used for every equality or inequality test in float mode.
pub const FLOAT_RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Exact,
    Float,
}

impl Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// Field element used for all function values and weights.
///
/// Implemented for [`Rational`] (no rounding anywhere) and `f64`.
pub trait Scalar: Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn to_f64(&self) -> f64;

    /// Lossless view as a certified real.
    fn to_real(&self) -> Real;

    /// Equality: exact for rationals, relative tolerance for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    /// `self <= other`, exact for rationals, tolerant for floats.
    fn approx_le(&self, other: &Self) -> bool;

    /// Stable textual form: `p/q` in lowest terms, or 17 significant digits.
    fn serialize(&self) -> String;

    /// Norm gauge of cell values, see [`NormGauge`].
    fn lp_gauge(values: &[Self], p: &LpExponent) -> NormGauge;

    /// `Σ_k coeffs[k] * columns[k][x]` for every cell `x`.
    ///
    /// All columns must share one length.
    fn combine_int(coeffs: &[Self], columns: &[&[i64]]) -> Vec<Self> {
        let len = columns.first().map_or(0, |c| c.len());
        let mut out = vec![Self::zero(); len];
        for (c, col) in coeffs.iter().zip(columns) {
            if c.is_zero() {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(col.iter()) {
                if v != 0 {
                    *o = o.clone() + c.clone() * Self::from_i64(v);
                }
            }
        }
        out
    }

    /// Vector representation prepared for repeated linear combination.
    type Packed: Clone + Debug + Send + Sync;

    fn pack(values: &[Self]) -> Self::Packed;

    /// `Σ_k coeffs[k] * vectors[k][x]` for every cell `x`.
    fn combine_packed(coeffs: &[Self], vectors: &[&Self::Packed]) -> Vec<Self>;

    fn combine(coeffs: &[Self], vectors: &[&[Self]]) -> Vec<Self> {
        let packed: Vec<Self::Packed> = vectors.iter().map(|v| Self::pack(v)).collect();
        let refs: Vec<&Self::Packed> = packed.iter().collect();
        Self::combine_packed(coeffs, &refs)
    }
}

/// Rational vector over one common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledInts {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl ScaledInts {
    pub fn from_rationals(values: &[Rational]) -> Self {
        let denominator = values.iter().fold(BigInt::one(), |acc, v| {
            if v.denom().is_one() {
                acc
            } else {
                acc.lcm(v.denom())
            }
        });
        let numerators = values
            .iter()
            .map(|v| {
                if v.denom() == &denominator {
                    v.numer().clone()
                } else {
                    v.numer() * (&denominator / v.denom())
                }
            })
            .collect();
        ScaledInts { numerators, denominator }
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q` in lowest terms; integers print without a denominator.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// 17 significant digits, the shortest width that round-trips every binary64.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    format!("{:.16e}", v)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // Numerator and denominator can both overflow f64 even when the quotient is moderate.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn tolerant_le(a: f64, b: f64) -> bool {
    a <= b || (a - b) <= FLOAT_RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

/// Integer combination in `i128`; `None` on overflow.
fn combine_i128(coeffs: &[i64], columns: &[&[i64]], len: usize) -> Option<Vec<i128>> {
    let mut acc = vec![0i128; len];
    for (&c, col) in coeffs.iter().zip(columns) {
        if c == 0 {
            continue;
        }
        for (a, &v) in acc.iter_mut().zip(col.iter()) {
            *a = a.checked_add(c as i128 * v as i128)?;
        }
    }
    Some(acc)
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_i64(v: i64) -> Self {
        rational_int(v)
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_real(&self) -> Real {
        Real::rational(self.clone())
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self) -> bool {
        self <= other
    }

    fn serialize(&self) -> String {
        format_rational(self)
    }

    fn lp_gauge(values: &[Self], p: &LpExponent) -> NormGauge {
        rational_gauge(values.iter(), values.len(), p)
    }

    fn combine_int(coeffs: &[Self], columns: &[&[i64]]) -> Vec<Self> {
        let len = columns.first().map_or(0, |c| c.len());
        let denom = coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        if let Some(small) = scaled.iter().map(|c| c.to_i64()).collect::<Option<Vec<i64>>>() {
            if let Some(acc) = combine_i128(&small, columns, len) {
                return acc
                    .into_iter()
                    .map(|a| Rational::new(BigInt::from(a), denom.clone()))
                    .collect();
            }
        }
        let mut acc = vec![BigInt::zero(); len];
        for (c, col) in scaled.iter().zip(columns) {
            if c.is_zero() {
                continue;
            }
            for (a, &v) in acc.iter_mut().zip(col.iter()) {
                if v != 0 {
                    *a += c * v;
                }
            }
        }
        acc.into_iter()
            .map(|a| Rational::new(a, denom.clone()))
            .collect()
    }

    type Packed = ScaledInts;

    fn pack(values: &[Self]) -> ScaledInts {
        ScaledInts::from_rationals(values)
    }

    fn combine_packed(coeffs: &[Self], vectors: &[&ScaledInts]) -> Vec<Self> {
        // One common denominator for the whole combination, then integer accumulation.
        let len = vectors.first().map_or(0, |v| v.numerators.len());
        let mut denom = BigInt::one();
        for (c, v) in coeffs.iter().zip(vectors) {
            if !c.is_zero() {
                denom = denom.lcm(&(c.denom() * &v.denominator));
            }
        }
        let mut acc = vec![BigInt::zero(); len];
        for (c, v) in coeffs.iter().zip(vectors) {
            if c.is_zero() {
                continue;
            }
            let factor = c.numer() * (&denom / (c.denom() * &v.denominator));
            for (a, x) in acc.iter_mut().zip(&v.numerators) {
                if !x.is_zero() {
                    *a += &factor * x;
                }
            }
        }
        acc.into_iter()
            .map(|a| Rational::new(a, denom.clone()))
            .collect()
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_real(&self) -> Real {
        Real::Float(*self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        tolerant_le(*self, *other) && tolerant_le(*other, *self)
    }

    fn approx_le(&self, other: &Self) -> bool {
        tolerant_le(*self, *other)
    }

    fn serialize(&self) -> String {
        format_f64(*self)
    }

    fn lp_gauge(values: &[Self], p: &LpExponent) -> NormGauge {
        float_gauge(values.iter(), values.len(), p)
    }

    type Packed = Vec<f64>;

    fn pack(values: &[Self]) -> Vec<f64> {
        values.to_vec()
    }

    fn combine_packed(coeffs: &[Self], vectors: &[&Vec<f64>]) -> Vec<Self> {
        let len = vectors.first().map_or(0, |v| v.len());
        let mut out = vec![0.0; len];
        for (c, v) in coeffs.iter().zip(vectors) {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }
}

/// Tolerant `a <= b` on raw floats.
pub fn float_le(a: f64, b: f64) -> bool {
    tolerant_le(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_serializes_in_lowest_terms() {
        assert_eq!(rational(6, 4).serialize(), "3/2");
        assert_eq!(rational(-4, 2).serialize(), "-2");
        assert_eq!(rational(0, 7).serialize(), "0");
    }

    #[test]
    fn float_uses_seventeen_significant_digits() {
        assert_eq!(0.1f64.serialize(), "1.0000000000000001e-1");
        assert_eq!(0.0f64.serialize(), "0");
        let s = (1.0f64 / 3.0).serialize();
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn float_tolerance_is_relative() {
        assert!(1.0f64.approx_eq(&(1.0 + 1e-12)));
        assert!(!1.0f64.approx_eq(&(1.0 + 1e-6)));
        assert!(1e9f64.approx_le(&(1e9 - 0.5)));
        assert!(!Rational::one().approx_le(&rational(999_999_999, 1_000_000_000)));
    }

    #[test]
    fn combine_int_matches_naive_sum() {
        let coeffs = vec![rational(1, 3), rational(-2, 5), rational(0, 1), rational(7, 2)];
        let cols: Vec<Vec<i64>> = vec![vec![1, 2, 3], vec![4, -5, 6], vec![9, 9, 9], vec![0, 1, -1]];
        let refs: Vec<&[i64]> = cols.iter().map(|c| c.as_slice()).collect();
        let fast = Rational::combine_int(&coeffs, &refs);
        for x in 0..3 {
            let mut naive = Rational::zero();
            for (c, col) in coeffs.iter().zip(&cols) {
                naive += c * rational_int(col[x]);
            }
            assert_eq!(fast[x], naive);
        }
    }

    #[test]
    fn combine_matches_naive_sum() {
        let coeffs = vec![rational(2, 3), rational(-1, 7)];
        let a = vec![rational(1, 2), rational(5, 9)];
        let b = vec![rational(3, 4), rational(0, 1)];
        let out = Rational::combine(&coeffs, &[&a, &b]);
        assert_eq!(out[0], rational(2, 3) * rational(1, 2) - rational(1, 7) * rational(3, 4));
        assert_eq!(out[1], rational(2, 3) * rational(5, 9));
    }

    #[test]
    fn huge_rational_converts_to_float() {
        let big = BigInt::from(3) * BigInt::from(10).pow(400);
        let q = Rational::new(big.clone(), big * 2);
        assert_eq!(rational_to_f64(&q), 0.5);
    }
}
