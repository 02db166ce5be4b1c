//! Certified real numbers for exact-mode norms.
//!
//! `L_p` norms of rational step functions are `p`-th roots of rationals for integer `p`.
//! They are carried symbolically as `c + Σ c_i r_i^(1/d_i)` and compared by rational
//! enclosures of increasing precision. Non-integer exponents fall back to a fixed
//! rational enclosure. Float mode carries plain `f64` values.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{format_f64, format_rational, rational_to_f64, Rational, FLOAT_RELATIVE_TOLERANCE};

/// Working precision (bits after the binary point) for the first enclosure attempt.
pub const DEFAULT_PRECISION: u32 = 64;

/// Comparisons give up after this precision and report "undecided".
pub const MAX_PRECISION: u32 = 4096;

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().cloned().unwrap();
        let hi = cands.iter().max().cloned().unwrap();
        Interval::new(lo, hi)
    }

    /// `None` when the divisor interval contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.lo <= Rational::zero() && other.hi >= Rational::zero() {
            return None;
        }
        let inv = Interval::new(other.hi.recip(), other.lo.recip());
        Some(self.mul(&inv))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn clamp_nonnegative(&self) -> Interval {
        let z = Rational::zero();
        Interval::new(self.lo.clone().max(z.clone()), self.hi.clone().max(z))
    }

    /// Sign when certain.
    pub fn sign(&self) -> Option<Ordering> {
        let z = Rational::zero();
        if self.lo > z {
            Some(Ordering::Greater)
        } else if self.hi < z {
            Some(Ordering::Less)
        } else if self.lo == z && self.hi == z {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (rational_to_f64(&self.lo) + rational_to_f64(&self.hi)) / 2.0
    }
}

/// Floor and ceiling of `r^(1/degree)` on the grid `2^-prec`, for `r >= 0`.
pub fn root_enclosure(r: &Rational, degree: u32, prec: u32) -> Interval {
    assert!(!r.is_negative(), "root of a negative rational");
    if degree == 1 {
        return Interval::point(r.clone());
    }
    if let Some(exact) = exact_root(r, degree) {
        return Interval::point(exact);
    }
    let scale = BigInt::one() << (prec as usize);
    let x = r.numer() * r.denom().pow(degree - 1) * (BigInt::one() << (prec as usize * degree as usize));
    let floor = x.nth_root(degree);
    let den = r.denom() * &scale;
    Interval::new(
        Rational::new(floor.clone(), den.clone()),
        Rational::new(floor + 1, den),
    )
}

/// `r^(1/degree)` when it is rational.
pub fn exact_root(r: &Rational, degree: u32) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if degree == 1 {
        return Some(r.clone());
    }
    let n = r.numer().nth_root(degree);
    if n.pow(degree) != *r.numer() {
        return None;
    }
    let d = r.denom().nth_root(degree);
    if d.pow(degree) != *r.denom() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Rewrites `r^(1/d)` as `c * m^(1/d)` with `m` an integer free of small `d`-th powers,
/// so that equal roots share one radicand.
fn canonical_root(r: &Rational, degree: u32) -> (Rational, Rational) {
    // (a/b)^(1/d) = (a * b^(d-1))^(1/d) / b
    let mut m = r.numer() * r.denom().pow(degree - 1);
    let mut c = BigInt::one();
    let mut p = 2u32;
    while p < 100 {
        let pd = BigInt::from(p).pow(degree);
        if pd > m {
            break;
        }
        while (&m % &pd).is_zero() {
            m /= &pd;
            c *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (Rational::new(c, r.denom().clone()), Rational::from_integer(m))
}

/// `coeff * radicand^(1/degree)` with `degree >= 2` and an irrational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTerm {
    pub coeff: Rational,
    pub radicand: Rational,
    pub degree: u32,
}

/// `constant + Σ terms`, an exactly represented real.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootSum {
    pub constant: Rational,
    pub terms: Vec<RootTerm>,
}

impl RootSum {
    fn push(&mut self, term: RootTerm) {
        if term.coeff.is_zero() {
            return;
        }
        if let Some(t) = self
            .terms
            .iter_mut()
            .find(|t| t.degree == term.degree && t.radicand == term.radicand)
        {
            t.coeff += term.coeff;
        } else {
            self.terms.push(term);
        }
        self.terms.retain(|t| !t.coeff.is_zero());
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.terms.is_empty().then_some(&self.constant)
    }

    pub fn enclose(&self, prec: u32) -> Interval {
        self.terms.iter().fold(Interval::point(self.constant.clone()), |acc, t| {
            acc.add(&root_enclosure(&t.radicand, t.degree, prec).scale(&t.coeff))
        })
    }

    fn add(&self, other: &RootSum) -> RootSum {
        let mut out = self.clone();
        out.constant += &other.constant;
        for t in &other.terms {
            out.push(t.clone());
        }
        out
    }

    fn scale(&self, c: &Rational) -> RootSum {
        if c.is_zero() {
            return RootSum::default();
        }
        RootSum {
            constant: &self.constant * c,
            terms: self
                .terms
                .iter()
                .map(|t| RootTerm { coeff: &t.coeff * c, ..t.clone() })
                .collect(),
        }
    }

    /// Certified sign, refining the enclosure up to [`MAX_PRECISION`].
    pub fn sign(&self) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(self.constant.cmp(&Rational::zero()));
        }
        // A single irrational term against a rational: compare powers exactly.
        if self.terms.len() == 1 {
            let t = &self.terms[0];
            let root_sign = t.coeff.cmp(&Rational::zero());
            let c_sign = self.constant.cmp(&Rational::zero());
            if c_sign == Ordering::Equal || c_sign == root_sign {
                return Some(root_sign);
            }
            // opposite signs: compare |coeff|^d * radicand with |constant|^d
            let lhs = num_traits::pow(t.coeff.abs(), t.degree as usize) * &t.radicand;
            let rhs = num_traits::pow(self.constant.abs(), t.degree as usize);
            return Some(match lhs.cmp(&rhs) {
                Ordering::Greater => root_sign,
                Ordering::Less => c_sign,
                Ordering::Equal => Ordering::Equal,
            });
        }
        let mut prec = DEFAULT_PRECISION;
        while prec <= MAX_PRECISION {
            if let Some(s) = self.enclose(prec).sign() {
                return Some(s);
            }
            prec *= 4;
        }
        None
    }
}

/// A real number produced by exact or float computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    /// Exact value, rational or a combination of irrational roots.
    Exact(RootSum),
    /// Certified rational enclosure of a value that is not kept symbolically.
    Approx(Interval),
    Float(f64),
}

impl Real {
    pub fn rational(q: Rational) -> Real {
        Real::Exact(RootSum { constant: q, terms: Vec::new() })
    }

    pub fn zero() -> Real {
        Real::rational(Rational::zero())
    }

    /// `radicand^(1/degree)`, kept exact.
    pub fn root(radicand: Rational, degree: u32) -> Real {
        if let Some(q) = exact_root(&radicand, degree) {
            return Real::rational(q);
        }
        let (coeff, radicand) = canonical_root(&radicand, degree);
        Real::Exact(RootSum {
            constant: Rational::zero(),
            terms: vec![RootTerm { coeff, radicand, degree }],
        })
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Real::Float(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Real::Exact(s) => s.as_rational(),
            Real::Approx(i) if i.is_point() => Some(&i.lo),
            _ => None,
        }
    }

    pub fn enclose(&self, prec: u32) -> Option<Interval> {
        match self {
            Real::Exact(s) => Some(s.enclose(prec)),
            Real::Approx(i) => Some(i.clone()),
            Real::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(s) => match s.as_rational() {
                Some(q) => rational_to_f64(q),
                None => s.enclose(DEFAULT_PRECISION).midpoint_f64(),
            },
            Real::Approx(i) => i.midpoint_f64(),
            Real::Float(v) => *v,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Float(_), _) | (_, Real::Float(_)) => Real::Float(self.to_f64() + other.to_f64()),
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a.add(b)),
            _ => Real::Approx(
                self.enclose(DEFAULT_PRECISION)
                    .unwrap()
                    .add(&other.enclose(DEFAULT_PRECISION).unwrap()),
            ),
        }
    }

    pub fn neg(&self) -> Real {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Real {
        match self {
            Real::Exact(s) => Real::Exact(s.scale(c)),
            Real::Approx(i) => Real::Approx(i.scale(c)),
            Real::Float(v) => Real::Float(v * rational_to_f64(c)),
        }
    }

    /// Quotient; exact only when both sides are rational.
    /// `None` if the divisor may be zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        match (self, other) {
            (Real::Float(_), _) | (_, Real::Float(_)) => {
                let d = other.to_f64();
                (d != 0.0).then(|| Real::Float(self.to_f64() / d))
            }
            _ => {
                if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
                    return (!b.is_zero()).then(|| Real::rational(a / b));
                }
                let mut prec = DEFAULT_PRECISION;
                while prec <= MAX_PRECISION {
                    let num = self.enclose(prec).unwrap();
                    let den = other.enclose(prec).unwrap();
                    if let Some(q) = num.div(&den) {
                        return Some(Real::Approx(q));
                    }
                    if matches!(other, Real::Approx(_)) {
                        break;
                    }
                    prec *= 4;
                }
                None
            }
        }
    }

    /// Certified ordering; float operands compare with relative tolerance.
    /// `None` if the exact comparison cannot be decided.
    pub fn compare(&self, other: &Real) -> Option<Ordering> {
        match (self, other) {
            (Real::Float(_), _) | (_, Real::Float(_)) => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let tol = FLOAT_RELATIVE_TOLERANCE * a.abs().max(b.abs());
                if (a - b).abs() <= tol {
                    Some(Ordering::Equal)
                } else {
                    a.partial_cmp(&b)
                }
            }
            (Real::Exact(a), Real::Exact(b)) => a.add(&b.scale(&-Rational::one())).sign(),
            _ => {
                let a = self.enclose(MAX_PRECISION).unwrap();
                let b = other.enclose(MAX_PRECISION).unwrap();
                a.add(&b.neg()).sign()
            }
        }
    }

    pub fn le(&self, other: &Real) -> Option<bool> {
        self.compare(other).map(|o| o != Ordering::Greater)
    }

    /// Larger of two values; an undecidable pair yields their hull.
    pub fn max(&self, other: &Real) -> Real {
        match self.compare(other) {
            Some(Ordering::Less) => other.clone(),
            Some(_) => self.clone(),
            None => Real::Approx(
                self.enclose(MAX_PRECISION)
                    .unwrap()
                    .max(&other.enclose(MAX_PRECISION).unwrap()),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Float(v) => *v == 0.0,
            _ => self.as_rational().is_some_and(|q| q.is_zero()),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(s) => {
                if s.terms.is_empty() {
                    return f.write_str(&format_rational(&s.constant));
                }
                let mut first = true;
                if !s.constant.is_zero() {
                    f.write_str(&format_rational(&s.constant))?;
                    first = false;
                }
                for t in &s.terms {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    if !t.coeff.is_one() {
                        write!(f, "{}*", format_rational(&t.coeff))?;
                    }
                    write!(f, "({})^(1/{})", format_rational(&t.radicand), t.degree)?;
                }
                Ok(())
            }
            Real::Approx(i) => write!(
                f,
                "[{},{}]",
                format_f64(rational_to_f64(&i.lo)),
                format_f64(rational_to_f64(&i.hi))
            ),
            Real::Float(v) => f.write_str(&format_f64(*v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn perfect_powers_stay_rational() {
        assert_eq!(Real::root(rational(9, 4), 2), Real::rational(rational(3, 2)));
        assert_eq!(Real::root(rational(8, 27), 3), Real::rational(rational(2, 3)));
        assert!(Real::root(rational(2, 1), 2).as_rational().is_none());
    }

    #[test]
    fn root_enclosure_brackets_sqrt_two() {
        let i = root_enclosure(&rational(2, 1), 2, 40);
        assert!(rational_to_f64(&i.lo) <= std::f64::consts::SQRT_2);
        assert!(rational_to_f64(&i.hi) >= std::f64::consts::SQRT_2);
        assert!(rational_to_f64(&(i.hi - i.lo)) <= 1e-12);
    }

    #[test]
    fn like_terms_cancel_exactly() {
        let a = Real::root(rational(5, 3), 2);
        let b = a.scale(&rational(3, 1)).sub(&a.scale(&rational(2, 1)));
        assert_eq!(a.compare(&b), Some(Ordering::Equal));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn single_root_against_rational_is_exact() {
        // sqrt(2) vs 1.4142135623730951 (a rational just above sqrt 2)
        let r = Real::root(rational(2, 1), 2);
        let above = Real::rational(rational(14_142_135_623_730_951, 10_000_000_000_000_000));
        assert_eq!(r.compare(&above), Some(Ordering::Less));
        let two = Real::rational(rational(2, 1));
        assert_eq!(
            r.scale(&rational(2, 1)).compare(&Real::root(rational(8, 1), 2)),
            Some(Ordering::Equal)
        );
        assert_eq!(
            Real::root(rational(1, 2), 2).compare(&r.scale(&rational(1, 2))),
            Some(Ordering::Equal)
        );
        assert_eq!(r.compare(&two), Some(Ordering::Less));
    }

    #[test]
    fn sums_of_roots_compare_by_refinement() {
        // sqrt 2 + sqrt 3 vs sqrt 10: 3.146 < 3.162
        let lhs = Real::root(rational(2, 1), 2).add(&Real::root(rational(3, 1), 2));
        let rhs = Real::root(rational(10, 1), 2);
        assert_eq!(lhs.compare(&rhs), Some(Ordering::Less));
    }

    #[test]
    fn float_comparison_tolerates_rounding() {
        let a = Real::Float(0.1 + 0.2);
        let b = Real::Float(0.3);
        assert_eq!(a.compare(&b), Some(Ordering::Equal));
    }

    #[test]
    fn division_of_roots_is_enclosed() {
        let q = Real::root(rational(2, 1), 2).div(&Real::rational(rational(2, 1))).unwrap();
        assert!((q.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(Real::zero().div(&Real::zero()).is_none());
    }
}
