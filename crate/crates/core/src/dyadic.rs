//! Step functions on the dyadic group.
//!
//! A rank-`N` step function is constant on each of the `2^N` cells `I_N(x)`. The cell of a
//! point is indexed by its first `N` coordinates read as a binary number with `x_0` as the
//! most significant bit. Group addition is coordinate-wise modulo 2, which is bitwise XOR of
//! cell indices at a common rank.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::norm::{LpExponent, NormGauge};
use crate::real::Real;
use crate::scalar::{Rational, Scalar};

/// Largest supported rank; `2^MAX_RANK` cells must fit comfortably in memory.
pub const MAX_RANK: u32 = 24;

/// `i` with its low `rank` bits reversed.
#[inline]
pub fn reverse_bits(i: usize, rank: u32) -> usize {
    if rank == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - rank)
    }
}

/// Order `|n|`: the position of the highest set bit, so `2^|n| <= n < 2^(|n|+1)`.
pub fn order(n: u64) -> u32 {
    assert!(n > 0, "order of zero is undefined");
    63 - n.leading_zeros()
}

/// Smallest rank `R` with `n <= 2^R`.
pub fn rank_for_index(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Point of the dyadic group known through its first `rank` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    rank: u32,
    index: u64,
}

impl DyadicPoint {
    pub fn new(rank: u32, index: u64) -> Result<Self> {
        if rank > MAX_RANK || index >> rank != 0 {
            return Err(Error::IndexTooLarge { index, rank });
        }
        Ok(DyadicPoint { rank, index })
    }

    pub fn zero(rank: u32) -> Self {
        DyadicPoint { rank, index: 0 }
    }

    /// `e_t`: coordinate `t` equal to one, all others zero.
    pub fn unit(t: u32, rank: u32) -> Result<Self> {
        if t >= rank {
            return Err(Error::InvalidParameters(format!("e_{t} needs rank above {t}, got {rank}")));
        }
        Ok(DyadicPoint { rank, index: 1 << (rank - 1 - t) })
    }

    pub fn from_coordinates(coords: &[u8]) -> Result<Self> {
        let rank = coords.len() as u32;
        let mut index = 0u64;
        for &c in coords {
            if c > 1 {
                return Err(Error::InvalidParameters(format!("coordinate {c} is not 0 or 1")));
            }
            index = (index << 1) | c as u64;
        }
        DyadicPoint::new(rank, index)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coordinate(&self, i: u32) -> u8 {
        if i >= self.rank {
            0
        } else {
            ((self.index >> (self.rank - 1 - i)) & 1) as u8
        }
    }

    /// The same point with zero coordinates appended up to `rank`.
    pub fn embed(&self, rank: u32) -> Self {
        assert!(rank >= self.rank);
        DyadicPoint { rank, index: self.index << (rank - self.rank) }
    }

    pub fn add(&self, other: &DyadicPoint) -> DyadicPoint {
        let r = self.rank.max(other.rank);
        DyadicPoint { rank: r, index: self.embed(r).index ^ other.embed(r).index }
    }

    /// `|x| = Σ x_i 2^-(i+1)`, which is `index / 2^rank` under the cell encoding.
    pub fn dyadic_abs(&self) -> Rational {
        Rational::new(BigInt::from(self.index), BigInt::from(1u64) << self.rank as usize)
    }

    /// Membership in `I_n`: the first `n` coordinates vanish.
    pub fn in_interval(&self, n: u32) -> bool {
        (0..n).all(|i| self.coordinate(i) == 0)
    }
}

/// Function constant on the rank-`N` cells of the dyadic group.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<S> {
    rank: u32,
    values: Vec<S>,
}

impl<S: Scalar> StepFunction<S> {
    pub fn new(rank: u32, values: Vec<S>) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::InvalidParameters(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        if values.len() != 1usize << rank {
            return Err(Error::InvalidParameters(format!(
                "rank {rank} needs {} values, got {}",
                1usize << rank,
                values.len()
            )));
        }
        Ok(StepFunction { rank, values })
    }

    pub fn constant(rank: u32, c: S) -> Self {
        StepFunction { rank, values: vec![c; 1 << rank] }
    }

    pub fn zero(rank: u32) -> Self {
        Self::constant(rank, S::zero())
    }

    /// Integer-valued step function.
    pub fn from_ints(rank: u32, values: &[i64]) -> Self {
        assert_eq!(values.len(), 1 << rank);
        StepFunction { rank, values: values.iter().map(|&v| S::from_i64(v)).collect() }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at(&self, x: &DyadicPoint) -> &S {
        let idx = if x.rank >= self.rank {
            x.index >> (x.rank - self.rank)
        } else {
            x.index << (self.rank - x.rank)
        };
        &self.values[idx as usize]
    }

    /// Same function at rank `N+1`: every value duplicated.
    pub fn refine(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len() * 2);
        for v in &self.values {
            values.push(v.clone());
            values.push(v.clone());
        }
        StepFunction { rank: self.rank + 1, values }
    }

    /// Same function at a rank at least as fine as the current one.
    pub fn refine_to(&self, rank: u32) -> Self {
        assert!(rank >= self.rank, "cannot coarsen rank {} to {rank}", self.rank);
        let shift = rank - self.rank;
        if shift == 0 {
            return self.clone();
        }
        let mut values = Vec::with_capacity(1 << rank);
        for v in &self.values {
            for _ in 0..(1usize << shift) {
                values.push(v.clone());
            }
        }
        StepFunction { rank, values }
    }

    fn reconcile(&self, other: &Self) -> (std::borrow::Cow<'_, Self>, u32) {
        let r = self.rank.max(other.rank);
        if r == self.rank {
            (std::borrow::Cow::Borrowed(self), r)
        } else {
            (std::borrow::Cow::Owned(self.refine_to(r)), r)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&S, &S) -> S) -> Self {
        let (a, r) = self.reconcile(other);
        let (b, _) = other.reconcile(self);
        StepFunction { rank: r, values: a.values.iter().zip(&b.values).map(|(x, y)| op(x, y)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        StepFunction { rank: self.rank, values: self.values.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn abs(&self) -> Self {
        StepFunction { rank: self.rank, values: self.values.iter().map(|v| v.abs()).collect() }
    }

    /// Exact or tolerant equality after rank reconciliation.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// First cell (at the common rank) where the two functions differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        let (a, _) = self.reconcile(other);
        let (b, _) = other.reconcile(self);
        a.values.iter().zip(&b.values).position(|(x, y)| !x.approx_eq(y))
    }

    /// `g(x) = f(x + t)`.
    pub fn translate(&self, t: &DyadicPoint) -> Self {
        let f = if t.rank > self.rank { self.refine_to(t.rank) } else { self.clone() };
        let shift = t.embed(f.rank).index as usize;
        let values = (0..f.values.len()).map(|x| f.values[x ^ shift].clone()).collect();
        StepFunction { rank: f.rank, values }
    }

    /// Haar integral `2^-N Σ values`.
    pub fn integrate(&self) -> S {
        let sum = self.values.iter().fold(S::zero(), |acc, v| acc + v.clone());
        sum / S::from_i64(self.values.len() as i64)
    }

    pub fn lp_norm(&self, p: &LpExponent) -> Real {
        S::lp_gauge(&self.values, p).into_real()
    }

    /// Walsh–Paley coefficients `f̂(j) = ∫ f w_j`, `j < 2^N`, via the fast transform.
    pub fn walsh_coefficients(&self) -> Vec<S> {
        let mut data: Vec<S> = (0..self.values.len())
            .map(|i| self.values[reverse_bits(i, self.rank)].clone())
            .collect();
        fwht_in_place(&mut data);
        let n = S::from_i64(data.len() as i64);
        data.into_iter().map(|v| v / n.clone()).collect()
    }

    /// Walsh polynomial `Σ_j coeffs[j] w_j` at the rank fixed by `coeffs.len()`.
    pub fn from_walsh_coefficients(coeffs: &[S]) -> Result<Self> {
        let len = coeffs.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameters(format!("{len} coefficients is not a power of two")));
        }
        let rank = len.trailing_zeros();
        let mut data = coeffs.to_vec();
        fwht_in_place(&mut data);
        let values = (0..len).map(|i| data[reverse_bits(i, rank)].clone()).collect();
        StepFunction::new(rank, values)
    }

    /// `(f * g)(x) = ∫ f(x + u) g(u) dμ(u)`, by direct summation over the group.
    pub fn dyadic_convolve(&self, other: &Self) -> Self {
        let (f, r) = self.reconcile(other);
        let (g, _) = other.reconcile(self);
        let len = 1usize << r;
        let scale = S::from_i64(len as i64);
        let values = (0..len)
            .map(|x| {
                let mut acc = S::zero();
                for (u, gu) in g.values.iter().enumerate() {
                    if !gu.is_zero() {
                        acc = acc + f.values[x ^ u].clone() * gu.clone();
                    }
                }
                acc / scale.clone()
            })
            .collect();
        StepFunction { rank: r, values }
    }

    fn difference_gauge(&self, shift: usize, p: &LpExponent) -> NormGauge {
        let diff: Vec<S> = (0..self.values.len())
            .map(|x| self.values[x ^ shift].clone() - self.values[x].clone())
            .collect();
        S::lp_gauge(&diff, p)
    }

    /// `ω_p(f, 2^-j)`: maximum of `||f(· + t) - f||_p` over shifts `t ∈ I_j`.
    pub fn modulus_of_continuity(&self, j: u32, p: &LpExponent) -> Result<Real> {
        if j > self.rank {
            return Err(Error::ScaleTooFine { scale: j, rank: self.rank });
        }
        let count = 1usize << (self.rank - j);
        let gauge = (1..count)
            .map(|t| self.difference_gauge(t, p))
            .reduce(NormGauge::max)
            .unwrap_or_else(|| S::lp_gauge(&vec![S::zero(); 1], p));
        Ok(gauge.into_real())
    }

    /// `[ω_p(f, 2^0), ω_p(f, 2^-1), …, ω_p(f, 2^-N)]`, sharing work across scales.
    pub fn moduli(&self, p: &LpExponent) -> Vec<Real> {
        let n = self.rank;
        let mut out = vec![Real::zero(); n as usize + 1];
        let mut running = S::lp_gauge(&[S::zero()], p);
        out[n as usize] = running.clone().into_real();
        // Shifts in I_j \ I_{j+1} are exactly the indices in [2^(N-j-1), 2^(N-j)).
        for j in (0..n).rev() {
            let lo = 1usize << (n - j - 1);
            let hi = 1usize << (n - j);
            for t in lo..hi {
                running = running.max(self.difference_gauge(t, p));
            }
            out[j as usize] = running.clone().into_real();
        }
        out
    }

    pub fn map<T: Scalar>(&self, op: impl Fn(&S) -> T) -> StepFunction<T> {
        StepFunction { rank: self.rank, values: self.values.iter().map(op).collect() }
    }
}

impl StepFunction<Rational> {
    pub fn to_float(&self) -> StepFunction<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<S: Scalar> StepFunction<S> {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Un-normalized Walsh–Hadamard butterfly in natural (Hadamard) order.
///
/// Applying it twice multiplies by the length.
pub fn fwht_in_place<S: Scalar>(data: &mut [S]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let a = data[i].clone();
                let b = data[i + h].clone();
                data[i] = a.clone() + b.clone();
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Integer butterfly, used for integer-valued kernels.
pub fn fwht_i64(data: &mut [i64]) {
    let n = data.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}
