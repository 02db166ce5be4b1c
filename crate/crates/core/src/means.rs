//! Weight schemes, triangular rows, partial sums and matrix-transform means.

use std::collections::BTreeMap;
use std::fmt;

use crate::dyadic::{StepFunction, MAX_RANK};
use crate::error::{Error, Result};
use crate::identities::{CheckId, IdentityVerdict, KernelIdentityReport};
use crate::scalar::{Rational, Scalar};

/// Non-negative sequence indexed by naturals.
#[derive(Clone, Debug, PartialEq)]
pub enum Sequence<S> {
    Constant(S),
    /// `slope * k + intercept`
    Affine { slope: S, intercept: S },
    /// `1 / (k + offset)`
    Reciprocal { offset: i64 },
    /// Finite list; indices past the end are an error.
    Explicit(Vec<S>),
}

impl<S: Scalar> Sequence<S> {
    pub fn term(&self, k: u64) -> Result<S> {
        match self {
            Sequence::Constant(c) => Ok(c.clone()),
            Sequence::Affine { slope, intercept } => Ok(slope.clone() * S::from_i64(k as i64) + intercept.clone()),
            Sequence::Reciprocal { offset } => {
                let d = (k as i64).checked_add(*offset).ok_or_else(|| {
                    Error::InvalidParameters(format!("1/(k{offset:+}) overflows at k = {k}"))
                })?;
                if d == 0 {
                    return Err(Error::DegenerateScheme(format!("1/(k{offset:+}) is undefined at k = {k}")));
                }
                Ok(S::from_ratio(1, d))
            }
            Sequence::Explicit(v) => v.get(k as usize).cloned().ok_or_else(|| {
                Error::InvalidParameters(format!("explicit sequence has no term {k} (length {})", v.len()))
            }),
        }
    }
}

impl<S: Scalar> fmt::Display for Sequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Constant(c) => write!(f, "const:{}", c.serialize()),
            Sequence::Affine { slope, intercept } => write!(f, "affine:{},{}", slope.serialize(), intercept.serialize()),
            Sequence::Reciprocal { offset } => write!(f, "recip:{offset}"),
            Sequence::Explicit(v) => {
                f.write_str("list:")?;
                let parts: Vec<String> = v.iter().map(|x| x.serialize()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Generator of triangular rows `{t_{k,n}}`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme<S> {
    /// Nörlund means from `{q_k : k >= 0}`: `t_{k,n} = q_{n-k} / Q_n`.
    Norlund(Sequence<S>),
    /// T (weighted) means from `{p_k : k >= 1}`: `t_{k,n} = p_k / P_n`.
    Weighted(Sequence<S>),
    /// `(C, α)`: Nörlund with `q_k = C(k + α - 1, k)`, `α > 0`.
    Cesaro(S),
    /// Nörlund with `q_k = 1 / (k + 1)`.
    Logarithmic,
    /// Rows given verbatim, keyed by `n`.
    Explicit(BTreeMap<u64, Vec<S>>),
}

impl<S: Scalar> WeightScheme<S> {
    pub fn fejer() -> Self {
        WeightScheme::Norlund(Sequence::Constant(S::one()))
    }

    pub fn is_norlund(&self) -> bool {
        matches!(self, WeightScheme::Norlund(_) | WeightScheme::Cesaro(_) | WeightScheme::Logarithmic)
    }

    /// `q_0, …, q_{len-1}` of a Nörlund-type scheme.
    pub fn norlund_weights(&self, len: u64) -> Result<Vec<S>> {
        let q: Vec<S> = match self {
            WeightScheme::Norlund(seq) => (0..len).map(|k| seq.term(k)).collect::<Result<_>>()?,
            WeightScheme::Logarithmic => (0..len).map(|k| S::from_ratio(1, k as i64 + 1)).collect(),
            WeightScheme::Cesaro(alpha) => {
                if *alpha <= S::zero() {
                    return Err(Error::DegenerateScheme(format!(
                        "Cesaro order must be positive, got {}",
                        alpha.serialize()
                    )));
                }
                let mut out = Vec::with_capacity(len as usize);
                let mut q = S::one();
                for k in 0..len {
                    if k > 0 {
                        let kk = S::from_i64(k as i64);
                        q = q * (kk.clone() + alpha.clone() - S::one()) / kk;
                    }
                    out.push(q.clone());
                }
                out
            }
            other => return Err(Error::NotNorlund(other.to_string())),
        };
        if let Some(q0) = q.first() {
            if *q0 <= S::zero() {
                return Err(Error::DegenerateScheme("Norlund schemes need q_0 > 0".into()));
            }
        }
        if let Some((k, v)) = q.iter().enumerate().find(|(_, v)| **v < S::zero()) {
            return Err(Error::DegenerateScheme(format!("q_{k} = {} is negative", v.serialize())));
        }
        Ok(q)
    }

    /// `Q_m = Σ_{k<m} q_k`, with `Q_m = 0` for `m <= 0`.
    pub fn norlund_partial_sum(q: &[S], m: i64) -> S {
        if m <= 0 {
            return S::zero();
        }
        q[..m as usize].iter().fold(S::zero(), |a, v| a + v.clone())
    }

    /// Row `t_{1,n} … t_{n,n}`.
    pub fn build_row(&self, n: u64) -> Result<TriangularRow<S>> {
        if n == 0 {
            return Err(Error::InvalidParameters("rows start at n = 1".into()));
        }
        match self {
            WeightScheme::Weighted(seq) => {
                let p: Vec<S> = (1..=n).map(|k| seq.term(k)).collect::<Result<_>>()?;
                if p[0] <= S::zero() {
                    return Err(Error::DegenerateScheme("weighted schemes need p_1 > 0".into()));
                }
                if let Some((k, v)) = p.iter().enumerate().find(|(_, v)| **v < S::zero()) {
                    return Err(Error::DegenerateScheme(format!("p_{} = {} is negative", k + 1, v.serialize())));
                }
                let total = p.iter().fold(S::zero(), |a, v| a + v.clone());
                if total.is_zero() {
                    return Err(Error::DegenerateScheme(format!("P_{n} = 0")));
                }
                TriangularRow::new(p.into_iter().map(|v| v / total.clone()).collect())
            }
            WeightScheme::Explicit(rows) => {
                let row = rows
                    .get(&n)
                    .ok_or_else(|| Error::InvalidParameters(format!("explicit scheme has no row for n = {n}")))?;
                TriangularRow::new(row.clone())
            }
            _ => {
                let q = self.norlund_weights(n)?;
                let total = q.iter().fold(S::zero(), |a, v| a + v.clone());
                if total.is_zero() {
                    return Err(Error::DegenerateScheme(format!("Q_{n} = 0")));
                }
                // t_{k,n} = q_{n-k} / Q_n
                TriangularRow::new((1..=n).map(|k| q[(n - k) as usize].clone() / total.clone()).collect())
            }
        }
    }
}

impl WeightScheme<Rational> {
    /// Same scheme over another scalar type.
    pub fn convert<T: Scalar>(&self) -> WeightScheme<T> {
        let c = |v: &Rational| T::from_rational(v);
        let seq = |s: &Sequence<Rational>| match s {
            Sequence::Constant(v) => Sequence::Constant(c(v)),
            Sequence::Affine { slope, intercept } => Sequence::Affine { slope: c(slope), intercept: c(intercept) },
            Sequence::Reciprocal { offset } => Sequence::Reciprocal { offset: *offset },
            Sequence::Explicit(v) => Sequence::Explicit(v.iter().map(c).collect()),
        };
        match self {
            WeightScheme::Norlund(s) => WeightScheme::Norlund(seq(s)),
            WeightScheme::Weighted(s) => WeightScheme::Weighted(seq(s)),
            WeightScheme::Cesaro(a) => WeightScheme::Cesaro(c(a)),
            WeightScheme::Logarithmic => WeightScheme::Logarithmic,
            WeightScheme::Explicit(rows) => {
                WeightScheme::Explicit(rows.iter().map(|(n, r)| (*n, r.iter().map(c).collect())).collect())
            }
        }
    }
}

impl<S: Scalar> fmt::Display for WeightScheme<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Norlund(Sequence::Constant(c)) if c.is_one() => f.write_str("fejer"),
            WeightScheme::Norlund(seq) => write!(f, "norlund:{seq}"),
            WeightScheme::Weighted(seq) => write!(f, "weighted:{seq}"),
            WeightScheme::Cesaro(a) => write!(f, "cesaro:{}", a.serialize()),
            WeightScheme::Logarithmic => f.write_str("log"),
            WeightScheme::Explicit(rows) => {
                f.write_str("explicit:")?;
                let parts: Vec<String> = rows
                    .values()
                    .map(|r| r.iter().map(|v| v.serialize()).collect::<Vec<_>>().join(","))
                    .collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

/// Finite non-negative weights `t_{1,n} … t_{n,n}`.
///
/// Monotonicity flags and the sum are recomputed from the weights on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularRow<S> {
    weights: Vec<S>,
    non_increasing: bool,
    non_decreasing: bool,
    sum: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowClass {
    pub non_increasing: bool,
    pub non_decreasing: bool,
    pub normalized: bool,
}

impl RowClass {
    pub fn is_neither(&self) -> bool {
        !self.non_increasing && !self.non_decreasing
    }
}

impl<S: Scalar> TriangularRow<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameters("a row needs at least one weight".into()));
        }
        if let Some((k, v)) = weights.iter().enumerate().find(|(_, v)| **v < S::zero()) {
            return Err(Error::InvalidParameters(format!("t_{{{},n}} = {} is negative", k + 1, v.serialize())));
        }
        let non_increasing = weights.windows(2).all(|w| w[1] <= w[0]);
        let non_decreasing = weights.windows(2).all(|w| w[0] <= w[1]);
        let sum = weights.iter().fold(S::zero(), |a, v| a + v.clone());
        Ok(TriangularRow { weights, non_increasing, non_decreasing, sum })
    }

    pub fn uniform(n: u64) -> Self {
        let w = S::one() / S::from_i64(n as i64);
        TriangularRow::new(vec![w; n as usize]).expect("uniform row is valid")
    }

    /// `t_{n,n} = 1`, all other weights zero; its mean is `S_n`.
    pub fn spike(n: u64) -> Self {
        let mut w = vec![S::zero(); n as usize];
        w[n as usize - 1] = S::one();
        TriangularRow::new(w).expect("spike row is valid")
    }

    pub fn n(&self) -> u64 {
        self.weights.len() as u64
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// `t_{k,n}` for `1 <= k <= n`, and `0` for `k = n + 1`.
    pub fn t(&self, k: u64) -> S {
        assert!(k >= 1, "rows are indexed from 1");
        self.weights.get(k as usize - 1).cloned().unwrap_or_else(S::zero)
    }

    /// `Δt_{k,n} = t_{k,n} - t_{k+1,n}` with `t_{n+1,n} = 0`.
    pub fn delta(&self, k: u64) -> S {
        self.t(k) - self.t(k + 1)
    }

    pub fn sum(&self) -> &S {
        &self.sum
    }

    pub fn classify(&self) -> RowClass {
        RowClass {
            non_increasing: self.non_increasing,
            non_decreasing: self.non_decreasing,
            normalized: self.sum.approx_eq(&S::one()),
        }
    }

    /// Tail sums `T_m = Σ_{k=m}^n t_{k,n}` for `m = 1..=n`; the Walsh multiplier of index `m-1`.
    fn tail_sums(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.weights.len()];
        let mut acc = S::zero();
        for (i, w) in self.weights.iter().enumerate().rev() {
            acc = acc + w.clone();
            out[i] = acc.clone();
        }
        out
    }
}

pub fn build_row<S: Scalar>(scheme: &WeightScheme<S>, n: u64) -> Result<TriangularRow<S>> {
    scheme.build_row(n)
}

pub fn classify_row<S: Scalar>(row: &TriangularRow<S>) -> RowClass {
    row.classify()
}

fn check_mean_index<S: Scalar>(f: &StepFunction<S>, n: u64) -> Result<()> {
    if f.rank() > MAX_RANK || n > 1u64 << f.rank() {
        return Err(Error::IndexTooLarge { index: n, rank: f.rank() });
    }
    Ok(())
}

/// `S_k(f) = Σ_{j<k} f̂(j) w_j`.
pub fn partial_sum<S: Scalar>(f: &StepFunction<S>, k: u64) -> Result<StepFunction<S>> {
    check_mean_index(f, k)?;
    let mut coeffs = f.walsh_coefficients();
    for c in coeffs.iter_mut().skip(k as usize) {
        *c = S::zero();
    }
    StepFunction::from_walsh_coefficients(&coeffs)
}

/// `σ_n^T(f) = Σ_k t_{k,n} S_k(f)` for arbitrary weights, computed in coefficient space.
pub fn matrix_mean_weights<S: Scalar>(f: &StepFunction<S>, weights: &[S]) -> Result<StepFunction<S>> {
    check_mean_index(f, weights.len() as u64)?;
    let row = TriangularRow {
        weights: weights.to_vec(),
        non_increasing: false,
        non_decreasing: false,
        sum: S::zero(),
    };
    let tails = row.tail_sums();
    let mut coeffs = f.walsh_coefficients();
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c = match tails.get(j) {
            Some(t) => c.clone() * t.clone(),
            None => S::zero(),
        };
    }
    StepFunction::from_walsh_coefficients(&coeffs)
}

pub fn matrix_mean<S: Scalar>(f: &StepFunction<S>, row: &TriangularRow<S>) -> Result<StepFunction<S>> {
    matrix_mean_weights(f, row.weights())
}

/// `σ_n(f)`, the Fejér mean.
pub fn fejer_mean<S: Scalar>(f: &StepFunction<S>, n: u64) -> Result<StepFunction<S>> {
    matrix_mean(f, &TriangularRow::uniform(n))
}

/// Fejér means `σ_1(f), …, σ_{n_max}(f)` accumulated from partial sums in value space.
#[derive(Clone, Debug)]
pub struct FejerMeans<S: Scalar> {
    rank: u32,
    /// `k σ_k(f) = Σ_{j=1}^k S_j(f)`, packed for fast combination.
    scaled: Vec<S::Packed>,
}

impl<S: Scalar> FejerMeans<S> {
    pub fn new(f: &StepFunction<S>, n_max: u64) -> Result<Self> {
        check_mean_index(f, n_max)?;
        let rank = f.rank();
        let coeffs = f.walsh_coefficients();
        let cells = f.len();
        let walsh: Vec<Vec<i64>> = (0..n_max)
            .map(|j| crate::kernels::walsh_ints(j, rank))
            .collect::<Result<_>>()?;
        let mut partial = vec![S::zero(); cells];
        let mut acc = vec![S::zero(); cells];
        let mut scaled = Vec::with_capacity(n_max as usize);
        for j in 0..n_max as usize {
            // S_{j+1} = S_j + f̂(j) w_j
            let c = &coeffs[j];
            if !c.is_zero() {
                for (p, &w) in partial.iter_mut().zip(&walsh[j]) {
                    *p = if w > 0 { p.clone() + c.clone() } else { p.clone() - c.clone() };
                }
            }
            for (a, p) in acc.iter_mut().zip(&partial) {
                *a = a.clone() + p.clone();
            }
            scaled.push(S::pack(&acc));
        }
        Ok(FejerMeans { rank, scaled })
    }

    pub fn n_max(&self) -> u64 {
        self.scaled.len() as u64
    }

    /// `Σ_k coeffs[k-1] · k σ_k(f)`.
    pub fn combine_scaled(&self, coeffs: &[S]) -> StepFunction<S> {
        let refs: Vec<&S::Packed> = self.scaled[..coeffs.len()].iter().collect();
        StepFunction::new(self.rank, S::combine_packed(coeffs, &refs)).expect("rank is consistent")
    }
}

/// Both Abel-transform identities of a row:
/// `Σ t_{k,n} = Σ_{k<n} Δt_{k,n} k + t_{n,n} n` and
/// `σ_n^T(f) = Σ_{k<n} Δt_{k,n} k σ_k(f) + t_{n,n} n σ_n(f)`.
pub fn abel_decomposition_check<S: Scalar>(
    f: &StepFunction<S>,
    row: &TriangularRow<S>,
) -> Result<KernelIdentityReport<S>> {
    let means = FejerMeans::new(f, row.n())?;
    abel_check_with(&means, f, row)
}

/// [`abel_decomposition_check`] reusing precomputed Fejér means of `f`.
pub fn abel_check_with<S: Scalar>(
    means: &FejerMeans<S>,
    f: &StepFunction<S>,
    row: &TriangularRow<S>,
) -> Result<KernelIdentityReport<S>> {
    let n = row.n();
    if n > means.n_max() {
        return Err(Error::InvalidParameters(format!(
            "Fejer means prepared up to {}, row needs {n}",
            means.n_max()
        )));
    }
    // Coefficients of k σ_k: Δt_{k,n} for k < n, t_{n,n} for k = n.
    let coeffs: Vec<S> = (1..=n).map(|k| if k < n { row.delta(k) } else { row.t(n) }).collect();

    let scalar_rhs = coeffs
        .iter()
        .enumerate()
        .fold(S::zero(), |a, (i, c)| a + c.clone() * S::from_i64(i as i64 + 1));
    let scalar_dev = (row.sum().clone() - scalar_rhs.clone()).abs();

    let lhs = matrix_mean(f, row)?;
    let rhs = means.combine_scaled(&coeffs);
    let witness = lhs.first_mismatch(&rhs);
    let mean_dev = lhs
        .values()
        .iter()
        .zip(rhs.values())
        .map(|(a, b)| (a.clone() - b.clone()).abs())
        .fold(S::zero(), |m, v| if v > m { v } else { m });

    let scalar_ok = row.sum().approx_eq(&scalar_rhs);
    let verdict = match (scalar_ok, witness) {
        (true, None) => IdentityVerdict::Pass,
        (_, Some(cell)) => IdentityVerdict::Fail { witness_cell: Some(cell) },
        (false, None) => IdentityVerdict::Fail { witness_cell: None },
    };
    let max_deviation = if scalar_dev > mean_dev { scalar_dev } else { mean_dev };
    Ok(KernelIdentityReport {
        id: CheckId::Abel,
        n,
        k: None,
        rank: f.rank(),
        verdict,
        max_deviation,
    })
}

/// One line of a regularity table.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityRow<S> {
    pub n: u64,
    /// `q_{n-1} / Q_n`; tends to zero exactly for regular Nörlund methods.
    pub ratio: S,
    /// `n^(γ-1) / Q_n^γ Σ_{k<n} q_k^γ`.
    pub ms1: f64,
}

/// Regularity diagnostics of a Nörlund scheme for `1 <= n <= n_max`.
pub fn regularity_diagnostics<S: Scalar>(
    scheme: &WeightScheme<S>,
    n_max: u64,
    gamma: f64,
) -> Result<Vec<RegularityRow<S>>> {
    if !scheme.is_norlund() {
        return Err(Error::NotNorlund(scheme.to_string()));
    }
    if !(gamma > 1.0 && gamma <= 2.0) {
        return Err(Error::InvalidParameters(format!("gamma must lie in (1, 2], got {gamma}")));
    }
    let q = scheme.norlund_weights(n_max)?;
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut big_q = S::zero();
    let mut power_sum = 0.0f64;
    for n in 1..=n_max {
        let qn1 = q[n as usize - 1].clone();
        big_q = big_q + qn1.clone();
        power_sum += qn1.to_f64().powf(gamma);
        let ratio = qn1 / big_q.clone();
        let ms1 = (n as f64).powf(gamma - 1.0) / big_q.to_f64().powf(gamma) * power_sum;
        rows.push(RegularityRow { n, ratio, ms1 });
    }
    Ok(rows)
}
