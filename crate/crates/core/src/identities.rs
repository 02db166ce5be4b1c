//! Exhaustive verification of the kernel lemmas.
//!
//! Every check evaluates both sides cell by cell in exact arithmetic. Most kernels involved
//! are integer valued once scaled (`D_k`, `k K_k`), so the integer identities never leave `i64`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dyadic::order;
use crate::error::{Error, Result};
use crate::kernels::{
    default_rank, dirichlet_ints, fejer_scaled_ints, gat_piecewise, matrix_kernel_from_weights,
    paley_piecewise, walsh_ints, KernelTable,
};
use crate::scalar::{rational, rational_int, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelIdentityId {
    /// `D_{2^n} = 2^n 1_{I_n}`.
    Paley,
    /// `D_{2^n - k} = D_{2^n} - w_{2^n - 1} D_k`.
    DirichletComplement,
    /// Piecewise form of `K_{2^n}`.
    GatK2n,
    /// `n K_n = 2^k K_{2^k} + m D_{2^k} + r_k m K_m`, `n = 2^k + m`, `m <= 2^k`.
    Fine,
    /// `(2^n - 1) K_{2^n - 1} = 2^n K_{2^n} - D_{2^n}`.
    FejerShift,
    /// `||K_n||_1 <= 2`.
    Yano,
    /// `||K_n||_1 <= 17/15`.
    Toledo,
    /// `n |K_n| <= 3 Σ_{l <= |n|} 2^l K_{2^l}`.
    NknBound,
    /// Four-term decomposition of `K_n^T` for arbitrary real weights.
    Blahota,
    /// Three-term decomposition of `K_{2^n}^T`.
    BlahotaDyadic,
}

impl KernelIdentityId {
    pub const ALL: [KernelIdentityId; 10] = [
        KernelIdentityId::Paley,
        KernelIdentityId::DirichletComplement,
        KernelIdentityId::GatK2n,
        KernelIdentityId::Fine,
        KernelIdentityId::FejerShift,
        KernelIdentityId::Yano,
        KernelIdentityId::Toledo,
        KernelIdentityId::NknBound,
        KernelIdentityId::Blahota,
        KernelIdentityId::BlahotaDyadic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KernelIdentityId::Paley => "PALEY",
            KernelIdentityId::DirichletComplement => "DIRICHLET_COMPLEMENT",
            KernelIdentityId::GatK2n => "GAT_K2N",
            KernelIdentityId::Fine => "FINE",
            KernelIdentityId::FejerShift => "FEJER_SHIFT",
            KernelIdentityId::Yano => "YANO",
            KernelIdentityId::Toledo => "TOLEDO",
            KernelIdentityId::NknBound => "NKN_BOUND",
            KernelIdentityId::Blahota => "BLAHOTA",
            KernelIdentityId::BlahotaDyadic => "BLAHOTA_DYADIC",
        }
    }

    /// Whether `n` in [`IdentityParams`] is the exponent of `2^n` rather than the index itself.
    pub fn takes_exponent(&self) -> bool {
        matches!(
            self,
            KernelIdentityId::Paley
                | KernelIdentityId::DirichletComplement
                | KernelIdentityId::GatK2n
                | KernelIdentityId::FejerShift
                | KernelIdentityId::BlahotaDyadic
        )
    }

    pub fn is_inequality(&self) -> bool {
        matches!(self, KernelIdentityId::Yano | KernelIdentityId::Toledo | KernelIdentityId::NknBound)
    }
}

impl fmt::Display for KernelIdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelIdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace('-', "_");
        KernelIdentityId::ALL
            .into_iter()
            .find(|id| id.name() == t)
            .ok_or_else(|| Error::Parse(format!("unknown kernel identity '{s}'")))
    }
}

/// Identifier of any exact check producing a [`KernelIdentityReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Kernel(KernelIdentityId),
    /// Abel-transform identities linking a matrix mean to Fejér means.
    Abel,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::Kernel(id) => id.fmt(f),
            CheckId::Abel => f.write_str("ABEL"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Pass,
    /// `witness_cell` is absent when the failing quantity is a norm or a scalar.
    Fail { witness_cell: Option<usize> },
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityVerdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelIdentityReport<S> {
    pub id: CheckId,
    pub n: u64,
    pub k: Option<u64>,
    pub rank: u32,
    pub verdict: IdentityVerdict,
    /// Largest `|lhs - rhs|` for equalities, largest `lhs - rhs` above zero for inequalities.
    pub max_deviation: S,
}

/// Parameters of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityParams {
    /// Exponent for ids with [`KernelIdentityId::takes_exponent`], index otherwise.
    pub n: u64,
    /// `k` of DIRICHLET_COMPLEMENT and FINE.
    pub k: Option<u64>,
    /// Defaults to the smallest rank on which every term is a step function.
    pub rank: Option<u32>,
    /// Row for BLAHOTA and BLAHOTA_DYADIC; any signs allowed.
    pub weights: Vec<Rational>,
    /// Perturb one left-hand-side cell. Used to exercise the failure path.
    pub inject_fault: bool,
}

impl IdentityParams {
    pub fn new(n: u64) -> Self {
        IdentityParams { n, k: None, rank: None, weights: Vec::new(), inject_fault: false }
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_rank(mut self, rank: u32) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Self {
        self.weights = weights;
        self
    }
}

enum Comparison {
    Equal(Vec<Rational>, Vec<Rational>),
    CellwiseLe(Vec<Rational>, Vec<Rational>),
    NormLe(Rational, Rational),
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rational_int(x)).collect()
}

fn exponent(n: u64) -> Result<u32> {
    if n > 24 {
        return Err(Error::InvalidParameters(format!("exponent {n} is too large")));
    }
    Ok(n as u32)
}

fn required_rank(id: KernelIdentityId, p: &IdentityParams) -> Result<u32> {
    Ok(match id {
        KernelIdentityId::Paley
        | KernelIdentityId::DirichletComplement
        | KernelIdentityId::GatK2n
        | KernelIdentityId::FejerShift
        | KernelIdentityId::BlahotaDyadic => exponent(p.n)? + 1,
        _ => default_rank(p.n),
    })
}

fn judge(
    id: KernelIdentityId,
    p: &IdentityParams,
    rank: u32,
    comparison: Comparison,
) -> KernelIdentityReport<Rational> {
    let (verdict, max_deviation) = match comparison {
        Comparison::Equal(mut lhs, rhs) => {
            if p.inject_fault {
                lhs[0] += rational_int(1);
            }
            let mut witness = None;
            let mut dev = Rational::zero();
            for (i, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
                let d = (a - b).abs();
                if !d.is_zero() && witness.is_none() {
                    witness = Some(i);
                }
                if d > dev {
                    dev = d;
                }
            }
            (witness.map_or(IdentityVerdict::Pass, |c| IdentityVerdict::Fail { witness_cell: Some(c) }), dev)
        }
        Comparison::CellwiseLe(mut lhs, rhs) => {
            if p.inject_fault {
                lhs[0] = rhs[0].clone() + rational_int(1);
            }
            let mut witness = None;
            let mut dev = Rational::zero();
            for (i, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
                let d = a - b;
                if d > Rational::zero() {
                    witness.get_or_insert(i);
                    if d > dev {
                        dev = d;
                    }
                }
            }
            (witness.map_or(IdentityVerdict::Pass, |c| IdentityVerdict::Fail { witness_cell: Some(c) }), dev)
        }
        Comparison::NormLe(mut value, bound) => {
            if p.inject_fault {
                value = bound.clone() + rational_int(1);
            }
            let d = &value - &bound;
            if d > Rational::zero() {
                (IdentityVerdict::Fail { witness_cell: None }, d)
            } else {
                (IdentityVerdict::Pass, Rational::zero())
            }
        }
    };
    KernelIdentityReport { id: CheckId::Kernel(id), n: p.n, k: p.k, rank, verdict, max_deviation }
}

/// Evaluates the lemma `id` at `params` in exact arithmetic.
pub fn verify_kernel_identity(id: KernelIdentityId, params: &IdentityParams) -> Result<KernelIdentityReport<Rational>> {
    let rank = match params.rank {
        Some(r) => r,
        None => required_rank(id, params)?,
    };
    let cmp = match id {
        KernelIdentityId::Paley => {
            let e = exponent(params.n)?;
            let lhs = dirichlet_ints(1 << e, rank)?;
            Comparison::Equal(ints(&lhs), paley_piecewise::<Rational>(e, rank)?.into_values())
        }
        KernelIdentityId::DirichletComplement => {
            let e = exponent(params.n)?;
            let big = 1u64 << e;
            let k = params.k.ok_or_else(|| Error::InvalidParameters("DIRICHLET_COMPLEMENT needs k".into()))?;
            if k >= big {
                return Err(Error::InvalidParameters(format!("k = {k} must be below 2^{e}")));
            }
            let lhs = dirichlet_ints(big - k, rank)?;
            let d_big = dirichlet_ints(big, rank)?;
            let w = walsh_ints(big - 1, rank)?;
            let d_k = dirichlet_ints(k, rank)?;
            let rhs: Vec<i64> = (0..lhs.len()).map(|x| d_big[x] - w[x] * d_k[x]).collect();
            Comparison::Equal(ints(&lhs), ints(&rhs))
        }
        KernelIdentityId::GatK2n => {
            let e = exponent(params.n)?;
            let big = 1u64 << e;
            let scaled = fejer_scaled_ints(big, rank)?;
            let lhs = scaled.iter().map(|&v| rational(v, big as i64)).collect();
            Comparison::Equal(lhs, gat_piecewise::<Rational>(e, rank)?.into_values())
        }
        KernelIdentityId::Fine => {
            let n = params.n;
            let k = params
                .k
                .map_or_else(|| Ok(order(n.max(1))), exponent)?;
            let base = 1u64 << k;
            if n < base || n - base > base {
                return Err(Error::InvalidParameters(format!(
                    "FINE needs n = 2^k + m with 0 <= m <= 2^k, got n = {n}, k = {k}"
                )));
            }
            if k >= rank {
                return Err(Error::IndexTooLarge { index: 1u64 << (k + 1), rank });
            }
            let m = n - base;
            let lhs = fejer_scaled_ints(n, rank)?;
            let a = fejer_scaled_ints(base, rank)?;
            let d = dirichlet_ints(base, rank)?;
            let r = walsh_ints(base, rank)?;
            let mk = fejer_scaled_ints(m, rank)?;
            let rhs: Vec<i64> = (0..lhs.len()).map(|x| a[x] + m as i64 * d[x] + r[x] * mk[x]).collect();
            Comparison::Equal(ints(&lhs), ints(&rhs))
        }
        KernelIdentityId::FejerShift => {
            let e = exponent(params.n)?;
            let big = 1u64 << e;
            let lhs = fejer_scaled_ints(big - 1, rank)?;
            let a = fejer_scaled_ints(big, rank)?;
            let d = dirichlet_ints(big, rank)?;
            let rhs: Vec<i64> = a.iter().zip(&d).map(|(x, y)| x - y).collect();
            Comparison::Equal(ints(&lhs), ints(&rhs))
        }
        KernelIdentityId::Yano | KernelIdentityId::Toledo => {
            let n = params.n;
            if n == 0 {
                return Err(Error::InvalidParameters("K_0 is undefined".into()));
            }
            let scaled = fejer_scaled_ints(n, rank)?;
            let abs_sum: i64 = scaled.iter().map(|v| v.abs()).sum();
            let norm = rational(abs_sum, (n as i64) << rank);
            let bound = if id == KernelIdentityId::Yano { rational_int(2) } else { rational(17, 15) };
            Comparison::NormLe(norm, bound)
        }
        KernelIdentityId::NknBound => {
            let n = params.n;
            if n == 0 {
                return Err(Error::InvalidParameters("K_0 is undefined".into()));
            }
            let lhs: Vec<i64> = fejer_scaled_ints(n, rank)?.into_iter().map(i64::abs).collect();
            let mut rhs = vec![0i64; lhs.len()];
            for l in 0..=order(n) {
                for (r, v) in rhs.iter_mut().zip(fejer_scaled_ints(1 << l, rank)?) {
                    *r += 3 * v;
                }
            }
            Comparison::CellwiseLe(ints(&lhs), ints(&rhs))
        }
        KernelIdentityId::Blahota => {
            if params.weights.len() as u64 != params.n || params.n == 0 {
                return Err(Error::InvalidParameters(format!(
                    "BLAHOTA needs n >= 1 weights, got n = {} with {} weights",
                    params.n,
                    params.weights.len()
                )));
            }
            let lhs = matrix_kernel_from_weights(&params.weights, rank)?.into_values();
            Comparison::Equal(lhs, blahota_rhs(&params.weights, rank, true)?)
        }
        KernelIdentityId::BlahotaDyadic => {
            let e = exponent(params.n)?;
            if params.weights.len() as u64 != 1u64 << e {
                return Err(Error::InvalidParameters(format!(
                    "BLAHOTA_DYADIC with n = {e} needs 2^{e} weights, got {}",
                    params.weights.len()
                )));
            }
            let lhs = matrix_kernel_from_weights(&params.weights, rank)?.into_values();
            Comparison::Equal(lhs, blahota_rhs(&params.weights, rank, false)?)
        }
    };
    Ok(judge(id, params, rank, cmp))
}

/// Right-hand side of the Blahota decomposition for `t = weights` (`t_{k,n} = weights[k-1]`).
///
/// With `tail = false` the last sum is dropped, which is the dyadic corollary.
fn blahota_rhs(weights: &[Rational], rank: u32, tail: bool) -> Result<Vec<Rational>> {
    let n = weights.len() as u64;
    let a = order(n);
    let big = 1u64 << a;
    let table = KernelTable::new(rank, n)?;
    let w = walsh_ints(big - 1, rank)?;
    let t = |k: u64| -> Rational {
        if k >= 1 && k <= n {
            weights[k as usize - 1].clone()
        } else {
            Rational::zero()
        }
    };
    let delta = |k: u64| t(k) - t(k + 1);

    let total: Rational = weights.iter().sum();
    let mut out = Rational::combine_int(&[total], &[table.dirichlet(big)]);

    // w_{2^a - 1} · ( -t_1 (2^a - 1) K_{2^a - 1} + Σ_{k=1}^{2^a - 2} Δt_{2^a - k - 1} k K_k )
    let mut coeffs = vec![-t(1)];
    let mut cols: Vec<&[i64]> = vec![table.fejer_scaled(big - 1)];
    for k in 1..big.saturating_sub(1) {
        coeffs.push(delta(big - k - 1));
        cols.push(table.fejer_scaled(k));
    }
    let inner = Rational::combine_int(&coeffs, &cols);
    for ((o, i), &s) in out.iter_mut().zip(inner).zip(&w) {
        if s > 0 {
            *o += i;
        } else {
            *o -= i;
        }
    }

    if tail && n > big {
        if a >= rank {
            return Err(Error::IndexTooLarge { index: 1u64 << (a + 1), rank });
        }
        let r = walsh_ints(big, rank)?;
        let coeffs: Vec<Rational> = (1..=n - big).map(|k| t(big + k)).collect();
        let cols: Vec<&[i64]> = (1..=n - big).map(|k| table.dirichlet(k)).collect();
        let part = Rational::combine_int(&coeffs, &cols);
        for ((o, p), &s) in out.iter_mut().zip(part).zip(&r) {
            if s > 0 {
                *o += p;
            } else {
                *o -= p;
            }
        }
    }
    Ok(out)
}

/// Parameter grid for the identity suite.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityGrid {
    /// Indices (or `2^exponent`) range over `n_min..=n_max`.
    pub n_min: u64,
    pub n_max: u64,
    /// Rank override; ignored where it is too small to represent every term.
    pub rank: Option<u32>,
    pub seed: u64,
    /// Random rows per index for BLAHOTA and BLAHOTA_DYADIC.
    pub blahota_rows: usize,
    pub inject_fault: bool,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        IdentityGrid { n_min: 1, n_max: 256, rank: None, seed: 0, blahota_rows: 50, inject_fault: false }
    }
}

/// Indices of the thinned BLAHOTA grid: every `n <= 32`, every eighth index beyond,
/// and the neighbourhoods `2^m - 1, 2^m, 2^m + 1`.
pub fn thinned_indices(n_min: u64, n_max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (n_min.max(1)..=n_max)
        .filter(|&n| n <= 32 || n % 8 == 0 || (n + 1).is_power_of_two() || n.is_power_of_two() || (n - 1).is_power_of_two())
        .collect();
    v.dedup();
    v
}

/// Sign-unrestricted rational row of length `n`, reproducible from `(seed, n, index)`.
pub fn random_signed_row(seed: u64, n: u64, index: usize) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((index as u64) << 40));
    (0..n)
        .map(|_| rational(rng.gen_range(-24..=24), rng.gen_range(1..=12)))
        .collect()
}

fn exponents(n_min: u64, n_max: u64) -> impl Iterator<Item = u64> {
    (0..=24u64).filter(move |&e| {
        let v = 1u64 << e;
        v >= n_min && v <= n_max
    })
}

/// All parameter sets of `id` in `grid`.
pub fn default_cases(id: KernelIdentityId, grid: &IdentityGrid) -> Vec<IdentityParams> {
    let mut out = Vec::new();
    let fit_rank = |p: IdentityParams| -> IdentityParams {
        let mut p = p;
        p.inject_fault = grid.inject_fault;
        if let Some(r) = grid.rank {
            if let Ok(req) = required_rank(id, &p) {
                p.rank = Some(r.max(req));
            }
        }
        p
    };
    match id {
        KernelIdentityId::Paley | KernelIdentityId::GatK2n | KernelIdentityId::FejerShift => {
            for e in exponents(grid.n_min, grid.n_max) {
                out.push(fit_rank(IdentityParams::new(e)));
            }
        }
        KernelIdentityId::DirichletComplement => {
            for e in exponents(grid.n_min, grid.n_max) {
                for k in 0..1u64 << e {
                    out.push(fit_rank(IdentityParams::new(e).with_k(k)));
                }
            }
        }
        KernelIdentityId::Fine => {
            for n in grid.n_min.max(1)..=grid.n_max {
                let k = order(n);
                out.push(fit_rank(IdentityParams::new(n).with_k(k as u64)));
                if n.is_power_of_two() && k >= 1 {
                    // n = 2^(k-1) + 2^(k-1) as well
                    out.push(fit_rank(IdentityParams::new(n).with_k(k as u64 - 1)));
                }
            }
        }
        KernelIdentityId::Yano | KernelIdentityId::Toledo => {
            for n in grid.n_min.max(1)..=grid.n_max {
                out.push(fit_rank(IdentityParams::new(n)));
            }
        }
        KernelIdentityId::NknBound => {
            // One common rank for the whole grid.
            let common = grid.rank.unwrap_or(0).max(default_rank(grid.n_max));
            for n in grid.n_min.max(1)..=grid.n_max {
                let mut p = IdentityParams::new(n).with_rank(common);
                p.inject_fault = grid.inject_fault;
                out.push(p);
            }
        }
        KernelIdentityId::Blahota => {
            for n in thinned_indices(grid.n_min, grid.n_max) {
                for i in 0..grid.blahota_rows {
                    out.push(fit_rank(IdentityParams::new(n).with_weights(random_signed_row(grid.seed, n, i))));
                }
            }
        }
        KernelIdentityId::BlahotaDyadic => {
            for e in exponents(grid.n_min, grid.n_max) {
                for i in 0..grid.blahota_rows {
                    let row = random_signed_row(grid.seed ^ 0xd1ad, 1 << e, i);
                    out.push(fit_rank(IdentityParams::new(e).with_weights(row)));
                }
            }
        }
    }
    out
}

/// Summary of one identity over its grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub id: KernelIdentityId,
    pub cases: usize,
    pub failures: Vec<KernelIdentityReport<Rational>>,
    pub errors: Vec<(IdentityParams, Error)>,
    /// Largest deviation seen over all cases.
    pub max_deviation: Rational,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }
}

/// Runs every case of `id` in parallel; reports come back in grid order.
pub fn run_identity(id: KernelIdentityId, grid: &IdentityGrid) -> (SuiteSummary, Vec<KernelIdentityReport<Rational>>) {
    let cases = default_cases(id, grid);
    let results: Vec<Result<KernelIdentityReport<Rational>>> =
        cases.par_iter().map(|p| verify_kernel_identity(id, p)).collect();
    let mut reports = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    let mut max_deviation = Rational::zero();
    for (p, r) in cases.iter().zip(results) {
        match r {
            Ok(rep) => {
                if rep.max_deviation > max_deviation {
                    max_deviation = rep.max_deviation.clone();
                }
                if !rep.verdict.passed() {
                    failures.push(rep.clone());
                }
                reports.push(rep);
            }
            Err(e) => errors.push((p.clone(), e)),
        }
    }
    (SuiteSummary { id, cases: cases.len(), failures, errors, max_deviation }, reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::StepFunction;
    use crate::kernels::{dirichlet_kernel, fejer_kernel, walsh_function};

    fn pass(id: KernelIdentityId, p: IdentityParams) {
        let r = verify_kernel_identity(id, &p).unwrap();
        assert!(r.verdict.passed(), "{id} {p:?}: {r:?}");
        assert!(r.max_deviation.is_zero());
    }

    #[test]
    fn identity_names_round_trip() {
        for id in KernelIdentityId::ALL {
            assert_eq!(id.name().parse::<KernelIdentityId>().unwrap(), id);
        }
        assert_eq!("gat-k2n".parse::<KernelIdentityId>().unwrap(), KernelIdentityId::GatK2n);
        assert!("LEMMA".parse::<KernelIdentityId>().is_err());
    }

    #[test]
    fn fine_three_example() {
        pass(KernelIdentityId::Fine, IdentityParams::new(3).with_rank(2));
        let lhs = fejer_scaled_ints(3, 2).unwrap();
        assert_eq!(lhs, vec![6, 4, 2, 0]);
        // 2K_2 + D_2 + r_1 K_1 computed from the generic builders
        let k2: StepFunction<Rational> = fejer_kernel(2, 2).unwrap();
        let d2: StepFunction<Rational> = dirichlet_kernel(2, 2).unwrap();
        let r1: StepFunction<Rational> = walsh_function(2, 2).unwrap();
        let rhs = k2.scale(&rational_int(2)).add(&d2).add(&r1);
        assert_eq!(rhs, StepFunction::from_ints(2, &[6, 4, 2, 0]));
    }

    #[test]
    fn spec_examples_pass() {
        pass(KernelIdentityId::Paley, IdentityParams::new(5).with_rank(7));
        pass(KernelIdentityId::NknBound, IdentityParams::new(5).with_rank(6));
        pass(KernelIdentityId::Toledo, IdentityParams::new(3));
        pass(KernelIdentityId::GatK2n, IdentityParams::new(1).with_rank(2));
        pass(KernelIdentityId::FejerShift, IdentityParams::new(0));
        pass(KernelIdentityId::DirichletComplement, IdentityParams::new(3).with_k(5));
        pass(KernelIdentityId::Fine, IdentityParams::new(8).with_k(2));
    }

    #[test]
    fn blahota_small_rows() {
        for n in 1..=20u64 {
            for i in 0..3 {
                let w = random_signed_row(7, n, i);
                pass(KernelIdentityId::Blahota, IdentityParams::new(n).with_weights(w));
            }
        }
        for e in 0..=4u64 {
            let w = random_signed_row(3, 1 << e, 0);
            pass(KernelIdentityId::BlahotaDyadic, IdentityParams::new(e).with_weights(w));
        }
    }

    #[test]
    fn shape_violations_are_errors() {
        assert!(verify_kernel_identity(KernelIdentityId::Fine, &IdentityParams::new(7).with_k(1)).is_err());
        assert!(verify_kernel_identity(KernelIdentityId::DirichletComplement, &IdentityParams::new(2).with_k(4)).is_err());
        assert!(verify_kernel_identity(KernelIdentityId::Paley, &IdentityParams::new(4).with_rank(3)).is_err());
        assert!(verify_kernel_identity(KernelIdentityId::Blahota, &IdentityParams::new(3)).is_err());
    }

    #[test]
    fn injected_faults_are_caught() {
        for id in KernelIdentityId::ALL {
            let mut p = match id {
                KernelIdentityId::Blahota => IdentityParams::new(5).with_weights(random_signed_row(1, 5, 0)),
                KernelIdentityId::BlahotaDyadic => IdentityParams::new(2).with_weights(random_signed_row(1, 4, 0)),
                KernelIdentityId::DirichletComplement => IdentityParams::new(2).with_k(1),
                _ => IdentityParams::new(2),
            };
            p.inject_fault = true;
            let r = verify_kernel_identity(id, &p).unwrap();
            assert!(!r.verdict.passed(), "{id}");
            assert!(r.max_deviation > Rational::zero());
        }
    }

    #[test]
    fn thinned_grid_contains_dyadic_neighbourhoods() {
        let v = thinned_indices(1, 256);
        for n in [1, 32, 63, 64, 65, 127, 128, 129, 255, 256] {
            assert!(v.contains(&n), "{n}");
        }
        assert!(!v.contains(&34));
    }

    #[test]
    fn small_grid_passes() {
        let grid = IdentityGrid { n_max: 16, blahota_rows: 2, ..IdentityGrid::default() };
        for id in KernelIdentityId::ALL {
            let (s, _) = run_identity(id, &grid);
            assert!(s.passed(), "{id}: {:?}", s.failures.first());
            assert!(s.cases > 0);
        }
    }
}
