//! Walsh, Rademacher, Dirichlet, Fejér and matrix-transform kernels.
//!
//! Dirichlet kernels and the scaled Fejér kernels `n K_n` are integer valued, so they are
//! built in `i64` and converted to the requested scalar type at the boundary.

use crate::dyadic::{order, rank_for_index, reverse_bits, StepFunction, MAX_RANK};
use crate::error::{Error, Result};
use crate::means::TriangularRow;
use crate::scalar::{rational, Scalar};

fn check_index(n: u64, rank: u32) -> Result<()> {
    if rank > MAX_RANK {
        return Err(Error::InvalidParameters(format!("rank {rank} exceeds {MAX_RANK}")));
    }
    if n > 1u64 << rank {
        return Err(Error::IndexTooLarge { index: n, rank });
    }
    Ok(())
}

/// `w_k` as ±1 cell values.
pub fn walsh_ints(k: u64, rank: u32) -> Result<Vec<i64>> {
    if rank > MAX_RANK || k >> rank != 0 {
        return Err(Error::IndexTooLarge { index: k, rank });
    }
    Ok((0..1usize << rank)
        .map(|x| {
            if (k & reverse_bits(x, rank) as u64).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// `D_n = Σ_{k<n} w_k`, summed directly.
pub fn dirichlet_ints(n: u64, rank: u32) -> Result<Vec<i64>> {
    check_index(n, rank)?;
    let mut acc = vec![0i64; 1 << rank];
    for k in 0..n {
        add_walsh(&mut acc, k, rank, 1);
    }
    Ok(acc)
}

/// `n K_n = Σ_{k=1}^n D_k`; zero for `n = 0`.
pub fn fejer_scaled_ints(n: u64, rank: u32) -> Result<Vec<i64>> {
    check_index(n, rank)?;
    let mut d = vec![0i64; 1 << rank];
    let mut acc = vec![0i64; 1 << rank];
    for k in 0..n {
        add_walsh(&mut d, k, rank, 1);
        for (a, v) in acc.iter_mut().zip(&d) {
            *a += v;
        }
    }
    Ok(acc)
}

fn add_walsh(acc: &mut [i64], k: u64, rank: u32, sign: i64) {
    for (x, a) in acc.iter_mut().enumerate() {
        if (k & reverse_bits(x, rank) as u64).count_ones().is_multiple_of(2) {
            *a += sign;
        } else {
            *a -= sign;
        }
    }
}

/// All `D_k` and `k K_k` for `0 <= k <= n_max` at one rank.
#[derive(Clone, Debug)]
pub struct KernelTable {
    rank: u32,
    dirichlet: Vec<Vec<i64>>,
    fejer_scaled: Vec<Vec<i64>>,
}

impl KernelTable {
    pub fn new(rank: u32, n_max: u64) -> Result<Self> {
        check_index(n_max, rank)?;
        let cells = 1usize << rank;
        let mut dirichlet = Vec::with_capacity(n_max as usize + 1);
        let mut fejer_scaled = Vec::with_capacity(n_max as usize + 1);
        let mut d = vec![0i64; cells];
        let mut s = vec![0i64; cells];
        dirichlet.push(d.clone());
        fejer_scaled.push(s.clone());
        for k in 0..n_max {
            add_walsh(&mut d, k, rank, 1);
            for (a, v) in s.iter_mut().zip(&d) {
                *a += v;
            }
            dirichlet.push(d.clone());
            fejer_scaled.push(s.clone());
        }
        Ok(KernelTable { rank, dirichlet, fejer_scaled })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn n_max(&self) -> u64 {
        self.dirichlet.len() as u64 - 1
    }

    pub fn dirichlet(&self, k: u64) -> &[i64] {
        &self.dirichlet[k as usize]
    }

    /// `k K_k`.
    pub fn fejer_scaled(&self, k: u64) -> &[i64] {
        &self.fejer_scaled[k as usize]
    }
}

pub fn walsh_function<S: Scalar>(k: u64, rank: u32) -> Result<StepFunction<S>> {
    Ok(StepFunction::from_ints(rank, &walsh_ints(k, rank)?))
}

/// `r_j = w_{2^j}`.
pub fn rademacher_function<S: Scalar>(j: u32, rank: u32) -> Result<StepFunction<S>> {
    if j >= rank {
        return Err(Error::InvalidParameters(format!("r_{j} is not constant on rank-{rank} cells")));
    }
    walsh_function(1u64 << j, rank)
}

pub fn dirichlet_kernel<S: Scalar>(n: u64, rank: u32) -> Result<StepFunction<S>> {
    Ok(StepFunction::from_ints(rank, &dirichlet_ints(n, rank)?))
}

pub fn fejer_kernel<S: Scalar>(n: u64, rank: u32) -> Result<StepFunction<S>> {
    if n == 0 {
        return Err(Error::InvalidParameters("K_0 is undefined".into()));
    }
    let scaled = fejer_scaled_ints(n, rank)?;
    let n_s = S::from_i64(n as i64);
    Ok(StepFunction::from_ints(rank, &scaled).map(|v: &S| v.clone() / n_s.clone()))
}

/// `K_n^T = Σ_{k=1}^n t_{k,n} D_k` for arbitrary (sign-unrestricted) weights.
pub fn matrix_kernel_from_weights<S: Scalar>(weights: &[S], rank: u32) -> Result<StepFunction<S>> {
    let n = weights.len() as u64;
    check_index(n, rank)?;
    let cells = 1usize << rank;
    let mut total = vec![S::zero(); cells];
    let mut d = vec![0i64; cells];
    // Stream D_k in chunks so memory stays O(chunk * 2^rank).
    const CHUNK: usize = 256;
    let mut k = 0usize;
    while k < weights.len() {
        let end = (k + CHUNK).min(weights.len());
        let mut cols = Vec::with_capacity(end - k);
        for j in k..end {
            add_walsh(&mut d, j as u64, rank, 1); // d = D_{j+1}
            cols.push(d.clone());
        }
        let refs: Vec<&[i64]> = cols.iter().map(|c| c.as_slice()).collect();
        let part = S::combine_int(&weights[k..end], &refs);
        for (t, p) in total.iter_mut().zip(part) {
            *t = t.clone() + p;
        }
        k = end;
    }
    StepFunction::new(rank, total)
}

pub fn matrix_kernel<S: Scalar>(row: &TriangularRow<S>, rank: u32) -> Result<StepFunction<S>> {
    matrix_kernel_from_weights(row.weights(), rank)
}

/// One row of an `||K_n||_1` scan.
#[derive(Clone, Debug, PartialEq)]
pub struct L1ScanRow<S> {
    pub n: u64,
    pub norm: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct L1Scan<S> {
    pub rank: u32,
    pub rows: Vec<L1ScanRow<S>>,
    /// `(argmax, max)`, absent for an empty scan.
    pub max: Option<(u64, S)>,
}

impl<S: Scalar> L1Scan<S> {
    /// Every entry is at most `17/15`.
    pub fn within_toledo_bound(&self) -> bool {
        let bound = S::from_ratio(17, 15);
        self.rows.iter().all(|r| r.norm.approx_le(&bound))
    }

    pub fn within_yano_bound(&self) -> bool {
        let bound = S::from_i64(2);
        self.rows.iter().all(|r| r.norm.approx_le(&bound))
    }
}

/// `||K_n||_1` for `1 <= n <= n_max`, at the smallest rank that represents `K_{n_max}`.
pub fn kernel_l1_scan<S: Scalar>(n_max: u64) -> Result<L1Scan<S>> {
    let rank = rank_for_index(n_max.max(1));
    check_index(n_max, rank)?;
    let cells = 1usize << rank;
    let mut d = vec![0i64; cells];
    let mut s = vec![0i64; cells];
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut max: Option<(u64, S)> = None;
    for n in 1..=n_max {
        add_walsh(&mut d, n - 1, rank, 1);
        for (a, v) in s.iter_mut().zip(&d) {
            *a += v;
        }
        // ||K_n||_1 = Σ |n K_n| / (n 2^rank)
        let abs_sum: i64 = s.iter().map(|v| v.abs()).sum();
        let norm = S::from_rational(&rational(abs_sum, (n as i64) << rank));
        if max.as_ref().is_none_or(|(_, m)| norm > *m) {
            max = Some((n, norm.clone()));
        }
        rows.push(L1ScanRow { n, norm });
    }
    Ok(L1Scan { rank, rows, max })
}

/// Default verification rank: `|n| + 1`, the smallest rank on which `r_{|n|}` is a step function.
pub fn default_rank(n: u64) -> u32 {
    if n == 0 {
        1
    } else {
        order(n) + 1
    }
}

/// `(2^n + 1) / 2` on `I_n`, `2^(t-1)` where `x ∈ I_t \ I_{t+1}` and `x + e_t ∈ I_n`, zero elsewhere.
pub fn gat_piecewise<S: Scalar>(n: u32, rank: u32) -> Result<StepFunction<S>> {
    if n > rank {
        return Err(Error::IndexTooLarge { index: 1u64 << n, rank });
    }
    let values = (0..1usize << rank)
        .map(|x| {
            let head = x >> (rank - n); // coordinates x_0..x_{n-1}
            if head == 0 {
                return S::from_ratio((1i64 << n) + 1, 2);
            }
            // x + e_t ∈ I_n with x ∈ I_t \ I_{t+1}: exactly one of the first n coordinates is set.
            if head.count_ones() == 1 {
                let t = n - 1 - head.trailing_zeros();
                return S::from_ratio(1i64 << t, 2);
            }
            S::zero()
        })
        .collect();
    StepFunction::new(rank, values)
}

/// `2^n` on `I_n`, zero elsewhere.
pub fn paley_piecewise<S: Scalar>(n: u32, rank: u32) -> Result<StepFunction<S>> {
    if n > rank {
        return Err(Error::IndexTooLarge { index: 1u64 << n, rank });
    }
    let values = (0..1usize << rank)
        .map(|x| if x >> (rank - n) == 0 { S::from_i64(1i64 << n) } else { S::zero() })
        .collect();
    StepFunction::new(rank, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rational_int, Rational};

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rational(a, b)).collect()
    }

    #[test]
    fn walsh_examples() {
        let w0: StepFunction<Rational> = walsh_function(0, 3).unwrap();
        assert_eq!(w0, StepFunction::constant(3, rational_int(1)));
        assert_eq!(walsh_ints(1, 1).unwrap(), vec![1, -1]);
        assert_eq!(walsh_ints(3, 2).unwrap(), vec![1, -1, -1, 1]);
        // w_1 = r_0 depends on x_0, the most significant index bit.
        assert_eq!(walsh_ints(1, 2).unwrap(), vec![1, 1, -1, -1]);
        assert!(walsh_ints(4, 2).is_err());
    }

    #[test]
    fn rademacher_matches_definition() {
        for rank in 1..5u32 {
            for j in 0..rank {
                let r: StepFunction<Rational> = rademacher_function(j, rank).unwrap();
                for x in 0..1usize << rank {
                    let xj = (x >> (rank - 1 - j)) & 1;
                    let expect = if xj == 0 { 1 } else { -1 };
                    assert_eq!(r.values()[x], rational_int(expect));
                }
            }
        }
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_ints(8, 3).unwrap(), vec![8, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(dirichlet_ints(1, 4).unwrap(), vec![1; 16]);
        assert_eq!(dirichlet_ints(3, 2).unwrap(), vec![3, 1, 1, -1]);
        assert_eq!(dirichlet_ints(0, 2).unwrap(), vec![0; 4]);
        assert!(dirichlet_ints(5, 2).is_err());
    }

    #[test]
    fn fejer_examples() {
        let k2: StepFunction<Rational> = fejer_kernel(2, 2).unwrap();
        assert_eq!(k2.values(), &q(&[(3, 2), (3, 2), (1, 2), (1, 2)])[..]);
        let k1: StepFunction<Rational> = fejer_kernel(1, 3).unwrap();
        assert_eq!(k1, StepFunction::constant(3, rational_int(1)));
        let k3: StepFunction<Rational> = fejer_kernel(3, 2).unwrap();
        assert_eq!(k3.values(), &q(&[(2, 1), (4, 3), (2, 3), (0, 1)])[..]);
        assert!(fejer_kernel::<Rational>(0, 2).is_err());
    }

    #[test]
    fn matrix_kernel_special_rows() {
        let n = 5u64;
        let uniform = vec![rational(1, 5); 5];
        let k: StepFunction<Rational> = matrix_kernel_from_weights(&uniform, 3).unwrap();
        assert_eq!(k, fejer_kernel(n, 3).unwrap());
        let mut spike = vec![rational_int(0); 5];
        spike[4] = rational_int(1);
        let k: StepFunction<Rational> = matrix_kernel_from_weights(&spike, 3).unwrap();
        assert_eq!(k, dirichlet_kernel(5, 3).unwrap());
        assert!(matrix_kernel_from_weights(&uniform, 2).is_err());
    }

    #[test]
    fn kernel_table_matches_direct_builders() {
        let t = KernelTable::new(4, 16).unwrap();
        for k in 0..=16 {
            assert_eq!(t.dirichlet(k), dirichlet_ints(k, 4).unwrap().as_slice());
            assert_eq!(t.fejer_scaled(k), fejer_scaled_ints(k, 4).unwrap().as_slice());
        }
    }

    #[test]
    fn l1_scan_examples() {
        let scan: L1Scan<Rational> = kernel_l1_scan(4).unwrap();
        assert_eq!(scan.rows[0], L1ScanRow { n: 1, norm: rational_int(1) });
        assert_eq!(scan.rows[2], L1ScanRow { n: 3, norm: rational_int(1) });
        assert!(scan.within_toledo_bound());
        let empty: L1Scan<Rational> = kernel_l1_scan(0).unwrap();
        assert!(empty.rows.is_empty() && empty.max.is_none());
    }

    #[test]
    fn l1_scan_is_rank_independent() {
        // ||K_3||_1 at rank 2 (from the scan to 4) and at rank 3 (scan to 8) agree.
        let a: L1Scan<Rational> = kernel_l1_scan(4).unwrap();
        let b: L1Scan<Rational> = kernel_l1_scan(8).unwrap();
        for i in 0..4 {
            assert_eq!(a.rows[i], b.rows[i]);
        }
    }

    #[test]
    fn gat_form_small_case() {
        // K_2 at rank 2 from the piecewise form.
        let g: StepFunction<Rational> = gat_piecewise(1, 2).unwrap();
        assert_eq!(g.values(), &q(&[(3, 2), (3, 2), (1, 2), (1, 2)])[..]);
    }
}
