//! Approximation errors of matrix means and the known upper bounds for them.
//!
//! Every bound has the shape `A + c M`, where `A` and `M` are non-negative combinations of
//! the moduli `ω_p(f, 2^-j)`. Bounds with a published `c` are checked directly; for the others
//! the smallest `c*` making the inequality true is reported.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rayon::prelude::*;

use crate::corpus::LabeledFunction;
use crate::dyadic::{order, rank_for_index, StepFunction};
use crate::error::{Error, Result};
use crate::means::{matrix_mean, TriangularRow, WeightScheme};
use crate::norm::LpExponent;
use crate::real::Real;
use crate::scalar::{rational, Rational, Scalar};

/// `t_{n,n} <= C / n` stands in for the asymptotic hypothesis `t_{n,n} = O(1/n)`.
pub const TAIL_WEIGHT_CONSTANT: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Nörlund means, non-decreasing `q`.
    MsNondec,
    /// Nörlund means, non-increasing `q`.
    MsNoninc,
    /// Matrix means, non-decreasing rows with `t_{n,n} = O(1/n)`.
    BnA,
    /// Matrix means, non-increasing rows.
    BnB,
    /// Nörlund means, non-decreasing `q`, constants 18 and 12.
    AtMain,
    /// Non-increasing rows, constants 31/15 and 47/30.
    Bd41,
    /// Non-decreasing rows at dyadic indices.
    Bd42,
    /// Non-decreasing rows with `t_{n,n} = O(1/n)`.
    Bd43,
    /// Fejér means.
    Fejer3ts,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::MsNondec,
        TheoremId::MsNoninc,
        TheoremId::BnA,
        TheoremId::BnB,
        TheoremId::AtMain,
        TheoremId::Bd41,
        TheoremId::Bd42,
        TheoremId::Bd43,
        TheoremId::Fejer3ts,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::MsNondec => "MS_NONDEC",
            TheoremId::MsNoninc => "MS_NONINC",
            TheoremId::BnA => "BN_A",
            TheoremId::BnB => "BN_B",
            TheoremId::AtMain => "AT_MAIN",
            TheoremId::Bd41 => "BD4_1",
            TheoremId::Bd42 => "BD4_2",
            TheoremId::Bd43 => "BD4_3",
            TheoremId::Fejer3ts => "FEJER_3TS",
        }
    }

    /// Whether every constant of the bound is known, so that it can be checked outright.
    pub fn is_fully_specified(&self) -> bool {
        matches!(self, TheoremId::AtMain | TheoremId::Bd41 | TheoremId::Bd42 | TheoremId::Fejer3ts)
    }

    pub fn admits_infinity(&self) -> bool {
        matches!(self, TheoremId::MsNondec | TheoremId::MsNoninc | TheoremId::BnA | TheoremId::BnB | TheoremId::Bd41)
    }

    /// Only indices `n = 2^m` are in scope.
    pub fn dyadic_only(&self) -> bool {
        matches!(self, TheoremId::Bd42)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name() == t)
            .ok_or_else(|| Error::Parse(format!("unknown theorem '{s}'")))
    }
}

/// One summand of a right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsTerm {
    /// Index `j` of `ω_p(f, 2^-j)`.
    pub scale: u32,
    pub coefficient: Real,
    pub value: Real,
}

/// Right-hand side `A + c M` broken into terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsEvaluation {
    /// Terms of `A`, the part with known constants.
    pub specified: Vec<RhsTerm>,
    /// Terms of `M`, the part multiplied by an unknown `c`; empty for fully specified bounds.
    pub free: Vec<RhsTerm>,
    pub has_free_constant: bool,
}

fn sum(terms: &[RhsTerm]) -> Real {
    terms.iter().fold(Real::zero(), |acc, t| acc.add(&t.value))
}

impl RhsEvaluation {
    pub fn specified_total(&self) -> Real {
        sum(&self.specified)
    }

    pub fn free_total(&self) -> Real {
        sum(&self.free)
    }

    /// `A + c M`.
    pub fn total_with(&self, c: &Rational) -> Real {
        self.specified_total().add(&self.free_total().scale(c))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RhsOutcome {
    Evaluated(RhsEvaluation),
    HypothesisViolated(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundVerdict {
    Holds,
    /// The left-hand side exceeds a fully specified bound.
    Violated,
    /// The ordering of the two sides could not be certified.
    Undecided,
    /// Smallest `c` with `lhs <= A + c M`; `None` when no finite `c` works (`M = 0 < lhs - A`).
    MinConstant(Option<Real>),
    HypothesisViolated(String),
}

impl BoundVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            BoundVerdict::Holds => "holds",
            BoundVerdict::Violated => "violated",
            BoundVerdict::Undecided => "undecided",
            BoundVerdict::MinConstant(_) => "min-constant",
            BoundVerdict::HypothesisViolated(_) => "hypothesis-violated",
        }
    }

    /// Failure of a bound that should hold, or a `c*` that cannot be finite.
    pub fn is_failure(&self) -> bool {
        matches!(self, BoundVerdict::Violated | BoundVerdict::Undecided | BoundVerdict::MinConstant(None))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub n: u64,
    pub p: LpExponent,
    pub function: String,
    pub scheme: String,
    pub rank: u32,
    pub lhs: Real,
    /// `A` for bounds with a free constant, the whole bound otherwise; absent if hypotheses fail.
    pub rhs: Option<Real>,
    pub terms: Option<RhsEvaluation>,
    pub ratio: Option<Real>,
    pub verdict: BoundVerdict,
}

impl BoundReport {
    pub fn c_star(&self) -> Option<&Real> {
        match &self.verdict {
            BoundVerdict::MinConstant(Some(c)) => Some(c),
            _ => None,
        }
    }
}

/// `||σ_n^T(f) - f||_p`.
pub fn approximation_error<S: Scalar>(f: &StepFunction<S>, row: &TriangularRow<S>, p: &LpExponent) -> Result<Real> {
    Ok(matrix_mean(f, row)?.sub(f).lp_norm(p))
}

fn times<S: Scalar>(c: &S, w: &Real) -> Real {
    match c.to_real() {
        Real::Float(v) => Real::Float(v * w.to_f64()),
        r => w.scale(r.as_rational().expect("exact scalars are rational")),
    }
}

fn term<S: Scalar>(coefficient: S, scale: u32, moduli: &[Real]) -> RhsTerm {
    let value = times(&coefficient, &moduli[scale as usize]);
    RhsTerm { scale, coefficient: coefficient.to_real(), value }
}

fn is_monotone<S: Scalar>(v: &[S], non_decreasing: bool) -> bool {
    v.windows(2).all(|w| if non_decreasing { w[0] <= w[1] } else { w[1] <= w[0] })
}

fn pow2<S: Scalar>(j: u32) -> S {
    S::from_i64(1i64 << j)
}

/// Checks the hypotheses of `theorem`; `Err` carries the reason for a hypothesis violation.
fn check_hypotheses<S: Scalar>(
    theorem: TheoremId,
    scheme: Option<&WeightScheme<S>>,
    row: &TriangularRow<S>,
    p: &LpExponent,
) -> std::result::Result<Option<Vec<S>>, String> {
    let n = row.n();
    if p.is_infinite() && !theorem.admits_infinity() {
        return Err(format!("{theorem} needs p < infinity"));
    }
    let class = row.classify();
    let norlund_q = |want_non_decreasing: bool| -> std::result::Result<Option<Vec<S>>, String> {
        let scheme = scheme.filter(|s| s.is_norlund()).ok_or_else(|| format!("{theorem} needs a Norlund scheme"))?;
        let q = scheme.norlund_weights(n).map_err(|e| e.to_string())?;
        if !is_monotone(&q, want_non_decreasing) {
            let dir = if want_non_decreasing { "non-decreasing" } else { "non-increasing" };
            return Err(format!("q_0..q_{} is not {dir}", n - 1));
        }
        Ok(Some(q))
    };
    let tail_ok = || {
        // t_{n,n} <= C / n
        row.t(n).clone() * S::from_i64(n as i64) <= S::from_i64(TAIL_WEIGHT_CONSTANT)
    };
    match theorem {
        TheoremId::MsNondec | TheoremId::AtMain => return norlund_q(true),
        TheoremId::MsNoninc => return norlund_q(false),
        _ => {}
    }
    if !class.normalized {
        return Err("row does not sum to 1".into());
    }
    match theorem {
        TheoremId::BnA | TheoremId::Bd43 => {
            if !class.non_decreasing {
                return Err("row is not non-decreasing".into());
            }
            if !tail_ok() {
                return Err(format!("t_{{n,n}} exceeds {TAIL_WEIGHT_CONSTANT}/n"));
            }
        }
        TheoremId::BnB | TheoremId::Bd41 => {
            if !class.non_increasing {
                return Err("row is not non-increasing".into());
            }
        }
        TheoremId::Bd42 => {
            if !n.is_power_of_two() {
                return Err(format!("n = {n} is not a power of two"));
            }
            if !class.non_decreasing {
                return Err("row is not non-decreasing".into());
            }
        }
        TheoremId::Fejer3ts => {
            if !(class.non_decreasing && class.non_increasing) {
                return Err("row is not the Fejer row".into());
            }
        }
        _ => unreachable!(),
    }
    Ok(None)
}

/// Right-hand side of `theorem` for the row of index `n`, with `moduli[j] = ω_p(f, 2^-j)`.
///
/// `moduli` must reach `|n|`. `scheme` is needed for the Nörlund-only bounds.
pub fn evaluate_rhs_with_moduli<S: Scalar>(
    theorem: TheoremId,
    scheme: Option<&WeightScheme<S>>,
    row: &TriangularRow<S>,
    p: &LpExponent,
    moduli: &[Real],
) -> Result<RhsOutcome> {
    let n = row.n();
    let a = order(n);
    if moduli.len() <= a as usize {
        return Err(Error::ScaleTooFine { scale: a, rank: moduli.len() as u32 - 1 });
    }
    let q = match check_hypotheses(theorem, scheme, row, p) {
        Ok(q) => q,
        Err(reason) => return Ok(RhsOutcome::HypothesisViolated(reason)),
    };
    let mut specified = Vec::new();
    let mut free = Vec::new();
    let ratio = |num: i64, den: i64| S::from_ratio(num, den);
    match theorem {
        TheoremId::MsNondec => {
            // (5 / 2Q_n) 2^j q_{n-2^j} = (5/2) 2^j t_{2^j,n}
            for j in 0..a {
                specified.push(term(ratio(5, 2) * pow2::<S>(j) * row.t(1 << j), j, moduli));
            }
            free.push(term(S::one(), a, moduli));
        }
        TheoremId::MsNoninc => {
            let q = q.expect("Norlund weights were checked");
            let big_q = |m: i64| WeightScheme::norlund_partial_sum(&q, m);
            let total = big_q(n as i64);
            for j in 0..a {
                let d = big_q(n as i64 - (1 << j) - 1) - big_q(n as i64 - (1 << (j + 1)) - 1);
                specified.push(term(ratio(5, 2) * d / total.clone(), j, moduli));
            }
            free.push(term(S::one(), a, moduli));
        }
        TheoremId::BnA => {
            for j in 0..a {
                specified.push(term(S::from_i64(5) * pow2::<S>(j) * row.t((1 << (j + 1)) - 1), j, moduli));
            }
            free.push(term(S::one(), a, moduli));
        }
        TheoremId::BnB => {
            for j in 0..a {
                specified.push(term(S::from_i64(5) * pow2::<S>(j) * row.t(1 << j), j, moduli));
            }
            free.push(term(S::one(), a, moduli));
        }
        TheoremId::AtMain => {
            // q_{n-2^k} / Q_n = t_{2^k,n}
            for k in 0..a {
                specified.push(term(S::from_i64(18) * pow2::<S>(k) * row.t(1 << k), k, moduli));
            }
            specified.push(term(S::from_i64(12), a, moduli));
        }
        TheoremId::Bd41 => {
            for k in 0..a {
                specified.push(term(ratio(31, 15) * pow2::<S>(k) * row.t(1 << k), k, moduli));
            }
            specified.push(term(ratio(47, 30), a, moduli));
        }
        TheoremId::Bd42 => {
            let m = a;
            let big = 1u64 << m;
            for s in 0..m {
                specified.push(term(pow2::<S>(s) / pow2::<S>(m), s, moduli));
            }
            for s in 0..m {
                let coeff = S::from_i64(3 * (m - s) as i64) * pow2::<S>(s) * row.t(big - (1 << s) + 1);
                specified.push(term(coeff, s, moduli));
            }
            specified.push(term(S::from_i64(2) + S::one() / pow2::<S>(m), m, moduli));
        }
        TheoremId::Bd43 => {
            for k in 0..=a {
                free.push(term(pow2::<S>(k) / pow2::<S>(a), k, moduli));
            }
        }
        TheoremId::Fejer3ts => {
            for s in 0..=a {
                specified.push(term(S::from_i64(3) * pow2::<S>(s) / pow2::<S>(a), s, moduli));
            }
        }
    }
    let has_free_constant = !theorem.is_fully_specified();
    Ok(RhsOutcome::Evaluated(RhsEvaluation { specified, free, has_free_constant }))
}

/// Right-hand side of `theorem` for `f` and the row of index `n` of `scheme`.
pub fn evaluate_rhs<S: Scalar>(
    theorem: TheoremId,
    f: &StepFunction<S>,
    scheme: &WeightScheme<S>,
    n: u64,
    p: &LpExponent,
) -> Result<RhsOutcome> {
    let row = scheme.build_row(n)?;
    let a = order(n);
    if a > f.rank() {
        return Err(Error::ScaleTooFine { scale: a, rank: f.rank() });
    }
    evaluate_rhs_with_moduli(theorem, Some(scheme), &row, p, &f.moduli(p))
}

fn compare(lhs: &Real, rhs: &Real) -> Option<Ordering> {
    lhs.compare(rhs)
}

fn judge(lhs: &Real, eval: &RhsEvaluation) -> (Real, Option<Real>, BoundVerdict) {
    let a = eval.specified_total();
    if !eval.has_free_constant {
        let ratio = if a.is_zero() && lhs.is_zero() { Some(Real::zero()) } else { lhs.div(&a) };
        let verdict = match compare(lhs, &a) {
            Some(Ordering::Greater) => BoundVerdict::Violated,
            Some(_) => BoundVerdict::Holds,
            None => BoundVerdict::Undecided,
        };
        return (a, ratio, verdict);
    }
    let m = eval.free_total();
    let excess = lhs.sub(&a);
    let c_star = match excess.compare(&Real::zero()) {
        Some(Ordering::Greater) => {
            if m.is_zero() {
                None
            } else {
                excess.div(&m)
            }
        }
        Some(_) => Some(Real::zero()),
        None => excess.max(&Real::zero()).div(&m),
    };
    let ratio = if m.is_zero() { None } else { lhs.div(&a.add(&m)) };
    (a, ratio, BoundVerdict::MinConstant(c_star))
}

/// Rank at which `σ_n^T(f)` and every modulus of the bound are representable.
pub fn working_rank(f_rank: u32, n: u64) -> u32 {
    f_rank.max(rank_for_index(n))
}

/// Extends `ω_p(f, 2^-j)`, `j <= rank(f)`, by zeros to `j <= rank`.
pub fn padded_moduli(moduli: &[Real], rank: u32) -> Vec<Real> {
    let mut out = moduli.to_vec();
    let zero = match moduli.first() {
        Some(Real::Float(_)) => Real::Float(0.0),
        _ => Real::zero(),
    };
    out.resize(rank as usize + 1, zero);
    out
}

/// Full verification record of one `(theorem, f, scheme, n, p)` case.
///
/// `f` is refined as needed; `moduli` may carry precomputed `ω_p(f, 2^-j)` at `f`'s own rank.
pub fn verify_bound_with<S: Scalar>(
    theorem: TheoremId,
    f: &LabeledFunction<S>,
    scheme: &WeightScheme<S>,
    row: &TriangularRow<S>,
    p: &LpExponent,
    moduli: Option<&[Real]>,
) -> Result<BoundReport> {
    let n = row.n();
    let rank = working_rank(f.function.rank(), n);
    let refined = f.function.refine_to(rank);
    let lhs = approximation_error(&refined, row, p)?;
    let own;
    let moduli = match moduli {
        Some(m) => m,
        None => {
            own = f.function.moduli(p);
            &own
        }
    };
    let moduli = padded_moduli(moduli, rank);
    let outcome = evaluate_rhs_with_moduli(theorem, Some(scheme), row, p, &moduli)?;
    let (rhs, terms, ratio, verdict) = match outcome {
        RhsOutcome::HypothesisViolated(reason) => (None, None, None, BoundVerdict::HypothesisViolated(reason)),
        RhsOutcome::Evaluated(eval) => {
            let (rhs, ratio, verdict) = judge(&lhs, &eval);
            (Some(rhs), Some(eval), ratio, verdict)
        }
    };
    Ok(BoundReport {
        theorem,
        n,
        p: p.clone(),
        function: f.label.clone(),
        scheme: scheme.to_string(),
        rank,
        lhs,
        rhs,
        terms,
        ratio,
        verdict,
    })
}

pub fn verify_bound<S: Scalar>(
    theorem: TheoremId,
    f: &LabeledFunction<S>,
    scheme: &WeightScheme<S>,
    n: u64,
    p: &LpExponent,
) -> Result<BoundReport> {
    let row = scheme.build_row(n)?;
    verify_bound_with(theorem, f, scheme, &row, p, None)
}

/// Indices swept for `theorem` within `n_min..=n_max`.
pub fn sweep_indices(theorem: TheoremId, scheme: &WeightScheme<Rational>, n_min: u64, n_max: u64) -> Vec<u64> {
    (n_min.max(1)..=n_max)
        .filter(|n| !theorem.dyadic_only() || n.is_power_of_two())
        .filter(|n| match scheme {
            WeightScheme::Explicit(rows) => rows.contains_key(n),
            _ => true,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub theorems: Vec<TheoremId>,
    pub schemes: Vec<WeightScheme<Rational>>,
    pub n_min: u64,
    pub n_max: u64,
    pub ps: Vec<LpExponent>,
}

/// Runs every `(theorem, function, scheme, n, p)` case of the sweep in parallel.
///
/// Reports are ordered by theorem, function, scheme, `n`, then `p`.
pub fn run_sweep<S: Scalar>(sweep: &Sweep, functions: &[LabeledFunction<S>]) -> Result<Vec<BoundReport>> {
    let schemes: Vec<WeightScheme<S>> = sweep.schemes.iter().map(|s| s.convert()).collect();
    let moduli: Vec<Vec<Vec<Real>>> = functions
        .par_iter()
        .map(|f| sweep.ps.iter().map(|p| f.function.moduli(p)).collect())
        .collect();
    // Rows are shared by every function and theorem.
    let mut rows: Vec<Vec<(u64, TriangularRow<S>)>> = Vec::with_capacity(schemes.len());
    for (s, rs) in schemes.iter().zip(&sweep.schemes) {
        let ns = sweep_indices(TheoremId::Bd41, rs, sweep.n_min, sweep.n_max);
        let built: Vec<(u64, TriangularRow<S>)> = ns
            .into_iter()
            .map(|n| s.build_row(n).map(|r| (n, r)))
            .collect::<Result<_>>()?;
        rows.push(built);
    }
    let mut cases = Vec::new();
    for &theorem in &sweep.theorems {
        for fi in 0..functions.len() {
            for (si, built) in rows.iter().enumerate() {
                for (ri, (n, _)) in built.iter().enumerate() {
                    if theorem.dyadic_only() && !n.is_power_of_two() {
                        continue;
                    }
                    for pi in 0..sweep.ps.len() {
                        cases.push((theorem, fi, si, ri, pi));
                    }
                }
            }
        }
    }
    cases
        .par_iter()
        .map(|&(theorem, fi, si, ri, pi)| {
            verify_bound_with(
                theorem,
                &functions[fi],
                &schemes[si],
                &rows[si][ri].1,
                &sweep.ps[pi],
                Some(&moduli[fi][pi]),
            )
        })
        .collect()
}

/// Largest `c*` over the reports of `theorem`; `None` if any case needs an infinite constant.
pub fn max_constant(reports: &[BoundReport], theorem: TheoremId) -> Option<Real> {
    let mut best = Real::zero();
    for r in reports.iter().filter(|r| r.theorem == theorem) {
        match &r.verdict {
            BoundVerdict::MinConstant(Some(c)) => best = best.max(c),
            BoundVerdict::MinConstant(None) => return None,
            _ => {}
        }
    }
    Some(best)
}

/// Right-hand side of the non-increasing matrix bound with leading constant 5 and `c = 47/30`.
pub fn bn_b_with_constant(eval: &RhsEvaluation) -> Real {
    eval.total_with(&rational(47, 30))
}

/// Text form of a constant for reports.
pub fn describe_constant(c: &Option<Real>) -> String {
    match c {
        Some(v) => v.to_string(),
        None => "inf".to_string(),
    }
}

/// `0 <= ratio <= 1`, decided exactly.
pub fn ratio_in_unit_interval(ratio: &Real) -> bool {
    let one = Real::rational(Rational::one());
    matches!(ratio.compare(&Real::zero()), Some(Ordering::Greater | Ordering::Equal))
        && matches!(ratio.compare(&one), Some(Ordering::Less | Ordering::Equal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::walsh_function;
    use crate::means::Sequence;
    use crate::scalar::rational_int;

    fn labeled(f: StepFunction<Rational>) -> LabeledFunction<Rational> {
        LabeledFunction { label: "f".into(), function: f }
    }

    #[test]
    fn approximation_error_examples() {
        let w1: StepFunction<Rational> = walsh_function(1, 1).unwrap();
        let fejer = TriangularRow::uniform(2);
        assert_eq!(approximation_error(&w1, &fejer, &LpExponent::one()).unwrap(), Real::rational(rational(1, 2)));
        assert!(approximation_error(&w1, &TriangularRow::spike(2), &LpExponent::one()).unwrap().is_zero());
        let c = StepFunction::constant(3, rational(2, 3));
        assert!(approximation_error(&c, &TriangularRow::uniform(7), &LpExponent::two()).unwrap().is_zero());
    }

    #[test]
    fn bd4_1_example() {
        let w1 = labeled(walsh_function(1, 3).unwrap());
        let fejer = WeightScheme::<Rational>::fejer();
        let r = verify_bound(TheoremId::Bd41, &w1, &fejer, 8, &LpExponent::one()).unwrap();
        assert_eq!(r.lhs, Real::rational(rational(1, 8)));
        assert_eq!(r.rhs, Some(Real::rational(rational(31, 60))));
        assert_eq!(r.ratio, Some(Real::rational(rational(15, 62))));
        assert_eq!(r.verdict, BoundVerdict::Holds);
        let log = verify_bound(TheoremId::Bd41, &w1, &WeightScheme::Logarithmic, 8, &LpExponent::one()).unwrap();
        assert!(matches!(log.verdict, BoundVerdict::HypothesisViolated(_)));
    }

    #[test]
    fn fejer_3ts_example() {
        let w1 = labeled(walsh_function(1, 1).unwrap());
        let r = verify_bound(TheoremId::Fejer3ts, &w1, &WeightScheme::fejer(), 2, &LpExponent::one()).unwrap();
        assert_eq!(r.rhs, Some(Real::rational(rational_int(3))));
        assert_eq!(r.lhs, Real::rational(rational(1, 2)));
        assert_eq!(r.verdict, BoundVerdict::Holds);
    }

    #[test]
    fn constants_give_zero() {
        let c = labeled(StepFunction::constant(3, rational(5, 2)));
        let q = WeightScheme::Norlund(Sequence::Affine { slope: rational_int(1), intercept: rational_int(1) });
        let r = verify_bound(TheoremId::AtMain, &c, &q, 6, &LpExponent::one()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Holds);
        assert!(r.lhs.is_zero() && r.rhs.as_ref().unwrap().is_zero());
        let linear = WeightScheme::Weighted(Sequence::Affine { slope: rational_int(1), intercept: rational_int(0) });
        let r = verify_bound(TheoremId::Bd43, &c, &linear, 6, &LpExponent::two()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::MinConstant(Some(Real::zero())));
    }

    #[test]
    fn gating() {
        let w1 = labeled(walsh_function(1, 3).unwrap());
        let p1 = LpExponent::one();
        let fejer = WeightScheme::<Rational>::fejer();
        let weighted = WeightScheme::Weighted(Sequence::Constant(rational_int(1)));
        let gated = |t, s: &WeightScheme<Rational>, n, p: &LpExponent| {
            matches!(verify_bound(t, &w1, s, n, p).unwrap().verdict, BoundVerdict::HypothesisViolated(_))
        };
        assert!(gated(TheoremId::Bd42, &fejer, 6, &p1));
        assert!(!gated(TheoremId::Bd42, &fejer, 8, &p1));
        assert!(gated(TheoremId::Bd42, &fejer, 8, &LpExponent::Infinity));
        assert!(!gated(TheoremId::Bd41, &fejer, 8, &LpExponent::Infinity));
        assert!(gated(TheoremId::AtMain, &weighted, 5, &p1));
        assert!(gated(TheoremId::MsNondec, &WeightScheme::Logarithmic, 5, &p1));
        assert!(!gated(TheoremId::MsNoninc, &WeightScheme::Logarithmic, 5, &p1));
        assert!(gated(TheoremId::Fejer3ts, &WeightScheme::Logarithmic, 5, &p1));
        // t_{n,n} = 1/2 for p_k = k at n = 3: 3 * 1/2 <= 2
        let linear = WeightScheme::Weighted(Sequence::Affine { slope: rational_int(1), intercept: rational_int(0) });
        assert!(!gated(TheoremId::Bd43, &linear, 3, &p1));
        let steep = WeightScheme::Explicit([(3u64, vec![rational(0, 1), rational(0, 1), rational_int(1)])].into());
        assert!(gated(TheoremId::Bd43, &steep, 3, &p1));
    }

    #[test]
    fn ms_noninc_uses_zero_for_nonpositive_q_indices() {
        // n = 4, q ≡ 1: j = 1 gives Q_1 - Q_{-1} = 1 - 0
        let row = WeightScheme::<Rational>::fejer().build_row(4).unwrap();
        let moduli = vec![Real::rational(rational_int(1)); 3];
        let RhsOutcome::Evaluated(e) =
            evaluate_rhs_with_moduli(TheoremId::MsNoninc, Some(&WeightScheme::fejer()), &row, &LpExponent::one(), &moduli)
                .unwrap()
        else {
            panic!()
        };
        // j = 0: (Q_2 - Q_1) = 1, j = 1: (Q_1 - Q_{-1}) = 1; times 5/(2*4)
        assert_eq!(e.specified_total(), Real::rational(rational(5, 4)));
    }

    #[test]
    fn infinite_constant_when_free_part_vanishes() {
        let eval = RhsEvaluation { specified: Vec::new(), free: Vec::new(), has_free_constant: true };
        let (_, _, v) = judge(&Real::rational(rational_int(1)), &eval);
        assert_eq!(v, BoundVerdict::MinConstant(None));
        assert!(v.is_failure());
    }

    #[test]
    fn p_two_comparisons_are_exact() {
        let f = labeled(StepFunction::new(2, vec![rational_int(1), rational(-1, 3), rational(2, 1), rational(0, 1)]).unwrap());
        let r = verify_bound(TheoremId::Bd41, &f, &WeightScheme::fejer(), 4, &LpExponent::two()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Holds);
        assert!(ratio_in_unit_interval(r.ratio.as_ref().unwrap()));
    }

    #[test]
    fn float_mode_agrees_with_exact_mode() {
        let f = labeled(StepFunction::new(2, vec![rational_int(1), rational(-1, 3), rational(2, 1), rational(0, 1)]).unwrap());
        let ff = f.convert::<f64>();
        for t in [TheoremId::Bd41, TheoremId::BnB, TheoremId::Fejer3ts] {
            let e = verify_bound(t, &f, &WeightScheme::fejer(), 3, &LpExponent::two()).unwrap();
            let x = verify_bound(t, &ff, &WeightScheme::fejer(), 3, &LpExponent::two()).unwrap();
            assert_eq!(e.verdict.label(), x.verdict.label());
            assert!((e.lhs.to_f64() - x.lhs.to_f64()).abs() < 1e-12);
        }
    }
}
