//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use walshsum_core::bounds::{max_constant, run_sweep, BoundVerdict, Sweep, TheoremId};
use walshsum_core::corpus::{corpus, CorpusKind, CorpusSpec, LabeledFunction};
use walshsum_core::dyadic::{DyadicPoint, StepFunction};
use walshsum_core::identities::{run_identity, IdentityGrid, KernelIdentityId};
use walshsum_core::kernels::{fejer_kernel, kernel_l1_scan, matrix_kernel, walsh_ints};
use walshsum_core::means::{abel_check_with, matrix_mean, FejerMeans, TriangularRow};
use walshsum_core::parse::parse_scheme;
use walshsum_core::scalar::{rational, rational_int, Rational};
use walshsum_core::{LpExponent, Real};

const SEED: u64 = 20240521;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.gen_range(-20..=20), rng.gen_range(1..=9))
}

fn random_function(rng: &mut ChaCha8Rng, rank: u32) -> StepFunction<Rational> {
    StepFunction::new(rank, (0..1usize << rank).map(|_| random_rational(rng)).collect()).unwrap()
}

fn random_row(rng: &mut ChaCha8Rng, n: u64) -> TriangularRow<Rational> {
    let mut w: Vec<Rational> = (0..n).map(|_| rational(rng.gen_range(0..=12), rng.gen_range(1..=6))).collect();
    if w.iter().all(|v| v.is_zero()) {
        w[0] = rational_int(1);
    }
    match rng.gen_range(0..4) {
        0 => w.sort(),
        1 => w.sort_by(|a, b| b.cmp(a)),
        _ => {}
    }
    TriangularRow::new(w).unwrap()
}

fn full_corpus(ranks: std::ops::RangeInclusive<u32>, count: usize) -> Vec<LabeledFunction<Rational>> {
    let mut out = Vec::new();
    for rank in ranks {
        for kind in CorpusKind::ALL {
            out.extend(corpus(&CorpusSpec::new(kind, rank, SEED).with_count(count)).unwrap());
        }
    }
    out
}

fn schemes(specs: &[&str]) -> Vec<walshsum_core::WeightScheme<Rational>> {
    specs.iter().map(|s| parse_scheme(s).unwrap()).collect()
}

fn criterion_1() -> Outcome {
    let ids = [
        KernelIdentityId::Paley,
        KernelIdentityId::DirichletComplement,
        KernelIdentityId::GatK2n,
        KernelIdentityId::Fine,
        KernelIdentityId::FejerShift,
        KernelIdentityId::Blahota,
        KernelIdentityId::BlahotaDyadic,
    ];
    let grid = IdentityGrid { n_min: 1, n_max: 256, seed: SEED, blahota_rows: 50, ..IdentityGrid::default() };
    let mut cases = 0;
    let mut bad = Vec::new();
    for id in ids {
        let (summary, _) = run_identity(id, &grid);
        cases += summary.cases;
        if !summary.passed() || summary.cases == 0 {
            bad.push(format!("{id}: {} failures, {} errors", summary.failures.len(), summary.errors.len()));
        }
    }
    outcome(bad.is_empty(), format!("{} identities, {cases} exact cases, n <= 256 {}", ids.len(), bad.join("; ")))
}

fn criterion_2() -> Outcome {
    let scan = kernel_l1_scan::<Rational>(4096).unwrap();
    let bound = rational(17, 15);
    let toledo = scan.rows.iter().all(|r| r.norm <= bound);
    let yano = scan.rows.iter().all(|r| r.norm <= rational_int(2));
    let (arg, max) = scan.max.clone().unwrap();
    outcome(
        toledo && yano && scan.rows.len() == 4096,
        format!(
            "max ||K_n||_1 = {max} (~{:.12}) at n = {arg} over 1..=4096; <= 17/15: {toledo}, <= 2: {yano}",
            walshsum_core::scalar::rational_to_f64(&max)
        ),
    )
}

fn criterion_3() -> Outcome {
    let grid = IdentityGrid { n_min: 1, n_max: 256, seed: SEED, ..IdentityGrid::default() };
    let (summary, reports) = run_identity(KernelIdentityId::NknBound, &grid);
    let ranks_ok = reports.iter().all(|r| r.rank == 9);
    outcome(
        summary.passed() && summary.cases == 256 && ranks_ok,
        format!("{} cases at rank 9, {} cellwise violations", summary.cases, summary.failures.len()),
    )
}

/// `w_j(x) = (-1)^{Σ j_k x_k}` from the coordinates of the cell, `x_0` most significant.
fn walsh_oracle(j: usize, cell: usize, rank: u32) -> i64 {
    let mut s = 0;
    for k in 0..rank {
        let jk = (j >> k) & 1;
        let xk = (cell >> (rank - 1 - k)) & 1;
        s += jk * xk;
    }
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut mismatches = 0;
    for i in 0..200 {
        let rank = 3 + (i % 4) as u32;
        let f = random_function(&mut rng, rank);
        let n = rng.gen_range(1..=1u64 << rank);
        let row = random_row(&mut rng, n);
        let coefficient_route = matrix_mean(&f, &row).unwrap();
        let convolution_route = f.dyadic_convolve(&matrix_kernel(&row, rank).unwrap());
        if coefficient_route != convolution_route {
            mismatches += 1;
        }
    }
    let mut coefficient_mismatches = 0;
    for rank in 0..=6u32 {
        for _ in 0..3 {
            let f = random_function(&mut rng, rank);
            let fast = f.walsh_coefficients();
            let cells = 1usize << rank;
            for (j, c) in fast.iter().enumerate() {
                let integral: Rational = (0..cells)
                    .map(|x| &f.values()[x] * rational_int(walsh_oracle(j, x, rank)))
                    .sum::<Rational>()
                    / rational_int(cells as i64);
                if &integral != c {
                    coefficient_mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0 && coefficient_mismatches == 0,
        format!(
            "200 (f, row) pairs at ranks 3-6: {mismatches} mean mismatches; coefficients vs defining integrals at ranks 0-6: {coefficient_mismatches} mismatches"
        ),
    )
}

fn sweep_summary(reports: &[walshsum_core::bounds::BoundReport]) -> (usize, usize, usize, usize) {
    let holds = reports.iter().filter(|r| r.verdict == BoundVerdict::Holds).count();
    let failures = reports.iter().filter(|r| r.verdict.is_failure()).count();
    let gated = reports
        .iter()
        .filter(|r| matches!(r.verdict, BoundVerdict::HypothesisViolated(_)))
        .count();
    let bad_ratio = reports
        .iter()
        .filter(|r| r.verdict == BoundVerdict::Holds)
        .filter(|r| !r.ratio.as_ref().is_some_and(walshsum_core::bounds::ratio_in_unit_interval))
        .count();
    (holds, failures, gated, bad_ratio)
}

fn ps(list: &[&str]) -> Vec<LpExponent> {
    list.iter().map(|p| p.parse().unwrap()).collect()
}

fn criterion_5() -> Outcome {
    let functions = full_corpus(3..=6, 2);
    let sweep = Sweep {
        theorems: vec![TheoremId::Bd41],
        schemes: schemes(&["fejer", "weighted:recip:0", "norlund:const:1", "norlund:affine:1,1", "cesaro:1"]),
        n_min: 2,
        n_max: 64,
        ps: ps(&["1", "2", "inf"]),
    };
    let reports = run_sweep(&sweep, &functions).unwrap();
    let (holds, failures, gated, bad_ratio) = sweep_summary(&reports);
    outcome(
        failures == 0 && gated == 0 && bad_ratio == 0 && holds == reports.len(),
        format!(
            "{} cases ({} functions x 5 schemes x n in 2..=64 x p in {{1,2,inf}}): {holds} hold, {failures} violations, {gated} gated",
            reports.len(),
            functions.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let functions = full_corpus(3..=6, 2);
    let p12 = ps(&["1", "2"]);
    let runs = [
        (TheoremId::Bd42, vec!["fejer", "log", "cesaro:1/2", "weighted:affine:1,0"], 1),
        (TheoremId::AtMain, vec!["fejer", "norlund:affine:1,1", "cesaro:2"], 2),
        (TheoremId::Fejer3ts, vec!["fejer"], 2),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (theorem, specs, n_min) in runs {
        let sweep = Sweep { theorems: vec![theorem], schemes: schemes(&specs), n_min, n_max: 64, ps: p12.clone() };
        let reports = run_sweep(&sweep, &functions).unwrap();
        let (holds, failures, gated, bad_ratio) = sweep_summary(&reports);
        pass &= failures == 0 && gated == 0 && bad_ratio == 0 && holds == reports.len() && holds > 0;
        parts.push(format!("{theorem}: {} cases, {failures} violations", reports.len()));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let functions: Vec<StepFunction<Rational>> = (0..4).map(|_| random_function(&mut rng, 6)).collect();
    let means: Vec<FejerMeans<Rational>> = functions.iter().map(|f| FejerMeans::new(f, 64).unwrap()).collect();
    let mut failures = 0;
    let mut non_monotone = 0;
    let mut total = 0;
    for n in 1..=64u64 {
        let fi = (n % 4) as usize;
        for _ in 0..100 {
            let row = random_row(&mut rng, n);
            if row.classify().is_neither() {
                non_monotone += 1;
            }
            let r = abel_check_with(&means[fi], &functions[fi], &row).unwrap();
            total += 1;
            if !r.verdict.passed() || !r.max_deviation.is_zero() {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && non_monotone > 0,
        format!("{total} rows for n in 1..=64 ({non_monotone} non-monotone): {failures} failures"),
    )
}

fn c_star_sweeps(count: usize) -> Vec<(TheoremId, Vec<walshsum_core::bounds::BoundReport>)> {
    let functions = full_corpus(3..=6, count);
    let p12 = ps(&["1", "2"]);
    let runs = [
        (TheoremId::Bd43, vec!["fejer", "weighted:affine:1,0", "weighted:affine:1,1"], p12.clone()),
        (TheoremId::MsNondec, vec!["fejer", "norlund:affine:1,1", "cesaro:2"], ps(&["1", "2", "inf"])),
        (TheoremId::MsNoninc, vec!["fejer", "log", "cesaro:1/2"], ps(&["1", "2", "inf"])),
        (TheoremId::BnA, vec!["fejer", "weighted:affine:1,0"], ps(&["1", "2", "inf"])),
        (TheoremId::BnB, vec!["fejer", "weighted:recip:0", "norlund:affine:1,1"], ps(&["1", "2", "inf"])),
    ];
    runs.into_iter()
        .map(|(theorem, specs, p)| {
            let sweep = Sweep { theorems: vec![theorem], schemes: schemes(&specs), n_min: 1, n_max: 32, ps: p };
            (theorem, run_sweep(&sweep, &functions).unwrap())
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let small = c_star_sweeps(1);
    let large = c_star_sweeps(2);
    let mut pass = true;
    let mut parts = Vec::new();
    for ((theorem, a), (_, b)) in small.iter().zip(&large) {
        let finite = b.iter().all(|r| matches!(r.verdict, BoundVerdict::MinConstant(Some(_))));
        let (ca, cb) = (max_constant(a, *theorem), max_constant(b, *theorem));
        let monotone = match (&ca, &cb) {
            (Some(x), Some(y)) => matches!(y.compare(x), Some(Ordering::Greater | Ordering::Equal)),
            _ => false,
        };
        pass &= finite && monotone && !b.is_empty();
        let show = |c: &Option<Real>| c.as_ref().map_or("inf".to_string(), |v| format!("{:.6}", v.to_f64()));
        let mut part = format!("{theorem} c* {} -> {} over {} cases", show(&ca), show(&cb), b.len());
        let infinite: Vec<_> = b.iter().filter(|r| matches!(r.verdict, BoundVerdict::MinConstant(None))).collect();
        if !infinite.is_empty() {
            let mut ns: Vec<u64> = infinite.iter().map(|r| r.n).collect();
            ns.sort_unstable();
            ns.dedup();
            let finite_part: Vec<_> = b.iter().filter(|r| !ns.contains(&r.n)).cloned().collect();
            part += &format!(
                " ({} cases with lhs > 0 and zero rhs at n in {ns:?}; c* over other n: {})",
                infinite.len(),
                show(&max_constant(&finite_part, *theorem))
            );
        }
        parts.push(part);
    }
    outcome(pass, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failed: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok && !failed.contains(&name) {
            failed.push(name);
        }
    };
    let ps = [LpExponent::one(), LpExponent::two(), LpExponent::Infinity];
    for rank in 0..=8u32 {
        for _ in 0..3 {
            let f = random_function(&mut rng, rank);
            let c = f.walsh_coefficients();
            let energy: Rational = c.iter().map(|v| v * v).sum();
            let norm2 = f.values().iter().map(|v| v * v).sum::<Rational>() / rational_int(1 << rank);
            check("parseval", energy == norm2);

            let g = random_function(&mut rng, rank);
            let conv = f.dyadic_convolve(&g).walsh_coefficients();
            let prod: Vec<Rational> = c.iter().zip(g.walsh_coefficients()).map(|(a, b)| a * b).collect();
            check("convolution theorem", conv == prod);

            let r = f.refine();
            check("refinement: integral", r.integrate() == f.integrate());
            check("refinement: coefficients", r.walsh_coefficients()[..c.len()] == c[..]);
            for p in &ps {
                check("refinement: norms", r.lp_norm(p) == f.lp_norm(p));
                check("refinement: moduli", r.moduli(p)[..=rank as usize] == f.moduli(p)[..]);
                let m = f.moduli(p);
                check(
                    "modulus monotone",
                    m.windows(2).all(|w| matches!(w[1].compare(&w[0]), Some(Ordering::Less | Ordering::Equal))),
                );
                let twice = f.lp_norm(p).scale(&rational_int(2));
                check("modulus bound", m.iter().all(|w| w.le(&twice) == Some(true)));
            }
            for t in 0..1u64 << rank {
                let point = DyadicPoint::new(rank, t).unwrap();
                let shifted = f.translate(&point);
                check("translation: integral", shifted.integrate() == f.integrate());
                for p in &ps {
                    check("translation: norms", shifted.lp_norm(p) == f.lp_norm(p));
                }
                check("translation: involution", shifted.translate(&point) == f);
            }
        }
    }
    for m in 0..=10u32 {
        let k: StepFunction<Rational> = fejer_kernel(1 << m, m + 1).unwrap();
        check("K_2^m non-negative", k.values().iter().all(|v| !v.is_negative()));
        check("K_2^m integral", k.integrate() == rational_int(1));
    }
    let table: Vec<Vec<i64>> = (0..256).map(|k| walsh_ints(k, 8).unwrap()).collect();
    for a in 0..256usize {
        for b in 0..256usize {
            let ok = (0..256).all(|x| table[a][x] * table[b][x] == table[a ^ b][x]);
            check("character algebra", ok);
        }
    }
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            "Parseval, convolution theorem, refinement and translation invariance, modulus monotonicity and bound (ranks 0-8), K_2^m >= 0 (m <= 10), character algebra (a, b < 256)".into()
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact identity suite", criterion_1),
        ("Toledo and Yano bounds up to n = 4096", criterion_2),
        ("n|K_n| bound, n <= 256", criterion_3),
        ("dual-path oracle", criterion_4),
        ("BD4_1 sweep", criterion_5),
        ("BD4_2, AT_MAIN and FEJER_3TS sweeps", criterion_6),
        ("Abel identities", criterion_7),
        ("empirical constants", criterion_8),
        ("property suite", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {id} [{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
