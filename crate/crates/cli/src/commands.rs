use std::collections::BTreeMap;

use serde_json::{json, Value};

use walshsum_core::bounds::{max_constant, run_sweep, BoundReport, BoundVerdict, Sweep, TheoremId};
use walshsum_core::corpus::{corpus, CorpusKind, CorpusSpec, LabeledFunction};
use walshsum_core::identities::{run_identity, IdentityGrid, IdentityVerdict, KernelIdentityId};
use walshsum_core::kernels::kernel_l1_scan;
use walshsum_core::parse::{parse_range, parse_rational, parse_scheme};
use walshsum_core::scalar::{format_f64, Rational, Scalar};
use walshsum_core::{LpExponent, WeightScheme};

use crate::config::{ConfigError, Mode, Settings};
use crate::output::{opt_text, text, Table};

/// Largest `n` accepted by `kernel-norms`.
pub const KERNEL_SCAN_LIMIT: u64 = 1 << 20;

/// Table plus human-readable summary lines and the verification outcome.
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub passed: bool,
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

fn core_err(e: walshsum_core::Error) -> ConfigError {
    ConfigError(e.to_string())
}

fn required<T: Clone>(v: &Option<T>, key: &str) -> Result<T, ConfigError> {
    v.clone().ok_or_else(|| bad(format!("missing setting '{key}'")))
}

fn is_all(list: &[String]) -> bool {
    list.iter().any(|s| s.trim().eq_ignore_ascii_case("all"))
}

fn parse_list<T, E: std::fmt::Display>(list: &[String], parse: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, ConfigError> {
    list.iter().map(|s| parse(s.trim()).map_err(|e| bad(e.to_string()))).collect()
}

fn ranks(s: &Settings) -> Result<Vec<u32>, ConfigError> {
    let (lo, hi) = parse_range(&required(&s.rank, "rank")?).map_err(core_err)?;
    if hi > walshsum_core::dyadic::MAX_RANK as u64 {
        return Err(bad(format!("rank {hi} exceeds {}", walshsum_core::dyadic::MAX_RANK)));
    }
    Ok((lo as u32..=hi as u32).collect())
}

fn kinds(s: &Settings) -> Result<Vec<CorpusKind>, ConfigError> {
    let list = required(&s.kind, "kind")?;
    if is_all(&list) {
        return Ok(CorpusKind::ALL.to_vec());
    }
    parse_list(&list, str::parse::<CorpusKind>)
}

fn functions(s: &Settings) -> Result<Vec<LabeledFunction<Rational>>, ConfigError> {
    let beta = parse_rational(&required(&s.beta, "beta")?).map_err(core_err)?;
    let count = required(&s.count, "count")?;
    let seed = required(&s.seed, "seed")?;
    let mut out = Vec::new();
    for rank in ranks(s)? {
        for kind in kinds(s)? {
            let spec = CorpusSpec::new(kind, rank, seed).with_count(count).with_beta(beta.clone());
            out.extend(corpus(&spec).map_err(core_err)?);
        }
    }
    Ok(out)
}

pub fn lemmas(s: &Settings, inject_fault: bool) -> Result<Outcome, ConfigError> {
    if s.mode == Some(Mode::Float) {
        return Err(bad("lemmas checks exact identities; use --mode exact"));
    }
    let list = required(&s.identity, "identity")?;
    let ids = if is_all(&list) { KernelIdentityId::ALL.to_vec() } else { parse_list(&list, str::parse::<KernelIdentityId>)? };
    let rank = match &s.rank {
        Some(r) => match parse_range(r).map_err(core_err)? {
            (lo, hi) if lo == hi && hi <= walshsum_core::dyadic::MAX_RANK as u64 => Some(hi as u32),
            _ => return Err(bad(format!("lemmas takes a single rank, got '{r}'"))),
        },
        None => None,
    };
    let grid = IdentityGrid {
        n_min: required(&s.n_min, "n-min")?,
        n_max: required(&s.n_max, "n-max")?,
        rank,
        seed: required(&s.seed, "seed")?,
        blahota_rows: required(&s.blahota_rows, "blahota-rows")?,
        inject_fault,
    };
    let mut table = Table::new(&["identity", "n", "k", "rank", "verdict", "witness_cell", "max_deviation"]);
    let mut summary = Vec::new();
    let mut passed = true;
    for id in ids {
        let (suite, reports) = run_identity(id, &grid);
        for r in &reports {
            let (verdict, witness) = match r.verdict {
                IdentityVerdict::Pass => ("pass", None),
                IdentityVerdict::Fail { witness_cell } => ("fail", witness_cell),
            };
            table.push(vec![
                text(id),
                json!(r.n),
                json!(r.k),
                json!(r.rank),
                text(verdict),
                json!(witness),
                text(r.max_deviation.serialize()),
            ]);
        }
        passed &= suite.passed();
        summary.push(format!(
            "{id}: {} cases, {} failures, {} errors, max deviation {} [{}]",
            suite.cases,
            suite.failures.len(),
            suite.errors.len(),
            suite.max_deviation.serialize(),
            if suite.passed() { "PASS" } else { "FAIL" }
        ));
        for f in &suite.failures {
            let cell = match f.verdict {
                IdentityVerdict::Fail { witness_cell: Some(c) } => format!("witness cell {c}"),
                _ => "no cell witness".to_string(),
            };
            summary.push(format!("  failed at n = {}, k = {:?}, rank {}: {cell}", f.n, f.k, f.rank));
        }
        for (p, e) in &suite.errors {
            summary.push(format!("  error at n = {}, k = {:?}: {e}", p.n, p.k));
        }
    }
    Ok(Outcome { table, summary, passed })
}

pub fn kernel_norms(s: &Settings) -> Result<Outcome, ConfigError> {
    let n_max = required(&s.n_max, "n-max")?;
    if n_max > KERNEL_SCAN_LIMIT {
        return Err(bad(format!("n-max {n_max} exceeds {KERNEL_SCAN_LIMIT}")));
    }
    match s.mode {
        Some(Mode::Float) => scan::<f64>(s, n_max),
        _ => scan::<Rational>(s, n_max),
    }
}

fn scan<S: Scalar>(s: &Settings, n_max: u64) -> Result<Outcome, ConfigError> {
    let n_min = required(&s.n_min, "n-min")?;
    let result = kernel_l1_scan::<S>(n_max).map_err(core_err)?;
    let mut table = Table::new(&["n", "norm", "decimal"]);
    for row in result.rows.iter().filter(|r| r.n >= n_min) {
        table.push(vec![json!(row.n), text(row.norm.serialize()), text(format_f64(row.norm.to_f64()))]);
    }
    let passed = result.within_toledo_bound();
    let summary = match &result.max {
        Some((n, m)) => vec![format!(
            "max ||K_n||_1 = {} ({}) at n = {n}; <= 17/15: {passed}; <= 2: {}",
            m.serialize(),
            format_f64(m.to_f64()),
            result.within_yano_bound()
        )],
        None => vec!["empty range".to_string()],
    };
    Ok(Outcome { table, summary, passed })
}

pub fn bounds(s: &Settings) -> Result<Outcome, ConfigError> {
    let list = required(&s.theorem, "theorem")?;
    let theorems = if is_all(&list) { TheoremId::ALL.to_vec() } else { parse_list(&list, str::parse::<TheoremId>)? };
    let schemes: Vec<WeightScheme<Rational>> = parse_list(&required(&s.scheme, "scheme")?, parse_scheme)?;
    let ps: Vec<LpExponent> = parse_list(&required(&s.p, "p")?, str::parse::<LpExponent>)?;
    let sweep = Sweep {
        theorems,
        schemes,
        n_min: required(&s.n_min, "n-min")?,
        n_max: required(&s.n_max, "n-max")?,
        ps,
    };
    let fs = functions(s)?;
    let reports = match s.mode {
        Some(Mode::Float) => {
            let floats: Vec<LabeledFunction<f64>> = fs.iter().map(|f| f.convert()).collect();
            run_sweep(&sweep, &floats)
        }
        _ => run_sweep(&sweep, &fs),
    }
    .map_err(core_err)?;

    let mut table = Table::new(&[
        "theorem", "function", "scheme", "n", "p", "rank", "lhs", "rhs", "ratio", "c_star", "verdict", "detail",
    ]);
    let mut counts: BTreeMap<(TheoremId, &'static str), usize> = BTreeMap::new();
    for r in &reports {
        *counts.entry((r.theorem, r.verdict.label())).or_default() += 1;
        table.push(report_row(r));
    }
    let mut summary = Vec::new();
    for theorem in &sweep.theorems {
        let parts: Vec<String> = counts
            .iter()
            .filter(|((t, _), _)| t == theorem)
            .map(|((_, label), n)| format!("{n} {label}"))
            .collect();
        let mut line = format!("{theorem}: {}", parts.join(", "));
        if !theorem.is_fully_specified() {
            let mine: Vec<BoundReport> = reports.iter().filter(|r| r.theorem == *theorem).cloned().collect();
            if mine.iter().any(|r| matches!(r.verdict, BoundVerdict::MinConstant(_))) {
                let c = max_constant(&mine, *theorem);
                line += &format!("; max c* = {}", c.map_or("inf".to_string(), |v| v.to_string()));
            }
        }
        summary.push(line);
    }
    let passed = !reports.iter().any(|r| matches!(r.verdict, BoundVerdict::Violated | BoundVerdict::Undecided));
    Ok(Outcome { table, summary, passed })
}

fn report_row(r: &BoundReport) -> Vec<Value> {
    let (c_star, detail) = match &r.verdict {
        BoundVerdict::MinConstant(Some(c)) => (text(c), Value::Null),
        BoundVerdict::MinConstant(None) => (text("inf"), Value::Null),
        BoundVerdict::HypothesisViolated(why) => (Value::Null, text(why)),
        _ => (Value::Null, Value::Null),
    };
    vec![
        text(r.theorem),
        text(&r.function),
        text(&r.scheme),
        json!(r.n),
        text(&r.p),
        json!(r.rank),
        text(&r.lhs),
        opt_text(r.rhs.as_ref()),
        opt_text(r.ratio.as_ref()),
        c_star,
        text(r.verdict.label()),
        detail,
    ]
}

pub fn corpus_dump(s: &Settings) -> Result<Outcome, ConfigError> {
    let fs = functions(s)?;
    let float = s.mode == Some(Mode::Float);
    let mut table = Table::new(&["label", "rank", "values"]);
    for f in &fs {
        let values: Vec<Value> = f
            .function
            .values()
            .iter()
            .map(|v| if float { text(v.to_f64().serialize()) } else { text(v.serialize()) })
            .collect();
        table.push(vec![text(&f.label), json!(f.function.rank()), Value::Array(values)]);
    }
    let summary = vec![format!("{} functions", fs.len())];
    Ok(Outcome { table, summary, passed: true })
}
