//! Seeded, reproducible families of test functions.
//!
//! Function `i` of a corpus depends only on `(kind, rank, seed, i)` and the kind parameters,
//! so a corpus of `count` functions is a prefix of every larger one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{StepFunction, MAX_RANK};
use crate::error::{Error, Result};
use crate::kernels::walsh_ints;
use crate::real::root_enclosure;
use crate::scalar::{format_rational, rational, Rational, Scalar};

/// Bits kept by non-integral Hölder powers.
pub const HOELDER_PRECISION: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CorpusKind {
    /// `Σ_{k < degree} a_k w_k` with random rational `a_k`.
    WalshPolynomial,
    /// Independent random rationals per cell.
    RandomStep,
    /// `|x + y|^β` at each cell's minimal point; `y = 0` for the first function.
    DyadicHoelder,
    /// Indicator of `I_m(y)`; `y = 0` for the first function.
    IntervalIndicator,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 4] = [
        CorpusKind::WalshPolynomial,
        CorpusKind::RandomStep,
        CorpusKind::DyadicHoelder,
        CorpusKind::IntervalIndicator,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CorpusKind::WalshPolynomial => "walsh-polynomial",
            CorpusKind::RandomStep => "random-step",
            CorpusKind::DyadicHoelder => "dyadic-hoelder",
            CorpusKind::IntervalIndicator => "interval-indicator",
        }
    }

    fn stream(&self) -> u64 {
        match self {
            CorpusKind::WalshPolynomial => 0x5741,
            CorpusKind::RandomStep => 0x5253,
            CorpusKind::DyadicHoelder => 0x4448,
            CorpusKind::IntervalIndicator => 0x4949,
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        CorpusKind::ALL
            .into_iter()
            .find(|k| k.name() == t)
            .ok_or_else(|| Error::Parse(format!("unknown corpus kind '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub rank: u32,
    pub seed: u64,
    pub count: usize,
    /// Hölder exponent, must be positive.
    pub beta: Rational,
    /// Polynomial degree bound; `None` means `2^rank`.
    pub degree: Option<u64>,
    /// Interval order `m`; `None` draws `m` in `0..=rank`, except `m = 1` for the first function.
    pub interval_order: Option<u32>,
}

impl CorpusSpec {
    pub fn new(kind: CorpusKind, rank: u32, seed: u64) -> Self {
        CorpusSpec { kind, rank, seed, count: 4, beta: Rational::one(), degree: None, interval_order: None }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_beta(mut self, beta: Rational) -> Self {
        self.beta = beta;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledFunction<S> {
    pub label: String,
    pub function: StepFunction<S>,
}

impl LabeledFunction<Rational> {
    pub fn convert<T: Scalar>(&self) -> LabeledFunction<T> {
        LabeledFunction { label: self.label.clone(), function: self.function.map(|v| T::from_rational(v)) }
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.gen_range(-16..=16), rng.gen_range(1..=8))
}

/// `v^β` for `v >= 0`: exact when the result is rational, otherwise the lower end of a
/// `2^-48`-scale enclosure.
fn hoelder_power(v: &Rational, beta: &Rational) -> Rational {
    if v.is_zero() {
        return Rational::zero();
    }
    let a: usize = beta.numer().try_into().expect("beta numerator too large");
    let b: u32 = beta.denom().try_into().expect("beta denominator too large");
    let powered = num_traits::pow(v.clone(), a);
    if b == 1 {
        return powered;
    }
    match crate::real::exact_root(&powered, b) {
        Some(q) => q,
        None => root_enclosure(&powered, b, HOELDER_PRECISION).lo,
    }
}

/// Functions `0..spec.count` of the corpus.
pub fn corpus(spec: &CorpusSpec) -> Result<Vec<LabeledFunction<Rational>>> {
    if spec.rank > MAX_RANK {
        return Err(Error::InvalidParameters(format!("rank {} exceeds {MAX_RANK}", spec.rank)));
    }
    if spec.kind == CorpusKind::DyadicHoelder && spec.beta <= Rational::zero() {
        return Err(Error::InvalidParameters(format!(
            "Hoelder exponent must be positive, got {}",
            format_rational(&spec.beta)
        )));
    }
    (0..spec.count).map(|i| corpus_function(spec, i)).collect()
}

/// Function `i` of the corpus.
pub fn corpus_function(spec: &CorpusSpec, i: usize) -> Result<LabeledFunction<Rational>> {
    let rank = spec.rank;
    let cells = 1usize << rank;
    let mut rng = ChaCha8Rng::seed_from_u64(
        spec.seed
            .wrapping_mul(0x2545_f491_4f6c_dd1d)
            .wrapping_add(spec.kind.stream() << 32)
            .wrapping_add(((rank as u64) << 24) ^ i as u64),
    );
    let (label, values) = match spec.kind {
        CorpusKind::WalshPolynomial => {
            let degree = spec.degree.unwrap_or(1u64 << rank);
            if degree > 1u64 << rank {
                return Err(Error::IndexTooLarge { index: degree, rank });
            }
            let mut acc = vec![Rational::zero(); cells];
            for k in 0..degree {
                let a = small_rational(&mut rng);
                if a.is_zero() {
                    continue;
                }
                for (v, w) in acc.iter_mut().zip(walsh_ints(k, rank)?) {
                    if w > 0 {
                        *v += &a;
                    } else {
                        *v -= &a;
                    }
                }
            }
            (format!("walsh-polynomial(rank={rank},seed={},i={i},degree={degree})", spec.seed), acc)
        }
        CorpusKind::RandomStep => {
            let values = (0..cells).map(|_| small_rational(&mut rng)).collect();
            (format!("random-step(rank={rank},seed={},i={i})", spec.seed), values)
        }
        CorpusKind::DyadicHoelder => {
            let y = if i == 0 { 0 } else { rng.gen_range(0..cells) };
            let denom = BigInt::one() << rank;
            let values = (0..cells)
                .map(|x| {
                    let abs = Rational::new(BigInt::from(x ^ y), denom.clone());
                    hoelder_power(&abs, &spec.beta)
                })
                .collect();
            let label = format!(
                "dyadic-hoelder(rank={rank},seed={},i={i},beta={},shift={y})",
                spec.seed,
                format_rational(&spec.beta)
            );
            (label, values)
        }
        CorpusKind::IntervalIndicator => {
            let m = match spec.interval_order {
                Some(m) => m,
                None if i == 0 => 1.min(rank),
                None => rng.gen_range(0..=rank),
            };
            if m > rank {
                return Err(Error::ScaleTooFine { scale: m, rank });
            }
            let y = if i == 0 { 0 } else { rng.gen_range(0..cells) };
            // x ∈ I_m(y) iff the first m coordinates agree
            let values = (0..cells)
                .map(|x| if (x ^ y) >> (rank - m) == 0 { Rational::one() } else { Rational::zero() })
                .collect();
            (format!("interval-indicator(rank={rank},seed={},i={i},m={m},y={y})", spec.seed), values)
        }
    };
    Ok(LabeledFunction { label, function: StepFunction::new(rank, values)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_int;

    #[test]
    fn interval_indicator_example() {
        let spec = CorpusSpec::new(CorpusKind::IntervalIndicator, 1, 0).with_count(1);
        let f = &corpus(&spec).unwrap()[0];
        assert_eq!(f.function.values(), &[rational_int(1), rational_int(0)]);
    }

    #[test]
    fn hoelder_example() {
        let spec = CorpusSpec::new(CorpusKind::DyadicHoelder, 2, 0).with_count(1);
        let f = &corpus(&spec).unwrap()[0];
        assert_eq!(f.function.values(), &[rational(0, 1), rational(1, 4), rational(1, 2), rational(3, 4)]);
        let sq = CorpusSpec::new(CorpusKind::DyadicHoelder, 2, 0).with_count(1).with_beta(rational(1, 2));
        let f = &corpus(&sq).unwrap()[0];
        // sqrt(1/4) = 1/2 is exact; sqrt(1/2) is a lower enclosure
        assert_eq!(f.function.values()[1], rational(1, 2));
        let v = crate::scalar::rational_to_f64(&f.function.values()[2]);
        assert!(v <= 0.5f64.sqrt() && 0.5f64.sqrt() - v < 1e-12);
        assert!(corpus(&sq.clone().with_beta(rational_int(0))).is_err());
    }

    #[test]
    fn corpora_are_deterministic_and_nested() {
        for kind in CorpusKind::ALL {
            let small = corpus(&CorpusSpec::new(kind, 4, 11).with_count(3)).unwrap();
            let big = corpus(&CorpusSpec::new(kind, 4, 11).with_count(6)).unwrap();
            assert_eq!(&big[..3], &small[..]);
            let again = corpus(&CorpusSpec::new(kind, 4, 11).with_count(6)).unwrap();
            assert_eq!(big, again);
        }
        let a = corpus(&CorpusSpec::new(CorpusKind::RandomStep, 3, 1)).unwrap();
        let b = corpus(&CorpusSpec::new(CorpusKind::RandomStep, 3, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn walsh_polynomial_respects_degree() {
        let mut spec = CorpusSpec::new(CorpusKind::WalshPolynomial, 4, 5).with_count(2);
        spec.degree = Some(4);
        for f in corpus(&spec).unwrap() {
            let c = f.function.walsh_coefficients();
            assert!(c[4..].iter().all(|v| v.is_zero()));
            assert!(f.label.contains("degree=4"));
        }
    }

    #[test]
    fn kind_names_parse() {
        for k in CorpusKind::ALL {
            assert_eq!(k.name().parse::<CorpusKind>().unwrap(), k);
        }
        assert!("gaussian".parse::<CorpusKind>().is_err());
    }
}
