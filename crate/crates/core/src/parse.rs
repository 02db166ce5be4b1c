//! Text forms of rationals, sequences and weight schemes.
//!
//! Scheme grammar:
//!
//! ```text
//! fejer | log | cesaro:<alpha>
//! norlund:<seq> | weighted:<seq>
//! explicit:<row>;<row>;...        each row is a comma list, keyed by its length
//! <seq> = const:<c> | affine:<slope>,<intercept> | recip:<offset> | list:<v>,<v>,...
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::means::{Sequence, WeightScheme};
use crate::scalar::Rational;

fn parse_integer(s: &str) -> Result<BigInt> {
    let (negative, digits) = match (s.strip_prefix('-'), s.strip_prefix('+')) {
        (Some(d), _) => (true, d),
        (None, Some(d)) => (false, d),
        (None, None) => (false, s),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("'{s}' is not an integer")));
    }
    let v = digits.parse::<BigInt>().map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
    Ok(if negative { -v } else { v })
}

/// `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let den = parse_integer(den.trim())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(parse_integer(num.trim())?, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 64 {
            return Err(Error::Parse(format!("'{s}' is not a decimal")));
        }
        let negative = int.starts_with('-');
        let int_part = match int.trim_start_matches(['+', '-']) {
            "" => BigInt::zero(),
            _ => parse_integer(int)?,
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac_part = Rational::new(parse_integer(frac)?, scale);
        let magnitude = Rational::from_integer(num_traits::Signed::abs(&int_part)) + frac_part;
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Rational::from_integer(parse_integer(t)?))
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_sequence(s: &str) -> Result<Sequence<Rational>> {
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("sequence '{s}' needs the form kind:args")))?;
    match kind.trim() {
        "const" => Ok(Sequence::Constant(parse_rational(args)?)),
        "affine" => match parse_list(args)?.as_slice() {
            [slope, intercept] => Ok(Sequence::Affine { slope: slope.clone(), intercept: intercept.clone() }),
            _ => Err(Error::Parse(format!("affine sequence needs two values, got '{args}'"))),
        },
        "recip" => {
            let offset = args
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("recip offset '{args}' is not an integer")))?;
            Ok(Sequence::Reciprocal { offset })
        }
        "list" => Ok(Sequence::Explicit(parse_list(args)?)),
        other => Err(Error::Parse(format!("unknown sequence kind '{other}'"))),
    }
}

pub fn parse_scheme(s: &str) -> Result<WeightScheme<Rational>> {
    let t = s.trim();
    let (head, rest) = match t.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (t, None),
    };
    match (head, rest) {
        ("fejer", None) => Ok(WeightScheme::fejer()),
        ("log" | "logarithmic", None) => Ok(WeightScheme::Logarithmic),
        ("cesaro", Some(a)) => {
            let alpha = parse_rational(a)?;
            if alpha <= Rational::zero() {
                return Err(Error::Parse(format!("Cesaro order must be positive, got '{a}'")));
            }
            Ok(WeightScheme::Cesaro(alpha))
        }
        ("norlund", Some(seq)) => Ok(WeightScheme::Norlund(parse_sequence(seq)?)),
        ("weighted", Some(seq)) => Ok(WeightScheme::Weighted(parse_sequence(seq)?)),
        ("explicit", Some(rows)) => {
            let mut map = BTreeMap::new();
            for row in rows.split(';').filter(|r| !r.trim().is_empty()) {
                let w = parse_list(row)?;
                if map.insert(w.len() as u64, w).is_some() {
                    return Err(Error::Parse(format!("explicit scheme repeats a row of length {}", row.split(',').count())));
                }
            }
            if map.is_empty() {
                return Err(Error::Parse("explicit scheme has no rows".into()));
            }
            Ok(WeightScheme::Explicit(map))
        }
        _ => Err(Error::Parse(format!("unknown scheme '{s}'"))),
    }
}

/// Schemes separated by `|`.
pub fn parse_scheme_list(s: &str) -> Result<Vec<WeightScheme<Rational>>> {
    split_top_level(s).iter().map(|p| parse_scheme(p)).collect()
}

/// Splits on `|`, the separator between schemes (commas occur inside schemes).
fn split_top_level(s: &str) -> Vec<String> {
    s.split('|').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

/// `a..b`, `a..=b` or a single number, as an inclusive range.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let t = s.trim();
    let num = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("'{x}' is not a natural number")))
    };
    let (lo, hi) = if let Some((a, b)) = t.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = t.split_once("..") {
        let b = num(b)?;
        if b == 0 {
            return Err(Error::Parse(format!("empty range '{s}'")));
        }
        (num(a)?, b - 1)
    } else {
        let v = num(t)?;
        (v, v)
    };
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rational_int};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), rational_int(-7));
        assert_eq!(parse_rational("-1.25").unwrap(), rational(-5, 4));
        assert_eq!(parse_rational("0.5").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-.5").unwrap(), rational(-1, 2));
        for bad in ["", "1/0", "a", "1/", "/2", "1.", "1.2.3", "--1", "1e3", "+-2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn schemes_round_trip_through_display() {
        for s in [
            "fejer",
            "log",
            "cesaro:1/2",
            "norlund:affine:1,1",
            "norlund:list:1,2,3",
            "weighted:recip:0",
            "weighted:affine:1,0",
            "explicit:1;1/2,1/2",
        ] {
            let scheme = parse_scheme(s).unwrap();
            assert_eq!(scheme.to_string(), s);
            assert_eq!(parse_scheme(&scheme.to_string()).unwrap(), scheme);
        }
        assert_eq!(parse_scheme("norlund:const:1").unwrap(), WeightScheme::fejer());
    }

    #[test]
    fn bad_schemes() {
        for bad in ["", "fejer:1", "cesaro:0", "cesaro:-1", "norlund", "norlund:sq:1", "explicit:", "explicit:1;2", "affine:1"] {
            assert!(parse_scheme(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn scheme_lists_and_ranges() {
        assert_eq!(parse_scheme_list("fejer | weighted:recip:0").unwrap().len(), 2);
        assert_eq!(parse_range("1..8").unwrap(), (1, 7));
        assert_eq!(parse_range("1..=8").unwrap(), (1, 8));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert!(parse_range("x..2").is_err());
    }
}
