//! Strict OEIS b-file parsing and cross-checking of the two published
//! sequences against the computed beta-comb counts.

use std::str::FromStr;

use combs::closed::{a_single_beta, Eval, Method};
use combs::perm::Permutation;
use combs::Count;

use crate::{AppError, OeisArgs, EXIT_MISMATCH, EXIT_OK};

const SNAPSHOT_A275941: &str = include_str!("../fixtures/b275941.txt");
const SNAPSHOT_A275942: &str = include_str!("../fixtures/b275942.txt");

pub struct Snapshot {
    pub id: String,
    pub terms: Vec<(u64, Count)>,
    pub source: String,
}

/// Parse a b-file: one "index value" pair per line, `#` comments, strictly
/// increasing indices. Anything else is rejected with its line number.
pub fn parse_bfile(text: &str) -> Result<Vec<(u64, Count)>, String> {
    let mut terms: Vec<(u64, Count)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(format!("line {}: expected \"index value\", got {raw:?}", lineno + 1));
        }
        let index: u64 = fields[0]
            .parse()
            .map_err(|e| format!("line {}: bad index {:?}: {e}", lineno + 1, fields[0]))?;
        let value = Count::from_str(fields[1])
            .map_err(|e| format!("line {}: bad value {:?}: {e}", lineno + 1, fields[1]))?;
        if let Some(&(prev, _)) = terms.last() {
            if index <= prev {
                return Err(format!("line {}: index {index} not greater than {prev}", lineno + 1));
            }
        }
        terms.push((index, value));
    }
    if terms.is_empty() {
        return Err("b-file contains no terms".into());
    }
    Ok(terms)
}

fn load_snapshot(args: &OeisArgs, spine: u32) -> Result<Snapshot, AppError> {
    let (text, source) = if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::runtime(format!("cannot read {}: {e}", path.display())))?;
        (text, path.display().to_string())
    } else if args.fetch {
        let base = std::env::var("OEIS_BASE_URL").unwrap_or_else(|_| "https://oeis.org".into());
        let url = format!("{base}/{id}/b{num}.txt", id = args.sequence, num = &args.sequence[1..]);
        let mut response = ureq::get(&url)
            .call()
            .map_err(|e| AppError::runtime(format!("fetch {url} failed: {e}")))?;
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| AppError::runtime(format!("fetch {url} failed: {e}")))?;
        (text, url)
    } else {
        let text = match spine {
            3 => SNAPSHOT_A275941,
            _ => SNAPSHOT_A275942,
        };
        (text.to_string(), "builtin snapshot".into())
    };
    let terms = parse_bfile(&text).map_err(AppError::runtime)?;
    Ok(Snapshot { id: args.sequence.clone(), terms, source })
}

pub fn run(args: &OeisArgs) -> Result<i32, AppError> {
    let spine = match args.sequence.as_str() {
        "A275941" => 3,
        "A275942" => 4,
        other => return Err(AppError::usage(format!("unknown sequence {other:?}"))),
    };
    let snapshot = load_snapshot(args, spine)?;
    let pattern = Permutation::parse("321").expect("valid pattern literal");
    let mut mismatches = 0usize;
    for (t, value) in &snapshot.terms {
        if *t == 0 || *t > u32::MAX as u64 {
            return Err(AppError::runtime(format!("index {t} is not a valid tooth length")));
        }
        let eval = a_single_beta(&pattern, spine, *t as u32, 0)
            .map_err(|e| AppError::runtime(e.to_string()))?;
        let expected = match eval {
            Eval::Value { value, method } => {
                debug_assert_ne!(method, Method::Oracle);
                value
            }
            Eval::Unavailable => {
                return Err(AppError::runtime(format!("no formula for t={t}")));
            }
        };
        if expected != *value {
            mismatches += 1;
            println!("MISMATCH {} t={t}: snapshot={value} computed={expected}", snapshot.id);
        }
    }
    if mismatches == 0 {
        println!(
            "{}: {} terms from {} all match",
            snapshot.id,
            snapshot.terms.len(),
            snapshot.source
        );
        Ok(EXIT_OK)
    } else {
        println!("{}: {mismatches} mismatched terms", snapshot.id);
        Ok(EXIT_MISMATCH)
    }
}
