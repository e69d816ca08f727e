//! Parsers for command-line values.

use std::path::Path;

use sectorial::ffield::Fq;
use sectorial::linalg::Q;
use sectorial::ratmat::{self, RatMat};
use sectorial::rootsys::{Root, RootSystem};

use crate::Failure;

fn usage<T>(msg: String) -> Result<T, Failure> {
    Err(Failure::Usage(msg))
}

fn items(s: &str, sep: char) -> impl Iterator<Item = &str> {
    s.split(sep).map(str::trim).filter(|x| !x.is_empty())
}

/// 1-based simple-root indices, returned 0-based.
pub fn theta(rs: &RootSystem, s: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for it in items(s, ',') {
        let k: usize = it.parse().map_err(|_| Failure::Usage(format!("bad simple-root index {it:?}")))?;
        if k == 0 || k > rs.rank() {
            return usage(format!("simple-root index {k} outside 1..={}", rs.rank()));
        }
        if !out.contains(&(k - 1)) {
            out.push(k - 1);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// A root written as a digit string (`1232`) or as colon-separated integers
/// (`1:2:3:2`), optionally prefixed by `-`.
pub fn root(rs: &RootSystem, s: &str) -> Result<usize, Failure> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, s),
    };
    let coords: Option<Vec<i32>> = if body.contains(':') {
        body.split(':').map(|c| c.parse().ok()).collect()
    } else {
        body.chars().map(|c| c.to_digit(10).map(|d| d as i32)).collect()
    };
    let Some(coords) = coords else {
        return usage(format!("bad root {s:?}"));
    };
    let r: Root = coords.into_iter().map(|c| sign * c).collect();
    if r.len() != rs.rank() {
        return usage(format!("root {s:?} has {} coordinates, expected {}", r.len(), rs.rank()));
    }
    rs.index_of(&r).ok_or_else(|| Failure::Usage(format!("{s:?} is not a root of {}", rs.label())))
}

pub fn roots(rs: &RootSystem, s: &str) -> Result<Vec<usize>, Failure> {
    items(s, ',').map(|it| root(rs, it)).collect()
}

pub fn point(s: &str, dim: usize) -> Result<Vec<Q>, Failure> {
    let v: Vec<Q> = items(s, ',')
        .map(|c| c.parse::<Q>().map_err(|_| Failure::Usage(format!("bad rational {c:?}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != dim {
        return usage(format!("point {s:?} has {} coordinates, expected {dim}", v.len()));
    }
    Ok(v)
}

pub fn ints(s: &str) -> Result<Vec<i64>, Failure> {
    items(s, ',')
        .map(|c| c.parse::<i64>().map_err(|_| Failure::Usage(format!("bad integer {c:?}"))))
        .collect()
}

/// A JSON list of rows of strings such as `[["t", "1"], ["-1", "0"]]`.
pub fn matrix_file(f: &Fq, path: &Path) -> Result<RatMat, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<String>> =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return usage(format!("{}: expected a nonempty square matrix", path.display()));
    }
    Ok(ratmat::parse(f, &rows)?)
}
