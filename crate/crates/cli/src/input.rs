//! Parsing of matrix, path and range arguments.

use std::fs;
use std::path::Path;

use chebpot::hermitian::{MatrixRecord, PathRecord};
use chebpot::{counterexample_path, CMatrix, ChartPoint, FsGeodesicPath, PosDefHermitian, SimplexPoint};
use num_complex::Complex64;
use serde::Deserialize;

/// Problems with the command line or input files, reported as usage errors.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Either a usage problem (exit 2) or a library error (exit 1).
#[derive(Debug)]
pub enum Failure {
    Usage(UsageError),
    Domain(chebpot::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<chebpot::Error> for Failure {
    fn from(e: chebpot::Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn read_file(path: &str) -> Result<String, UsageError> {
    fs::read_to_string(Path::new(path)).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Record(MatrixRecord),
    Real(Vec<Vec<f64>>),
}

fn parse_list(s: &str) -> Result<Vec<f64>, UsageError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("`{x}` is not a number"))))
        .collect()
}

/// `identity<k>`, `diag:a,b,…`, or a JSON file holding either a
/// `{"order", "re", "im"}` record or real rows.
pub fn matrix(spec: &str) -> Result<PosDefHermitian, Failure> {
    if let Some(k) = spec.strip_prefix("identity") {
        let k: usize = k.parse().map_err(|_| usage(format!("bad identity shorthand `{spec}`")))?;
        if k < 2 {
            return Err(usage("identity order must be at least 2").into());
        }
        return Ok(PosDefHermitian::identity(k));
    }
    if let Some(list) = spec.strip_prefix("diag:") {
        return Ok(PosDefHermitian::from_real_diagonal(&parse_list(list)?)?);
    }
    let text = read_file(spec)?;
    let parsed: MatrixFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{spec}: not a matrix file: {e}")))?;
    let m = match parsed {
        MatrixFile::Record(r) => CMatrix::try_from(r)?,
        MatrixFile::Real(rows) => {
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(usage(format!("{spec}: rows do not form a square matrix")).into());
            }
            CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
        }
    };
    Ok(PosDefHermitian::new(m)?)
}

/// `counterexample` or a JSON file `{"A": matrix, "D": [...]}`.
pub fn path(spec: &str) -> Result<FsGeodesicPath, Failure> {
    if spec == "counterexample" {
        return Ok(counterexample_path());
    }
    let text = read_file(spec)?;
    let record: PathRecord =
        serde_json::from_str(&text).map_err(|e| usage(format!("{spec}: not a path file: {e}")))?;
    Ok(FsGeodesicPath::try_from(record)?)
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn times(spec: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [a, b, k] => {
            let a: f64 = a.parse().map_err(|_| usage(format!("bad range start in `{spec}`")))?;
            let b: f64 = b.parse().map_err(|_| usage(format!("bad range stop in `{spec}`")))?;
            let k: usize = k.parse().map_err(|_| usage(format!("bad range count in `{spec}`")))?;
            if k < 2 {
                return Err(usage("a range needs at least two points"));
            }
            Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect())
        }
        [_] => parse_list(spec),
        _ => Err(usage(format!("`{spec}` is neither start:stop:count nor a list"))),
    }
}

pub fn simplex_point(spec: &str) -> Result<SimplexPoint, Failure> {
    Ok(SimplexPoint::new(parse_list(spec)?)?)
}

/// `re,im[,re,im…]`.
pub fn chart_point(spec: &str) -> Result<ChartPoint, Failure> {
    let v = parse_list(spec)?;
    if v.is_empty() || v.len() % 2 != 0 {
        return Err(usage("chart point needs re,im pairs").into());
    }
    Ok(ChartPoint::new(
        v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect(),
    )?)
}

pub fn reals(spec: &str) -> Result<Vec<f64>, UsageError> {
    parse_list(spec)
}
