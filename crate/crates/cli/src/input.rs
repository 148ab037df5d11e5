//! Input parsing. Every failure here is an input error (exit code 2).

use std::fmt;
use std::io::Read;
use std::path::Path;

use logorder::eisenstein::DirichletCharacter;
use logorder::padic::{parse_q, Q};
use serde::de::DeserializeOwned;

/// Malformed or unreadable input.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

/// Reads a JSON document from a file, or from stdin when the path is `-`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: schema error: {e}", path.display())))
}

/// Converts a library validation error on parsed input into an input error.
pub fn validate<T>(r: logorder::Result<T>, what: &str) -> anyhow::Result<T> {
    r.map_err(|e| input_error(format!("{what}: {e}")))
}

pub fn rational(s: &str) -> Result<Q, String> {
    parse_q(s.trim()).map_err(|e| e.to_string())
}

pub fn int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

/// Pair `a,b` of integers.
pub fn int_pair(s: &str) -> Result<(i64, i64), String> {
    match int_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two comma-separated integers, got {s:?}")),
    }
}

/// Character given as `modulus:index` into the enumeration of `DirichletCharacter::all`.
pub fn character(s: &str) -> Result<DirichletCharacter, String> {
    let (m, i) = s.split_once(':').ok_or_else(|| format!("expected modulus:index, got {s:?}"))?;
    let m: u64 = m.trim().parse().map_err(|e| format!("{m:?}: {e}"))?;
    let i: usize = i.trim().parse().map_err(|e| format!("{i:?}: {e}"))?;
    if m == 0 {
        return Err("modulus must be positive".into());
    }
    let all = DirichletCharacter::all(m);
    all.get(i)
        .cloned()
        .ok_or_else(|| format!("index {i} out of range: there are {} characters mod {m}", all.len()))
}
