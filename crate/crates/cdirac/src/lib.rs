//! Command-line verifier and file formats on top of `cdirac-core`.
//!
//! Every subcommand produces a [`report::Report`]; `main` prints it and maps
//! the status to the exit code.

pub mod algebra_doc;
pub mod catalog;
pub mod commands;
pub mod report;
pub mod target;

pub use cdirac_core;

use report::ErrorKind;

/// Environment variable overriding the seed of randomized checks.
pub const SEED_ENV: &str = "CDIRAC_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("construction unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] cdirac_core::Error),
}

impl CliError {
    pub fn kind(&self) -> ErrorKind {
        use cdirac_core::Error as E;
        match self {
            CliError::Unsupported(_) | CliError::Core(E::Unsupported(_)) => ErrorKind::Unsupported,
            CliError::Core(E::Consistency(_)) => ErrorKind::Verification,
            _ => ErrorKind::Input,
        }
    }
}

/// `key=value` pairs separated by commas; whitespace around items is ignored.
pub fn parse_assignments(s: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("expected key=value, got '{item}'")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Parse(format!("expected key=value, got '{item}'")));
        }
        if out.iter().any(|(x, _)| x == k) {
            return Err(CliError::Parse(format!("'{k}' assigned twice")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn parse_lambdas(s: &str) -> Result<Vec<(String, f64)>, CliError> {
    parse_assignments(s)?
        .into_iter()
        .map(|(k, v)| {
            let x: f64 = v.parse().map_err(|_| CliError::Parse(format!("'{v}' is not a number (for {k})")))?;
            if !x.is_finite() {
                return Err(CliError::Parse(format!("{k} must be finite")));
            }
            Ok((k, x))
        })
        .collect()
}

pub fn parse_int_params(s: &str) -> Result<Vec<(String, i64)>, CliError> {
    parse_assignments(s)?
        .into_iter()
        .map(|(k, v)| {
            let x: i64 = v.parse().map_err(|_| CliError::Parse(format!("'{v}' is not an integer (for {k})")))?;
            Ok((k, x))
        })
        .collect()
}

/// Seed from `CDIRAC_SEED` when set, else the library default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(cdirac_core::decomp::DEFAULT_SEED),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments_parse() {
        let v = parse_lambdas(" f1=-2, p1 = 1 ").unwrap();
        assert_eq!(v, vec![("f1".to_string(), -2.0), ("p1".to_string(), 1.0)]);
        assert!(parse_lambdas("f1").is_err());
        assert!(parse_lambdas("f1=x").is_err());
        assert!(parse_lambdas("f1=1,f1=2").is_err());
        assert!(parse_lambdas("f1=inf").is_err());
        assert_eq!(parse_int_params("n=3,i=2,j=1").unwrap().len(), 3);
        assert!(parse_int_params("n=3.5").is_err());
    }

    #[test]
    fn error_kinds() {
        assert_eq!(CliError::Parse("x".into()).kind(), ErrorKind::Input);
        assert_eq!(CliError::Core(cdirac_core::Error::Unsupported("x".into())).kind(), ErrorKind::Unsupported);
        assert_eq!(CliError::Core(cdirac_core::Error::IndefiniteMetric("x".into())).kind(), ErrorKind::Input);
    }
}
