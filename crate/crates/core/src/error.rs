use crate::expr::{ExprError, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{expr} is not in the log-polynomial fragment at k={k}: {detail}")]
    NotInFragment { expr: String, k: u8, detail: String },
    #[error("indeterminate form: {0}")]
    IndeterminateForm(String),
    #[error("cannot order {f} against {h}: verdict {verdict}")]
    UnorderablePair { f: String, h: String, verdict: String },
    #[error("pairwise verdicts are not a preorder: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{g} is not a generator modulo {p}")]
    NotGenerator { g: u64, p: u64 },
    #[error("work bound exceeded: {needed} operations requested, bound is {bound}")]
    WorkBound { needed: u128, bound: u64 },
    #[error("oracle returned no solution: {0}")]
    NoSolution(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse error classes, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    WorkBound,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::WorkBound { .. } => ErrorClass::WorkBound,
            Error::Io(_) | Error::Csv(_) => ErrorClass::Io,
            _ => ErrorClass::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
