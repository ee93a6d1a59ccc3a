//! Std companion to `ramsplit-core`: JSON formats, parallel exhaustive
//! search, seeded random corpora and the `ramsplit` command-line tool.

use std::fmt;

use ramsplit_core::dualcomplex::DualError;
use ramsplit_core::pirutka::PirutkaError;
use ramsplit_core::simplicial::ComplexError;
use ramsplit_core::splitting::SplitError;
use ramsplit_core::zmodl::ZmodError;

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod random;

/// Operational failures, each with its own exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Usage(String),
    Invalid(String),
    Budget(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Invalid(_) => "invalid_input",
            Error::Budget(_) => "budget_exceeded",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Invalid(_) => 3,
            Error::Budget(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Usage(m) | Error::Invalid(m) | Error::Budget(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for Error {}

impl From<PirutkaError> for Error {
    fn from(e: PirutkaError) -> Self {
        match e {
            PirutkaError::BudgetExceeded { .. } => Error::Budget(e.to_string()),
            _ => Error::Invalid(e.to_string()),
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Error {
            fn from(e: $t) -> Self {
                Error::Invalid(e.to_string())
            }
        }
    )*};
}

invalid_from!(ZmodError, ComplexError, DualError, SplitError);
