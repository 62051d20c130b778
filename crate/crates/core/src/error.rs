use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::group::ElementIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("group axiom violated: {0}")]
    Axiom(AxiomViolation),

    #[error("{path}:{line}: {message}")]
    CayleyFormat {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

/// Which group axiom a table failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Identity,
    Inverse,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
            Axiom::Associativity => "associativity",
        })
    }
}

/// First failing witness found by table validation.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<ElementIndex>,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|e| e.0.to_string()).collect();
        write!(f, "{} at ({}): {}", self.axiom, w.join(", "), self.detail)
    }
}
