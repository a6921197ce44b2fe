use thiserror::Error;

use crate::parser::Diagnostic;

/// Structural problems detected while assembling a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("predicate `{predicate}` used with arity {first} and {second}")]
    ArityClash { predicate: String, first: usize, second: usize },
    #[error("`{predicate}` is an ontology name expecting arity {expected} but is used with arity {found}")]
    DlArityClash { predicate: String, expected: usize, found: usize },
    #[error("`{0}` is used both as a concept and as a role")]
    ConceptRoleClash(String),
    #[error("individual `{0}` is not a ground term")]
    NonGroundIndividual(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error("{} error(s) while parsing", .0.len())]
    Parse(Vec<Diagnostic>),
    #[error("grounding would produce more than {cap} rules (depth bound {depth})")]
    GroundingLimit { cap: u64, depth: usize },
    #[error("incoherent knowledge base: {0}")]
    Incoherent(String),
    #[error("atom `{atom}` is not a known atom at depth bound k={depth}")]
    UnknownAtom { atom: String, depth: usize },
    #[error("known-atom set has {size} atoms, above the oracle limit of {limit}")]
    OracleLimit { size: usize, limit: usize },
    #[error("operation requires a function-free knowledge base")]
    NotFunctionFree,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
