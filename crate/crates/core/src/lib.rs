//! Well-founded reasoning for hybrid MKNF knowledge bases with function
//! symbols.
//!
//! A knowledge base pairs an ALC ontology with a normal logic program. This
//! crate parses the text format, grounds the program up to a term depth,
//! and computes the alternating fixpoint partition and the iterated
//! fixpoint interpretation. A brute-force stable-partition checker serves
//! as an oracle for small inputs.

pub mod dl;
pub mod engine;
pub mod error;
pub mod ground;
pub mod oracle;
pub mod parser;
pub mod semantics;
pub mod syntax;

pub use error::{Error, KbError, Result};
pub use ground::{ground_program, GroundProgram, GroundRule, KnownAtoms};
pub use parser::{parse_atom, parse_kb, Diagnostic, Severity, SourceKb};
pub use semantics::{AtomId, AtomSet, Partition, ThreeValuedInterpretation, TruthValue};
pub use syntax::{Atom, Axiom, Concept, HybridKb, Rule, Symbol, Term};
