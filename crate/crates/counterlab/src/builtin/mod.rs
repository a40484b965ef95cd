//! Machines and oracles shipped with the library: the quantum
//! word-comparison machine, exact membership oracles for the named test
//! languages, the injective base-2 word encoding, and black-box recognizers
//! with explicit error contracts.

mod blackbox;
pub mod fixtures;
mod languages;
mod twin;

pub use blackbox::{BlackBoxRecognizer, BlackBoxRun, ErrorKind};
pub use languages::{encode, membership, EncodedString, Language};
pub use twin::{
    all_operators, op_decide, op_first_a, op_first_b, op_second_a, op_second_b, op_separator,
    op_start, twin_round_trace, twin_spec,
};

use thiserror::Error;

use crate::exactmath::Rational;

#[derive(Debug, Error)]
pub enum BuiltinError {
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
    #[error("bad symbol {0:?} (expected a or b)")]
    BadSymbol(char),
    #[error("error bound must satisfy 0 <= epsilon < 1, got {0}")]
    BadEpsilon(Rational),
}
