//! counterlab — an exact simulation workbench for counter automata and
//! interactive proof sessions.
//!
//! The library covers:
//!
//! - [`exactmath`]: arbitrary-precision rational scalars, vectors, matrices
//!   and measurement superoperators. Every probability in the workbench is an
//!   exact rational; floating point appears only in display approximations
//!   and Monte Carlo confidence intervals.
//! - [`machines`]: the data model, validation and text file format for
//!   two-way/one-way automata with counters, quantum registers and pebbles.
//! - [`engines`]: execution semantics — deterministic runs, capped
//!   nondeterministic search, exact probability computation with certified
//!   truncation bounds, exact absorption analysis, seeded Monte Carlo, and
//!   recognition-mode classification.
//! - [`builtin`]: machines and oracles shipped with the library, including a
//!   three-state quantum word-comparison automaton and black-box recognizers
//!   with tunable error contracts.
//! - [`protocols`]: interactive-proof machinery — verifiers that check
//!   prover-streamed counter traces, honest and adversarial provers, a
//!   configuration-length checking gadget, and session runners.
//! - [`constructions`]: machine transformations and composed recognizers
//!   built from the primitives above.
//!
//! See the crate `examples/` directory for one runnable example per major
//! capability, and `counterlab --help` for the thin command-line front end.

pub mod builtin;
pub mod cli;
pub mod constructions;
pub mod engines;
pub mod exactmath;
pub mod machines;
pub mod protocols;

pub use exactmath::Rational;
