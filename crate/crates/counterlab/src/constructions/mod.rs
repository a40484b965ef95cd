//! Machine transformations and composed recognizers: capped reachability for
//! nondeterministic counter machines, the bounded-error probabilistic
//! simulation of nondeterminism, the loop machines built around the quantum
//! word comparator, and the pebble recognizers built around black boxes.

mod coin;
mod exist_twin;
mod pebble;
mod reach;
mod runnables;
mod transform;

pub use coin::{coin_on_plane, coin_on_third};
pub use exist_twin::{exist_twin_2qcca, virtual_trace};
pub use pebble::{siam_twins_pebble, siam_virtual_trace};
pub use reach::{capped_reachability, ReachabilityBound};
pub use runnables::{
    GreaterSquareRecognizer, GreaterSquareSystem, LapinsRecognizer, LapinsSystem, OneShotConfig,
    USqConfig, USquareRecognizer, USquareSystem,
};
pub use transform::{transform_nca_to_pca, transform_with_audit, TransformParams, Transformed};

use thiserror::Error;

use crate::engines::EngineError;
use crate::machines::{Kind, MachineError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("expected {expected}, found kind {found}")]
    WrongKind { expected: &'static str, found: Kind },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("black box contract mismatch: {0}")]
    BadBlackBox(String),
    #[error("audit failed: {0}")]
    AuditFailed(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
