//! Linear-sketch toolkit for k-edge-connectivity certificates over dynamic
//! edge streams.
//!
//! The pipeline: deterministic sparse recovery over the Mersenne prime field
//! ([`sparse_recovery`]), geometric level hashing ([`hashing`]), mergeable
//! support-find sketches ([`supportfind`]), a stream-facing graph sketch
//! built from signed incidence vectors ([`graph_sketch`]), and the doubling
//! augmentation that turns end-of-stream sketch state into a verifiable
//! certificate ([`certify`]). Everything probabilistic is graded against the
//! brute-force [`oracle`] module.

pub mod certify;
pub mod distributed;
pub mod field;
pub mod graph_sketch;
pub mod hashing;
pub mod oracle;
pub(crate) mod par;
pub mod sparse_recovery;
pub mod stream;
pub mod supportfind;
pub(crate) mod wire;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("index {index} out of range [1, {max}]")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("sketch shape mismatch")]
    ShapeMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("self loop at vertex {0}")]
    SelfLoop(u32),
    #[error("cut budget exceeded: found {found}, limit {limit}")]
    BudgetExceeded { found: usize, limit: usize },
    #[error("certificate query failed: {0}")]
    CertifyFailed(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("corrupt payload: {0}")]
    Corrupt(String),
    #[error("distributed simulation bug: {0}")]
    SimulationBug(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
