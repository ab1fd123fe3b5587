//! Numerical certification of the unique (para-)Kahler-Weyl connection on
//! 4-dimensional (para-)Hermitian models, built from first-order metric
//! jets. The engine runs identically over real and complex scalars; the
//! complex runs replay the analytic-continuation step as randomized
//! verification sweeps.

pub mod error;
pub mod forms;
pub mod jet;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod report;
pub mod scalar;
pub mod structures;
pub mod weyl;

pub use error::{KwError, Result};
pub use scalar::{Scalar, C64};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
