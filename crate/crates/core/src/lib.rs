//! Quasi-local operators on finitely generated groups, uniformly finite homology,
//! cyclic characters, fillings and combings.

pub mod combing;
pub mod cyclic;
pub mod error;
pub mod estimates;
pub mod experiment;
pub mod filling;
pub mod group;
pub mod kernel;
pub mod quasilocal;
pub mod random;
pub mod report;
pub mod scalar;
pub mod uf;

pub use error::{QlabError, Result};
pub use group::{Ball, Family, GroupElement, MarkedGroup};
pub use kernel::Kernel;
pub use scalar::{GaussianRational, Scalar};
