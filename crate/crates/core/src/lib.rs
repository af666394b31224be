pub mod analysis;
pub mod config;
pub mod construct;
pub mod error;
pub mod extsym;
pub mod fixtures;
pub mod oracle;
pub mod perm;
pub mod report;
pub mod sample;
pub mod subst;
pub mod symmetry;

pub use config::Bounds;
pub use error::{Error, Result};
