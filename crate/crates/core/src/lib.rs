//! Numerical verification toolkit for homogeneous Hopf hypersurfaces in the
//! complex hyperbolic quadric `SO(2,n)/(SO(2) x SO(n))`, built entirely from the
//! matrix Lie algebra so(2,n) at the base point.

pub mod error;
pub mod lie_core;
pub mod linalg;
pub mod root_system;

pub use error::{Error, Result};
pub mod quadric;
pub mod spectrum;
pub mod hypersurfaces;
pub mod oracle;
pub mod contact;
pub mod report;
pub mod cli;
