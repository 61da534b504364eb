//! Computational clone theory over finite universes.

pub mod baker_pixley;
pub mod certificate;
pub mod cli;
pub mod clone;
pub mod error;
pub mod field;
pub mod finite;
pub mod interpolation;
pub mod io;
pub mod limits;
pub mod perms;
pub mod simple_module;
pub mod structure;
pub mod ultralocal;

pub use clone::CloneFragment;
pub use error::{Error, Result};
pub use finite::{Elem, Operation, Relation, Universe};
pub use limits::Limits;
