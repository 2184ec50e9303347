//! Exact computer algebra for pure (universally injective) ring maps between
//! finitely presented algebras over the rationals or a prime field.

pub mod algebra;
pub mod descent;
pub mod engine;
pub mod error;
pub mod modules;
pub mod schemes;

pub use error::{CrispError, Result};
