//! Exact polynomial arithmetic, Gröbner bases and ideal operations.

pub mod expr;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod poly;

pub use field::{Field, Scalar};
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Poly, PolyRing, RingRef};
