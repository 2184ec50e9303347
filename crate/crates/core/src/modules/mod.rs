pub mod algebra;
pub mod complex;
pub mod localize;
pub mod module;
pub mod ops;
pub mod product;
pub mod ringmap;

pub use algebra::{AlgRef, FPAlgebra, PrimePoint, ProductInfo};
pub use complex::ComplexOfModules;
pub use module::{FPModule, ModuleMap};
pub use ringmap::RingMap;
