//! Choquet integrals with respect to distorted Lebesgue capacities,
//! Kantorovich–Choquet approximation operators built on them, and a
//! harness that checks Korovkin-type convergence empirically.
//!
//! ```
//! use choquet_core::{choquet_numeric, Capacity, Func, Integrand, QuadratureConfig};
//!
//! let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
//! let f = Integrand::new(Func::unary(|t| t * t), 0.0, 1.0).unwrap();
//! let v = choquet_numeric(&f, &cap, &QuadratureConfig::default()).unwrap();
//! assert!((v.value - 8.0 / 15.0).abs() < 1e-8);
//! ```

// `!(x > 0.0)` style comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod choquet;
pub mod error;
pub mod expr;
pub mod func;
pub mod korovkin;
pub mod operators;
pub mod quadrature;

pub use capacity::{BaseMeasure, Capacity, Distortion, IntervalSet, Region};
pub use choquet::{
    choquet_numeric, choquet_simple, ChoquetValue, QuadratureConfig, SimpleFunction,
};
pub use error::{Error, Result};
pub use expr::{parse_function, Expression};
pub use func::{Func, Integrand, Monotonicity};
pub use korovkin::{CompactWindow, TestFunction, TestFunctionSet, TestSetVariant};
pub use operators::{Approximator, Evaluation, OperatorFamily, OperatorInstance, OperatorParam};

/// Crate version, echoed into report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
