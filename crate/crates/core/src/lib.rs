//! Numerical toolkit for decreasing rearrangements, Hardy (Cesàro) operators,
//! rearrangement-invariant norms built on top of them, and the constants that
//! relate those norms to each other.
//!
//! Module map:
//!
//! * [`funcspace`]: function representations, weights, dilation, tensor
//!   products, the improper-integral quadrature and the supremum search.
//! * [`rearrange`]: tail functions, `f*` and `f**`.
//! * [`hardy`]: the Hardy operator in one and several dimensions.
//! * [`norms`]: weighted, mixed, Marcinkiewicz, `Y`/`Y*` and Grand Lebesgue norms.
//! * [`constants`]: equivalence and boundedness constants for weighted Hardy
//!   inequalities.
//! * [`lorentz`]: the `Y`/`Y*` equivalence, exactness families and fundamental
//!   functions.

pub mod constants;
pub mod error;
pub mod funcspace;
pub mod hardy;
pub mod lorentz;
pub mod norms;
pub mod rearrange;

pub use error::{Error, Result};
pub use funcspace::{
    dilate, integrate, make_function, tensor_product, FnSpec, Interval, MultiFn, QuadratureConfig,
    RealFn, WeightSpec,
};
