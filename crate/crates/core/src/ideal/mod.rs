//! Gröbner bases and the ideal calculus over `Q[vars]` and its quotients by
//! a fixed relation ideal.

mod groebner;
mod ops;

pub use groebner::{s_polynomial, GroebnerBasis};
pub use ops::*;
