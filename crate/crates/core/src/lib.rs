//! Exact computations on blowups of `Q[x1..xm]`: chart presentations, Nagata
//! function rings `R(t)`, relevance of ideals, ideal sheaves and the ring
//! `D* = ⋂ R(t)`, with certificates that can be re-checked independently.

pub mod blowup;
pub mod cert;
pub mod dstar;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod nagata;
pub mod oracle;
pub mod poly;
pub mod random;

pub use error::{Error, Result};
pub use poly::{BaseOrder, Mono, Order, Poly, Rat, VarTable};
