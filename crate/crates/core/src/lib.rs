//! Certified computations around the pair `{A0, alpha*A1}` with
//! `A0 = [[1,1],[0,1]]` and `A1 = [[1,0],[1,1]]`: balanced words, exact
//! matrix products, the growth curve `S`, joint spectral radius bounds and
//! the critical parameter `alpha*`.

pub mod alphastar;
pub mod arith;
pub mod error;
pub mod jsr;
pub mod mat;
pub mod scurve;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
