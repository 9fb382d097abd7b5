//! Exact computations with super Poisson algebras, Darboux charts, star products
//! and finite W-superalgebras.

pub mod darboux;
pub mod error;
pub mod linalg;
pub mod poisson;
pub mod rational;
pub mod report;
pub mod starprod;
pub mod supercore;
pub mod wslice;

pub use error::{Error, Result};
pub use rational::Q;
