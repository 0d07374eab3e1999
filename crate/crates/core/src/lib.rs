//! Weyl-group orbit functions of B3 and C3: evaluation, grids, discrete
//! transforms and interpolation.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod explicit;
pub mod grids;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod orbit;
pub mod sampling;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use lie::{Algebra, AlgebraName, TorusPoint, Weight};
