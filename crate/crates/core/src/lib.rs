pub mod arith;
pub mod cobar;
pub mod error;
pub mod hypergeom;
pub mod linalg;
pub mod operad_dims;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
