//! Sharp isoperimetry for irreversible Finsler gauges on Rⁿ and on convex cones.

pub mod battery;
pub mod bminkowski;
pub mod cone;
pub mod error;
pub mod gauge;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod model1d;
pub mod numerics;
pub mod shapes;

pub use error::{Error, Result};
