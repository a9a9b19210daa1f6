//! Spline geometry of the strip: the free boundary as a graph curve, the
//! tensor-product map of the physical domain, and the Coons refit applied
//! after each boundary update.

pub mod coons;
pub mod curve;
pub mod map;

pub use coons::coons_refit;
pub use curve::BoundaryCurve;
pub use map::{GeoMap, MapEval, top_coeffs_in_open_basis};
