//! Univariate and tensor-product B-spline spaces.
//!
//! Knot vectors come in two flavours: open (clamped to `[0, 1]`) and uniform
//! periodic, where the first and last `degree` basis functions are identified
//! pairwise so that every member of the space is C^{degree-1} across the
//! seam. Identification happens through index wrapping at evaluation time;
//! the Cox-de Boor kernel itself is the same for both flavours.

pub mod knots;
pub mod project;
pub mod space;

pub use knots::{KnotKind, KnotVector};
pub use project::{l2_project, l2_project_pinned};
pub use space::{BasisEval, TensorSplineSpace, UnivariateSplineSpace};
