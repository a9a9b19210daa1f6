//! Problem data for the Bernoulli-type free boundary problem on the strip.

use std::fmt;
use std::sync::Arc;

/// Scalar field on the hold-all rectangle, `(x, y) -> f64`.
pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Vector field on the hold-all rectangle.
pub type VectorField = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;
/// Profile of the exact free boundary as an offset: `y = 1 + offset(x)`.
pub type BoundaryOffset = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary conditions on the lateral sides of the strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    /// Dirichlet data `h` on both lateral sides (and the bottom).
    DirichletLateral,
    /// Periodic identification of the lateral sides; Dirichlet on the bottom only.
    PeriodicLateral,
}

/// Data of one free boundary problem: volumetric source `f`, Neumann datum
/// `g` with its gradient, fixed Dirichlet data `h` on bottom/lateral sides,
/// and the constant Dirichlet datum `h0` on the free boundary.
///
/// `g` must keep a strictly positive sign on the region swept by candidate
/// boundaries; the solvers check this at every boundary quadrature point.
#[derive(Clone)]
pub struct ProblemData {
    pub f: ScalarField,
    pub g: ScalarField,
    pub grad_g: VectorField,
    pub h_fixed: ScalarField,
    pub h0: f64,
    pub bc_kind: BcKind,
    pub exact_boundary: Option<BoundaryOffset>,
}

impl fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemData")
            .field("h0", &self.h0)
            .field("bc_kind", &self.bc_kind)
            .field("has_exact_boundary", &self.exact_boundary.is_some())
            .finish()
    }
}

impl ProblemData {
    /// Convenience constructor for manufactured cases in tests.
    pub fn new(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        grad_g: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
        h_fixed: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        h0: f64,
        bc_kind: BcKind,
    ) -> Self {
        ProblemData {
            f: Arc::new(f),
            g: Arc::new(g),
            grad_g: Arc::new(grad_g),
            h_fixed: Arc::new(h_fixed),
            h0,
            bc_kind,
            exact_boundary: None,
        }
    }

    pub fn with_exact_boundary(
        mut self,
        offset: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.exact_boundary = Some(Arc::new(offset));
        self
    }
}
