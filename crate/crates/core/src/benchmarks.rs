//! The three manufactured benchmark problems.
//!
//! Each test is built from an exact solution of the form
//! `u(x, y) = s + a(x) s (1 - s)` with `s = y / (1 + a(x))`, which attains
//! the constant value 1 on the curve `y = 1 + a(x)`; that curve is therefore
//! the exact free boundary. The data are `f = -Laplace(u)` and the conormal
//! derivative `g = grad(u) . (-a', 1) / sqrt(1 + a'^2)`, extended to the
//! hold-all rectangle. Tests 1 and 2 use Dirichlet lateral sides with
//! `h = y`; test 3 reuses the test-2 data with periodic lateral sides.
//!
//! All derivatives are hand-derived closed forms, unit-tested against finite
//! differences.

use std::sync::Arc;

use crate::problem::{BcKind, BoundaryOffset, ProblemData, ScalarField, VectorField};

/// Exact solution bundle of a benchmark problem.
#[derive(Clone)]
pub struct ManufacturedSolution {
    pub u: ScalarField,
    pub grad_u: VectorField,
    pub laplace_u: ScalarField,
    /// Offset of the exact free boundary: `y = 1 + offset(x)`.
    pub boundary_offset: BoundaryOffset,
    pub boundary_offset_prime: BoundaryOffset,
}

/// Profile `a(x)` with its first two derivatives.
#[derive(Clone, Copy)]
struct Profile {
    a: fn(f64) -> f64,
    ap: fn(f64) -> f64,
    app: fn(f64) -> f64,
}

/// All field values derived from the exact solution at one point.
struct Derived {
    u: f64,
    ux: f64,
    uy: f64,
    uxx: f64,
    uyy: f64,
    uxy: f64,
}

fn derived(p: &Profile, x: f64, y: f64) -> Derived {
    let a = (p.a)(x);
    let ap = (p.ap)(x);
    let app = (p.app)(x);
    let d = 1.0 + a;
    let s = y / d;
    Derived {
        u: s + a * s * (1.0 - s),
        ux: ap * (a - 1.0) * s * s / d,
        uy: (1.0 + a - 2.0 * a * s) / d,
        uxx: s * s * (app * (a * a - 1.0) + 2.0 * ap * ap * (2.0 - a)) / (d * d),
        uyy: -2.0 * a / (d * d),
        uxy: 2.0 * ap * (a - 1.0) * s / (d * d),
    }
}

fn neumann_datum(p: &Profile, x: f64, y: f64) -> f64 {
    let ap = (p.ap)(x);
    let v = derived(p, x, y);
    (v.uy - ap * v.ux) / (1.0 + ap * ap).sqrt()
}

fn neumann_gradient(p: &Profile, x: f64, y: f64) -> [f64; 2] {
    let ap = (p.ap)(x);
    let app = (p.app)(x);
    let v = derived(p, x, y);
    let phi = 1.0 / (1.0 + ap * ap).sqrt();
    let phi_prime = -ap * app * phi * phi * phi;
    let gx = phi_prime * (v.uy - ap * v.ux) + phi * (v.uxy - app * v.ux - ap * v.uxx);
    let gy = phi * (v.uyy - ap * v.uxy);
    [gx, gy]
}

fn build(profile: Profile, bc_kind: BcKind) -> (ProblemData, ManufacturedSolution) {
    let p = profile;
    let f: ScalarField = Arc::new(move |x, y| {
        let v = derived(&p, x, y);
        -(v.uxx + v.uyy)
    });
    let g: ScalarField = Arc::new(move |x, y| neumann_datum(&p, x, y));
    let grad_g: VectorField = Arc::new(move |x, y| neumann_gradient(&p, x, y));
    let h_fixed: ScalarField = Arc::new(|_, y| y);

    let u: ScalarField = Arc::new(move |x, y| derived(&p, x, y).u);
    let grad_u: VectorField = Arc::new(move |x, y| {
        let v = derived(&p, x, y);
        [v.ux, v.uy]
    });
    let laplace_u: ScalarField = Arc::new(move |x, y| {
        let v = derived(&p, x, y);
        v.uxx + v.uyy
    });
    let offset: BoundaryOffset = Arc::new(move |x| (p.a)(x));
    let offset_prime: BoundaryOffset = Arc::new(move |x| (p.ap)(x));

    let problem = ProblemData {
        f,
        g,
        grad_g,
        h_fixed,
        h0: 1.0,
        bc_kind,
        exact_boundary: Some(offset.clone()),
    };
    let exact = ManufacturedSolution {
        u,
        grad_u,
        laplace_u,
        boundary_offset: offset,
        boundary_offset_prime: offset_prime,
    };
    (problem, exact)
}

const PARABOLIC: Profile = Profile {
    a: |x| 0.25 * x * (1.0 - x),
    ap: |x| 0.25 * (1.0 - 2.0 * x),
    app: |_| -0.5,
};

const TAU: f64 = std::f64::consts::TAU;

const SINUSOIDAL: Profile = Profile {
    a: |x| (TAU * x).sin() / 16.0,
    ap: |x| TAU * (TAU * x).cos() / 16.0,
    app: |x| -TAU * TAU * (TAU * x).sin() / 16.0,
};

/// Test 1: parabolic exact boundary `y = 1 + x(1-x)/4`, Dirichlet lateral
/// conditions with `h = y`. The boundary is exactly representable by
/// quadratic splines, so every scheme reaches machine precision.
pub fn test1_problem() -> (ProblemData, ManufacturedSolution) {
    build(PARABOLIC, BcKind::DirichletLateral)
}

/// Test 2: sinusoidal exact boundary `y = 1 + sin(2 pi x)/16`, Dirichlet
/// lateral conditions. The boundary is not a spline, so the error plateaus
/// at the approximation level of the mesh.
pub fn test2_problem() -> (ProblemData, ManufacturedSolution) {
    build(SINUSOIDAL, BcKind::DirichletLateral)
}

/// Test 3: the test-2 data with periodic lateral conditions; boundary and
/// field spaces are glued with C^{p-1} continuity across the seam.
pub fn test3_problem() -> (ProblemData, ManufacturedSolution) {
    build(SINUSOIDAL, BcKind::PeriodicLateral)
}

/// Returns the benchmark problem by number (1..=3).
pub fn problem_by_number(test: u8) -> Option<(ProblemData, ManufacturedSolution)> {
    match test {
        1 => Some(test1_problem()),
        2 => Some(test2_problem()),
        3 => Some(test3_problem()),
        _ => None,
    }
}
