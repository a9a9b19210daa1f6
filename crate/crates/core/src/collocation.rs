//! Fully collocated scheme for the strong form of the decoupled problem:
//! the PDE is enforced pointwise at interior points, the Robin-like
//! free-boundary condition at top points, lateral Dirichlet data at edge
//! points, and the bottom Dirichlet row is built into the space.

use nalgebra::{DMatrix, DVector};

use crate::dofs::{DofMap, StripSpaces, dirichlet_lift};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, GeoMap};
use crate::problem::{BcKind, ProblemData};
use crate::spline::UnivariateSplineSpace;

/// Choice of collocation sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStrategy {
    /// Greville abscissae: robust and degree-agnostic, but with suboptimal
    /// convergence order.
    Greville,
    /// Clustered superconvergent points; available for odd degrees with a
    /// reference table (currently 3 and 5).
    Csp,
}

impl std::fmt::Display for PointStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointStrategy::Greville => write!(f, "greville"),
            PointStrategy::Csp => write!(f, "csp"),
        }
    }
}

/// Parametric collocation sites, split by the row type they generate.
#[derive(Debug, Clone)]
pub struct CollocationPointSet {
    pub strategy: PointStrategy,
    /// Interior PDE points `(xi, eta)`.
    pub interior: Vec<[f64; 2]>,
    /// Abscissae on the free boundary `eta = 1`.
    pub top: Vec<f64>,
    /// Lateral Dirichlet points (Dirichlet case only).
    pub lateral: Vec<[f64; 2]>,
}

impl CollocationPointSet {
    pub fn len(&self) -> usize {
        self.interior.len() + self.top.len() + self.lateral.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reference superconvergent abscissae on `[-1, 1]`, two per element.
///
/// Derived numerically as the stable zeros of the second-derivative error of
/// a Galerkin solve on fine uniform meshes (see the ignored test
/// `derive_superconvergent_reference_points`). They coincide with the
/// interior zeros of the Bernoulli polynomial `B_{p-1}` mapped to the
/// element: `1/sqrt(3)` for cubics, `sqrt(1 - 2 sqrt(2/15))` for quintics.
const CSP_REFERENCE_DEGREE_3: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];
const CSP_REFERENCE_DEGREE_5: [f64; 2] = [-0.519_329_628_592_025_6, 0.519_329_628_592_025_6];

fn csp_reference(degree: usize) -> Option<&'static [f64]> {
    match degree {
        3 => Some(&CSP_REFERENCE_DEGREE_3),
        5 => Some(&CSP_REFERENCE_DEGREE_5),
        _ => None,
    }
}

/// Monotone assignment of one candidate point per site, minimizing the total
/// distance. Keeps the selected candidates strictly increasing, which spreads
/// the clustered pairs across the sites.
fn assign_monotone(sites: &[f64], candidates: &[f64]) -> Result<Vec<f64>> {
    let m = sites.len();
    let n = candidates.len();
    if n < m {
        return Err(Error::UnsupportedStrategy(format!(
            "csp needs at least {m} candidate points, mesh provides {n}"
        )));
    }
    // dp[i][j]: best cost matching sites[..i] into candidates[..j].
    let inf = f64::INFINITY;
    let mut dp = vec![vec![inf; n + 1]; m + 1];
    let mut take = vec![vec![false; n + 1]; m + 1];
    dp[0].fill(0.0);
    for i in 1..=m {
        for j in i..=n {
            let skip = dp[i][j - 1];
            let matched = dp[i - 1][j - 1] + (sites[i - 1] - candidates[j - 1]).abs();
            if matched < skip {
                dp[i][j] = matched;
                take[i][j] = true;
            } else {
                dp[i][j] = skip;
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    let (mut i, mut j) = (m, n);
    while i > 0 {
        if take[i][j] {
            out.push(candidates[j - 1]);
            i -= 1;
        }
        j -= 1;
    }
    out.reverse();
    Ok(out)
}

/// Univariate collocation sites for one direction.
fn points_1d(strategy: PointStrategy, space: &UnivariateSplineSpace) -> Result<Vec<f64>> {
    match strategy {
        PointStrategy::Greville => {
            let mut pts = space.greville_points();
            if space.is_periodic() {
                pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            }
            Ok(pts)
        }
        PointStrategy::Csp => {
            let p = space.degree();
            if p.is_multiple_of(2) {
                return Err(Error::UnsupportedStrategy(format!(
                    "csp points are only available for odd degrees, got {p}"
                )));
            }
            let refs = csp_reference(p).ok_or_else(|| {
                Error::UnsupportedStrategy(format!("no csp reference table for degree {p}"))
            })?;
            let mut candidates: Vec<f64> = space
                .elements()
                .iter()
                .flat_map(|&(a, b)| {
                    refs.iter().map(move |r| a + 0.5 * (b - a) * (r + 1.0))
                })
                .collect();
            candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut sites = space.greville_points();
            sites.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if space.is_periodic() {
                assign_monotone(&sites, &candidates)
            } else {
                let interior = assign_monotone(&sites[1..sites.len() - 1], &candidates)?;
                let mut out = Vec::with_capacity(sites.len());
                out.push(0.0);
                out.extend(interior);
                out.push(1.0);
                Ok(out)
            }
        }
    }
}

/// Tensor-product collocation set: x-direction points (periodic or Dirichlet
/// flavour) crossed with the y-direction points excluding the bottom row.
/// Points on a lateral edge become Dirichlet rows, points on `eta = 1`
/// become free-boundary rows, the rest collocate the PDE. The total count
/// always equals the number of free degrees of freedom.
pub fn collocation_points(
    strategy: PointStrategy,
    spaces: &StripSpaces,
) -> Result<CollocationPointSet> {
    if spaces.degree < 2 {
        return Err(Error::invalid(
            "collocation needs degree >= 2 for C^2 interiors",
        ));
    }
    let x_pts = points_1d(strategy, &spaces.field.x)?;
    let y_pts = points_1d(strategy, &spaces.field.y)?;

    let mut set = CollocationPointSet {
        strategy,
        interior: Vec::new(),
        top: Vec::new(),
        lateral: Vec::new(),
    };
    let dirichlet = spaces.bc == BcKind::DirichletLateral;
    for &xi in &x_pts {
        for &eta in &y_pts[1..] {
            if dirichlet && (xi == 0.0 || xi == 1.0) {
                set.lateral.push([xi, eta]);
            } else if eta == 1.0 {
                set.top.push(xi);
            } else {
                set.interior.push([xi, eta]);
            }
        }
    }

    let free = DofMap::new(spaces, false).n_free();
    if set.len() != free {
        return Err(Error::Internal(format!(
            "collocation point count {} does not match {} free dofs",
            set.len(),
            free
        )));
    }
    Ok(set)
}

/// Assembled square collocation system.
#[derive(Debug, Clone)]
pub struct CollocatedSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub dofs: DofMap,
    pub lift: Vec<f64>,
    pub strategy: PointStrategy,
}

/// Builds the square collocation system on the current geometry: interior
/// rows enforce the physical Laplacian (full chain rule with the geometry
/// Hessian), top rows the Robin-like boundary condition, lateral rows the
/// Dirichlet data; the bottom row is lifted into the right-hand side.
pub fn assemble_collocated(
    geo: &GeoMap,
    curve: &BoundaryCurve,
    problem: &ProblemData,
    spaces: &StripSpaces,
    points: &CollocationPointSet,
) -> Result<CollocatedSystem> {
    let dofs = DofMap::new(spaces, false);
    let lift = dirichlet_lift(spaces, &dofs, geo, problem)?;
    let n = dofs.n_free();
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    let dim_y = spaces.dim_y();

    let mut row = 0usize;
    let add_entry = |a: &mut DMatrix<f64>, rhs: &mut DVector<f64>, row: usize, g: usize, coeff: f64| {
        match dofs.free_of(g) {
            Some(col) => a[(row, col)] += coeff,
            None => rhs[row] -= coeff * lift[g],
        }
    };

    // Interior rows: -Laplacian(u) = f.
    for &[xi, eta] in &points.interior {
        let map = geo.eval(xi, eta, 2)?;
        rhs[row] += (problem.f)(map.point[0], map.point[1]);
        let bx = spaces.field.x.eval_basis(xi, 2.min(spaces.field.x.degree()))?;
        let by = spaces.field.y.eval_basis(eta, 2.min(spaces.field.y.degree()))?;
        for i in 0..bx.n_funcs() {
            let ix = spaces.field.x.dof_of(bx.first_raw + i);
            for j in 0..by.n_funcs() {
                let iy = by.first_raw + j;
                let grad = [
                    bx.values[1][i] * by.values[0][j],
                    bx.values[0][i] * by.values[1][j],
                ];
                let hess = [
                    [bx.values[2][i] * by.values[0][j], bx.values[1][i] * by.values[1][j]],
                    [bx.values[1][i] * by.values[1][j], bx.values[0][i] * by.values[2][j]],
                ];
                let lap = map.push_laplacian(grad, hess);
                add_entry(&mut a, &mut rhs, row, ix * dim_y + iy, -lap);
            }
        }
        row += 1;
    }

    // Top rows: grad(u).n + (K/g) u = g + K h0 / g.
    for &t in &points.top {
        let map = geo.eval(t, 1.0, 1)?;
        let (normal, curvature) = curve.normal_and_curvature(t)?;
        let gval = (problem.g)(map.point[0], map.point[1]);
        if gval <= 0.0 {
            return Err(Error::Data(format!(
                "Neumann datum g = {gval:.3e} is not strictly positive at the top point t = {t}"
            )));
        }
        let dg = (problem.grad_g)(map.point[0], map.point[1]);
        let fval = (problem.f)(map.point[0], map.point[1]);
        let kh = dg[0] * normal[0] + dg[1] * normal[1] + curvature * gval + fval;
        rhs[row] += gval + kh * problem.h0 / gval;
        let bx = spaces.field.x.eval_basis(t, 1)?;
        let by = spaces.field.y.eval_basis(1.0, 1)?;
        for i in 0..bx.n_funcs() {
            let ix = spaces.field.x.dof_of(bx.first_raw + i);
            for j in 0..by.n_funcs() {
                let iy = by.first_raw + j;
                let value = bx.values[0][i] * by.values[0][j];
                let grad = map.push_gradient([
                    bx.values[1][i] * by.values[0][j],
                    bx.values[0][i] * by.values[1][j],
                ]);
                let coeff = grad[0] * normal[0] + grad[1] * normal[1] + (kh / gval) * value;
                add_entry(&mut a, &mut rhs, row, ix * dim_y + iy, coeff);
            }
        }
        row += 1;
    }

    // Lateral rows: u = h.
    for &[xi, eta] in &points.lateral {
        let map = geo.eval(xi, eta, 0)?;
        rhs[row] += (problem.h_fixed)(map.point[0], map.point[1]);
        let bx = spaces.field.x.eval_basis(xi, 0)?;
        let by = spaces.field.y.eval_basis(eta, 0)?;
        for i in 0..bx.n_funcs() {
            let ix = spaces.field.x.dof_of(bx.first_raw + i);
            for j in 0..by.n_funcs() {
                let iy = by.first_raw + j;
                let value = bx.values[0][i] * by.values[0][j];
                add_entry(&mut a, &mut rhs, row, ix * dim_y + iy, value);
            }
        }
        row += 1;
    }

    debug_assert_eq!(row, n);
    Ok(CollocatedSystem { matrix: a, rhs, dofs, lift, strategy: points.strategy })
}

/// Solves the collocation system, returning the full field coefficients.
pub fn solve_collocated(sys: &CollocatedSystem) -> Result<Vec<f64>> {
    let sol = crate::linalg::solve_dense(sys.matrix.clone(), sys.rhs.clone()).map_err(|e| {
        Error::Numerical(format!("collocation solve ({} points) failed: {e}", sys.strategy))
    })?;
    Ok(sys.dofs.scatter(sol.as_slice(), &sys.lift))
}

/// Collocated boundary update: interpolates `(h0 - u)/g` on the free
/// boundary at the top point set, returning the spline coefficients of the
/// update `w = dV.n` (end coefficients pinned to zero in the Dirichlet case).
pub fn collocated_boundary_update(
    spaces: &StripSpaces,
    u_coeffs: &[f64],
    curve: &BoundaryCurve,
    problem: &ProblemData,
    top_points: &[f64],
) -> Result<Vec<f64>> {
    let trace = spaces.trace_coeffs(u_coeffs);
    let w_map = crate::galerkin::WMap::new(&spaces.boundary);
    let n = w_map.n_free();
    if top_points.len() != n {
        return Err(Error::Internal(format!(
            "boundary update needs {n} points, got {}",
            top_points.len()
        )));
    }
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for (r, &t) in top_points.iter().enumerate() {
        let p = curve.point(t)?;
        let gval = (problem.g)(p[0], p[1]);
        if gval <= 0.0 {
            return Err(Error::Data(format!(
                "Neumann datum g = {gval:.3e} is not strictly positive at t = {t}"
            )));
        }
        let uval = spaces.boundary.eval_coeffs(&trace, t, 0)?;
        rhs[r] = (problem.h0 - uval) / gval;
        let basis = spaces.boundary.eval_basis(t, 0)?;
        for j in 0..basis.n_funcs() {
            let dof = spaces.boundary.dof_of(basis.first_raw + j);
            if let Some(col) = w_map.free_of(dof) {
                a[(r, col)] += basis.values[0][j];
            }
        }
    }
    let sol = crate::linalg::solve_dense(a, rhs)
        .map_err(|e| Error::Numerical(format!("boundary interpolation system: {e}")))?;
    Ok(w_map.scatter(sol.as_slice()))
}
