//! Weak-form assembly and solves for the coupled and the decoupled
//! (splitting) quasi-Newton schemes.
//!
//! The coupled scheme solves a block system for the field and the boundary
//! update `w = dV.n` at once: stiffness in block (1,1), `-int K phi w` on the
//! boundary in (1,2), the trace pairing in (2,1) and the `g`-weighted
//! boundary mass in (2,2), with `K = dg/dn + H g + f`. The decoupled scheme
//! folds the boundary update into a Robin-like term `int (K/g) u phi` on the
//! left and `int (g + K h0 / g) phi` on the right. Domain integrals are
//! pulled back through the geometry map with Jacobian factors; boundary
//! integrals carry the arc-length measure.

use nalgebra::{DMatrix, DVector};

use crate::dofs::{DofMap, StripSpaces, dirichlet_lift};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, GeoMap};
use crate::problem::ProblemData;
use crate::quadrature::GaussLegendre;

/// A square linear system over the free degrees of freedom.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
}

/// Free/pinned bookkeeping for the boundary-update space: periodic spaces
/// keep every degree of freedom, open spaces pin the two end coefficients
/// (the update field vanishes at the curve extremes).
#[derive(Debug, Clone)]
pub struct WMap {
    dim: usize,
    pinned: bool,
}

impl WMap {
    pub fn new(space: &crate::spline::UnivariateSplineSpace) -> Self {
        WMap {
            dim: space.dim(),
            pinned: !space.is_periodic(),
        }
    }

    pub fn n_free(&self) -> usize {
        if self.pinned { self.dim - 2 } else { self.dim }
    }

    pub fn free_of(&self, dof: usize) -> Option<usize> {
        if self.pinned {
            if dof == 0 || dof + 1 == self.dim {
                None
            } else {
                Some(dof - 1)
            }
        } else {
            Some(dof)
        }
    }

    /// Expands free values to a full coefficient vector (zeros at pinned ends).
    pub fn scatter(&self, free: &[f64]) -> Vec<f64> {
        debug_assert_eq!(free.len(), self.n_free());
        let mut out = vec![0.0; self.dim];
        for (dof, slot) in out.iter_mut().enumerate() {
            if let Some(k) = self.free_of(dof) {
                *slot = free[k];
            }
        }
        out
    }
}

/// Coefficient `dg/dn + H g + f` of the linearized boundary terms, evaluated
/// on the free boundary at parameter `t`.
pub fn robin_coefficient(problem: &ProblemData, curve: &BoundaryCurve, t: f64) -> Result<f64> {
    let (normal, curvature) = curve.normal_and_curvature(t)?;
    let p = curve.point(t)?;
    let g = (problem.g)(p[0], p[1]);
    let dg = (problem.grad_g)(p[0], p[1]);
    let f = (problem.f)(p[0], p[1]);
    Ok(dg[0] * normal[0] + dg[1] * normal[1] + curvature * g + f)
}

/// Data available at one domain quadrature point during assembly.
pub(crate) struct DomainQPoint {
    /// Quadrature weight times `|det J|`.
    pub weight: f64,
    pub point: [f64; 2],
    /// `(global dof, value, physical gradient)` of the nonzero basis functions.
    pub funcs: Vec<(usize, f64, [f64; 2])>,
}

pub(crate) fn for_each_domain_qpoint(
    geo: &GeoMap,
    spaces: &StripSpaces,
    mut cb: impl FnMut(&DomainQPoint) -> Result<()>,
) -> Result<()> {
    let rule = GaussLegendre::new(spaces.degree + 1);
    let dim_y = spaces.dim_y();
    let mut qp = DomainQPoint {
        weight: 0.0,
        point: [0.0; 2],
        funcs: Vec::with_capacity((spaces.degree + 1) * (spaces.degree + 1)),
    };
    for (ax, bx) in spaces.field.x.elements() {
        for (xi, wx) in rule.mapped(ax, bx) {
            let basis_x = spaces.field.x.eval_basis(xi, 1)?;
            for (ay, by) in spaces.field.y.elements() {
                for (eta, wy) in rule.mapped(ay, by) {
                    let basis_y = spaces.field.y.eval_basis(eta, 1)?;
                    let map = geo.eval(xi, eta, 1)?;
                    qp.weight = wx * wy * map.det();
                    qp.point = map.point;
                    qp.funcs.clear();
                    for i in 0..basis_x.n_funcs() {
                        let ix = spaces.field.x.dof_of(basis_x.first_raw + i);
                        for j in 0..basis_y.n_funcs() {
                            let iy = basis_y.first_raw + j;
                            let value = basis_x.values[0][i] * basis_y.values[0][j];
                            let grad = map.push_gradient([
                                basis_x.values[1][i] * basis_y.values[0][j],
                                basis_x.values[0][i] * basis_y.values[1][j],
                            ]);
                            qp.funcs.push((ix * dim_y + iy, value, grad));
                        }
                    }
                    cb(&qp)?;
                }
            }
        }
    }
    Ok(())
}

/// Data available at one boundary quadrature point.
pub(crate) struct BoundaryQPoint {
    pub t: f64,
    /// Quadrature weight times the arc-length factor.
    pub weight: f64,
    pub point: [f64; 2],
    pub normal: [f64; 2],
    pub curvature: f64,
}

pub(crate) fn for_each_boundary_qpoint(
    curve: &BoundaryCurve,
    mut cb: impl FnMut(&BoundaryQPoint) -> Result<()>,
) -> Result<()> {
    let rule = GaussLegendre::new(curve.space().degree() + 1);
    for (a, b) in curve.space().elements() {
        for (t, w) in rule.mapped(a, b) {
            let (normal, curvature) = curve.normal_and_curvature(t)?;
            let arc = curve.arc_factor(t)?;
            cb(&BoundaryQPoint {
                t,
                weight: w * arc,
                point: curve.point(t)?,
                normal,
                curvature,
            })?;
        }
    }
    Ok(())
}

fn check_positive_g(g: f64, point: [f64; 2]) -> Result<()> {
    if g <= 0.0 {
        return Err(Error::Data(format!(
            "Neumann datum g = {g:.3e} is not strictly positive at ({:.4}, {:.4})",
            point[0], point[1]
        )));
    }
    Ok(())
}

/// Stiffness matrix over the free degrees of freedom of `dofs`.
pub fn stiffness_matrix(geo: &GeoMap, spaces: &StripSpaces, dofs: &DofMap) -> Result<DMatrix<f64>> {
    let n = dofs.n_free();
    let mut k = DMatrix::zeros(n, n);
    for_each_domain_qpoint(geo, spaces, |qp| {
        for &(ga, _, grad_a) in &qp.funcs {
            let Some(fa) = dofs.free_of(ga) else { continue };
            for &(gb, _, grad_b) in &qp.funcs {
                if let Some(fb) = dofs.free_of(gb) {
                    k[(fa, fb)] += qp.weight * (grad_a[0] * grad_b[0] + grad_a[1] * grad_b[1]);
                }
            }
        }
        Ok(())
    })?;
    Ok(k)
}

/// Assembled coupled system together with its dof bookkeeping.
#[derive(Debug, Clone)]
pub struct CoupledSystem {
    pub system: DiscreteSystem,
    pub dofs: DofMap,
    pub lift: Vec<f64>,
    pub w_map: WMap,
    pub n_field: usize,
}

/// Assembles the block system of the coupled scheme on the current geometry.
pub fn assemble_coupled(
    geo: &GeoMap,
    curve: &BoundaryCurve,
    problem: &ProblemData,
    spaces: &StripSpaces,
) -> Result<CoupledSystem> {
    let dofs = DofMap::new(spaces, true);
    let lift = dirichlet_lift(spaces, &dofs, geo, problem)?;
    let w_map = WMap::new(&spaces.boundary);
    let nu = dofs.n_free();
    let nw = w_map.n_free();
    let n = nu + nw;
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);

    // Domain: stiffness into (1,1) and the volumetric source.
    for_each_domain_qpoint(geo, spaces, |qp| {
        let fval = (problem.f)(qp.point[0], qp.point[1]);
        for &(ga, va, grad_a) in &qp.funcs {
            let Some(fa) = dofs.free_of(ga) else { continue };
            rhs[fa] += qp.weight * fval * va;
            for &(gb, _, grad_b) in &qp.funcs {
                let kab = qp.weight * (grad_a[0] * grad_b[0] + grad_a[1] * grad_b[1]);
                match dofs.free_of(gb) {
                    Some(fb) => a[(fa, fb)] += kab,
                    None => rhs[fa] -= kab * lift[gb],
                }
            }
        }
        Ok(())
    })?;

    // Boundary: trace pairing, update blocks and Neumann load. The boundary
    // space coincides with the field x-space, so one basis evaluation serves
    // both the trace of the field and the update space.
    let top_iy = spaces.dim_y() - 1;
    for_each_boundary_qpoint(curve, |bq| {
        let gval = (problem.g)(bq.point[0], bq.point[1]);
        check_positive_g(gval, bq.point)?;
        let dg = (problem.grad_g)(bq.point[0], bq.point[1]);
        let fval = (problem.f)(bq.point[0], bq.point[1]);
        let kh = dg[0] * bq.normal[0] + dg[1] * bq.normal[1] + bq.curvature * gval + fval;

        let basis = spaces.field.x.eval_basis(bq.t, 0)?;
        let m = basis.n_funcs();
        for i in 0..m {
            let xi_dof = spaces.field.x.dof_of(basis.first_raw + i);
            let vi = basis.values[0][i];
            let field_a = dofs.free_of(xi_dof * spaces.dim_y() + top_iy);

            // Field test rows: Neumann load and -int K phi w.
            if let Some(fa) = field_a {
                rhs[fa] += bq.weight * gval * vi;
                for j in 0..m {
                    let wj = spaces.boundary.dof_of(basis.first_raw + j);
                    if let Some(wb) = w_map.free_of(wj) {
                        a[(fa, nu + wb)] -= bq.weight * kh * vi * basis.values[0][j];
                    }
                }
            }

            // Boundary test rows: trace pairing, g-mass and the h0 load.
            if let Some(wa) = w_map.free_of(spaces.boundary.dof_of(basis.first_raw + i)) {
                rhs[nu + wa] += bq.weight * problem.h0 * vi;
                for j in 0..m {
                    let vj = basis.values[0][j];
                    let gxj = spaces.field.x.dof_of(basis.first_raw + j) * spaces.dim_y() + top_iy;
                    match dofs.free_of(gxj) {
                        Some(fb) => a[(nu + wa, fb)] += bq.weight * vi * vj,
                        None => rhs[nu + wa] -= bq.weight * vi * vj * lift[gxj],
                    }
                    let wj = spaces.boundary.dof_of(basis.first_raw + j);
                    if let Some(wb) = w_map.free_of(wj) {
                        a[(nu + wa, nu + wb)] += bq.weight * gval * vi * vj;
                    }
                }
            }
        }
        Ok(())
    })?;

    Ok(CoupledSystem {
        system: DiscreteSystem { matrix: a, rhs },
        dofs,
        lift,
        w_map,
        n_field: nu,
    })
}

/// Solves the coupled system; returns the full field coefficients (free plus
/// lifted) and the full boundary-update coefficients.
pub fn solve_coupled(sys: &CoupledSystem) -> Result<(Vec<f64>, Vec<f64>)> {
    let sol = crate::linalg::solve_dense(sys.system.matrix.clone(), sys.system.rhs.clone())?;
    let nu = sys.n_field;
    let u = sys.dofs.scatter(&sol.as_slice()[..nu], &sys.lift);
    let w = sys.w_map.scatter(&sol.as_slice()[nu..]);
    Ok((u, w))
}

/// Assembled decoupled system.
#[derive(Debug, Clone)]
pub struct DecoupledSystem {
    pub system: DiscreteSystem,
    pub dofs: DofMap,
    pub lift: Vec<f64>,
}

/// Assembles the single-field system of the decoupled scheme: stiffness plus
/// the Robin-like boundary term, with the boundary data folded into the load.
pub fn assemble_decoupled(
    geo: &GeoMap,
    curve: &BoundaryCurve,
    problem: &ProblemData,
    spaces: &StripSpaces,
) -> Result<DecoupledSystem> {
    let dofs = DofMap::new(spaces, true);
    let lift = dirichlet_lift(spaces, &dofs, geo, problem)?;
    let n = dofs.n_free();
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);

    for_each_domain_qpoint(geo, spaces, |qp| {
        let fval = (problem.f)(qp.point[0], qp.point[1]);
        for &(ga, va, grad_a) in &qp.funcs {
            let Some(fa) = dofs.free_of(ga) else { continue };
            rhs[fa] += qp.weight * fval * va;
            for &(gb, _, grad_b) in &qp.funcs {
                let kab = qp.weight * (grad_a[0] * grad_b[0] + grad_a[1] * grad_b[1]);
                match dofs.free_of(gb) {
                    Some(fb) => a[(fa, fb)] += kab,
                    None => rhs[fa] -= kab * lift[gb],
                }
            }
        }
        Ok(())
    })?;

    let top_iy = spaces.dim_y() - 1;
    for_each_boundary_qpoint(curve, |bq| {
        let gval = (problem.g)(bq.point[0], bq.point[1]);
        check_positive_g(gval, bq.point)?;
        let dg = (problem.grad_g)(bq.point[0], bq.point[1]);
        let fval = (problem.f)(bq.point[0], bq.point[1]);
        let kh = dg[0] * bq.normal[0] + dg[1] * bq.normal[1] + bq.curvature * gval + fval;
        let load = gval + kh * problem.h0 / gval;

        let basis = spaces.field.x.eval_basis(bq.t, 0)?;
        let m = basis.n_funcs();
        for i in 0..m {
            let gi = spaces.field.x.dof_of(basis.first_raw + i) * spaces.dim_y() + top_iy;
            let Some(fa) = dofs.free_of(gi) else { continue };
            let vi = basis.values[0][i];
            rhs[fa] += bq.weight * load * vi;
            for j in 0..m {
                let gj = spaces.field.x.dof_of(basis.first_raw + j) * spaces.dim_y() + top_iy;
                let rab = bq.weight * (kh / gval) * vi * basis.values[0][j];
                match dofs.free_of(gj) {
                    Some(fb) => a[(fa, fb)] += rab,
                    None => rhs[fa] -= rab * lift[gj],
                }
            }
        }
        Ok(())
    })?;

    Ok(DecoupledSystem {
        system: DiscreteSystem { matrix: a, rhs },
        dofs,
        lift,
    })
}

/// Solves the decoupled system, returning the full field coefficients.
pub fn solve_decoupled(sys: &DecoupledSystem) -> Result<Vec<f64>> {
    let sol = crate::linalg::solve_dense(sys.system.matrix.clone(), sys.system.rhs.clone())?;
    Ok(sys.dofs.scatter(sol.as_slice(), &sys.lift))
}

/// Integral of `f(x, y)` over the physical domain with the module quadrature
/// (used by the shape-derivative oracle and tests).
pub fn domain_integral(
    geo: &GeoMap,
    rule_order: usize,
    f: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let rule = GaussLegendre::new(rule_order);
    let mut total = 0.0;
    for (ax, bx) in geo.space_x().elements() {
        for (ay, by) in geo.space_y().elements() {
            for (xi, wx) in rule.mapped(ax, bx) {
                for (eta, wy) in rule.mapped(ay, by) {
                    let ev = geo.eval(xi, eta, 1)?;
                    total += wx * wy * ev.det() * f(ev.point[0], ev.point[1]);
                }
            }
        }
    }
    Ok(total)
}

/// Integral of `f(t, x, y)` over the free boundary with the arc-length
/// measure and the module quadrature.
pub fn boundary_integral(
    curve: &BoundaryCurve,
    f: impl Fn(f64, f64, f64) -> f64,
) -> Result<f64> {
    let mut total = 0.0;
    for_each_boundary_qpoint(curve, |bq| {
        total += bq.weight * f(bq.t, bq.point[0], bq.point[1]);
        Ok(())
    })?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::BcKind;
    use crate::spline::UnivariateSplineSpace;

    fn manufactured_flat_problem() -> ProblemData {
        // f = 0, g = 1, h0 = 1, h = y: the full problem is solved by u = y
        // with a flat boundary at height one.
        ProblemData::new(
            |_, _| 0.0,
            |_, _| 1.0,
            |_, _| [0.0, 0.0],
            |_, y| y,
            1.0,
            BcKind::DirichletLateral,
        )
    }

    fn flat_setup(degree: usize, n: usize) -> (GeoMap, BoundaryCurve, StripSpaces) {
        let spaces = StripSpaces::new(degree, n, n, BcKind::DirichletLateral).unwrap();
        let curve = BoundaryCurve::flat(spaces.boundary.clone(), 1.0);
        let geo = GeoMap::strip(degree, n, n, &curve).unwrap();
        (geo, curve, spaces)
    }

    #[test]
    fn robin_coefficient_vanishes_for_flat_constant_data() {
        let (_, curve, _) = flat_setup(2, 4);
        let problem = manufactured_flat_problem();
        for &t in &[0.1, 0.5, 0.9] {
            let kh = robin_coefficient(&problem, &curve, t).unwrap();
            assert!(kh.abs() < 1e-14);
        }
    }

    #[test]
    fn robin_coefficient_reduces_to_curvature_on_test1_parabola() {
        let space = UnivariateSplineSpace::open(2, 8);
        let curve = BoundaryCurve::from_fn(space, |x| 1.0 + 0.25 * x * (1.0 - x)).unwrap();
        let problem = manufactured_flat_problem();
        let kh = robin_coefficient(&problem, &curve, 0.5).unwrap();
        assert!((kh - 0.5).abs() < 1e-12);
    }

    #[test]
    fn robin_coefficient_matches_finite_difference_oracle_on_test1() {
        // Cross-check the closed-form gradient of g against central finite
        // differences at the exact test-1 boundary.
        let (problem, exact) = crate::benchmarks::test1_problem();
        let space = UnivariateSplineSpace::open(4, 16);
        let offset = exact.boundary_offset.clone();
        let curve = BoundaryCurve::from_fn(space, move |x| 1.0 + offset(x)).unwrap();
        let h = 1e-6;
        for &t in &[0.21, 0.5, 0.83] {
            let kh = robin_coefficient(&problem, &curve, t).unwrap();
            let (n, curv) = curve.normal_and_curvature(t).unwrap();
            let p = curve.point(t).unwrap();
            let gx = ((problem.g)(p[0] + h, p[1]) - (problem.g)(p[0] - h, p[1])) / (2.0 * h);
            let gy = ((problem.g)(p[0], p[1] + h) - (problem.g)(p[0], p[1] - h)) / (2.0 * h);
            let oracle = gx * n[0] + gy * n[1]
                + curv * (problem.g)(p[0], p[1])
                + (problem.f)(p[0], p[1]);
            let rel = (kh - oracle).abs() / oracle.abs().max(1.0);
            assert!(rel < 1e-5, "t={t}: {kh} vs {oracle}");
        }
    }

    #[test]
    fn coupled_manufactured_solution_is_exact() {
        let (geo, curve, spaces) = flat_setup(2, 4);
        let problem = manufactured_flat_problem();
        let sys = assemble_coupled(&geo, &curve, &problem, &spaces).unwrap();
        let (u, w) = solve_coupled(&sys).unwrap();
        // u = y means the coefficients are the y-Greville ordinates.
        let gy = spaces.field.y.greville_points();
        for ix in 0..spaces.dim_x() {
            for iy in 0..spaces.dim_y() {
                let c = u[spaces.field.index(ix, iy)];
                assert!((c - gy[iy]).abs() < 1e-12, "({ix},{iy}): {c} vs {}", gy[iy]);
            }
        }
        for v in &w {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn decoupled_manufactured_solution_is_exact() {
        let (geo, curve, spaces) = flat_setup(3, 3);
        let problem = manufactured_flat_problem();
        let sys = assemble_decoupled(&geo, &curve, &problem, &spaces).unwrap();
        let u = solve_decoupled(&sys).unwrap();
        let gy = spaces.field.y.greville_points();
        for ix in 0..spaces.dim_x() {
            for iy in 0..spaces.dim_y() {
                let c = u[spaces.field.index(ix, iy)];
                assert!((c - gy[iy]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decoupled_matrix_is_plain_stiffness_when_robin_term_vanishes() {
        let (geo, curve, spaces) = flat_setup(2, 3);
        let problem = manufactured_flat_problem();
        let sys = assemble_decoupled(&geo, &curve, &problem, &spaces).unwrap();
        let k = stiffness_matrix(&geo, &spaces, &sys.dofs).unwrap();
        let diff = (&sys.system.matrix - &k).norm();
        assert!(diff < 1e-13, "diff {diff}");
    }

    #[test]
    fn boundary_mass_block_row_sums_match_basis_integrals() {
        // Periodic flavour: no pinned dofs, so row sums of the g-mass block
        // equal the basis integrals by partition of unity.
        let spaces = StripSpaces::new(2, 6, 2, BcKind::PeriodicLateral).unwrap();
        let curve = BoundaryCurve::flat(spaces.boundary.clone(), 1.0);
        let geo = GeoMap::strip(2, 6, 2, &curve).unwrap();
        let problem = ProblemData::new(
            |_, _| 0.0,
            |_, _| 1.0,
            |_, _| [0.0, 0.0],
            |_, y| y,
            1.0,
            BcKind::PeriodicLateral,
        );
        let sys = assemble_coupled(&geo, &curve, &problem, &spaces).unwrap();
        let nu = sys.n_field;
        let nw = sys.w_map.n_free();
        for a in 0..nw {
            let row_sum: f64 = (0..nw).map(|b| sys.system.matrix[(nu + a, nu + b)]).sum();
            let integral = boundary_integral(&curve, |t, _, _| {
                let basis = spaces.boundary.eval_basis(t, 0).unwrap();
                (0..basis.n_funcs())
                    .filter(|&j| spaces.boundary.dof_of(basis.first_raw + j) == a)
                    .map(|j| basis.values[0][j])
                    .sum::<f64>()
            })
            .unwrap();
            assert!((row_sum - integral).abs() < 1e-13);
        }
    }

    #[test]
    fn stiffness_is_symmetric_with_constants_in_kernel() {
        let spaces = StripSpaces::new(2, 3, 3, BcKind::DirichletLateral).unwrap();
        let space = UnivariateSplineSpace::open(2, 3);
        let top = BoundaryCurve::from_fn(space, |x| 1.0 + 0.2 * x * (1.0 - x)).unwrap();
        let geo = GeoMap::strip(2, 3, 3, &top).unwrap();
        let all_free = DofMap::unconstrained(&spaces);
        let k = stiffness_matrix(&geo, &spaces, &all_free).unwrap();
        let asym = (&k - k.transpose()).norm();
        assert!(asym < 1e-12, "asymmetry {asym}");
        let ones = DVector::from_element(k.nrows(), 1.0);
        assert!((&k * ones).norm() < 1e-11);
        // PSD probe with a few deterministic vectors.
        for seed in 0..5u64 {
            let v = DVector::from_fn(k.nrows(), |i, _| ((i as u64 * 2654435761 + seed) % 97) as f64 / 97.0 - 0.5);
            let q = v.dot(&(&k * &v));
            assert!(q >= -1e-12, "negative energy {q}");
        }
    }

    #[test]
    fn negative_g_is_a_data_error() {
        let (geo, curve, spaces) = flat_setup(2, 2);
        let problem = ProblemData::new(
            |_, _| 0.0,
            |_, _| -1.0,
            |_, _| [0.0, 0.0],
            |_, y| y,
            1.0,
            BcKind::DirichletLateral,
        );
        let err = assemble_coupled(&geo, &curve, &problem, &spaces);
        assert!(matches!(err, Err(Error::Data(_))));
    }

    #[test]
    fn arc_length_of_test1_parabola() {
        // High-order oracle for the arc length of y = 1 + x(1-x)/4.
        let space = UnivariateSplineSpace::open(2, 32);
        let curve = BoundaryCurve::from_fn(space, |x| 1.0 + 0.25 * x * (1.0 - x)).unwrap();
        let oracle_rule = GaussLegendre::new(20);
        let mut oracle = 0.0;
        for k in 0..64 {
            let (a, b) = (k as f64 / 64.0, (k + 1) as f64 / 64.0);
            oracle += oracle_rule.integrate(a, b, |x| {
                let yp = (1.0 - 2.0 * x) / 4.0;
                (1.0 + yp * yp).sqrt()
            });
        }
        // Cross-check the oracle itself against the closed form.
        let a = 0.25f64;
        let closed = 2.0 * (a * (1.0 + a * a).sqrt() + a.asinh());
        assert!((oracle - closed).abs() < 1e-13);
        let module = boundary_integral(&curve, |_, _, _| 1.0).unwrap();
        assert!((module - oracle).abs() < 1e-10, "{module} vs {oracle}");
    }
}
