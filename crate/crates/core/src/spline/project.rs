//! Weighted L2 projection onto a univariate spline space.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use super::space::UnivariateSplineSpace;

/// Coefficients minimizing `integral (sum_k c_k psi_k - f)^2 w dt` over `[0, 1]`.
///
/// `weight` defaults to 1; passing the arc-length factor of a boundary curve
/// turns this into a projection in the curve's L2(Gamma) inner product.
pub fn l2_project(
    space: &UnivariateSplineSpace,
    f: impl Fn(f64) -> f64,
    weight: Option<&dyn Fn(f64) -> f64>,
) -> Result<Vec<f64>> {
    project_impl(space, f, weight, false)
}

/// Same as [`l2_project`] but restricted to the subspace with vanishing first
/// and last coefficients (update fields pinned at the curve extremes).
pub fn l2_project_pinned(
    space: &UnivariateSplineSpace,
    f: impl Fn(f64) -> f64,
    weight: Option<&dyn Fn(f64) -> f64>,
) -> Result<Vec<f64>> {
    if space.is_periodic() {
        return Err(Error::invalid(
            "pinned projection only applies to open spaces",
        ));
    }
    project_impl(space, f, weight, true)
}

fn project_impl(
    space: &UnivariateSplineSpace,
    f: impl Fn(f64) -> f64,
    weight: Option<&dyn Fn(f64) -> f64>,
    pin_ends: bool,
) -> Result<Vec<f64>> {
    let dim = space.dim();
    let rule = GaussLegendre::new(space.degree() + 1);
    let mut gram = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    for (a, b) in space.elements() {
        for (t, qw) in rule.mapped(a, b) {
            let w = qw * weight.map_or(1.0, |w| w(t));
            let basis = space.eval_basis(t, 0)?;
            let fv = f(t);
            for i in 0..basis.n_funcs() {
                let di = space.dof_of(basis.first_raw + i);
                let vi = basis.values[0][i];
                rhs[di] += w * vi * fv;
                for j in 0..basis.n_funcs() {
                    let dj = space.dof_of(basis.first_raw + j);
                    gram[(di, dj)] += w * vi * basis.values[0][j];
                }
            }
        }
    }
    if pin_ends {
        // Solve the reduced system over interior coefficients.
        let free: Vec<usize> = (1..dim - 1).collect();
        let m = free.len();
        let mut g = DMatrix::zeros(m, m);
        let mut r = DVector::zeros(m);
        for (ri, &i) in free.iter().enumerate() {
            r[ri] = rhs[i];
            for (rj, &j) in free.iter().enumerate() {
                g[(ri, rj)] = gram[(i, j)];
            }
        }
        let sol = crate::linalg::solve_dense(g, r)
            .map_err(|e| Error::Numerical(format!("pinned Gram system: {e}")))?;
        let mut out = vec![0.0; dim];
        for (ri, &i) in free.iter().enumerate() {
            out[i] = sol[ri];
        }
        Ok(out)
    } else {
        let sol = crate::linalg::solve_dense(gram, rhs)
            .map_err(|e| Error::Numerical(format!("Gram system: {e}")))?;
        Ok(sol.as_slice().to_vec())
    }
}
