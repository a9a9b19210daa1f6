use std::io::Write;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::spline::UnivariateSplineSpace;
use super::curve::BoundaryCurve;

/// Point, Jacobian and (optionally) second derivatives of the map at one
/// parametric location. `hessian[k][a][b]` holds the second partial of
/// component `k` with respect to parameters `a` and `b`.
#[derive(Debug, Clone)]
pub struct MapEval {
    pub point: [f64; 2],
    pub jacobian: [[f64; 2]; 2],
    pub hessian: Option<[[[f64; 2]; 2]; 2]>,
}

impl MapEval {
    pub fn det(&self) -> f64 {
        self.jacobian[0][0] * self.jacobian[1][1] - self.jacobian[0][1] * self.jacobian[1][0]
    }

    /// Inverse of the Jacobian.
    pub fn jac_inv(&self) -> [[f64; 2]; 2] {
        let d = self.det();
        let j = &self.jacobian;
        [
            [j[1][1] / d, -j[0][1] / d],
            [-j[1][0] / d, j[0][0] / d],
        ]
    }

    /// Physical gradient of a scalar from its parametric gradient.
    pub fn push_gradient(&self, grad_param: [f64; 2]) -> [f64; 2] {
        let ji = self.jac_inv();
        // grad_x = J^{-T} grad_xi
        [
            ji[0][0] * grad_param[0] + ji[1][0] * grad_param[1],
            ji[0][1] * grad_param[0] + ji[1][1] * grad_param[1],
        ]
    }

    /// Physical Laplacian of a scalar from its parametric derivatives.
    ///
    /// Uses the full chain rule including the geometry Hessian term, which is
    /// required on the non-affine Coons-updated maps:
    /// `Hess_x = J^{-T} (Hess_xi - sum_k du/dx_k Hess(F_k)) J^{-1}`.
    pub fn push_laplacian(&self, grad_param: [f64; 2], hess_param: [[f64; 2]; 2]) -> f64 {
        let hf = self
            .hessian
            .expect("push_laplacian requires a second-order map evaluation");
        let g = self.push_gradient(grad_param);
        let mut m = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                m[a][b] = hess_param[a][b] - g[0] * hf[0][a][b] - g[1] * hf[1][a][b];
            }
        }
        let ji = self.jac_inv();
        // trace(J^{-T} M J^{-1}) = sum_{k,a,b} ji[a][k] m[a][b] ji[b][k]
        let mut tr = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                tr += m[a][b] * (ji[a][0] * ji[b][0] + ji[a][1] * ji[b][1]);
            }
        }
        tr
    }
}

/// Tensor-product spline parametrization of the physical strip domain.
///
/// Both directions use open knot vectors (a genuinely periodic map cannot
/// reproduce the identity x-component); periodic structure lives in the
/// field spaces, and periodic boundary curves are converted to the open
/// basis when the geometry is (re)fitted. The control grid keeps the
/// x-coordinates pinned at the Greville abscissae so that `x(xi, eta) = xi`
/// exactly, the bottom row on `y = 0`, and the y-coordinates free.
#[derive(Debug, Clone)]
pub struct GeoMap {
    space_x: UnivariateSplineSpace,
    space_y: UnivariateSplineSpace,
    /// Control points, `ctrl[ix * dim_y + iy] = [x, y]`.
    ctrl: Vec<[f64; 2]>,
    strip_width: f64,
}

impl GeoMap {
    /// Builds the strip below `top`, blending the interior linearly between
    /// the flat bottom and the top curve (the Coons fill of straight sides).
    pub fn strip(degree: usize, nx: usize, ny: usize, top: &BoundaryCurve) -> Result<Self> {
        let space_x = UnivariateSplineSpace::open(degree, nx);
        let space_y = UnivariateSplineSpace::open(degree, ny);
        let top_open = top_coeffs_in_open_basis(top, &space_x)?;
        Self::from_rows(space_x, space_y, &top_open, top.strip_width())
    }

    fn from_rows(
        space_x: UnivariateSplineSpace,
        space_y: UnivariateSplineSpace,
        top_open: &[f64],
        strip_width: f64,
    ) -> Result<Self> {
        let dim_x = space_x.dim();
        let dim_y = space_y.dim();
        if top_open.len() != dim_x {
            return Err(Error::invalid("top row coefficient count mismatch"));
        }
        let gx = space_x.greville_points();
        let gy = space_y.greville_points();
        let mut ctrl = vec![[0.0; 2]; dim_x * dim_y];
        for ix in 0..dim_x {
            for iy in 0..dim_y {
                ctrl[ix * dim_y + iy] = [gx[ix] * strip_width, gy[iy] * top_open[ix]];
            }
        }
        let geo = GeoMap { space_x, space_y, ctrl, strip_width };
        geo.check_injective()?;
        Ok(geo)
    }

    pub(super) fn from_control_grid(
        space_x: UnivariateSplineSpace,
        space_y: UnivariateSplineSpace,
        ctrl: Vec<[f64; 2]>,
        strip_width: f64,
    ) -> Result<Self> {
        let geo = GeoMap { space_x, space_y, ctrl, strip_width };
        geo.check_injective()?;
        Ok(geo)
    }

    pub fn space_x(&self) -> &UnivariateSplineSpace {
        &self.space_x
    }

    pub fn space_y(&self) -> &UnivariateSplineSpace {
        &self.space_y
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.space_x.dim(), self.space_y.dim())
    }

    pub fn strip_width(&self) -> f64 {
        self.strip_width
    }

    pub fn control(&self, ix: usize, iy: usize) -> [f64; 2] {
        self.ctrl[ix * self.space_y.dim() + iy]
    }

    /// Top control row expressed in the open x-basis.
    pub fn top_row(&self) -> Vec<f64> {
        let dim_y = self.space_y.dim();
        (0..self.space_x.dim())
            .map(|ix| self.ctrl[ix * dim_y + dim_y - 1][1])
            .collect()
    }

    /// Map evaluation with derivatives up to `order` (at most 2).
    pub fn eval(&self, xi: f64, eta: f64, order: usize) -> Result<MapEval> {
        if order > 2 {
            return Err(Error::invalid("map evaluation supports order <= 2"));
        }
        let dx = order.min(self.space_x.degree());
        let dy = order.min(self.space_y.degree());
        let bx = self.space_x.eval_basis(xi, dx)?;
        let by = self.space_y.eval_basis(eta, dy)?;
        let dim_y = self.space_y.dim();

        let mut point = [0.0; 2];
        let mut jac = [[0.0; 2]; 2];
        let mut hess = [[[0.0; 2]; 2]; 2];
        for i in 0..bx.n_funcs() {
            let ix = bx.first_raw + i;
            for j in 0..by.n_funcs() {
                let iy = by.first_raw + j;
                let p = self.ctrl[ix * dim_y + iy];
                let v = bx.values[0][i] * by.values[0][j];
                point[0] += p[0] * v;
                point[1] += p[1] * v;
                if order >= 1 {
                    let vx = bx.values[1.min(dx)][i] * by.values[0][j];
                    let vy = bx.values[0][i] * by.values[1.min(dy)][j];
                    // Degree-1 guard: dx/dy clamp can only trigger for degree 0 which we exclude.
                    jac[0][0] += p[0] * vx;
                    jac[0][1] += p[0] * vy;
                    jac[1][0] += p[1] * vx;
                    jac[1][1] += p[1] * vy;
                }
                if order >= 2 {
                    let vxx = if dx >= 2 { bx.values[2][i] * by.values[0][j] } else { 0.0 };
                    let vxy = bx.values[1][i] * by.values[1][j];
                    let vyy = if dy >= 2 { bx.values[0][i] * by.values[2][j] } else { 0.0 };
                    for k in 0..2 {
                        hess[k][0][0] += p[k] * vxx;
                        hess[k][0][1] += p[k] * vxy;
                        hess[k][1][0] += p[k] * vxy;
                        hess[k][1][1] += p[k] * vyy;
                    }
                }
            }
        }
        let ev = MapEval {
            point,
            jacobian: jac,
            hessian: (order >= 2).then_some(hess),
        };
        if order >= 1 && ev.det() <= 1e-14 {
            return Err(Error::Geometry(format!(
                "degenerate Jacobian (det = {:.3e}) at ({xi}, {eta})",
                ev.det()
            )));
        }
        Ok(ev)
    }

    /// Samples the Jacobian determinant at all quadrature points and fails on
    /// a non-positive value (fold-over after a boundary update).
    pub fn check_injective(&self) -> Result<()> {
        let rule = GaussLegendre::new(self.space_x.degree() + 1);
        for (ax, bx) in self.space_x.elements() {
            for (ay, by) in self.space_y.elements() {
                for (xi, _) in rule.mapped(ax, bx) {
                    for (eta, _) in rule.mapped(ay, by) {
                        let ev = self.eval(xi, eta, 1)?;
                        if ev.det() <= 1e-14 {
                            return Err(Error::Geometry(format!(
                                "non-positive Jacobian {:.3e} at ({xi:.4}, {eta:.4})",
                                ev.det()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Plain-text geometry snapshot: degrees, knot counts, the two knot
    /// vectors, then the control grid row-major (x-index outer) as `x y`
    /// lines.
    pub fn dump(&self, out: &mut impl Write) -> std::io::Result<()> {
        let kx = self.space_x.knot_vector().knots();
        let ky = self.space_y.knot_vector().knots();
        writeln!(out, "{} {}", self.space_x.degree(), self.space_y.degree())?;
        writeln!(out, "{} {}", kx.len(), ky.len())?;
        writeln!(out, "{}", join_floats(kx))?;
        writeln!(out, "{}", join_floats(ky))?;
        for p in &self.ctrl {
            writeln!(out, "{:.16e} {:.16e}", p[0], p[1])?;
        }
        Ok(())
    }
}

fn join_floats(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Expresses a boundary curve in the geometry's open x-basis.
///
/// Periodic curves are interpolated at the open Greville abscissae; since
/// the periodic space is a subspace of the open one on the same breakpoints,
/// the conversion is exact.
pub fn top_coeffs_in_open_basis(
    curve: &BoundaryCurve,
    open_x: &UnivariateSplineSpace,
) -> Result<Vec<f64>> {
    if open_x.is_periodic() {
        return Err(Error::invalid("target x-space must be open"));
    }
    if curve.space().degree() != open_x.degree()
        || curve.space().n_elements() != open_x.n_elements()
    {
        return Err(Error::invalid(
            "curve space and geometry x-space must share degree and breakpoints",
        ));
    }
    if !curve.space().is_periodic() {
        return Ok(curve.y_coeffs().to_vec());
    }
    open_x.greville_interpolate(|t| curve.y(t, 0).expect("curve evaluation"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_geo(degree: usize, n: usize) -> GeoMap {
        let space = UnivariateSplineSpace::open(degree, n);
        let top = BoundaryCurve::flat(space, 1.0);
        GeoMap::strip(degree, n, n, &top).unwrap()
    }

    #[test]
    fn identity_like_map() {
        let geo = flat_geo(2, 2);
        let ev = geo.eval(0.3, 0.4, 1).unwrap();
        assert!((ev.point[0] - 0.3).abs() < 1e-14);
        assert!((ev.point[1] - 0.4).abs() < 1e-14);
        assert!((ev.jacobian[0][0] - 1.0).abs() < 1e-13);
        assert!((ev.jacobian[0][1]).abs() < 1e-13);
        assert!((ev.jacobian[1][0]).abs() < 1e-13);
        assert!((ev.jacobian[1][1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn x_component_is_the_parameter() {
        let space = UnivariateSplineSpace::open(3, 4);
        let top = BoundaryCurve::from_fn(space, |x| 1.0 + 0.1 * (3.0 * x).sin()).unwrap();
        let geo = GeoMap::strip(3, 4, 4, &top).unwrap();
        for k in 0..=10 {
            let xi = k as f64 / 10.0;
            let ev = geo.eval(xi, 0.7, 0).unwrap();
            assert!((ev.point[0] - xi).abs() < 1e-13, "xi={xi}");
        }
    }

    #[test]
    fn test1_geometry_top_midpoint() {
        let space = UnivariateSplineSpace::open(2, 8);
        let top = BoundaryCurve::from_fn(space, |x| 1.0 + 0.25 * x * (1.0 - x)).unwrap();
        let geo = GeoMap::strip(2, 8, 8, &top).unwrap();
        let ev = geo.eval(0.5, 1.0, 0).unwrap();
        assert!((ev.point[0] - 0.5).abs() < 1e-13);
        assert!((ev.point[1] - 1.0625).abs() < 1e-13);
    }

    #[test]
    fn hessian_matches_jacobian_differences() {
        let space = UnivariateSplineSpace::open(3, 4);
        let top = BoundaryCurve::from_fn(space, |x| 1.0 + 0.2 * x * x * (1.0 - x)).unwrap();
        let geo = GeoMap::strip(3, 4, 4, &top).unwrap();
        let h = 1e-6;
        for &(xi, eta) in &[(0.31, 0.42), (0.6, 0.81), (0.5, 0.5)] {
            let ev = geo.eval(xi, eta, 2).unwrap();
            let hess = ev.hessian.unwrap();
            let jxp = geo.eval(xi + h, eta, 1).unwrap().jacobian;
            let jxm = geo.eval(xi - h, eta, 1).unwrap().jacobian;
            let jyp = geo.eval(xi, eta + h, 1).unwrap().jacobian;
            let jym = geo.eval(xi, eta - h, 1).unwrap().jacobian;
            for k in 0..2 {
                let dxx = (jxp[k][0] - jxm[k][0]) / (2.0 * h);
                let dxy = (jyp[k][0] - jym[k][0]) / (2.0 * h);
                let dyy = (jyp[k][1] - jym[k][1]) / (2.0 * h);
                let scale = 1.0f64.max(dxx.abs()).max(dxy.abs()).max(dyy.abs());
                assert!((hess[k][0][0] - dxx).abs() / scale < 1e-5);
                assert!((hess[k][0][1] - dxy).abs() / scale < 1e-5);
                assert!((hess[k][1][1] - dyy).abs() / scale < 1e-5);
            }
        }
    }

    #[test]
    fn laplacian_of_quadratic_on_flat_geometry() {
        // u = x^2 + y^2 has physical Laplacian 4 everywhere; the chain rule
        // must reproduce it exactly for degree >= 2.
        let geo = flat_geo(2, 3);
        let u = |x: f64, y: f64| x * x + y * y;
        // Parametric derivatives equal physical ones on the identity map.
        for &(xi, eta) in &[(0.2, 0.3), (0.7, 0.9)] {
            let ev = geo.eval(xi, eta, 2).unwrap();
            let grad = [2.0 * xi, 2.0 * eta];
            let hess = [[2.0, 0.0], [0.0, 2.0]];
            let lap = ev.push_laplacian(grad, hess);
            assert!((lap - 4.0).abs() < 1e-12, "{}", u(xi, eta));
        }
    }

    #[test]
    fn dump_round_trips_through_text() {
        let geo = flat_geo(2, 2);
        let mut buf = Vec::new();
        geo.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "2 2");
        assert_eq!(lines.next().unwrap(), "7 7");
        // knot lines + 16 control-point lines
        assert_eq!(text.lines().count(), 4 + 16);
    }

    #[test]
    fn periodic_curve_converts_exactly() {
        let per = UnivariateSplineSpace::periodic_with_elements(3, 8).unwrap();
        let curve = BoundaryCurve::from_fn(per, |x| {
            1.0 + (2.0 * std::f64::consts::PI * x).sin() / 16.0
        })
        .unwrap();
        let open = UnivariateSplineSpace::open(3, 8);
        let coeffs = top_coeffs_in_open_basis(&curve, &open).unwrap();
        for k in 0..=60 {
            let t = k as f64 / 60.0;
            let a = curve.y(t, 0).unwrap();
            let b = open.eval_coeffs(&coeffs, t, 0).unwrap();
            assert!((a - b).abs() < 1e-12, "t={t}");
        }
    }
}
