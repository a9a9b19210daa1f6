//! Transfinite (Coons) refit of the interior control net after a boundary
//! update.

use crate::error::Result;
use super::curve::BoundaryCurve;
use super::map::{GeoMap, top_coeffs_in_open_basis};

/// Replaces the top control row of `geo` by `new_curve` and recomputes the
/// interior control points with the discrete bilinear Coons blend
///
/// `P_ij = (1-u_i) L_j + u_i R_j + (1-v_j) B_i + v_j T_i - [bilinear corner term]`
///
/// where `(u_i, v_j)` are the Greville abscissae. The bottom row stays on
/// `y = 0`; the side edges are straight verticals up to the new top corners
/// (which only move in the periodic case, where the seam height changes).
/// Fails when the refit geometry folds over.
pub fn coons_refit(geo: &GeoMap, new_curve: &BoundaryCurve) -> Result<GeoMap> {
    let top = top_coeffs_in_open_basis(new_curve, geo.space_x())?;
    let (dim_x, dim_y) = geo.dims();
    let gx = geo.space_x().greville_points();
    let gy = geo.space_y().greville_points();
    let width = geo.strip_width();

    // Edge control polygons. Open bases are end-interpolatory, so the first
    // and last top coefficients are the new corner heights.
    let bottom: Vec<[f64; 2]> = (0..dim_x).map(|i| [gx[i] * width, 0.0]).collect();
    let top_pts: Vec<[f64; 2]> = (0..dim_x).map(|i| [gx[i] * width, top[i]]).collect();
    let left: Vec<[f64; 2]> = (0..dim_y).map(|j| [0.0, gy[j] * top[0]]).collect();
    let right: Vec<[f64; 2]> = (0..dim_y)
        .map(|j| [width, gy[j] * top[dim_x - 1]])
        .collect();

    let corners = [bottom[0], bottom[dim_x - 1], top_pts[0], top_pts[dim_x - 1]];

    let mut ctrl = vec![[0.0; 2]; dim_x * dim_y];
    for i in 0..dim_x {
        let u = gx[i];
        for j in 0..dim_y {
            let v = gy[j];
            for k in 0..2 {
                let edge_blend = (1.0 - u) * left[j][k]
                    + u * right[j][k]
                    + (1.0 - v) * bottom[i][k]
                    + v * top_pts[i][k];
                let corner_blend = (1.0 - u) * (1.0 - v) * corners[0][k]
                    + u * (1.0 - v) * corners[1][k]
                    + (1.0 - u) * v * corners[2][k]
                    + u * v * corners[3][k];
                ctrl[i * dim_y + j][k] = edge_blend - corner_blend;
            }
        }
    }

    GeoMap::from_control_grid(
        geo.space_x().clone(),
        geo.space_y().clone(),
        ctrl,
        width,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::UnivariateSplineSpace;

    fn grid_close(a: &GeoMap, b: &GeoMap, tol: f64) -> bool {
        let (dx, dy) = a.dims();
        for i in 0..dx {
            for j in 0..dy {
                let pa = a.control(i, j);
                let pb = b.control(i, j);
                if (pa[0] - pb[0]).abs() > tol || (pa[1] - pb[1]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn refit_with_same_curve_is_identity() {
        let space = UnivariateSplineSpace::open(2, 4);
        let curve = BoundaryCurve::from_fn(space, |x| 1.0 + 0.25 * x * (1.0 - x)).unwrap();
        let geo = GeoMap::strip(2, 4, 4, &curve).unwrap();
        let refit = coons_refit(&geo, &curve).unwrap();
        assert!(grid_close(&geo, &refit, 1e-14));
    }

    #[test]
    fn refit_is_idempotent() {
        let space = UnivariateSplineSpace::open(3, 5);
        let flat = BoundaryCurve::flat(space.clone(), 1.0);
        let geo = GeoMap::strip(3, 5, 5, &flat).unwrap();
        let curve = BoundaryCurve::from_fn(space, |x| 1.0 + 0.1 * (2.0 * x).sin()).unwrap();
        let once = coons_refit(&geo, &curve).unwrap();
        let twice = coons_refit(&once, &curve).unwrap();
        assert!(grid_close(&once, &twice, 1e-14));
    }

    #[test]
    fn raising_flat_top_scales_rows_linearly() {
        let space = UnivariateSplineSpace::open(2, 3);
        let one = BoundaryCurve::flat(space.clone(), 1.0);
        let geo = GeoMap::strip(2, 3, 3, &one).unwrap();
        let two = BoundaryCurve::flat(space, 2.0);
        let refit = coons_refit(&geo, &two).unwrap();
        let gy = refit.space_y().greville_points();
        let (dx, _) = refit.dims();
        for i in 0..dx {
            for (j, &v) in gy.iter().enumerate() {
                assert!((refit.control(i, j)[1] - 2.0 * v).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_control_point_perturbation_blends_linearly() {
        let space = UnivariateSplineSpace::open(2, 4);
        let flat = BoundaryCurve::flat(space.clone(), 1.0);
        let geo = GeoMap::strip(2, 4, 4, &flat).unwrap();
        let delta = 0.05;
        let mut coeffs = flat.y_coeffs().to_vec();
        coeffs[2] += delta;
        let bumped = BoundaryCurve::new(space, coeffs, 1.0).unwrap();
        let refit = coons_refit(&geo, &bumped).unwrap();
        let gy = refit.space_y().greville_points();
        let (dx, _) = refit.dims();
        for i in 0..dx {
            for (j, &v) in gy.iter().enumerate() {
                let expect = v * (1.0 + if i == 2 { delta } else { 0.0 });
                assert!(
                    (refit.control(i, j)[1] - expect).abs() < 1e-14,
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn fold_over_is_rejected() {
        let space = UnivariateSplineSpace::open(2, 4);
        let flat = BoundaryCurve::flat(space.clone(), 1.0);
        let geo = GeoMap::strip(2, 4, 4, &flat).unwrap();
        // Push one region of the boundary below the bottom.
        let mut coeffs = flat.y_coeffs().to_vec();
        coeffs[2] = -1.5;
        let bad = BoundaryCurve::new(space, coeffs, 1.0).unwrap();
        assert!(coons_refit(&geo, &bad).is_err());
    }
}
