use crate::error::{Error, Result};
use crate::spline::UnivariateSplineSpace;

/// The free boundary stored as a graph `gamma(t) = (t * width, y(t))` with
/// `y` a spline in `space`. Updates only ever touch the `y` coefficients,
/// which keeps the graph form closed under the vertical update.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    space: UnivariateSplineSpace,
    y_coeffs: Vec<f64>,
    strip_width: f64,
}

impl BoundaryCurve {
    pub fn new(space: UnivariateSplineSpace, y_coeffs: Vec<f64>, strip_width: f64) -> Result<Self> {
        if y_coeffs.len() != space.dim() {
            return Err(Error::invalid(format!(
                "curve needs {} coefficients, got {}",
                space.dim(),
                y_coeffs.len()
            )));
        }
        if strip_width <= 0.0 {
            return Err(Error::invalid("strip width must be positive"));
        }
        Ok(BoundaryCurve { space, y_coeffs, strip_width })
    }

    /// Flat curve `y = height`.
    pub fn flat(space: UnivariateSplineSpace, height: f64) -> Self {
        let coeffs = vec![height; space.dim()];
        BoundaryCurve { space, y_coeffs: coeffs, strip_width: 1.0 }
    }

    /// Builds the curve by Greville interpolation of `f`; exact whenever `f`
    /// already lies in the space.
    pub fn from_fn(space: UnivariateSplineSpace, f: impl Fn(f64) -> f64) -> Result<Self> {
        let coeffs = space.greville_interpolate(f)?;
        BoundaryCurve { space, y_coeffs: coeffs, strip_width: 1.0 }.validated()
    }

    fn validated(self) -> Result<Self> {
        // The curve must stay strictly above the fixed bottom boundary.
        for k in 0..=200 {
            let t = k as f64 / 200.0;
            if self.y(t, 0)? <= 0.0 {
                return Err(Error::Geometry(format!(
                    "boundary curve touches y = 0 near t = {t}"
                )));
            }
        }
        Ok(self)
    }

    pub fn space(&self) -> &UnivariateSplineSpace {
        &self.space
    }

    pub fn y_coeffs(&self) -> &[f64] {
        &self.y_coeffs
    }

    pub fn strip_width(&self) -> f64 {
        self.strip_width
    }

    /// `deriv`-th derivative of `y` with respect to the parameter.
    pub fn y(&self, t: f64, deriv: usize) -> Result<f64> {
        self.space.eval_coeffs(&self.y_coeffs, t, deriv)
    }

    pub fn point(&self, t: f64) -> Result<[f64; 2]> {
        Ok([t * self.strip_width, self.y(t, 0)?])
    }

    /// Returns the curve with `delta` added to the `y` coefficients.
    pub fn with_offset_coeffs(&self, delta: &[f64]) -> Result<Self> {
        if delta.len() != self.y_coeffs.len() {
            return Err(Error::invalid("offset coefficient count mismatch"));
        }
        let coeffs = self
            .y_coeffs
            .iter()
            .zip(delta)
            .map(|(a, b)| a + b)
            .collect();
        BoundaryCurve {
            space: self.space.clone(),
            y_coeffs: coeffs,
            strip_width: self.strip_width,
        }
        .validated()
    }

    /// Outward (upward) unit normal and signed curvature at `t`.
    ///
    /// For the graph parametrization the normal is `(-y', 1)/sqrt(1+y'^2)`
    /// and the signed curvature is `H = -y'' / (1+y'^2)^{3/2}`, positive on
    /// concave-down boundaries. Curvature needs degree >= 2.
    pub fn normal_and_curvature(&self, t: f64) -> Result<([f64; 2], f64)> {
        if self.space.degree() < 2 {
            return Err(Error::invalid(
                "curvature requires a curve of degree at least 2",
            ));
        }
        let yp = self.y(t, 1)?;
        let ypp = self.y(t, 2)?;
        let denom = (1.0 + yp * yp).sqrt();
        let normal = [-yp / denom, 1.0 / denom];
        let curvature = -ypp / (denom * denom * denom);
        Ok((normal, curvature))
    }

    /// Arc-length factor `sqrt(1 + y'(t)^2)`.
    pub fn arc_factor(&self, t: f64) -> Result<f64> {
        let yp = self.y(t, 1)?;
        Ok((1.0 + yp * yp).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parabola_curve(n_elements: usize) -> BoundaryCurve {
        let space = UnivariateSplineSpace::open(2, n_elements);
        BoundaryCurve::from_fn(space, |x| 1.0 + 0.25 * x * (1.0 - x)).unwrap()
    }

    #[test]
    fn flat_curve_normal_and_curvature() {
        let space = UnivariateSplineSpace::open(2, 4);
        let c = BoundaryCurve::flat(space, 1.0);
        for &t in &[0.0, 0.3, 0.77, 1.0] {
            let (n, h) = c.normal_and_curvature(t).unwrap();
            assert!((n[0]).abs() < 1e-14);
            assert!((n[1] - 1.0).abs() < 1e-14);
            assert!(h.abs() < 1e-14);
        }
    }

    #[test]
    fn parabola_midpoint_curvature_is_half() {
        let c = parabola_curve(4);
        let (n, h) = c.normal_and_curvature(0.5).unwrap();
        assert!(n[0].abs() < 1e-13);
        assert!((n[1] - 1.0).abs() < 1e-13);
        assert!((h - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parabola_end_normal() {
        let c = parabola_curve(4);
        let (n, _) = c.normal_and_curvature(0.0).unwrap();
        let scale = 1.0f64 / 1.0625f64.sqrt();
        assert!((n[0] + 0.25 * scale).abs() < 1e-12);
        assert!((n[1] - scale).abs() < 1e-12);
    }

    #[test]
    fn parabola_curvature_matches_closed_form() {
        let c = parabola_curve(8);
        for k in 0..=40 {
            let x = k as f64 / 40.0;
            let yp = (1.0 - 2.0 * x) / 4.0;
            let expect = 0.5 / (1.0 + yp * yp).powf(1.5);
            let (_, h) = c.normal_and_curvature(x).unwrap();
            assert!((h - expect).abs() < 1e-12, "x={x}: {h} vs {expect}");
        }
    }

    #[test]
    fn curvature_rejects_degree_one() {
        let space = UnivariateSplineSpace::open(1, 4);
        let c = BoundaryCurve::flat(space, 1.0);
        assert!(c.normal_and_curvature(0.5).is_err());
    }

    #[test]
    fn rejects_curves_touching_bottom() {
        let space = UnivariateSplineSpace::open(2, 4);
        assert!(BoundaryCurve::from_fn(space, |x| x - 0.2).is_err());
    }

    #[test]
    fn normal_is_unit_length_at_many_points() {
        let c = parabola_curve(6);
        let mut state = 0x853c49e6748fea9bu64;
        for _ in 0..1000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let t = (state >> 11) as f64 / (1u64 << 53) as f64;
            let (n, _) = c.normal_and_curvature(t).unwrap();
            let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
            assert!((len - 1.0).abs() < 1e-14, "t={t}");
        }
    }

    proptest! {
        #[test]
        fn normal_is_unit_length(t in 0.0f64..=1.0) {
            let c = parabola_curve(6);
            let (n, _) = c.normal_and_curvature(t).unwrap();
            let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
            prop_assert!((len - 1.0).abs() < 1e-14);
        }
    }
}
