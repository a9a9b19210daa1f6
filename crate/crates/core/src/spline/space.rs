use crate::error::{Error, Result};
use crate::linalg;
use super::knots::{KnotKind, KnotVector};

/// Basis values at one parameter: `values[d][j]` is the `d`-th derivative of
/// the function with raw index `first_raw + j`. For periodic spaces raw
/// indices map onto identified degrees of freedom via [`UnivariateSplineSpace::dof_of`].
#[derive(Debug, Clone)]
pub struct BasisEval {
    pub first_raw: usize,
    pub values: Vec<Vec<f64>>,
}

impl BasisEval {
    pub fn n_funcs(&self) -> usize {
        self.values[0].len()
    }
}

/// A univariate spline space on `[0, 1]`: open, or periodic with the first
/// and last `degree` basis functions identified pairwise.
#[derive(Debug, Clone)]
pub struct UnivariateSplineSpace {
    knots: KnotVector,
    periodic: bool,
}

impl UnivariateSplineSpace {
    /// Open space with `n_elements` uniform spans; dimension `n_elements + degree`.
    pub fn open(degree: usize, n_elements: usize) -> Self {
        UnivariateSplineSpace {
            knots: KnotVector::open_uniform(degree, n_elements),
            periodic: false,
        }
    }

    /// Periodic space built from `n_funcs` functions on a uniform knot
    /// vector; gluing the first and last `degree` functions leaves dimension
    /// `n_funcs - degree`, and every member is C^{degree-1} across the seam.
    pub fn periodic(n_funcs: usize, degree: usize) -> Result<Self> {
        if n_funcs <= 2 * degree {
            return Err(Error::invalid(format!(
                "periodic space needs more than {} basis functions for degree {}, got {}",
                2 * degree,
                degree,
                n_funcs
            )));
        }
        let n_elements = n_funcs - degree;
        Ok(UnivariateSplineSpace {
            knots: KnotVector::uniform_periodic(degree, n_elements),
            periodic: true,
        })
    }

    /// Periodic space with `n_elements` spans on `[0, 1]`.
    pub fn periodic_with_elements(degree: usize, n_elements: usize) -> Result<Self> {
        Self::periodic(n_elements + degree, degree)
    }

    pub fn from_knots(knots: KnotVector) -> Self {
        let periodic = knots.kind() == KnotKind::UniformPeriodic;
        UnivariateSplineSpace { knots, periodic }
    }

    pub fn degree(&self) -> usize {
        self.knots.degree()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.knots
    }

    /// Count of basis functions before periodic identification.
    pub fn n_funcs(&self) -> usize {
        self.knots.n_basis()
    }

    /// Dimension of the space (after identification for periodic spaces).
    pub fn dim(&self) -> usize {
        if self.periodic {
            self.knots.n_basis() - self.degree()
        } else {
            self.knots.n_basis()
        }
    }

    pub fn n_elements(&self) -> usize {
        self.knots.breakpoints().len() - 1
    }

    /// Spans of the parametric interval as `(left, right)` pairs.
    pub fn elements(&self) -> Vec<(f64, f64)> {
        let bp = self.knots.breakpoints();
        bp.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Maps a raw basis index to its degree of freedom.
    pub fn dof_of(&self, raw: usize) -> usize {
        if self.periodic { raw % self.dim() } else { raw }
    }

    /// Wraps a parameter into the evaluation interval. Periodic spaces accept
    /// any finite value and wrap into `[0, 1)` (with `1.0` kept as the left
    /// limit so one-sided seam values are reachable); open spaces reject
    /// parameters outside `[0, 1]` beyond round-off.
    fn normalize_param(&self, xi: f64) -> Result<f64> {
        if self.periodic {
            if !xi.is_finite() {
                return Err(Error::OutOfDomain { value: xi, min: 0.0, max: 1.0 });
            }
            if xi == 1.0 {
                return Ok(1.0);
            }
            return Ok(xi - xi.floor());
        }
        let (a, b) = self.knots.domain();
        let slack = 1e-12;
        if xi < a - slack || xi > b + slack {
            return Err(Error::OutOfDomain { value: xi, min: a, max: b });
        }
        Ok(xi.clamp(a, b))
    }

    /// Nonzero basis functions and derivatives up to `max_deriv` at `xi`.
    pub fn eval_basis(&self, xi: f64, max_deriv: usize) -> Result<BasisEval> {
        if max_deriv > self.degree() {
            return Err(Error::invalid(format!(
                "derivative order {} exceeds degree {}",
                max_deriv,
                self.degree()
            )));
        }
        let x = self.normalize_param(xi)?;
        let (first_raw, values) = self.knots.eval_span(x, max_deriv);
        Ok(BasisEval { first_raw, values })
    }

    /// Evaluates `sum_k coeffs[k] psi_k^{(deriv)}(xi)` for identified coefficients.
    pub fn eval_coeffs(&self, coeffs: &[f64], xi: f64, deriv: usize) -> Result<f64> {
        debug_assert_eq!(coeffs.len(), self.dim());
        let basis = self.eval_basis(xi, deriv)?;
        let mut out = 0.0;
        for j in 0..basis.n_funcs() {
            let dof = self.dof_of(basis.first_raw + j);
            out += coeffs[dof] * basis.values[deriv][j];
        }
        Ok(out)
    }

    /// Greville abscissae: one per degree of freedom, the mean of `degree`
    /// consecutive knots. Periodic abscissae are wrapped into `[0, 1)`.
    pub fn greville_points(&self) -> Vec<f64> {
        let p = self.degree();
        let knots = self.knots.knots();
        (0..self.dim())
            .map(|i| {
                let g: f64 = knots[i + 1..i + 1 + p].iter().sum::<f64>() / p as f64;
                if self.periodic {
                    let wrapped = g - g.floor();
                    // Round-off guard: 1.0 - eps wrapping is fine, exact 1.0 maps to 0.
                    if wrapped >= 1.0 { 0.0 } else { wrapped }
                } else {
                    g
                }
            })
            .collect()
    }

    /// Interpolates `values[i]` at `points[i]`, returning spline coefficients.
    pub fn interpolate_at(&self, points: &[f64], values: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if points.len() != n || values.len() != n {
            return Err(Error::invalid(format!(
                "interpolation needs {} points/values, got {}/{}",
                n,
                points.len(),
                values.len()
            )));
        }
        let mut a = nalgebra::DMatrix::zeros(n, n);
        for (r, &t) in points.iter().enumerate() {
            let basis = self.eval_basis(t, 0)?;
            for j in 0..basis.n_funcs() {
                let dof = self.dof_of(basis.first_raw + j);
                a[(r, dof)] += basis.values[0][j];
            }
        }
        let rhs = nalgebra::DVector::from_column_slice(values);
        let sol = linalg::solve_dense(a, rhs)
            .map_err(|e| Error::Numerical(format!("interpolation system: {e}")))?;
        Ok(sol.as_slice().to_vec())
    }

    /// Interpolates a function at the Greville abscissae; exact for functions
    /// already in the space.
    pub fn greville_interpolate(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let pts = self.greville_points();
        let vals: Vec<f64> = pts.iter().map(|&t| f(t)).collect();
        self.interpolate_at(&pts, &vals)
    }
}

/// Tensor product of two univariate spaces; degree of freedom `(i, j)` maps
/// to the flat index `i * dim_y + j`.
#[derive(Debug, Clone)]
pub struct TensorSplineSpace {
    pub x: UnivariateSplineSpace,
    pub y: UnivariateSplineSpace,
}

impl TensorSplineSpace {
    pub fn new(x: UnivariateSplineSpace, y: UnivariateSplineSpace) -> Self {
        TensorSplineSpace { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.dim() * self.y.dim()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.y.dim() + iy
    }
}
