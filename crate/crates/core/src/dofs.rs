//! Discrete spaces on the strip and degree-of-freedom bookkeeping.

use crate::error::{Error, Result};
use crate::geometry::GeoMap;
use crate::problem::{BcKind, ProblemData};
use crate::spline::{TensorSplineSpace, UnivariateSplineSpace};

/// The univariate and tensor spaces of one strip discretization.
///
/// The geometry map always lives on open knot vectors; the field space uses
/// a periodic x-direction for periodic lateral conditions. The boundary
/// trace space equals the field x-space.
#[derive(Debug, Clone)]
pub struct StripSpaces {
    pub degree: usize,
    pub nx: usize,
    pub ny: usize,
    pub bc: BcKind,
    pub field: TensorSplineSpace,
    /// Trace space on the free boundary (same flavour as `field.x`).
    pub boundary: UnivariateSplineSpace,
}

impl StripSpaces {
    pub fn new(degree: usize, nx: usize, ny: usize, bc: BcKind) -> Result<Self> {
        if degree < 1 || nx < 1 || ny < 1 {
            return Err(Error::invalid("degree and element counts must be positive"));
        }
        let field_x = match bc {
            BcKind::DirichletLateral => UnivariateSplineSpace::open(degree, nx),
            BcKind::PeriodicLateral => UnivariateSplineSpace::periodic_with_elements(degree, nx)?,
        };
        let field_y = UnivariateSplineSpace::open(degree, ny);
        let boundary = field_x.clone();
        Ok(StripSpaces {
            degree,
            nx,
            ny,
            bc,
            field: TensorSplineSpace::new(field_x, field_y),
            boundary,
        })
    }

    pub fn dim_x(&self) -> usize {
        self.field.x.dim()
    }

    pub fn dim_y(&self) -> usize {
        self.field.y.dim()
    }

    /// Evaluates a full coefficient vector of the field at a parametric point.
    /// Returns value, parametric gradient and (for `max_deriv >= 2`) the
    /// parametric Hessian.
    pub fn eval_field(
        &self,
        coeffs: &[f64],
        xi: f64,
        eta: f64,
        max_deriv: usize,
    ) -> Result<FieldValue> {
        let dx = max_deriv.min(self.field.x.degree());
        let bx = self.field.x.eval_basis(xi, dx)?;
        let by = self.field.y.eval_basis(eta, max_deriv.min(self.field.y.degree()))?;
        let mut out = FieldValue::default();
        for i in 0..bx.n_funcs() {
            let ix = self.field.x.dof_of(bx.first_raw + i);
            for j in 0..by.n_funcs() {
                let iy = self.field.y.dof_of(by.first_raw + j);
                let c = coeffs[self.field.index(ix, iy)];
                out.value += c * bx.values[0][i] * by.values[0][j];
                if max_deriv >= 1 {
                    out.grad[0] += c * bx.values[1][i] * by.values[0][j];
                    out.grad[1] += c * bx.values[0][i] * by.values[1][j];
                }
                if max_deriv >= 2 {
                    out.hess[0][0] += c * bx.values[2][i] * by.values[0][j];
                    out.hess[0][1] += c * bx.values[1][i] * by.values[1][j];
                    out.hess[1][0] += c * bx.values[1][i] * by.values[1][j];
                    out.hess[1][1] += c * bx.values[0][i] * by.values[2][j];
                }
            }
        }
        Ok(out)
    }

    /// Coefficients of the trace of the field on the free boundary (eta = 1),
    /// expressed in the boundary space. Only the top control row contributes
    /// because open y-bases are end-interpolatory.
    pub fn trace_coeffs(&self, coeffs: &[f64]) -> Vec<f64> {
        let top = self.dim_y() - 1;
        (0..self.dim_x())
            .map(|ix| coeffs[self.field.index(ix, top)])
            .collect()
    }
}

/// Parametric value/gradient/Hessian of a field expansion.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldValue {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

/// Splits the tensor-product degrees of freedom into free unknowns and
/// strongly imposed (lifted) ones.
#[derive(Debug, Clone)]
pub struct DofMap {
    dim_x: usize,
    dim_y: usize,
    free_index: Vec<Option<usize>>,
    free: Vec<usize>,
    lifted: Vec<usize>,
}

impl DofMap {
    /// `lift_lateral` pins the lateral control columns (Galerkin with
    /// Dirichlet lateral data); collocation instead keeps them free and
    /// enforces the data through point rows. The bottom row is always lifted.
    pub fn new(spaces: &StripSpaces, lift_lateral: bool) -> Self {
        let dim_x = spaces.dim_x();
        let dim_y = spaces.dim_y();
        let lateral = lift_lateral && spaces.bc == BcKind::DirichletLateral;
        let mut free_index = vec![None; dim_x * dim_y];
        let mut free = Vec::new();
        let mut lifted = Vec::new();
        for ix in 0..dim_x {
            for iy in 0..dim_y {
                let g = ix * dim_y + iy;
                let pinned = iy == 0 || (lateral && (ix == 0 || ix == dim_x - 1));
                if pinned {
                    lifted.push(g);
                } else {
                    free_index[g] = Some(free.len());
                    free.push(g);
                }
            }
        }
        DofMap { dim_x, dim_y, free_index, free, lifted }
    }

    /// Map with every degree of freedom free (raw operator assembly).
    pub fn unconstrained(spaces: &StripSpaces) -> Self {
        let dim_x = spaces.dim_x();
        let dim_y = spaces.dim_y();
        let free: Vec<usize> = (0..dim_x * dim_y).collect();
        let free_index = free.iter().map(|&g| Some(g)).collect();
        DofMap { dim_x, dim_y, free_index, free, lifted: Vec::new() }
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn lifted(&self) -> &[usize] {
        &self.lifted
    }

    pub fn free_of(&self, global: usize) -> Option<usize> {
        self.free_index[global]
    }

    pub fn global(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.dim_x && iy < self.dim_y);
        ix * self.dim_y + iy
    }

    /// Scatters a free-dof solution over the lifted background values.
    pub fn scatter(&self, free_values: &[f64], lift: &[f64]) -> Vec<f64> {
        debug_assert_eq!(free_values.len(), self.n_free());
        debug_assert_eq!(lift.len(), self.dim_x * self.dim_y);
        let mut full = lift.to_vec();
        for (k, &g) in self.free.iter().enumerate() {
            full[g] = free_values[k];
        }
        full
    }
}

/// Full-length coefficient vector holding the strongly imposed Dirichlet
/// values (zero at free dofs).
///
/// Values are obtained by Greville interpolation of `h` along each lifted
/// edge, which reproduces `h = y` exactly by linear precision of the spline
/// basis along the edge.
pub fn dirichlet_lift(
    spaces: &StripSpaces,
    map: &DofMap,
    geo: &GeoMap,
    problem: &ProblemData,
) -> Result<Vec<f64>> {
    let dim_x = spaces.dim_x();
    let dim_y = spaces.dim_y();
    let mut lift = vec![0.0; dim_x * dim_y];
    if map.lifted().is_empty() {
        return Ok(lift);
    }

    // Bottom edge: interpolate h along eta = 0 at the x-Greville abscissae.
    let gx = spaces.field.x.greville_points();
    let bottom_values: Vec<f64> = gx
        .iter()
        .map(|&t| {
            let p = geo.eval(t, 0.0, 0)?.point;
            Ok((problem.h_fixed)(p[0], p[1]))
        })
        .collect::<Result<_>>()?;
    let bottom_coeffs = spaces.field.x.interpolate_at(&gx, &bottom_values)?;
    for (ix, &coeff) in bottom_coeffs.iter().enumerate() {
        let g = map.global(ix, 0);
        if map.free_of(g).is_none() {
            lift[g] = coeff;
        }
    }

    // Lateral edges (only lifted in the Dirichlet-Galerkin case).
    if spaces.bc == BcKind::DirichletLateral {
        let gy = spaces.field.y.greville_points();
        for (ix, xi) in [(0usize, 0.0f64), (dim_x - 1, 1.0)] {
            if map.free_of(map.global(ix, 1)).is_some() {
                continue; // lateral columns are free (collocation)
            }
            let values: Vec<f64> = gy
                .iter()
                .map(|&eta| {
                    let p = geo.eval(xi, eta, 0)?.point;
                    Ok((problem.h_fixed)(p[0], p[1]))
                })
                .collect::<Result<_>>()?;
            let coeffs = spaces.field.y.interpolate_at(&gy, &values)?;
            for (iy, &coeff) in coeffs.iter().enumerate().skip(1) {
                let g = map.global(ix, iy);
                if map.free_of(g).is_none() {
                    lift[g] = coeff;
                }
            }
        }
    }
    Ok(lift)
}
