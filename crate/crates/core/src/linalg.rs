//! Thin layer over nalgebra's dense LU factorization.
//!
//! Every linear system in this crate is square and desk-scale (at most a few
//! thousand unknowns), so a dense direct solve is the right tool. The pivot
//! ratio doubles as a cheap conditioning guard.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves `a x = b` by LU with partial pivoting.
///
/// Fails with a diagnostic when the matrix is singular to working precision
/// (smallest pivot below `1e-14` times the largest).
pub fn solve_dense(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    debug_assert_eq!(n, b.len());
    let lu = a.lu();
    let (mut min_piv, mut max_piv) = (f64::INFINITY, 0.0f64);
    let u = lu.u();
    for i in 0..n {
        let d = u[(i, i)].abs();
        min_piv = min_piv.min(d);
        max_piv = max_piv.max(d);
    }
    if min_piv.is_nan() || min_piv <= max_piv * 1e-14 {
        return Err(Error::Numerical(format!(
            "singular system of size {n}: pivot ratio {:.3e}",
            if max_piv > 0.0 { min_piv / max_piv } else { 0.0 }
        )));
    }
    lu.solve(&b)
        .ok_or_else(|| Error::Numerical(format!("LU solve failed for system of size {n}")))
}
