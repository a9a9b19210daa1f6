use crate::error::{Error, Result};

/// Flavour of a knot vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotKind {
    /// End knots repeated `degree + 1` times; parametric interval `[0, 1]`.
    Open,
    /// Equispaced knots extending `degree` spacings beyond each end of `[0, 1]`.
    UniformPeriodic,
}

/// A nondecreasing knot sequence together with the polynomial degree.
#[derive(Debug, Clone)]
pub struct KnotVector {
    knots: Vec<f64>,
    degree: usize,
    kind: KnotKind,
}

impl KnotVector {
    /// Validates and wraps an explicit knot sequence.
    pub fn new(knots: Vec<f64>, degree: usize, kind: KnotKind) -> Result<Self> {
        if degree < 1 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(Error::invalid(format!(
                "need at least {} knots for degree {}, got {}",
                2 * (degree + 1),
                degree,
                knots.len()
            )));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("knots must be nondecreasing"));
        }
        let kv = KnotVector { knots, degree, kind };
        kv.validate_kind()?;
        Ok(kv)
    }

    /// Open knot vector on `[0, 1]` with `n_elements` uniform spans.
    pub fn open_uniform(degree: usize, n_elements: usize) -> Self {
        assert!(degree >= 1 && n_elements >= 1);
        let mut knots = Vec::with_capacity(n_elements + 1 + 2 * degree);
        knots.extend(std::iter::repeat_n(0.0, degree));
        for i in 0..=n_elements {
            knots.push(i as f64 / n_elements as f64);
        }
        knots.extend(std::iter::repeat_n(1.0, degree));
        KnotVector {
            knots,
            degree,
            kind: KnotKind::Open,
        }
    }

    /// Uniform knot vector extending `degree` spacings beyond `[0, 1]`.
    pub fn uniform_periodic(degree: usize, n_elements: usize) -> Self {
        assert!(degree >= 1 && n_elements >= 1);
        let tau = 1.0 / n_elements as f64;
        let total = n_elements + 1 + 2 * degree;
        let knots = (0..total)
            .map(|i| (i as f64 - degree as f64) * tau)
            .collect();
        KnotVector {
            knots,
            degree,
            kind: KnotKind::UniformPeriodic,
        }
    }

    fn validate_kind(&self) -> Result<()> {
        let p = self.degree;
        let n = self.n_basis();
        match self.kind {
            KnotKind::Open => {
                let first = self.knots[0];
                let last = *self.knots.last().unwrap();
                if self.knots[..=p].iter().any(|&k| k != first)
                    || self.knots[n..].iter().any(|&k| k != last)
                {
                    return Err(Error::invalid(
                        "open knot vector must repeat end knots degree+1 times",
                    ));
                }
                if first != 0.0 || last != 1.0 {
                    return Err(Error::invalid(
                        "open knot vector must be normalized to [0, 1]",
                    ));
                }
                // Interior multiplicity must never exceed the degree.
                let interior = &self.knots[p + 1..n];
                let mut run = 1;
                for w in interior.windows(2) {
                    run = if w[0] == w[1] { run + 1 } else { 1 };
                    if run > p {
                        return Err(Error::invalid("interior knot multiplicity exceeds degree"));
                    }
                }
            }
            KnotKind::UniformPeriodic => {
                let tau = self.knots[1] - self.knots[0];
                if tau <= 0.0 {
                    return Err(Error::invalid("periodic knots must be strictly increasing"));
                }
                for w in self.knots.windows(2) {
                    if (w[1] - w[0] - tau).abs() > 1e-12 * tau.max(1.0) {
                        return Err(Error::invalid("periodic knot vector must be equispaced"));
                    }
                }
                if (self.knots[p]).abs() > 1e-12 || (self.knots[self.knots.len() - 1 - p] - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(
                        "periodic knot vector must span [0, 1] with degree extra spacings per side",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> KnotKind {
        self.kind
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of B-spline basis functions defined by this knot vector.
    pub fn n_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Parametric interval (always `[0, 1]` for the supported kinds).
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.knots.len() - 1 - self.degree])
    }

    /// Breakpoints of the parametric interval (distinct knots in `[0, 1]`).
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        let mut out = vec![a];
        for &k in &self.knots {
            if k > *out.last().unwrap() && k <= b {
                out.push(k);
            }
        }
        out
    }

    /// Knot span index `s` with `knots[s] <= xi < knots[s+1]`, clamped so the
    /// basis window `s-p..=s` stays valid; `xi = 1` uses the last span (left
    /// limit). Spans are half-open, so Gauss points never sit on a knot.
    pub fn find_span(&self, xi: f64) -> usize {
        let p = self.degree;
        let n = self.n_basis();
        let hi = self.knots.len() - 1 - p; // first index of the right clamp
        if xi >= self.knots[hi] {
            return hi - 1;
        }
        if xi <= self.knots[p] {
            return p;
        }
        // knots[p..=hi] is the searched range.
        let mut lo = p;
        let mut up = hi;
        while up - lo > 1 {
            let mid = (lo + up) / 2;
            if xi < self.knots[mid] {
                up = mid;
            } else {
                lo = mid;
            }
        }
        debug_assert!(lo >= p && lo < n);
        lo
    }

    /// Basis values and derivatives at `xi`.
    ///
    /// Returns `(first, table)` where `table[d][j]` holds the `d`-th
    /// derivative of basis function `first + j` for `j = 0..=degree`.
    /// Standard triangular-table evaluation of the Cox-de Boor recursion;
    /// the `0/0 = 0` convention never materializes because the denominators
    /// below are knot spans containing the nonempty span of `xi`.
    pub fn eval_span(&self, xi: f64, max_deriv: usize) -> (usize, Vec<Vec<f64>>) {
        let p = self.degree;
        debug_assert!(max_deriv <= p);
        let span = self.find_span(xi);
        let u = &self.knots;

        // ndu[j][r]: triangular table of basis values and knot differences.
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = xi - u[span + 1 - j];
            right[j] = u[span + j] - xi;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![0.0; p + 1]; max_deriv + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }

        if max_deriv > 0 {
            let mut a = [vec![0.0; p + 1], vec![0.0; p + 1]];
            for r in 0..=p {
                let mut s1 = 0;
                let mut s2 = 1;
                a[0][0] = 1.0;
                for k in 1..=max_deriv {
                    let mut d = 0.0;
                    let rk = r as isize - k as isize;
                    let pk = p - k;
                    if r >= k {
                        a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                        d = a[s2][0] * ndu[rk as usize][pk];
                    }
                    let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                    let j2 = if r as isize - 1 <= pk as isize {
                        k - 1
                    } else {
                        p - r
                    };
                    for j in j1..=j2 {
                        a[s2][j] =
                            (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][(rk + j as isize) as usize];
                        d += a[s2][j] * ndu[(rk + j as isize) as usize][pk];
                    }
                    if r <= pk {
                        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                        d += a[s2][k] * ndu[r][pk];
                    }
                    ders[k][r] = d;
                    std::mem::swap(&mut s1, &mut s2);
                }
            }
            let mut factor = p as f64;
            for (k, row) in ders.iter_mut().enumerate().skip(1) {
                for v in row.iter_mut() {
                    *v *= factor;
                }
                factor *= (p - k) as f64;
            }
        }

        (span - p, ders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_uniform_layout() {
        let kv = KnotVector::open_uniform(2, 2);
        assert_eq!(kv.knots(), &[0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0]);
        assert_eq!(kv.n_basis(), 4);
        assert_eq!(kv.domain(), (0.0, 1.0));
        assert_eq!(kv.breakpoints(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn periodic_layout() {
        let kv = KnotVector::uniform_periodic(3, 4);
        assert_eq!(kv.n_basis(), 7);
        assert_eq!(kv.domain(), (0.0, 1.0));
        assert!((kv.knots()[0] + 0.75).abs() < 1e-15);
        assert!((kv.knots().last().unwrap() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_decreasing_knots() {
        let err = KnotVector::new(vec![0.0, 0.0, 0.5, 0.4, 1.0, 1.0], 1, KnotKind::Open);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_excess_interior_multiplicity() {
        // Interior knot 0.5 repeated twice with degree 1.
        let err = KnotVector::new(
            vec![0.0, 0.0, 0.5, 0.5, 1.0, 1.0],
            1,
            KnotKind::Open,
        );
        assert!(err.is_err());
    }

    #[test]
    fn span_lookup_clamps_at_ends() {
        let kv = KnotVector::open_uniform(2, 4);
        assert_eq!(kv.find_span(0.0), 2);
        assert_eq!(kv.find_span(1.0), 5);
        assert_eq!(kv.find_span(0.3), 3);
    }

    #[test]
    fn hat_functions_at_midspan() {
        // degree 1, knots {0, 0, 0.5, 1, 1}: both hats are 1/2 at 0.25.
        let kv = KnotVector::new(vec![0.0, 0.0, 0.5, 1.0, 1.0], 1, KnotKind::Open).unwrap();
        let (first, ders) = kv.eval_span(0.25, 0);
        assert_eq!(first, 0);
        assert!((ders[0][0] - 0.5).abs() < 1e-15);
        assert!((ders[0][1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_example_values() {
        let kv = KnotVector::open_uniform(2, 2);
        let (first, ders) = kv.eval_span(0.25, 0);
        assert_eq!(first, 0);
        assert!((ders[0][0] - 0.25).abs() < 1e-14);
        assert!((ders[0][1] - 0.625).abs() < 1e-14);
        assert!((ders[0][2] - 0.125).abs() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let kv = KnotVector::open_uniform(3, 5);
        let h = 1e-6;
        for &xi in &[0.11, 0.37, 0.52, 0.83] {
            let (_, d) = kv.eval_span(xi, 1);
            let (_, lo) = kv.eval_span(xi - h, 0);
            let (_, hi) = kv.eval_span(xi + h, 0);
            for j in 0..=3 {
                let fd = (hi[0][j] - lo[0][j]) / (2.0 * h);
                let rel = (d[1][j] - fd).abs() / d[1][j].abs().max(1.0);
                assert!(rel < 1e-5, "xi={xi} j={j}: {} vs {}", d[1][j], fd);
            }
        }
    }
}
