//! The quasi-Newton outer loops: solve on the current geometry, extract the
//! boundary update `w = dV.n`, move the boundary vertically and refit the
//! interior, until the update norm drops below the tolerance or stagnates.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use crate::collocation::{self, PointStrategy};
use crate::dofs::StripSpaces;
use crate::error::{Error, Result};
use crate::galerkin::{self, boundary_integral};
use crate::geometry::{BoundaryCurve, GeoMap, coons_refit};
use crate::problem::ProblemData;
use crate::quadrature::GaussLegendre;
use crate::spline::{l2_project, l2_project_pinned};

/// Which quasi-Newton scheme drives the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Coupled,
    Decoupled,
    Collocation,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Coupled => write!(f, "coupled"),
            Algorithm::Decoupled => write!(f, "decoupled"),
            Algorithm::Collocation => write!(f, "collocation"),
        }
    }
}

/// Initial boundary profile `x -> y(x)`.
pub type InitialBoundary = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Configuration of one solver run.
#[derive(Clone)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub degree: usize,
    /// Elements per direction `(nx, ny)`.
    pub mesh: (usize, usize),
    /// Stopping threshold on the L2(Gamma) norm of the boundary update.
    pub tol: f64,
    pub max_iter: usize,
    /// Collocation point strategy (ignored by the Galerkin schemes).
    pub point_strategy: PointStrategy,
    /// Starting boundary; defaults to the flat curve `y = 1`.
    pub initial_boundary: Option<InitialBoundary>,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, degree: usize, mesh: (usize, usize)) -> Self {
        SolverConfig {
            algorithm,
            degree,
            mesh,
            tol: 1e-10,
            max_iter: 50,
            point_strategy: PointStrategy::Greville,
            initial_boundary: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_points(mut self, strategy: PointStrategy) -> Self {
        self.point_strategy = strategy;
        self
    }

    pub fn with_initial_boundary(
        mut self,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.initial_boundary = Some(Arc::new(f));
        self
    }

    fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::invalid("solver requires degree >= 2"));
        }
        if self.mesh.0 < 1 || self.mesh.1 < 1 {
            return Err(Error::invalid("mesh must have at least one element"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.max_iter < 1 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        Ok(())
    }
}

impl std::fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverConfig")
            .field("algorithm", &self.algorithm)
            .field("degree", &self.degree)
            .field("mesh", &self.mesh)
            .field("tol", &self.tol)
            .field("max_iter", &self.max_iter)
            .field("point_strategy", &self.point_strategy)
            .finish()
    }
}

/// Per-iteration error record.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iter: usize,
    /// `|| u - h0 ||_{L2(Gamma)}` on the current boundary.
    pub dirichlet_error: f64,
    /// Vertical L2 distance to the exact boundary, when known.
    pub surface_error: Option<f64>,
    /// `|| w ||_{L2(Gamma)}` of the boundary update.
    pub update_norm: f64,
    pub wall_time_s: f64,
}

/// Terminal state of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Converged,
    Plateau,
    MaxIter,
    Failed { iteration: usize, reason: String },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Plateau => "plateau",
            Status::MaxIter => "max-iter",
            Status::Failed { .. } => "failed",
        }
    }

    /// Converged and plateau are the two acceptable terminal states.
    pub fn is_ok(&self) -> bool {
        matches!(self, Status::Converged | Status::Plateau)
    }
}

/// Configuration echo kept with every history.
#[derive(Debug, Clone)]
pub struct ConfigEcho {
    pub algorithm: Algorithm,
    pub degree: usize,
    pub mesh: (usize, usize),
    pub tol: f64,
    pub max_iter: usize,
    pub point_strategy: PointStrategy,
}

/// Full convergence history of one run.
#[derive(Debug, Clone)]
pub struct ConvergenceHistory {
    pub config: ConfigEcho,
    pub records: Vec<IterationRecord>,
    pub status: Status,
    /// Final boundary curve (absent when setup failed).
    pub final_curve: Option<BoundaryCurve>,
    /// Final geometry (absent when setup failed).
    pub final_geo: Option<GeoMap>,
}

impl ConvergenceHistory {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Serializes the history as CSV with one row per iteration.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "iter,dirichlet_error,surface_error,update_norm,wall_time_s")?;
        for r in &self.records {
            let surface = r
                .surface_error
                .map(|v| format!("{v:.12e}"))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{:.12e},{},{:.12e},{:.12e}",
                r.iter, r.dirichlet_error, surface, r.update_norm, r.wall_time_s
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// L2(Gamma) norm of a boundary-space coefficient vector on `curve`.
pub fn update_norm(spaces: &StripSpaces, curve: &BoundaryCurve, w: &[f64]) -> Result<f64> {
    let sq = boundary_integral(curve, |t, _, _| {
        let v = spaces.boundary.eval_coeffs(w, t, 0).expect("w evaluation");
        v * v
    })?;
    Ok(sq.max(0.0).sqrt())
}

/// `|| trace(u) - h0 ||_{L2(Gamma)}` with the arc-length measure.
pub fn dirichlet_error(
    spaces: &StripSpaces,
    u_coeffs: &[f64],
    curve: &BoundaryCurve,
    h0: f64,
) -> Result<f64> {
    let trace = spaces.trace_coeffs(u_coeffs);
    let sq = boundary_integral(curve, |t, _, _| {
        let v = spaces.boundary.eval_coeffs(&trace, t, 0).expect("trace evaluation") - h0;
        v * v
    })?;
    Ok(sq.max(0.0).sqrt())
}

/// Vertical L2 distance between the curve and the exact boundary
/// `y = 1 + offset(x)`, over the parameter interval.
pub fn surface_error(curve: &BoundaryCurve, offset: &dyn Fn(f64) -> f64) -> Result<f64> {
    let rule = GaussLegendre::new(curve.space().degree() + 1);
    let mut sq = 0.0;
    for (a, b) in curve.space().elements() {
        for (t, w) in rule.mapped(a, b) {
            let d = curve.y(t, 0)? - 1.0 - offset(t);
            sq += w * d * d;
        }
    }
    Ok(sq.max(0.0).sqrt())
}

/// Applies the vertical boundary update: the displacement `w / n_y`
/// (the quotient of two splines, in general not a spline itself) is
/// L2(Gamma)-projected onto the curve's coefficient space and added to the
/// `y` coefficients. Open (Dirichlet) curves keep their endpoints pinned by
/// projecting in the endpoint-constrained subspace.
pub fn update_boundary(
    spaces: &StripSpaces,
    curve: &BoundaryCurve,
    w: &[f64],
) -> Result<BoundaryCurve> {
    let displacement = |t: f64| {
        let wv = spaces.boundary.eval_coeffs(w, t, 0).expect("w evaluation");
        let arc = curve.arc_factor(t).expect("arc factor");
        // n_y = 1 / arc, so w / n_y = w * arc.
        wv * arc
    };
    let weight = |t: f64| curve.arc_factor(t).expect("arc factor");
    let delta = if curve.space().is_periodic() {
        l2_project(curve.space(), displacement, Some(&weight))?
    } else {
        l2_project_pinned(curve.space(), displacement, Some(&weight))?
    };
    curve.with_offset_coeffs(&delta)
}

/// One solve on the current geometry; returns the full field coefficients
/// and the boundary-update coefficients in the boundary space.
fn solve_step(
    algorithm: Algorithm,
    geo: &GeoMap,
    curve: &BoundaryCurve,
    problem: &ProblemData,
    spaces: &StripSpaces,
    points: Option<&collocation::CollocationPointSet>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    match algorithm {
        Algorithm::Coupled => {
            let sys = galerkin::assemble_coupled(geo, curve, problem, spaces)?;
            galerkin::solve_coupled(&sys)
        }
        Algorithm::Decoupled => {
            let sys = galerkin::assemble_decoupled(geo, curve, problem, spaces)?;
            let u = galerkin::solve_decoupled(&sys)?;
            let trace = spaces.trace_coeffs(&u);
            let update = |t: f64| {
                let uv = spaces
                    .boundary
                    .eval_coeffs(&trace, t, 0)
                    .expect("trace evaluation");
                let p = curve.point(t).expect("curve point");
                (problem.h0 - uv) / (problem.g)(p[0], p[1])
            };
            let weight = |t: f64| curve.arc_factor(t).expect("arc factor");
            let w = if spaces.boundary.is_periodic() {
                l2_project(&spaces.boundary, update, Some(&weight))?
            } else {
                l2_project_pinned(&spaces.boundary, update, Some(&weight))?
            };
            Ok((u, w))
        }
        Algorithm::Collocation => {
            let pts = points.ok_or_else(|| Error::Internal("missing collocation points".into()))?;
            let sys = collocation::assemble_collocated(geo, curve, problem, spaces, pts)?;
            let u = collocation::solve_collocated(&sys)?;
            let w = collocation::collocated_boundary_update(spaces, &u, curve, problem, &pts.top)?;
            Ok((u, w))
        }
    }
}

/// Runs the configured quasi-Newton iteration on `problem`.
///
/// Returns `Err` only for invalid configurations; runtime failures (geometry
/// fold-over, loss of positivity of `g`, singular systems) terminate the run
/// with `Status::Failed` carrying the iteration index.
pub fn run(config: &SolverConfig, problem: &ProblemData) -> Result<ConvergenceHistory> {
    config.validate()?;
    let (nx, ny) = config.mesh;
    let spaces = StripSpaces::new(config.degree, nx, ny, problem.bc_kind)?;
    let echo = ConfigEcho {
        algorithm: config.algorithm,
        degree: config.degree,
        mesh: config.mesh,
        tol: config.tol,
        max_iter: config.max_iter,
        point_strategy: config.point_strategy,
    };

    let mut history = ConvergenceHistory {
        config: echo,
        records: Vec::new(),
        status: Status::MaxIter,
        final_curve: None,
        final_geo: None,
    };

    let fail = |history: &mut ConvergenceHistory, iteration: usize, e: Error| {
        history.status = Status::Failed {
            iteration,
            reason: e.to_string(),
        };
    };

    // Setup: initial curve and geometry.
    let mut curve = match &config.initial_boundary {
        None => BoundaryCurve::flat(spaces.boundary.clone(), 1.0),
        Some(f) => match BoundaryCurve::from_fn(spaces.boundary.clone(), |x| f(x)) {
            Ok(c) => c,
            Err(e) => {
                fail(&mut history, 0, e);
                return Ok(history);
            }
        },
    };
    let mut geo = match GeoMap::strip(config.degree, nx, ny, &curve) {
        Ok(g) => g,
        Err(e) => {
            fail(&mut history, 0, e);
            return Ok(history);
        }
    };
    let points = if config.algorithm == Algorithm::Collocation {
        Some(collocation::collocation_points(config.point_strategy, &spaces)?)
    } else {
        None
    };

    for iter in 1..=config.max_iter {
        let t0 = Instant::now();
        let (u, w) = match solve_step(
            config.algorithm,
            &geo,
            &curve,
            problem,
            &spaces,
            points.as_ref(),
        ) {
            Ok(x) => x,
            Err(e) => {
                fail(&mut history, iter, e);
                break;
            }
        };

        let norm = match update_norm(&spaces, &curve, &w) {
            Ok(n) => n,
            Err(e) => {
                fail(&mut history, iter, e);
                break;
            }
        };
        let dir_err = match dirichlet_error(&spaces, &u, &curve, problem.h0) {
            Ok(v) => v,
            Err(e) => {
                fail(&mut history, iter, e);
                break;
            }
        };
        let surf_err = match &problem.exact_boundary {
            Some(exact) => match surface_error(&curve, &**exact) {
                Ok(v) => Some(v),
                Err(e) => {
                    fail(&mut history, iter, e);
                    break;
                }
            },
            None => None,
        };
        history.records.push(IterationRecord {
            iter,
            dirichlet_error: dir_err,
            surface_error: surf_err,
            update_norm: norm,
            wall_time_s: t0.elapsed().as_secs_f64(),
        });

        if norm <= config.tol {
            history.status = Status::Converged;
            break;
        }
        if stagnated(&history.records) {
            history.status = Status::Plateau;
            break;
        }

        match update_boundary(&spaces, &curve, &w).and_then(|c| {
            let g = coons_refit(&geo, &c)?;
            Ok((c, g))
        }) {
            Ok((c, g)) => {
                curve = c;
                geo = g;
            }
            Err(e) => {
                fail(&mut history, iter, e);
                break;
            }
        }
    }

    history.final_curve = Some(curve);
    history.final_geo = Some(geo);
    Ok(history)
}

/// Plateau detection: the update norm failed to decrease by at least 1%
/// over each of the last three steps.
fn stagnated(records: &[IterationRecord]) -> bool {
    if records.len() < 4 {
        return false;
    }
    let tail = &records[records.len() - 4..];
    tail.windows(2)
        .all(|w| w[1].update_norm > 0.99 * w[0].update_norm)
}
