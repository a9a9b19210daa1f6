//! Benchmark harness: runs the free boundary solvers on the built-in test
//! problems and writes CSV histories, SVG convergence plots and geometry
//! dumps.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use fbp_core::benchmarks;
use fbp_core::collocation::PointStrategy;
use fbp_core::solver::{Algorithm, ConvergenceHistory, SolverConfig, run};
use fbp_core::svg::{Series, write_log_plot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Coupled,
    Decoupled,
    Collocation,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PointsArg {
    Greville,
    Csp,
}

#[derive(Parser, Debug)]
#[command(
    name = "fbp",
    version,
    about = "Isogeometric quasi-Newton solvers for free boundary problems on a strip"
)]
struct Cli {
    /// Benchmark test case: 1 (parabolic, Dirichlet), 2 (sinusoidal,
    /// Dirichlet), 3 (sinusoidal, periodic)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    test: u8,

    /// Scheme to run
    #[arg(long, value_enum, default_value_t = AlgorithmArg::All)]
    algorithm: AlgorithmArg,

    /// Spline degree in both directions
    #[arg(long, default_value_t = 3)]
    degree: usize,

    /// Comma-separated square mesh sizes (elements per direction)
    #[arg(long, value_delimiter = ',', default_value = "16")]
    mesh: Vec<usize>,

    /// Stopping tolerance on the boundary-update norm
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Iteration cap per run
    #[arg(long, default_value_t = 50)]
    max_iter: usize,

    /// Collocation point strategy
    #[arg(long, value_enum, default_value_t = PointsArg::Greville)]
    points: PointsArg,

    /// Output directory for CSV/SVG/geometry files
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also write a log-scale SVG convergence plot per run
    #[arg(long)]
    svg: bool,

    /// Also write the final geometry of each run as plain text
    #[arg(long)]
    dump_geometry: bool,

    /// Run independent configurations on this many threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

struct RunOutcome {
    algorithm: Algorithm,
    mesh: usize,
    history: ConvergenceHistory,
}

fn algorithms_of(arg: AlgorithmArg) -> Vec<Algorithm> {
    match arg {
        AlgorithmArg::Coupled => vec![Algorithm::Coupled],
        AlgorithmArg::Decoupled => vec![Algorithm::Decoupled],
        AlgorithmArg::Collocation => vec![Algorithm::Collocation],
        AlgorithmArg::All => vec![
            Algorithm::Coupled,
            Algorithm::Decoupled,
            Algorithm::Collocation,
        ],
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(all_ok) => {
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("fbp: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, String> {
    if cli.mesh.is_empty() {
        return Err("at least one mesh size is required".into());
    }
    fs::create_dir_all(&cli.out)
        .map_err(|e| format!("cannot create output directory {}: {e}", cli.out.display()))?;

    let (problem, _) = benchmarks::problem_by_number(cli.test)
        .ok_or_else(|| format!("unknown test {}", cli.test))?;
    let strategy = match cli.points {
        PointsArg::Greville => PointStrategy::Greville,
        PointsArg::Csp => PointStrategy::Csp,
    };

    let runs: Vec<(Algorithm, usize)> = algorithms_of(cli.algorithm)
        .into_iter()
        .flat_map(|a| cli.mesh.iter().map(move |&m| (a, m)))
        .collect();

    let run_one = |&(algorithm, mesh): &(Algorithm, usize)| -> Result<RunOutcome, String> {
        let config = SolverConfig::new(algorithm, cli.degree, (mesh, mesh))
            .with_tol(cli.tol)
            .with_max_iter(cli.max_iter)
            .with_points(strategy);
        let history = run(&config, &problem).map_err(|e| {
            format!("test {} {} mesh {}x{}: {e}", cli.test, algorithm, mesh, mesh)
        })?;
        Ok(RunOutcome { algorithm, mesh, history })
    };

    let outcomes: Vec<Result<RunOutcome, String>> = if cli.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .map_err(|e| format!("thread pool: {e}"))?;
        pool.install(|| runs.par_iter().map(run_one).collect())
    } else {
        runs.iter().map(run_one).collect()
    };

    let mut all_ok = true;
    let mut summary = String::from(
        "test,algorithm,mesh,degree,points,status,iterations,final_dirichlet_error,\
         final_surface_error,final_update_norm,total_wall_time_s,mean_iteration_s\n",
    );

    for outcome in outcomes {
        let RunOutcome { algorithm, mesh, history } = outcome?;
        let stem = format!("test{}_{}_{}", cli.test, algorithm, mesh);

        let csv_path = cli.out.join(format!("{stem}.csv"));
        fs::write(&csv_path, history.to_csv_string())
            .map_err(|e| format!("writing {}: {e}", csv_path.display()))?;

        if cli.svg {
            let series = [
                Series {
                    name: "dirichlet error",
                    points: history
                        .records
                        .iter()
                        .map(|r| (r.iter as f64, r.dirichlet_error))
                        .collect(),
                },
                Series {
                    name: "surface error",
                    points: history
                        .records
                        .iter()
                        .filter_map(|r| r.surface_error.map(|v| (r.iter as f64, v)))
                        .collect(),
                },
                Series {
                    name: "update norm",
                    points: history
                        .records
                        .iter()
                        .map(|r| (r.iter as f64, r.update_norm))
                        .collect(),
                },
            ];
            let mut buf = Vec::new();
            write_log_plot(&mut buf, &stem, &series).map_err(|e| e.to_string())?;
            let svg_path = cli.out.join(format!("{stem}.svg"));
            fs::write(&svg_path, buf).map_err(|e| format!("writing {}: {e}", svg_path.display()))?;
        }

        if cli.dump_geometry && let Some(geo) = &history.final_geo {
            let mut buf = Vec::new();
            geo.dump(&mut buf).map_err(|e| e.to_string())?;
            let geo_path = cli.out.join(format!("{stem}.geo.txt"));
            fs::write(&geo_path, buf)
                .map_err(|e| format!("writing {}: {e}", geo_path.display()))?;
        }

        let iterations = history.records.len();
        let total_time: f64 = history.records.iter().map(|r| r.wall_time_s).sum();
        let mean_time = if iterations > 0 { total_time / iterations as f64 } else { 0.0 };
        let last = history.last();
        let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6e},{:.6e}\n",
            cli.test,
            algorithm,
            mesh,
            cli.degree,
            strategy,
            history.status.label(),
            iterations,
            fmt_opt(last.map(|r| r.dirichlet_error)),
            fmt_opt(last.and_then(|r| r.surface_error)),
            fmt_opt(last.map(|r| r.update_norm)),
            total_time,
            mean_time,
        ));

        let final_err = last
            .map(|r| format!("{:.3e}", r.dirichlet_error))
            .unwrap_or_else(|| "-".into());
        println!(
            "test {} {:<12} mesh {:>3}x{:<3} degree {}: {:<9} in {:>3} iterations, dirichlet error {}",
            cli.test, algorithm.to_string(), mesh, mesh, cli.degree,
            history.status.label(), iterations, final_err
        );

        if !history.status.is_ok() {
            all_ok = false;
            eprintln!(
                "fbp: run failed: test {} {} mesh {}x{} degree {} ({:?})",
                cli.test, algorithm, mesh, mesh, cli.degree, history.status
            );
        }
    }

    let summary_path = cli.out.join("summary.csv");
    fs::write(&summary_path, summary)
        .map_err(|e| format!("writing {}: {e}", summary_path.display()))?;

    Ok(all_ok)
}
