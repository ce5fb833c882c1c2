//! `rgeo` — tables of curvature operators, Jacobi fields, and geodesic
//! sphere/ball measures on naturally reductive homogeneous spaces.
//!
//! Exit codes, stable across all subcommands:
//!   0  success
//!   1  a validation or tolerance check failed (violations found, an oracle
//!      comparison disagreed, or a certified series bound was exceeded)
//!   2  usage or input error (unknown space, malformed spec file or flags)

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use reductive_geometry::algebra::{sp2_su2, AlgebraSpec};
use reductive_geometry::curvature::{
    jacobi_derivative, jacobi_operator, osculating_rank, OsculatingProfile,
};
use reductive_geometry::error::GeomError;
use reductive_geometry::jacobi::{rk4_jacobi, taylor_series};
use reductive_geometry::linalg::max_abs;
use reductive_geometry::matrixrep::table_from_matrices;
use reductive_geometry::volume::{sample_direction, sweep, sweep_to_json, write_sweep_csv, SweepConfig};

/// Tolerance used to certify Taylor evaluations of the Jacobi solution and
/// the Monte Carlo density; matches the solver cross-check tolerance.
const SERIES_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "rgeo",
    version,
    about = "Curvature operators, Jacobi fields, and geodesic sphere/ball measures\non naturally reductive homogeneous spaces, from Lie-algebra structure constants."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a bracket table: antisymmetry, Jacobi identity, reductive split,
    /// isotropy closure, natural reductivity, and ad-invariance of the metric.
    Validate {
        /// Builtin space name (sp2_su2, su2_biinv) or path to a JSON spec file.
        #[arg(long)]
        space: String,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the curvature operator, its first two covariant derivatives at
    /// t = 0, and the osculating rank along the geodesic of a direction.
    Curvature {
        /// Builtin space name or path to a JSON spec file.
        #[arg(long)]
        space: String,
        /// Comma-separated tangent components (normalized internally), or
        /// `random:<seed>` for a reproducible uniform direction.
        #[arg(long)]
        direction: String,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the Jacobi equation A'' + R_t A = 0 with A(0) = 0, A'(0) = I and
    /// tabulate A_t and det A_t over a radius grid.
    Jacobi {
        /// Builtin space name or path to a JSON spec file.
        #[arg(long)]
        space: String,
        /// Comma-separated tangent components (normalized internally), or
        /// `random:<seed>` for a reproducible uniform direction.
        #[arg(long)]
        direction: String,
        /// First radius of the grid (must be >= 0).
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        /// Last radius of the grid.
        #[arg(long)]
        t_stop: f64,
        /// Number of grid points (endpoints included).
        #[arg(long, default_value_t = 11)]
        t_steps: usize,
        /// Taylor truncation order for the series solution.
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// Integrate with fourth-order Runge-Kutta instead of the certified
        /// series (valid at any radius) and append series-comparison columns.
        #[arg(long)]
        rk: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        /// Write the table to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo geodesic-sphere areas and geodesic-ball volumes over a
    /// radius grid (volume column: trapezoidal integral of the area column).
    Volume {
        /// Builtin space name or path to a JSON spec file.
        #[arg(long)]
        space: String,
        /// First radius of the grid (must be >= 0).
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        /// Last radius of the grid.
        #[arg(long)]
        t_stop: f64,
        /// Number of grid points (endpoints included).
        #[arg(long, default_value_t = 11)]
        t_steps: usize,
        /// Monte Carlo sample count per grid point.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Random seed; the same seed reproduces the table bit for bit.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Taylor truncation order for the density series.
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        /// Write the table to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn tolerance(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

/// Maps library errors onto the exit-code contract: input/shape problems are
/// usage errors (2), certified-bound and unit-norm failures are tolerance
/// failures (1).
impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let code = match &e {
            GeomError::Truncation { .. }
            | GeomError::NonUnit { .. }
            | GeomError::UnsupportedSpace(_)
            | GeomError::Reconstruction { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { space, output } => cmd_validate(&space, output.as_deref()),
        Command::Curvature { space, direction, output } => {
            cmd_curvature(&space, &direction, output.as_deref())
        }
        Command::Jacobi {
            space,
            direction,
            t_start,
            t_stop,
            t_steps,
            order,
            rk,
            format,
            output,
        } => {
            let spec = resolve_space(&space)?;
            let v = parse_direction(&direction, spec.dim_m)?;
            let grid = build_grid(t_start, t_stop, t_steps)?;
            cmd_jacobi(&spec, &v, &grid, order, rk, format, output.as_deref())
        }
        Command::Volume {
            space,
            t_start,
            t_stop,
            t_steps,
            samples,
            seed,
            order,
            format,
            output,
        } => {
            let spec = resolve_space(&space)?;
            let grid = build_grid(t_start, t_stop, t_steps)?;
            cmd_volume(&spec, &grid, samples, seed, order, format, output.as_deref())
        }
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

/// Resolves `--space`: a builtin name first, otherwise a JSON spec file path.
fn resolve_space(space: &str) -> Result<AlgebraSpec, Failure> {
    match AlgebraSpec::builtin(space) {
        Ok(spec) => Ok(spec),
        Err(_) => {
            let path = Path::new(space);
            if path.exists() {
                Ok(AlgebraSpec::load(path)?)
            } else {
                Err(Failure::usage(format!(
                    "unknown space `{space}`: not a builtin (sp2_su2, su2_biinv) and not a \
                     readable spec file"
                )))
            }
        }
    }
}

/// Parses `--direction`: either `random:<seed>` or comma-separated reals in
/// the tangent basis, normalized to a unit vector.
fn parse_direction(text: &str, dim_m: usize) -> Result<Vec<f64>, Failure> {
    if let Some(seed_text) = text.strip_prefix("random:") {
        let seed: u64 = seed_text.parse().map_err(|_| {
            Failure::usage(format!("bad random-direction seed `{seed_text}`: expected an integer"))
        })?;
        return Ok(sample_direction(seed, 0, dim_m));
    }
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::usage(format!(
                "bad direction `{text}`: expected {dim_m} comma-separated reals or random:<seed>"
            ))
        })?;
    if parts.len() != dim_m {
        return Err(Failure::usage(format!(
            "direction has {} components; the tangent block is {dim_m}-dimensional",
            parts.len()
        )));
    }
    if parts.iter().any(|x| !x.is_finite()) {
        return Err(Failure::usage("direction components must be finite"));
    }
    let norm = parts.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-12 {
        return Err(Failure::usage("direction must be nonzero"));
    }
    Ok(parts.into_iter().map(|x| x / norm).collect())
}

/// Builds an inclusive, strictly increasing radius grid of `steps` points.
fn build_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if !start.is_finite() || !stop.is_finite() {
        return Err(Failure::usage("radius endpoints must be finite"));
    }
    if start < 0.0 {
        return Err(Failure::usage("radii must be nonnegative (--t-start >= 0)"));
    }
    if steps == 0 {
        return Err(Failure::usage("--t-steps must be at least 1"));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    if stop <= start {
        return Err(Failure::usage("--t-stop must exceed --t-start when --t-steps > 1"));
    }
    let n = steps - 1;
    Ok((0..steps)
        .map(|i| {
            if i == n {
                stop
            } else {
                start + (stop - start) * i as f64 / n as f64
            }
        })
        .collect())
}

/// Writes `content` to `output` if given, otherwise to stdout.
fn emit(output: Option<&Path>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            Failure::usage(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| Failure::usage(format!("stdout: {e}")))
        }
    }
}

fn format_matrix(m: &DMatrix<f64>, indent: &str) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        out.push_str(indent);
        for c in 0..m.ncols() {
            // Clamp noise below the print precision so exact zeros read as 0.
            let x = m[(r, c)];
            let x = if x.abs() < 5e-13 { 0.0 } else { x };
            out.push_str(&format!("{x:>14.8}"));
            if c + 1 < m.ncols() {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// validate

fn cmd_validate(space: &str, output: Option<&Path>) -> Result<(), Failure> {
    let spec = resolve_space(space)?;
    let report = spec.validate();
    let mut text = report.to_string();

    // The flagship builtin also carries an independent oracle: rebuild the
    // bracket table from its 4x4 matrix realization and demand exact match.
    let mut oracle_failed = false;
    if spec.name == "sp2_su2" {
        match table_from_matrices(1e-10) {
            Ok(reconstructed) if reconstructed == sp2_su2() && reconstructed == spec => {
                text.push_str(
                    "matrix oracle: table reconstructed from the matrix realization matches \
                     the builtin exactly (all 45 unordered pairs)\n",
                );
            }
            Ok(_) => {
                text.push_str("matrix oracle: reconstructed table DISAGREES with the builtin\n");
                oracle_failed = true;
            }
            Err(e) => {
                text.push_str(&format!("matrix oracle: reconstruction failed: {e}\n"));
                oracle_failed = true;
            }
        }
    }

    emit(output, &text)?;
    if !report.is_clean() {
        return Err(Failure::tolerance(format!(
            "validation of `{}` found {} violation(s)",
            report.space,
            report.violations.len()
        )));
    }
    if oracle_failed {
        return Err(Failure::tolerance("matrix-oracle comparison failed".to_string()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// curvature

fn cmd_curvature(space: &str, direction: &str, output: Option<&Path>) -> Result<(), Failure> {
    let spec = resolve_space(space)?;
    let v = parse_direction(direction, spec.dim_m)?;

    let r0 = jacobi_operator::<f64>(&spec, &v)?.to_dmatrix();
    let r1 = jacobi_derivative::<f64>(&spec, &v, 1)?.to_dmatrix();
    let r2 = jacobi_derivative::<f64>(&spec, &v, 2)?.to_dmatrix();
    let profile = osculating_rank(&spec, &v, 6, 1e-9)?;

    let mut text = String::new();
    text.push_str(&format!("space: {} (tangent dimension {})\n", spec.name, spec.dim_m));
    text.push_str(&format!(
        "direction: {}\n",
        v.iter().map(|x| format!("{x:.8}")).collect::<Vec<_>>().join(", ")
    ));
    text.push_str("curvature operator R at t = 0:\n");
    text.push_str(&format_matrix(&r0, "  "));
    text.push_str("first derivative R' at t = 0:\n");
    text.push_str(&format_matrix(&r1, "  "));
    text.push_str("second derivative R'' at t = 0:\n");
    text.push_str(&format_matrix(&r2, "  "));
    match profile {
        OsculatingProfile::LocallySymmetric => {
            text.push_str(
                "osculating rank: 0 (all derivatives vanish; the operator is constant along \
                 this geodesic)\n",
            );
        }
        OsculatingProfile::Rank { rank, coefficients, residual } => {
            let coeffs = coefficients
                .iter()
                .map(|c| format!("{c:.6}"))
                .collect::<Vec<_>>()
                .join(", ");
            text.push_str(&format!(
                "osculating rank: {rank} (derivative {} collapses onto derivatives 1..={rank} \
                 with coefficients [{coeffs}], residual {residual:.2e})\n",
                rank + 1
            ));
        }
        OsculatingProfile::Undetermined => {
            text.push_str("osculating rank: undetermined up to probe order 6\n");
        }
    }
    emit(output, &text)
}

// ---------------------------------------------------------------------------
// jacobi

fn cmd_jacobi(
    spec: &AlgebraSpec,
    v: &[f64],
    grid: &[f64],
    order: usize,
    rk: bool,
    format: OutFormat,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let d = spec.dim_m;
    let tensor = taylor_series(spec, v, order)?;

    // Primary solution per row: the certified series, or the integrator when
    // --rk is passed (valid at any radius; the series columns then become the
    // comparison pair).
    let mut rows: Vec<(f64, DMatrix<f64>, f64, Option<(f64, f64)>)> = Vec::new();
    if rk {
        let solutions = rk4_jacobi(spec, v, grid, 1e-3)?;
        for (&t, (a, _)) in grid.iter().zip(&solutions) {
            let series_a = tensor.evaluate(t);
            let series_det = series_a.determinant();
            let dev = max_abs(&(&series_a - a));
            rows.push((t, a.clone(), a.determinant(), Some((series_det, dev))));
        }
    } else {
        for &t in grid {
            let a = tensor.evaluate_checked(t, SERIES_TOL).map_err(|e| {
                let mut f = Failure::from(e);
                f.message.push_str(" (raise --order or pass --rk)");
                f
            })?;
            let det = a.determinant();
            rows.push((t, a, det, None));
        }
    }

    let text = match format {
        OutFormat::Csv => {
            let mut s = String::from("t");
            for i in 1..=d {
                for j in 1..=d {
                    s.push_str(&format!(",a_{i}_{j}"));
                }
            }
            s.push_str(",det");
            if rk {
                s.push_str(",series_det,series_dev");
            }
            s.push('\n');
            for (t, a, det, cmp) in &rows {
                s.push_str(&format!("{t}"));
                for i in 0..d {
                    for j in 0..d {
                        s.push_str(&format!(",{}", a[(i, j)]));
                    }
                }
                s.push_str(&format!(",{det}"));
                if let Some((sdet, dev)) = cmp {
                    s.push_str(&format!(",{sdet},{dev}"));
                }
                s.push('\n');
            }
            s
        }
        OutFormat::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(t, a, det, cmp)| {
                    let matrix: Vec<Vec<f64>> =
                        (0..d).map(|i| (0..d).map(|j| a[(i, j)]).collect()).collect();
                    let mut obj = serde_json::json!({ "t": t, "a": matrix, "det": det });
                    if let Some((sdet, dev)) = cmp {
                        obj["series_det"] = serde_json::json!(sdet);
                        obj["series_dev"] = serde_json::json!(dev);
                    }
                    obj
                })
                .collect();
            let doc = serde_json::json!({
                "space": spec.name,
                "direction": v,
                "order": order,
                "rk": rk,
                "rows": json_rows,
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| Failure::usage(format!("serialization: {e}")))?;
            s.push('\n');
            s
        }
    };
    emit(output, &text)
}

// ---------------------------------------------------------------------------
// volume

fn cmd_volume(
    spec: &AlgebraSpec,
    grid: &[f64],
    samples: u64,
    seed: u64,
    order: usize,
    format: OutFormat,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let cfg = SweepConfig {
        samples,
        seed,
        order,
        tail_tol: SERIES_TOL,
        ..SweepConfig::default()
    };
    let table = sweep(spec, &cfg, grid).map_err(|e| {
        let mut f = Failure::from(e);
        if f.code == 1 {
            f.message.push_str(" (raise --order or shrink the radius grid)");
        }
        f
    })?;
    let text = match format {
        OutFormat::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&table, &mut buf)
                .map_err(|e| Failure::usage(format!("serialization: {e}")))?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
        OutFormat::Json => {
            let mut s = sweep_to_json(&table)?;
            s.push('\n');
            s
        }
    };
    emit(output, &text)
}
