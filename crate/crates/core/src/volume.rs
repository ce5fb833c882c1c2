//! Geodesic-sphere area and geodesic-ball volume by Monte Carlo averaging of
//! the Jacobi volume density over random unit directions, plus a power-series
//! expansion of the sphere area around t = 0. Sampling is deterministic: the
//! k-th sample is drawn from its own counter-mode RNG stream, and parallel
//! chunks are combined in a fixed order, so results are bit-identical across
//! thread counts.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::AlgebraSpec;
use crate::curvature::{closed_form_jacobi, FloatBracketTable};
use crate::error::{GeomError, Result};
use crate::jacobi::{taylor_from_closed_form, TaylorTensor};
use crate::linalg::max_abs;
use crate::series::{det_series, Tps};

/// Surface area of the unit (dim−1)-sphere in R^dim: 2 π^{dim/2} / Γ(dim/2),
/// with the half-integer Γ values built by the recursion Γ(x+1) = x Γ(x).
pub fn unit_sphere_area(dim: usize) -> f64 {
    assert!(dim >= 1);
    let pi = std::f64::consts::PI;
    // Γ(dim/2) from Γ(1) = 1 or Γ(1/2) = √π.
    let mut gamma = if dim % 2 == 0 { 1.0 } else { pi.sqrt() };
    let mut x = if dim % 2 == 0 { 1.0 } else { 0.5 };
    while x + 0.5 < dim as f64 / 2.0 + 0.25 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * pi.powf(dim as f64 / 2.0) / gamma
}

/// Volume density of the exponential map at arc length t along one
/// direction: |det(A_t / t)|, continued by 1 at t = 0. The absolute value
/// keeps the density meaningful as an area density past conjugate points.
pub fn theta_from_tensor(tensor: &TaylorTensor, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let a = tensor.evaluate(t);
    (a / t).determinant().abs()
}

/// Monte Carlo sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    /// Number of random unit directions.
    pub samples: u64,
    /// Base seed; sample k uses RNG stream k of this seed.
    pub seed: u64,
    /// Taylor order of the per-direction Jacobi solution.
    pub order: usize,
    /// Largest tolerated per-direction truncation-tail estimate at the
    /// largest requested t.
    pub tail_tol: f64,
    /// Samples per parallel work unit (fixed so the reduction order, and
    /// hence the result, never depends on thread count).
    pub chunk_size: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 0,
            order: 40,
            tail_tol: 1e-9,
            chunk_size: 4096,
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// The k-th random unit tangent direction for a seed: `dim` independent
/// standard normals from stream k, normalized.
pub fn sample_direction(seed: u64, index: u64, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Accumulated per-output sums over all samples.
struct McMoments {
    n: u64,
    sum: Vec<f64>,
    sumsq: Vec<f64>,
}

impl McMoments {
    fn estimates(&self) -> Vec<McEstimate> {
        let n = self.n as f64;
        self.sum
            .iter()
            .zip(&self.sumsq)
            .map(|(&s, &ss)| {
                let mean = s / n;
                let var = if self.n > 1 {
                    ((ss / n - mean * mean) * n / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                McEstimate {
                    mean,
                    stderr: (var / n).sqrt(),
                }
            })
            .collect()
    }
}

/// Runs the per-direction closure over all samples: each sample gets a fresh
/// direction, its closed-form operator family, and the Taylor solution, and
/// writes `out_dim` statistics. The first direction is cross-checked against
/// the bracket-chain derivative path, which also surfaces unsupported-space
/// errors before any long sweep starts.
fn run_mc<F>(
    spec: &AlgebraSpec,
    cfg: &SweepConfig,
    certify_t: Option<f64>,
    out_dim: usize,
    per_sample: F,
) -> Result<McMoments>
where
    F: Fn(&TaylorTensor, &mut [f64]) -> Result<()> + Sync,
{
    if cfg.samples == 0 {
        return Err(GeomError::BadOrder("at least one Monte Carlo sample"));
    }
    let table = FloatBracketTable::new(spec);
    // One-time bridge between the fast commutator path and the audited
    // bracket-chain path.
    {
        let v0 = sample_direction(cfg.seed, 0, spec.dim_m);
        let fast = table.closed_form(&v0);
        let slow = closed_form_jacobi(spec, &v0, 1e-9)?;
        let defect = max_abs(&(&fast.constant - &slow.constant))
            .max(max_abs(&(&fast.sin_coeff - &slow.sin_coeff)))
            .max(max_abs(&(&fast.cos_coeff - &slow.cos_coeff)));
        if defect > 1e-8 {
            return Err(GeomError::UnsupportedSpace(format!(
                "commutator and bracket-chain derivative paths disagree by {defect:.3e}"
            )));
        }
    }

    let n_chunks = cfg.samples.div_ceil(cfg.chunk_size);
    let partials: Result<Vec<McMoments>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| -> Result<McMoments> {
            let lo = chunk * cfg.chunk_size;
            let hi = (lo + cfg.chunk_size).min(cfg.samples);
            let mut acc = McMoments {
                n: 0,
                sum: vec![0.0; out_dim],
                sumsq: vec![0.0; out_dim],
            };
            let mut out = vec![0.0; out_dim];
            for k in lo..hi {
                let v = sample_direction(cfg.seed, k, spec.dim_m);
                let cf = table.closed_form(&v);
                let tensor = taylor_from_closed_form(&cf, cfg.order)?;
                if let Some(t_max) = certify_t {
                    let bound = tensor.tail_bound(t_max).unwrap_or(f64::INFINITY);
                    if bound > cfg.tail_tol {
                        return Err(GeomError::Truncation {
                            t: t_max,
                            bound,
                            tol: cfg.tail_tol,
                        });
                    }
                }
                out.fill(0.0);
                per_sample(&tensor, &mut out)?;
                acc.n += 1;
                for (i, &x) in out.iter().enumerate() {
                    acc.sum[i] += x;
                    acc.sumsq[i] += x * x;
                }
            }
            Ok(acc)
        })
        .collect();
    // Combine partial sums in chunk order (deterministic reduction).
    let mut total = McMoments {
        n: 0,
        sum: vec![0.0; out_dim],
        sumsq: vec![0.0; out_dim],
    };
    for part in partials? {
        total.n += part.n;
        for i in 0..out_dim {
            total.sum[i] += part.sum[i];
            total.sumsq[i] += part.sumsq[i];
        }
    }
    Ok(total)
}

/// Direction-averaged volume density θ at each requested arc length.
pub fn theta_stats(spec: &AlgebraSpec, cfg: &SweepConfig, ts: &[f64]) -> Result<Vec<McEstimate>> {
    let t_max = ts.iter().cloned().fold(0.0f64, f64::max);
    let moments = run_mc(spec, cfg, Some(t_max), ts.len(), |tensor, out| {
        for (slot, &t) in out.iter_mut().zip(ts) {
            *slot = theta_from_tensor(tensor, t);
        }
        Ok(())
    })?;
    Ok(moments.estimates())
}

/// Area of the geodesic sphere of radius t:
/// vol(S^{d−1}) · t^{d−1} · mean_u θ_u(t).
pub fn sphere_area(spec: &AlgebraSpec, cfg: &SweepConfig, t: f64) -> Result<McEstimate> {
    let stats = theta_stats(spec, cfg, &[t])?;
    let scale = unit_sphere_area(spec.dim_m) * t.powi(spec.dim_m as i32 - 1);
    Ok(McEstimate {
        mean: scale * stats[0].mean,
        stderr: scale.abs() * stats[0].stderr,
    })
}

/// Quadrature rule for the radial integral of the ball volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quadrature {
    /// Composite Simpson with an odd number of equally spaced nodes.
    Simpson { nodes: usize },
    /// Gauss–Legendre with the given number of nodes.
    GaussLegendre { nodes: usize },
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::Simpson { nodes: 201 }
    }
}

/// Nodes and weights on [0, r].
fn quadrature_rule(quad: Quadrature, r: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    match quad {
        Quadrature::Simpson { nodes } => {
            if nodes < 3 || nodes % 2 == 0 {
                return Err(GeomError::BadOrder(
                    "Simpson quadrature needs an odd node count of at least 3",
                ));
            }
            let h = r / (nodes - 1) as f64;
            let ts: Vec<f64> = (0..nodes).map(|i| i as f64 * h).collect();
            let ws: Vec<f64> = (0..nodes)
                .map(|i| {
                    let w = if i == 0 || i == nodes - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * h / 3.0
                })
                .collect();
            Ok((ts, ws))
        }
        Quadrature::GaussLegendre { nodes } => {
            if nodes < 1 {
                return Err(GeomError::BadOrder(
                    "Gauss-Legendre quadrature needs at least one node",
                ));
            }
            let (xs, ws) = gauss_legendre(nodes);
            let ts = xs.iter().map(|x| r * (x + 1.0) / 2.0).collect();
            let ws = ws.iter().map(|w| w * r / 2.0).collect();
            Ok((ts, ws))
        }
    }
}

/// Gauss–Legendre nodes/weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' at x via the three-term recurrence.
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Volume of the geodesic ball of radius r: the radial integral of the
/// sphere area, with the direction average and the quadrature fused so the
/// standard error refers to the volume itself.
pub fn ball_volume(
    spec: &AlgebraSpec,
    cfg: &SweepConfig,
    radius: f64,
    quad: Quadrature,
) -> Result<McEstimate> {
    let (ts, ws) = quadrature_rule(quad, radius)?;
    let d = spec.dim_m;
    let scale = unit_sphere_area(d);
    // Per-sample volume: Σ w_i t_i^{d−1} θ(t_i), scaled by the sphere factor.
    let weights: Vec<f64> = ts
        .iter()
        .zip(&ws)
        .map(|(&t, &w)| scale * w * t.powi(d as i32 - 1))
        .collect();
    let moments = run_mc(spec, cfg, Some(radius), 1, |tensor, out| {
        let mut acc = 0.0;
        for (&t, &w) in ts.iter().zip(&weights) {
            if w == 0.0 {
                continue;
            }
            acc += w * theta_from_tensor(tensor, t);
        }
        out[0] = acc;
        Ok(())
    })?;
    Ok(moments.estimates()[0])
}

/// One row of a radius sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub theta_mean: f64,
    pub theta_stderr: f64,
    pub area: f64,
    pub volume: f64,
}

/// A full radius sweep with its configuration echo.
#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub space: String,
    pub seed: u64,
    pub samples: u64,
    pub order: usize,
    pub rows: Vec<SweepRow>,
}

/// Sweeps the density, sphere area, and cumulative ball volume over an
/// ascending grid of radii. The volume column integrates the area column by
/// the trapezoidal rule anchored at (0, 0); for a certified ball volume at a
/// single radius use [`ball_volume`].
pub fn sweep(spec: &AlgebraSpec, cfg: &SweepConfig, ts: &[f64]) -> Result<SweepTable> {
    if ts.is_empty() {
        return Err(GeomError::BadOrder("sweep needs at least one radius"));
    }
    if ts.windows(2).any(|w| w[1] <= w[0]) || ts[0] < 0.0 {
        return Err(GeomError::BadOrder(
            "sweep radii must be nonnegative and strictly increasing",
        ));
    }
    let stats = theta_stats(spec, cfg, ts)?;
    let d = spec.dim_m;
    let sphere = unit_sphere_area(d);
    let mut rows = Vec::with_capacity(ts.len());
    let mut volume = 0.0f64;
    let mut prev_t = 0.0f64;
    let mut prev_area = 0.0f64;
    for (&t, est) in ts.iter().zip(&stats) {
        let scale = sphere * t.powi(d as i32 - 1);
        let area = scale * est.mean;
        volume += 0.5 * (t - prev_t) * (area + prev_area);
        rows.push(SweepRow {
            t,
            theta_mean: est.mean,
            theta_stderr: est.stderr,
            area,
            volume,
        });
        prev_t = t;
        prev_area = area;
    }
    Ok(SweepTable {
        space: spec.name.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        order: cfg.order,
        rows,
    })
}

/// Direction-averaged power series of the sphere area around t = 0.
///
/// `coeffs[j]` estimates the sphere average of the degree-(dim_m + j)
/// coefficient of det A_t (equivalently the degree-j coefficient of the
/// θ series); only even j survive averaging, because the solution along the
/// antipodal direction is A^{−u}(t) = −A^{u}(−t), which flips the sign of
/// every odd coefficient.
#[derive(Clone, Debug)]
pub struct AreaSeries {
    pub dim_m: usize,
    pub coeffs: Vec<McEstimate>,
}

impl AreaSeries {
    /// Evaluates the truncated series
    /// vol(S^{d−1}) t^{d−1} Σ_j coeffs[j] t^j. Valid below the first
    /// conjugate radius, where the density needs no absolute value.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.mean;
        }
        unit_sphere_area(self.dim_m) * t.powi(self.dim_m as i32 - 1) * acc
    }

    /// The estimated sphere average of the degree-n coefficient of det A_t.
    pub fn det_coefficient(&self, n: usize) -> Option<&McEstimate> {
        n.checked_sub(self.dim_m).and_then(|j| self.coeffs.get(j))
    }
}

/// Monte Carlo estimate of the sphere-area series: per direction, det A_t is
/// expanded as a truncated power series (through θ-degree `theta_order`) and
/// its coefficients are averaged over directions.
pub fn area_series(
    spec: &AlgebraSpec,
    cfg: &SweepConfig,
    theta_order: usize,
) -> Result<AreaSeries> {
    if cfg.order < theta_order + 1 {
        return Err(GeomError::InsufficientOrder {
            needed: theta_order + 1,
            have: cfg.order,
        });
    }
    let d = spec.dim_m;
    let moments = run_mc(spec, cfg, None, theta_order + 1, |tensor, out| {
        // A/t as a matrix of series in t: entry (i,j) = Σ_k C_k[i,j] t^{k−1}.
        let mut m = vec![vec![Tps::zero(theta_order); d]; d];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 1..=(theta_order + 1).min(tensor.order()) {
                    entry.set_coeff(k - 1, tensor.coeff(k)[(i, j)]);
                }
            }
        }
        let det = det_series(&m).ok_or(GeomError::BadOrder(
            "series determinant lost its unit leading coefficient",
        ))?;
        out.copy_from_slice(&det.coeffs()[..theta_order + 1]);
        Ok(())
    })?;
    Ok(AreaSeries {
        dim_m: d,
        coeffs: moments.estimates(),
    })
}

/// Writes a sweep as CSV with the fixed header
/// `t,theta_mean,theta_stderr,area,volume`.
pub fn write_sweep_csv<W: std::io::Write>(table: &SweepTable, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,theta_mean,theta_stderr,area,volume")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.t, r.theta_mean, r.theta_stderr, r.area, r.volume
        )?;
    }
    Ok(())
}

/// Serializes a sweep (rows plus configuration echo) as pretty JSON.
pub fn sweep_to_json(table: &SweepTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(table)?)
}

/// Flat d-ball volume vol(S^{d−1}) r^d / d, the zero-curvature reference.
pub fn flat_ball_volume(dim: usize, r: f64) -> f64 {
    unit_sphere_area(dim) * r.powi(dim as i32) / dim as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sp2_su2, su2_biinv};
    use std::f64::consts::PI;

    fn su2_cfg(samples: u64) -> SweepConfig {
        SweepConfig {
            samples,
            seed: 42,
            order: 30,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn unit_sphere_areas_match_closed_forms() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(7) - 16.0 * PI.powi(3) / 15.0).abs() < 1e-12);
    }

    #[test]
    fn density_matches_constant_curvature_closed_form() {
        // On the round sphere of curvature ¼, θ(t) = (sin(t/2)/(t/2))²
        // independently of direction.
        let spec = su2_biinv();
        let cfg = su2_cfg(50);
        for &t in &[0.5f64, 1.0, 2.0, 3.0] {
            let stats = theta_stats(&spec, &cfg, &[t]).unwrap();
            let expect = ((t / 2.0).sin() / (t / 2.0)).powi(2);
            assert!((stats[0].mean - expect).abs() < 1e-10, "t = {t}");
            // The integrand is direction-independent; the estimated spread
            // only reflects the accumulation rounding floor.
            assert!(stats[0].stderr < 1e-8, "zero-variance integrand");
        }
    }

    #[test]
    fn sphere_area_and_ball_volume_on_the_round_sphere() {
        let spec = su2_biinv();
        let cfg = su2_cfg(100);
        let t = 2.0f64;
        let area = sphere_area(&spec, &cfg, t).unwrap();
        let expect = 16.0 * PI * (t / 2.0).sin().powi(2);
        assert!((area.mean - expect).abs() < 1e-9);
        let vol = ball_volume(&spec, &cfg, t, Quadrature::default()).unwrap();
        let expect = 8.0 * PI * (t - t.sin());
        assert!(
            (vol.mean - expect).abs() < 1e-6,
            "got {} want {expect}",
            vol.mean
        );
        assert!(vol.stderr < 1e-6);
        // Gauss–Legendre agrees with Simpson.
        let vol_gl = ball_volume(&spec, &cfg, t, Quadrature::GaussLegendre { nodes: 48 }).unwrap();
        assert!((vol_gl.mean - expect).abs() < 1e-9);
    }

    #[test]
    fn flat_space_reproduces_euclidean_formulas() {
        let spec = AlgebraSpec::flat(3);
        let cfg = su2_cfg(20);
        let r = 1.7f64;
        let area = sphere_area(&spec, &cfg, r).unwrap();
        assert!((area.mean - 4.0 * PI * r * r).abs() < 1e-10);
        let vol = ball_volume(&spec, &cfg, r, Quadrature::default()).unwrap();
        assert!((vol.mean - 4.0 / 3.0 * PI * r.powi(3)).abs() < 1e-9);
        assert!((flat_ball_volume(3, r) - 4.0 / 3.0 * PI * r.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn sweeps_are_bit_identical_and_seed_sensitive() {
        let spec = sp2_su2();
        let cfg = SweepConfig {
            samples: 300,
            seed: 7,
            order: 24,
            tail_tol: 1e-6,
            chunk_size: 64, // several parallel chunks
            ..SweepConfig::default()
        };
        let ts = [0.5, 1.0, 1.5];
        let a = sweep(&spec, &cfg, &ts).unwrap();
        let b = sweep(&spec, &cfg, &ts).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.theta_mean.to_bits(), rb.theta_mean.to_bits());
            assert_eq!(ra.theta_stderr.to_bits(), rb.theta_stderr.to_bits());
            assert_eq!(ra.volume.to_bits(), rb.volume.to_bits());
        }
        let other = sweep(
            &spec,
            &SweepConfig {
                seed: 8,
                ..cfg.clone()
            },
            &ts,
        )
        .unwrap();
        assert_ne!(
            a.rows[0].theta_mean.to_bits(),
            other.rows[0].theta_mean.to_bits()
        );
        // Grid validation.
        assert!(sweep(&spec, &cfg, &[]).is_err());
        assert!(sweep(&spec, &cfg, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn series_expansion_matches_pointwise_density() {
        let spec = sp2_su2();
        let cfg = SweepConfig {
            samples: 40,
            seed: 3,
            order: 24,
            ..SweepConfig::default()
        };
        let series = area_series(&spec, &cfg, 14).unwrap();
        // Zeroth coefficient is exactly 1 (A/t → I), odd coefficients have
        // zero mean pointwise for the first two (trace arguments).
        assert!((series.coeffs[0].mean - 1.0).abs() < 1e-12);
        assert!(series.coeffs[1].mean.abs() < 1e-12);
        assert!(series.coeffs[3].mean.abs() < 1e-12);
        assert!(series.det_coefficient(7).is_some());
        assert!(series.det_coefficient(6).is_none());
        // Series evaluation tracks the Monte Carlo density on the same seed.
        for &t in &[0.25f64, 0.5] {
            let area = sphere_area(&spec, &cfg, t).unwrap();
            let rel = (series.eval(t) - area.mean).abs() / area.mean;
            assert!(rel < 1e-6, "t = {t}: relative gap {rel}");
        }
        assert!(area_series(&spec, &SweepConfig { order: 10, ..cfg }, 14).is_err());
    }

    #[test]
    fn csv_and_json_writers_emit_the_schema() {
        let spec = su2_biinv();
        let cfg = su2_cfg(10);
        let table = sweep(&spec, &cfg, &[0.5, 1.0]).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,theta_mean,theta_stderr,area,volume"));
        assert_eq!(lines.count(), 2);
        let json = sweep_to_json(&table).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["seed"], 42);
        assert_eq!(parsed["samples"], 10);
        assert_eq!(parsed["rows"].as_array().unwrap().len(), 2);
        assert_eq!(parsed["space"], "su2_biinv");
    }

    #[test]
    fn quadrature_rules_validate_and_integrate() {
        assert!(quadrature_rule(Quadrature::Simpson { nodes: 4 }, 1.0).is_err());
        assert!(quadrature_rule(Quadrature::Simpson { nodes: 1 }, 1.0).is_err());
        // ∫₀¹ t³ dt = 1/4 exactly under both rules.
        for quad in [
            Quadrature::Simpson { nodes: 21 },
            Quadrature::GaussLegendre { nodes: 8 },
        ] {
            let (ts, ws) = quadrature_rule(quad, 1.0).unwrap();
            let integral: f64 = ts.iter().zip(&ws).map(|(&t, &w)| w * t * t * t).sum();
            assert!((integral - 0.25).abs() < 1e-12, "{quad:?}");
        }
    }
}
