//! Taylor-series solution of the matrix Jacobi equation A″(t) = −R_t A(t)
//! with A(0) = 0, A′(0) = I, where R_t has the closed sin/cos form. The
//! recurrence uses only the operator and its first two derivatives; an
//! independent Runge–Kutta integrator provides a cross-check.

use nalgebra::{DMatrix, DVector};

use crate::algebra::AlgebraSpec;
use crate::curvature::{closed_form_jacobi, ClosedFormJacobi};
use crate::error::{GeomError, Result};
use crate::linalg::max_abs;

/// Taylor coefficients C_0..C_N of the transverse Jacobi system for one
/// direction: A(t) = Σ C_k t^k.
#[derive(Clone, Debug)]
pub struct TaylorTensor {
    coeffs: Vec<DMatrix<f64>>,
    /// Observed two-step growth ratio max ‖C_k‖ / ‖C_{k−2}‖ near the top
    /// order, used for the geometric tail estimate.
    growth_two_step: f64,
}

/// Builds the Taylor solution up to degree `order` (inclusive).
///
/// Writing R_t = R₀ + R″ + R′ sin t − R″ cos t, matching coefficients in
/// A″ = −R_t A gives
///   C_{k+2} = −[R₀ C_k + R′ S¹_k + R″ S²_k] / ((k+1)(k+2)),
/// where S¹_k = Σ_{odd j ≤ k} (−1)^{(j−1)/2} C_{k−j} / j! collects the sin
/// convolution and S²_k = Σ_{even 2 ≤ j ≤ k} (−1)^{j/2−1} C_{k−j} / j! the
/// (1 − cos) convolution, so only the first two derivatives ever enter.
pub fn taylor_series(spec: &AlgebraSpec, v_m: &[f64], order: usize) -> Result<TaylorTensor> {
    let cf = closed_form_jacobi(spec, v_m, 1e-9)?;
    taylor_from_closed_form(&cf, order)
}

/// The same construction, driven directly by an already-built closed form.
pub fn taylor_from_closed_form(cf: &ClosedFormJacobi, order: usize) -> Result<TaylorTensor> {
    if order < 2 {
        return Err(GeomError::InsufficientOrder {
            needed: 2,
            have: order,
        });
    }
    // Recover R₀, R′, R″ from the closed form.
    let r1 = cf.sin_coeff.clone();
    let r2 = -cf.cos_coeff.clone();
    let r0 = &cf.constant - &r2;
    let dim = r0.nrows();

    let mut coeffs: Vec<DMatrix<f64>> = Vec::with_capacity(order + 1);
    coeffs.push(DMatrix::zeros(dim, dim)); // C_0
    coeffs.push(DMatrix::identity(dim, dim)); // C_1
    // Precompute 1/j! with alternating signs folded in per use.
    let mut inv_fact = vec![1.0f64; order + 1];
    for j in 1..=order {
        inv_fact[j] = inv_fact[j - 1] / j as f64;
    }
    let r1_zero = max_abs(&r1) == 0.0;
    let r2_zero = max_abs(&r2) == 0.0;
    for k in 0..=order.saturating_sub(2) {
        let mut rhs = &r0 * &coeffs[k];
        if !r1_zero {
            let mut s1 = DMatrix::zeros(dim, dim);
            let mut j = 1usize;
            while j <= k {
                let sign = if ((j - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                s1 += &coeffs[k - j] * (sign * inv_fact[j]);
                j += 2;
            }
            rhs += &r1 * s1;
        }
        if !r2_zero {
            let mut s2 = DMatrix::zeros(dim, dim);
            let mut j = 2usize;
            while j <= k {
                let sign = if (j / 2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
                s2 += &coeffs[k - j] * (sign * inv_fact[j]);
                j += 2;
            }
            rhs += &r2 * s2;
        }
        coeffs.push(rhs / (-(((k + 1) * (k + 2)) as f64)));
    }

    // Observed two-step growth near the top of the expansion.
    let norms: Vec<f64> = coeffs.iter().map(max_abs).collect();
    let lo = order.saturating_sub(8).max(2);
    let mut growth: f64 = 0.0;
    for k in lo..=order {
        if norms[k - 2] > 0.0 {
            growth = growth.max(norms[k] / norms[k - 2]);
        }
    }
    Ok(TaylorTensor {
        coeffs,
        growth_two_step: growth,
    })
}

impl TaylorTensor {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn coeff(&self, k: usize) -> &DMatrix<f64> {
        &self.coeffs[k]
    }

    /// Horner evaluation of A(t).
    pub fn evaluate(&self, t: f64) -> DMatrix<f64> {
        let dim = self.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Horner evaluation of A′(t).
    pub fn evaluate_derivative(&self, t: f64) -> DMatrix<f64> {
        let dim = self.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if k == 0 {
                break;
            }
            acc = acc * t + c * k as f64;
        }
        acc
    }

    /// Geometric estimate of the truncation error at `t`: the tail beyond
    /// order N is bounded by the last two retained terms times the observed
    /// two-step growth ratio, provided that ratio persists and r·t² < 1.
    /// Returns `None` when the geometric series does not converge at this t.
    pub fn tail_bound(&self, t: f64) -> Option<f64> {
        let n = self.order();
        let r = self.growth_two_step;
        let q = r * t * t;
        if q >= 1.0 {
            return None;
        }
        let tn = t.abs().powi((n - 1) as i32);
        let base = max_abs(&self.coeffs[n - 1]) * tn + max_abs(&self.coeffs[n]) * tn * t.abs();
        Some(base * q / (1.0 - q))
    }

    /// Evaluates A(t), rejecting the result when the tail estimate exceeds
    /// `tol`.
    pub fn evaluate_checked(&self, t: f64, tol: f64) -> Result<DMatrix<f64>> {
        let bound = self.tail_bound(t).unwrap_or(f64::INFINITY);
        if bound > tol {
            return Err(GeomError::Truncation { t, bound, tol });
        }
        Ok(self.evaluate(t))
    }
}

/// A single Jacobi field J(t) = A(t)·w with J(0) = 0, J′(0) = w.
pub fn jacobi_field(tensor: &TaylorTensor, w: &[f64], t: f64) -> Result<DVector<f64>> {
    if w.len() != tensor.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: tensor.dim(),
            got: w.len(),
        });
    }
    Ok(tensor.evaluate(t) * DVector::from_row_slice(w))
}

/// Antisymmetry defect of the Wronskian-type invariant AᵀA′ − (A′)ᵀA, which
/// vanishes identically for exact solutions with A(0) = 0, A′(0) = I and
/// self-adjoint R_t.
pub fn lagrange_defect(a: &DMatrix<f64>, a_prime: &DMatrix<f64>) -> f64 {
    max_abs(&(a.transpose() * a_prime - a_prime.transpose() * a))
}

/// Independent fixed-step Runge–Kutta (order 4) integration of
/// A″ = −R_t A from (0, I), sampled at the sorted grid points `t_grid`
/// (all ≥ 0). Steps never exceed `max_step` and land exactly on grid points.
pub fn rk4_jacobi(
    spec: &AlgebraSpec,
    v_m: &[f64],
    t_grid: &[f64],
    max_step: f64,
) -> Result<Vec<(DMatrix<f64>, DMatrix<f64>)>> {
    let cf = closed_form_jacobi(spec, v_m, 1e-9)?;
    Ok(rk4_closed_form(&cf, t_grid, max_step))
}

/// The same integrator, driven directly by a closed-form operator family.
pub fn rk4_closed_form(
    cf: &ClosedFormJacobi,
    t_grid: &[f64],
    max_step: f64,
) -> Vec<(DMatrix<f64>, DMatrix<f64>)> {
    assert!(max_step > 0.0);
    let dim = cf.constant.nrows();
    let mut a = DMatrix::zeros(dim, dim);
    let mut ap = DMatrix::identity(dim, dim);
    let mut t = 0.0f64;
    let mut out = Vec::with_capacity(t_grid.len());
    for &target in t_grid {
        assert!(target >= t, "grid must be sorted ascending from 0");
        let span = target - t;
        if span > 0.0 {
            let steps = (span / max_step).ceil() as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                // RK4 on the first-order system (A, A′).
                let f = |tau: f64, y: &DMatrix<f64>| -> DMatrix<f64> { -(cf.eval(tau) * y) };
                let k1a = ap.clone();
                let k1p = f(t, &a);
                let k2a = &ap + &k1p * (h / 2.0);
                let k2p = f(t + h / 2.0, &(&a + &k1a * (h / 2.0)));
                let k3a = &ap + &k2p * (h / 2.0);
                let k3p = f(t + h / 2.0, &(&a + &k2a * (h / 2.0)));
                let k4a = &ap + &k3p * h;
                let k4p = f(t + h, &(&a + &k3a * h));
                a += (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (h / 6.0);
                ap += (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
                t += h;
            }
            t = target;
        }
        out.push((a.clone(), ap.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sp2_su2, su2_biinv, AlgebraSpec};
    use crate::curvature::jacobi_operator;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
        let v: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }

    #[test]
    fn flat_space_solution_is_linear() {
        let spec = AlgebraSpec::flat(3);
        let v = vec![1.0, 0.0, 0.0];
        let tensor = taylor_series(&spec, &v, 10).unwrap();
        let a = tensor.evaluate(2.5);
        assert_eq!(a, DMatrix::identity(3, 3) * 2.5);
        assert_eq!(tensor.tail_bound(100.0), Some(0.0));
        let w = [0.0, 2.0, 0.0];
        let j = jacobi_field(&tensor, &w, 4.0).unwrap();
        assert_eq!(j, DVector::from_row_slice(&[0.0, 8.0, 0.0]));
    }

    #[test]
    fn constant_curvature_solution_matches_sine() {
        let spec = su2_biinv();
        let v = vec![1.0, 0.0, 0.0];
        let tensor = taylor_series(&spec, &v, 40).unwrap();
        // Series of 2·sin(t/2): coefficient of t³ is −1/24, of t⁵ is 1/1920.
        assert!((tensor.coeff(3)[(1, 1)] + 1.0 / 24.0).abs() < 1e-15);
        assert!((tensor.coeff(5)[(1, 1)] - 1.0 / 1920.0).abs() < 1e-15);
        let a = tensor.evaluate(std::f64::consts::PI);
        assert!((a[(0, 0)] - std::f64::consts::PI).abs() < 1e-12);
        assert!((a[(1, 1)] - 2.0).abs() < 1e-12);
        assert!((a[(2, 2)] - 2.0).abs() < 1e-12);
        assert!(a[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn low_order_coefficients_follow_the_operator() {
        let spec = sp2_su2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_unit(&mut rng, 7);
        let tensor = taylor_series(&spec, &v, 8).unwrap();
        assert_eq!(max_abs(tensor.coeff(0)), 0.0);
        assert_eq!(max_abs(&(tensor.coeff(1) - DMatrix::identity(7, 7))), 0.0);
        assert_eq!(max_abs(tensor.coeff(2)), 0.0);
        let r0 = jacobi_operator(&spec, &v).unwrap().to_dmatrix();
        assert!(max_abs(&(tensor.coeff(3) + r0 / 6.0)) < 1e-15);
    }

    #[test]
    fn taylor_matches_runge_kutta_on_a_period() {
        let spec = sp2_su2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = random_unit(&mut rng, 7);
        let tensor = taylor_series(&spec, &v, 40).unwrap();
        let grid: Vec<f64> = (1..=8).map(|i| i as f64 * std::f64::consts::PI / 8.0).collect();
        let rk = rk4_jacobi(&spec, &v, &grid, 1e-3).unwrap();
        for (t, (a_rk, ap_rk)) in grid.iter().zip(&rk) {
            let a = tensor.evaluate(*t);
            let defect = max_abs(&(&a - a_rk));
            assert!(defect < 1e-6, "t = {t}: defect {defect}");
            // Conservation law holds for both solutions.
            assert!(lagrange_defect(&a, &tensor.evaluate_derivative(*t)) < 1e-8);
            assert!(lagrange_defect(a_rk, ap_rk) < 1e-8);
        }
    }

    #[test]
    fn tail_bound_dominates_actual_truncation_error() {
        let spec = sp2_su2();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let v = random_unit(&mut rng, 7);
        let coarse = taylor_series(&spec, &v, 30).unwrap();
        let fine = taylor_series(&spec, &v, 60).unwrap();
        for &t in &[0.5, 1.5, 2.5, std::f64::consts::PI] {
            let actual = max_abs(&(coarse.evaluate(t) - fine.evaluate(t)));
            let bound = coarse.tail_bound(t).unwrap();
            assert!(
                actual <= bound * 1.001 + 1e-16,
                "t = {t}: actual {actual:.3e} > bound {bound:.3e}"
            );
        }
        // Far outside the certified range the checked evaluation refuses.
        let small = taylor_series(&spec, &v, 10).unwrap();
        assert!(matches!(
            small.evaluate_checked(10.0, 1e-6),
            Err(GeomError::Truncation { .. })
        ));
        assert!(coarse.evaluate_checked(1.0, 1e-6).is_ok());
        assert!(taylor_series(&spec, &v, 1).is_err());
    }

    #[test]
    fn runge_kutta_converges_at_fourth_order() {
        let spec = su2_biinv();
        let v = vec![1.0, 0.0, 0.0];
        let t = 2.0f64;
        let exact = 2.0 * (t / 2.0).sin();
        let err = |h: f64| {
            let rk = rk4_jacobi(&spec, &v, &[t], h).unwrap();
            (rk[0].0[(1, 1)] - exact).abs()
        };
        let (e1, e2) = (err(0.1), err(0.05));
        let ratio = e1 / e2;
        assert!(
            (10.0..24.0).contains(&ratio),
            "order-4 step halving gave ratio {ratio}"
        );
    }
}
