//! Truncated power series over f64 and determinants of series-valued
//! matrices, used for the volume-density expansion around t = 0.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A power series truncated after degree `order()`: coefficients c₀..c_n.
#[derive(Clone, Debug, PartialEq)]
pub struct Tps {
    coeffs: Vec<f64>,
}

impl Tps {
    /// The zero series truncated at the given order (inclusive degree).
    pub fn zero(order: usize) -> Self {
        Tps {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Tps { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, degree: usize) -> f64 {
        self.coeffs.get(degree).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, degree: usize, value: f64) {
        self.coeffs[degree] = value;
    }

    /// Horner evaluation at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Tps> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return None;
        }
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = 1.0 / a0;
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j];
            }
            b[k] = -acc / a0;
        }
        Some(Tps { coeffs: b })
    }
}

impl Add for &Tps {
    type Output = Tps;
    fn add(self, rhs: &Tps) -> Tps {
        assert_eq!(self.order(), rhs.order());
        Tps {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl AddAssign<&Tps> for Tps {
    fn add_assign(&mut self, rhs: &Tps) {
        assert_eq!(self.order(), rhs.order());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Tps {
    type Output = Tps;
    fn sub(self, rhs: &Tps) -> Tps {
        assert_eq!(self.order(), rhs.order());
        Tps {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Tps {
    type Output = Tps;
    fn neg(self) -> Tps {
        Tps {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

/// Truncated convolution product.
impl Mul for &Tps {
    type Output = Tps;
    fn mul(self, rhs: &Tps) -> Tps {
        let n = self.order().min(rhs.order());
        let mut out = vec![0.0; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Tps { coeffs: out }
    }
}

impl Mul<f64> for &Tps {
    type Output = Tps;
    fn mul(self, rhs: f64) -> Tps {
        Tps {
            coeffs: self.coeffs.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// Determinant of a square matrix of truncated series by Gaussian
/// elimination over the series ring. Pivots are chosen by the largest
/// constant coefficient in the column; a pivot must be a unit (nonzero
/// constant term), so the determinant itself must have a nonzero constant
/// coefficient — the caller arranges this (the volume density is det of
/// I + O(t²)). Returns `None` when elimination stalls on a non-unit column.
pub fn det_series(matrix: &[Vec<Tps>]) -> Option<Tps> {
    let n = matrix.len();
    assert!(n > 0 && matrix.iter().all(|row| row.len() == n));
    let order = matrix[0][0].order();
    let mut m: Vec<Vec<Tps>> = matrix.to_vec();
    let mut det = Tps::constant(1.0, order);
    let mut sign = 1.0;
    for col in 0..n {
        // Pivot: largest constant term at or below the diagonal.
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .coeff(0)
                    .abs()
                    .partial_cmp(&m[b][col].coeff(0).abs())
                    .unwrap()
            })
            .unwrap();
        if m[pivot_row][col].coeff(0) == 0.0 {
            return None;
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = m[col][col].clone();
        let pivot_inv = pivot.inverse()?;
        det = &det * &pivot;
        for row in (col + 1)..n {
            if m[row][col].coeffs().iter().all(|&c| c == 0.0) {
                continue;
            }
            let factor = &m[row][col] * &pivot_inv;
            for k in col..n {
                let delta = &factor * &m[col][k];
                let updated = &m[row][k] - &delta;
                m[row][k] = updated;
            }
        }
    }
    Some(&det * sign)
}
