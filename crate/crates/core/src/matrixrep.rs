//! Concrete 4×4 complex matrix model of the flagship space: a basis of the
//! rank-two quaternionic-unitary algebra, the orthonormal combinations
//! Q1..Q10, and an independent reconstruction of the structure-constant
//! table from matrix commutators with exact radical snapping.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::algebra::AlgebraSpec;
use crate::error::{GeomError, Result};
use crate::scalars::{Radical, RADICANDS};

type CMat = Matrix4<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The ten sparse generators S1..S10 (one-based `index`), spanning the
/// quaternionic-unitary algebra in its defining 4×4 complex representation.
pub fn s_matrix(index: usize) -> CMat {
    assert!((1..=10).contains(&index), "S index out of range");
    let mut m = CMat::zeros();
    // Entries are (row, col, value) with zero-based indices.
    let entries: &[(usize, usize, Complex64)] = match index {
        1 => &[(0, 0, c(0.0, 1.0)), (1, 1, c(0.0, -1.0))],
        2 => &[(2, 2, c(0.0, 1.0)), (3, 3, c(0.0, -1.0))],
        3 => &[(0, 1, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))],
        4 => &[(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, 1.0))],
        5 => &[(2, 3, c(1.0, 0.0)), (3, 2, c(-1.0, 0.0))],
        6 => &[(2, 3, c(0.0, 1.0)), (3, 2, c(0.0, 1.0))],
        7 => &[
            (0, 2, c(1.0, 0.0)),
            (2, 0, c(-1.0, 0.0)),
            (1, 3, c(-1.0, 0.0)),
            (3, 1, c(1.0, 0.0)),
        ],
        8 => &[
            (0, 2, c(0.0, 1.0)),
            (2, 0, c(0.0, 1.0)),
            (1, 3, c(0.0, 1.0)),
            (3, 1, c(0.0, 1.0)),
        ],
        9 => &[
            (0, 3, c(1.0, 0.0)),
            (3, 0, c(-1.0, 0.0)),
            (1, 2, c(1.0, 0.0)),
            (2, 1, c(-1.0, 0.0)),
        ],
        10 => &[
            (0, 3, c(0.0, 1.0)),
            (3, 0, c(0.0, 1.0)),
            (1, 2, c(0.0, -1.0)),
            (2, 1, c(0.0, -1.0)),
        ],
        _ => unreachable!(),
    };
    for &(r, col, v) in entries {
        m[(r, col)] = v;
    }
    m
}

/// Orthonormal basis Q1..Q10 (one-based) of the algebra with respect to the
/// trace form below; Q1..Q7 span the tangent block, Q8..Q10 the isotropy.
pub fn q_matrix(index: usize) -> CMat {
    assert!((1..=10).contains(&index), "Q index out of range");
    let s = s_matrix;
    let re = |x: f64| c(x, 0.0);
    match index {
        1 => s(1) * re(0.5) - s(2) * re(1.5),
        2 => s(3) * re(10f64.sqrt() / 2.0),
        3 => s(4) * re(10f64.sqrt() / 2.0),
        4 => s(5) * re(6f64.sqrt() / 2.0) - s(7) * re(2f64.sqrt() / 2.0),
        5 => s(6) * re(6f64.sqrt() / 2.0) - s(8) * re(2f64.sqrt() / 2.0),
        6 => s(9) * re(5f64.sqrt() / 2.0),
        7 => s(10) * re(5f64.sqrt() / 2.0),
        8 => s(1) * re(1.5) + s(2) * re(0.5),
        9 => s(5) + s(7) * re(3f64.sqrt() / 2.0),
        10 => s(6) + s(8) * re(3f64.sqrt() / 2.0),
        _ => unreachable!(),
    }
}

/// Trace form ⟨A, B⟩ = −(1/5)·Tr(A·B); real for matrices in the algebra.
pub fn trace_inner(a: &CMat, b: &CMat) -> f64 {
    let tr: Complex64 = (a * b).trace();
    -0.2 * tr.re
}

/// How far `m` is from the membership pattern of the algebra: the matrix must
/// be skew-hermitian with the quaternionic pairing that determines rows 2 and
/// 4 from rows 1 and 3. Returns the largest entry-wise deviation.
pub fn algebra_pattern_defect(m: &CMat) -> f64 {
    let mut d: f64 = 0.0;
    let mut push = |x: Complex64| d = d.max(x.norm());
    // Purely imaginary diagonal, opposite within each quaternionic pair.
    push(c(m[(0, 0)].re, 0.0));
    push(c(m[(2, 2)].re, 0.0));
    push(m[(1, 1)] + m[(0, 0)]);
    push(m[(3, 3)] + m[(2, 2)]);
    // Row 2 from row 1.
    push(m[(1, 0)] + m[(0, 1)].conj());
    push(m[(1, 2)] - m[(0, 3)].conj());
    push(m[(1, 3)] + m[(0, 2)].conj());
    // Row 3 column entries tied to rows 1–2.
    push(m[(2, 0)] + m[(0, 2)].conj());
    push(m[(2, 1)] + m[(0, 3)]);
    // Row 4 from rows 1 and 3.
    push(m[(3, 0)] + m[(0, 3)].conj());
    push(m[(3, 1)] - m[(0, 2)]);
    push(m[(3, 2)] + m[(2, 3)].conj());
    d
}

/// Largest deviation of ⟨Q_i, Q_j⟩ from δ_ij.
pub fn orthonormality_defect() -> f64 {
    let q: Vec<CMat> = (1..=10).map(q_matrix).collect();
    let mut d: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let target = if i == j { 1.0 } else { 0.0 };
            d = d.max((trace_inner(&q[i], &q[j]) - target).abs());
        }
    }
    d
}

/// Snaps a float to the nearest nearby radical of the shape (p/q)·√s with
/// integer |p| ≤ 12, q ∈ {1, 2, 4}, and s one of the eight basis radicands;
/// returns `None` when nothing lies within `tol`.
pub fn snap_radical(x: f64, tol: f64) -> Option<Radical> {
    for (idx, &s) in RADICANDS.iter().enumerate() {
        let root = (s as f64).sqrt();
        for q in [1i64, 2, 4] {
            let p = (x * q as f64 / root).round();
            if p.abs() > 12.0 {
                continue;
            }
            let approx = p / q as f64 * root;
            if (x - approx).abs() <= tol {
                let p = p as i64;
                return Some(if idx == 0 {
                    Radical::rational(p, q)
                } else {
                    Radical::surd(p, q, s)
                });
            }
        }
    }
    None
}

/// Independent oracle for the builtin table: expands every matrix commutator
/// [Q_i, Q_j] on the orthonormal basis, snaps each coordinate to an exact
/// radical, and verifies both the snap and that the commutator lies in the
/// span. `tol` bounds the accepted float-vs-exact deviation.
pub fn table_from_matrices(tol: f64) -> Result<AlgebraSpec> {
    let q: Vec<CMat> = (1..=10).map(q_matrix).collect();
    let mut pairs = Vec::new();
    for i in 0..10 {
        for j in (i + 1)..10 {
            let comm = q[i] * q[j] - q[j] * q[i];
            let mut terms = Vec::new();
            let mut residual = comm;
            for (k, qk) in q.iter().enumerate() {
                let coeff = trace_inner(&comm, qk);
                let snapped = snap_radical(coeff, tol).ok_or(GeomError::Reconstruction {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    value: coeff,
                })?;
                let exact_f = snapped.to_f64();
                if (coeff - exact_f).abs() > tol {
                    return Err(GeomError::Reconstruction {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        value: coeff,
                    });
                }
                residual -= qk * c(exact_f, 0.0);
                if !snapped.is_zero() {
                    terms.push((k + 1, snapped));
                }
            }
            // The commutator must be exhausted by the basis expansion.
            let leftover = residual.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            if leftover > 10.0 * tol {
                return Err(GeomError::Reconstruction {
                    i: i + 1,
                    j: j + 1,
                    k: 0,
                    value: leftover,
                });
            }
            pairs.push(((i + 1, j + 1), terms));
        }
    }
    let labels = (1..=10).map(|i| format!("Q{i}")).collect();
    AlgebraSpec::from_brackets("sp2_su2", 10, 7, true, Some(labels), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sp2_su2;

    #[test]
    fn generators_and_basis_lie_in_the_algebra() {
        for i in 1..=10 {
            assert!(algebra_pattern_defect(&s_matrix(i)) < 1e-15, "S{i}");
            assert!(algebra_pattern_defect(&q_matrix(i)) < 1e-12, "Q{i}");
        }
        // Commutators stay in the algebra (closure under the pattern).
        for i in 1..=10 {
            for j in 1..=10 {
                let m = q_matrix(i) * q_matrix(j) - q_matrix(j) * q_matrix(i);
                assert!(algebra_pattern_defect(&m) < 1e-12);
            }
        }
    }

    #[test]
    fn q_basis_is_orthonormal() {
        assert!(orthonormality_defect() < 1e-12);
    }

    #[test]
    fn snapping_recognizes_radical_values() {
        let cases = [
            (0.0, Radical::rational(0, 1)),
            (1.0, Radical::rational(1, 1)),
            (-3.0, Radical::rational(-3, 1)),
            (6f64.sqrt() / 2.0, Radical::surd(1, 2, 6)),
            (-(10f64.sqrt()) / 2.0, Radical::surd(-1, 2, 10)),
            (0.75, Radical::rational(3, 4)),
            (11.0 * 30f64.sqrt() / 4.0, Radical::surd(11, 4, 30)),
        ];
        for (x, want) in cases {
            assert_eq!(snap_radical(x, 1e-10), Some(want), "snapping {x}");
        }
        assert_eq!(snap_radical(0.123456, 1e-10), None);
        assert_eq!(snap_radical(6f64.sqrt() / 2.0 + 1e-6, 1e-10), None);
    }

    #[test]
    fn commutator_table_reproduces_builtin_exactly() {
        let reconstructed = table_from_matrices(1e-10).unwrap();
        let builtin = sp2_su2();
        assert_eq!(reconstructed, builtin);
    }
}
