//! Dense floating-point kernels shared by the geometry layers: the
//! exponential of a skew-symmetric matrix (exact rotation structure, with a
//! scaling-and-squaring fallback) and a small least-squares helper.

use nalgebra::{DMatrix, DVector};

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

/// Exponential of a skew-symmetric matrix.
///
/// Diagonalizes the symmetric positive semidefinite −L² to recover the
/// invariant rotation planes, building the exponential from exact cos/sin
/// blocks; repeated rotation angles are handled by deflating each eigenvalue
/// cluster into planes. If the result fails an orthogonality audit (which
/// the exact structure guarantees up to rounding), falls back to
/// scaling-and-squaring.
pub fn expm_skew(l: &DMatrix<f64>) -> DMatrix<f64> {
    let n = l.nrows();
    assert_eq!(n, l.ncols(), "square matrix required");
    let scale = max_abs(l);
    if scale == 0.0 {
        return DMatrix::identity(n, n);
    }
    if let Some(e) = expm_skew_by_planes(l) {
        let defect = max_abs(&(&e.transpose() * &e - DMatrix::identity(n, n)));
        if defect <= 1e-9 {
            return e;
        }
    }
    expm_squaring(l)
}

fn expm_skew_by_planes(l: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = l.nrows();
    // K = −L² is symmetric PSD with eigenvalue θ² for each rotation angle θ.
    let mut k = -(l * l);
    k = (&k + k.transpose()) * 0.5;
    let eig = k.symmetric_eigen();
    let theta_sq_scale = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if theta_sq_scale == 0.0 {
        return Some(DMatrix::identity(n, n));
    }
    // Both tolerances are relative to the largest θ², so arbitrarily small
    // overall rotation scales (L = t·Λ with tiny t) are still resolved.
    let cluster_tol = 1e-8 * theta_sq_scale;
    let kernel_tol = 1e-12 * theta_sq_scale;

    // Group eigenvector columns by eigenvalue.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut e = DMatrix::zeros(n, n);
    let mut idx = 0usize;
    while idx < n {
        let lambda = eig.eigenvalues[order[idx]];
        let mut cluster: Vec<DVector<f64>> = Vec::new();
        while idx < n && (eig.eigenvalues[order[idx]] - lambda).abs() <= cluster_tol {
            cluster.push(eig.eigenvectors.column(order[idx]).into_owned());
            idx += 1;
        }
        if lambda <= kernel_tol {
            // Kernel of L: fixed directions.
            for u in &cluster {
                e += u * u.transpose();
            }
            continue;
        }
        let theta = lambda.max(0.0).sqrt();
        // Deflate the eigenspace into rotation planes (u, w = Lu/θ).
        while let Some(u) = cluster.pop() {
            let nu = u.norm();
            if nu < 1e-8 {
                continue;
            }
            let u = u / nu;
            let w = l * &u / theta;
            let (ct, st) = (theta.cos(), theta.sin());
            e += (&u * u.transpose() + &w * w.transpose()) * ct
                + (&w * u.transpose() - &u * w.transpose()) * st;
            // Remove the plane from the remaining cluster vectors.
            for v in cluster.iter_mut() {
                let cu = u.dot(v);
                let cw = w.dot(v);
                *v -= &u * cu + &w * cw;
            }
            cluster.retain(|v| v.norm() > 1e-8);
            for i in 0..cluster.len() {
                let (head, tail) = cluster.split_at_mut(i);
                let vi = &mut tail[0];
                for prev in head.iter() {
                    let c = prev.dot(vi);
                    *vi -= prev * c;
                }
                let norm = vi.norm();
                if norm > 1e-8 {
                    *vi /= norm;
                }
            }
            cluster.retain(|v| v.norm() > 0.5);
        }
    }
    Some(e)
}

/// Scaling-and-squaring with a Taylor kernel: accurate for any square matrix,
/// used as the fallback path.
pub fn expm_squaring(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = max_abs(a) * n as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(s as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Least-squares solution of `a x ≈ b` via SVD.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-14)
        .expect("SVD least squares")
}
