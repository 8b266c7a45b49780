//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// `(M + M†)/2` together with the max-abs anti-Hermitian defect that was removed.
pub fn hermitize(m: &CMatrix) -> (CMatrix, f64) {
    let adj = m.adjoint();
    let defect = (m - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max) * 0.5;
    ((m + adj) * Complex64::new(0.5, 0.0), defect)
}

/// Eigenvalues (ascending) and matching eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Pivoted Cholesky of a Hermitian PSD matrix: returns the pivot order and the
/// lower factor `L` (n × rank) with `P M Pᵀ ≈ L L†`, stopping once the largest
/// remaining diagonal falls below `threshold`.
pub fn pivoted_cholesky(m: &CMatrix, threshold: f64) -> (Vec<usize>, CMatrix) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..n {
        let (piv, dmax) = (k..n)
            .map(|i| (i, a[(i, i)].re))
            .fold((k, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        if dmax <= threshold {
            break;
        }
        if piv != k {
            a.swap_rows(k, piv);
            a.swap_columns(k, piv);
            perm.swap(k, piv);
        }
        let d = a[(k, k)].re.sqrt();
        a[(k, k)] = Complex64::new(d, 0.0);
        for i in k + 1..n {
            a[(i, k)] /= d;
        }
        for j in k + 1..n {
            let ljk = a[(j, k)].conj();
            for i in j..n {
                let upd = a[(i, k)] * ljk;
                a[(i, j)] -= upd;
                a[(j, i)] = a[(i, j)].conj();
            }
            // keep the working block Hermitian on the diagonal
            a[(j, j)] = Complex64::new(a[(j, j)].re, 0.0);
        }
        rank += 1;
    }
    let l = CMatrix::from_fn(n, rank, |i, j| if i >= j { a[(i, j)] } else { Complex64::new(0.0, 0.0) });
    (perm, l)
}

/// Moore-Penrose pseudo-inverse via SVD with relative cutoff.
pub fn pseudo_inverse(m: &CMatrix, rel_cut: f64) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.len();
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for s in 0..k {
        let sv = svd.singular_values[s];
        if sv > rel_cut * smax && sv > 0.0 {
            let inv = 1.0 / sv;
            for i in 0..m.ncols() {
                for j in 0..m.nrows() {
                    out[(i, j)] += vt[(s, i)].conj() * u[(j, s)].conj() * inv;
                }
            }
        }
    }
    out
}

/// Condition number (ratio of extreme singular values) of a real matrix.
pub fn condition_number(m: &RMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Lawson-Hanson non-negative least squares: minimize ‖Ax − b‖ subject to x ≥ 0.
pub fn nnls(a: &RMatrix, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::LengthMismatch(format!("nnls: rhs {} vs rows {m}", b.len())));
    }
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 10.0 * f64::EPSILON * a.norm() * (m.max(n) as f64);
    let at = a.transpose();
    for _outer in 0..3 * n + 10 {
        let w = &at * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate else { break };
        if w[t] <= tol {
            break;
        }
        passive[t] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub = RMatrix::from_fn(m, idx.len(), |r, c| a[(r, idx[c])]);
            let z_sub = sub
                .clone()
                .svd(true, true)
                .solve(b, 1e-14)
                .map_err(|e| Error::Unsupported(format!("nnls subproblem: {e}")))?;
            let mut z = DVector::zeros(n);
            for (k, &j) in idx.iter().enumerate() {
                z[j] = z_sub[k];
            }
            if idx.iter().all(|&j| z[j] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for &j in &idx {
                if z[j] <= 0.0 {
                    let step = x[j] / (x[j] - z[j]);
                    alpha = alpha.min(step);
                }
            }
            x = &x + (z - &x) * alpha;
            for &j in &idx {
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let d = CMatrix::from_diagonal(&DVector::from_iterator(2, vals.iter().map(|&v| c(v, 0.0))));
        assert!(max_abs_diff(&(&vecs * d * vecs.adjoint()), &m) < 1e-14);
    }

    #[test]
    fn pivoted_cholesky_detects_rank() {
        let v = CMatrix::from_row_slice(3, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(3.0, -1.0)]);
        let m = &v * v.adjoint();
        let (perm, l) = pivoted_cholesky(&m, 1e-12 * hermitian_norm(&m));
        assert_eq!(l.ncols(), 2);
        let p = CMatrix::from_fn(3, 3, |i, j| if perm[i] == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(max_abs_diff(&(&p * &m * p.transpose()), &(&l * l.adjoint())) < 1e-12);
    }

    #[test]
    fn pivoted_cholesky_survives_interior_pivots() {
        // growing diagonal forces pivots from the far end past unpivoted rows
        let v = CMatrix::from_fn(5, 5, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.3 + if i == j { (i + 1) as f64 } else { 0.0 }, 0.1 * (i as f64 - j as f64)));
        let m = v.adjoint() * &v;
        let (perm, l) = pivoted_cholesky(&m, 0.0);
        assert_eq!(l.ncols(), 5);
        assert_ne!(perm, (0..5).collect::<Vec<_>>());
        let p = CMatrix::from_fn(5, 5, |i, j| if perm[i] == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(max_abs_diff(&(&p * &m * p.transpose()), &(&l * l.adjoint())) < 1e-11 * hermitian_norm(&m));
    }

    #[test]
    fn nnls_matches_unconstrained_when_interior() {
        let a = RMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let x = nnls(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nnls_clamps_negative_direction() {
        let a = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![-1.0, 2.0]);
        let x = nnls(&a, &b).unwrap();
        assert_eq!(x[0], 0.0);
        assert!((x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let v = CMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 1.0)]);
        let m = &v * v.adjoint();
        let p = pseudo_inverse(&m, 1e-12);
        assert!(max_abs_diff(&(&m * &p * &m), &m) < 1e-14);
    }
}
