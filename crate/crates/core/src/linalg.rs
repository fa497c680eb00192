//! Small dense eigensolvers.

use nalgebra::{Complex, DMatrix, DVector};

/// Relative off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors in the columns of an
/// orthogonal matrix, unsorted (in the diagonal order the sweeps leave them).
pub fn jacobi_eigen(sym: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = sym.nrows();
    assert_eq!(n, sym.ncols(), "jacobi_eigen needs a square matrix");
    let mut a = sym.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[(p, q)] * a[(p, q)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    (a.diagonal(), v)
}

fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    let apq = a[(p, q)];
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let kp = c * akp - s * akq;
        let kq = s * akp + c * akq;
        a[(k, p)] = kp;
        a[(p, k)] = kp;
        a[(k, q)] = kq;
        a[(q, k)] = kq;
    }
    a[(p, p)] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a[(q, q)] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Eigenvalues of a general real square matrix.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_reconstructs_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, -2.0, 1.0, 3.0, 0.5, -2.0, 0.5, 1.0]);
        let (w, v) = jacobi_eigen(&m);
        let recon = &v * DMatrix::from_diagonal(&w) * v.transpose();
        assert!((recon - &m).amax() < 1e-13);
        assert!((v.transpose() * &v - DMatrix::identity(3, 3)).amax() < 1e-14);
    }

    #[test]
    fn jacobi_on_diagonal_is_identity() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0]));
        let (w, v) = jacobi_eigen(&m);
        assert_eq!(w.as_slice(), &[3.0, -1.0]);
        assert_eq!(v, DMatrix::identity(2, 2));
    }

    #[test]
    fn general_eigenvalues_of_rotation() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let mut ev = general_eigenvalues(&m);
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - Complex::new(0.0, -2.0)).norm() < 1e-12);
        assert!((ev[1] - Complex::new(0.0, 2.0)).norm() < 1e-12);
    }
}
