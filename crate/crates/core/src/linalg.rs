//! Small dense Hermitian linear algebra: Jacobi eigensolver, PSD oracle, pseudo-inverse.
//!
//! Sized for the matrices this crate works with (N = n^2 with n up to 4, so
//! at most 16x16), where cyclic Jacobi is both simple and very accurate.

use crate::error::LinalgError;
use crate::matrix::{Complex, ComplexMatrix, ZERO};

/// Relative tolerance (against the Frobenius norm) for accepting a matrix as Hermitian.
pub const HERMITIAN_RTOL: f64 = 1e-12;
/// Default relative eigenvalue cutoff for [`pinv_psd`].
pub const DEFAULT_PINV_CUTOFF: f64 = 1e-12;

const JACOBI_RTOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// V diag(f(lambda)) V*.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (col, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[(i, col)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[(j, col)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    /// Pseudo-inverse that zeroes every eigenvalue at or below `cutoff * lambda_max`,
    /// negative ones included.
    pub fn pseudo_inverse(&self, cutoff: f64) -> ComplexMatrix {
        let threshold = cutoff * self.max_eigenvalue().max(0.0);
        self.reconstruct_with(|l| {
            if l > threshold && l > 0.0 {
                1.0 / l
            } else {
                0.0
            }
        })
    }

    /// Number of eigenvalues strictly above `cutoff * lambda_max`.
    pub fn rank(&self, cutoff: f64) -> usize {
        let threshold = cutoff * self.max_eigenvalue().max(0.0);
        self.eigenvalues
            .iter()
            .filter(|&&l| l > threshold && l > 0.0)
            .count()
    }
}

/// Fails with [`LinalgError::NotHermitian`] when `max |M_ij - conj(M_ji)|` exceeds `rtol * ||M||_F`.
pub fn check_hermitian(m: &ComplexMatrix, rtol: f64) -> Result<(), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (asymmetry, (row, col)) = m.max_asymmetry();
    if asymmetry > rtol * m.frobenius_norm() {
        return Err(LinalgError::NotHermitian {
            asymmetry,
            row,
            col,
        });
    }
    Ok(())
}

/// Spectral decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition, LinalgError> {
    m.check_finite()?;
    check_hermitian(m, HERMITIAN_RTOL)?;
    let n = m.rows();
    let norm = m.frobenius_norm();

    // Average out any admissible asymmetry so the rotations act on an exactly Hermitian matrix.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);

    if norm > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) < JACOBI_RTOL * norm {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let eigenvalues = pairs.iter().map(|&(l, _)| l).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, col| v[(i, pairs[col].1)]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, conj(phase)) * [[c, s], [-s, c]]`,
/// applying `a <- G* a G` and `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let gpp = Complex::new(c, 0.0);
    let gpq = Complex::new(s, 0.0);
    let gqp = phase.conj() * (-s);
    let gqq = phase.conj() * c;

    let n = a.rows();
    // a <- a G
    for r in 0..n {
        let x = a[(r, p)];
        let y = a[(r, q)];
        a[(r, p)] = x * gpp + y * gqp;
        a[(r, q)] = x * gpq + y * gqq;
    }
    // a <- G* a
    for col in 0..n {
        let x = a[(p, col)];
        let y = a[(q, col)];
        a[(p, col)] = gpp.conj() * x + gqp.conj() * y;
        a[(q, col)] = gpq.conj() * x + gqq.conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);

    for r in 0..n {
        let x = v[(r, p)];
        let y = v[(r, q)];
        v[(r, p)] = x * gpp + y * gqp;
        v[(r, q)] = x * gpq + y * gqq;
    }
}

/// Reference positivity check: smallest eigenvalue at least `-tol * max(1, ||M||_F)`.
pub fn is_psd_oracle(m: &ComplexMatrix, tol: f64) -> Result<bool, LinalgError> {
    let eig = eig_hermitian(m)?;
    Ok(eig.min_eigenvalue() >= -tol * m.frobenius_norm().max(1.0))
}

/// Moore-Penrose pseudo-inverse of a PSD matrix; eigenvalues at or below
/// `cutoff * lambda_max` count as zero.
pub fn pinv_psd(m: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix, LinalgError> {
    let eig = eig_hermitian(m)?;
    let min = eig.min_eigenvalue();
    let allowed = cutoff.max(1e-10) * eig.max_eigenvalue().max(1.0);
    if min < -allowed {
        return Err(LinalgError::NegativeEigenvalueBeyondTolerance { eigenvalue: min });
    }
    Ok(eig.pseudo_inverse(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_psd, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let e = eig_hermitian(&sx).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_spectrum() {
        let sy =
            ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
        let e = eig_hermitian(&sy).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&sy) < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_hermitian(&mut rng, 9);
            let e = eig_hermitian(&m).unwrap();
            let norm = m.frobenius_norm();
            assert!((&e.reconstruct() - &m).frobenius_norm() < 1e-12 * norm);
            let v = &e.eigenvectors;
            let vv = &v.adjoint() * v;
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(9)) < 1e-12);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            let sum: f64 = e.eigenvalues.iter().sum();
            assert!((sum - m.trace().re).abs() < 1e-12 * norm);
        }
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        assert!(matches!(
            eig_hermitian(&ComplexMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        match eig_hermitian(&m) {
            Err(LinalgError::NotHermitian { asymmetry, .. }) => {
                assert!((asymmetry - 2.0).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_matrix() {
        let e = eig_hermitian(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn oracle_examples() {
        assert!(is_psd_oracle(&ComplexMatrix::identity(4), 1e-10).unwrap());
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(!is_psd_oracle(&m, 1e-10).unwrap());
    }

    #[test]
    fn oracle_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..40 {
            let m = if i % 2 == 0 {
                random_psd(&mut rng, 4, 2)
            } else {
                random_hermitian(&mut rng, 4)
            };
            let u = random_unitary(&mut rng, 4);
            let conj = &(&u.adjoint() * &m) * &u;
            // products are Hermitian only up to rounding
            let conj =
                ComplexMatrix::from_fn(4, 4, |i, j| (conj[(i, j)] + conj[(j, i)].conj()) * 0.5);
            assert_eq!(
                is_psd_oracle(&m, 1e-8).unwrap(),
                is_psd_oracle(&conj, 1e-8).unwrap()
            );
        }
    }

    #[test]
    fn pinv_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert!(
            pinv_psd(&i3, DEFAULT_PINV_CUTOFF)
                .unwrap()
                .max_abs_diff(&i3)
                < 1e-15
        );
        let d = ComplexMatrix::from_diag(&[2.0, 0.0]);
        let p = pinv_psd(&d, DEFAULT_PINV_CUTOFF).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.0])) < 1e-15);
        let bad = ComplexMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            pinv_psd(&bad, DEFAULT_PINV_CUTOFF),
            Err(LinalgError::NegativeEigenvalueBeyondTolerance { .. })
        ));
    }

    #[test]
    fn pinv_penrose_identity_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for rank in 1..=6 {
            let m = random_psd(&mut rng, 6, rank);
            let p = pinv_psd(&m, DEFAULT_PINV_CUTOFF).unwrap();
            let norm = m.frobenius_norm();
            let mpm = &(&m * &p) * &m;
            assert!((&mpm - &m).frobenius_norm() < 1e-10 * norm);
            let ph = ComplexMatrix::from_fn(6, 6, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5);
            let pp = pinv_psd(&ph, DEFAULT_PINV_CUTOFF).unwrap();
            assert!(pp.max_abs_diff(&m) < 1e-9 * norm.max(1.0), "rank {rank}");
        }
    }
}
