//! Random matrix ensembles used for sampling channels and for property tests.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{Complex, ComplexMatrix};

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2), so E|z|^2 = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform sample from the closed disk of the given radius.
pub fn uniform_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex::from_polar(r, theta)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Hermitian matrix (G + G*)/2 with Gaussian G; exactly Hermitian in floating point.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(g[(i, i)].re, 0.0)
        } else if i < j {
            (g[(i, j)] + g[(j, i)].conj()) * 0.5
        } else {
            ((g[(j, i)] + g[(i, j)].conj()) * 0.5).conj()
        }
    })
}

/// PSD matrix A A* with A of shape n x rank, made exactly Hermitian.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let a = gaussian_matrix(rng, n, rank);
    let p = &a * &a.adjoint();
    hermitize(&p)
}

/// Upper triangle copied onto the lower one (conjugated), real diagonal.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(m[(i, i)].re, 0.0)
        } else if i < j {
            m[(i, j)]
        } else {
            m[(j, i)].conj()
        }
    })
}

/// Haar-distributed unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for u in &cols {
                let dot: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 5);
        let uu = &u.adjoint() * &u;
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-13);
    }

    #[test]
    fn hermitian_generators_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(random_hermitian(&mut rng, 6).max_asymmetry().0, 0.0);
        assert_eq!(random_psd(&mut rng, 6, 3).max_asymmetry().0, 0.0);
    }

    #[test]
    fn disk_samples_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..1000).all(|_| uniform_disk(&mut rng, 0.999).norm() <= 0.999));
    }
}
