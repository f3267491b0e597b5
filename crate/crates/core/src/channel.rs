//! Linear maps on M_n: Kraus sets, Choi matrices, channel action and adjoints.
//!
//! Choi layout: `S[k*n + a, j*n + b] = Phi(E_kj)[a, b]` (0-based here), i.e. the
//! n x n block at block position (k, j) is the image of the matrix unit E_kj.
//! Kraus operators act as `Phi(X) = sum_j A_j* X A_j`.

use crate::error::ChannelError;
use crate::linalg::{self, DEFAULT_PINV_CUTOFF};
use crate::matrix::{Complex, ComplexMatrix, ZERO};
use crate::qubit::{self, KingRuskaiForm};

/// Tolerance on `U*U - I` accepted by [`conjugate_channel`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    n: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let first = ops
            .first()
            .ok_or_else(|| ChannelError::DimensionMismatch("empty Kraus set".into()))?;
        let n = first.rows();
        for (i, a) in ops.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(ChannelError::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            a.check_finite()?;
        }
        Ok(Self { n, ops })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Direct evaluation of `sum_j A_j* X A_j`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        check_operand(self.n, x)?;
        let mut y = ComplexMatrix::zeros(self.n, self.n);
        for a in &self.ops {
            y = &y + &(&(&a.adjoint() * x) * a);
        }
        Ok(y)
    }
}

/// Choi matrix of a linear map on M_n. Hermiticity is not required here.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    s: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(n: usize, s: ComplexMatrix) -> Result<Self, ChannelError> {
        if n == 0 || s.rows() != n * n || s.cols() != n * n {
            return Err(ChannelError::DimensionMismatch(format!(
                "Choi matrix for n = {n} must be {0}x{0}, got {1}x{2}",
                n * n,
                s.rows(),
                s.cols()
            )));
        }
        s.check_finite()?;
        Ok(Self { n, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.s
    }

    /// `Phi(E_kj)[a, b]`.
    pub fn entry(&self, k: usize, j: usize, a: usize, b: usize) -> Complex {
        self.s[(k * self.n + a, j * self.n + b)]
    }

    /// The block `Phi(E_kj)`.
    pub fn block(&self, k: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |a, b| self.entry(k, j, a, b))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            s: self.s.scale_real(s),
        }
    }

    /// Choi matrix of `alpha * Phi + (1 - alpha) * Psi`.
    pub fn convex_combination(&self, other: &Self, alpha: f64) -> Result<Self, ChannelError> {
        if self.n != other.n {
            return Err(ChannelError::DimensionMismatch(format!(
                "cannot combine maps on M_{} and M_{}",
                self.n, other.n
            )));
        }
        Ok(Self {
            n: self.n,
            s: &self.s.scale_real(alpha) + &other.s.scale_real(1.0 - alpha),
        })
    }
}

/// The three ways a channel can be specified.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Kraus(KrausSet),
    Choi(ChoiMatrix),
    /// Qubit channel in King-Ruskai form (n = 2).
    PauliTransfer(KingRuskaiForm),
}

impl ChannelSpec {
    pub fn n(&self) -> usize {
        match self {
            Self::Kraus(k) => k.n(),
            Self::Choi(c) => c.n(),
            Self::PauliTransfer(_) => 2,
        }
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            Self::Kraus(k) => choi_from_kraus(k),
            Self::Choi(c) => c.clone(),
            Self::PauliTransfer(p) => qubit::choi_forward(p),
        }
    }
}

fn check_operand(n: usize, x: &ComplexMatrix) -> Result<(), ChannelError> {
    if x.rows() != n || x.cols() != n {
        return Err(ChannelError::DimensionMismatch(format!(
            "operand is {}x{}, expected {n}x{n}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// `S[(k,a),(j,b)] = sum_A conj(A[k,a]) A[j,b]`, a sum of rank-one PSD terms.
pub fn choi_from_kraus(kraus: &KrausSet) -> ChoiMatrix {
    let n = kraus.n;
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for a in &kraus.ops {
        let v: Vec<Complex> = a.as_slice().iter().map(|z| z.conj()).collect();
        for (x, vx) in v.iter().enumerate() {
            if *vx == ZERO {
                continue;
            }
            for (y, vy) in v.iter().enumerate() {
                s[(x, y)] += vx * vy.conj();
            }
        }
    }
    ChoiMatrix { n, s }
}

/// `Y[a,b] = sum_{l,m} Phi(E_lm)[a,b] X[l,m]`.
pub fn apply_channel(choi: &ChoiMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
    let n = choi.n;
    check_operand(n, x)?;
    let mut y = ComplexMatrix::zeros(n, n);
    for l in 0..n {
        for m in 0..n {
            let w = x[(l, m)];
            if w == ZERO {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    y[(a, b)] += choi.entry(l, m, a, b) * w;
                }
            }
        }
    }
    Ok(y)
}

/// Choi matrix of the Hilbert-Schmidt adjoint: `Phi^(E_kj)[l,m] = conj(Phi(E_lm)[k,j])`.
pub fn adjoint_choi(choi: &ChoiMatrix) -> ChoiMatrix {
    let n = choi.n;
    let s = ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (k, l) = (row / n, row % n);
        let (j, m) = (col / n, col % n);
        choi.entry(l, m, k, j).conj()
    });
    ChoiMatrix { n, s }
}

/// Blockwise traces form the identity: `Tr Phi(E_kj) = delta_kj`.
pub fn is_trace_preserving(choi: &ChoiMatrix, tol: f64) -> bool {
    let n = choi.n;
    (0..n).all(|k| {
        (0..n).all(|j| {
            let tr: Complex = (0..n).map(|a| choi.entry(k, j, a, a)).sum();
            let target = if k == j { 1.0 } else { 0.0 };
            (tr - target).norm() <= tol
        })
    })
}

/// `sum_l Phi(E_ll) = I`.
pub fn is_unital(choi: &ChoiMatrix, tol: f64) -> bool {
    let n = choi.n;
    (0..n).all(|a| {
        (0..n).all(|b| {
            let v: Complex = (0..n).map(|l| choi.entry(l, l, a, b)).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            (v - target).norm() <= tol
        })
    })
}

/// Minimal Kraus set from the spectral decomposition of S.
pub fn kraus_from_choi(choi: &ChoiMatrix, tol: f64) -> Result<KrausSet, ChannelError> {
    let n = choi.n;
    let eig = linalg::eig_hermitian(&choi.s)?;
    let min = eig.min_eigenvalue();
    if min < -tol * choi.s.frobenius_norm().max(1.0) {
        return Err(ChannelError::NotPsd {
            min_eigenvalue: min,
        });
    }
    let rank = eig.rank(DEFAULT_PINV_CUTOFF);
    let mut ops: Vec<ComplexMatrix> = (0..rank)
        .map(|col| {
            let w = eig.eigenvalues[col].sqrt();
            ComplexMatrix::from_fn(n, n, |k, a| (eig.eigenvectors[(k * n + a, col)] * w).conj())
        })
        .collect();
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(n, n));
    }
    KrausSet::new(ops)
}

fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.rows()))
}

/// Choi matrix of `A -> U Phi(V A V*) U*`.
pub fn conjugate_channel(
    choi: &ChoiMatrix,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<ChoiMatrix, ChannelError> {
    let n = choi.n;
    check_operand(n, u)?;
    check_operand(n, v)?;
    for w in [u, v] {
        let deviation = unitarity_deviation(w);
        if deviation > UNITARY_TOL {
            return Err(ChannelError::NotUnitary { deviation });
        }
    }
    let ud = u.adjoint();
    let blocks: Vec<ComplexMatrix> = (0..n * n).map(|i| choi.block(i / n, i % n)).collect();
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for k in 0..n {
        for j in 0..n {
            // V E_kj V* = sum_{l,m} V[l,k] conj(V[m,j]) E_lm
            let mut inner = ComplexMatrix::zeros(n, n);
            for l in 0..n {
                for m in 0..n {
                    let w = v[(l, k)] * v[(m, j)].conj();
                    if w != ZERO {
                        inner = &inner + &blocks[l * n + m].scale(w);
                    }
                }
            }
            let out = &(u * &inner) * &ud;
            for a in 0..n {
                for b in 0..n {
                    s[(k * n + a, j * n + b)] = out[(a, b)];
                }
            }
        }
    }
    Ok(ChoiMatrix { n, s })
}
