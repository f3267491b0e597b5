//! Schur parameters of positive matrices and the lattice test for complete positivity.
//!
//! A Hermitian N x N matrix S is positive semidefinite exactly when, after
//! normalizing to unit diagonal, every entry `S~_kj` lies in the closed disk
//! determined by the entries strictly inside the index window `[k, j]`. Walking
//! the matrix by increasing gap `j - k` and writing each entry as
//! `center + radius * gamma` yields a family of contractions `gamma_kj`, one per
//! upper-triangular position, which together with the diagonal determine S
//! uniquely and can be chosen freely. The walk doubles as a positivity test:
//! it fails at the first entry that leaves its disk.
//!
//! Centers and radii are computed with Schur complements over the window
//! interior `M = {k+1, ..., j-1}`:
//!
//! ```text
//! center = S~[k,M] S~[M,M]^+ S~[M,j]
//! radius = sqrt(S~kk - S~[k,M] S~[M,M]^+ S~[M,k]) * sqrt(S~jj - S~[j,M] S~[M,M]^+ S~[M,j])
//! ```
//!
//! The Schur complement is formed by double-double elimination over the window with
//! vanishing pivots skipped, which is the pseudo-inverse formula on collapsed
//! windows. An entry whose disk has radius at most `tol` is inactive: it carries no
//! freedom and must sit on the center.
//!
//! All indices in this module are 0-based; [`Location`] prints them 1-based.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use crate::channel::ChoiMatrix;
use crate::error::LatticeError;
use crate::linalg::DEFAULT_PINV_CUTOFF;
use crate::matrix::{Complex, ComplexMatrix, ONE, ZERO};
use crate::random::{complex_gaussian, uniform_disk};

/// Default relative tolerance for the lattice test.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Slack allowed on `|gamma| <= 1` for parameter families handed in by callers.
pub const PARAM_SLACK: f64 = 1e-12;
/// Radius of the disk `random_cp` samples parameters from.
pub const RANDOM_PARAM_RADIUS: f64 = 0.999;

/// One off-diagonal Schur parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffEntry {
    pub value: Complex,
    pub active: bool,
}

impl OffEntry {
    pub const INACTIVE: OffEntry = OffEntry {
        value: ZERO,
        active: false,
    };

    pub fn active(value: Complex) -> Self {
        Self {
            value,
            active: true,
        }
    }
}

/// The triangular family `{gamma_kj : k <= j}`: the diagonal plus one contraction per
/// upper-triangular position.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurParams {
    size: usize,
    diag: Vec<f64>,
    // full size x size table, only k < j is used
    off: Vec<OffEntry>,
}

impl SchurParams {
    /// Parameters with the given diagonal and every off-diagonal entry active and zero,
    /// i.e. the parameters of `diag(diag)` when the diagonal is positive.
    pub fn with_diag(diag: Vec<f64>) -> Self {
        let size = diag.len();
        let off = (0..size * size)
            .map(|i| {
                let (k, j) = (i / size, i % size);
                if diag[k] > 0.0 && diag[j] > 0.0 {
                    OffEntry::active(ZERO)
                } else {
                    OffEntry::INACTIVE
                }
            })
            .collect();
        Self { size, diag, off }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Entry `(k, j)` with `k < j`.
    pub fn get(&self, k: usize, j: usize) -> Result<OffEntry, LatticeError> {
        if k >= j || j >= self.size {
            return Err(LatticeError::UndefinedParameter { k, j });
        }
        Ok(self.off[k * self.size + j])
    }

    pub fn set(&mut self, k: usize, j: usize, entry: OffEntry) -> Result<(), LatticeError> {
        if k >= j || j >= self.size {
            return Err(LatticeError::UndefinedParameter { k, j });
        }
        self.off[k * self.size + j] = entry;
        Ok(())
    }

    /// Off-diagonal entries in traversal order: increasing gap, then increasing row.
    pub fn iter_off(&self) -> impl Iterator<Item = (usize, usize, OffEntry)> + '_ {
        traversal(self.size).map(move |(k, j)| (k, j, self.off[k * self.size + j]))
    }

    /// Checks the family invariants: finite nonnegative diagonal, active entries in the
    /// closed unit disk (up to [`PARAM_SLACK`]), inactive entries zero.
    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.size == 0 {
            return Err(LatticeError::InvariantViolation(
                "empty parameter family".into(),
            ));
        }
        for (k, &d) in self.diag.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(LatticeError::InvariantViolation(format!(
                    "diagonal entry {} is {d}",
                    k + 1
                )));
            }
        }
        for (k, j, e) in self.iter_off() {
            let m = e.value.norm();
            if !m.is_finite() {
                return Err(LatticeError::InvariantViolation(format!(
                    "entry ({}, {}) is not finite",
                    k + 1,
                    j + 1
                )));
            }
            if e.active && m > 1.0 + PARAM_SLACK {
                return Err(LatticeError::InvariantViolation(format!(
                    "|gamma_({},{})| = {m} exceeds 1",
                    k + 1,
                    j + 1
                )));
            }
            if !e.active && e.value != ZERO {
                return Err(LatticeError::InvariantViolation(format!(
                    "inactive entry ({}, {}) carries a nonzero value",
                    k + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

fn traversal(size: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..size).flat_map(move |gap| (0..size - gap).map(move |k| (k, k + gap)))
}

/// Where a violation was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Index(usize),
    Pair(usize, usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Index(k) => write!(f, "{}", k + 1),
            Self::Pair(k, j) => write!(f, "({}, {})", k + 1, j + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NegativeDiagonal,
    NonzeroRowAtZeroDiagonal,
    ParameterExceedsDisk,
    CompatibilityResidual,
    NotHermitian,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::NegativeDiagonal => "NegativeDiagonal",
            Self::NonzeroRowAtZeroDiagonal => "NonzeroRowAtZeroDiagonal",
            Self::ParameterExceedsDisk => "ParameterExceedsDisk",
            Self::CompatibilityResidual => "CompatibilityResidual",
            Self::NotHermitian => "NotHermitian",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The first obstruction to positivity met by the walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    pub magnitude: f64,
    /// The offending parameter, for [`ViolationKind::ParameterExceedsDisk`].
    pub value: Option<Complex>,
}

impl Violation {
    fn new(kind: ViolationKind, location: Location, magnitude: f64) -> Self {
        Self {
            kind,
            location,
            magnitude,
            value: None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {} (magnitude {:.6e})",
            self.kind, self.location, self.magnitude
        )
    }
}

impl From<Violation> for LatticeError {
    fn from(v: Violation) -> Self {
        LatticeError::Violation(v)
    }
}

/// Outcome of the complete-positivity test, with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum CpVerdict {
    Cp(SchurParams),
    NotCp(Violation),
}

impl CpVerdict {
    pub fn is_cp(&self) -> bool {
        matches!(self, Self::Cp(_))
    }

    pub fn params(&self) -> Option<&SchurParams> {
        match self {
            Self::Cp(p) => Some(p),
            Self::NotCp(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Self::Cp(_) => None,
            Self::NotCp(v) => Some(v),
        }
    }
}

/// Disk that a normalized entry must lie in, given the entries inside its window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskGeometry {
    pub center: Complex,
    pub radius: f64,
}

/// `sqrt(1 - |gamma|^2)`.
pub fn defect(gamma: Complex) -> Result<f64, LatticeError> {
    let m2 = gamma.norm_sqr();
    if m2 > (1.0 + PARAM_SLACK) * (1.0 + PARAM_SLACK) {
        return Err(LatticeError::OutsideUnitDisk { modulus: m2.sqrt() });
    }
    Ok((1.0 - m2).max(0.0).sqrt())
}

/// The unitary `[[gamma, D], [D, -conj(gamma)]]` with `D = defect(gamma)`.
pub fn elementary_rotation(gamma: Complex) -> Result<ComplexMatrix, LatticeError> {
    let d = Complex::new(defect(gamma)?, 0.0);
    Ok(ComplexMatrix::from_rows(&[[gamma, d], [d, -gamma.conj()]]))
}

fn check_square(s: &ComplexMatrix) -> Result<(), LatticeError> {
    if !s.is_square() || s.rows() == 0 {
        return Err(LatticeError::DimensionMismatch(format!(
            "expected a nonempty square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    Ok(())
}

/// Absolute tolerance for diagonal and zero-row decisions: `tol * max(1, max diagonal)`.
fn scaled_tol(s: &ComplexMatrix, tol: f64) -> f64 {
    let max_diag = (0..s.rows()).map(|k| s[(k, k)].re).fold(0.0, f64::max);
    tol * max_diag.max(1.0)
}

/// Scales S to unit diagonal. Rows and columns with a (numerically) zero diagonal are
/// zeroed out entirely, diagonal included; they must already be zero up to tolerance.
///
/// Returns the normalized matrix and the original diagonal.
pub fn normalize(s: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, Vec<f64>), LatticeError> {
    check_square(s)?;
    s.check_finite()?;
    let n = s.rows();
    let abs_tol = scaled_tol(s, tol);

    let (asym, (r, c)) = s.max_asymmetry();
    if asym > abs_tol {
        return Err(Violation::new(ViolationKind::NotHermitian, Location::Pair(r, c), asym).into());
    }

    let d: Vec<f64> = (0..n).map(|k| s[(k, k)].re).collect();
    let mut live = vec![true; n];
    for k in 0..n {
        if d[k] < -abs_tol {
            return Err(
                Violation::new(ViolationKind::NegativeDiagonal, Location::Index(k), d[k]).into(),
            );
        }
        if d[k] <= abs_tol {
            let worst = (0..n)
                .filter(|&j| j != k)
                .map(|j| s[(k, j)].norm())
                .fold(0.0, f64::max);
            if worst > abs_tol {
                return Err(Violation::new(
                    ViolationKind::NonzeroRowAtZeroDiagonal,
                    Location::Index(k),
                    worst,
                )
                .into());
            }
            live[k] = false;
        }
    }

    let scale: Vec<f64> = d.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let normalized = ComplexMatrix::from_fn(n, n, |k, j| {
        if !(live[k] && live[j]) {
            ZERO
        } else if k == j {
            ONE
        } else {
            s[(k, j)] / (scale[k] * scale[j])
        }
    });
    Ok((normalized, d))
}

/// Center and radius of the disk for entry `(k, j)` of a normalized matrix, computed from
/// entries strictly inside the window `[k, j]` and the two diagonal entries.
pub fn disk_geometry(
    s_tilde: &ComplexMatrix,
    k: usize,
    j: usize,
    tol: f64,
) -> Result<DiskGeometry, LatticeError> {
    check_square(s_tilde)?;
    if k >= j || j >= s_tilde.rows() {
        return Err(LatticeError::UndefinedParameter { k, j });
    }
    let (offset, radius) = wide_disk(|r, c| widen(s_tilde[(r, c)]), k, j, tol)?;
    Ok(DiskGeometry {
        center: s_tilde[(k, j)] - narrow(offset),
        radius: f64::from(radius),
    })
}

type Wide = num_complex::Complex<TwoFloat>;

fn widen(z: Complex) -> Wide {
    Wide::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn narrow(z: Wide) -> Complex {
    Complex::new(f64::from(z.re), f64::from(z.im))
}

/// Double-double reciprocal: one Newton step from the f64 reciprocal. `TwoFloat`'s own
/// division only reaches f64 accuracy.
fn recip(x: TwoFloat) -> TwoFloat {
    let r0 = TwoFloat::from(x.hi().recip());
    let e = TwoFloat::from(1.0) - x * r0;
    r0 + r0 * e
}

/// Offset `S~kj - center` and radius of the disk for `(k, j)`, read through `entry`.
///
/// The 2 x 2 Schur complement of the interior block is formed by Gaussian elimination
/// on the window ordered as `[k+1, ..., j-1, k, j]` in double-double arithmetic.
/// Pivots at or below the cutoff are skipped, which agrees with the pseudo-inverse
/// formula whenever the window is positive semidefinite.
fn wide_disk(
    entry: impl Fn(usize, usize) -> Wide,
    k: usize,
    j: usize,
    tol: f64,
) -> Result<(Wide, TwoFloat), LatticeError> {
    let m = j - k - 1;
    let order: Vec<usize> = (k + 1..j).chain([k, j]).collect();
    let w = m + 2;
    let mut a: Vec<Wide> = Vec::with_capacity(w * w);
    for &r in &order {
        a.extend(order.iter().map(|&c| entry(r, c)));
    }
    let allowed = 2.0 * tol * m as f64;
    for p in 0..m {
        let pivot = a[p * w + p].re;
        if pivot.hi() < -allowed {
            return Err(LatticeError::IntermediateBlockNotPsd {
                min_eigenvalue: pivot.hi(),
            });
        }
        if pivot.hi() <= DEFAULT_PINV_CUTOFF {
            continue;
        }
        let inv = recip(pivot);
        for r in p + 1..w {
            let factor = a[r * w + p] * inv;
            for c in p + 1..w {
                let update = factor * a[p * w + c];
                a[r * w + c] -= update;
            }
        }
    }
    let (dk2, dj2) = (a[m * w + m].re, a[(m + 1) * w + m + 1].re);
    for d2 in [dk2, dj2] {
        if d2.hi() < -tol {
            return Err(LatticeError::IntermediateBlockNotPsd {
                min_eigenvalue: d2.hi(),
            });
        }
    }
    let zero = TwoFloat::from(0.0);
    let root = |x: TwoFloat| if x > zero { x.sqrt() } else { zero };
    Ok((a[m * w + m + 1], root(dk2) * root(dj2)))
}

fn entry_value(params: &SchurParams, k: usize, j: usize) -> Result<Complex, LatticeError> {
    params.get(k, j).map(|e| e.value)
}

/// `[gamma_{k,k+1}, D_{k,k+1} gamma_{k,k+2}, ..., D_{k,k+1} ... D_{k,j-1} gamma_kj]`.
pub fn row_contraction(
    params: &SchurParams,
    k: usize,
    j: usize,
) -> Result<Vec<Complex>, LatticeError> {
    if k >= j || j >= params.size() {
        return Err(LatticeError::UndefinedParameter { k, j });
    }
    let mut out = Vec::with_capacity(j - k);
    let mut prefix = 1.0;
    for m in k + 1..=j {
        let g = entry_value(params, k, m)?;
        out.push(g * prefix);
        prefix *= defect(g)?;
    }
    Ok(out)
}

/// `[gamma_{j-1,j}, gamma_{j-2,j} D_{j-1,j}, ..., gamma_kj D_{k+1,j} ... D_{j-1,j}]`.
pub fn column_contraction(
    params: &SchurParams,
    k: usize,
    j: usize,
) -> Result<Vec<Complex>, LatticeError> {
    if k >= j || j >= params.size() {
        return Err(LatticeError::UndefinedParameter { k, j });
    }
    let mut out = Vec::with_capacity(j - k);
    let mut prefix = 1.0;
    for m in (k..j).rev() {
        let g = entry_value(params, m, j)?;
        out.push(g * prefix);
        prefix *= defect(g)?;
    }
    Ok(out)
}

/// Extracts the Schur parameters of a Hermitian matrix, failing at the first obstruction
/// to positivity (reported as [`LatticeError::Violation`]).
pub fn schur_params_from_matrix(s: &ComplexMatrix, tol: f64) -> Result<SchurParams, LatticeError> {
    let (s_tilde, d) = normalize(s, tol)?;
    let size = s.rows();
    // normalized entries recomputed from S in double-double, so that the only rounding
    // is the one already present in S
    let scale: Vec<TwoFloat> = d
        .iter()
        .zip(0..size)
        .map(|(&x, k)| {
            if s_tilde[(k, k)] == ONE {
                TwoFloat::from(x).sqrt()
            } else {
                TwoFloat::from(0.0)
            }
        })
        .collect();
    let wide: Vec<Wide> = (0..size * size)
        .map(|i| {
            let (r, c) = (i / size, i % size);
            if r == c || s_tilde[(r, c)] == ZERO {
                widen(s_tilde[(r, c)])
            } else {
                widen(s[(r, c)]) * recip(scale[r] * scale[c])
            }
        })
        .collect();
    let mut params = SchurParams {
        size,
        diag: d.iter().map(|&x| x.max(0.0)).collect(),
        off: vec![OffEntry::INACTIVE; size * size],
    };
    for (k, j) in traversal(size) {
        let (offset, radius) =
            wide_disk(|r, c| wide[r * size + c], k, j, tol).map_err(|e| match e {
                LatticeError::IntermediateBlockNotPsd { min_eigenvalue } => Violation::new(
                    ViolationKind::CompatibilityResidual,
                    Location::Pair(k, j),
                    min_eigenvalue.abs(),
                )
                .into(),
                other => other,
            })?;
        let entry = if f64::from(radius) > tol {
            let mut gamma = narrow(offset * recip(radius));
            let m = gamma.norm();
            if m > 1.0 + tol {
                return Err(Violation {
                    kind: ViolationKind::ParameterExceedsDisk,
                    location: Location::Pair(k, j),
                    magnitude: m,
                    value: Some(gamma),
                }
                .into());
            }
            if m > 1.0 {
                gamma /= m;
            }
            OffEntry::active(gamma)
        } else {
            let residual = narrow(offset).norm();
            if residual > tol {
                return Err(Violation::new(
                    ViolationKind::CompatibilityResidual,
                    Location::Pair(k, j),
                    residual,
                )
                .into());
            }
            OffEntry::INACTIVE
        };
        params.off[k * size + j] = entry;
    }
    Ok(params)
}

/// Rebuilds the unique matrix with the given Schur parameters.
pub fn matrix_from_schur_params(params: &SchurParams) -> Result<ComplexMatrix, LatticeError> {
    params.validate()?;
    let size = params.size;
    let s_tilde = match rotation_gram(params) {
        Some(g) => g,
        None => elimination_prefix(params)?,
    };
    let scale: Vec<TwoFloat> = params
        .diag
        .iter()
        .map(|&d| TwoFloat::from(d).sqrt())
        .collect();
    Ok(ComplexMatrix::from_fn(size, size, |k, j| {
        if k == j {
            Complex::new(params.diag[k], 0.0)
        } else {
            narrow(s_tilde[k * size + j] * (scale[k] * scale[j]))
        }
    }))
}

/// Normalized matrix for a nondegenerate family (positive diagonal, every parameter
/// active and strictly inside the unit disk), as the Gram matrix of vectors produced by
/// the rotation cascade. For column j the innovation `e_j` is rotated against the
/// backward residuals `b_k` of the earlier columns:
///
/// ```text
/// [f; b_k] <- [[D, gamma_kj], [-conj(gamma_kj), D]] [f; b_k],   k = 0, ..., j-1
/// ```
///
/// after which `f` is the j-th vector. Only unitary steps are involved, so the result
/// does not degrade with the conditioning of the matrix.
fn rotation_gram(params: &SchurParams) -> Option<Vec<Wide>> {
    let size = params.size;
    if params.diag.iter().any(|&d| d <= 0.0)
        || params
            .iter_off()
            .any(|(_, _, e)| !e.active || e.value.norm() >= 1.0)
    {
        return None;
    }
    let zero = widen(ZERO);
    let mut vectors: Vec<Vec<Wide>> = Vec::with_capacity(size);
    let mut backward: Vec<Vec<Wide>> = Vec::with_capacity(size);
    for j in 0..size {
        let mut f = vec![zero; size];
        f[j] = widen(ONE);
        for (k, b) in backward.iter_mut().enumerate() {
            let gamma = widen(params.off[k * size + j].value);
            let modulus2 = gamma.re * gamma.re + gamma.im * gamma.im;
            let d = widen(ZERO) + (TwoFloat::from(1.0) - modulus2).sqrt();
            for i in 0..=j {
                let (fi, bi) = (f[i], b[i]);
                f[i] = d * fi + gamma * bi;
                b[i] = d * bi - gamma.conj() * fi;
            }
        }
        backward.push(f.clone());
        vectors.push(f);
    }
    let mut gram = vec![zero; size * size];
    for k in 0..size {
        for j in k..size {
            let mut acc = zero;
            for (x, y) in vectors[k][..=k].iter().zip(&vectors[j]) {
                acc += x.conj() * y;
            }
            gram[k * size + j] = acc;
            gram[j * size + k] = acc.conj();
        }
    }
    Some(gram)
}

/// Normalized matrix built entry by entry from disks over the already rebuilt prefix.
fn elimination_prefix(params: &SchurParams) -> Result<Vec<Wide>, LatticeError> {
    let size = params.size;
    let zero = Wide::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    let mut s_tilde = vec![zero; size * size];
    for k in 0..size {
        if params.diag[k] > 0.0 {
            s_tilde[k * size + k] = widen(ONE);
        }
    }
    for (k, j, entry) in params.iter_off() {
        let (offset, radius) = wide_disk(|r, c| s_tilde[r * size + c], k, j, DEFAULT_TOL)?;
        // the (k, j) slot still holds zero, so the offset is minus the center
        let center = -offset;
        let mut gamma = entry.value;
        if gamma.norm() > 1.0 {
            gamma /= gamma.norm();
        }
        let value = if entry.active {
            center + widen(gamma) * radius
        } else {
            center
        };
        s_tilde[k * size + j] = value;
        s_tilde[j * size + k] = value.conj();
    }
    Ok(s_tilde)
}

/// Lattice test on a bare Hermitian matrix. Never fails: every problem is a verdict.
pub fn cp_test_matrix(s: &ComplexMatrix, tol: f64) -> CpVerdict {
    match schur_params_from_matrix(s, tol) {
        Ok(p) => CpVerdict::Cp(p),
        Err(LatticeError::Violation(v)) => CpVerdict::NotCp(v),
        Err(other) => {
            // Only reachable for malformed input (non-square or non-finite data).
            let magnitude = match other {
                LatticeError::IntermediateBlockNotPsd { min_eigenvalue } => min_eigenvalue.abs(),
                _ => f64::INFINITY,
            };
            CpVerdict::NotCp(Violation::new(
                ViolationKind::NotHermitian,
                Location::Index(0),
                magnitude,
            ))
        }
    }
}

/// Complete-positivity test of a linear map given by its Choi matrix.
pub fn cp_test(choi: &ChoiMatrix, tol: f64) -> CpVerdict {
    cp_test_matrix(choi.matrix(), tol)
}

/// Deterministic random CP map on M_n: diagonal from squared moduli of standard complex
/// Gaussians, every off-diagonal parameter uniform on the disk of radius 0.999.
pub fn random_cp(n: usize, seed: u64) -> ChoiMatrix {
    let size = n * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag: Vec<f64> = (0..size)
        .map(|_| complex_gaussian(&mut rng).norm_sqr())
        .collect();
    let mut params = SchurParams::with_diag(diag);
    for (k, j) in traversal(size).collect::<Vec<_>>() {
        let g = uniform_disk(&mut rng, RANDOM_PARAM_RADIUS);
        params.off[k * size + j] = OffEntry::active(g);
    }
    let s = matrix_from_schur_params(&params).expect("sampled parameters are valid");
    ChoiMatrix::new(n, s).expect("size matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn defect_examples() {
        assert_eq!(defect(ZERO).unwrap(), 1.0);
        assert_eq!(defect(ONE).unwrap(), 0.0);
        assert!((defect(c(0.6, 0.0)).unwrap() - 0.8).abs() < 1e-15);
        assert!(matches!(
            defect(c(1.1, 0.0)),
            Err(LatticeError::OutsideUnitDisk { .. })
        ));
    }

    #[test]
    fn rotation_examples() {
        let r0 = elementary_rotation(ZERO).unwrap();
        assert_eq!(r0, ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]));
        let r1 = elementary_rotation(ONE).unwrap();
        assert_eq!(
            r1,
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
        );
        let g = c(0.3, -0.5);
        let u = elementary_rotation(g).unwrap();
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(elementary_rotation(c(0.0, 2.0)).is_err());
    }

    #[test]
    fn normalize_diagonal() {
        let (st, d) = normalize(&ComplexMatrix::from_diag(&[4.0, 9.0]), DEFAULT_TOL).unwrap();
        assert_eq!(d, vec![4.0, 9.0]);
        assert_eq!(st, ComplexMatrix::identity(2));
    }

    #[test]
    fn normalize_identity_channel() {
        let s = ComplexMatrix::from_real_rows(&[
            [2.0, 0.0, 0.0, 2.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [2.0, 0.0, 0.0, 2.0],
        ]);
        let (st, d) = normalize(&s, DEFAULT_TOL).unwrap();
        assert_eq!(d, vec![2.0, 0.0, 0.0, 2.0]);
        let expected = ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
        ]);
        assert!(st.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn normalize_errors() {
        let s = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 1.0]]);
        match normalize(&s, DEFAULT_TOL) {
            Err(LatticeError::Violation(v)) => {
                assert_eq!(v.kind, ViolationKind::NonzeroRowAtZeroDiagonal);
                assert_eq!(v.location, Location::Index(0));
            }
            other => panic!("unexpected {other:?}"),
        }
        let neg = ComplexMatrix::from_diag(&[1.0, -0.5]);
        match normalize(&neg, DEFAULT_TOL) {
            Err(LatticeError::Violation(v)) => {
                assert_eq!(v.kind, ViolationKind::NegativeDiagonal);
                assert_eq!(v.location, Location::Index(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        let skew = ComplexMatrix::from_rows(&[[ONE, c(0.0, 0.5)], [c(0.0, 0.5), ONE]]);
        match normalize(&skew, DEFAULT_TOL) {
            Err(LatticeError::Violation(v)) => assert_eq!(v.kind, ViolationKind::NotHermitian),
            other => panic!("unexpected {other:?}"),
        }
        let complex_diag = ComplexMatrix::from_rows(&[[c(1.0, 0.1), ZERO], [ZERO, ONE]]);
        match normalize(&complex_diag, DEFAULT_TOL) {
            Err(LatticeError::Violation(v)) => assert_eq!(v.kind, ViolationKind::NotHermitian),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn params_from(
        size: usize,
        diag: Vec<f64>,
        entries: &[((usize, usize), Complex)],
    ) -> SchurParams {
        let mut p = SchurParams::with_diag(diag);
        assert_eq!(p.size(), size);
        for &((k, j), g) in entries {
            p.set(k, j, OffEntry::active(g)).unwrap();
        }
        p
    }

    #[test]
    fn gap_two_disk_from_reconstruction() {
        let g01 = c(0.3, 0.4);
        let g12 = c(-0.5, 0.2);
        let p = params_from(3, vec![1.0; 3], &[((0, 1), g01), ((1, 2), g12)]);
        let s = matrix_from_schur_params(&p).unwrap();
        let geom = disk_geometry(&s, 0, 2, DEFAULT_TOL).unwrap();
        assert!((geom.center - g01 * g12).norm() < 1e-14);
        let expected = defect(g01).unwrap() * defect(g12).unwrap();
        assert!((geom.radius - expected).abs() < 1e-14);
    }

    #[test]
    fn empty_and_zero_window() {
        let s = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 1.0]);
        let geom = disk_geometry(&s, 0, 3, DEFAULT_TOL).unwrap();
        assert_eq!(geom.center, ZERO);
        assert_eq!(geom.radius, 1.0);
        let geom = disk_geometry(&s, 0, 1, DEFAULT_TOL).unwrap();
        assert_eq!(geom.radius, 0.0);
        assert!(matches!(
            disk_geometry(&s, 2, 1, DEFAULT_TOL),
            Err(LatticeError::UndefinedParameter { .. })
        ));
    }

    #[test]
    fn contraction_examples() {
        let mut p = SchurParams::with_diag(vec![1.0; 4]);
        assert!(row_contraction(&p, 0, 3)
            .unwrap()
            .iter()
            .all(|z| *z == ZERO));
        assert!(column_contraction(&p, 0, 3)
            .unwrap()
            .iter()
            .all(|z| *z == ZERO));
        p.set(0, 1, OffEntry::active(c(0.6, 0.0))).unwrap();
        p.set(0, 2, OffEntry::active(ONE)).unwrap();
        assert_eq!(row_contraction(&p, 0, 1).unwrap(), vec![c(0.6, 0.0)]);
        let r = row_contraction(&p, 0, 2).unwrap();
        assert!((r[0] - c(0.6, 0.0)).norm() < 1e-15 && (r[1] - c(0.8, 0.0)).norm() < 1e-15);

        let mut q = SchurParams::with_diag(vec![1.0; 4]);
        q.set(2, 3, OffEntry::active(c(0.6, 0.0))).unwrap();
        q.set(1, 3, OffEntry::active(ONE)).unwrap();
        assert_eq!(column_contraction(&q, 2, 3).unwrap(), vec![c(0.6, 0.0)]);
        let col = column_contraction(&q, 1, 3).unwrap();
        assert!((col[0] - c(0.6, 0.0)).norm() < 1e-15 && (col[1] - c(0.8, 0.0)).norm() < 1e-15);
        assert!(row_contraction(&q, 3, 3).is_err());
    }

    #[test]
    fn identity_matrix_params() {
        let p = schur_params_from_matrix(&ComplexMatrix::identity(4), DEFAULT_TOL).unwrap();
        assert_eq!(p.diag(), &[1.0; 4]);
        assert!(p.iter_off().all(|(_, _, e)| e.active && e.value == ZERO));
    }

    #[test]
    fn identity_channel_params() {
        let s = ComplexMatrix::from_real_rows(&[
            [2.0, 0.0, 0.0, 2.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [2.0, 0.0, 0.0, 2.0],
        ]);
        let p = schur_params_from_matrix(&s, DEFAULT_TOL).unwrap();
        assert_eq!(p.diag(), &[2.0, 0.0, 0.0, 2.0]);
        for (k, j, e) in p.iter_off() {
            if (k, j) == (0, 3) {
                assert!(e.active);
                assert!((e.value - ONE).norm() < 1e-15);
            } else {
                assert!(!e.active, "({k},{j}) should be inactive");
            }
        }
        let back = matrix_from_schur_params(&p).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-14);
    }

    #[test]
    fn depolarizing_violation_certificate() {
        // t = 0, lambda = -1/2 on all axes: diag (0.5, 1.5, 1.5, 0.5), corner entry -1
        let s = ComplexMatrix::from_real_rows(&[
            [0.5, 0.0, 0.0, -1.0],
            [0.0, 1.5, 0.0, 0.0],
            [0.0, 0.0, 1.5, 0.0],
            [-1.0, 0.0, 0.0, 0.5],
        ]);
        match cp_test_matrix(&s, DEFAULT_TOL) {
            CpVerdict::NotCp(v) => {
                assert_eq!(v.kind, ViolationKind::ParameterExceedsDisk);
                assert_eq!(v.location, Location::Pair(0, 3));
                assert!((v.value.unwrap() - c(-2.0, 0.0)).norm() < 1e-14);
                assert!((v.magnitude - 2.0).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!linalg::is_psd_oracle(&s, 1e-10).unwrap());
    }

    #[test]
    fn compatibility_residual_on_collapsed_disk() {
        // rank-one 2x2 window forces the (1,3) entry onto the center
        let s = ComplexMatrix::from_real_rows(&[[1.0, 1.0, 0.5], [1.0, 1.0, 0.0], [0.5, 0.0, 1.0]]);
        match cp_test_matrix(&s, DEFAULT_TOL) {
            CpVerdict::NotCp(v) => {
                assert_eq!(v.kind, ViolationKind::CompatibilityResidual);
                assert_eq!(v.location, Location::Pair(0, 2));
                assert!((v.magnitude - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!linalg::is_psd_oracle(&s, 1e-10).unwrap());
    }

    #[test]
    fn diag_only_reconstruction() {
        let p = SchurParams::with_diag(vec![1.0, 2.0, 0.0, 3.0]);
        let s = matrix_from_schur_params(&p).unwrap();
        assert_eq!(s, ComplexMatrix::from_diag(&[1.0, 2.0, 0.0, 3.0]));
    }

    #[test]
    fn reconstruction_rejects_invalid_params() {
        let mut p = SchurParams::with_diag(vec![1.0; 3]);
        p.set(0, 2, OffEntry::active(c(1.5, 0.0))).unwrap();
        assert!(matches!(
            matrix_from_schur_params(&p),
            Err(LatticeError::InvariantViolation(_))
        ));
        let q = SchurParams::with_diag(vec![1.0, -1.0]);
        assert!(matches!(
            matrix_from_schur_params(&q),
            Err(LatticeError::InvariantViolation(_))
        ));
    }

    #[test]
    fn random_cp_is_deterministic_and_cp() {
        let a = random_cp(2, 7);
        let b = random_cp(2, 7);
        assert_eq!(a, b);
        assert!(cp_test(&a, DEFAULT_TOL).is_cp());
        assert!(linalg::is_psd_oracle(a.matrix(), 1e-10).unwrap());
        assert_ne!(random_cp(2, 8), a);
    }

    #[test]
    fn random_cp_n3_batch() {
        for seed in 1..=100 {
            let c = random_cp(3, seed);
            assert!(
                linalg::is_psd_oracle(c.matrix(), 1e-10).unwrap(),
                "seed {seed}"
            );
            assert!(cp_test(&c, DEFAULT_TOL).is_cp(), "seed {seed}");
        }
    }

    #[test]
    fn location_display_is_one_based() {
        assert_eq!(Location::Pair(0, 3).to_string(), "(1, 4)");
        assert_eq!(Location::Index(1).to_string(), "2");
    }
}
