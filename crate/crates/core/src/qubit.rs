//! Qubit channels in King-Ruskai form and their closed-form Schur parameters.
//!
//! A qubit channel `A -> U Phi_{t,Lambda}(V A V*) U*` is reduced to the map
//! `Phi_{t,Lambda}` whose transfer matrix in the Pauli basis `{I, X, Y, Z}` is
//!
//! ```text
//! [ 1   0   0   0  ]
//! [ t1  l1  0   0  ]
//! [ t2  0   l2  0  ]
//! [ t3  0   0   l3 ]
//! ```
//!
//! The analysis matrix is `S = 2 * S_adj`, twice the Choi matrix of the adjoint map.
//! Its structure (`S_12 = S_34 = 0`) makes every Schur parameter explicit.
//! Indices in doc comments below are 1-based to match the usual notation; the
//! API itself is 0-based.

use crate::channel::ChoiMatrix;
use crate::lattice::{CpVerdict, Location, OffEntry, SchurParams, Violation, ViolationKind};
use crate::matrix::{Complex, ComplexMatrix, ONE, ZERO};

/// Canonical qubit channel parameters: translation `t` and axis scalings `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KingRuskaiForm {
    pub t: [f64; 3],
    pub lambda: [f64; 3],
}

impl KingRuskaiForm {
    /// Returns `None` if any parameter is not finite.
    pub fn new(t: [f64; 3], lambda: [f64; 3]) -> Option<Self> {
        t.iter()
            .chain(&lambda)
            .all(|x| x.is_finite())
            .then_some(Self { t, lambda })
    }

    pub fn identity() -> Self {
        Self {
            t: [0.0; 3],
            lambda: [1.0; 3],
        }
    }

    /// `Lambda = (l, l, l)`, `t = 0`.
    pub fn depolarizing(l: f64) -> Self {
        Self {
            t: [0.0; 3],
            lambda: [l; 3],
        }
    }

    /// `(1+t3+l3, 1+t3-l3, 1-t3-l3, 1-t3+l3)`: the diagonal of `2 * S_adj`.
    pub fn gamma_diag(&self) -> [f64; 4] {
        let [_, _, t3] = self.t;
        let l3 = self.lambda[2];
        [1.0 + t3 + l3, 1.0 + t3 - l3, 1.0 - t3 - l3, 1.0 - t3 + l3]
    }

    fn tau(&self) -> Complex {
        Complex::new(self.t[0], self.t[1])
    }

    fn delta(&self) -> f64 {
        self.lambda[0] - self.lambda[1]
    }

    fn sigma(&self) -> f64 {
        self.lambda[0] + self.lambda[1]
    }
}

pub fn pauli_basis() -> [ComplexMatrix; 4] {
    let i = Complex::new(0.0, 1.0);
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        ComplexMatrix::from_rows(&[[ZERO, -i], [i, ZERO]]),
        ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
    ]
}

/// The real 4x4 transfer matrix in the Pauli basis.
pub fn transfer_matrix(p: &KingRuskaiForm) -> ComplexMatrix {
    let [t1, t2, t3] = p.t;
    let [l1, l2, l3] = p.lambda;
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [t1, l1, 0.0, 0.0],
        [t2, 0.0, l2, 0.0],
        [t3, 0.0, 0.0, l3],
    ])
}

/// Choi matrix of the qubit map with transfer matrix `transfer` (acting on Pauli
/// coefficient vectors), built blockwise from `Phi(E_kj)`.
pub fn choi_from_transfer(transfer: &ComplexMatrix) -> ChoiMatrix {
    let basis = pauli_basis();
    let mut s = ComplexMatrix::zeros(4, 4);
    for k in 0..2 {
        for j in 0..2 {
            // E_kj = 1/2 sum_b Tr(sigma_b E_kj) sigma_b, and Tr(sigma_b E_kj) = sigma_b[j, k]
            let w: Vec<Complex> = basis.iter().map(|sb| sb[(j, k)]).collect();
            let mut image = ComplexMatrix::zeros(2, 2);
            for (a, sa) in basis.iter().enumerate() {
                let coeff: Complex = (0..4).map(|b| transfer[(a, b)] * w[b]).sum::<Complex>() * 0.5;
                image = &image + &sa.scale(coeff);
            }
            for a in 0..2 {
                for b in 0..2 {
                    s[(2 * k + a, 2 * j + b)] = image[(a, b)];
                }
            }
        }
    }
    ChoiMatrix::new(2, s).expect("4x4 Choi matrix")
}

/// `S_Phi` written out entrywise.
pub fn choi_forward(p: &KingRuskaiForm) -> ChoiMatrix {
    let [t1, t2, t3] = p.t;
    let [l1, l2, l3] = p.lambda;
    let r = |x: f64| Complex::new(x, 0.0);
    let minus = Complex::new(t1, -t2);
    let plus = Complex::new(t1, t2);
    let s = ComplexMatrix::from_rows(&[
        [r(1.0 + t3 + l3), minus, ZERO, r(l1 + l2)],
        [plus, r(1.0 - t3 - l3), r(l1 - l2), ZERO],
        [ZERO, r(l1 - l2), r(1.0 + t3 - l3), minus],
        [r(l1 + l2), ZERO, plus, r(1.0 - t3 + l3)],
    ])
    .scale_real(0.5);
    ChoiMatrix::new(2, s).expect("4x4 Choi matrix")
}

/// `S_adj`, the Choi matrix of the Hilbert-Schmidt adjoint, written out entrywise.
pub fn choi_adjoint(p: &KingRuskaiForm) -> ChoiMatrix {
    let [t1, t2, t3] = p.t;
    let [l1, l2, l3] = p.lambda;
    let r = |x: f64| Complex::new(x, 0.0);
    let minus = Complex::new(t1, -t2);
    let plus = Complex::new(t1, t2);
    let s = ComplexMatrix::from_rows(&[
        [r(1.0 + t3 + l3), ZERO, plus, r(l1 + l2)],
        [ZERO, r(1.0 + t3 - l3), r(l1 - l2), plus],
        [minus, r(l1 - l2), r(1.0 - t3 - l3), ZERO],
        [r(l1 + l2), minus, ZERO, r(1.0 - t3 + l3)],
    ])
    .scale_real(0.5);
    ChoiMatrix::new(2, s).expect("4x4 Choi matrix")
}

/// `2 * S_adj`, the matrix the closed forms describe.
pub fn analysis_matrix(p: &KingRuskaiForm) -> ComplexMatrix {
    choi_adjoint(p).into_matrix().scale_real(2.0)
}

/// Which degenerate branch the closed forms fell into (first one wins, in this order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateCase {
    None,
    /// 0-based index of the first vanishing diagonal entry.
    ZeroDiagonal(usize),
    /// `|gamma_23| = 1`.
    Gamma23Boundary,
    /// `|gamma_13| = 1` or `|gamma_24| = 1`.
    Gamma13OrGamma24Boundary,
}

/// Closed-form Schur parameters of `2 * S_adj`; `None` marks an undefined entry
/// (vanishing denominator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitClosedFormParams {
    pub gamma_diag: [f64; 4],
    pub gamma_23: Option<Complex>,
    pub gamma_13: Option<Complex>,
    pub gamma_24: Option<Complex>,
    pub gamma_14: Option<Complex>,
    pub degenerate_case: DegenerateCase,
}

fn unit_defect(g: Complex) -> f64 {
    (1.0 - g.norm_sqr()).max(0.0).sqrt()
}

fn abs_tol(diag: &[f64; 4], tol: f64) -> f64 {
    tol * diag.iter().copied().fold(1.0, f64::max)
}

/// Evaluates the explicit formulas
///
/// ```text
/// gamma_23 = (l1 - l2) / sqrt(G22 G33)
/// gamma_13 = (t1 + i t2) sqrt(G22) / (sqrt(G22 G33 - (l1 - l2)^2) sqrt(G11))
/// gamma_24 = (t1 + i t2) sqrt(G33) / (sqrt(G22 G33 - (l1 - l2)^2) sqrt(G44))
/// ```
///
/// and solves `S_14 = sqrt(G11) (-g13 conj(g23) g24 + D13 g14 D24) sqrt(G44)` for `gamma_14`.
/// Entries whose denominators vanish (up to `tol`) are left undefined.
pub fn closed_form_params(p: &KingRuskaiForm, tol: f64) -> QubitClosedFormParams {
    let g = p.gamma_diag();
    let zero_tol = abs_tol(&g, tol);
    let live = g.map(|x| x > zero_tol);
    let tau = p.tau();
    let delta = p.delta();
    let sigma = p.sigma();

    let mut case = match live.iter().position(|&l| !l) {
        Some(k) => DegenerateCase::ZeroDiagonal(k),
        None => DegenerateCase::None,
    };

    let gamma_23 = (live[1] && live[2]).then(|| Complex::new(delta / (g[1] * g[2]).sqrt(), 0.0));

    // D_23 expressed through q = G22 G33 - (l1 - l2)^2, the literal denominator
    let q = (g[1] * g[2] - delta * delta).max(0.0);
    let d23 = gamma_23.map(|_| (q / (g[1] * g[2])).sqrt());
    let d23_open = d23.is_some_and(|d| d > tol);
    if d23.is_some() && !d23_open && case == DegenerateCase::None {
        case = DegenerateCase::Gamma23Boundary;
    }

    let gamma_13 = (d23_open && live[0]).then(|| tau * g[1].sqrt() / (q.sqrt() * g[0].sqrt()));
    let gamma_24 = (d23_open && live[3]).then(|| tau * g[2].sqrt() / (q.sqrt() * g[3].sqrt()));

    let gamma_14 = if !(live[0] && live[3]) {
        None
    } else {
        let s14 = sigma / (g[0] * g[3]).sqrt();
        match (gamma_13, gamma_24) {
            (Some(g13), Some(g24)) => {
                let radius = unit_defect(g13) * unit_defect(g24);
                if radius > tol {
                    let g23 = gamma_23.unwrap_or(ZERO);
                    Some((s14 + g13 * g23.conj() * g24) / radius)
                } else {
                    if case == DegenerateCase::None {
                        case = DegenerateCase::Gamma13OrGamma24Boundary;
                    }
                    None
                }
            }
            // the (1,3)/(2,4) disks collapsed, which forces t1 = t2 = 0 and a zero center
            _ => Some(Complex::new(s14, 0.0)),
        }
    };

    QubitClosedFormParams {
        gamma_diag: g,
        gamma_23,
        gamma_13,
        gamma_24,
        gamma_14,
        degenerate_case: case,
    }
}

fn exceeds(k: usize, j: usize, g: Complex) -> Violation {
    Violation {
        kind: ViolationKind::ParameterExceedsDisk,
        location: Location::Pair(k, j),
        magnitude: g.norm(),
        value: Some(g),
    }
}

fn residual(k: usize, j: usize, magnitude: f64) -> Violation {
    Violation {
        kind: ViolationKind::CompatibilityResidual,
        location: Location::Pair(k, j),
        magnitude,
        value: None,
    }
}

fn clamp_unit(g: Complex) -> Complex {
    let m = g.norm();
    if m > 1.0 {
        g / m
    } else {
        g
    }
}

/// Complete positivity from the closed forms: `G_kk >= 0` and
/// `|g_23|, |g_13|, |g_24|, |g_14| <= 1`, plus the degenerate branches
/// (zero rows at zero diagonals, `t1 = t2 = 0` when `|g_23| = 1`, `g_14` pinned
/// to its center when `|g_13| = 1` or `|g_24| = 1`).
pub fn eight_inequalities_cp(p: &KingRuskaiForm, tol: f64) -> CpVerdict {
    match eight_inequalities_inner(p, tol) {
        Ok(params) => CpVerdict::Cp(params),
        Err(v) => CpVerdict::NotCp(v),
    }
}

fn eight_inequalities_inner(p: &KingRuskaiForm, tol: f64) -> Result<SchurParams, Violation> {
    let g = p.gamma_diag();
    let zero_tol = abs_tol(&g, tol);
    let tau = p.tau().norm();
    let delta = p.delta().abs();
    let sigma = p.sigma().abs();
    // off-diagonal moduli of each row of 2 * S_adj
    let rows = [[tau, sigma], [delta, tau], [tau, delta], [sigma, tau]];
    for k in 0..4 {
        if g[k] < -zero_tol {
            return Err(Violation {
                kind: ViolationKind::NegativeDiagonal,
                location: Location::Index(k),
                magnitude: g[k],
                value: None,
            });
        }
        if g[k] <= zero_tol {
            let worst = rows[k][0].max(rows[k][1]);
            if worst > zero_tol {
                return Err(Violation {
                    kind: ViolationKind::NonzeroRowAtZeroDiagonal,
                    location: Location::Index(k),
                    magnitude: worst,
                    value: None,
                });
            }
        }
    }

    let cf = closed_form_params(p, tol);
    let live = g.map(|x| x > zero_tol);

    if let Some(g23) = cf.gamma_23 {
        if g23.norm() > 1.0 + tol {
            return Err(exceeds(1, 2, g23));
        }
    }
    let gamma23_boundary = cf.gamma_23.is_some()
        && cf.gamma_13.is_none()
        && cf.gamma_24.is_none()
        && live.iter().all(|&l| l);
    for (k, j, gamma) in [(0, 2, cf.gamma_13), (1, 3, cf.gamma_24)] {
        match gamma {
            Some(x) if x.norm() > 1.0 + tol => return Err(exceeds(k, j, x)),
            None if gamma23_boundary => {
                let normalized = tau / (g[k] * g[j]).sqrt();
                if normalized > tol {
                    return Err(residual(k, j, normalized));
                }
            }
            _ => {}
        }
    }
    match cf.gamma_14 {
        Some(x) if x.norm() > 1.0 + tol => return Err(exceeds(0, 3, x)),
        None if cf.degenerate_case == DegenerateCase::Gamma13OrGamma24Boundary => {
            let g13 = cf.gamma_13.unwrap_or(ZERO);
            let g23 = cf.gamma_23.unwrap_or(ZERO);
            let g24 = cf.gamma_24.unwrap_or(ZERO);
            let offset = p.sigma() / (g[0] * g[3]).sqrt() + g13 * g23.conj() * g24;
            if offset.norm() > tol {
                return Err(residual(0, 3, offset.norm()));
            }
        }
        _ => {}
    }

    let mut params = SchurParams::with_diag(
        g.map(|x| if x > zero_tol { x } else { x.max(0.0) })
            .to_vec(),
    );
    let entry = |v: Option<Complex>| match v {
        Some(x) => OffEntry::active(clamp_unit(x)),
        None => OffEntry::INACTIVE,
    };
    let gap_one = |k: usize, j: usize| {
        if live[k] && live[j] {
            OffEntry::active(ZERO)
        } else {
            OffEntry::INACTIVE
        }
    };
    let assignments = [
        ((0, 1), gap_one(0, 1)),
        ((2, 3), gap_one(2, 3)),
        ((1, 2), entry(cf.gamma_23)),
        ((0, 2), entry(cf.gamma_13)),
        ((1, 3), entry(cf.gamma_24)),
        ((0, 3), entry(cf.gamma_14)),
    ];
    for ((k, j), e) in assignments {
        params.set(k, j, e).expect("indices within 4x4");
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::adjoint_choi;
    use crate::lattice::{cp_test_matrix, DEFAULT_TOL};
    use crate::linalg::is_psd_oracle;

    fn kr(t: [f64; 3], lambda: [f64; 3]) -> KingRuskaiForm {
        KingRuskaiForm::new(t, lambda).unwrap()
    }

    #[test]
    fn transfer_matrix_examples() {
        assert_eq!(
            transfer_matrix(&KingRuskaiForm::identity()),
            ComplexMatrix::identity(4)
        );
        assert_eq!(
            transfer_matrix(&KingRuskaiForm::depolarizing(0.0)),
            ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0])
        );
        let t = transfer_matrix(&kr([0.2, 0.0, 0.1], [0.4, 0.3, 0.5]));
        let first_col: Vec<f64> = (0..4).map(|i| t[(i, 0)].re).collect();
        let diag: Vec<f64> = (0..4).map(|i| t[(i, i)].re).collect();
        assert_eq!(first_col, vec![1.0, 0.2, 0.0, 0.1]);
        assert_eq!(diag, vec![1.0, 0.4, 0.3, 0.5]);
    }

    #[test]
    fn forward_choi_examples() {
        let id = choi_forward(&KingRuskaiForm::identity());
        let expected = ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(id.matrix(), &expected);
        let dep = choi_forward(&KingRuskaiForm::depolarizing(0.0));
        assert_eq!(dep.matrix(), &ComplexMatrix::identity(4).scale_real(0.5));
        assert_eq!(choi_adjoint(&KingRuskaiForm::identity()), id);
    }

    #[test]
    fn forward_choi_matches_transfer_construction() {
        let p = kr([0.2, -0.7, 0.1], [0.4, -0.3, 0.5]);
        let direct = choi_from_transfer(&transfer_matrix(&p));
        assert!(direct.matrix().max_abs_diff(choi_forward(&p).matrix()) < 1e-13);
    }

    #[test]
    fn adjoint_entry_positions() {
        let s = choi_adjoint(&kr([0.2, 0.0, 0.0], [0.0; 3]));
        assert!((s.matrix()[(0, 2)] - Complex::new(0.1, 0.0)).norm() < 1e-15);
        assert!((s.matrix()[(2, 0)] - Complex::new(0.1, 0.0)).norm() < 1e-15);
        let p = kr([0.2, 0.6, -0.3], [0.1, 0.9, -0.4]);
        assert_eq!(adjoint_choi(&choi_forward(&p)), choi_adjoint(&p));
    }

    #[test]
    fn closed_forms_at_reference_point() {
        let cf = closed_form_params(&kr([0.2, 0.0, 0.1], [0.4, 0.3, 0.5]), DEFAULT_TOL);
        assert_eq!(cf.degenerate_case, DegenerateCase::None);
        let g = cf.gamma_diag;
        for (x, y) in g.iter().zip([1.6, 0.6, 0.4, 1.4]) {
            assert!((x - y).abs() < 1e-15);
        }
        // independent evaluation of the displayed fractions
        let g23 = 0.1 / (0.6f64 * 0.4).sqrt();
        let q: f64 = 0.6 * 0.4 - 0.01;
        let g13 = 0.2 * 0.6f64.sqrt() / (q.sqrt() * 1.6f64.sqrt());
        let g24 = 0.2 * 0.4f64.sqrt() / (q.sqrt() * 1.4f64.sqrt());
        assert!((cf.gamma_23.unwrap().re - g23).abs() < 1e-15);
        assert!((cf.gamma_13.unwrap().re - g13).abs() < 1e-15);
        assert!((cf.gamma_24.unwrap().re - g24).abs() < 1e-15);
        assert!((g23 - 0.2041241).abs() < 1e-7);
        assert!((g13 - 0.2553770).abs() < 1e-7);
        assert!((g24 - 0.2229113).abs() < 1e-7);
    }

    #[test]
    fn closed_forms_identity_channel() {
        let cf = closed_form_params(&KingRuskaiForm::identity(), DEFAULT_TOL);
        assert_eq!(cf.gamma_diag, [2.0, 0.0, 0.0, 2.0]);
        assert_eq!(cf.degenerate_case, DegenerateCase::ZeroDiagonal(1));
        assert_eq!(cf.gamma_14, Some(ONE));
        assert!(eight_inequalities_cp(&KingRuskaiForm::identity(), DEFAULT_TOL).is_cp());
    }

    #[test]
    fn closed_forms_boundary_channel() {
        let cf = closed_form_params(&kr([0.0; 3], [0.5, 0.5, 0.0]), DEFAULT_TOL);
        assert_eq!(cf.gamma_23, Some(ZERO));
        assert_eq!(cf.gamma_13, Some(ZERO));
        assert_eq!(cf.gamma_24, Some(ZERO));
        assert!((cf.gamma_14.unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn depolarizing_window() {
        for (l, cp) in [
            (-0.34, false),
            (-0.33, true),
            (0.0, true),
            (1.0, true),
            (1.01, false),
        ] {
            let p = KingRuskaiForm::depolarizing(l);
            assert_eq!(
                eight_inequalities_cp(&p, DEFAULT_TOL).is_cp(),
                cp,
                "lambda {l}"
            );
            assert_eq!(is_psd_oracle(choi_adjoint(&p).matrix(), 1e-10).unwrap(), cp);
        }
    }

    #[test]
    fn translation_too_large() {
        let p = kr([1.1, 0.0, 0.0], [0.0; 3]);
        match eight_inequalities_cp(&p, DEFAULT_TOL) {
            CpVerdict::NotCp(v) => {
                assert_eq!(v.location, Location::Pair(0, 2));
                assert!((v.magnitude - 1.1).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!is_psd_oracle(choi_adjoint(&p).matrix(), 1e-10).unwrap());
    }

    #[test]
    fn gamma23_boundary_branch() {
        // l1 - l2 = sqrt(G22 G33) makes |g23| = 1; then CP needs t1 = t2 = 0
        let p = kr([0.0, 0.0, 0.0], [0.6, -0.4, 0.0]);
        let cf = closed_form_params(&p, DEFAULT_TOL);
        assert_eq!(cf.degenerate_case, DegenerateCase::Gamma23Boundary);
        assert!(cf.gamma_13.is_none() && cf.gamma_24.is_none());
        assert!(eight_inequalities_cp(&p, DEFAULT_TOL).is_cp());
        assert!(cp_test_matrix(&analysis_matrix(&p), DEFAULT_TOL).is_cp());

        let q = kr([0.05, 0.0, 0.0], [0.6, -0.4, 0.0]);
        match eight_inequalities_cp(&q, DEFAULT_TOL) {
            CpVerdict::NotCp(v) => {
                assert_eq!(v.kind, ViolationKind::CompatibilityResidual);
                assert_eq!(v.location, Location::Pair(0, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!cp_test_matrix(&analysis_matrix(&q), DEFAULT_TOL).is_cp());
        assert!(!is_psd_oracle(&analysis_matrix(&q), 1e-10).unwrap());
    }

    #[test]
    fn gamma13_boundary_branch() {
        // t1 chosen so that |g13| = 1 with g23 = 0: t1 = sqrt(G11 G33) when l1 = l2
        let l = 0.2;
        let g = KingRuskaiForm::depolarizing(l).gamma_diag();
        let t1 = (g[0] * g[2]).sqrt();
        let p = kr([t1, 0.0, 0.0], [l, l, l]);
        let cf = closed_form_params(&p, DEFAULT_TOL);
        assert!((cf.gamma_13.unwrap().norm() - 1.0).abs() < 1e-12);
        assert_eq!(cf.degenerate_case, DegenerateCase::Gamma13OrGamma24Boundary);
        let general = cp_test_matrix(&analysis_matrix(&p), DEFAULT_TOL);
        let oracle = is_psd_oracle(&analysis_matrix(&p), 1e-8).unwrap();
        assert_eq!(
            eight_inequalities_cp(&p, DEFAULT_TOL).is_cp(),
            general.is_cp()
        );
        assert_eq!(general.is_cp(), oracle);
    }

    #[test]
    fn negative_diagonal_reported_first() {
        let p = kr([0.0, 0.0, 0.0], [0.0, 0.0, 1.5]);
        match eight_inequalities_cp(&p, DEFAULT_TOL) {
            CpVerdict::NotCp(v) => {
                assert_eq!(v.kind, ViolationKind::NegativeDiagonal);
                assert_eq!(v.location, Location::Index(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            cp_test_matrix(&analysis_matrix(&p), DEFAULT_TOL)
                .violation()
                .map(|v| (v.kind, v.location)),
            Some((ViolationKind::NegativeDiagonal, Location::Index(1)))
        );
    }

    #[test]
    fn certificate_reconstructs_analysis_matrix() {
        let p = kr([0.2, 0.1, 0.1], [0.4, 0.3, 0.5]);
        let verdict = eight_inequalities_cp(&p, DEFAULT_TOL);
        let params = verdict.params().unwrap();
        let s = crate::lattice::matrix_from_schur_params(params).unwrap();
        assert!(s.max_abs_diff(&analysis_matrix(&p)) < 1e-12);
    }
}
