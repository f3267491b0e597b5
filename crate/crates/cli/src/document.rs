//! JSON documents read and written by the command-line tool.
//!
//! Complex numbers are `[re, im]` pairs (a bare number is accepted on input as a real
//! value), matrices are row-major nested arrays and every index is 1-based.

use cp_lattice::qubit::{DegenerateCase, QubitClosedFormParams};
use cp_lattice::{
    ChannelSpec, ChoiMatrix, Complex, ComplexMatrix, CpVerdict, KingRuskaiForm, KrausSet, Location,
    OffEntry, SchurParams, Violation,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl From<JsonComplex> for Complex {
    fn from(z: JsonComplex) -> Self {
        match z {
            JsonComplex::Pair([re, im]) => Complex::new(re, im),
            JsonComplex::Real(re) => Complex::new(re, 0.0),
        }
    }
}

impl From<Complex> for JsonComplex {
    fn from(z: Complex) -> Self {
        JsonComplex::Pair([z.re, z.im])
    }
}

pub type JsonMatrix = Vec<Vec<JsonComplex>>;

fn matrix_from_json(m: &JsonMatrix, what: &str) -> Result<ComplexMatrix, CliError> {
    let cols = m.first().map_or(0, Vec::len);
    if let Some(r) = m.iter().position(|row| row.len() != cols) {
        return Err(CliError::Malformed(format!(
            "{what}: row {} has a different length",
            r + 1
        )));
    }
    let data: Vec<Complex> = m.iter().flatten().map(|&z| z.into()).collect();
    ComplexMatrix::from_vec(m.len(), cols, data)
        .map_err(|e| CliError::Malformed(format!("{what}: {e}")))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&z| z.into()).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Kraus { ops: Vec<JsonMatrix> },
    Choi { matrix: JsonMatrix },
    PauliTransfer { t: [f64; 3], lambda: [f64; 3] },
}

/// A linear map on `M_n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub n: usize,
    #[serde(flatten)]
    pub payload: Payload,
}

impl ChannelDocument {
    pub fn from_choi(choi: &ChoiMatrix) -> Self {
        Self {
            n: choi.n(),
            payload: Payload::Choi {
                matrix: matrix_to_json(choi.matrix()),
            },
        }
    }

    /// Checks the payload against `n` and converts it.
    pub fn to_spec(&self) -> Result<ChannelSpec, CliError> {
        let n = self.n;
        if n == 0 {
            return Err(CliError::Malformed("n must be positive".into()));
        }
        match &self.payload {
            Payload::Kraus { ops } => {
                if ops.is_empty() {
                    return Err(CliError::Malformed("kraus: no operators".into()));
                }
                let ops = ops
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let a = matrix_from_json(m, &format!("kraus operator {}", i + 1))?;
                        if a.rows() != n || a.cols() != n {
                            return Err(CliError::Malformed(format!(
                                "kraus operator {} is {}x{}, expected {n}x{n}",
                                i + 1,
                                a.rows(),
                                a.cols()
                            )));
                        }
                        Ok(a)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let set = KrausSet::new(ops).map_err(|e| CliError::Malformed(e.to_string()))?;
                Ok(ChannelSpec::Kraus(set))
            }
            Payload::Choi { matrix } => {
                let s = matrix_from_json(matrix, "choi matrix")?;
                let choi = ChoiMatrix::new(n, s).map_err(|e| CliError::Malformed(e.to_string()))?;
                Ok(ChannelSpec::Choi(choi))
            }
            Payload::PauliTransfer { t, lambda } => {
                if n != 2 {
                    return Err(CliError::Malformed(format!(
                        "pauli_transfer requires n = 2, got {n}"
                    )));
                }
                let p = KingRuskaiForm::new(*t, *lambda)
                    .ok_or_else(|| CliError::Malformed("t and lambda must be finite".into()))?;
                Ok(ChannelSpec::PauliTransfer(p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDocument {
    pub kind: String,
    pub location: Vec<usize>,
    pub magnitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<JsonComplex>,
}

impl From<&Violation> for ViolationDocument {
    fn from(v: &Violation) -> Self {
        let location = match v.location {
            Location::Index(k) => vec![k + 1],
            Location::Pair(k, j) => vec![k + 1, j + 1],
        };
        Self {
            kind: v.kind.as_str().to_string(),
            location,
            magnitude: v.magnitude,
            value: v.value.map(Into::into),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffDocument {
    pub k: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDocument {
    pub diag: Vec<f64>,
    pub off: Vec<OffDocument>,
}

impl From<&SchurParams> for ParamsDocument {
    fn from(p: &SchurParams) -> Self {
        Self {
            diag: p.diag().to_vec(),
            off: p
                .iter_off()
                .map(|(k, j, e)| OffDocument {
                    k: k + 1,
                    j: j + 1,
                    re: e.value.re,
                    im: e.value.im,
                    active: e.active,
                })
                .collect(),
        }
    }
}

impl ParamsDocument {
    /// Builds the parameter family. Pairs that are not listed keep the default of
    /// [`SchurParams::with_diag`].
    pub fn to_params(&self) -> Result<SchurParams, CliError> {
        let size = self.diag.len();
        if size == 0 {
            return Err(CliError::Malformed("params: empty diagonal".into()));
        }
        let mut params = SchurParams::with_diag(self.diag.clone());
        let mut seen = vec![false; size * size];
        for e in &self.off {
            if e.k == 0 || e.k >= e.j || e.j > size {
                return Err(CliError::Malformed(format!(
                    "params: entry ({}, {}) is not an upper-triangular position of a {size}x{size} family",
                    e.k, e.j
                )));
            }
            let (k, j) = (e.k - 1, e.j - 1);
            if std::mem::replace(&mut seen[k * size + j], true) {
                return Err(CliError::Malformed(format!(
                    "params: entry ({}, {}) listed twice",
                    e.k, e.j
                )));
            }
            let value = Complex::new(e.re, e.im);
            let entry = if e.active {
                OffEntry::active(value)
            } else {
                OffEntry {
                    value,
                    active: false,
                }
            };
            params
                .set(k, j, entry)
                .map_err(|err| CliError::Malformed(err.to_string()))?;
        }
        params
            .validate()
            .map_err(|err| CliError::Malformed(err.to_string()))?;
        Ok(params)
    }
}

/// `reconstruct` accepts either a bare params object or a whole result document.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ParamsInput {
    Bare(ParamsDocument),
    Result { params: ParamsDocument },
}

impl ParamsInput {
    pub fn into_params(self) -> ParamsDocument {
        match self {
            Self::Bare(p) | Self::Result { params: p } => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormDocument {
    pub gamma_diag: [f64; 4],
    pub gamma_23: Option<JsonComplex>,
    pub gamma_13: Option<JsonComplex>,
    pub gamma_24: Option<JsonComplex>,
    pub gamma_14: Option<JsonComplex>,
    pub degenerate_case: String,
}

impl From<&QubitClosedFormParams> for ClosedFormDocument {
    fn from(p: &QubitClosedFormParams) -> Self {
        let degenerate_case = match p.degenerate_case {
            DegenerateCase::None => "none".to_string(),
            DegenerateCase::ZeroDiagonal(k) => format!("zero_diagonal_{}", k + 1),
            DegenerateCase::Gamma23Boundary => "gamma23_boundary".to_string(),
            DegenerateCase::Gamma13OrGamma24Boundary => "gamma13_or_gamma24_boundary".to_string(),
        };
        Self {
            gamma_diag: p.gamma_diag,
            gamma_23: p.gamma_23.map(Into::into),
            gamma_13: p.gamma_13.map(Into::into),
            gamma_24: p.gamma_24.map(Into::into),
            gamma_14: p.gamma_14.map(Into::into),
            degenerate_case,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub tolerance: f64,
    pub input_digest: String,
}

impl Metadata {
    pub fn new(tolerance: f64, input: &[u8]) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerance,
            input_digest: digest(input),
        }
    }
}

pub fn digest(input: &[u8]) -> String {
    let hash = Sha256::digest(input);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub cp: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormDocument>,
    pub metadata: Metadata,
}

impl ResultDocument {
    pub fn from_verdict(verdict: &CpVerdict, with_params: bool, metadata: Metadata) -> Self {
        Self {
            cp: verdict.is_cp(),
            violation: verdict.violation().map(Into::into),
            params: if with_params {
                verdict.params().map(Into::into)
            } else {
                None
            },
            closed_form: None,
            metadata,
        }
    }
}

/// One line of batch output that could not be processed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDocument {
    pub line: usize,
    pub error: String,
}
