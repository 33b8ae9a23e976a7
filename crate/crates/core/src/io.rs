//! JSON schemas for graphs, embeddings, walk frames, designs, spectra and
//! verdict reports.
//!
//! Graph schema: `{ "n": int, "edges": [[u,v], [u,v,mult], ...],
//! "labels": [..]? }` with loops written `[u,u]`. Embedding schema wraps a
//! graph with `"rotation"`, a list of arc-index cycles per vertex; faces
//! are always retraced on load, never trusted from input.

use serde::{Deserialize, Serialize};

use crate::embeddings::RotationMap;
use crate::graphs::MultiGraph;
use crate::rationalcosine::{CosineEvidence, Recognition};
use crate::spectral::SpectralData;
use crate::transfer::{EvidenceGrade, OracleCheck, TransferVerdict, VerdictKind};
use crate::walks::{ReflectionFrame, TwoReflectionWalk};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EdgeJson {
    Pair([usize; 2]),
    Triple([usize; 3]),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphJson {
    pub fn from_graph(g: &MultiGraph) -> Self {
        GraphJson {
            n: g.n_vertices(),
            edges: g
                .edges()
                .iter()
                .map(|&(u, v, m)| {
                    if m == 1 {
                        EdgeJson::Pair([u, v])
                    } else {
                        EdgeJson::Triple([u, v, m])
                    }
                })
                .collect(),
            labels: g.labels().map(|l| l.to_vec()),
        }
    }

    pub fn to_graph(&self) -> Result<MultiGraph> {
        let edges: Vec<(usize, usize, usize)> = self
            .edges
            .iter()
            .map(|e| match *e {
                EdgeJson::Pair([u, v]) => (u, v, 1),
                EdgeJson::Triple([u, v, m]) => (u, v, m),
            })
            .collect();
        let g = MultiGraph::new(self.n, &edges)?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EmbeddingJson {
    pub graph: GraphJson,
    pub rotation: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<Vec<[f64; 2]>>,
}

impl EmbeddingJson {
    pub fn from_map(map: &RotationMap) -> Self {
        EmbeddingJson {
            graph: GraphJson::from_graph(map.graph()),
            rotation: map.rotation().to_vec(),
            layout: map
                .layout()
                .map(|l| l.iter().map(|&(x, y)| [x, y]).collect()),
        }
    }

    pub fn to_map(&self) -> Result<RotationMap> {
        let g = self.graph.to_graph()?;
        let map = RotationMap::new(g, self.rotation.clone())?;
        Ok(match &self.layout {
            Some(l) => map.with_layout(l.iter().map(|&[x, y]| (x, y)).collect()),
            None => map,
        })
    }
}

/// Dense frames for the generic walk, row-major over the state basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramesJson {
    pub n: Vec<Vec<f64>>,
    pub m: Vec<Vec<f64>>,
}

impl FramesJson {
    pub fn to_walk(&self) -> Result<TwoReflectionWalk> {
        crate::walks::generic_walk(
            ReflectionFrame::new(rows_to_matrix(&self.n)?)?,
            ReflectionFrame::new(rows_to_matrix(&self.m)?)?,
        )
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<nalgebra::DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::Malformed("empty matrix".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Malformed("ragged matrix rows".into()));
    }
    Ok(nalgebra::DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SzegedyJson {
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
}

impl SzegedyJson {
    pub fn to_walk(&self) -> Result<TwoReflectionWalk> {
        crate::walks::szegedy_walk(&self.p, &self.q)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignJson {
    pub v: usize,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub evidence: String,
    /// Exact rational value when the eigenvalue was certified rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleJson {
    pub ran: bool,
    pub passed: bool,
    pub detail: String,
}

impl From<&OracleCheck> for OracleJson {
    fn from(o: &OracleCheck) -> Self {
        OracleJson {
            ran: o.ran,
            passed: o.passed,
            detail: o.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub pair: [usize; 2],
    pub kind: String,
    /// Transfer time or period, as a decimal string (may exceed u64).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amount: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub certificates: Vec<CertificateJson>,
    pub grade: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

impl From<&TransferVerdict> for VerdictJson {
    fn from(v: &TransferVerdict) -> Self {
        let (tau, gamma, amount, bound, reason) = match &v.kind {
            VerdictKind::PerfectST { tau, gamma, amount }
            | VerdictKind::PeakST { tau, gamma, amount } => {
                (Some(tau.to_string()), Some(*gamma), Some(*amount), None, None)
            }
            VerdictKind::Periodic { period } => (Some(period.to_string()), None, None, None, None),
            VerdictKind::ZeroST => (None, None, None, None, None),
            VerdictKind::NoPeak { bound, reason } => (
                None,
                None,
                None,
                Some(*bound),
                Some(match reason {
                    crate::transfer::NoPeakReason::EigenvalueNotCosine { theta, certified } => {
                        if *certified {
                            format!("eigenvalue {theta} certified rational, not a cosine of a rational multiple of pi")
                        } else {
                            format!("eigenvalue {theta} not recognized up to q_max")
                        }
                    }
                    crate::transfer::NoPeakReason::ParityObstruction => {
                        "parity condition fails for both signs".into()
                    }
                }),
            ),
        };
        let certificates = v
            .certificates
            .iter()
            .map(|c| match &c.recognition {
                Recognition::Cosine(cert) => CertificateJson {
                    theta: c.theta,
                    p: Some(cert.pq.p),
                    q: Some(cert.pq.q),
                    evidence: match cert.evidence {
                        CosineEvidence::Exact => "Exact".into(),
                        CosineEvidence::NumericOnly { residual } => {
                            format!("NumericOnly(residual={residual:e})")
                        }
                    },
                    rational: None,
                },
                Recognition::RationalNotCosine(r) => CertificateJson {
                    theta: c.theta,
                    p: None,
                    q: None,
                    evidence: "CertifiedRationalNotCosine".into(),
                    rational: Some(r.to_string()),
                },
                Recognition::Unrecognized { q_max } => CertificateJson {
                    theta: c.theta,
                    p: None,
                    q: None,
                    evidence: format!("UnrecognizedUpToQmax({q_max})"),
                    rational: None,
                },
            })
            .collect();
        VerdictJson {
            pair: [v.pair.0, v.pair.1],
            kind: v.kind.name().to_string(),
            tau,
            gamma,
            amount,
            bound,
            reason,
            certificates,
            grade: match v.grade {
                EvidenceGrade::Exact => "Exact".into(),
                EvidenceGrade::NumericOnly => "NumericOnly".into(),
            },
            oracle: v.oracle.as_ref().map(OracleJson::from),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Exact characteristic polynomial coefficients (ascending degree) as
    /// fraction strings, when the exact layer ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charpoly: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Vec<Vec<f64>>>>,
}

impl SpectrumJson {
    pub fn from_spectral(data: &SpectralData, include_idempotents: bool) -> Self {
        SpectrumJson {
            eigenvalues: data.eigenvalues.clone(),
            multiplicities: data.multiplicities.clone(),
            charpoly: data
                .charpoly_exact
                .as_ref()
                .map(|p| p.coeffs.iter().map(|c| c.to_string()).collect()),
            idempotents: include_idempotents.then(|| {
                data.idempotents
                    .iter()
                    .map(|e| {
                        (0..e.nrows())
                            .map(|i| (0..e.ncols()).map(|j| e[(i, j)]).collect())
                            .collect()
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TolerancesJson {
    pub q_max: u64,
    pub recog_tol: f64,
    pub support_tol: f64,
    pub cluster_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSummaryJson {
    pub checks_run: usize,
    pub checks_passed: usize,
}

/// Machine-readable analysis report; deterministic for fixed input and
/// flags (no timestamps).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub input_digest: String,
    pub walk: String,
    pub tool_version: String,
    pub tolerances: TolerancesJson,
    pub spectrum: SpectrumJson,
    pub verdicts: Vec<VerdictJson>,
    pub oracle_summary: OracleSummaryJson,
}

pub fn oracle_summary(verdicts: &[TransferVerdict]) -> OracleSummaryJson {
    let run: Vec<&OracleCheck> = verdicts
        .iter()
        .filter_map(|v| v.oracle.as_ref())
        .filter(|o| o.ran)
        .collect();
    OracleSummaryJson {
        checks_run: run.len(),
        checks_passed: run.iter().filter(|o| o.passed).count(),
    }
}
