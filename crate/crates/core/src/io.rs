//! JSON documents: instances in, solutions and certificates out.
//!
//! Instances are stored as a single JSON object with the matrix in
//! `[row, col, value]` triplet form; see `docs/format.md` in the repository
//! root for the full schema. Serialization uses the shortest decimal that
//! round-trips each `f64` exactly, so writing and re-reading a document
//! reproduces the same bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp_core::{DualCertificate, LPInstance, SolveReport, Verdict};
use crate::sparse::SparseMatrix;

/// On-disk instance schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    /// Number of equality constraints (rows of `A`).
    pub m: usize,
    /// Number of variables (columns of `A`).
    pub n: usize,
    /// Nonzeros of `A` as `[row, col, value]` triplets.
    pub a: Vec<(usize, usize, f64)>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub u: Vec<f64>,
}

/// Parses an instance document. With `normalize`, a matrix whose max column
/// norm falls below the ingestion gate `|A|_1 >= 1` is rescaled (together
/// with `b`) to `|A|_1 = 1`; the applied factor is returned alongside the
/// instance (1.0 when untouched). Scaling `A` and `b` together preserves
/// the feasible set, the objective, and every circuit ratio.
pub fn parse_instance(text: &str, normalize: bool) -> Result<(LPInstance, f64)> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    instance_from_file(&file, normalize)
}

/// [`parse_instance`] for an already-deserialized document.
pub fn instance_from_file(file: &InstanceFile, normalize: bool) -> Result<(LPInstance, f64)> {
    let a = SparseMatrix::from_triplets(file.m, file.n, &file.a)?;
    let norm = a.one_norm();
    if normalize && norm > 0.0 && norm < 1.0 {
        let scale = 1.0 / norm;
        let scaled: Vec<(usize, usize, f64)> = file
            .a
            .iter()
            .map(|&(i, j, v)| (i, j, v * scale))
            .collect();
        let a = SparseMatrix::from_triplets(file.m, file.n, &scaled)?;
        let b = file.b.iter().map(|v| v * scale).collect();
        let inst = LPInstance::new(a, b, file.c.clone(), file.u.clone())?;
        Ok((inst, scale))
    } else {
        let inst = LPInstance::new(a, file.b.clone(), file.c.clone(), file.u.clone())?;
        Ok((inst, 1.0))
    }
}

/// The reverse direction, for generated instances.
pub fn instance_to_file(inst: &LPInstance) -> InstanceFile {
    InstanceFile {
        m: inst.m(),
        n: inst.n(),
        a: inst.a().triplets(),
        b: inst.b().to_vec(),
        c: inst.c().to_vec(),
        u: inst.u().to_vec(),
    }
}

/// Pretty-printed JSON for any serializable document.
pub fn to_json_pretty<T: Serialize>(doc: &T) -> Result<String> {
    serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))
}

/// On-disk certificate schema (mirrors [`DualCertificate`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub pi: Vec<f64>,
    pub w_minus: Vec<f64>,
    pub w_plus: Vec<f64>,
}

impl From<&DualCertificate> for CertificateFile {
    fn from(cert: &DualCertificate) -> Self {
        CertificateFile {
            pi: cert.pi.clone(),
            w_minus: cert.w_minus.clone(),
            w_plus: cert.w_plus.clone(),
        }
    }
}

impl From<&CertificateFile> for DualCertificate {
    fn from(file: &CertificateFile) -> Self {
        DualCertificate {
            pi: file.pi.clone(),
            w_minus: file.w_minus.clone(),
            w_plus: file.w_plus.clone(),
        }
    }
}

/// On-disk solution schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    /// "solved", "infeasible", or "kappa_cap_reached".
    pub verdict: String,
    /// Tolerance the run was asked for.
    pub delta: f64,
    pub x: Option<Vec<f64>>,
    /// `<c, x>` at the returned point.
    pub objective: Option<f64>,
    /// Imbalance guess in effect at the end of the run.
    pub kappa_hat_final: f64,
    pub gradient_steps: u64,
    pub restarts: u64,
    /// Right-hand side the solve phase actually hit (the snapped `A x_bar`).
    pub solved_rhs: Option<Vec<f64>>,
    pub infeasible_at_tolerance: bool,
    /// For "solved": certificate on the solved right-hand side. For
    /// "infeasible": certificate on the slack-extended phase-one instance.
    pub certificate: Option<CertificateFile>,
}

pub fn verdict_tag(v: Verdict) -> &'static str {
    match v {
        Verdict::Solved => "solved",
        Verdict::Infeasible => "infeasible",
        Verdict::KappaCapReached => "kappa_cap_reached",
    }
}

/// Assembles the solution document for a finished run. `emit_cert` controls
/// whether the (possibly large) certificate vectors are included.
pub fn solution_document(
    inst: &LPInstance,
    report: &SolveReport,
    delta: f64,
    emit_cert: bool,
) -> SolutionFile {
    SolutionFile {
        verdict: verdict_tag(report.verdict).to_string(),
        delta,
        x: report.x.clone(),
        objective: report.x.as_ref().map(|x| inst.objective(x)),
        kappa_hat_final: report.kappa_hat_final,
        gradient_steps: report.gradient_steps,
        restarts: report.restarts,
        solved_rhs: report.solved_rhs.clone(),
        infeasible_at_tolerance: report.infeasible_at_tolerance,
        certificate: if emit_cert {
            report.certificate.as_ref().map(CertificateFile::from)
        } else {
            None
        },
    }
}
