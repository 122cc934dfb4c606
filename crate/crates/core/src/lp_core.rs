//! LP data model and approximation checkers.
//!
//! Instances are `min <c,x>  s.t.  A x = b, 0 <= x <= u` with A sparse and
//! every datum finite. A point is delta-feasible when it sits exactly in the
//! box and `|Ax - b|_1 <= delta |A|_1`; delta-optimality is always measured
//! against `delta |c|_inf`. This module owns the instance type, the solver
//! report, dual certificates, and the two checkers everything downstream is
//! validated with.

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::vecops;

/// An LP instance `min <c,x> s.t. Ax = b, 0 <= x <= u`.
///
/// Ingestion (`new`) enforces: consistent shapes, finite data, `u >= 0`,
/// `A != 0`, `m <= n`, and the normalization gate `|A|_1 >= 1`. Instances the
/// solver builds internally (column submatrices of the recursion, phase-one
/// extensions) skip the `m <= n` and norm gates — the mathematics tolerates
/// both, the gates exist to keep user-supplied data in the regime the
/// parameter ledger assumes.
#[derive(Debug, Clone, PartialEq)]
pub struct LPInstance {
    a: SparseMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
    u: Vec<f64>,
    a_one_norm: f64,
}

impl LPInstance {
    /// Full ingestion gates; use for any externally supplied instance.
    pub fn new(a: SparseMatrix, b: Vec<f64>, c: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if a.rows() > a.cols() {
            return Err(Error::InvalidInstance(format!(
                "m = {} exceeds n = {}; instances must have m <= n",
                a.rows(),
                a.cols()
            )));
        }
        if a.is_zero() {
            return Err(Error::InvalidInstance("A has no nonzero entries".into()));
        }
        let inst = Self::internal(a, b, c, u)?;
        if inst.a_one_norm < 1.0 {
            return Err(Error::InvalidInstance(format!(
                "|A|_1 = {} < 1; rescale the instance (the CLI offers --normalize)",
                inst.a_one_norm
            )));
        }
        Ok(inst)
    }

    /// Shape/finiteness checks only; for solver-internal subinstances.
    pub(crate) fn internal(
        a: SparseMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
        u: Vec<f64>,
    ) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "b has {} entries, A has {} rows",
                b.len(),
                a.rows()
            )));
        }
        if c.len() != a.cols() || u.len() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "c has {} and u has {} entries, A has {} columns",
                c.len(),
                u.len(),
                a.cols()
            )));
        }
        if !vecops::all_finite(&b) || !vecops::all_finite(&c) || !vecops::all_finite(&u) {
            return Err(Error::InvalidInstance(
                "b, c, u must be finite everywhere".into(),
            ));
        }
        if u.iter().any(|&ui| ui < 0.0) {
            return Err(Error::InvalidInstance(
                "upper bounds must be nonnegative".into(),
            ));
        }
        let a_one_norm = a.one_norm();
        Ok(LPInstance {
            a,
            b,
            c,
            u,
            a_one_norm,
        })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Cached `|A|_1`.
    pub fn one_norm(&self) -> f64 {
        self.a_one_norm
    }

    pub fn c_inf(&self) -> f64 {
        vecops::norm_inf(&self.c)
    }

    pub fn u_l1(&self) -> f64 {
        vecops::norm1(&self.u)
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.a.matvec(x);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        vecops::dot(&self.c, x)
    }

    /// Same instance with a replaced right-hand side.
    pub fn with_rhs(&self, b: Vec<f64>) -> LPInstance {
        debug_assert_eq!(b.len(), self.m());
        LPInstance {
            a: self.a.clone(),
            b,
            c: self.c.clone(),
            u: self.u.clone(),
            a_one_norm: self.a_one_norm,
        }
    }
}

/// True iff `x` sits exactly in the box `[0, u]` and the equality residual
/// satisfies `|Ax - b|_1 <= delta |A|_1`. Errors on shape mismatch or a
/// negative/non-finite `delta`.
pub fn check_delta_feasible(inst: &LPInstance, x: &[f64], delta: f64) -> Result<bool> {
    if x.len() != inst.n() {
        return Err(Error::DimensionMismatch(format!(
            "x has {} entries, instance has {} variables",
            x.len(),
            inst.n()
        )));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "delta must be finite and nonnegative, got {delta}"
        )));
    }
    let in_box = x
        .iter()
        .zip(inst.u())
        .all(|(&xi, &ui)| xi >= 0.0 && xi <= ui);
    if !in_box {
        return Ok(false);
    }
    let res = vecops::norm1(&inst.residual(x));
    Ok(res <= delta * inst.one_norm())
}

/// Approximate complementary-slackness certificate `(pi, w_minus, w_plus)`.
///
/// Validity at level delta means: the dual identity
/// `A^T pi + w_minus - w_plus = c` holds to a tiny equality tolerance, the
/// multipliers are nonnegative, the complementarity products
/// `w_minus_i x_i` and `w_plus_i (u_i - x_i)` are each at most
/// `2 delta |c|_inf`, and `|pi|_inf |Ax - b|_1 <= 2 delta |c|_inf`. A valid
/// certificate pins the objective to within `(4n+2) delta |c|_inf` of the
/// optimum of the instance with right-hand side `Ax`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub pi: Vec<f64>,
    pub w_minus: Vec<f64>,
    pub w_plus: Vec<f64>,
}

/// Equality tolerance used for the dual identity check:
/// `1e-9 * (1 + |c|_inf)`. Everything else in the certificate is compared
/// exactly — the inequalities come with slack by construction.
pub fn certificate_eq_tol(c_inf: f64) -> f64 {
    1e-9 * (1.0 + c_inf)
}

/// Checks a certificate at level `delta` against `inst` and the point `x`.
/// Returns false on any violation, including shape mismatches, `x` outside
/// the box, or non-finite certificate entries.
pub fn check_certificate(inst: &LPInstance, x: &[f64], cert: &DualCertificate, delta: f64) -> bool {
    let (m, n) = (inst.m(), inst.n());
    if x.len() != n || cert.pi.len() != m || cert.w_minus.len() != n || cert.w_plus.len() != n {
        return false;
    }
    if !vecops::all_finite(x)
        || !vecops::all_finite(&cert.pi)
        || !vecops::all_finite(&cert.w_minus)
        || !vecops::all_finite(&cert.w_plus)
    {
        return false;
    }
    if x.iter().zip(inst.u()).any(|(&xi, &ui)| xi < 0.0 || xi > ui) {
        return false;
    }
    let c_inf = inst.c_inf();
    let bound = 2.0 * delta * c_inf;

    // (i) dual identity, to the equality tolerance
    let at_pi = inst.a().tr_matvec(&cert.pi);
    let tol = certificate_eq_tol(c_inf);
    for i in 0..n {
        let lhs = at_pi[i] + cert.w_minus[i] - cert.w_plus[i];
        if (lhs - inst.c()[i]).abs() > tol {
            return false;
        }
    }

    // (ii) nonnegativity and complementarity products
    for i in 0..n {
        if cert.w_minus[i] < 0.0 || cert.w_plus[i] < 0.0 {
            return false;
        }
        if cert.w_minus[i] * x[i] > bound {
            return false;
        }
        if cert.w_plus[i] * (inst.u()[i] - x[i]) > bound {
            return false;
        }
    }

    // (iii) dual magnitude against the primal residual, in product form so a
    // zero residual imposes no cap on pi
    let res1 = vecops::norm1(&inst.residual(x));
    vecops::norm_inf(&cert.pi) * res1 <= bound
}

/// Weak-duality lower bound `<pi, b> - <w_plus, u>` on the objective over
/// the entire feasible set `{Ax = b, 0 <= x <= u}`, provided the
/// certificate satisfies the dual identity (to the equality tolerance) and
/// the sign constraints; `None` when it does not qualify. For any feasible
/// `x`, substituting the identity gives
/// `<c, x> = <pi, b> + <w_minus, x> - <w_plus, x> >= <pi, b> - <w_plus, u>`.
/// A positive bound on a phase-one instance (slack costs) therefore
/// certifies that the slack mass cannot reach zero: infeasibility.
pub fn dual_objective_bound(inst: &LPInstance, cert: &DualCertificate) -> Option<f64> {
    let (m, n) = (inst.m(), inst.n());
    if cert.pi.len() != m || cert.w_minus.len() != n || cert.w_plus.len() != n {
        return None;
    }
    if !vecops::all_finite(&cert.pi)
        || !vecops::all_finite(&cert.w_minus)
        || !vecops::all_finite(&cert.w_plus)
    {
        return None;
    }
    if cert
        .w_minus
        .iter()
        .chain(&cert.w_plus)
        .any(|&w| w < 0.0)
    {
        return None;
    }
    let at_pi = inst.a().tr_matvec(&cert.pi);
    let tol = certificate_eq_tol(inst.c_inf());
    for i in 0..n {
        let lhs = at_pi[i] + cert.w_minus[i] - cert.w_plus[i];
        if (lhs - inst.c()[i]).abs() > tol {
            return None;
        }
    }
    Some(vecops::dot(&cert.pi, inst.b()) - vecops::dot(&cert.w_plus, inst.u()))
}

/// Final solver verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// A delta-feasible, delta-optimal point was found and certified.
    Solved,
    /// Phase one's slack optimum stayed above its tolerance: no point
    /// satisfies `Ax = b` within the box, up to the solver's tolerance.
    Infeasible,
    /// The circuit-imbalance guess doubled past its cap without the
    /// guarantees validating.
    KappaCapReached,
}

/// Gradient-step counters broken down by pipeline phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseSteps {
    /// Steps spent inside the phase-one (feasibility) solve.
    pub two_phase: u64,
    /// Steps spent in the main outer/inner recursion.
    pub solve: u64,
    /// Steps spent constructing dual certificates.
    pub certificate: u64,
}

impl PhaseSteps {
    pub fn total(&self) -> u64 {
        self.two_phase + self.solve + self.certificate
    }
}

/// Everything the driver reports back.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub verdict: Verdict,
    /// Present iff `verdict == Solved`; lies exactly in `[0, u]`.
    pub x: Option<Vec<f64>>,
    /// Dual certificate. For `Solved`: valid against the solved right-hand
    /// side. For `Infeasible`: valid against the slack-extended phase-one
    /// instance (dual dimensions `m` and `n + 2m`), witnessing that the
    /// minimal slack mass stays positive. Absent for `KappaCapReached`.
    pub certificate: Option<DualCertificate>,
    /// The imbalance guess in effect when the run ended.
    pub kappa_hat_final: f64,
    /// Total projected-gradient steps across all phases and retries.
    pub gradient_steps: u64,
    /// Times the imbalance guess was doubled and the pipeline rerun.
    pub restarts: u64,
    /// Number of recursive outer-loop invocations.
    pub outer_calls: u64,
    /// Per-phase breakdown of `gradient_steps`.
    pub phase_steps: PhaseSteps,
    /// Deepest outer-loop recursion level of the final attempt (root = 0).
    pub max_recursion_depth: u32,
    /// The cost-rescaling factor of every recursive call of the final
    /// attempt, in call order. The outer loop guarantees each is >= 2.
    pub lambda_log: Vec<f64>,
    /// The substituted right-hand side the main solve ran against
    /// (phase one's `A x_bar`); present iff Solved.
    pub solved_rhs: Option<Vec<f64>>,
    /// Set when an Infeasible verdict was borderline: the phase-one slack
    /// optimum exceeded its threshold by less than the solve tolerance.
    pub infeasible_at_tolerance: bool,
}
