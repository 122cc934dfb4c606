//! Near-feasible points and the feasible/infeasible decision.
//!
//! [`feasible`] drives the residual `1/2 ||Ax - b||^2` below a threshold
//! with the restarted gradient method; on systems that are actually
//! feasible the strong-convexity surrogate `1/(m kappa_hat)^2` makes the
//! scheduled block count sufficient, so falling short is evidence against
//! the imbalance estimate.
//!
//! [`two_phase`] decides feasibility of `{Ax = b, 0 <= x <= u}` at
//! tolerance `delta` by minimizing total slack in the extended system
//! `[A | I | -I]`: small optimal slack yields a feasible point (and a
//! snapped right-hand side the rest of the solve can hit exactly), large
//! optimal slack is certified by a dual fit on the extended problem.

use crate::dual_cert::dual_certificate;
use crate::error::{Error, Result};
use crate::fgm::{rfgm, scaled_blocks, RestartSchedule, SmoothObjective};
use crate::lp_core::{dual_objective_bound, DualCertificate, LPInstance};
use crate::outer_loop::{recursion_depth_cap, solve_lp};
use crate::trace::{TraceEvent, TracePhase, TraceSink};
use crate::vecops::{norm1, norm_inf};

/// `1/2 ||Ax - b||^2` as a smooth objective.
pub struct ResidualProblem<'a> {
    inst: &'a LPInstance,
}

impl<'a> ResidualProblem<'a> {
    pub fn new(inst: &'a LPInstance) -> Self {
        ResidualProblem { inst }
    }
}

impl SmoothObjective for ResidualProblem<'_> {
    fn dim(&self) -> usize {
        self.inst.n()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = self.inst.residual(x);
        0.5 * r.iter().map(|v| v * v).sum::<f64>()
    }

    fn value_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let r = self.inst.residual(x);
        self.inst.a().tr_matvec_into(&r, grad);
        0.5 * r.iter().map(|v| v * v).sum::<f64>()
    }
}

/// Finds `x` in the box with `||Ax - b||_1 <= delta ||A||_1`, starting from
/// zero, or reports `KappaTooSmall` when the scheduled restarts fail to get
/// there. Returns the point and the gradient steps spent. `budget` scales
/// the scheduled block count (1 = exactly the analysis budget).
pub fn feasible(
    inst: &LPInstance,
    delta: f64,
    kappa_hat: f64,
    budget: f64,
    sink: &mut dyn TraceSink,
    depth: usize,
) -> Result<(Vec<f64>, usize)> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "feasibility tolerance must be positive, got {delta}"
        )));
    }
    let m = inst.m() as f64;
    let a1 = inst.one_norm();
    // ||r||_1 <= sqrt(m) ||r||_2 turns the 1-norm goal into a value target
    let target = (delta * a1) * (delta * a1) / (2.0 * m);
    let prob = ResidualProblem { inst };
    let x0 = vec![0.0; inst.n()];
    let f0 = prob.value(&x0);
    if f0 <= target {
        return Ok((x0, 0));
    }
    let l = inst.a().spectral_norm_sq_upper().max(f64::MIN_POSITIVE);
    let mu = 1.0 / (m * kappa_hat * m * kappa_hat);
    let blocks = scaled_blocks(RestartSchedule::blocks_for_gap(f0, 0.5 * target), budget);
    let schedule = RestartSchedule::new(l, mu.min(l), blocks)?;
    let lower = vec![0.0; inst.n()];
    let run = rfgm(&prob, &lower, inst.u(), &x0, &schedule, Some(target))?;
    sink.record(&TraceEvent::descent(
        TracePhase::Fgm,
        "residual descent",
        run.steps,
        run.value,
        depth,
    ));
    if run.value > target {
        return Err(Error::KappaTooSmall(format!(
            "residual {:.3e} stayed above target {:.3e} after {} scheduled blocks",
            run.value, target, blocks
        )));
    }
    Ok((run.x, run.steps))
}

/// Outcome of the feasibility split.
#[derive(Debug, Clone)]
pub enum TwoPhaseOutcome {
    /// A point `x_bar` with `||A x_bar - b||_1 <= (delta/2) ||A||_1`, and
    /// the snapped right-hand side `b_bar = A x_bar` it satisfies exactly.
    Feasible {
        x_bar: Vec<f64>,
        b_bar: Vec<f64>,
        /// Optimal slack mass landed close to the decision line.
        borderline: bool,
    },
    /// No point comes within tolerance; the dual certificate for the
    /// slack-extended problem witnesses a positive lower bound on the
    /// achievable slack mass.
    Infeasible {
        /// Certificate for the extended instance (its dual vectors have
        /// extended dimensions `m` and `n + 2m`).
        certificate: DualCertificate,
        slack_mass: f64,
        borderline: bool,
    },
}

/// Tallies carried back to the driver.
#[derive(Debug, Clone)]
pub struct TwoPhaseResult {
    pub outcome: TwoPhaseOutcome,
    pub steps: usize,
    pub outer_calls: usize,
    pub max_depth: usize,
    pub pairs: usize,
}

/// Builds the slack-extended instance `[A | I | -I]` with unit slack costs
/// and slack bounds `||b||_inf`, returning it with the original column
/// count. An infeasibility certificate in a [`crate::lp_core::SolveReport`]
/// is stated against this instance.
pub fn extended_instance(inst: &LPInstance) -> Result<(LPInstance, usize)> {
    let m = inst.m();
    let n = inst.n();
    let ext = inst.a().hstack_signed_identities();
    let mut c_ext = vec![0.0; n];
    c_ext.extend(std::iter::repeat(1.0).take(2 * m));
    let slack_bound = norm_inf(inst.b());
    let mut u_ext = inst.u().to_vec();
    u_ext.extend(std::iter::repeat(slack_bound).take(2 * m));
    let inst_ext = LPInstance::new(ext, inst.b().to_vec(), c_ext, u_ext)?;
    Ok((inst_ext, n))
}

/// Decides delta-feasibility. See the module docs for the contract of each
/// branch; `KappaTooSmall` bubbles up whenever a stage's guarantees fail.
/// `budget` scales every scheduled iteration cap inside (1 = the analysis
/// budgets).
pub fn two_phase(
    inst: &LPInstance,
    delta: f64,
    kappa_hat: f64,
    budget: f64,
    sink: &mut dyn TraceSink,
) -> Result<TwoPhaseResult> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "feasibility tolerance must be positive, got {delta}"
        )));
    }
    // zero right-hand side: the origin is exactly feasible
    if inst.b().iter().all(|&v| v == 0.0) {
        sink.record(&TraceEvent::marker(TracePhase::TwoPhase, "zero rhs shortcut", 0));
        return Ok(TwoPhaseResult {
            outcome: TwoPhaseOutcome::Feasible {
                x_bar: vec![0.0; inst.n()],
                b_bar: vec![0.0; inst.m()],
                borderline: false,
            },
            steps: 0,
            outer_calls: 0,
            max_depth: 0,
            pairs: 0,
        });
    }

    let (inst_ext, n) = extended_instance(inst)?;
    let n_ext = inst_ext.n() as f64;
    let m = inst.m() as f64;
    let delta_opt1 = delta / 4.0;
    let delta_feas1 =
        delta_opt1 / (8.0 * n_ext * m.sqrt() * kappa_hat * inst_ext.one_norm());
    let cap = recursion_depth_cap(inst_ext.n(), inst_ext.u_l1(), delta_opt1);
    let solved = solve_lp(
        &inst_ext,
        kappa_hat,
        delta_feas1,
        delta_opt1,
        budget,
        0,
        cap,
        sink,
    )?;
    let mut steps = solved.steps;
    let slack_mass: f64 = solved.x[n..].iter().sum();
    sink.record(&TraceEvent::marker(
        TracePhase::TwoPhase,
        format!("slack mass {slack_mass:.3e} vs line {:.3e}", delta / 4.0),
        0,
    ));

    if slack_mass < delta / 4.0 {
        let x_bar = solved.x[..n].to_vec();
        let resid1 = norm1(&inst.residual(&x_bar));
        if resid1 > 0.5 * delta * inst.one_norm() {
            return Err(Error::KappaTooSmall(format!(
                "slack mass {slack_mass:.3e} is small but the residual \
                 {resid1:.3e} is not; the solve's guarantees failed"
            )));
        }
        let b_bar = inst.a().matvec(&x_bar);
        Ok(TwoPhaseResult {
            outcome: TwoPhaseOutcome::Feasible {
                x_bar,
                b_bar,
                borderline: slack_mass >= delta / 8.0,
            },
            steps,
            outer_calls: solved.outer_calls,
            max_depth: solved.max_depth,
            pairs: solved.pairs,
        })
    } else {
        // certify that the slack mass cannot be pushed to zero
        let delta_cert = delta_opt1 / (8.0 * (n_ext + 1.0));
        let (certificate, cert_steps) =
            dual_certificate(&inst_ext, &solved.x, kappa_hat, delta_cert, budget, sink, 0)?;
        steps += cert_steps;
        // the weak-duality bound must witness strictly positive slack mass,
        // or the certificate does not actually prove infeasibility
        let witness = dual_objective_bound(&inst_ext, &certificate);
        if !witness.is_some_and(|v| v > 0.0) {
            return Err(Error::KappaTooSmall(format!(
                "slack mass {slack_mass:.3e} looked positive but the dual \
                 bound {witness:?} does not certify it"
            )));
        }
        Ok(TwoPhaseResult {
            outcome: TwoPhaseOutcome::Infeasible {
                certificate,
                slack_mass,
                borderline: slack_mass <= delta / 2.0,
            },
            steps,
            outer_calls: solved.outer_calls,
            max_depth: solved.max_depth,
            pairs: solved.pairs,
        })
    }
}
