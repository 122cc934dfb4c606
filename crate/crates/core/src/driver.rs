//! Top-level solve pipeline with imbalance-guess doubling.
//!
//! One attempt at a fixed guess `kappa_hat` runs the whole machine: the
//! two-phase feasibility split, then (if feasible) the recursive solve
//! against the snapped right-hand side, then a dual-certificate fit, then a
//! blunt re-validation of everything the report promises. Every stage's
//! guarantees are conditional on `kappa_hat` dominating the instance's true
//! circuit imbalance, and each failure of those guarantees surfaces as
//! `KappaTooSmall`; the driver's only job besides bookkeeping is to catch
//! that, double the guess, and rerun, giving up at a configurable cap.
//! Doubling squares away at most a constant factor in the step bounds, so
//! chronically undershooting the true imbalance costs a factor of ~4 in
//! total work, not correctness.

use crate::dual_cert::dual_certificate;
use crate::error::{Error, Result};
use crate::feasibility::{two_phase, TwoPhaseOutcome};
use crate::lp_core::{
    check_certificate, check_delta_feasible, DualCertificate, LPInstance, PhaseSteps, SolveReport,
    Verdict,
};
use crate::outer_loop::{recursion_depth_cap, solve_lp};
use crate::trace::{NullSink, TraceEvent, TracePhase, TraceSink};

/// Driver knobs. `delta` is the only mandatory choice; the defaults start
/// the imbalance guess at 1 and stop doubling at 2^60.
#[derive(Debug, Clone, Copy)]
pub struct DriverConfig {
    /// The returned point is `delta`-feasible and `delta`-optimal (against
    /// the snapped right-hand side reported in `solved_rhs`).
    pub delta: f64,
    /// Initial circuit-imbalance guess; must be at least 1.
    pub kappa_hat_init: f64,
    /// Doubling past this cap ends the run with `KappaCapReached`.
    pub kappa_hat_cap: f64,
    /// Scales every scheduled iteration cap; 1 runs exactly the
    /// analysis-derived budgets.
    pub budget_multiplier: f64,
}

impl DriverConfig {
    pub fn new(delta: f64) -> Self {
        DriverConfig {
            delta,
            kappa_hat_init: 1.0,
            kappa_hat_cap: (2.0f64).powi(60),
            budget_multiplier: 1.0,
        }
    }
}

/// Which pipeline stage the driver is currently inside, for attributing
/// gradient steps observed by the counting sink.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Stage {
    TwoPhase,
    Solve,
}

/// Forwards events to the caller's sink while tallying gradient steps per
/// pipeline stage. Counting at the sink keeps the invariant "sum of event
/// steps equals the reported total" true by construction, and it sees work
/// spent in attempts that later fail with `KappaTooSmall`.
struct CountingSink<'a> {
    inner: &'a mut dyn TraceSink,
    stage: Stage,
    phase: PhaseSteps,
}

impl TraceSink for CountingSink<'_> {
    fn record(&mut self, event: &TraceEvent) {
        let s = event.steps as u64;
        if event.phase == TracePhase::Cert {
            self.phase.certificate += s;
        } else if self.stage == Stage::TwoPhase {
            self.phase.two_phase += s;
        } else {
            self.phase.solve += s;
        }
        self.inner.record(event);
    }
}

/// Per-attempt results the final report needs.
struct AttemptOutput {
    verdict: Verdict,
    x: Option<Vec<f64>>,
    certificate: Option<DualCertificate>,
    max_depth: usize,
    lambda_log: Vec<f64>,
    solved_rhs: Option<Vec<f64>>,
    borderline: bool,
}

/// Solves the instance at the configured tolerance. See [`SolveReport`] for
/// what each verdict promises.
pub fn solve(inst: &LPInstance, config: &DriverConfig) -> Result<SolveReport> {
    let mut sink = NullSink;
    solve_traced(inst, config, &mut sink)
}

/// [`solve`], reporting progress events to `sink` as it goes.
pub fn solve_traced(
    inst: &LPInstance,
    config: &DriverConfig,
    sink: &mut dyn TraceSink,
) -> Result<SolveReport> {
    if !(config.delta > 0.0 && config.delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {}",
            config.delta
        )));
    }
    if !(config.kappa_hat_init >= 1.0 && config.kappa_hat_init.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial imbalance guess must be finite and at least 1, got {}",
            config.kappa_hat_init
        )));
    }
    if !(config.kappa_hat_cap >= config.kappa_hat_init) {
        return Err(Error::InvalidArgument(format!(
            "imbalance cap {} is below the initial guess {}",
            config.kappa_hat_cap, config.kappa_hat_init
        )));
    }
    if !(config.budget_multiplier > 0.0 && config.budget_multiplier.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "budget multiplier must be positive and finite, got {}",
            config.budget_multiplier
        )));
    }

    let mut counting = CountingSink {
        inner: sink,
        stage: Stage::TwoPhase,
        phase: PhaseSteps::default(),
    };
    let mut kappa_hat = config.kappa_hat_init;
    let mut restarts = 0u64;
    let mut outer_calls = 0u64;

    loop {
        match attempt(inst, config.delta, kappa_hat, config.budget_multiplier, &mut counting, &mut outer_calls) {
            Ok(out) => {
                return Ok(SolveReport {
                    verdict: out.verdict,
                    x: out.x,
                    certificate: out.certificate,
                    kappa_hat_final: kappa_hat,
                    gradient_steps: counting.phase.total(),
                    restarts,
                    outer_calls,
                    phase_steps: counting.phase,
                    max_recursion_depth: out.max_depth as u32,
                    lambda_log: out.lambda_log,
                    solved_rhs: out.solved_rhs,
                    infeasible_at_tolerance: out.borderline,
                });
            }
            Err(Error::KappaTooSmall(reason)) => {
                counting.record(&TraceEvent::marker(
                    TracePhase::Driver,
                    format!("imbalance guess {kappa_hat:.3e} rejected: {reason}"),
                    0,
                ));
                let next = kappa_hat * 2.0;
                if next > config.kappa_hat_cap {
                    return Ok(SolveReport {
                        verdict: Verdict::KappaCapReached,
                        x: None,
                        certificate: None,
                        kappa_hat_final: kappa_hat,
                        gradient_steps: counting.phase.total(),
                        restarts,
                        outer_calls,
                        phase_steps: counting.phase,
                        max_recursion_depth: 0,
                        lambda_log: Vec::new(),
                        solved_rhs: None,
                        infeasible_at_tolerance: false,
                    });
                }
                kappa_hat = next;
                restarts += 1;
            }
            Err(other) => return Err(other),
        }
    }
}

/// One full pipeline pass at a fixed imbalance guess. Any guarantee failure
/// inside comes back as `KappaTooSmall` for the driver to catch.
fn attempt(
    inst: &LPInstance,
    delta: f64,
    kappa_hat: f64,
    budget: f64,
    counting: &mut CountingSink<'_>,
    outer_calls: &mut u64,
) -> Result<AttemptOutput> {
    counting.stage = Stage::TwoPhase;
    let tp = two_phase(inst, delta, kappa_hat, budget, counting)?;
    *outer_calls += tp.outer_calls as u64;
    match tp.outcome {
        TwoPhaseOutcome::Infeasible {
            certificate,
            slack_mass: _,
            borderline,
        } => Ok(AttemptOutput {
            verdict: Verdict::Infeasible,
            x: None,
            certificate: Some(certificate),
            max_depth: tp.max_depth,
            lambda_log: Vec::new(),
            solved_rhs: None,
            borderline,
        }),
        TwoPhaseOutcome::Feasible {
            x_bar: _,
            b_bar,
            borderline: _,
        } => {
            counting.stage = Stage::Solve;
            let n = inst.n() as f64;
            let m = inst.m() as f64;
            // The feasibility tolerance is slaved to the optimality one so
            // that the dual certificate's product bounds survive the
            // residual term; both also keep the final point delta-feasible
            // for the original right-hand side.
            let delta_opt = delta / (8.0 * n + 4.0);
            let delta_feas = delta_opt / (8.0 * n * m.sqrt() * kappa_hat * inst.one_norm());
            let inst_bar = inst.with_rhs(b_bar.clone());
            let cap = recursion_depth_cap(inst.n(), inst.u_l1(), delta_opt);
            let solved = solve_lp(&inst_bar, kappa_hat, delta_feas, delta_opt, budget, 0, cap, counting)?;
            *outer_calls += solved.outer_calls as u64;
            let (certificate, _) =
                dual_certificate(&inst_bar, &solved.x, kappa_hat, delta_opt, budget, counting, 0)?;

            // Re-validate the full contract with the public checkers; a
            // failure here means some stage's guarantee quietly broke.
            let ok = check_delta_feasible(&inst_bar, &solved.x, delta_feas)?
                && check_delta_feasible(inst, &solved.x, delta)?
                && check_certificate(&inst_bar, &solved.x, &certificate, 2.0 * delta_opt);
            if !ok {
                return Err(Error::KappaTooSmall(
                    "final validation failed: the point or certificate misses \
                     the advertised tolerances"
                        .into(),
                ));
            }
            Ok(AttemptOutput {
                verdict: Verdict::Solved,
                x: Some(solved.x),
                certificate: Some(certificate),
                max_depth: solved.max_depth,
                lambda_log: solved.lambda_log,
                solved_rhs: Some(b_bar),
                borderline: false,
            })
        }
    }
}
