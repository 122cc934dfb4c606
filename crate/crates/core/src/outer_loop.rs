//! Variable fixing and recursion around the primal-dual pair search.
//!
//! One round asks the inner loop for a near-feasible, near-optimal pair
//! `(x, pi)`, then reads the reduced-cost slack `A^T pi - c`. Coordinates
//! whose slack is decisively negative are pinned to 0, decisively positive
//! ones to their upper bound — on well-conditioned instances such
//! coordinates provably take those values at an exact optimum. The residual
//! problem on the surviving coordinates keeps the pair's own point as its
//! right-hand side (so it is exactly feasible by construction), swaps the
//! cost for the reduced cost, and relaxes the optimality tolerance by the
//! measured contraction factor `lambda`; the recursion bottoms out when the
//! tolerance exceeds the objective's total range over the box.

use crate::error::{Error, Result};
use crate::feasibility::feasible;
use crate::inner_loop::{dual_slack, get_primal_dual_pair, PairStatus};
use crate::lp_core::LPInstance;
use crate::potential::PotentialParams;
use crate::trace::{TraceEvent, TracePhase, TraceSink};
use crate::vecops::norm_inf;

/// Index classification from one pair's reduced-cost slack.
#[derive(Debug, Clone)]
pub struct FixingPlan {
    /// Coordinates pinned to zero (slack decisively negative).
    pub to_zero: Vec<usize>,
    /// Coordinates pinned to their upper bound (slack decisively positive).
    pub to_upper: Vec<usize>,
    /// Surviving coordinates, in increasing order.
    pub keep: Vec<usize>,
    /// Right-hand side for the surviving block: `A_keep * x_keep`.
    pub b_bar: Vec<f64>,
}

/// Splits coordinates by comparing the slack `A^T pi - c` against the
/// fixing threshold `||c||_inf / 4`.
pub fn classify_indices(inst: &LPInstance, x: &[f64], pi: &[f64]) -> FixingPlan {
    let slack = dual_slack(inst, pi);
    let threshold = inst.c_inf() / 4.0;
    let mut to_zero = Vec::new();
    let mut to_upper = Vec::new();
    let mut keep = Vec::new();
    for (i, &s) in slack.iter().enumerate() {
        if s < -threshold {
            to_zero.push(i);
        } else if s > threshold {
            to_upper.push(i);
        } else {
            keep.push(i);
        }
    }
    let a_keep = inst.a().column_submatrix(&keep);
    let x_keep: Vec<f64> = keep.iter().map(|&i| x[i]).collect();
    let b_bar = a_keep.matvec(&x_keep);
    FixingPlan {
        to_zero,
        to_upper,
        keep,
        b_bar,
    }
}

/// Result of a (possibly recursive) solve on one instance.
#[derive(Debug, Clone)]
pub struct OuterSolve {
    pub x: Vec<f64>,
    /// Gradient evaluations across this call and its recursion.
    pub steps: usize,
    /// Pair searches performed.
    pub pairs: usize,
    /// Deepest recursion level reached (this call is `depth`).
    pub max_depth: usize,
    /// Contraction factors observed, outermost first.
    pub lambda_log: Vec<f64>,
    /// Number of solve calls including this one.
    pub outer_calls: usize,
}

/// Minimizes a linear cost over a box with no coupling constraints:
/// each coordinate independently sits at whichever end its cost prefers.
fn solve_box_only(c: &[f64], u: &[f64]) -> Vec<f64> {
    c.iter()
        .zip(u)
        .map(|(&ci, &ui)| if ci < 0.0 { ui } else { 0.0 })
        .collect()
}

/// Solves `min <c,x> : Ax = b, 0 <= x <= u` to the given tolerances under
/// the imbalance estimate `kappa_hat`, recursing on reduced subproblems.
///
/// Returns `Error::KappaTooSmall` whenever any stage's guarantees fail —
/// the caller reacts by doubling the estimate. `delta_feas` bounds the
/// one-norm equality residual relative to `||A||_1`; `delta_opt` bounds the
/// objective excess in units of `||c||_inf`; `budget` scales every
/// scheduled iteration cap (1 = the analysis budgets).
pub fn solve_lp(
    inst: &LPInstance,
    kappa_hat: f64,
    delta_feas: f64,
    delta_opt: f64,
    budget: f64,
    depth: usize,
    depth_cap: usize,
    sink: &mut dyn TraceSink,
) -> Result<OuterSolve> {
    if depth > depth_cap {
        return Err(Error::KappaTooSmall(format!(
            "fixing recursion exceeded its depth bound {depth_cap}; \
             the imbalance estimate is too small"
        )));
    }
    sink.record(&TraceEvent::marker(TracePhase::Outer, "fixing round", depth));

    // Base cases where the cost no longer matters: a zero cost, or a
    // tolerance wider than the objective's whole range over the box.
    if inst.c_inf() == 0.0 || delta_opt >= inst.u_l1() {
        let (x, steps) = feasible(inst, delta_feas / inst.n() as f64, kappa_hat, budget, sink, depth)?;
        return Ok(OuterSolve {
            x,
            steps,
            pairs: 0,
            max_depth: depth,
            lambda_log: Vec::new(),
            outer_calls: 1,
        });
    }

    // A zero matrix leaves only the box: solve coordinatewise. (Top-level
    // ingestion rejects zero matrices, but recursion can produce them.)
    if inst.a().is_zero() {
        return Ok(OuterSolve {
            x: solve_box_only(inst.c(), inst.u()),
            steps: 0,
            pairs: 0,
            max_depth: depth,
            lambda_log: Vec::new(),
            outer_calls: 1,
        });
    }

    let params = PotentialParams::new(inst, kappa_hat, delta_feas)?;
    let pair = get_primal_dual_pair(inst, &params, delta_opt, budget, sink, depth)?;
    let mut steps = pair.steps;
    if pair.status != PairStatus::Converged {
        return Err(Error::KappaTooSmall(format!(
            "pair search ended with {:?} after {} probes",
            pair.status, pair.probes
        )));
    }
    let x = pair.x;
    let pi = pair.pi.expect("converged pair carries a dual");
    let plan = classify_indices(inst, &x, &pi);
    sink.record(&TraceEvent::marker(
        TracePhase::Outer,
        format!(
            "fixed {} low / {} high, {} remain",
            plan.to_zero.len(),
            plan.to_upper.len(),
            plan.keep.len()
        ),
        depth,
    ));

    // Everything classified: the pair's dual pinned every coordinate.
    if plan.keep.is_empty() {
        let mut z = vec![0.0; inst.n()];
        for &i in &plan.to_upper {
            z[i] = inst.u()[i];
        }
        return Ok(OuterSolve {
            x: z,
            steps,
            pairs: 1,
            max_depth: depth,
            lambda_log: Vec::new(),
            outer_calls: 1,
        });
    }

    // Reduced cost on the survivors. Kept slacks are capped by the fixing
    // threshold `|c|_inf / 4`, so the reduced cost shrank the objective's
    // scale by at least 4 and the contraction factor below is at least 2.
    let slack = dual_slack(inst, &pi);
    let c_new: Vec<f64> = plan.keep.iter().map(|&i| -slack[i]).collect();
    let c_new_inf = norm_inf(&c_new);
    let frac = plan.keep.len() as f64 / inst.n() as f64;
    let sub_delta_feas = delta_feas * frac;

    let (lambda, sub_delta_opt, c_sub) = if c_new_inf == 0.0 {
        // The dual reproduced the kept cost exactly: on the slice
        // `A_keep x = b_bar` the objective is the constant `<pi, b_bar>`,
        // so any feasible completion is optimal — recurse as feasibility.
        let u_keep_l1: f64 = plan.keep.iter().map(|&i| inst.u()[i]).sum();
        (
            f64::INFINITY,
            u_keep_l1.max(delta_opt),
            vec![0.0; plan.keep.len()],
        )
    } else {
        let lambda = inst.c_inf() / (2.0 * c_new_inf);
        if lambda < 2.0 {
            // unreachable for finite data by the threshold cap; kept as an
            // invariant guard
            return Err(Error::KappaTooSmall(format!(
                "cost contraction {lambda:.3} below 2; the fixing threshold \
                 was not decisive"
            )));
        }
        (lambda, lambda * delta_opt * frac, c_new)
    };

    let all_kept = plan.keep.len() == inst.n();
    let sub_inst = if all_kept {
        // nothing was fixed: keep the geometry, swap in the reduced cost,
        // and retry with the relaxed tolerance
        LPInstance::internal(
            inst.a().clone(),
            inst.b().to_vec(),
            c_sub,
            inst.u().to_vec(),
        )?
    } else {
        let a_sub = inst.a().column_submatrix(&plan.keep);
        let u_sub: Vec<f64> = plan.keep.iter().map(|&i| inst.u()[i]).collect();
        LPInstance::internal(a_sub, plan.b_bar.clone(), c_sub, u_sub)?
    };

    let sub = solve_lp(
        &sub_inst,
        kappa_hat,
        sub_delta_feas,
        sub_delta_opt,
        budget,
        depth + 1,
        depth_cap,
        sink,
    )?;
    steps += sub.steps;

    let mut z = vec![0.0; inst.n()];
    for &i in &plan.to_upper {
        z[i] = inst.u()[i];
    }
    for (slot, &i) in plan.keep.iter().enumerate() {
        z[i] = sub.x[slot];
    }
    let mut lambda_log = vec![lambda];
    lambda_log.extend(sub.lambda_log);
    Ok(OuterSolve {
        x: z,
        steps,
        pairs: 1 + sub.pairs,
        max_depth: sub.max_depth,
        lambda_log,
        outer_calls: 1 + sub.outer_calls,
    })
}

/// Depth bound for the fixing recursion: the tolerance at least doubles
/// relative to the shrinking box every level, so
/// `log2(n ||u||_1 / delta_opt)` levels exhaust it.
pub fn recursion_depth_cap(n: usize, u_l1: f64, delta_opt: f64) -> usize {
    if delta_opt <= 0.0 || u_l1 <= 0.0 {
        return 4;
    }
    let levels = ((n as f64) * u_l1 / delta_opt).log2().ceil();
    (levels.max(0.0) as usize).max(2) + 2
}
