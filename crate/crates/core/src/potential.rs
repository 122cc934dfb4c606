//! The smoothed merit function minimized by the inner loop, and the
//! parameter ledger that calibrates it.
//!
//! For a guess `tau` at the optimal objective value, the merit function is
//!
//! ```text
//! F_tau(x) = 1/2 max(0, <c_hat, x> - tau)^2 + 1/(2 ||A||_1^2) ||Ax - b||^2
//! ```
//!
//! where `c_hat` is the cost rescaled to max-norm 1 and snapped to a grid of
//! spacing `eps = 1 / (8 n ceil(kappa_hat))`. Small values of `F_tau`
//! simultaneously certify near-feasibility and objective value at most about
//! `tau`; the overshoot `alpha = max(0, <c_hat,x> - tau)` doubles as the
//! scaling that turns the equality residual into a dual vector.
//!
//! All derived constants (`sigma`, `C`, `C_bar`, `zeta`, `L`, `mu`) live in
//! [`PotentialParams`] so every module reads the same numbers.

use crate::error::{Error, Result};
use crate::fgm::SmoothObjective;
use crate::lp_core::LPInstance;
use crate::vecops::dot;

/// Largest rounding grid that still keeps all integer multipliers exactly
/// representable in f64 (and in i64).
const MAX_INV_EPS: f64 = 9.007_199_254_740_992e15; // 2^53

/// Cost vector snapped to the `1/inv_eps` grid after rescaling by the
/// max-norm. `c_hat[i] = multipliers[i] / inv_eps` holds exactly in f64.
#[derive(Debug, Clone)]
pub struct RoundedCost {
    pub c_hat: Vec<f64>,
    pub inv_eps: f64,
    /// Signed integer grid multipliers; `|multipliers[i]| <= inv_eps`.
    pub multipliers: Vec<i64>,
}

/// Rounds `c / ||c||_inf` toward zero onto the grid `{ k / inv_eps }`.
/// Each entry moves by at most `1/inv_eps`, and entries of maximal absolute
/// value map to exactly +-1.
pub fn round_cost(c: &[f64], c_inf: f64, inv_eps: f64) -> Result<RoundedCost> {
    if !(c_inf > 0.0 && c_inf.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cost max-norm must be positive and finite, got {c_inf}"
        )));
    }
    if !(inv_eps >= 1.0 && inv_eps <= MAX_INV_EPS && inv_eps.fract() == 0.0) {
        return Err(Error::CapExceeded(format!(
            "rounding grid {inv_eps} is not an exactly representable integer"
        )));
    }
    let mut c_hat = Vec::with_capacity(c.len());
    let mut multipliers = Vec::with_capacity(c.len());
    for &ci in c {
        // dividing by the max first makes the largest entry exactly 1.0,
        // so its multiplier is exactly inv_eps
        let ratio = ci.abs() / c_inf;
        let k = (ratio * inv_eps).floor();
        let signed = if ci < 0.0 { -k } else { k };
        multipliers.push(signed as i64);
        c_hat.push(signed / inv_eps);
    }
    Ok(RoundedCost {
        c_hat,
        inv_eps,
        multipliers,
    })
}

/// Every derived constant used by the solve, computed once per
/// (instance, kappa_hat, delta_feas) triple.
#[derive(Debug, Clone, Copy)]
pub struct PotentialParams {
    pub kappa_hat: f64,
    /// Grid spacing for the rounded cost: `1 / (8 n ceil(kappa_hat))`.
    pub eps: f64,
    pub inv_eps: f64,
    /// Cost-perturbation scale `||c||_inf / (4 n ceil(kappa_hat))`.
    pub sigma: f64,
    /// Conditioning aggregate `n sqrt(m) kappa_hat ||A||_1`.
    pub big_c: f64,
    /// Inflated aggregate `64 n C kappa_hat`.
    pub big_c_bar: f64,
    /// Merit-value window floor; tau windows are resolved to `C_bar^2 zeta`.
    pub zeta: f64,
    pub sqrt_zeta: f64,
    /// Smoothness constant of the merit function: `2 (n + 1)`.
    pub l: f64,
    /// Strong-convexity surrogate `eps^2 / (64 m^4 ||A||_1^4 kappa_hat^4)`.
    pub mu: f64,
    pub delta_feas: f64,
}

impl PotentialParams {
    pub fn new(inst: &LPInstance, kappa_hat: f64, delta_feas: f64) -> Result<Self> {
        if !(kappa_hat >= 1.0 && kappa_hat.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "imbalance estimate must be >= 1, got {kappa_hat}"
            )));
        }
        if !(delta_feas > 0.0 && delta_feas.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "feasibility tolerance must be positive, got {delta_feas}"
            )));
        }
        let n = inst.n() as f64;
        let m = inst.m() as f64;
        let a1 = inst.one_norm();
        let inv_eps = 8.0 * n * kappa_hat.ceil();
        if inv_eps > MAX_INV_EPS {
            return Err(Error::CapExceeded(format!(
                "rounding grid 8 * {n} * {} exceeds exact integer range",
                kappa_hat.ceil()
            )));
        }
        let eps = 1.0 / inv_eps;
        let sigma = 2.0 * eps * inst.c_inf();
        let big_c = n * m.sqrt() * kappa_hat * a1;
        let big_c_bar = 64.0 * n * big_c * kappa_hat;
        let sqrt_zeta = delta_feas / (4.0 * kappa_hat * kappa_hat * n.powi(4) * big_c_bar * m.sqrt());
        let zeta = sqrt_zeta * sqrt_zeta;
        let l = 2.0 * (n + 1.0);
        let mu = (eps * eps) / (64.0 * m.powi(4) * a1.powi(4) * kappa_hat.powi(4));
        if !(zeta > 0.0 && mu > 0.0) {
            return Err(Error::NonFinite("derived solver constants underflowed to zero"));
        }
        Ok(PotentialParams {
            kappa_hat,
            eps,
            inv_eps,
            sigma,
            big_c,
            big_c_bar,
            zeta,
            sqrt_zeta,
            l,
            mu,
            delta_feas,
        })
    }

    /// Merit value below which a point is accepted by the search window.
    pub fn window_floor(&self) -> f64 {
        self.big_c_bar * self.big_c_bar * self.zeta
    }
}

/// The merit function for a fixed `tau`, exposed as a smooth objective over
/// the instance's box.
pub struct PotentialProblem<'a> {
    inst: &'a LPInstance,
    pub c_hat: Vec<f64>,
    pub tau: f64,
    inv_a1_sq: f64,
}

impl<'a> PotentialProblem<'a> {
    pub fn new(inst: &'a LPInstance, c_hat: Vec<f64>, tau: f64) -> Self {
        assert_eq!(c_hat.len(), inst.n(), "rounded cost length mismatch");
        let a1 = inst.one_norm();
        PotentialProblem {
            inst,
            c_hat,
            tau,
            inv_a1_sq: 1.0 / (a1 * a1),
        }
    }

    pub fn set_tau(&mut self, tau: f64) {
        self.tau = tau;
    }

    /// Overshoot of the rounded objective past `tau` (never negative).
    pub fn alpha(&self, x: &[f64]) -> f64 {
        (dot(&self.c_hat, x) - self.tau).max(0.0)
    }

    /// Dual vector read off the residual: `pi = c_inf (b - Ax) / (alpha ||A||_1^2)`.
    /// None when the overshoot vanishes (no dual information at this point).
    pub fn dual(&self, x: &[f64], c_inf: f64) -> Option<Vec<f64>> {
        let alpha = self.alpha(x);
        if alpha <= 0.0 {
            return None;
        }
        let resid = self.inst.residual(x);
        let scale = c_inf * self.inv_a1_sq / alpha;
        Some(resid.iter().map(|&r| -scale * r).collect())
    }
}

impl SmoothObjective for PotentialProblem<'_> {
    fn dim(&self) -> usize {
        self.inst.n()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let alpha = self.alpha(x);
        let resid = self.inst.residual(x);
        let sq: f64 = resid.iter().map(|r| r * r).sum();
        0.5 * alpha * alpha + 0.5 * self.inv_a1_sq * sq
    }

    fn value_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let alpha = self.alpha(x);
        let resid = self.inst.residual(x);
        let sq: f64 = resid.iter().map(|r| r * r).sum();
        self.inst.a().tr_matvec_into(&resid, grad);
        for (g, &ch) in grad.iter_mut().zip(&self.c_hat) {
            *g = alpha * ch + self.inv_a1_sq * *g;
        }
        0.5 * alpha * alpha + 0.5 * self.inv_a1_sq * sq
    }
}
