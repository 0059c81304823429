//! Discrete Lyapunov functions evaluated along trajectories.
//!
//! SC family (three-variable runs), for k ≥ 0:
//!
//! V_{k+1} = A(f(xₖ) − f* − (ηs/2)‖∇f(xₖ)‖²) + (μ/2)‖z_{k+1} − x*‖²,
//! A = (ζν/τ²)(τ + ζη√q),
//!
//! contracts as V_{k+1} ≤ (1 − ν√q)Vₖ for k ≥ 1 when the step size is small
//! enough. General convex family, with a weight sequence ωₖ:
//!
//! V_{k+1} = ω_{k+1}(αₖα̃ₖs(f(xₖ) − f*) − (α̃ₖ²s²/2)‖∇f(xₖ)‖² + ½‖z_{k+1} − x*‖²).
//!
//! All inequality checks use a relative slack of 1e-10 and an absolute floor
//! of 1e-14.

use crate::algorithms::{run_extended_nag_c, run_extended_nag_sc, sqrt_q, CForm, CSeqParams, ScParams, ScValues};
use crate::conditions::{monotone_direction, Direction, K_BURN};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::problems::Objective;
use crate::trajectory::Trajectory;

pub const REL_SLACK: f64 = 1e-10;
pub const ABS_FLOOR: f64 = 1e-14;
/// Iterations used when testing a candidate step size.
pub const FEASIBILITY_ITERS: usize = 500;

fn need_optimum(obj: &Objective) -> Result<(&Vector, f64)> {
    match (&obj.minimizer, obj.f_star) {
        (Some(x), Some(f)) => Ok((x, f)),
        (None, Some(f)) => Err(Error::Contract(format!("objective has f* = {f} but no minimizer"))),
        _ => Err(Error::Contract("Lyapunov evaluation needs x* and f*".into())),
    }
}

fn need_consecutive(traj: &Trajectory) -> Result<()> {
    if traj.records.iter().enumerate().any(|(i, r)| r.k != i) {
        return Err(Error::Contract("trajectory was subsampled; Lyapunov evaluation needs every iterate".into()));
    }
    Ok(())
}

fn z_of(traj: &Trajectory, k: usize) -> Result<&Vector> {
    traj.records[k].state("z").ok_or_else(|| Error::Contract(format!("record {k} carries no z iterate")))
}

// ---------------------------------------------------------------------------
// SC family

#[derive(Clone, Debug, PartialEq)]
pub struct ScRow {
    pub k: usize,
    pub v: f64,
    /// Vₖ/V_{k−1}, when both exist and V_{k−1} > 0.
    pub ratio: Option<f64>,
    /// RHS − LHS of the one-step inequality at this k (needs z_{k+1}).
    pub lemma1_slack: Option<f64>,
    /// f(x_{k−1}) − f* − (ηs/2)‖∇f(x_{k−1})‖² ≥ 0.
    pub potential_nonneg: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovTraceSC {
    /// Rows for V₁, V₂, ...
    pub rows: Vec<ScRow>,
    /// 1 − ν√q
    pub target_ratio: f64,
    pub values: ScValues,
}

impl LyapunovTraceSC {
    pub fn v(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.rows.get(i)).map(|r| r.v)
    }
}

fn sc_weight(v: &ScValues) -> f64 {
    v.zeta * v.nu / (v.tau * v.tau) * (v.tau + v.zeta * v.eta * v.sqrt_q)
}

/// V₁, V₂, ... along a three-variable SC run.
pub fn eval_lyapunov_sc(traj: &Trajectory, obj: &Objective, p: &ScParams, s: f64) -> Result<LyapunovTraceSC> {
    let (x_star, f_star) = need_optimum(obj)?;
    need_consecutive(traj)?;
    let sq = sqrt_q(obj, s)?;
    let v = p.at(sq);
    let a = sc_weight(&v);
    let mut rows: Vec<ScRow> = Vec::with_capacity(traj.len());
    for j in 1..traj.len() {
        let prev = &traj.records[j - 1];
        let pot = prev.f - f_star - v.eta * s / 2.0 * prev.grad_norm_sq;
        let z = z_of(traj, j)?;
        let value = a * pot + obj.mu / 2.0 * (z - x_star).norm_squared();
        let ratio = rows.last().and_then(|r| (r.v > 0.0).then(|| value / r.v));
        // rows outside the one-step bound's preconditions carry no residual
        let lemma1_slack = if j + 1 < traj.len() {
            match lemma1_residual_unchecked(traj, obj, &v, s, j, x_star, f_star) {
                Ok(r) => Some(r),
                Err(Error::NotApplicable(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        rows.push(ScRow { k: j, v: value, ratio, lemma1_slack, potential_nonneg: pot >= -ABS_FLOOR });
    }
    Ok(LyapunovTraceSC { rows, target_ratio: 1.0 - v.nu * sq, values: v })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScContraction {
    pub holds: bool,
    pub first_violation: Option<usize>,
    /// Largest V_{k+1} − (1 − ν√q)Vₖ relative to Vₖ.
    pub max_excess: f64,
}

/// Checks V_{k+1} ≤ (1 − ν√q)Vₖ(1 + 1e-10) + 1e-14 for all k ≥ 1.
pub fn check_contraction_sc(trace: &LyapunovTraceSC, nu_sqrt_q: f64) -> ScContraction {
    let rate = 1.0 - nu_sqrt_q;
    let mut out = ScContraction { holds: true, first_violation: None, max_excess: f64::NEG_INFINITY };
    for w in trace.rows.windows(2) {
        let (vk, vn) = (w[0].v, w[1].v);
        let excess = (vn - rate * vk) / vk.abs().max(ABS_FLOOR);
        out.max_excess = out.max_excess.max(excess);
        if vn > rate * vk * (1.0 + REL_SLACK) + ABS_FLOOR && out.first_violation.is_none() {
            out.holds = false;
            out.first_violation = Some(w[0].k);
        }
    }
    if out.max_excess == f64::NEG_INFINITY {
        out.max_excess = 0.0;
    }
    out
}

/// Halves s from `s0` until the contraction holds over
/// [`FEASIBILITY_ITERS`] iterations from `x0`. Diverged runs count as
/// infeasible.
pub fn find_feasible_s_sc(obj: &Objective, p: &ScParams, x0: &Vector, s0: f64, max_halvings: usize) -> Result<(f64, LyapunovTraceSC)> {
    let mut s = s0;
    for _ in 0..=max_halvings {
        match run_extended_nag_sc(obj, s, p, x0, FEASIBILITY_ITERS) {
            Ok(traj) => {
                let trace = eval_lyapunov_sc(&traj, obj, p, s)?;
                if check_contraction_sc(&trace, 1.0 - trace.target_ratio).holds {
                    return Ok((s, trace));
                }
            }
            Err(Error::Diverged { .. }) => {}
            Err(e) => return Err(e),
        }
        s /= 2.0;
    }
    Err(Error::InfeasibleStep { halvings: max_halvings, last_s: s * 2.0 })
}

/// RHS − LHS of the one-step bound on (μ/2)‖z − x*‖² at k ≥ 1. Requires
/// 0 ≤ ηs ≤ 1/L, ν ≥ 0, 1 − ν√q > 0, τ > 0 and ζ ≥ 0.
pub fn lemma1_residual(traj: &Trajectory, obj: &Objective, p: &ScParams, s: f64, k: usize) -> Result<f64> {
    let (x_star, f_star) = need_optimum(obj)?;
    need_consecutive(traj)?;
    let v = p.at(sqrt_q(obj, s)?);
    if k == 0 || k + 1 >= traj.len() {
        return Err(Error::NotApplicable(format!("k = {k} outside 1..{}", traj.len().saturating_sub(1))));
    }
    lemma1_residual_unchecked(traj, obj, &v, s, k, x_star, f_star)
}

fn lemma1_residual_unchecked(traj: &Trajectory, obj: &Objective, v: &ScValues, s: f64, k: usize, x_star: &Vector, f_star: f64) -> Result<f64> {
    let sq = v.sqrt_q;
    let keep = 1.0 - v.nu * sq;
    let ok = v.eta >= 0.0 && v.eta * s * obj.l <= 1.0 * (1.0 + 1e-12) && v.nu >= 0.0 && keep > 0.0 && v.tau > 0.0 && v.zeta >= 0.0;
    if !ok {
        return Err(Error::NotApplicable("one-step bound preconditions fail (need 0 <= eta*s <= 1/L, 1 - nu*sqrt(q) > 0, tau > 0, zeta >= 0)".into()));
    }
    let a = sc_weight(v);
    let (prev, cur) = (&traj.records[k - 1], &traj.records[k]);
    let (zk, zn) = (z_of(traj, k)?, z_of(traj, k + 1)?);
    let half_mu = obj.mu / 2.0;
    let lhs = (a + v.nu * sq / keep) * (cur.f - f_star) - v.nu * s / 2.0 * (v.nu / keep - v.zeta * v.eta / v.tau) * cur.grad_norm_sq
        + half_mu * (zn - x_star).norm_squared() / keep;
    let rhs = a * (prev.f - f_star - v.eta * s / 2.0 * prev.grad_norm_sq) + half_mu * (zk - x_star).norm_squared();
    Ok(rhs - lhs)
}

/// Whether a residual passes the relative check residual ≥ −1e-10(1 + |scale|).
pub fn residual_ok(residual: f64, scale: f64) -> bool {
    residual >= -REL_SLACK * (1.0 + scale.abs())
}

// ---------------------------------------------------------------------------
// General convex family

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaChoice {
    /// ωₖ ≡ 1, for non-increasing α̃ₖ/αₖ.
    One,
    /// ω_{k+1} = αₖ/α̃ₖ, for non-decreasing α̃ₖ/αₖ.
    AlphaRatio,
    /// Picks by the direction of α̃ₖ/αₖ on [K_BURN, K_BURN + 200].
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CRow {
    pub k: usize,
    pub v: f64,
    pub omega: f64,
    /// Coefficient 𝐈 at this k (k ≥ 1).
    pub i: f64,
    /// Coefficient 𝐈𝐈 at this k (k ≥ 1).
    pub ii: f64,
    /// Vₖ − V_{k+1}, when V_{k+1} exists.
    pub decrement: Option<f64>,
    /// ‖∇f(x_{k−1})‖².
    pub grad_prev_sq: f64,
    /// RHS − LHS of the one-step bound on ½‖z − x*‖² at this k, when it
    /// applies (αₖ ≥ 1, α̃ₖ ≥ 0, z_{k+1} stored).
    pub lemma3_slack: Option<f64>,
    /// Scale used for the relative residual check.
    pub lemma3_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovTraceC {
    /// Rows for V₁, V₂, ...
    pub rows: Vec<CRow>,
    pub choice: OmegaChoice,
}

impl LyapunovTraceC {
    pub fn v(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.rows.get(i)).map(|r| r.v)
    }

    /// Every computed one-step residual passes the relative check.
    pub fn lemma3_ok(&self) -> bool {
        self.rows.iter().all(|r| r.lemma3_slack.is_none_or(|x| residual_ok(x, r.lemma3_scale)))
    }
}

/// Resolves [`OmegaChoice::Auto`] from the direction of α̃ₖ/αₖ.
pub fn resolve_omega(p: &CSeqParams, choice: OmegaChoice) -> Result<OmegaChoice> {
    if choice != OmegaChoice::Auto {
        return Ok(choice);
    }
    let ratios: Vec<f64> = (K_BURN..=K_BURN + 200).map(|k| p.alpha_tilde(k) / p.alpha.at(k)).collect();
    match monotone_direction(&ratios, 1e-12) {
        Some(Direction::NonIncreasing) | Some(Direction::Constant) => Ok(OmegaChoice::One),
        Some(Direction::NonDecreasing) => Ok(OmegaChoice::AlphaRatio),
        None => Err(Error::NotApplicable("alpha_tilde_k/alpha_k is not monotone; neither weight choice applies".into())),
    }
}

/// V₁, V₂, ... along a three-variable (or two-variable) NAG-C family run.
pub fn eval_lyapunov_c(traj: &Trajectory, obj: &Objective, p: &CSeqParams, s: f64, choice: OmegaChoice) -> Result<LyapunovTraceC> {
    let (x_star, f_star) = need_optimum(obj)?;
    need_consecutive(traj)?;
    let choice = resolve_omega(p, choice)?;
    // ω_{k+1}
    let omega_next = |k: usize| match choice {
        OmegaChoice::AlphaRatio => p.alpha.at(k) / p.alpha_tilde(k),
        _ => 1.0,
    };
    let (al, at) = (|k: usize| p.alpha.at(k), |k: usize| p.alpha_tilde(k));
    let ls = obj.l * s;
    // bracket of V_{k+1}, from record k and z_{k+1}
    let bracket = |k: usize| -> Result<f64> {
        let r = &traj.records[k];
        let z = z_of(traj, k + 1)?;
        let (a, t) = (al(k), at(k));
        Ok(a * t * s * (r.f - f_star) - t * t * s * s / 2.0 * r.grad_norm_sq + 0.5 * (z - x_star).norm_squared())
    };
    let n = traj.len();
    let mut rows = Vec::with_capacity(n);
    for j in 1..n {
        let k = j; // row for V_k
        let omega = omega_next(k - 1);
        let value = omega * bracket(k - 1)?;
        let (wk, wn) = (omega, omega_next(k));
        let b_prev = p.beta.at(k - 1);
        let i = wk * al(k - 1) * at(k - 1) - wn * at(k) * (al(k) - 1.0);
        let ii = wn * at(k) * (al(k) - 1.0) * b_prev * (2.0 - b_prev * ls) - wk * at(k - 1) * at(k - 1);
        let mut lemma3_slack = None;
        let mut lemma3_scale = 0.0;
        if k + 1 < n && al(k) >= 1.0 && at(k) >= 0.0 {
            let lhs = bracket(k)?;
            let prev = &traj.records[k - 1];
            let zk = z_of(traj, k)?;
            let rhs = at(k) * (al(k) - 1.0) * s * ((prev.f - f_star) - (2.0 - b_prev * ls) * b_prev * s / 2.0 * prev.grad_norm_sq)
                + 0.5 * (zk - x_star).norm_squared();
            lemma3_slack = Some(rhs - lhs);
            lemma3_scale = rhs;
        }
        rows.push(CRow {
            k,
            v: value,
            omega,
            i,
            ii,
            decrement: None,
            grad_prev_sq: traj.records[k - 1].grad_norm_sq,
            lemma3_slack,
            lemma3_scale,
        });
    }
    for idx in 0..rows.len().saturating_sub(1) {
        rows[idx].decrement = Some(rows[idx].v - rows[idx + 1].v);
    }
    Ok(LyapunovTraceC { rows, choice })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CContraction {
    /// V_{k+1} ≤ Vₖ for all k ≥ K.
    pub holds: bool,
    /// C_lower > 0.
    pub cubic_ok: bool,
    /// Largest power of ten C with Vₖ − V_{k+1} ≥ (C/2)k²s²‖∇f(x_{k−1})‖²
    /// for all k ≥ K; 0 if none.
    pub c_lower: f64,
    pub first_violation: Option<usize>,
}

/// Monotonicity of V from K and the decade-rounded decrement constant.
pub fn check_contraction_c(trace: &LyapunovTraceC, s: f64, k_start: usize) -> CContraction {
    let k_start = k_start.max(1);
    let mut holds = true;
    let mut first_violation = None;
    let mut c_min = f64::INFINITY;
    for r in trace.rows.iter().filter(|r| r.k >= k_start) {
        let Some(dec) = r.decrement else { continue };
        if -dec > REL_SLACK * r.v.abs() + ABS_FLOOR {
            holds = false;
            first_violation.get_or_insert(r.k);
        }
        let denom = (r.k * r.k) as f64 * s * s * r.grad_prev_sq;
        if denom > 0.0 {
            c_min = c_min.min(2.0 * dec / denom);
        }
    }
    let c_lower = decade_floor(c_min);
    CContraction { holds, cubic_ok: c_lower > 0.0, c_lower, first_violation }
}

/// Largest 10^j (j in −15..=6) not exceeding `x`; 0 when x ≤ 1e-15 and
/// 1e6 for larger values (including ∞ from an empty set).
pub fn decade_floor(x: f64) -> f64 {
    if !(x >= 1e-15) {
        return 0.0;
    }
    (-15..=6).rev().map(|j| 10f64.powi(j)).find(|&c| c <= x).unwrap_or(0.0)
}

/// Largest step constant C₀ in s ≤ C₀/L allowed by the convergence proof:
/// (2 − γ/β)/(2β) ∧ 1/(4γ).
pub fn c_step_constant(beta: f64, gamma: f64) -> f64 {
    ((2.0 - gamma / beta) / (2.0 * beta)).min(1.0 / (4.0 * gamma))
}

/// Halves s from `s0` until V is non-increasing from `k_start` and every
/// one-step residual passes, over `k_max` iterations.
#[allow(clippy::too_many_arguments)]
pub fn find_feasible_s_c(
    obj: &Objective,
    p: &CSeqParams,
    x0: &Vector,
    s0: f64,
    k_max: usize,
    k_start: usize,
    choice: OmegaChoice,
    max_halvings: usize,
) -> Result<(f64, Trajectory, LyapunovTraceC)> {
    let mut s = s0;
    for _ in 0..=max_halvings {
        match run_extended_nag_c(obj, s, p, x0, k_max, CForm::ThreeVar) {
            Ok(traj) => {
                let trace = eval_lyapunov_c(&traj, obj, p, s, choice)?;
                if check_contraction_c(&trace, s, k_start).holds && trace.lemma3_ok() {
                    return Ok((s, traj, trace));
                }
            }
            Err(Error::Diverged { .. }) => {}
            Err(e) => return Err(e),
        }
        s /= 2.0;
    }
    Err(Error::InfeasibleStep { halvings: max_halvings, last_s: s * 2.0 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// Largest observed/bound ratio.
    pub worst_ratio: f64,
    pub first_violation: Option<usize>,
}

fn tally(items: impl Iterator<Item = (usize, f64, f64)>) -> BoundCheck {
    let mut out = BoundCheck { holds: true, worst_ratio: 0.0, first_violation: None };
    for (k, observed, bound) in items {
        let ratio = if bound > 0.0 { observed / bound } else if observed > 0.0 { f64::INFINITY } else { 0.0 };
        out.worst_ratio = out.worst_ratio.max(ratio);
        if observed > bound * (1.0 + REL_SLACK) {
            out.holds = false;
            out.first_violation.get_or_insert(k);
        }
    }
    out
}

/// f(xₖ) − f* ≤ 4·max(1, 1/γ)·V_K/(αₖα̃ₖs) for recorded k ≥ K.
pub fn check_gap_bound_c(traj: &Trajectory, trace: &LyapunovTraceC, p: &CSeqParams, s: f64, k_start: usize, gamma: f64) -> Result<BoundCheck> {
    let v_k = trace.v(k_start).ok_or_else(|| Error::Contract(format!("no V at K = {k_start}")))?;
    let factor = 4.0 * 1f64.max(1.0 / gamma);
    Ok(tally(traj.records.iter().filter(|r| r.k >= k_start).map(|r| {
        let gap = r.f_gap.unwrap_or(f64::NAN);
        (r.k, gap, factor * v_k / (p.alpha.at(r.k) * p.alpha_tilde(r.k) * s))
    })))
}

/// min_{i≤k−1}‖∇f(xᵢ)‖² ≤ 24V_K/(C s² k(k+1)(2k+1)) for recorded k ≥ 2K.
pub fn check_grad_bound_c(traj: &Trajectory, trace: &LyapunovTraceC, s: f64, k_start: usize, c_lower: f64) -> Result<BoundCheck> {
    if !(c_lower > 0.0) {
        return Err(Error::NotApplicable("gradient bound needs C_lower > 0".into()));
    }
    let v_k = trace.v(k_start).ok_or_else(|| Error::Contract(format!("no V at K = {k_start}")))?;
    let mut running = f64::INFINITY;
    let mut items = Vec::new();
    for r in &traj.records {
        let k = r.k;
        if k >= 2 * k_start && k >= 1 {
            let kf = k as f64;
            items.push((k, running, 24.0 * v_k / (c_lower * s * s * kf * (kf + 1.0) * (2.0 * kf + 1.0))));
        }
        running = running.min(r.grad_norm_sq);
    }
    Ok(tally(items.into_iter()))
}
