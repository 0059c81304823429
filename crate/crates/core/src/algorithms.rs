//! Iteration engines for the fixed-step methods.
//!
//! Every runner records iterations `0..=k_max` into a [`Trajectory`] and
//! fails with [`Error::Diverged`] at the first non-finite iterate or once
//! f − f* exceeds [`DIVERGENCE_FACTOR`](crate::trajectory::DIVERGENCE_FACTOR)
//! times its initial value.
//!
//! Strongly convex methods use q = μs and the momentum coefficient
//! σ = (1 − √q)/(1 + √q).

use crate::error::{invalid, Result};
use crate::linalg::Vector;
use crate::problems::Objective;
use crate::sequence::{sigma_next, Sequence};
use crate::series::SqrtQSeries;
use crate::trajectory::{Recorder, Trajectory};

/// Recording options shared by all runners.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Keep every `stride`-th record past k = 10⁴.
    pub stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { stride: 1 }
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid(format!("step size must be positive, got {s}")));
    }
    Ok(())
}

/// √q = √(μs); errors when μ = 0.
pub fn sqrt_q(obj: &Objective, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(obj.mu > 0.0) {
        return Err(invalid("strongly convex method needs mu > 0 (q undefined)"));
    }
    Ok((obj.mu * s).sqrt())
}

/// σ = (1 − √q)/(1 + √q).
pub fn sc_momentum(sq: f64) -> f64 {
    (1.0 - sq) / (1.0 + sq)
}

/// x₁ = x₀ − 2s∇f(x₀)/(1 + √q), the common start of the SC family.
pub fn sc_default_x1(obj: &Objective, s: f64, x0: &Vector) -> Result<Vector> {
    let sq = sqrt_q(obj, s)?;
    Ok(x0 - obj.gradient(x0) * (2.0 * s / (1.0 + sq)))
}

// ---------------------------------------------------------------------------
// Parameter blocks

/// (η, ν, τ) as series in √q for the three-variable SC family.
#[derive(Clone, Debug, PartialEq)]
pub struct ScParams {
    pub eta: SqrtQSeries,
    pub nu: SqrtQSeries,
    pub tau: SqrtQSeries,
}

/// (η, ν, τ, ζ) evaluated at one √q, with ζ = 1 + (1 − τ)√q.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScValues {
    pub eta: f64,
    pub nu: f64,
    pub tau: f64,
    pub zeta: f64,
    pub sqrt_q: f64,
}

impl ScParams {
    pub fn new(eta: SqrtQSeries, nu: SqrtQSeries, tau: SqrtQSeries) -> Self {
        ScParams { eta, nu, tau }
    }

    /// Parameters constant in q.
    pub fn constant(eta: f64, nu: f64, tau: f64) -> Self {
        let d = crate::series::DEFAULT_ORDER;
        ScParams::new(SqrtQSeries::constant(eta, d), SqrtQSeries::constant(nu, d), SqrtQSeries::constant(tau, d))
    }

    pub fn nag_sc() -> Self {
        Self::constant(1.0, 1.0, 1.0)
    }

    pub fn tmm() -> Self {
        Self::constant(1.0, 1.0, 2.0)
    }

    pub fn at(&self, sqrt_q: f64) -> ScValues {
        let tau = self.tau.eval(sqrt_q);
        ScValues {
            eta: self.eta.eval(sqrt_q),
            nu: self.nu.eval(sqrt_q),
            tau,
            zeta: 1.0 + (1.0 - tau) * sqrt_q,
            sqrt_q,
        }
    }

    /// Evaluates and checks η, ν ≥ 0, τ > 0 and 1 − ν√q ≥ 0. The boundary
    /// 1 − ν√q = 0 (z forgets its past) is still a well-defined recursion.
    pub fn checked_at(&self, sqrt_q: f64) -> Result<ScValues> {
        let v = self.at(sqrt_q);
        if !(v.eta >= 0.0 && v.nu >= 0.0) {
            return Err(invalid(format!("eta and nu must be nonnegative at sqrt(q)={sqrt_q}: eta={}, nu={}", v.eta, v.nu)));
        }
        if !(v.tau > 0.0) {
            return Err(invalid(format!("tau must be positive at sqrt(q)={sqrt_q}, got {}", v.tau)));
        }
        if !(1.0 - v.nu * sqrt_q >= 0.0) {
            return Err(invalid(format!("1 - nu*sqrt(q) must be nonnegative, got {}", 1.0 - v.nu * sqrt_q)));
        }
        Ok(v)
    }
}

/// Single-variable SC parameterization by leading constants (c₀, c₁, c₂)
/// and remainders R₁ = O(√q), R₂ = O(q), R₃ = O(√q).
#[derive(Clone, Debug, PartialEq)]
pub struct SingleVarScParams {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub r1: SqrtQSeries,
    pub r2: SqrtQSeries,
    pub r3: SqrtQSeries,
    pub h1: SqrtQSeries,
}

impl SingleVarScParams {
    /// Leading coefficients of the remainders that must vanish are forced to
    /// zero.
    pub fn new(c0: f64, c1: f64, c2: f64, r1: SqrtQSeries, r2: SqrtQSeries, r3: SqrtQSeries, h1: SqrtQSeries) -> Result<Self> {
        if !(c0 > 0.0 && c1 > 0.0 && c2 > 0.0) {
            return Err(invalid(format!("c0, c1, c2 must be positive, got ({c0}, {c1}, {c2})")));
        }
        let (mut r1, mut r2, mut r3) = (r1, r2, r3);
        r1.set_coeff(0, 0.0);
        r2.set_coeff(0, 0.0);
        if r2.order() >= 1 {
            r2.set_coeff(1, 0.0);
        }
        r3.set_coeff(0, 0.0);
        Ok(SingleVarScParams { c0, c1, c2, r1, r2, r3, h1 })
    }

    /// Zero remainders with the default start h₁ = 2/(1 + √q).
    pub fn plain(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        let d = crate::series::DEFAULT_ORDER;
        let h1 = SqrtQSeries::constant(2.0, d).div(&SqrtQSeries::new(&[1.0, 1.0], d)).expect("1+sqrt(q) invertible");
        Self::new(c0, c1, c2, SqrtQSeries::zero(d), SqrtQSeries::zero(d), SqrtQSeries::zero(d), h1)
    }

    /// (gd, mom, gc, h1) at `sqrt_q`.
    pub fn coeffs_at(&self, sqrt_q: f64) -> (f64, f64, f64, f64) {
        let gd = self.c0 + self.r1.eval(sqrt_q);
        let mom = 1.0 - self.c1 * sqrt_q + self.r2.eval(sqrt_q);
        let gc = self.c2 * self.c0.sqrt() - self.c0 / 2.0 + self.r3.eval(sqrt_q);
        (gd, mom, gc, self.h1.eval(sqrt_q))
    }
}

/// Sequences (αₖ, βₖ, γₖ) of the general convex family.
#[derive(Clone, Debug)]
pub struct CSeqParams {
    pub alpha: Sequence,
    pub beta: Sequence,
    pub gamma: Sequence,
}

impl CSeqParams {
    pub fn new(alpha: Sequence, beta: Sequence, gamma: Sequence) -> Self {
        CSeqParams { alpha, beta, gamma }
    }

    /// NAG-C: βₖ = γₖ = 1, αₖ = (k + 2)/2, i.e. σ_{k+1} = k/(k + 3).
    pub fn nag_c() -> Self {
        Self::new(Sequence::rational(2.0), Sequence::constant(1.0), Sequence::constant(1.0))
    }

    pub fn sigma(&self, k: usize) -> f64 {
        sigma_next(&self.alpha, k)
    }

    /// α̃ₖ = βₖαₖ + (γₖ − βₖ)α_{k+1}.
    pub fn alpha_tilde(&self, k: usize) -> f64 {
        let b = self.beta.at(k);
        b * self.alpha.at(k) + (self.gamma.at(k) - b) * self.alpha.at(k + 1)
    }
}

/// HAG parameter sequences and initial momentum.
#[derive(Clone, Debug)]
pub struct HagParams {
    pub a: Sequence,
    pub b: Sequence,
    pub phi: Sequence,
    pub u0: Vector,
}

impl HagParams {
    fn check(&self, k: usize) -> Result<(f64, f64, f64)> {
        let (a, b) = (self.a.at(k), self.b.at(k));
        if !(a > 0.0 && b > 0.0) {
            return Err(invalid(format!("HAG needs a_k, b_k > 0; at k={k} got a={a}, b={b}")));
        }
        Ok((a, b, self.phi.at(k)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CForm {
    TwoVar,
    SingleVar,
    ThreeVar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HagForm {
    TwoVar,
    SingleVar,
}

// ---------------------------------------------------------------------------
// Shared single-variable engine

/// x_{k+1} = xₖ − gd·s∇f(xₖ) + mom·(xₖ − x_{k−1}) − gc·s(∇f(xₖ) − ∇f(x_{k−1})),
/// with `coeffs(k)` returning (gd, mom, gc) and `aux(k)` extra scalars.
#[allow(clippy::too_many_arguments)]
fn single_var_engine(
    obj: &Objective,
    s: f64,
    x0: &Vector,
    x1: Vector,
    k_max: usize,
    algo_id: &str,
    opts: RunOptions,
    mut coeffs: impl FnMut(usize) -> Result<(f64, f64, f64)>,
    mut aux: impl FnMut(usize) -> Vec<(&'static str, f64)>,
) -> Result<Trajectory> {
    let mut rec = Recorder::new(obj, s, algo_id, opts.stride);
    let (f0, g0) = obj.value_grad(x0);
    rec.push(0, x0, f0, &g0, aux(0), vec![])?;
    if k_max == 0 {
        return Ok(rec.finish());
    }
    let (mut x_prev, mut g_prev) = (x0.clone(), g0);
    let mut x = x1;
    for k in 1..=k_max {
        let (f, g) = obj.value_grad(&x);
        rec.push(k, &x, f, &g, aux(k), vec![])?;
        if k == k_max {
            break;
        }
        let (gd, mom, gc) = coeffs(k)?;
        let next = &x - &g * (gd * s) + (&x - &x_prev) * mom - (&g - &g_prev) * (gc * s);
        x_prev = std::mem::replace(&mut x, next);
        g_prev = g;
    }
    Ok(rec.finish())
}

// ---------------------------------------------------------------------------
// Strongly convex family

/// Gradient descent x_{k+1} = xₖ − s∇f(xₖ).
pub fn run_gd(obj: &Objective, s: f64, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    run_gd_opts(obj, s, x0, k_max, RunOptions::default())
}

pub fn run_gd_opts(obj: &Objective, s: f64, x0: &Vector, k_max: usize, opts: RunOptions) -> Result<Trajectory> {
    check_s(s)?;
    let mut rec = Recorder::new(obj, s, "gd", opts.stride);
    let mut x = x0.clone();
    for k in 0..=k_max {
        let (f, g) = obj.value_grad(&x);
        rec.push(k, &x, f, &g, vec![], vec![])?;
        x -= g * s;
    }
    Ok(rec.finish())
}

/// NAG-SC in its two-variable form: y_{k+1} = xₖ − s∇f(xₖ),
/// x_{k+1} = y_{k+1} + σ(y_{k+1} − yₖ), y₀ = x₀.
pub fn run_nag_sc(obj: &Objective, s: f64, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    run_nag_sc_opts(obj, s, x0, k_max, RunOptions::default())
}

pub fn run_nag_sc_opts(obj: &Objective, s: f64, x0: &Vector, k_max: usize, opts: RunOptions) -> Result<Trajectory> {
    let sq = sqrt_q(obj, s)?;
    let sigma = sc_momentum(sq);
    let mut rec = Recorder::new(obj, s, "nag-sc", opts.stride);
    let mut x = x0.clone();
    let mut y = x0.clone();
    for k in 0..=k_max {
        let (f, g) = obj.value_grad(&x);
        rec.push(k, &x, f, &g, vec![], vec![("y", &y)])?;
        let y_next = &x - g * s;
        x = &y_next + (&y_next - &y) * sigma;
        y = y_next;
    }
    Ok(rec.finish())
}

/// Heavy-ball x_{k+1} = xₖ − s∇f(xₖ) + σ(xₖ − x_{k−1}) started from
/// x₁ = x₀ − 2s∇f(x₀)/(1 + √q).
pub fn run_heavy_ball(obj: &Objective, s: f64, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    let x1 = sc_default_x1(obj, s, x0)?;
    run_heavy_ball_from(obj, s, x0, x1, k_max, RunOptions::default())
}

/// Heavy-ball with an explicit second iterate.
pub fn run_heavy_ball_from(obj: &Objective, s: f64, x0: &Vector, x1: Vector, k_max: usize, opts: RunOptions) -> Result<Trajectory> {
    let sigma = sc_momentum(sqrt_q(obj, s)?);
    single_var_engine(obj, s, x0, x1, k_max, "heavy-ball", opts, |_| Ok((1.0, sigma, 0.0)), |_| vec![])
}

/// Triple momentum method:
/// y_{k+1} = xₖ − s∇f(xₖ),
/// z_{k+1} = √q(xₖ − ∇f(xₖ)/μ) + (1 − √q)zₖ,
/// x_{k+1} = (2√q/(1+√q))z_{k+1} + (1 − 2√q/(1+√q))y_{k+1}, z₀ = x₀.
pub fn run_tmm(obj: &Objective, s: f64, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    run_tmm_opts(obj, s, x0, k_max, RunOptions::default())
}

pub fn run_tmm_opts(obj: &Objective, s: f64, x0: &Vector, k_max: usize, opts: RunOptions) -> Result<Trajectory> {
    let sq = sqrt_q(obj, s)?;
    let w = 2.0 * sq / (1.0 + sq);
    let mut rec = Recorder::new(obj, s, "tmm", opts.stride);
    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut z = x0.clone();
    for k in 0..=k_max {
        let (f, g) = obj.value_grad(&x);
        rec.push(k, &x, f, &g, vec![], vec![("y", &y), ("z", &z)])?;
        let y_next = &x - &g * s;
        let z_next = (&x - &g / obj.mu) * sq + &z * (1.0 - sq);
        x = &z_next * w + &y_next * (1.0 - w);
        y = y_next;
        z = z_next;
    }
    Ok(rec.finish())
}

/// Three-variable extended NAG-SC:
/// y_{k+1} = xₖ − ηs∇f(xₖ),
/// z_{k+1} = ν√q(xₖ − ∇f(xₖ)/μ) + (1 − ν√q)zₖ,
/// x_{k+1} = (τ√q/(1+√q))z_{k+1} + (1 − τ√q/(1+√q))y_{k+1}, z₀ = x₀.
///
/// Records store yₖ and zₖ (y₀ is taken as x₀).
pub fn run_extended_nag_sc(obj: &Objective, s: f64, p: &ScParams, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    run_extended_nag_sc_from(obj, s, p, x0, x0.clone(), k_max, RunOptions::default())
}

/// Extended NAG-SC with an explicit z₀.
pub fn run_extended_nag_sc_from(
    obj: &Objective,
    s: f64,
    p: &ScParams,
    x0: &Vector,
    z0: Vector,
    k_max: usize,
    opts: RunOptions,
) -> Result<Trajectory> {
    let sq = sqrt_q(obj, s)?;
    let v = p.checked_at(sq)?;
    let w = v.tau * sq / (1.0 + sq);
    let nsq = v.nu * sq;
    let mut rec = Recorder::new(obj, s, "extended-nag-sc", opts.stride);
    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut z = z0;
    for k in 0..=k_max {
        let (f, g) = obj.value_grad(&x);
        rec.push(k, &x, f, &g, vec![], vec![("y", &y), ("z", &z)])?;
        let y_next = &x - &g * (v.eta * s);
        let z_next = (&x - &g / obj.mu) * nsq + &z * (1.0 - nsq);
        x = &z_next * w + &y_next * (1.0 - w);
        y = y_next;
        z = z_next;
    }
    Ok(rec.finish())
}

/// Single-variable SC form with leading constants (c₀, c₁, c₂):
/// x_{k+1} = xₖ − (c₀ + R₁)s∇f(xₖ) + (1 − c₁√q + R₂)(xₖ − x_{k−1})
///           − (c₂√c₀ − c₀/2 + R₃)s(∇f(xₖ) − ∇f(x_{k−1})),
/// x₁ = x₀ − h₁s∇f(x₀).
pub fn run_single_var_sc(obj: &Objective, s: f64, p: &SingleVarScParams, x0: &Vector, k_max: usize) -> Result<Trajectory> {
    run_single_var_sc_opts(obj, s, p, x0, k_max, RunOptions::default())
}

pub fn run_single_var_sc_opts(
    obj: &Objective,
    s: f64,
    p: &SingleVarScParams,
    x0: &Vector,
    k_max: usize,
    opts: RunOptions,
) -> Result<Trajectory> {
    let sq = sqrt_q(obj, s)?;
    let (gd, mom, gc, h1) = p.coeffs_at(sq);
    let x1 = x0 - obj.gradient(x0) * (h1 * s);
    single_var_engine(obj, s, x0, x1, k_max, "single-var-sc", opts, |_| Ok((gd, mom, gc)), |_| vec![])
}

/// Runs the single-variable form from raw coefficients (gd, mom, gc, h1).
pub fn run_single_var_coeffs(
    obj: &Objective,
    s: f64,
    coeffs: crate::transforms::SingleVarScCoeffs,
    x0: &Vector,
    k_max: usize,
) -> Result<Trajectory> {
    check_s(s)?;
    let x1 = x0 - obj.gradient(x0) * (coeffs.h1 * s);
    let c = (coeffs.gd_coeff, coeffs.mom_coeff, coeffs.gc_coeff);
    single_var_engine(obj, s, x0, x1, k_max, "single-var", RunOptions::default(), |_| Ok(c), |_| vec![])
}

// ---------------------------------------------------------------------------
// General convex family

/// Extended NAG-C in any of its three equivalent forms. Every record carries
/// `alpha` = αₖ and `alpha_tilde` = α̃ₖ; the three-variable and two-variable
/// forms also store yₖ and zₖ = αₖxₖ + (1 − αₖ)yₖ.
pub fn run_extended_nag_c(obj: &Objective, s: f64, p: &CSeqParams, x0: &Vector, k_max: usize, form: CForm) -> Result<Trajectory> {
    run_extended_nag_c_opts(obj, s, p, x0, k_max, form, RunOptions::default())
}

pub fn run_extended_nag_c_opts(
    obj: &Objective,
    s: f64,
    p: &CSeqParams,
    x0: &Vector,
    k_max: usize,
    form: CForm,
    opts: RunOptions,
) -> Result<Trajectory> {
    check_s(s)?;
    for k in 0..=k_max + 1 {
        let a = p.alpha.at(k);
        if !(a > 0.0) {
            return Err(invalid(format!("alpha_k must be positive; alpha_{k} = {a}")));
        }
    }
    let aux = |k: usize| vec![("alpha", p.alpha.at(k)), ("alpha_tilde", p.alpha_tilde(k))];
    match form {
        CForm::SingleVar => {
            let (a0, a1, b0, c0) = (p.alpha.at(0), p.alpha.at(1), p.beta.at(0), p.gamma.at(0));
            let x1 = x0 - obj.gradient(x0) * ((c0 + (a0 - 1.0) * b0 / a1) * s);
            single_var_engine(
                obj,
                s,
                x0,
                x1,
                k_max,
                "extended-nag-c/single",
                opts,
                |k| {
                    let sig = p.sigma(k);
                    let (bk, bkm) = (p.beta.at(k), p.beta.at(k - 1));
                    Ok((p.gamma.at(k) + sig * (bk - bkm), sig, sig * bkm))
                },
                aux,
            )
        }
        CForm::TwoVar => {
            let mut rec = Recorder::new(obj, s, "extended-nag-c/two", opts.stride);
            let mut x = x0.clone();
            let mut y = x0.clone();
            for k in 0..=k_max {
                let (f, g) = obj.value_grad(&x);
                let ak = p.alpha.at(k);
                let z = &x * ak + &y * (1.0 - ak);
                rec.push(k, &x, f, &g, aux(k), vec![("y", &y), ("z", &z)])?;
                let y_next = &x - &g * (p.beta.at(k) * s);
                x = &x - &g * (p.gamma.at(k) * s) + (&y_next - &y) * p.sigma(k);
                y = y_next;
            }
            Ok(rec.finish())
        }
        CForm::ThreeVar => {
            let mut rec = Recorder::new(obj, s, "extended-nag-c/three", opts.stride);
            let mut x = x0.clone();
            let mut y = x0.clone();
            let mut z = x0.clone();
            for k in 0..=k_max {
                let (f, g) = obj.value_grad(&x);
                rec.push(k, &x, f, &g, aux(k), vec![("y", &y), ("z", &z)])?;
                let y_next = &x - &g * (p.beta.at(k) * s);
                let z_next = &z - &g * (p.alpha_tilde(k) * s);
                let inv = 1.0 / p.alpha.at(k + 1);
                x = &z_next * inv + &y_next * (1.0 - inv);
                y = y_next;
                z = z_next;
            }
            Ok(rec.finish())
        }
    }
}

// ---------------------------------------------------------------------------
// HAG

/// Hamiltonian assisted gradient method:
/// x_{k+1} = xₖ − aₖ∇f(xₖ) + √(aₖbₖ)uₖ,
/// u_{k+1} = −uₖ − √(aₖbₖ)∇f(xₖ) + bₖuₖ − φₖ(∇f(x_{k+1}) − ∇f(xₖ)).
///
/// The step size is folded into (a, b, φ); `s_hint` is only stored on the
/// trajectory. Records carry the re-weighted gradient weights
/// `w_old` = √(aₖbₖ) − φₖ and `w_new` = φₖ.
pub fn run_hag(obj: &Objective, s_hint: f64, p: &HagParams, x0: &Vector, k_max: usize, form: HagForm) -> Result<Trajectory> {
    run_hag_opts(obj, s_hint, p, x0, k_max, form, RunOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn run_hag_opts(
    obj: &Objective,
    s_hint: f64,
    p: &HagParams,
    x0: &Vector,
    k_max: usize,
    form: HagForm,
    opts: RunOptions,
) -> Result<Trajectory> {
    if p.u0.len() != x0.len() {
        return Err(invalid("u0 dimension differs from x0"));
    }
    for k in 0..=k_max {
        p.check(k)?;
    }
    let aux = |k: usize| {
        let (a, b, phi) = (p.a.at(k), p.b.at(k), p.phi.at(k));
        vec![("w_old", (a * b).sqrt() - phi), ("w_new", phi)]
    };
    match form {
        HagForm::TwoVar => {
            let mut rec = Recorder::new(obj, s_hint, "hag/two", opts.stride);
            let mut x = x0.clone();
            let mut u = p.u0.clone();
            let (mut f, mut g) = obj.value_grad(&x);
            for k in 0..=k_max {
                rec.push(k, &x, f, &g, aux(k), vec![("u", &u)])?;
                if k == k_max {
                    break;
                }
                let (a, b, phi) = p.check(k)?;
                let c = (a * b).sqrt();
                let x_next = &x - &g * a + &u * c;
                let (f_next, g_next) = obj.value_grad(&x_next);
                u = &u * (b - 1.0) - &g * c - (&g_next - &g) * phi;
                x = x_next;
                f = f_next;
                g = g_next;
            }
            Ok(rec.finish())
        }
        HagForm::SingleVar => {
            let (a0, b0, _) = p.check(0)?;
            let x1 = x0 - obj.gradient(x0) * a0 + &p.u0 * (a0 * b0).sqrt();
            // coefficients already include the step size, so run with s = 1
            let mut traj = single_var_engine(
                obj,
                1.0,
                x0,
                x1,
                k_max,
                "hag/single",
                opts,
                |k| {
                    let c = crate::transforms::hag_to_single(p, k)?;
                    Ok((c.gd_coeff, c.mom_coeff, c.gc_coeff))
                },
                aux,
            )?;
            traj.step_size = s_hint;
            Ok(traj)
        }
    }
}

/// Constant HAG parameters for the strongly convex setting:
/// a = (c₀/2)s, b = 2 − c₁√q, φ = c₂√s, u₀ = 0.
pub fn hag_sc_config(c0: f64, c1: f64, c2: f64, s: f64, mu: f64, dim: usize) -> Result<HagParams> {
    if !(c0 > 0.0 && c1 > 0.0 && c2 > 0.0) {
        return Err(invalid("hag_sc_config needs c0, c1, c2 > 0"));
    }
    check_s(s)?;
    let b = 2.0 - c1 * (mu * s).sqrt();
    if !(b > 0.0) {
        return Err(invalid(format!("b = 2 - c1*sqrt(q) must be positive, got {b}")));
    }
    Ok(HagParams {
        a: Sequence::constant(c0 / 2.0 * s),
        b: Sequence::constant(b),
        phi: Sequence::constant(c2 * s.sqrt()),
        u0: Vector::zeros(dim),
    })
}

/// HAG parameters for the general convex setting:
/// bₖ = 1 + σ_{k+2}, aₖ = c₀s/bₖ, φₖ = c₂√s, u₀ = 0.
pub fn hag_c_config(c0: f64, c2: f64, s: f64, alpha: &Sequence, dim: usize) -> Result<HagParams> {
    if !(c0 > 0.0 && c2 > 0.0) {
        return Err(invalid("hag_c_config needs c0, c2 > 0"));
    }
    check_s(s)?;
    for k in 0..64 {
        let bk = 1.0 + sigma_next(alpha, k + 1);
        if !(bk > 0.0) {
            return Err(invalid(format!("sigma_{} <= -1", k + 2)));
        }
    }
    let ab = alpha.clone();
    let b = Sequence::from_fn(move |k| 1.0 + sigma_next(&ab, k + 1));
    let ab = alpha.clone();
    let a = Sequence::from_fn(move |k| c0 * s / (1.0 + sigma_next(&ab, k + 1)));
    Ok(HagParams { a, b, phi: Sequence::constant(c2 * s.sqrt()), u0: Vector::zeros(dim) })
}

/// The two-rule α sequence whose σ has no limit of k(1 − σ_{k+1}) for r > 2.
pub fn lemma5_alpha(r: f64) -> Result<Sequence> {
    if !(r >= 2.0) {
        return Err(invalid(format!("alternating alpha needs r >= 2, got {r}")));
    }
    Ok(Sequence::alternating(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_diag_quadratic, make_scalar_quadratic};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn gd_exact_step() {
        let f = make_scalar_quadratic(1.0).unwrap();
        let t = run_gd(&f, 1.0, &v(&[1.0]), 3).unwrap();
        assert_eq!(t.records[1].x[0], 0.0);
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn nag_sc_q_one_is_gd_after_start() {
        // μ = L = s = 1: σ = 0, x₁ = x₀ − ∇f(x₀)
        let f = make_scalar_quadratic(1.0).unwrap();
        let t = run_nag_sc(&f, 1.0, &v(&[2.0]), 3).unwrap();
        assert_eq!(t.records[1].x[0], 0.0);
        assert_eq!(t.records[2].x[0], 0.0);
        assert_eq!(sc_momentum(1.0), 0.0);
    }

    #[test]
    fn stationary_starts() {
        let f = make_diag_quadratic(0.5, 1.0).unwrap();
        let x0 = v(&[0.0, 0.0]);
        for t in [
            run_gd(&f, 0.5, &x0, 5).unwrap(),
            run_nag_sc(&f, 0.5, &x0, 5).unwrap(),
            run_heavy_ball(&f, 0.5, &x0, 5).unwrap(),
            run_tmm(&f, 0.5, &x0, 5).unwrap(),
            run_extended_nag_sc(&f, 0.5, &ScParams::constant(1.5, 1.0, 2.0), &x0, 5).unwrap(),
            run_extended_nag_c(&f, 0.5, &CSeqParams::nag_c(), &x0, 5, CForm::ThreeVar).unwrap(),
        ] {
            assert!(t.xs().all(|x| x == &x0), "{}", t.algo_id);
        }
    }

    #[test]
    fn mu_zero_rejected() {
        let f = crate::problems::make_log_sum_exp(3, 4, 1.0, 1).unwrap();
        assert!(run_nag_sc(&f, 0.1, &Vector::zeros(3), 5).is_err());
    }

    #[test]
    fn divergence_reports_step() {
        let f = make_scalar_quadratic(1.0).unwrap();
        let err = run_gd(&f, 3.0, &v(&[1.0]), 1000).unwrap_err();
        assert!(matches!(err, crate::Error::Diverged { k } if k > 1 && k < 100));
    }

    #[test]
    fn hag_c_config_start() {
        let p = hag_c_config(1.0, 1.5, 0.01, &Sequence::rational(2.0), 2).unwrap();
        assert!((p.b.at(0) - 1.25).abs() < 1e-15);
        for k in 0..=100 {
            assert!((p.a.at(k) * p.b.at(k) - 0.01).abs() < 1e-15);
        }
    }
}
