//! Conversions between equivalent parameterizations.
//!
//! The three-variable SC recursion with (η, ν, τ) is equivalent to the
//! single-variable recursion
//!
//! x_{k+1} = xₖ − gd·s∇f(xₖ) + mom·(xₖ − x_{k−1}) − gc·s(∇f(xₖ) − ∇f(x_{k−1}))
//!
//! with gd = ν(τ + ζη√q)/(1+√q), mom = ζ(1 − ν√q)/(1+√q),
//! gc = ζη(1 − ν√q)/(1+√q) and first step x₁ = x₀ − h₁s∇f(x₀),
//! h₁ = (ζη + ντ)/(1+√q), where ζ = 1 + (1 − τ)√q.
//!
//! The inverse direction holds as series in √q when c₁² > 4c₀; when the
//! caller's h₁ differs from the one above, the mismatch is absorbed by a
//! shifted start z₀ = x₀ + h₂(√q/μ)∇f(x₀).

use crate::algorithms::{HagParams, ScParams, ScValues, SingleVarScParams};
use crate::error::{invalid, Error, Result};
use crate::series::{SqrtQSeries, DEFAULT_ORDER, ZERO_THRESHOLD};

/// Single-variable coefficients at one √q (or one k for time-varying forms).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleVarScCoeffs {
    /// Multiplies s∇f(xₖ).
    pub gd_coeff: f64,
    /// Multiplies xₖ − x_{k−1}.
    pub mom_coeff: f64,
    /// Multiplies s(∇f(xₖ) − ∇f(x_{k−1})).
    pub gc_coeff: f64,
    /// First step x₁ = x₀ − h₁s∇f(x₀).
    pub h1: f64,
}

/// The same coefficients as series in √q.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleVarScSeries {
    pub gd: SqrtQSeries,
    pub mom: SqrtQSeries,
    pub gc: SqrtQSeries,
    pub h1: SqrtQSeries,
}

impl SingleVarScSeries {
    pub fn eval(&self, sqrt_q: f64) -> SingleVarScCoeffs {
        SingleVarScCoeffs {
            gd_coeff: self.gd.eval(sqrt_q),
            mom_coeff: self.mom.eval(sqrt_q),
            gc_coeff: self.gc.eval(sqrt_q),
            h1: self.h1.eval(sqrt_q),
        }
    }
}

/// Which root of the leading-order quadratic ν₀τ₀ = c₀, ν₀ + τ₀ = c₁ is τ₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RootChoice {
    /// τ₀ = (c₁ + √(c₁² − 4c₀))/2, the documented default for c-space input.
    #[default]
    TauLarger,
    NuLarger,
}

/// Result of the series inverse: parameters plus the start offset h₂.
#[derive(Clone, Debug, PartialEq)]
pub struct ScConversion {
    pub params: ScParams,
    /// z₀ = x₀ + h₂(√q/μ)∇f(x₀); identically zero when h₁ matches.
    pub h2: SqrtQSeries,
}

/// Evaluates the single-variable coefficients of (η, ν, τ) at `q`.
pub fn sc_three_to_single(p: &ScParams, q: f64) -> Result<SingleVarScCoeffs> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(invalid(format!("q must be positive, got {q}")));
    }
    let v = p.at(q.sqrt());
    if !(v.tau > 0.0) {
        return Err(invalid(format!("tau must be positive, got {}", v.tau)));
    }
    Ok(coeffs_from_values(&v))
}

pub(crate) fn coeffs_from_values(v: &ScValues) -> SingleVarScCoeffs {
    let (s, d) = (v.sqrt_q, 1.0 + v.sqrt_q);
    let keep = 1.0 - v.nu * s;
    SingleVarScCoeffs {
        gd_coeff: v.nu * (v.tau + v.zeta * v.eta * s) / d,
        mom_coeff: v.zeta * keep / d,
        gc_coeff: v.zeta * v.eta * keep / d,
        h1: (v.zeta * v.eta + v.nu * v.tau) / d,
    }
}

/// ζ = 1 + (1 − τ)√q as a series.
pub fn zeta_series(tau: &SqrtQSeries) -> SqrtQSeries {
    let one = SqrtQSeries::constant(1.0, tau.order());
    &one + &(&one - tau).shift()
}

fn one_plus_sqrt_q(order: usize) -> SqrtQSeries {
    SqrtQSeries::new(&[1.0, 1.0], order)
}

/// Series form of [`sc_three_to_single`].
pub fn sc_three_to_single_series(p: &ScParams) -> Result<SingleVarScSeries> {
    let (eta, nu, tau) = (&p.eta, &p.nu, &p.tau);
    let order = eta.order().min(nu.order()).min(tau.order());
    let zeta = zeta_series(tau);
    let inv = one_plus_sqrt_q(order).recip().expect("1 + sqrt(q) is invertible");
    let keep = &SqrtQSeries::constant(1.0, order) - &nu.shift();
    let ze = &zeta * eta;
    let gd = nu * &(tau + &ze.shift()) * &inv;
    let mom = &zeta * &keep * &inv;
    let gc = &ze * &keep * &inv;
    let h1 = (&ze + &(nu * tau)) * &inv;
    Ok(SingleVarScSeries { gd, mom, gc, h1 })
}

/// Leading constants and remainders of a single-variable series:
/// c₀ = gd₀, c₁ = −mom₁, c₂ = (gc₀ + c₀/2)/√c₀.
pub fn single_series_to_c_space(series: &SingleVarScSeries) -> Result<SingleVarScParams> {
    let c0 = series.gd.coeff(0);
    let c1 = -series.mom.coeff(1);
    if (series.mom.coeff(0) - 1.0).abs() > ZERO_THRESHOLD {
        return Err(Error::NotRepresentable(format!("momentum coefficient must tend to 1, leading term is {}", series.mom.coeff(0))));
    }
    if !(c0 > 0.0) {
        return Err(Error::NotRepresentable(format!("c0 = {c0} is not positive")));
    }
    let c2 = (series.gc.coeff(0) + c0 / 2.0) / c0.sqrt();
    let order = series.gd.order();
    let r1 = &series.gd - &SqrtQSeries::constant(c0, order);
    let r2 = &series.mom - &SqrtQSeries::new(&[1.0, -c1], order);
    let r3 = &series.gc - &SqrtQSeries::constant(c2 * c0.sqrt() - c0 / 2.0, order);
    SingleVarScParams::new(c0, c1, c2, r1, r2, r3, series.h1.clone())
}

/// Rebuilds the coefficient series gd = c₀ + R₁, mom = 1 − c₁√q + R₂,
/// gc = c₂√c₀ − c₀/2 + R₃.
pub fn c_space_to_single_series(p: &SingleVarScParams) -> SingleVarScSeries {
    let order = p.r1.order().min(p.r2.order()).min(p.r3.order());
    SingleVarScSeries {
        gd: &p.r1.with_order(order) + p.c0,
        mom: &p.r2.with_order(order) + &SqrtQSeries::new(&[1.0, -p.c1], order),
        gc: &p.r3.with_order(order) + (p.c2 * p.c0.sqrt() - p.c0 / 2.0),
        h1: p.h1.clone(),
    }
}

/// Series inverse from c-space data to (η, ν, τ) truncated at `q_trunc`,
/// with τ₀ chosen per `choice`.
///
/// Coefficient series are treated as exact polynomials: they are padded with
/// zeros to the working length.
pub fn single_to_sc_three(p: &SingleVarScParams, choice: RootChoice, q_trunc: usize) -> Result<ScConversion> {
    let disc = p.c1 * p.c1 - 4.0 * p.c0;
    if disc <= ZERO_THRESHOLD {
        return Err(Error::NotRepresentable(format!(
            "c1^2 - 4c0 = {disc} <= 0: the single-variable form has no three-variable equivalent"
        )));
    }
    let series = c_space_to_single_series(p);
    single_series_to_sc_three(&series, choice, q_trunc)
}

/// Series inverse from coefficient series (see [`single_to_sc_three`]).
pub fn single_series_to_sc_three(series: &SingleVarScSeries, choice: RootChoice, q_trunc: usize) -> Result<ScConversion> {
    let work = q_trunc + 3;
    let g = one_plus_sqrt_q(work);
    let g1 = &series.gd.with_order(work) * &g;
    let g2 = &series.mom.with_order(work) * &g;
    let g3 = &series.gc.with_order(work) * &g;
    if (g2.coeff(0) - 1.0).abs() > ZERO_THRESHOLD {
        return Err(Error::NotRepresentable("momentum coefficient must tend to 1".into()));
    }
    let eta = g3.div(&g2).expect("g2 has unit constant term");
    if eta.coeff(0) < -ZERO_THRESHOLD {
        return Err(Error::NotRepresentable(format!("implied eta0 = {} is negative", eta.coeff(0))));
    }

    let (c0, c1) = (g1.coeff(0), 1.0 - g2.coeff(1));
    let disc = c1 * c1 - 4.0 * c0;
    if disc <= ZERO_THRESHOLD {
        return Err(Error::NotRepresentable(format!("c1^2 - 4c0 = {disc} <= 0")));
    }
    let big = (c1 + disc.sqrt()) / 2.0;
    let small = c0 / big;
    let (tau0, nu0) = match choice {
        RootChoice::TauLarger => (big, small),
        RootChoice::NuLarger => (small, big),
    };

    let mut nu = SqrtQSeries::constant(nu0, work);
    let mut tau = SqrtQSeries::constant(tau0, work);
    // order n is linear in (νₙ, τₙ): coefficient n of F1 = ν(τ + ζη√q) gains
    // τ₀νₙ + ν₀τₙ, coefficient n+1 of F2 = ζ(1 − ν√q) gains −(νₙ + τₙ)
    for n in 1..work {
        let (f1, f2) = forward_f1_f2(&eta, &nu, &tau);
        let r1 = g1.coeff(n) - f1.coeff(n);
        let r2 = g2.coeff(n + 1) - f2.coeff(n + 1);
        let sum = -r2;
        let tau_n = (r1 - tau0 * sum) / (nu0 - tau0);
        nu.set_coeff(n, sum - tau_n);
        tau.set_coeff(n, tau_n);
    }

    let zeta = zeta_series(&tau);
    let keep = &SqrtQSeries::constant(1.0, work) - &nu.shift();
    let num = &(&zeta * &eta) + &(&nu * &tau) - &(&series.h1.with_order(work) * &g);
    let h2 = num.div(&(&tau * &keep)).ok_or_else(|| Error::NotRepresentable("tau0 vanishes".into()))?;

    Ok(ScConversion {
        params: ScParams::new(eta.with_order(q_trunc), nu.with_order(q_trunc), tau.with_order(q_trunc)),
        h2: h2.with_order(q_trunc),
    })
}

/// F1 = ν(τ + ζη√q), F2 = ζ(1 − ν√q).
fn forward_f1_f2(eta: &SqrtQSeries, nu: &SqrtQSeries, tau: &SqrtQSeries) -> (SqrtQSeries, SqrtQSeries) {
    let zeta = zeta_series(tau);
    let f1 = nu * &(tau + &(&zeta * eta).shift());
    let keep = &SqrtQSeries::constant(1.0, nu.order()) - &nu.shift();
    (f1, &zeta * &keep)
}

/// Exact inverse at one √q: solves for (η, ν, τ) reproducing `c` at this q,
/// taking the root of the quadratic in τ nearest `tau_hint`.
pub fn single_to_sc_three_at(c: &SingleVarScCoeffs, sqrt_q: f64, tau_hint: f64) -> Result<ScValues> {
    let s = sqrt_q;
    let q = s * s;
    let d = 1.0 + s;
    let (g1, g2, g3) = (c.gd_coeff * d, c.mom_coeff * d, c.gc_coeff * d);
    if g2 == 0.0 {
        return Err(Error::NotRepresentable("zero momentum coefficient".into()));
    }
    let eta = g3 / g2;
    let a2 = -s * (1.0 - eta * q);
    let a1 = 1.0 - g2 + s + (g1 - 2.0 * eta + eta * g2) * q - 2.0 * eta * q * s;
    let a0 = (eta - g1 - eta * g2) * s + (2.0 * eta - g1 - eta * g2) * q + eta * q * s;
    let roots: Vec<f64> = if a2.abs() < 1e-300 {
        vec![-a0 / a1]
    } else {
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc < 0.0 {
            return Err(Error::NotRepresentable(format!("no real tau at sqrt(q)={s}")));
        }
        // numerically stable pair
        let t = -0.5 * (a1 + a1.signum() * disc.sqrt());
        vec![t / a2, a0 / t]
    };
    let tau = roots
        .into_iter()
        .filter(|r| r.is_finite())
        .min_by(|a, b| (a - tau_hint).abs().total_cmp(&(b - tau_hint).abs()))
        .ok_or_else(|| Error::NotRepresentable("degenerate quadratic".into()))?;
    let zeta = 1.0 + (1.0 - tau) * s;
    let nu = g1 / (tau + zeta * eta * s);
    Ok(ScValues { eta, nu, tau, zeta, sqrt_q: s })
}

/// Single-variable coefficients of HAG at index k ≥ 1. The step size is
/// already inside (a, b, φ), so the coefficients multiply ∇f without s; h₁
/// is a₀ (exact when u₀ = 0).
pub fn hag_to_single(p: &HagParams, k: usize) -> Result<SingleVarScCoeffs> {
    if k == 0 {
        return Err(invalid("hag_to_single needs k >= 1"));
    }
    let (am, bm) = (p.a.at(k - 1), p.b.at(k - 1));
    let (a, b) = (p.a.at(k), p.b.at(k));
    if !(am > 0.0 && bm > 0.0 && a > 0.0 && b > 0.0) {
        return Err(invalid(format!("HAG needs positive a, b at k-1 and k = {k}")));
    }
    let ratio = (a * b / (am * bm)).sqrt();
    Ok(SingleVarScCoeffs {
        gd_coeff: am * ratio + a,
        mom_coeff: (bm - 1.0) * ratio,
        gc_coeff: p.phi.at(k - 1) * (a * b).sqrt() - am * ratio,
        h1: p.a.at(0),
    })
}

/// (δ, ρ) = (√(aₖ/bₖ), aₖ + bₖ − 1).
pub fn hag_delta_rho(p: &HagParams, k: usize) -> Result<(f64, f64)> {
    let (a, b) = (p.a.at(k), p.b.at(k));
    if !(a > 0.0 && b > 0.0) {
        return Err(invalid(format!("HAG needs a_k, b_k > 0 at k = {k}")));
    }
    Ok(((a / b).sqrt(), a + b - 1.0))
}

/// Default truncation used by the converters.
pub const DEFAULT_TRUNC: usize = DEFAULT_ORDER;
