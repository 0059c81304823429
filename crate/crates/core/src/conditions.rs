//! Sufficient conditions for acceleration.
//!
//! Conditions on the SC family are evaluated on the leading coefficients of
//! η, ν, τ or on the series
//!
//! 𝐈 = ζν(τ + ζη√q) − τ²,  𝐈𝐈 = τ(ντ − 2ζη) + ζη(ντ − ζη)√q,
//!
//! whose sign pattern near q = 0 decides whether the contraction
//! V_{k+1} ≤ (1 − ν√q)Vₖ holds for s ≲ 1/L (accelerated) or only for
//! s ≲ μ/L². General convex sequences are checked on a finite horizon.
//!
//! `NotCovered` means no sufficient condition applies; it never means the
//! method fails to accelerate.

use std::fmt;

use crate::algorithms::{CSeqParams, ScParams};
use crate::sequence::Sequence;
use crate::series::{SqrtQSeries, ZERO_THRESHOLD};
use crate::transforms::zeta_series;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Accelerated,
    NonAccelerated,
    NotCovered,
    Invalid,
}

/// Step-size regime in which the conclusion holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// s ≲ 1/L
    InverseL,
    /// s ≲ μ/L²
    MuOverL2,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Accelerated => "Accelerated",
            Status::NonAccelerated => "NonAccelerated",
            Status::NotCovered => "NotCovered",
            Status::Invalid => "Invalid",
        })
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::InverseL => "s<~1/L",
            Regime::MuOverL2 => "s<~mu/L^2",
            Regime::NotApplicable => "n/a",
        })
    }
}

/// Outcome of a condition check. The regime is determined by the status.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub clause: String,
    pub regime: Regime,
    pub certificate: Vec<(String, f64)>,
    /// Free-form detail, e.g. the first violated check.
    pub note: Option<String>,
}

impl Verdict {
    fn new(status: Status, clause: impl Into<String>) -> Self {
        let regime = match status {
            Status::Accelerated => Regime::InverseL,
            Status::NonAccelerated => Regime::MuOverL2,
            _ => Regime::NotApplicable,
        };
        Verdict { status, clause: clause.into(), regime, certificate: Vec::new(), note: None }
    }

    pub fn accelerated(clause: impl Into<String>) -> Self {
        Self::new(Status::Accelerated, clause)
    }

    pub fn non_accelerated(clause: impl Into<String>) -> Self {
        Self::new(Status::NonAccelerated, clause)
    }

    pub fn not_covered(clause: impl Into<String>) -> Self {
        Self::new(Status::NotCovered, clause)
    }

    pub fn invalid(clause: impl Into<String>) -> Self {
        Self::new(Status::Invalid, clause)
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.certificate.push((key.to_string(), value));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn cert(&self, key: &str) -> Option<f64> {
        self.certificate.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn is_accelerated(&self) -> bool {
        self.status == Status::Accelerated
    }
}

impl fmt::Display for Verdict {
    /// `status clause regime key=value...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.status, self.clause, self.regime)?;
        for (k, v) in &self.certificate {
            write!(f, " {k}={v}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " note={}", n.replace(' ', "_"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// SC family

/// The series 𝐈 and 𝐈𝐈 of (η, ν, τ).
pub fn series_i_ii(p: &ScParams) -> (SqrtQSeries, SqrtQSeries) {
    let (eta, nu, tau) = (&p.eta, &p.nu, &p.tau);
    let zeta = zeta_series(tau);
    let ze = &zeta * eta;
    let nt = nu * tau;
    let i = &(&zeta * &(nu * &(tau + &ze.shift()))) - &(tau * tau);
    let ii = &(tau * &(&nt - &ze.scale(2.0))) + &(&ze * &(&nt - &ze)).shift();
    (i, ii)
}

/// Classifies (𝐈, 𝐈𝐈) by the signs of their leading coefficients, using the
/// default zero threshold.
pub fn classify_lemma_s2(i: &SqrtQSeries, ii: &SqrtQSeries) -> Verdict {
    classify_lemma_s2_with(i, ii, ZERO_THRESHOLD)
}

/// Case analysis with N, M the first indices where |aₙ|, |bₘ| exceed
/// `threshold`:
/// (ia) a_N > 0, b_M < 0, M ≤ N − 2;
/// (ib) a_N > 0, b_M < 0, M = N − 1 and 𝐈 + √q𝐈𝐈 has a negative leading
///      coefficient or vanishes;
/// (iia) a_N < 0, b_M > 0, M = N (only for s ≲ μ/L²);
/// (iib) a_N < 0, b_M > 0, M ≥ N + 1;
/// (iii) neither series has a positive leading coefficient.
pub fn classify_lemma_s2_with(i: &SqrtQSeries, ii: &SqrtQSeries, threshold: f64) -> Verdict {
    let n = i.leading_index(threshold);
    let m = ii.leading_index(threshold);
    let a = n.map(|n| i.coeff(n));
    let b = m.map(|m| ii.coeff(m));
    let cert = |v: Verdict| {
        let mut v = v;
        if let (Some(n), Some(a)) = (n, a) {
            v = v.with("N", n as f64).with("a_N", a);
        }
        if let (Some(m), Some(b)) = (m, b) {
            v = v.with("M", m as f64).with("b_M", b);
        }
        v
    };
    match (n, a, m, b) {
        (Some(n), Some(a), Some(m), Some(b)) if a > 0.0 && b < 0.0 => {
            if m + 2 <= n {
                return cert(Verdict::accelerated("LemS2(ia)"));
            }
            if m + 1 == n {
                let sum = i + &ii.shift();
                let lead = sum.leading_index(threshold).map(|j| sum.coeff(j));
                if lead.is_none_or(|c| c < 0.0) {
                    return cert(Verdict::accelerated("LemS2(ib)").with("lead_I_plus_sqrtq_II", lead.unwrap_or(0.0)));
                }
            }
            cert(Verdict::not_covered("LemS2"))
        }
        (Some(n), Some(a), Some(m), Some(b)) if a < 0.0 && b > 0.0 => {
            if m == n {
                cert(Verdict::non_accelerated("LemS2(iia)"))
            } else if m > n {
                cert(Verdict::accelerated("LemS2(iib)"))
            } else {
                cert(Verdict::not_covered("LemS2"))
            }
        }
        _ => {
            let i_ok = a.is_none_or(|a| a < 0.0);
            let ii_ok = b.is_none_or(|b| b < 0.0);
            if i_ok && ii_ok {
                cert(Verdict::accelerated("LemS2(iii)"))
            } else {
                cert(Verdict::not_covered("LemS2"))
            }
        }
    }
}

/// Which of the three fixed-q condition sets hold for values 𝐈, 𝐈𝐈:
/// (1) 𝐈 > 0 and 𝐈 + √q𝐈𝐈 ≤ 0; (2) 𝐈𝐈 > 0 and (μ/L)𝐈 + √q𝐈𝐈 ≤ 0;
/// (3) 𝐈 ≤ 0 and 𝐈𝐈 ≤ 0. At most one can hold.
pub fn lemma2_conditions(i: f64, ii: f64, sqrt_q: f64, mu_over_l: f64) -> Vec<u8> {
    let mut out = Vec::new();
    if i > 0.0 && i + sqrt_q * ii <= 0.0 {
        out.push(1);
    }
    if ii > 0.0 && mu_over_l * i + sqrt_q * ii <= 0.0 {
        out.push(2);
    }
    if i <= 0.0 && ii <= 0.0 {
        out.push(3);
    }
    out
}

/// Conditions on constant parameters (η₀, ν₀, τ₀).
pub fn check_thm1(eta0: f64, nu0: f64, tau0: f64) -> Verdict {
    let v = |verdict: Verdict| verdict.with("eta0", eta0).with("nu0", nu0).with("tau0", tau0);
    if !(eta0 >= 0.0 && nu0 >= 0.0 && tau0 >= 0.0) || ![eta0, nu0, tau0].iter().all(|x| x.is_finite()) {
        return v(Verdict::invalid("Thm1"));
    }
    let pos = nu0 > 0.0 && tau0 > 0.0;
    if pos && nu0 != tau0 {
        let half = nu0 * tau0 / 2.0;
        return if eta0 < half { v(Verdict::non_accelerated("Thm1(ia)")) } else { v(Verdict::accelerated("Thm1(iia)")) };
    }
    if pos && nu0 == tau0 {
        let t = tau0;
        let half_sq = t * t / 2.0;
        if t > 2.0 && eta0 == half_sq {
            return v(Verdict::non_accelerated("Thm1(ib)"));
        }
        if t >= 2.0 && eta0 > half_sq {
            return v(Verdict::accelerated("Thm1(iib)"));
        }
        if t > 1.0 && t < 2.0 && eta0 > t {
            return v(Verdict::accelerated("Thm1(iic)"));
        }
        if t <= 1.0 && eta0 >= t {
            return v(Verdict::accelerated("Thm1(iid)"));
        }
    }
    v(Verdict::not_covered("Thm1"))
}

/// Leading-constant conditions for q-dependent parameters; requires ν₀ ≠ τ₀.
pub fn check_thm2(p: &ScParams) -> Verdict {
    let (eta0, nu0, tau0) = (p.eta.coeff(0), p.nu.coeff(0), p.tau.coeff(0));
    let v = |verdict: Verdict| verdict.with("eta0", eta0).with("nu0", nu0).with("tau0", tau0);
    if !(eta0 >= 0.0 && nu0 >= 0.0 && tau0 >= 0.0) {
        return v(Verdict::invalid("Thm2"));
    }
    if !(nu0 > 0.0 && tau0 > 0.0) || (nu0 - tau0).abs() <= ZERO_THRESHOLD {
        return v(Verdict::not_covered("Thm2"));
    }
    if eta0 < nu0 * tau0 / 2.0 {
        v(Verdict::non_accelerated("Thm2(ia)"))
    } else {
        v(Verdict::accelerated("Thm2(iia)"))
    }
}

/// First-order conditions when ν₀ = τ₀ > 0 and η₀ ≥ τ₀²/2 (within 1e-12).
/// Equality points of the (iic) chain and the higher-order subcases of (ia)
/// are reported as not covered.
pub fn check_thm3(p: &ScParams) -> Verdict {
    let (eta0, nu0, tau0) = (p.eta.coeff(0), p.nu.coeff(0), p.tau.coeff(0));
    let (eta1, nu1, tau1) = (p.eta.coeff(1), p.nu.coeff(1), p.tau.coeff(1));
    let v = |verdict: Verdict| {
        verdict
            .with("eta0", eta0)
            .with("tau0", tau0)
            .with("eta1", eta1)
            .with("nu1", nu1)
            .with("tau1", tau1)
    };
    let tol = ZERO_THRESHOLD;
    if !(tau0 > 0.0) || (nu0 - tau0).abs() > tol || eta0 < tau0 * tau0 / 2.0 - tol {
        return v(Verdict::not_covered("Thm3").with_note("precondition nu0 = tau0 > 0, eta0 >= tau0^2/2 fails"));
    }
    let t = tau0;
    let d = nu1 - tau1;
    if (eta0 - t * t / 2.0).abs() <= tol {
        if d < t * (t / 2.0 - 1.0) {
            let rhs = nu1 * tau1 + t * t / 2.0 * (2.5 * t - 2.0);
            return if 2.0 * eta1 < rhs {
                v(Verdict::non_accelerated("Thm3(ia)"))
            } else {
                v(Verdict::accelerated("Thm3(iia)"))
            };
        }
        return v(Verdict::not_covered("Thm3"));
    }
    let lower = (t - 1.0) * t - eta0;
    if d < lower {
        return v(Verdict::accelerated("Thm3(iib)"));
    }
    if lower < d && d < eta0 - t {
        return v(Verdict::accelerated("Thm3(iic)"));
    }
    v(Verdict::not_covered("Thm3"))
}

/// Conditions on the single-variable leading constants (c₀, c₁, c₂).
pub fn check_cor1(c0: f64, c1: f64, c2: f64) -> Verdict {
    let v = |verdict: Verdict| verdict.with("c0", c0).with("c1", c1).with("c2", c2);
    if !(c0 > 0.0 && c1 > 0.0 && c2 > 0.0) || ![c0, c1, c2].iter().all(|x| x.is_finite()) {
        return v(Verdict::invalid("Cor1"));
    }
    let over = c1 * c1 > 4.0 * c0;
    let c2sq = c2 * c2;
    if over && c2sq >= c0 {
        return v(Verdict::accelerated("Cor1(ii)"));
    }
    if over && c0 / 4.0 <= c2sq && c2sq < c0 {
        return v(Verdict::non_accelerated("Cor1(i)"));
    }
    v(Verdict::not_covered("Cor1"))
}

// ---------------------------------------------------------------------------
// General convex family

/// Monotonicity checks start here to skip transients.
pub const K_BURN: usize = 20;
/// Allowed tail oscillation of βₖ and γₖ.
pub const LIMIT_TOL: f64 = 1e-8;
/// Relative slack on the recursive condition α_{k+1}(α_{k+1} − 1) ≤ αₖ².
pub const RECURSIVE_SLACK: f64 = 1e-12;
/// Bound on k·|α_{k+1}/αₖ − 1| on the tail (ratio → 1 at rate O(1/k)).
pub const RATIO_RATE_BOUND: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
    Constant,
}

/// Direction of a sequence on `ks`, within a relative tolerance.
pub fn monotone_direction(values: &[f64], tol: f64) -> Option<Direction> {
    let mut up = false;
    let mut down = false;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let t = tol * (1.0 + w[0].abs());
        if d > t {
            up = true;
        } else if d < -t {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Some(Direction::Constant),
        (true, false) => Some(Direction::NonDecreasing),
        (false, true) => Some(Direction::NonIncreasing),
        (true, true) => None,
    }
}

/// First index k with α_{k+1}(α_{k+1} − 1) > αₖ²(1 + slack), for k < k_max.
pub fn recursive_condition_violation(alpha: &Sequence, k_max: usize) -> Option<usize> {
    (0..k_max).find(|&k| {
        let (a, an) = (alpha.at(k), alpha.at(k + 1));
        an * (an - 1.0) > a * a * (1.0 + RECURSIVE_SLACK)
    })
}

/// Finite-horizon surrogate of the general convex conditions: limits of
/// βₖ, γₖ with β > γ/2 > 0; αₖ = Ω(k), α_{k+1}/αₖ → 1 and the recursive
/// condition; monotone α̃ₖ/αₖ from [`K_BURN`]. Limits are judged on the
/// last 10% of 0..=k_max.
pub fn check_thm4(p: &CSeqParams, k_max: usize) -> Verdict {
    let k_max = k_max.max(100);
    let start = k_max - k_max / 10;
    let base = |v: Verdict| v.with("window_start", start as f64).with("window_end", k_max as f64);

    for k in 0..=k_max + 1 {
        if !(p.alpha.at(k) > 0.0) {
            return base(Verdict::invalid("Thm4").with("k", k as f64).with_note("alpha_k <= 0"));
        }
    }

    // (i)
    let tail = |s: &Sequence| {
        let vals: Vec<f64> = (start..=k_max).map(|k| s.at(k)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo, *vals.last().unwrap())
    };
    let (osc_b, beta) = tail(&p.beta);
    let (osc_g, gamma) = tail(&p.gamma);
    let v = |verdict: Verdict| base(verdict).with("beta", beta).with("gamma", gamma);
    if osc_b > LIMIT_TOL || osc_g > LIMIT_TOL {
        return v(Verdict::not_covered("Thm4(i)")
            .with("beta_oscillation", osc_b)
            .with("gamma_oscillation", osc_g)
            .with_note("beta_k or gamma_k does not settle on the tail window"));
    }
    if !(beta > gamma / 2.0 && gamma > 0.0) {
        return v(Verdict::not_covered("Thm4(i)").with_note("needs beta > gamma/2 > 0"));
    }

    // (ii)
    let ratio_at = |k: usize| p.alpha.at(k) / k.max(1) as f64;
    let r_start = ratio_at(start);
    let r_min = (start..=k_max).map(ratio_at).fold(f64::INFINITY, f64::min);
    if !(r_min > 0.0 && r_min >= 0.5 * r_start) {
        return v(Verdict::not_covered("Thm4(ii)").with("alpha_over_k_min", r_min).with_note("alpha_k is not Omega(k)"));
    }
    let rate = (start..k_max).map(|k| k as f64 * (p.alpha.at(k + 1) / p.alpha.at(k) - 1.0).abs()).fold(0.0, f64::max);
    if rate > RATIO_RATE_BOUND {
        return v(Verdict::not_covered("Thm4(ii)").with("ratio_rate", rate).with_note("alpha_{k+1}/alpha_k does not tend to 1"));
    }
    if let Some(k) = recursive_condition_violation(&p.alpha, k_max) {
        return v(Verdict::not_covered("Thm4(ii)").with("first_violation", k as f64).with_note("recursive condition fails"));
    }
    let equality = (0..k_max).all(|k| {
        let (a, an) = (p.alpha.at(k), p.alpha.at(k + 1));
        (an * (an - 1.0) - a * a).abs() <= 1e-12 * a * a
    });

    // (iii)
    let ratios: Vec<f64> = (K_BURN.min(k_max)..=k_max).map(|k| p.alpha_tilde(k) / p.alpha.at(k)).collect();
    let Some(dir) = monotone_direction(&ratios, 1e-12) else {
        return v(Verdict::not_covered("Thm4(iii)").with_note("alpha_tilde_k/alpha_k is not monotone"));
    };
    let dir_code = match dir {
        Direction::NonIncreasing => -1.0,
        Direction::NonDecreasing => 1.0,
        Direction::Constant => 0.0,
    };
    v(Verdict::accelerated("Thm4"))
        .with("recursive_equality", if equality { 1.0 } else { 0.0 })
        .with("monotone_direction", dir_code)
}

/// Tail on which α̃ₖ/αₖ is monotone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneTail {
    pub k_star: usize,
    pub direction: Direction,
}

/// α̃ₖ/αₖ for the sequences induced by the HAG general convex configuration
/// with αₖ = (k + r)/r. With c₀ = 1 it equals
/// (2k² + (7 − 2c₂ + 4r)k + 6 − 3c₂ + 7r − c₂r + 2r²)/((k + r)(2k + r + 3));
/// general c₀ scales as c₀·ratio(c₂/√c₀).
pub fn hag_c_ratio(c0: f64, c2: f64, r: f64, k: f64) -> f64 {
    let c = c2 / c0.sqrt();
    let num = 2.0 * k * k + (7.0 - 2.0 * c + 4.0 * r) * k + 6.0 - 3.0 * c + 7.0 * r - c * r + 2.0 * r * r;
    c0 * num / ((k + r) * (2.0 * k + r + 3.0))
}

/// Smallest k* such that α̃ₖ/αₖ from [`hag_c_ratio`] is monotone on
/// [k*, k_max]. Returns a not-covered verdict when k* would fall in the last
/// 10% of the horizon.
pub fn check_hag_c_monotone(c0: f64, c2: f64, r: f64, k_max: usize) -> Result<MonotoneTail, Verdict> {
    if !(c0 > 0.0 && c2 > 0.0 && r >= 2.0) {
        return Err(Verdict::invalid("HAG-C").with_note("needs c0, c2 > 0 and r >= 2"));
    }
    // ratio = c0(1 + g(k)), g = ((B − E)k + C − F)/D(k); differences of g
    // avoid cancellation against the constant 1
    let c = c2 / c0.sqrt();
    let (b, e) = (7.0 - 2.0 * c + 4.0 * r, 3.0 * r + 3.0);
    let (cc, f) = (6.0 - 3.0 * c + 7.0 * r - c * r + 2.0 * r * r, r * (r + 3.0));
    let g = |k: f64| ((b - e) * k + cc - f) / ((k + r) * (2.0 * k + r + 3.0));
    let diffs: Vec<f64> = (0..k_max).map(|k| g(k as f64 + 1.0) - g(k as f64)).collect();
    let tail_sign = diffs.iter().rev().find(|d| d.abs() > 0.0).map(|d| d.signum()).unwrap_or(0.0);
    let direction = if tail_sign > 0.0 {
        Direction::NonDecreasing
    } else if tail_sign < 0.0 {
        Direction::NonIncreasing
    } else {
        Direction::Constant
    };
    let k_star = diffs.iter().rposition(|d| d * tail_sign < 0.0).map(|i| i + 1).unwrap_or(0);
    if k_star as f64 >= 0.9 * k_max as f64 {
        return Err(Verdict::not_covered("HAG-C").with("k_star", k_star as f64).with_note("no monotone tail within horizon"));
    }
    Ok(MonotoneTail { k_star, direction })
}
