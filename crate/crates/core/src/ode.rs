//! Limiting ODEs of the method families, integrated with fixed-step RK4,
//! and the continuous Lyapunov functions that certify their rates.
//!
//! All second-order kinds are integrated in first-order form (X, V) with
//! V = Ẋ. Gradient flow carries V ≡ 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::linalg::{all_finite, Vector};
use crate::problems::Objective;

/// Drift allowance for the rate checks, relative to the reference value of
/// the Lyapunov function and per unit time.
pub const DRIFT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OdeKind {
    /// Ẋ + ∇f(X) = 0.
    GradientFlow,
    /// Ẍ + c₁√μ Ẋ + c₀∇f(X) = 0.
    LowResSc,
    /// Ẍ + (r+1)/t Ẋ + ∇f(X) = 0.
    LowResC,
    /// Ẍ + 2√μ Ẋ + √s∇²f(X)Ẋ + (1+√(μs))∇f(X) = 0.
    HighResNagSc,
    /// Ẍ + 2√μ Ẋ + (1+√(μs))∇f(X) = 0.
    HighResHb,
    /// Ẍ + (r+1)/t Ẋ + (β/γ)√s∇²f(X)Ẋ + (1 + (r+1)√s/(2t))∇f(X) = 0.
    HighResC,
}

impl OdeKind {
    pub const ALL: [OdeKind; 6] = [
        OdeKind::GradientFlow,
        OdeKind::LowResSc,
        OdeKind::LowResC,
        OdeKind::HighResNagSc,
        OdeKind::HighResHb,
        OdeKind::HighResC,
    ];

    pub fn id(self) -> &'static str {
        match self {
            OdeKind::GradientFlow => "gradient-flow",
            OdeKind::LowResSc => "low-res-sc",
            OdeKind::LowResC => "low-res-c",
            OdeKind::HighResNagSc => "high-res-nag-sc",
            OdeKind::HighResHb => "high-res-hb",
            OdeKind::HighResC => "high-res-c",
        }
    }

    /// Kinds with a 1/t damping, whose guarantees are polynomial in t.
    pub fn is_convex_kind(self) -> bool {
        matches!(self, OdeKind::LowResC | OdeKind::HighResC)
    }
}

impl fmt::Display for OdeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for OdeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OdeKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| invalid(format!("unknown ODE kind `{s}`")))
    }
}

/// Kind-specific constants. Unused fields are ignored by a kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeParams {
    pub c0: f64,
    pub c1: f64,
    pub r: f64,
    pub beta_over_gamma: f64,
    pub s: f64,
    pub mu: f64,
    /// Start time of low-res-c; `None` means √s.
    pub t_eps: Option<f64>,
}

impl Default for OdeParams {
    fn default() -> Self {
        OdeParams { c0: 1.0, c1: 2.0, r: 2.0, beta_over_gamma: 1.0, s: 0.01, mu: 0.0, t_eps: None }
    }
}

/// An ODE together with its objective and initial condition.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    pub kind: OdeKind,
    pub params: OdeParams,
    pub obj: Objective,
    pub t0: f64,
    pub x0: Vector,
    pub v0: Vector,
}

impl OdeSystem {
    /// Builds the system with the initial condition attached to each kind:
    /// Ẋ(t₀) = 0 for the low-resolution kinds, −2√s∇f(x₀)/(1+√(μs)) for the
    /// strongly convex high-resolution kinds and −√s∇f(x₀) at
    /// t₀ = (r+1)√s/2 for high-res-c. Low-res-c starts at t_eps > 0 in place
    /// of the singular t = 0.
    pub fn new(kind: OdeKind, obj: Objective, x0: Vector, params: OdeParams) -> Result<Self> {
        if x0.len() != obj.dim() {
            return Err(invalid(format!("x0 has dimension {}, objective {}", x0.len(), obj.dim())));
        }
        let p = params;
        let sqrt_s = p.s.sqrt();
        let needs_s = !matches!(kind, OdeKind::GradientFlow | OdeKind::LowResSc);
        if needs_s && !(p.s > 0.0 && p.s.is_finite()) {
            return Err(invalid(format!("{kind} needs s > 0, got {}", p.s)));
        }
        if matches!(kind, OdeKind::LowResSc | OdeKind::HighResNagSc | OdeKind::HighResHb) && !(p.mu >= 0.0) {
            return Err(invalid(format!("{kind} needs mu >= 0, got {}", p.mu)));
        }
        if kind.is_convex_kind() && !(p.r >= 0.0) {
            return Err(invalid(format!("{kind} needs r >= 0, got {}", p.r)));
        }
        let n = x0.len();
        let (t0, v0) = match kind {
            OdeKind::GradientFlow | OdeKind::LowResSc => (0.0, Vector::zeros(n)),
            OdeKind::LowResC => {
                let t_eps = p.t_eps.unwrap_or(sqrt_s);
                if !(t_eps > 0.0) {
                    return Err(invalid(format!("low-res-c needs t_eps > 0, got {t_eps}")));
                }
                (t_eps, Vector::zeros(n))
            }
            OdeKind::HighResNagSc | OdeKind::HighResHb => {
                let sq = (p.mu * p.s).sqrt();
                (0.0, obj.gradient(&x0) * (-2.0 * sqrt_s / (1.0 + sq)))
            }
            OdeKind::HighResC => ((p.r + 1.0) * sqrt_s / 2.0, obj.gradient(&x0) * -sqrt_s),
        };
        Ok(OdeSystem { kind, params, obj, t0, x0, v0 })
    }

    /// Ẍ as a function of (t, X, V); for gradient flow this is Ẋ.
    fn accel(&self, t: f64, x: &Vector, v: &Vector) -> Vector {
        let p = &self.params;
        let g = self.obj.gradient(x);
        let sqrt_s = p.s.sqrt();
        match self.kind {
            OdeKind::GradientFlow => -g,
            OdeKind::LowResSc => -(v * (p.c1 * p.mu.sqrt()) + g * p.c0),
            OdeKind::LowResC => -(v * ((p.r + 1.0) / t) + g),
            OdeKind::HighResNagSc => {
                let hv = self.obj.hvp(x, v);
                -(v * (2.0 * p.mu.sqrt()) + hv * sqrt_s + g * (1.0 + (p.mu * p.s).sqrt()))
            }
            OdeKind::HighResHb => -(v * (2.0 * p.mu.sqrt()) + g * (1.0 + (p.mu * p.s).sqrt())),
            OdeKind::HighResC => {
                let hv = self.obj.hvp(x, v);
                -(v * ((p.r + 1.0) / t) + hv * (p.beta_over_gamma * sqrt_s) + g * (1.0 + (p.r + 1.0) * sqrt_s / (2.0 * t)))
            }
        }
    }

    /// Time derivative of the state (X, V).
    fn field(&self, t: f64, x: &Vector, v: &Vector) -> (Vector, Vector) {
        if self.kind == OdeKind::GradientFlow {
            (self.accel(t, x, v), Vector::zeros(x.len()))
        } else {
            (v.clone(), self.accel(t, x, v))
        }
    }

    /// Default step min(10⁻³, 0.01/√(L·c₀)); c₀ counts only for low-res-sc.
    pub fn default_dt(&self) -> f64 {
        let c0 = if self.kind == OdeKind::LowResSc { self.params.c0.abs().max(f64::MIN_POSITIVE) } else { 1.0 };
        (0.01 / (self.obj.l * c0).sqrt()).min(1e-3)
    }

    /// The λ of the low-res-sc Lyapunov function: c₁/2 when c₁² ≤ 4c₀,
    /// else the larger root (c₁ + √(c₁² − 4c₀))/2.
    pub fn lambda(&self) -> f64 {
        let (c0, c1) = (self.params.c0, self.params.c1);
        let disc = c1 * c1 - 4.0 * c0;
        if disc <= 0.0 {
            c1 / 2.0
        } else {
            (c1 + disc.sqrt()) / 2.0
        }
    }

    /// The additive constant C of the high-res-c Lyapunov function: β/γ at
    /// r = 2 and 0 otherwise.
    pub fn c_shift(&self) -> f64 {
        if (self.params.r - 2.0).abs() <= 1e-12 {
            self.params.beta_over_gamma
        } else {
            0.0
        }
    }

    /// Exponential decay rate the kind's Lyapunov function is proved to
    /// achieve, or `None` for the 1/t kinds. For low-res-sc this is C√μ with
    /// C = (c₁ − √((c₁² − 4c₀) ∨ 0))/2, valid when c₀, c₁ > 0.
    pub fn proved_rate(&self) -> Option<f64> {
        let p = &self.params;
        match self.kind {
            OdeKind::GradientFlow => Some(2.0 * self.obj.mu),
            OdeKind::LowResSc => Some(prop1_constant(p.c0, p.c1) * p.mu.sqrt()),
            OdeKind::HighResNagSc | OdeKind::HighResHb => Some(p.mu.sqrt()),
            OdeKind::LowResC | OdeKind::HighResC => None,
        }
    }
}

/// C = (c₁ − √((c₁² − 4c₀) ∨ 0))/2.
pub fn prop1_constant(c0: f64, c1: f64) -> f64 {
    (c1 - (c1 * c1 - 4.0 * c0).max(0.0).sqrt()) / 2.0
}

/// Continuous Lyapunov function of the kind at (t, X, V). Needs x* and f*.
pub fn continuous_lyapunov(sys: &OdeSystem, t: f64, x: &Vector, v: &Vector) -> Result<f64> {
    let (x_star, f_star) = match (&sys.obj.minimizer, sys.obj.f_star) {
        (Some(xs), Some(fs)) => (xs, fs),
        _ => return Err(Error::Contract("continuous Lyapunov function needs x* and f*".into())),
    };
    let p = &sys.params;
    let gap = sys.obj.value(x) - f_star;
    let dx = x - x_star;
    let sqrt_mu = p.mu.sqrt();
    let sqrt_s = p.s.sqrt();
    Ok(match sys.kind {
        OdeKind::GradientFlow => gap,
        OdeKind::LowResSc => {
            let w = v + &dx * (sys.lambda() * sqrt_mu);
            p.c0 * gap + 0.5 * w.norm_squared()
        }
        OdeKind::HighResNagSc => {
            let w = v + &dx * sqrt_mu + sys.obj.gradient(x) * sqrt_s;
            (1.0 + (p.mu * p.s).sqrt()) * gap + 0.5 * w.norm_squared()
        }
        OdeKind::HighResHb => {
            let w = v + &dx * sqrt_mu;
            (1.0 + (p.mu * p.s).sqrt()) * gap + 0.5 * w.norm_squared()
        }
        // the high-res-c energy with s = 0
        OdeKind::LowResC => {
            let w = &dx * p.r + v * t;
            t * t * gap + 0.5 * w.norm_squared()
        }
        OdeKind::HighResC => {
            let bg = p.beta_over_gamma;
            let c = sys.c_shift();
            let potential = (t + c * sqrt_s) * (t + ((p.r + 1.0) / 2.0 - bg) * sqrt_s) * gap;
            let w = &dx * p.r + (v + sys.obj.gradient(x) * (bg * sqrt_s)) * t;
            potential + (t + c * sqrt_s) / t * 0.5 * w.norm_squared()
        }
    })
}

/// One stored point of an integration.
#[derive(Clone, Debug)]
pub struct OdeSample {
    pub t: f64,
    pub x: Vector,
    pub v: Vector,
    pub f_gap: f64,
    pub grad_norm_sq: f64,
    pub lyapunov: f64,
    /// V·e^{rate·t} for exponential kinds, t²(f − f*) for the 1/t kinds.
    pub rate_check: f64,
}

#[derive(Clone, Debug)]
pub struct OdeTrace {
    pub kind: OdeKind,
    pub dt: f64,
    pub samples: Vec<OdeSample>,
}

impl OdeTrace {
    pub fn last(&self) -> &OdeSample {
        self.samples.last().expect("trace has at least the initial sample")
    }

    /// CSV with header `t,f_gap,V,rate_check`.
    pub fn to_csv_string(&self) -> String {
        use crate::trajectory::fmt_g17;
        let mut out = String::from("t,f_gap,V,rate_check\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{},{}\n", fmt_g17(s.t), fmt_g17(s.f_gap), fmt_g17(s.lyapunov), fmt_g17(s.rate_check)));
        }
        out
    }
}

/// Classical fourth-order Runge–Kutta from t₀ to `t_max` with a fixed
/// step, keeping every `stride`-th state plus the final one.
///
/// Lyapunov columns need x* and f*; without them they are NaN.
pub fn integrate(sys: &OdeSystem, dt: f64, t_max: f64, stride: usize) -> Result<OdeTrace> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    if !(t_max >= sys.t0) {
        return Err(invalid(format!("t_max = {t_max} precedes the start time {}", sys.t0)));
    }
    let stride = stride.max(1);
    let steps = ((t_max - sys.t0) / dt - 1e-9).ceil().max(0.0) as usize;
    let rate = sys.proved_rate();
    let sample = |t: f64, x: &Vector, v: &Vector| -> OdeSample {
        let (f, g) = sys.obj.value_grad(x);
        let f_gap = sys.obj.f_star.map_or(f64::NAN, |fs| f - fs);
        let lyapunov = continuous_lyapunov(sys, t, x, v).unwrap_or(f64::NAN);
        let rate_check = match rate {
            Some(r) => lyapunov * (r * (t - sys.t0)).exp(),
            None => t * t * f_gap,
        };
        OdeSample { t, x: x.clone(), v: v.clone(), f_gap, grad_norm_sq: g.norm_squared(), lyapunov, rate_check }
    };

    let mut x = sys.x0.clone();
    let mut v = sys.v0.clone();
    let mut samples = vec![sample(sys.t0, &x, &v)];
    for i in 0..steps {
        let t = sys.t0 + i as f64 * dt;
        // the last step lands on t_max exactly
        let h = if i + 1 == steps { t_max - t } else { dt };
        let (k1x, k1v) = sys.field(t, &x, &v);
        let (k2x, k2v) = sys.field(t + h / 2.0, &(&x + &k1x * (h / 2.0)), &(&v + &k1v * (h / 2.0)));
        let (k3x, k3v) = sys.field(t + h / 2.0, &(&x + &k2x * (h / 2.0)), &(&v + &k2v * (h / 2.0)));
        let (k4x, k4v) = sys.field(t + h, &(&x + &k3x * h), &(&v + &k3v * h));
        x += (k1x + &k2x * 2.0 + &k3x * 2.0 + k4x) * (h / 6.0);
        v += (k1v + &k2v * 2.0 + &k3v * 2.0 + k4v) * (h / 6.0);
        if !all_finite(&x) || !all_finite(&v) {
            return Err(Error::Diverged { k: i + 1 });
        }
        if (i + 1) % stride == 0 || i + 1 == steps {
            let t_next = if i + 1 == steps { t_max } else { sys.t0 + (i + 1) as f64 * dt };
            samples.push(sample(t_next, &x, &v));
        }
    }
    Ok(OdeTrace { kind: sys.kind, dt, samples })
}

/// Result of a monotonicity check on sampled values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateCheck {
    pub holds: bool,
    /// Largest increase per unit time, relative to the reference value.
    pub max_drift: f64,
}

fn drift_check(points: impl Iterator<Item = (f64, f64)>, reference: f64) -> RateCheck {
    let scale = reference.abs().max(f64::MIN_POSITIVE);
    let mut max_drift = f64::NEG_INFINITY;
    let mut prev: Option<(f64, f64)> = None;
    for (t, w) in points {
        if let Some((tp, wp)) = prev {
            let d = (w - wp) / (t - tp) / scale;
            max_drift = max_drift.max(d);
        }
        prev = Some((t, w));
    }
    if max_drift == f64::NEG_INFINITY {
        max_drift = 0.0;
    }
    RateCheck { holds: max_drift <= DRIFT_TOL, max_drift }
}

/// V(t)·e^{rate·(t − t₀)} is non-increasing up to a drift of 10⁻⁶·V(t₀)
/// per unit time.
pub fn check_rate(trace: &OdeTrace, rate: f64) -> RateCheck {
    let t0 = trace.samples[0].t;
    let v0 = trace.samples[0].lyapunov;
    drift_check(trace.samples.iter().map(|s| (s.t, s.lyapunov * (rate * (s.t - t0)).exp())), v0)
}

/// Bounds for the 1/t kinds checked from sample index `j1` on: V
/// non-increasing and f − f* ≤ 4V(t₁)/t².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyCheck {
    pub monotone: RateCheck,
    pub gap_bound_holds: bool,
    /// max over t ≥ t₁ of t²(f − f*)/(4V(t₁)).
    pub worst_gap_ratio: f64,
}

impl PolyCheck {
    pub fn holds(&self) -> bool {
        self.monotone.holds && self.gap_bound_holds
    }
}

/// Sample index of the first sample at or after `t1`.
pub fn index_at(trace: &OdeTrace, t1: f64) -> Option<usize> {
    trace.samples.iter().position(|s| s.t >= t1 - 1e-12 * t1.abs().max(1.0))
}

pub fn check_poly(trace: &OdeTrace, j1: usize) -> PolyCheck {
    let tail = &trace.samples[j1..];
    let v1 = tail[0].lyapunov;
    let monotone = drift_check(tail.iter().map(|s| (s.t, s.lyapunov)), v1);
    let worst = tail.iter().map(|s| s.t * s.t * s.f_gap / (4.0 * v1)).fold(f64::NEG_INFINITY, f64::max);
    PolyCheck { monotone, gap_bound_holds: worst <= 1.0 + 1e-10, worst_gap_ratio: worst }
}

/// Running infimum of ‖∇f‖² over samples in [t₁, t] against
/// 12γV(t₁)/(β√s(t³ − t₁³)) at every sampled t > t₁.
pub fn check_inf_grad(trace: &OdeTrace, t1: f64, beta_over_gamma: f64, s: f64) -> bool {
    if !(beta_over_gamma > 0.0) {
        return false;
    }
    let Some(j1) = index_at(trace, t1) else { return true };
    let tail = &trace.samples[j1..];
    let (t1, v1) = (tail[0].t, tail[0].lyapunov);
    let mut running = tail[0].grad_norm_sq;
    for smp in &tail[1..] {
        running = running.min(smp.grad_norm_sq);
        let bound = 12.0 * v1 / (beta_over_gamma * s.sqrt() * (smp.t.powi(3) - t1.powi(3)));
        if running > bound * (1.0 + 1e-10) {
            return false;
        }
    }
    true
}

/// The t₁ of the high-res-c proof: t₀* = t₀ ∨ 2|C|√s ∨ 2|(r+1)/2 − β/γ|√s,
/// then t₀* ∨ −(r−1)/(r−2)·((r+1)/2 − β/γ)√s for r > 2 and
/// t₀* ∨ (4β/(3γ))(β/γ − 3/2)√s for r = 2.
pub fn proof_t1(r: f64, beta_over_gamma: f64, s: f64) -> Result<f64> {
    if !(r >= 2.0) {
        return Err(Error::NotApplicable(format!("the 1/t^2 guarantee needs r >= 2, got {r}")));
    }
    let sqrt_s = s.sqrt();
    let bg = beta_over_gamma;
    let r_is_two = (r - 2.0).abs() <= 1e-12;
    let c = if r_is_two { bg } else { 0.0 };
    let t0 = (r + 1.0) * sqrt_s / 2.0;
    let m = (r + 1.0) / 2.0 - bg;
    let t0_star = t0.max(2.0 * c.abs() * sqrt_s).max(2.0 * m.abs() * sqrt_s);
    Ok(if r_is_two {
        t0_star.max(4.0 * bg / 3.0 * (bg - 1.5) * sqrt_s)
    } else {
        t0_star.max(-(r - 1.0) / (r - 2.0) * m * sqrt_s)
    })
}

/// Earliest sampled t₁ from which V is non-increasing, f − f* ≤ 4V(t₁)/t²
/// and, when β/γ > 0, the infimum-gradient bound all hold to the end of the
/// trace. Returns the sample index.
pub fn earliest_t1(trace: &OdeTrace, beta_over_gamma: f64, s: f64) -> Option<usize> {
    let n = trace.samples.len();
    if n < 2 {
        return None;
    }
    // quadratic in the sample count; traces are strided to a few thousand
    (0..n - 1).find(|&j| {
        let pc = check_poly(trace, j);
        pc.holds() && (beta_over_gamma <= 0.0 || check_inf_grad(trace, trace.samples[j].t, beta_over_gamma, s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_diag_quadratic, make_scalar_quadratic};

    fn scalar(x: f64) -> Vector {
        Vector::from_element(1, x)
    }

    #[test]
    fn gradient_flow_closed_form() {
        let obj = make_scalar_quadratic(1.0).unwrap();
        let sys = OdeSystem::new(OdeKind::GradientFlow, obj, scalar(1.0), OdeParams::default()).unwrap();
        let tr = integrate(&sys, 1e-3, 1.0, 100).unwrap();
        assert!((tr.last().t - 1.0).abs() < 1e-15);
        assert!((tr.last().x[0] - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn critical_damping_closed_form() {
        let obj = make_scalar_quadratic(1.0).unwrap();
        let p = OdeParams { c0: 1.0, c1: 2.0, mu: 1.0, ..OdeParams::default() };
        let sys = OdeSystem::new(OdeKind::LowResSc, obj, scalar(1.0), p).unwrap();
        let tr = integrate(&sys, 1e-3, 1.0, 1000).unwrap();
        assert!((tr.last().x[0] - 2.0 * (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn lyapunov_zero_at_optimum() {
        let obj = make_diag_quadratic(0.5, 1.0).unwrap();
        let z = Vector::zeros(2);
        for kind in OdeKind::ALL {
            let p = OdeParams { mu: obj.mu, ..OdeParams::default() };
            let sys = OdeSystem::new(kind, obj.clone(), z.clone(), p).unwrap();
            let v = continuous_lyapunov(&sys, sys.t0.max(1.0), &z, &z).unwrap();
            assert_eq!(v, 0.0, "{kind}");
        }
    }

    #[test]
    fn prop1_constants() {
        assert_eq!(prop1_constant(1.0, 1.0), 0.5);
        assert_eq!(prop1_constant(1.0, 2.0), 1.0);
        assert_eq!(prop1_constant(2.0, 3.0), 1.0);
    }

    #[test]
    fn initial_velocity_per_kind() {
        let obj = make_scalar_quadratic(0.25).unwrap();
        let p = OdeParams { mu: 0.25, s: 0.04, r: 3.0, ..OdeParams::default() };
        let hb = OdeSystem::new(OdeKind::HighResHb, obj.clone(), scalar(2.0), p).unwrap();
        // −2√s·∇f(x₀)/(1 + √(μs)) with √s = 0.2, ∇f = 0.5, √(μs) = 0.1
        assert!((hb.v0[0] - (-2.0 * 0.2 * 0.5 / 1.1)).abs() < 1e-15);
        let c = OdeSystem::new(OdeKind::HighResC, obj, scalar(2.0), p).unwrap();
        assert!((c.t0 - 0.4).abs() < 1e-15);
        assert!((c.v0[0] + 0.1).abs() < 1e-15);
    }

    #[test]
    fn kind_ids_round_trip() {
        for k in OdeKind::ALL {
            assert_eq!(k.id().parse::<OdeKind>().unwrap(), k);
        }
        assert!("low-res".parse::<OdeKind>().is_err());
    }

    #[test]
    fn proof_t1_values() {
        // r = 2, β/γ = 1: t₀ = 1.5√s, t₀* = 2√s, second term negative
        assert!((proof_t1(2.0, 1.0, 0.04).unwrap() - 0.4).abs() < 1e-15);
        // r = 3, β/γ = 0.5: t₀ = 2√s = t₀* (2·1.5√s = 3√s wins), second term −2·1.5√s
        assert!((proof_t1(3.0, 0.5, 0.04).unwrap() - 0.6).abs() < 1e-15);
        assert!(proof_t1(1.5, 1.0, 0.04).is_err());
    }
}
