//! Objective oracles and the benchmark instances.
//!
//! Every [`Objective`] is immutable after construction and cheap to clone
//! (the data sits behind an `Arc`), so oracle calls can run from any number
//! of threads.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::linalg::{power_iteration, smallest_eigenvalue_spd, Matrix, Vector};
use crate::rng::Stream;

#[derive(Debug)]
enum Kind {
    /// f(x) = ½xᵀAx + bᵀx
    Quadratic { a: Matrix, b: Vector },
    /// f(x) = ρ log Σᵢ exp((rowᵢ(M)·x − bᵢ)/ρ); row i of M is aᵢᵀ.
    LogSumExp { m: Matrix, b: Vector, rho: f64 },
}

/// Smooth convex objective with value, gradient and Hessian-vector oracles.
#[derive(Clone, Debug)]
pub struct Objective {
    kind: Arc<Kind>,
    /// Smoothness constant of the gradient.
    pub l: f64,
    /// Strong-convexity constant, 0 when merely convex.
    pub mu: f64,
    pub minimizer: Option<Vector>,
    pub f_star: Option<f64>,
}

impl Objective {
    pub fn dim(&self) -> usize {
        match &*self.kind {
            Kind::Quadratic { b, .. } => b.len(),
            Kind::LogSumExp { m, .. } => m.ncols(),
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        match &*self.kind {
            Kind::Quadratic { a, b } => 0.5 * x.dot(&(a * x)) + b.dot(x),
            Kind::LogSumExp { m, b, rho } => {
                let z = (m * x - b) / *rho;
                let zmax = z.max();
                let sum: f64 = z.iter().map(|zi| (zi - zmax).exp()).sum();
                rho * (zmax + sum.ln())
            }
        }
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        match &*self.kind {
            Kind::Quadratic { a, b } => a * x + b,
            Kind::LogSumExp { m, b, rho } => {
                let p = softmax(&((m * x - b) / *rho));
                m.tr_mul(&p)
            }
        }
    }

    /// (f(x), ∇f(x)) sharing one pass over the data.
    pub fn value_grad(&self, x: &Vector) -> (f64, Vector) {
        match &*self.kind {
            Kind::Quadratic { b, .. } => {
                let g = self.gradient(x);
                // ½xᵀAx + bᵀx = ½xᵀ(Ax + b) + ½bᵀx
                let f = 0.5 * x.dot(&(&g + b));
                (f, g)
            }
            Kind::LogSumExp { m, b, rho } => {
                let z = (m * x - b) / *rho;
                let zmax = z.max();
                let e = z.map(|zi| (zi - zmax).exp());
                let total = e.sum();
                let g = m.tr_mul(&(e / total));
                (rho * (zmax + total.ln()), g)
            }
        }
    }

    /// Hessian-vector product ∇²f(x)·v.
    pub fn hvp(&self, x: &Vector, v: &Vector) -> Vector {
        match &*self.kind {
            Kind::Quadratic { a, .. } => a * v,
            Kind::LogSumExp { m, b, rho } => {
                let p = softmax(&((m * x - b) / *rho));
                let mv = m * v;
                let pmv = p.dot(&mv);
                let w = p.component_mul(&mv) - &p * pmv;
                m.tr_mul(&w) / *rho
            }
        }
    }

    /// f(x) − f*, if f* is known.
    pub fn gap(&self, x: &Vector) -> Option<f64> {
        self.f_star.map(|fs| self.value(x) - fs)
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(&*self.kind, Kind::Quadratic { .. })
    }

    /// Replaces f* (used for reference values computed by a long run).
    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    /// Attaches a minimizer and its value, e.g. from [`newton_minimize`].
    pub fn with_optimum(mut self, x_star: Vector, f_star: f64) -> Self {
        self.minimizer = Some(x_star);
        self.f_star = Some(f_star);
        self
    }

    /// Spectral norm of the data matrix: ‖A‖ for quadratics, ‖M‖ for
    /// log-sum-exp. This is the `normA` unit in step-size expressions.
    pub fn data_norm(&self) -> f64 {
        match &*self.kind {
            Kind::Quadratic { .. } => self.l,
            Kind::LogSumExp { rho, .. } => (self.l * rho).sqrt(),
        }
    }
}

fn softmax(z: &Vector) -> Vector {
    let zmax = z.max();
    let e = z.map(|zi| (zi - zmax).exp());
    let total = e.sum();
    e / total
}

/// f(x) = d1·x1² + d2·x2².
pub fn make_diag_quadratic(d1: f64, d2: f64) -> Result<Objective> {
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(invalid(format!("diag-quadratic coefficients must be positive, got ({d1}, {d2})")));
    }
    let a = Matrix::from_diagonal(&Vector::from_vec(vec![2.0 * d1, 2.0 * d2]));
    Ok(Objective {
        kind: Arc::new(Kind::Quadratic { a, b: Vector::zeros(2) }),
        l: 2.0 * d1.max(d2),
        mu: 2.0 * d1.min(d2),
        minimizer: Some(Vector::zeros(2)),
        f_star: Some(0.0),
    })
}

/// f(x) = μx²/2 on the real line.
pub fn make_scalar_quadratic(mu: f64) -> Result<Objective> {
    if !(mu > 0.0) {
        return Err(invalid(format!("scalar-quadratic mu must be positive, got {mu}")));
    }
    Ok(Objective {
        kind: Arc::new(Kind::Quadratic { a: Matrix::from_element(1, 1, mu), b: Vector::zeros(1) }),
        l: mu,
        mu,
        minimizer: Some(Vector::zeros(1)),
        f_star: Some(0.0),
    })
}

/// f(x) = ½xᵀAx + bᵀx with A = BᵀB; B (row-major) then b are drawn
/// Uniform(0,1) from [`Stream::new(seed)`](Stream).
pub fn make_random_quadratic(n: usize, seed: u64) -> Result<Objective> {
    if n == 0 {
        return Err(invalid("random-quadratic needs n >= 1"));
    }
    let mut rng = Stream::new(seed);
    let b_mat = Matrix::from_row_iterator(n, n, (0..n * n).map(|_| rng.uniform()));
    let b = Vector::from_iterator(n, (0..n).map(|_| rng.uniform()));
    let a = b_mat.tr_mul(&b_mat);
    Ok(quadratic_from(a, b))
}

/// Quadratic with a user-supplied symmetric positive semidefinite A.
pub fn make_quadratic(a: Matrix, b: Vector) -> Result<Objective> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() || b.is_empty() {
        return Err(invalid("quadratic needs square A matching b"));
    }
    Ok(quadratic_from(a, b))
}

fn quadratic_from(a: Matrix, b: Vector) -> Objective {
    let n = b.len();
    let l = power_iteration(n, |v| &a * v);
    let (mu, minimizer) = match a.clone().cholesky() {
        Some(chol) => {
            let mut x = chol.solve(&(-&b));
            // one step of refinement tightens the residual on ill-conditioned A
            let r = &a * &x + &b;
            x -= chol.solve(&r);
            (smallest_eigenvalue_spd(&a).unwrap_or(0.0), x)
        }
        None => {
            let svd = a.clone().svd(true, true);
            let eps = 1e-12 * l;
            let x = svd.solve(&(-&b), eps).unwrap_or_else(|_| Vector::zeros(n));
            (0.0, x)
        }
    };
    let f_star = 0.5 * b.dot(&minimizer);
    Objective {
        kind: Arc::new(Kind::Quadratic { a, b }),
        l,
        mu,
        minimizer: Some(minimizer),
        f_star: Some(f_star),
    }
}

/// f(x) = ρ log Σᵢ exp((aᵢᵀx − bᵢ)/ρ) with aᵢ ∈ ℝⁿ, i = 1..m.
///
/// Draws are N(0,1): a₁ (all n entries), a₂, …, a_m, then b. L is the
/// softmax upper bound ‖A‖²/ρ; μ = 0 and f* is left unset.
pub fn make_log_sum_exp(n: usize, m: usize, rho: f64, seed: u64) -> Result<Objective> {
    if n == 0 || m == 0 {
        return Err(invalid("log-sum-exp needs n, m >= 1"));
    }
    if !(rho > 0.0) {
        return Err(invalid(format!("log-sum-exp rho must be positive, got {rho}")));
    }
    let mut rng = Stream::new(seed);
    let mat = Matrix::from_row_iterator(m, n, (0..m * n).map(|_| rng.normal()));
    let b = Vector::from_iterator(m, (0..m).map(|_| rng.normal()));
    Ok(log_sum_exp_from(mat, b, rho))
}

/// Log-sum-exp from explicit data; row i of `rows` is aᵢᵀ.
pub fn make_log_sum_exp_from(rows: Matrix, b: Vector, rho: f64) -> Result<Objective> {
    if rows.nrows() != b.len() || b.is_empty() || rows.ncols() == 0 {
        return Err(invalid("log-sum-exp data shape mismatch"));
    }
    if !(rho > 0.0) {
        return Err(invalid(format!("log-sum-exp rho must be positive, got {rho}")));
    }
    Ok(log_sum_exp_from(rows, b, rho))
}

fn log_sum_exp_from(m: Matrix, b: Vector, rho: f64) -> Objective {
    let norm_sq = power_iteration(m.ncols(), |v| m.tr_mul(&(&m * v)));
    Objective {
        kind: Arc::new(Kind::LogSumExp { m, b, rho }),
        l: norm_sq / rho,
        mu: 0.0,
        minimizer: None,
        f_star: None,
    }
}

/// Outcome of [`newton_minimize`].
#[derive(Clone, Debug)]
pub struct NewtonResult {
    pub x: Vector,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

/// Damped Newton with Armijo backtracking on the dense Hessian assembled
/// from `hvp`. Meant for desk-scale instances (n up to a few hundred) whose
/// minimizer has no closed form.
pub fn newton_minimize(obj: &Objective, x0: &Vector, grad_tol: f64, max_iter: usize) -> Result<NewtonResult> {
    let n = obj.dim();
    if x0.len() != n {
        return Err(invalid(format!("start has dimension {}, objective {n}", x0.len())));
    }
    let mut x = x0.clone();
    let (mut f, mut g) = obj.value_grad(&x);
    for it in 0..max_iter {
        let gn = g.norm();
        if gn <= grad_tol {
            return Ok(NewtonResult { x, f, grad_norm: gn, iterations: it });
        }
        let mut h = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = Vector::zeros(n);
            e[j] = 1.0;
            h.set_column(j, &obj.hvp(&x, &e));
        }
        h = (&h + h.transpose()) * 0.5;
        // Levenberg shift grows until the factorization succeeds
        let mut shift = 0.0;
        let dir = loop {
            let mut hs = h.clone();
            for i in 0..n {
                hs[(i, i)] += shift;
            }
            if let Some(ch) = hs.cholesky() {
                break -ch.solve(&g);
            }
            shift = if shift == 0.0 { 1e-12 * obj.l.max(1.0) } else { shift * 10.0 };
            if shift > 1e6 * obj.l.max(1.0) {
                return Err(Error::Contract("Newton: Hessian could not be regularized".into()));
            }
        };
        let slope = g.dot(&dir);
        let mut t = 1.0;
        loop {
            let xn = &x + &dir * t;
            let (fn_, gn_) = obj.value_grad(&xn);
            if fn_ <= f + 1e-4 * t * slope || t < 1e-12 {
                x = xn;
                f = fn_;
                g = gn_;
                break;
            }
            t *= 0.5;
        }
    }
    let gn = g.norm();
    if gn <= grad_tol {
        Ok(NewtonResult { x, f, grad_norm: gn, iterations: max_iter })
    } else {
        Err(Error::Contract(format!("Newton stopped at gradient norm {gn:e} after {max_iter} iterations")))
    }
}

/// Serializable description of a benchmark instance. Identical specs build
/// bit-identical objectives.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSpec {
    DiagQuadratic2d { d1: f64, d2: f64 },
    RandomQuadratic { n: usize, seed: u64 },
    LogSumExp { n: usize, m: usize, rho: f64, seed: u64 },
    ScalarQuadratic { mu: f64 },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Objective> {
        match *self {
            ProblemSpec::DiagQuadratic2d { d1, d2 } => make_diag_quadratic(d1, d2),
            ProblemSpec::RandomQuadratic { n, seed } => make_random_quadratic(n, seed),
            ProblemSpec::LogSumExp { n, m, rho, seed } => make_log_sum_exp(n, m, rho, seed),
            ProblemSpec::ScalarQuadratic { mu } => make_scalar_quadratic(mu),
        }
    }

    /// Parses `kind key=value ...`, e.g. `log-sum-exp n=50 m=200 rho=20 seed=7`.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut words = text.split_whitespace();
        let kind = words.next().ok_or("empty problem description")?;
        let mut kv = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| format!("expected key=value, got `{w}`"))?;
            kv.insert(k.to_string(), v.to_string());
        }
        let allowed: &[&str] = match kind {
            "diag-quadratic-2d" => &["d1", "d2"],
            "random-quadratic" => &["n", "seed"],
            "log-sum-exp" => &["n", "m", "rho", "seed"],
            "scalar-quadratic" => &["mu"],
            other => return Err(format!("unknown problem kind `{other}`")),
        };
        if let Some(bad) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(format!("unknown key `{bad}` for {kind}"));
        }
        let real = |k: &str, default: Option<f64>| -> std::result::Result<f64, String> {
            match kv.get(k) {
                Some(v) => v.parse().map_err(|_| format!("bad number for {k}: `{v}`")),
                None => default.ok_or_else(|| format!("missing {k}")),
            }
        };
        let int = |k: &str, default: Option<u64>| -> std::result::Result<u64, String> {
            match kv.get(k) {
                Some(v) => v.parse().map_err(|_| format!("bad integer for {k}: `{v}`")),
                None => default.ok_or_else(|| format!("missing {k}")),
            }
        };
        Ok(match kind {
            "diag-quadratic-2d" => ProblemSpec::DiagQuadratic2d { d1: real("d1", None)?, d2: real("d2", None)? },
            "random-quadratic" => ProblemSpec::RandomQuadratic { n: int("n", None)? as usize, seed: int("seed", Some(0))? },
            "log-sum-exp" => ProblemSpec::LogSumExp {
                n: int("n", None)? as usize,
                m: int("m", None)? as usize,
                rho: real("rho", None)?,
                seed: int("seed", Some(0))?,
            },
            _ => ProblemSpec::ScalarQuadratic { mu: real("mu", None)? },
        })
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::DiagQuadratic2d { d1, d2 } => write!(f, "diag-quadratic-2d d1={d1:?} d2={d2:?}"),
            ProblemSpec::RandomQuadratic { n, seed } => write!(f, "random-quadratic n={n} seed={seed}"),
            ProblemSpec::LogSumExp { n, m, rho, seed } => write!(f, "log-sum-exp n={n} m={m} rho={rho:?} seed={seed}"),
            ProblemSpec::ScalarQuadratic { mu } => write!(f, "scalar-quadratic mu={mu:?}"),
        }
    }
}

impl std::str::FromStr for ProblemSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProblemSpec::parse(s).map_err(|msg| Error::Config { line: 0, msg })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn diag_quadratic_constants() {
        let f = make_diag_quadratic(5e-3, 1.0).unwrap();
        assert_eq!(f.l, 2.0);
        assert_eq!(f.mu, 0.01);
        assert!((f.value(&v(&[1.0, 1.0])) - 1.005).abs() < 1e-15);
        let g = make_diag_quadratic(0.5, 1.0).unwrap();
        assert_eq!(g.gradient(&v(&[1.0, 1.0])), v(&[1.0, 2.0]));
        let h = make_diag_quadratic(0.5, 0.5).unwrap();
        assert_eq!(h.value(&v(&[0.0, 0.0])), 0.0);
        assert!(make_diag_quadratic(0.0, 1.0).is_err());
    }

    #[test]
    fn scalar_quadratic() {
        let f = make_scalar_quadratic(1.0).unwrap();
        assert_eq!(f.value(&v(&[1.0])), 0.5);
        assert_eq!(f.gradient(&v(&[1.0])), v(&[1.0]));
        assert_eq!(f.hvp(&v(&[3.0]), &v(&[2.5])), v(&[2.5]));
        let g = make_scalar_quadratic(0.1).unwrap();
        assert_eq!(g.l, g.mu);
    }

    #[test]
    fn random_quadratic_two_dim_minimum() {
        let f = make_random_quadratic(2, 11).unwrap();
        // closed form −½ bᵀA⁻¹b from the 2×2 inverse
        let a = match &*f.kind {
            Kind::Quadratic { a, b } => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        let (m, b) = a;
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let inv_b0 = (m[(1, 1)] * b[0] - m[(0, 1)] * b[1]) / det;
        let inv_b1 = (-m[(1, 0)] * b[0] + m[(0, 0)] * b[1]) / det;
        let expected = -0.5 * (b[0] * inv_b0 + b[1] * inv_b1);
        let got = f.value(f.minimizer.as_ref().unwrap());
        assert!((got - expected).abs() <= 1e-9 * (1.0 + expected.abs()), "{got} vs {expected}");
    }

    #[test]
    fn log_sum_exp_single_term_is_affine() {
        let rows = Matrix::from_row_slice(1, 2, &[2.0, -1.0]);
        let f = make_log_sum_exp_from(rows, v(&[0.5]), 3.0).unwrap();
        let x = v(&[0.3, 4.0]);
        let affine = 2.0 * 0.3 - 4.0 - 0.5;
        assert!((f.value(&x) - affine).abs() < 1e-14);
        assert_eq!(f.hvp(&x, &v(&[1.0, 1.0])).norm(), 0.0);
        assert!(make_log_sum_exp(2, 3, 0.0, 1).is_err());
    }

    #[test]
    fn newton_matches_quadratic_closed_form() {
        let f = make_random_quadratic(6, 3).unwrap();
        let res = newton_minimize(&f, &Vector::zeros(6), 1e-10, 50).unwrap();
        let xs = f.minimizer.as_ref().unwrap();
        assert!((&res.x - xs).norm() <= 1e-8 * (1.0 + xs.norm()));
        assert!(res.iterations <= 2);
    }

    #[test]
    fn newton_on_log_sum_exp_reaches_stationarity() {
        let f = make_log_sum_exp(5, 30, 2.0, 9).unwrap();
        let res = newton_minimize(&f, &Vector::zeros(5), 1e-11, 100).unwrap();
        assert!(f.gradient(&res.x).norm() <= 1e-11);
        // any other point sits above the found minimum
        let probe = &res.x + Vector::from_element(5, 1e-3);
        assert!(f.value(&probe) > res.f);
    }

    #[test]
    fn spec_round_trip() {
        for text in [
            "diag-quadratic-2d d1=0.005 d2=1.0",
            "random-quadratic n=500 seed=42",
            "log-sum-exp n=50 m=200 rho=20.0 seed=7",
            "scalar-quadratic mu=0.1",
        ] {
            let spec = ProblemSpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(ProblemSpec::parse(&spec.to_string()).unwrap(), spec);
        }
        assert!(ProblemSpec::parse("log-sum-exp n=5 m=3 rho=1 bogus=2").is_err());
    }
}
