//! Run configurations: a line-oriented `key = value` grammar with
//! `[problem]`, `[algo]` and `[run]` sections and `#` comments.
//!
//! ```text
//! [problem]
//! spec = diag-quadratic-2d d1=0.005 d2=1
//! x0 = 1, 1
//!
//! [algo]
//! id = single-var-sc
//! c0 = 1
//! c1 = 2
//! c2 = 1.5
//!
//! [run]
//! s = 0.1/L
//! k = 3000
//! csv = out.csv
//! ```
//!
//! Keys given before the first section header are shorthands:
//! `problem`, `algo`, `s`, `k` stand for `[problem] spec`, `[algo] id`,
//! `[run] s` and `[run] k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algorithms::{self, CForm, CSeqParams, HagForm, RunOptions, ScParams, SingleVarScParams};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::lyapunov::{self, OmegaChoice};
use crate::problems::{Objective, ProblemSpec};
use crate::sequence::Sequence;
use crate::series::{SqrtQSeries, DEFAULT_ORDER};
use crate::trajectory::{fmt_g17, Trajectory};
use crate::transforms::{self, RootChoice};

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

/// Step size as a number or one of the two relative idioms `x/L`, `x/normA`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepExpr {
    Value(f64),
    OverL(f64),
    OverNormA(f64),
}

impl StepExpr {
    pub fn resolve(&self, obj: &Objective) -> f64 {
        match *self {
            StepExpr::Value(v) => v,
            StepExpr::OverL(x) => x / obj.l,
            StepExpr::OverNormA(x) => x / obj.data_norm(),
        }
    }
}

impl fmt::Display for StepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepExpr::Value(v) => write!(f, "{v}"),
            StepExpr::OverL(x) => write!(f, "{x}/L"),
            StepExpr::OverNormA(x) => write!(f, "{x}/normA"),
        }
    }
}

impl FromStr for StepExpr {
    type Err = String;
    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |x: &str| x.parse::<f64>().map_err(|_| format!("bad step size `{text}`"));
        let out = if let Some(x) = t.strip_suffix("/L") {
            StepExpr::OverL(num(x)?)
        } else if let Some(x) = t.strip_suffix("/normA") {
            StepExpr::OverNormA(num(x)?)
        } else {
            StepExpr::Value(num(&t)?)
        };
        let v = match out {
            StepExpr::Value(v) | StepExpr::OverL(v) | StepExpr::OverNormA(v) => v,
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(format!("step size must be positive, got `{text}`"));
        }
        Ok(out)
    }
}

/// Algorithm id with its parameter block. Series-valued parameters are
/// coefficient lists in √q.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgoSpec {
    Gd,
    NagSc,
    HeavyBall,
    Tmm,
    ExtendedNagSc { eta: Vec<f64>, nu: Vec<f64>, tau: Vec<f64> },
    /// Remainder lists default to zero; h₁ to 2/(1 + √q).
    SingleVarSc { c0: f64, c1: f64, c2: f64, r1: Vec<f64>, r2: Vec<f64>, r3: Vec<f64> },
    /// αₖ = (k + r)/r with constant β, γ.
    ExtendedNagC { r: f64, beta: f64, gamma: f64, form: CForm },
    HagSc { c0: f64, c1: f64, c2: f64, form: HagForm },
    HagC { c0: f64, c2: f64, r: f64, form: HagForm },
}

impl AlgoSpec {
    pub fn id(&self) -> &'static str {
        match self {
            AlgoSpec::Gd => "gd",
            AlgoSpec::NagSc => "nag-sc",
            AlgoSpec::HeavyBall => "heavy-ball",
            AlgoSpec::Tmm => "tmm",
            AlgoSpec::ExtendedNagSc { .. } => "extended-nag-sc",
            AlgoSpec::SingleVarSc { .. } => "single-var-sc",
            AlgoSpec::ExtendedNagC { .. } => "extended-nag-c",
            AlgoSpec::HagSc { .. } => "hag-sc",
            AlgoSpec::HagC { .. } => "hag-c",
        }
    }

    fn keys(id: &str) -> Option<&'static [&'static str]> {
        Some(match id {
            "gd" | "nag-sc" | "heavy-ball" | "tmm" => &[],
            "extended-nag-sc" => &["eta", "nu", "tau"],
            "single-var-sc" => &["c0", "c1", "c2", "r1", "r2", "r3"],
            "extended-nag-c" => &["r", "beta", "gamma", "form"],
            "hag-sc" => &["c0", "c1", "c2", "form"],
            "hag-c" => &["c0", "c2", "r", "form"],
            _ => return None,
        })
    }

    /// Three-variable SC parameters, when the method belongs to that family.
    pub fn sc_params(&self) -> Result<ScParams> {
        match self {
            AlgoSpec::NagSc => Ok(ScParams::nag_sc()),
            AlgoSpec::Tmm => Ok(ScParams::tmm()),
            AlgoSpec::ExtendedNagSc { eta, nu, tau } => Ok(ScParams::new(series(eta), series(nu), series(tau))),
            AlgoSpec::SingleVarSc { .. } => {
                let p = self.single_var_params()?;
                Ok(transforms::single_to_sc_three(&p, RootChoice::default(), transforms::DEFAULT_TRUNC)?.params)
            }
            other => Err(Error::NotApplicable(format!("{} has no three-variable SC form", other.id()))),
        }
    }

    fn single_var_params(&self) -> Result<SingleVarScParams> {
        match self {
            AlgoSpec::SingleVarSc { c0, c1, c2, r1, r2, r3 } => {
                let base = SingleVarScParams::plain(*c0, *c1, *c2)?;
                SingleVarScParams::new(*c0, *c1, *c2, series(r1), series(r2), series(r3), base.h1)
            }
            other => Err(Error::NotApplicable(format!("{} is not single-var-sc", other.id()))),
        }
    }
}

fn series(coeffs: &[f64]) -> SqrtQSeries {
    SqrtQSeries::new(coeffs, DEFAULT_ORDER.max(coeffs.len().saturating_sub(1)))
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn c_form_id(f: CForm) -> &'static str {
    match f {
        CForm::TwoVar => "two-var",
        CForm::SingleVar => "single-var",
        CForm::ThreeVar => "three-var",
    }
}

fn hag_form_id(f: HagForm) -> &'static str {
    match f {
        HagForm::TwoVar => "two-var",
        HagForm::SingleVar => "single-var",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    /// Start point; all ones when absent.
    pub x0: Option<Vec<f64>>,
    pub algo: AlgoSpec,
    pub s: StepExpr,
    pub k_max: usize,
    pub csv: Option<String>,
    /// Also emit the Lyapunov monitor CSV.
    pub monitor: bool,
    pub stride: usize,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        // section -> key -> (value, line)
        let mut entries: BTreeMap<(&'static str, String), (String, usize)> = BTreeMap::new();
        let mut section: Option<&'static str> = None;
        let mut section_line: BTreeMap<&'static str, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = match name.trim() {
                    "problem" => "problem",
                    "algo" => "algo",
                    "run" => "run",
                    other => return Err(cfg_err(line_no, format!("unknown section [{other}]"))),
                };
                section = Some(name);
                section_line.entry(name).or_insert(line_no);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| cfg_err(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let slot: (&'static str, &str) = match (section, key) {
                (None, "problem") => ("problem", "spec"),
                (None, "algo") => ("algo", "id"),
                (None, "s") => ("run", "s"),
                (None, "k") => ("run", "k"),
                (None, _) => return Err(cfg_err(line_no, format!("unknown key `{key}` outside a section"))),
                (Some("problem"), "spec" | "x0") => ("problem", key),
                (Some("run"), "s" | "k" | "csv" | "monitor" | "stride") => ("run", key),
                (Some("algo"), _) => ("algo", key),
                (Some(sec), _) => return Err(cfg_err(line_no, format!("unknown key `{key}` in [{sec}]"))),
            };
            if entries.insert((slot.0, slot.1.to_string()), (value.to_string(), line_no)).is_some() {
                return Err(cfg_err(line_no, format!("duplicate key `{key}`")));
            }
        }

        let get = |sec: &'static str, key: &str| entries.get(&(sec, key.to_string()));
        let need = |sec: &'static str, key: &str| -> Result<(String, usize)> {
            get(sec, key).cloned().ok_or_else(|| cfg_err(*section_line.get(sec).unwrap_or(&0), format!("missing `{key}` in [{sec}]")))
        };

        let (spec_text, spec_line) = need("problem", "spec")?;
        let problem = ProblemSpec::parse(&spec_text).map_err(|m| cfg_err(spec_line, m))?;
        let x0 = match get("problem", "x0") {
            Some((v, line)) => Some(parse_list(v, *line)?),
            None => None,
        };

        let (id, id_line) = need("algo", "id")?;
        let allowed = AlgoSpec::keys(&id).ok_or_else(|| cfg_err(id_line, format!("unknown algorithm `{id}`")))?;
        for ((sec, key), (_, line)) in &entries {
            if *sec == "algo" && key != "id" && !allowed.contains(&key.as_str()) {
                return Err(cfg_err(*line, format!("`{key}` is not a parameter of {id}")));
            }
        }
        let real = |key: &str, default: Option<f64>| -> Result<f64> {
            match get("algo", key) {
                Some((v, line)) => v.parse().map_err(|_| cfg_err(*line, format!("bad number for {key}: `{v}`"))),
                None => default.ok_or_else(|| cfg_err(id_line, format!("{id} needs `{key}`"))),
            }
        };
        let list = |key: &str, required: bool| -> Result<Vec<f64>> {
            match get("algo", key) {
                Some((v, line)) => parse_list(v, *line),
                None if required => Err(cfg_err(id_line, format!("{id} needs `{key}`"))),
                None => Ok(vec![0.0]),
            }
        };
        let c_form = || -> Result<CForm> {
            match get("algo", "form") {
                None => Ok(CForm::TwoVar),
                Some((v, line)) => match v.as_str() {
                    "two-var" => Ok(CForm::TwoVar),
                    "single-var" => Ok(CForm::SingleVar),
                    "three-var" => Ok(CForm::ThreeVar),
                    _ => Err(cfg_err(*line, format!("unknown form `{v}`"))),
                },
            }
        };
        let hag_form = || -> Result<HagForm> {
            match get("algo", "form") {
                None => Ok(HagForm::TwoVar),
                Some((v, line)) => match v.as_str() {
                    "two-var" => Ok(HagForm::TwoVar),
                    "single-var" => Ok(HagForm::SingleVar),
                    _ => Err(cfg_err(*line, format!("unknown form `{v}`"))),
                },
            }
        };
        let algo = match id.as_str() {
            "gd" => AlgoSpec::Gd,
            "nag-sc" => AlgoSpec::NagSc,
            "heavy-ball" => AlgoSpec::HeavyBall,
            "tmm" => AlgoSpec::Tmm,
            "extended-nag-sc" => AlgoSpec::ExtendedNagSc { eta: list("eta", true)?, nu: list("nu", true)?, tau: list("tau", true)? },
            "single-var-sc" => AlgoSpec::SingleVarSc {
                c0: real("c0", None)?,
                c1: real("c1", None)?,
                c2: real("c2", None)?,
                r1: list("r1", false)?,
                r2: list("r2", false)?,
                r3: list("r3", false)?,
            },
            "extended-nag-c" => AlgoSpec::ExtendedNagC {
                r: real("r", Some(2.0))?,
                beta: real("beta", Some(1.0))?,
                gamma: real("gamma", Some(1.0))?,
                form: c_form()?,
            },
            "hag-sc" => AlgoSpec::HagSc { c0: real("c0", None)?, c1: real("c1", None)?, c2: real("c2", None)?, form: hag_form()? },
            _ => AlgoSpec::HagC { c0: real("c0", None)?, c2: real("c2", None)?, r: real("r", None)?, form: hag_form()? },
        };

        let (s_text, s_line) = need("run", "s")?;
        let s = s_text.parse::<StepExpr>().map_err(|m| cfg_err(s_line, m))?;
        let (k_text, k_line) = need("run", "k")?;
        let k_max = k_text.parse::<usize>().map_err(|_| cfg_err(k_line, format!("bad iteration count `{k_text}`")))?;
        let csv = get("run", "csv").map(|(v, _)| v.clone());
        let monitor = match get("run", "monitor") {
            None => false,
            Some((v, line)) => match v.as_str() {
                "true" => true,
                "false" => false,
                _ => return Err(cfg_err(*line, format!("monitor must be true or false, got `{v}`"))),
            },
        };
        let stride = match get("run", "stride") {
            None => 1,
            Some((v, line)) => match v.parse::<usize>() {
                Ok(n) if n >= 1 => n,
                _ => return Err(cfg_err(*line, format!("stride must be a positive integer, got `{v}`"))),
            },
        };
        Ok(RunConfig { problem, x0, algo, s, k_max, csv, monitor, stride })
    }

    pub fn start(&self, obj: &Objective) -> Result<Vector> {
        match &self.x0 {
            Some(v) if v.len() == obj.dim() => Ok(Vector::from_column_slice(v)),
            Some(v) => Err(cfg_err(0, format!("x0 has {} entries, problem dimension is {}", v.len(), obj.dim()))),
            None => Ok(Vector::from_element(obj.dim(), 1.0)),
        }
    }
}

fn parse_list(text: &str, line: usize) -> Result<Vec<f64>> {
    let out: std::result::Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(cfg_err(line, format!("bad number list `{text}`"))),
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[problem]")?;
        writeln!(f, "spec = {}", self.problem)?;
        if let Some(x0) = &self.x0 {
            writeln!(f, "x0 = {}", fmt_list(x0))?;
        }
        writeln!(f)?;
        writeln!(f, "[algo]")?;
        writeln!(f, "id = {}", self.algo.id())?;
        write!(f, "{}", algo_block(&self.algo))?;
        writeln!(f)?;
        writeln!(f, "[run]")?;
        writeln!(f, "s = {}", self.s)?;
        writeln!(f, "k = {}", self.k_max)?;
        writeln!(f, "stride = {}", self.stride)?;
        writeln!(f, "monitor = {}", self.monitor)?;
        if let Some(csv) = &self.csv {
            writeln!(f, "csv = {csv}")?;
        }
        Ok(())
    }
}

/// Parameter lines of the `[algo]` section, without the id.
pub fn algo_block(algo: &AlgoSpec) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    match algo {
        AlgoSpec::Gd | AlgoSpec::NagSc | AlgoSpec::HeavyBall | AlgoSpec::Tmm => {}
        AlgoSpec::ExtendedNagSc { eta, nu, tau } => {
            kv("eta", fmt_list(eta));
            kv("nu", fmt_list(nu));
            kv("tau", fmt_list(tau));
        }
        AlgoSpec::SingleVarSc { c0, c1, c2, r1, r2, r3 } => {
            kv("c0", c0.to_string());
            kv("c1", c1.to_string());
            kv("c2", c2.to_string());
            kv("r1", fmt_list(r1));
            kv("r2", fmt_list(r2));
            kv("r3", fmt_list(r3));
        }
        AlgoSpec::ExtendedNagC { r, beta, gamma, form } => {
            kv("r", r.to_string());
            kv("beta", beta.to_string());
            kv("gamma", gamma.to_string());
            kv("form", c_form_id(*form).to_string());
        }
        AlgoSpec::HagSc { c0, c1, c2, form } => {
            kv("c0", c0.to_string());
            kv("c1", c1.to_string());
            kv("c2", c2.to_string());
            kv("form", hag_form_id(*form).to_string());
        }
        AlgoSpec::HagC { c0, c2, r, form } => {
            kv("c0", c0.to_string());
            kv("c2", c2.to_string());
            kv("r", r.to_string());
            kv("form", hag_form_id(*form).to_string());
        }
    }
    out
}

impl FromStr for RunConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RunConfig::parse(s)
    }
}

/// Runs the configured algorithm. Strongly convex methods start from
/// x₁ = x₀ − 2s∇f(x₀)/(1 + √q) where they take a separate x₁.
pub fn run_algo(obj: &Objective, algo: &AlgoSpec, s: f64, x0: &Vector, k_max: usize, stride: usize) -> Result<Trajectory> {
    let opts = RunOptions { stride };
    match algo {
        AlgoSpec::Gd => algorithms::run_gd_opts(obj, s, x0, k_max, opts),
        AlgoSpec::NagSc => algorithms::run_nag_sc_opts(obj, s, x0, k_max, opts),
        AlgoSpec::HeavyBall => {
            let x1 = algorithms::sc_default_x1(obj, s, x0)?;
            algorithms::run_heavy_ball_from(obj, s, x0, x1, k_max, opts)
        }
        AlgoSpec::Tmm => algorithms::run_tmm_opts(obj, s, x0, k_max, opts),
        AlgoSpec::ExtendedNagSc { .. } => {
            let p = algo.sc_params()?;
            algorithms::run_extended_nag_sc_from(obj, s, &p, x0, x0.clone(), k_max, opts)
        }
        AlgoSpec::SingleVarSc { .. } => algorithms::run_single_var_sc_opts(obj, s, &algo.single_var_params()?, x0, k_max, opts),
        AlgoSpec::ExtendedNagC { r, beta, gamma, form } => {
            let p = nag_c_family(*r, *beta, *gamma)?;
            algorithms::run_extended_nag_c_opts(obj, s, &p, x0, k_max, *form, opts)
        }
        AlgoSpec::HagSc { c0, c1, c2, form } => {
            let p = algorithms::hag_sc_config(*c0, *c1, *c2, s, obj.mu, obj.dim())?;
            algorithms::run_hag_opts(obj, s, &p, x0, k_max, *form, opts)
        }
        AlgoSpec::HagC { c0, c2, r, form } => {
            let alpha = algorithms::lemma5_alpha(*r)?;
            let p = algorithms::hag_c_config(*c0, *c2, s, &alpha, obj.dim())?;
            algorithms::run_hag_opts(obj, s, &p, x0, k_max, *form, opts)
        }
    }
}

/// αₖ = (k + r)/r with constant β and γ.
pub fn nag_c_family(r: f64, beta: f64, gamma: f64) -> Result<CSeqParams> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    Ok(CSeqParams::new(Sequence::rational(r), Sequence::constant(beta), Sequence::constant(gamma)))
}

/// Outcome of [`run_config`].
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub csv_written: Option<String>,
}

/// Builds the problem, runs the algorithm and writes the CSV if asked.
pub fn run_config(cfg: &RunConfig) -> Result<RunOutcome> {
    let obj = cfg.problem.build()?;
    let x0 = cfg.start(&obj)?;
    let s = cfg.s.resolve(&obj);
    let trajectory = run_algo(&obj, &cfg.algo, s, &x0, cfg.k_max, cfg.stride)?;
    let csv_written = match &cfg.csv {
        Some(path) => {
            std::fs::write(path, trajectory.to_csv_string())?;
            Some(path.clone())
        }
        None => None,
    };
    Ok(RunOutcome { trajectory, csv_written })
}

fn opt_field(x: Option<f64>) -> String {
    x.map(fmt_g17).unwrap_or_default()
}

/// Lyapunov monitor CSV `k,V,ratio,target_ratio,lemma_residual` for a
/// configured run. Log-sum-exp problems get x* and f* from Newton's method.
pub fn monitor_csv(cfg: &RunConfig) -> Result<String> {
    let mut obj = cfg.problem.build()?;
    if obj.minimizer.is_none() {
        let res = crate::problems::newton_minimize(&obj, &Vector::zeros(obj.dim()), 1e-10, 200)?;
        obj = obj.with_optimum(res.x, res.f);
    }
    let x0 = cfg.start(&obj)?;
    let s = cfg.s.resolve(&obj);
    let mut out = String::from("k,V,ratio,target_ratio,lemma_residual\n");
    match &cfg.algo {
        AlgoSpec::ExtendedNagC { r, beta, gamma, .. } => {
            let p = nag_c_family(*r, *beta, *gamma)?;
            let traj = algorithms::run_extended_nag_c(&obj, s, &p, &x0, cfg.k_max, CForm::ThreeVar)?;
            let trace = lyapunov::eval_lyapunov_c(&traj, &obj, &p, s, OmegaChoice::Auto)?;
            let mut prev: Option<f64> = None;
            for row in &trace.rows {
                let ratio = prev.and_then(|pv| (pv > 0.0).then(|| row.v / pv));
                out.push_str(&format!("{},{},{},{},{}\n", row.k, fmt_g17(row.v), opt_field(ratio), fmt_g17(1.0), opt_field(row.lemma3_slack)));
                prev = Some(row.v);
            }
        }
        algo => {
            let p = algo.sc_params().map_err(|e| Error::NotApplicable(format!("monitor: {e}")))?;
            let traj = algorithms::run_extended_nag_sc(&obj, s, &p, &x0, cfg.k_max)?;
            let trace = lyapunov::eval_lyapunov_sc(&traj, &obj, &p, s)?;
            for row in &trace.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.k,
                    fmt_g17(row.v),
                    opt_field(row.ratio),
                    fmt_g17(trace.target_ratio),
                    opt_field(row.lemma1_slack)
                ));
            }
        }
    }
    Ok(out)
}

/// Both SC parameterizations of `algo` as config text: the three-variable
/// (η, ν, τ) block and the single-variable c-space block.
pub fn convert(algo: &AlgoSpec) -> Result<String> {
    let three = algo.sc_params()?;
    let single = transforms::single_series_to_c_space(&transforms::sc_three_to_single_series(&three)?)?;
    let three_spec = AlgoSpec::ExtendedNagSc {
        eta: three.eta.coeffs().to_vec(),
        nu: three.nu.coeffs().to_vec(),
        tau: three.tau.coeffs().to_vec(),
    };
    let single_spec = AlgoSpec::SingleVarSc {
        c0: single.c0,
        c1: single.c1,
        c2: single.c2,
        r1: single.r1.coeffs().to_vec(),
        r2: single.r2.coeffs().to_vec(),
        r3: single.r3.coeffs().to_vec(),
    };
    let mut out = String::new();
    out.push_str("# three-variable form\n[algo]\nid = extended-nag-sc\n");
    out.push_str(&algo_block(&three_spec));
    out.push_str("\n# single-variable form (coefficients truncated in sqrt(q))\n[algo]\nid = single-var-sc\n");
    out.push_str(&algo_block(&single_spec));
    Ok(out)
}

/// Process exit code for an error: 2 for divergence, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Diverged { .. } => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
# S1-style run
[problem]
spec = diag-quadratic-2d d1=0.005 d2=1
x0 = 1, 1

[algo]
id = single-var-sc
c0 = 1
c1 = 2
c2 = 1.5   # NAG-SC leading constants

[run]
s = 0.1/L
k = 50
";

    #[test]
    fn parses_sections_and_comments() {
        let cfg = RunConfig::parse(FULL).unwrap();
        assert_eq!(cfg.k_max, 50);
        assert_eq!(cfg.s, StepExpr::OverL(0.1));
        assert!(matches!(cfg.algo, AlgoSpec::SingleVarSc { c2, .. } if c2 == 1.5));
        assert_eq!(cfg.x0, Some(vec![1.0, 1.0]));
    }

    #[test]
    fn print_parse_round_trip() {
        let cfg = RunConfig::parse(FULL).unwrap();
        assert_eq!(RunConfig::parse(&cfg.to_string()).unwrap(), cfg);
        let c = RunConfig::parse("problem = log-sum-exp n=5 m=20 rho=2 seed=3\nalgo = extended-nag-c\ns = 0.05/normA\nk = 7\n").unwrap();
        assert_eq!(RunConfig::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn shorthand_gd_exact_step() {
        let cfg = RunConfig::parse("problem = scalar-quadratic mu=1\nalgo = gd\ns = 1\nk = 10\n").unwrap();
        let out = run_config(&cfg).unwrap();
        assert_eq!(out.trajectory.at(1).unwrap().f_gap, Some(0.0));
    }

    #[test]
    fn bad_key_reports_line() {
        let text = "[problem]\nspec = scalar-quadratic mu=1\n[algo]\nid = gd\nbogus = 3\n[run]\ns = 1\nk = 1\n";
        match RunConfig::parse(text) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected config error, got {other:?}"),
        }
        match RunConfig::parse("problem = scalar-quadratic mu=1\nalgo = gd\n[run]\ns = 1\nk = ten\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn step_expressions() {
        assert_eq!("0.05/normA".parse::<StepExpr>().unwrap(), StepExpr::OverNormA(0.05));
        assert_eq!(" 1 / L ".parse::<StepExpr>().unwrap(), StepExpr::OverL(1.0));
        assert!("-1".parse::<StepExpr>().is_err());
        assert!("0.1/mu".parse::<StepExpr>().is_err());
    }

    #[test]
    fn convert_nag_sc_gives_c_space() {
        let text = convert(&AlgoSpec::NagSc).unwrap();
        assert!(text.contains("id = single-var-sc\nc0 = 1\nc1 = 2\nc2 = 1.5\n"), "{text}");
    }
}
