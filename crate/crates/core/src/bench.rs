//! Experiment suites S1 (strongly convex quadratics), S2 (ill-conditioned
//! random quadratic) and S3 (log-sum-exp), with per-cell CSVs and a
//! summary table.
//!
//! Cells run on a rayon pool; output names and summary order depend only on
//! the grid, never on completion order.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::algorithms::{self, CForm, RunOptions, SingleVarScParams};
use crate::config::nag_c_family;
use crate::error::{invalid, Error, Result};
use crate::linalg::Vector;
use crate::problems::{Objective, ProblemSpec};
use crate::trajectory::{fmt_g17, Trajectory};

/// Target gap for the iterations-to-tolerance column.
pub const GAP_TARGET: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    S1,
    S2,
    S3,
}

impl FigureId {
    pub fn id(self) -> &'static str {
        match self {
            FigureId::S1 => "s1",
            FigureId::S2 => "s2",
            FigureId::S3 => "s3",
        }
    }

    /// Iteration budget per cell when none is given.
    pub fn default_k(self) -> usize {
        match self {
            FigureId::S1 => 3000,
            FigureId::S2 => 5000,
            FigureId::S3 => 3000,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(FigureId::S1),
            "s2" => Ok(FigureId::S2),
            "s3" => Ok(FigureId::S3),
            _ => Err(invalid(format!("unknown figure `{s}` (expected s1, s2 or s3)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FigureSuite {
    pub id: FigureId,
    pub seed: u64,
    pub k_max: usize,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
}

impl FigureSuite {
    pub fn new(id: FigureId, seed: u64) -> Self {
        FigureSuite { id, seed, k_max: id.default_k(), workers: 0 }
    }
}

/// One grid point.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    /// Single-variable SC method with c₀ = 1 and zero remainders.
    S1 { well_conditioned: bool, c1: f64, c2: f64, s: f64 },
    /// NAG-C family with αₖ = (k + r)/r, γ = 1; `s_scale`·1/‖A‖ (S2) or
    /// the absolute step (S3).
    Convex { fig: FigureId, r: f64, beta: f64, s_scale: f64 },
}

impl Cell {
    pub fn name(&self) -> String {
        match self {
            Cell::S1 { well_conditioned, c1, c2, s } => {
                format!("s1_{}_c1={c1}_c2={c2}_s={s}", if *well_conditioned { "well" } else { "ill" })
            }
            Cell::Convex { fig, r, beta, s_scale } => match fig {
                FigureId::S2 => format!("s2_r={r}_beta={beta}_s={s_scale}over_normA"),
                _ => format!("{fig}_r={r}_beta={beta}_s={s_scale}"),
            },
        }
    }
}

/// The cartesian grid of a figure, in a fixed order.
pub fn grid(id: FigureId) -> Vec<Cell> {
    let mut cells = Vec::new();
    match id {
        FigureId::S1 => {
            for well_conditioned in [false, true] {
                for c1 in [1.0, 2.0] {
                    for c2 in [0.5, 1.0, 1.5] {
                        for s in [0.01, 0.05, 0.1] {
                            cells.push(Cell::S1 { well_conditioned, c1, c2, s });
                        }
                    }
                }
            }
        }
        FigureId::S2 | FigureId::S3 => {
            let steps: [f64; 3] = if id == FigureId::S2 { [0.05, 0.1, 0.3] } else { [0.5, 1.0, 5.0] };
            for r in [1.0, 2.0] {
                for beta in [0.0, 0.5, 1.0] {
                    for s_scale in steps {
                        cells.push(Cell::Convex { fig: id, r, beta, s_scale });
                    }
                }
            }
        }
    }
    cells
}

pub fn problem_spec(id: FigureId, seed: u64, well_conditioned: bool) -> ProblemSpec {
    match id {
        FigureId::S1 if well_conditioned => ProblemSpec::DiagQuadratic2d { d1: 0.5, d2: 1.0 },
        FigureId::S1 => ProblemSpec::DiagQuadratic2d { d1: 5e-3, d2: 1.0 },
        FigureId::S2 => ProblemSpec::RandomQuadratic { n: 500, seed },
        FigureId::S3 => ProblemSpec::LogSumExp { n: 50, m: 200, rho: 20.0, seed },
    }
}

/// Summary line of one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub cell: Cell,
    pub s: f64,
    pub diverged: bool,
    /// First k from which f(xᵢ) − f* ≤ 1e-8 for every recorded i ≥ k.
    /// Under-damped runs dip below the target at zero crossings long before
    /// they settle, so the first hit alone would reward oscillation.
    pub iters_to_target: Option<usize>,
    pub terminal_gap: f64,
    /// minᵢ≤ₖ ‖∇f(xᵢ)‖² at the last iterate.
    pub terminal_min_grad: f64,
    pub k: usize,
}

impl CellSummary {
    /// s²k³·minᵢ≤ₖ‖∇f(xᵢ)‖².
    pub fn scaled_min_grad(&self) -> f64 {
        let k = self.k as f64;
        self.s * self.s * k * k * k * self.terminal_min_grad
    }
}

pub const SUMMARY_HEADER: &str = "cell,s,status,iters_to_1e-8,terminal_f_gap,terminal_min_grad_sq,scaled_min_grad";

fn summary_line(c: &CellSummary) -> String {
    let iters = c.iters_to_target.map_or("inf".to_string(), |k| k.to_string());
    if c.diverged {
        return format!("{},{},diverged,inf,,,", c.cell.name(), fmt_g17(c.s));
    }
    format!(
        "{},{},ok,{},{},{},{}",
        c.cell.name(),
        fmt_g17(c.s),
        iters,
        fmt_g17(c.terminal_gap),
        fmt_g17(c.terminal_min_grad),
        fmt_g17(c.scaled_min_grad())
    )
}

fn summarize(cell: Cell, s: f64, traj: &Trajectory) -> CellSummary {
    let settled = |r: &crate::Record| r.f_gap.is_some_and(|g| g <= GAP_TARGET);
    let iters_to_target = match traj.records.iter().rposition(|r| !settled(r)) {
        None => Some(traj.records[0].k),
        Some(i) => traj.records.get(i + 1).map(|r| r.k),
    };
    let min_grad = traj.records.iter().map(|r| r.grad_norm_sq).fold(f64::INFINITY, f64::min);
    let last = traj.last();
    CellSummary {
        cell,
        s,
        diverged: false,
        iters_to_target,
        terminal_gap: last.f_gap.unwrap_or(f64::NAN),
        terminal_min_grad: min_grad,
        k: last.k,
    }
}

/// Runs one cell on a prepared objective.
pub fn run_cell(cell: &Cell, obj: &Objective, k_max: usize) -> Result<(f64, Trajectory)> {
    match *cell {
        Cell::S1 { c1, c2, s, .. } => {
            let p = SingleVarScParams::plain(1.0, c1, c2)?;
            let x0 = Vector::from_element(2, 1.0);
            Ok((s, algorithms::run_single_var_sc(obj, s, &p, &x0, k_max)?))
        }
        Cell::Convex { fig, r, beta, s_scale } => {
            let s = if fig == FigureId::S2 { s_scale / obj.data_norm() } else { s_scale };
            let p = nag_c_family(r, beta, 1.0)?;
            let x0 = Vector::zeros(obj.dim());
            let opts = RunOptions::default();
            Ok((s, algorithms::run_extended_nag_c_opts(obj, s, &p, &x0, k_max, CForm::SingleVar, opts)?))
        }
    }
}

/// Per-figure objectives (S1 has two).
fn objectives(suite: &FigureSuite, f_star: Option<f64>) -> Result<(Objective, Option<Objective>)> {
    let main = problem_spec(suite.id, suite.seed, false).build()?;
    let main = match (suite.id, f_star) {
        (FigureId::S3, Some(fs)) => main.with_f_star(fs),
        (FigureId::S3, None) => main.clone().with_f_star(reference_fstar_value(&main, FSTAR_ITERS)?.f_star),
        _ => main,
    };
    let well = if suite.id == FigureId::S1 { Some(problem_spec(FigureId::S1, suite.seed, true).build()?) } else { None };
    Ok((main, well))
}

/// Runs the suite, writes one CSV per cell plus `summary.csv`, and returns
/// the summaries in grid order. Diverged cells are recorded, not fatal.
/// S3 needs f*; when `f_star` is `None` the reference run supplies it.
pub fn run_figure(suite: &FigureSuite, outdir: &Path, f_star: Option<f64>) -> Result<Vec<CellSummary>> {
    fs::create_dir_all(outdir)?;
    let (main, well) = objectives(suite, f_star)?;
    let cells = grid(suite.id);
    let job = |cell: &Cell| -> Result<CellSummary> {
        let obj = match cell {
            Cell::S1 { well_conditioned: true, .. } => well.as_ref().expect("S1 builds both objectives"),
            _ => &main,
        };
        match run_cell(cell, obj, suite.k_max) {
            Ok((s, traj)) => {
                fs::write(outdir.join(format!("{}.csv", cell.name())), traj.to_csv_string())?;
                Ok(summarize(cell.clone(), s, &traj))
            }
            Err(Error::Diverged { .. }) => {
                let s = match *cell {
                    Cell::S1 { s, .. } => s,
                    Cell::Convex { fig: FigureId::S2, s_scale, .. } => s_scale / obj.data_norm(),
                    Cell::Convex { s_scale, .. } => s_scale,
                };
                Ok(CellSummary {
                    cell: cell.clone(),
                    s,
                    diverged: true,
                    iters_to_target: None,
                    terminal_gap: f64::INFINITY,
                    terminal_min_grad: f64::INFINITY,
                    k: 0,
                })
            }
            Err(e) => Err(e),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(suite.workers)
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    let results: Vec<Result<CellSummary>> = pool.install(|| cells.par_iter().map(job).collect());
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut text = String::from(SUMMARY_HEADER);
    text.push('\n');
    for c in &summaries {
        text.push_str(&summary_line(c));
        text.push('\n');
    }
    fs::write(outdir.join("summary.csv"), text)?;
    Ok(summaries)
}

/// The qualitative orderings reported for the three figures, each as
/// (description, holds). Only the checks relevant to `summaries` appear.
pub fn orderings(summaries: &[CellSummary]) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let find = |pred: &dyn Fn(&Cell) -> bool| summaries.iter().find(|c| pred(&c.cell));
    for c2 in [0.5, 1.0, 1.5] {
        let pick = |c1: f64| find(&|c| matches!(*c, Cell::S1 { well_conditioned: true, c1: a, c2: b, s } if a == c1 && b == c2 && s == 0.05));
        if let (Some(under), Some(critical)) = (pick(1.0), pick(2.0)) {
            let it = |c: &CellSummary| c.iters_to_target.unwrap_or(usize::MAX);
            out.push((
                format!("S1 well s=0.05 c2={c2}: c1=2 reaches 1e-8 in {} iterations, c1=1 in {}", fmt_iters(critical), fmt_iters(under)),
                it(critical) < it(under),
            ));
        }
    }
    for beta in [0.0, 0.5, 1.0] {
        for s_scale in [0.05, 0.1, 0.3] {
            let pick = |r: f64| find(&|c| matches!(*c, Cell::Convex { fig: FigureId::S2, r: a, beta: b, s_scale: t } if a == r && b == beta && t == s_scale));
            if let (Some(r1), Some(r2)) = (pick(1.0), pick(2.0)) {
                let v = |c: &CellSummary| if c.diverged { f64::INFINITY } else { c.scaled_min_grad() };
                out.push((
                    format!("S2 beta={beta} s={s_scale}/normA: s^2k^3 min-grad r=2 {:e} <= r=1 {:e}", v(r2), v(r1)),
                    v(r2) <= v(r1),
                ));
            }
        }
    }
    for r in [1.0, 2.0] {
        let pick = |beta: f64| find(&|c| matches!(*c, Cell::Convex { fig: FigureId::S3, r: a, beta: b, s_scale } if a == r && b == beta && s_scale == 5.0));
        if let (Some(b0), Some(b1)) = (pick(0.0), pick(1.0)) {
            out.push((
                format!("S3 r={r} s=5: terminal gap beta=1 {:e} <= beta=0 {:e}", b1.terminal_gap, b0.terminal_gap),
                b1.terminal_gap <= b0.terminal_gap,
            ));
        }
    }
    out
}

fn fmt_iters(c: &CellSummary) -> String {
    c.iters_to_target.map_or("inf".into(), |k| k.to_string())
}

/// Iterations of the reference NAG-C run.
pub const FSTAR_ITERS: usize = 100_000;
/// Step of the reference run on the S3 instance.
pub const FSTAR_STEP: f64 = 1.0;

/// Reference value of f* from a long NAG-C run.
#[derive(Clone, Debug, PartialEq)]
pub struct FstarFixture {
    pub seed: u64,
    pub iterations: usize,
    pub s: f64,
    /// Smallest f seen along the run.
    pub f_star: f64,
    /// ‖∇f‖ at the iterate attaining `f_star`.
    pub grad_norm: f64,
    /// Set when `grad_norm` exceeds 1e-8.
    pub low_confidence: bool,
}

impl FstarFixture {
    pub fn to_text(&self) -> String {
        format!(
            "seed = {}\niterations = {}\ns = {}\nf_star = {}\ngrad_norm = {}\nlow_confidence = {}\n",
            self.seed,
            self.iterations,
            self.s,
            fmt_g17(self.f_star),
            fmt_g17(self.grad_norm),
            self.low_confidence
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config { line: i + 1, msg: format!("expected key = value, got `{line}`") })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).cloned().ok_or_else(|| Error::Config { line: 0, msg: format!("fixture lacks `{k}`") });
        let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| Error::Config { line: 0, msg: format!("bad `{k}`") }) };
        Ok(FstarFixture {
            seed: num("seed")? as u64,
            iterations: num("iterations")? as usize,
            s: num("s")?,
            f_star: num("f_star")?,
            grad_norm: num("grad_norm")?,
            low_confidence: get("low_confidence")? == "true",
        })
    }

    pub fn file_name(seed: u64) -> String {
        format!("fstar_s3_seed{seed}.txt")
    }
}

/// Runs NAG-C for `iterations` steps at [`FSTAR_STEP`] and keeps the lowest
/// objective value seen. The reported gradient norm is the smallest one
/// reached: near the optimum f stalls at roundoff, so the gradient at the
/// min-f iterate is noise.
pub fn reference_fstar_value(obj: &Objective, iterations: usize) -> Result<FstarFixture> {
    let p = nag_c_family(2.0, 1.0, 1.0)?;
    let x0 = Vector::zeros(obj.dim());
    let traj = algorithms::run_extended_nag_c_opts(obj, FSTAR_STEP, &p, &x0, iterations, CForm::SingleVar, RunOptions { stride: 1 })?;
    let best = traj.records.iter().min_by(|a, b| a.f.total_cmp(&b.f)).expect("non-empty trajectory");
    let grad_norm = traj.records.iter().map(|r| r.grad_norm_sq).fold(f64::INFINITY, f64::min).sqrt();
    Ok(FstarFixture { seed: 0, iterations, s: FSTAR_STEP, f_star: best.f, grad_norm, low_confidence: grad_norm > 1e-8 })
}

/// Computes the S3 f* fixture for `seed` and writes it into `outdir`.
pub fn reference_fstar(seed: u64, outdir: &Path, iterations: usize) -> Result<(FstarFixture, PathBuf)> {
    fs::create_dir_all(outdir)?;
    let obj = problem_spec(FigureId::S3, seed, false).build()?;
    let mut fx = reference_fstar_value(&obj, iterations)?;
    fx.seed = seed;
    let path = outdir.join(FstarFixture::file_name(seed));
    fs::write(&path, fx.to_text())?;
    Ok((fx, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes_and_names() {
        assert_eq!(grid(FigureId::S1).len(), 36);
        assert_eq!(grid(FigureId::S2).len(), 18);
        assert_eq!(grid(FigureId::S3).len(), 18);
        let names: std::collections::BTreeSet<String> = grid(FigureId::S1).iter().map(Cell::name).collect();
        assert_eq!(names.len(), 36);
        assert_eq!(grid(FigureId::S1)[0].name(), "s1_ill_c1=1_c2=0.5_s=0.01");
    }

    #[test]
    fn fixture_text_round_trip() {
        let fx = FstarFixture { seed: 7, iterations: 10, s: 1.0, f_star: 101.5, grad_norm: 3e-9, low_confidence: false };
        assert_eq!(FstarFixture::parse(&fx.to_text()).unwrap(), fx);
    }
}
