//! Per-iteration records produced by the runners, and their CSV form.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::{all_finite, Vector};
use crate::problems::Objective;

/// Guard ratio: a run is declared diverged once f − f* exceeds this multiple
/// of its initial value.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct Record {
    pub k: usize,
    pub x: Vector,
    pub f: f64,
    /// f(xₖ) − f*, present only when f* is known.
    pub f_gap: Option<f64>,
    pub grad_norm_sq: f64,
    /// Named scalars (αₖ, α̃ₖ, re-weighted gradient weights, ...).
    pub aux: Vec<(&'static str, f64)>,
    /// Named auxiliary iterates (yₖ, zₖ, uₖ).
    pub states: Vec<(&'static str, Vector)>,
}

impl Record {
    pub fn aux(&self, name: &str) -> Option<f64> {
        self.aux.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn state(&self, name: &str) -> Option<&Vector> {
        self.states.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<Record>,
    pub step_size: f64,
    pub algo_id: String,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> &Record {
        self.records.last().expect("trajectory has at least the initial record")
    }

    pub fn xs(&self) -> impl Iterator<Item = &Vector> {
        self.records.iter().map(|r| &r.x)
    }

    /// Record with iteration index `k`, if it was kept.
    pub fn at(&self, k: usize) -> Option<&Record> {
        self.records.binary_search_by_key(&k, |r| r.k).ok().map(|i| &self.records[i])
    }

    /// Largest ‖xₖ − x'ₖ‖/(1 + ‖xₖ‖) over records present in both.
    pub fn max_rel_deviation(&self, other: &Trajectory) -> f64 {
        self.records
            .iter()
            .zip(&other.records)
            .map(|(a, b)| {
                assert_eq!(a.k, b.k, "trajectories recorded at different indices");
                (&a.x - &b.x).norm() / (1.0 + a.x.norm())
            })
            .fold(0.0, f64::max)
    }

    /// Writes `k,f_gap,grad_norm_sq[,aux...]`, one row per record. Aux
    /// columns come from the first record; reals use 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let aux_names: Vec<&str> = self.records.first().map(|r| r.aux.iter().map(|(n, _)| *n).collect()).unwrap_or_default();
        let mut header = String::from("k,f_gap,grad_norm_sq");
        for n in &aux_names {
            header.push(',');
            header.push_str(n);
        }
        writeln!(w, "{header}")?;
        for r in &self.records {
            let mut line = format!("{},{},{}", r.k, r.f_gap.map(fmt_g17).unwrap_or_default(), fmt_g17(r.grad_norm_sq));
            for n in &aux_names {
                line.push(',');
                line.push_str(&r.aux(n).map(fmt_g17).unwrap_or_default());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// `%.17g`: 17 significant digits, fixed notation for exponents in
/// [−5, 17), scientific otherwise, trailing zeros trimmed.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Accumulates records and enforces the divergence guard.
pub(crate) struct Recorder<'a> {
    obj: &'a Objective,
    traj: Trajectory,
    gap0: Option<f64>,
    f0: f64,
    stride: usize,
}

/// Iterations beyond this index are subsampled by `stride`.
pub const SUBSAMPLE_FROM: usize = 10_000;

impl<'a> Recorder<'a> {
    pub fn new(obj: &'a Objective, step_size: f64, algo_id: impl Into<String>, stride: usize) -> Self {
        Recorder {
            obj,
            traj: Trajectory { records: Vec::new(), step_size, algo_id: algo_id.into() },
            gap0: None,
            f0: 0.0,
            stride: stride.max(1),
        }
    }

    /// Checks the iterate and stores a record; `f` and `g` are f(x), ∇f(x).
    pub fn push(
        &mut self,
        k: usize,
        x: &Vector,
        f: f64,
        g: &Vector,
        aux: Vec<(&'static str, f64)>,
        states: Vec<(&'static str, &Vector)>,
    ) -> Result<()> {
        if !f.is_finite() || !all_finite(x) {
            return Err(Error::Diverged { k });
        }
        let gap = self.obj.f_star.map(|fs| f - fs);
        if k == 0 {
            self.gap0 = gap;
            self.f0 = f;
        } else {
            let blown = match (gap, self.gap0) {
                (Some(gk), Some(g0)) => {
                    let floor = 1e-16 * (1.0 + self.obj.f_star.unwrap_or(0.0).abs());
                    gk > DIVERGENCE_FACTOR * g0.max(floor)
                }
                _ => (f - self.f0).abs() > DIVERGENCE_FACTOR * (1.0 + self.f0.abs()),
            };
            if blown {
                return Err(Error::Diverged { k });
            }
        }
        if k > SUBSAMPLE_FROM && k % self.stride != 0 {
            return Ok(());
        }
        self.traj.records.push(Record {
            k,
            x: x.clone(),
            f,
            f_gap: gap,
            grad_norm_sq: g.norm_squared(),
            aux,
            states: states.into_iter().map(|(n, v)| (n, v.clone())).collect(),
        });
        Ok(())
    }

    pub fn finish(self) -> Trajectory {
        self.traj
    }
}
