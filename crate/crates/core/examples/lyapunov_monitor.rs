//! Halves s until the NAG-SC Lyapunov function contracts by 1 − ν√q every
//! step, then prints the tail of the trace.

use agm::algorithms::ScParams;
use agm::{lyapunov, problems, Vector};

fn main() -> agm::Result<()> {
    let f = problems::make_diag_quadratic(5e-3, 0.5)?;
    let p = ScParams::nag_sc();
    let (s, trace) = lyapunov::find_feasible_s_sc(&f, &p, &Vector::from_element(2, 1.0), 1.0 / f.l, 20)?;
    println!("feasible s = {s} (L = {}), target ratio {}", f.l, trace.target_ratio);
    for row in trace.rows.iter().rev().take(5).rev() {
        println!("k={} V={:e} ratio={:?} lemma1_slack={:?}", row.k, row.v, row.ratio, row.lemma1_slack);
    }
    Ok(())
}
