//! NAG-SC against GD on the ill-conditioned 2-d quadratic at s = 1/L.

use agm::{algorithms, problems, Vector};

fn main() -> agm::Result<()> {
    let f = problems::make_diag_quadratic(5e-3, 1.0)?;
    let s = 1.0 / f.l;
    let x0 = Vector::from_element(2, 1.0);
    let gd = algorithms::run_gd(&f, s, &x0, 2000)?;
    let nag = algorithms::run_nag_sc(&f, s, &x0, 2000)?;
    println!("k,gd_gap,nag_sc_gap");
    for k in (0..=2000).step_by(200) {
        let gap = |t: &agm::Trajectory| t.at(k).and_then(|r| r.f_gap).unwrap_or(f64::NAN);
        println!("{k},{:e},{:e}", gap(&gd), gap(&nag));
    }
    Ok(())
}
