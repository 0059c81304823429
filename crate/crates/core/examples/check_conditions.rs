//! Acceleration verdicts for a few classical parameter choices.

use agm::algorithms::ScParams;
use agm::conditions;
use agm::config::nag_c_family;

fn main() -> agm::Result<()> {
    for (name, (eta, nu, tau)) in [("NAG-SC", (1.0, 1.0, 1.0)), ("TMM", (1.0, 1.0, 2.0)), ("heavy-ball-like", (0.0, 1.0, 1.0))] {
        let (i, ii) = conditions::series_i_ii(&ScParams::constant(eta, nu, tau));
        println!("{name}: {}", conditions::check_thm1(eta, nu, tau));
        println!("{name}: {}", conditions::classify_lemma_s2(&i, &ii));
    }
    println!("c-space (2, 3, sqrt2): {}", conditions::check_cor1(2.0, 3.0, 2f64.sqrt()));
    for r in [1.9, 2.0, 3.0] {
        println!("NAG-C family r={r}: {}", conditions::check_thm4(&nag_c_family(r, 1.0, 1.0)?, 10_000));
    }
    Ok(())
}
