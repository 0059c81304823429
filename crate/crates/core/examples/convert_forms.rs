//! The three-variable TMM parameters rewritten in the single-variable form,
//! and back.

use agm::algorithms::ScParams;
use agm::transforms::{self, RootChoice};

fn main() -> agm::Result<()> {
    let tmm = ScParams::tmm();
    let single = transforms::single_series_to_c_space(&transforms::sc_three_to_single_series(&tmm)?)?;
    println!("TMM: c0={} c1={} c2={}", single.c0, single.c1, single.c2);

    let back = transforms::single_to_sc_three(&single, RootChoice::TauLarger, 6)?.params;
    for (name, s) in [("eta", &back.eta), ("nu", &back.nu), ("tau", &back.tau)] {
        println!("{name} = {:?}", &s.coeffs()[..4]);
    }
    Ok(())
}
