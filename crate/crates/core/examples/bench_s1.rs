//! Runs the 2-d quadratic suite into a temporary directory and reports the
//! damping ordering.

use agm::bench::{self, FigureId, FigureSuite};

fn main() -> agm::Result<()> {
    let outdir = std::env::temp_dir().join("agm_bench_s1");
    let summaries = bench::run_figure(&FigureSuite::new(FigureId::S1, 0), &outdir, None)?;
    for c in summaries.iter().filter(|c| c.s == 0.05) {
        println!("{}: {:?} iterations to 1e-8", c.cell.name(), c.iters_to_target);
    }
    for (what, holds) in bench::orderings(&summaries) {
        println!("{} {what}", if holds { "holds" } else { "fails" });
    }
    println!("CSVs in {}", outdir.display());
    Ok(())
}
