//! Reference optimum of the log-sum-exp instance: long NAG-C run against
//! Newton's method.

use agm::bench::{self, FigureId};
use agm::{problems, Vector};

fn main() -> agm::Result<()> {
    let f = bench::problem_spec(FigureId::S3, 0, false).build()?;
    let fx = bench::reference_fstar_value(&f, 20_000)?;
    let newton = problems::newton_minimize(&f, &Vector::zeros(f.dim()), 1e-12, 100)?;
    println!("NAG-C f* = {:.15} (best grad norm {:e})", fx.f_star, fx.grad_norm);
    println!("Newton f* = {:.15} after {} iterations", newton.f, newton.iterations);
    Ok(())
}
