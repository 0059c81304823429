//! High-resolution NAG-SC and heavy-ball ODEs share the decay rate √μ of
//! their Lyapunov functions.

use agm::ode::{self, OdeKind, OdeParams, OdeSystem};
use agm::{problems, Vector};

fn main() -> agm::Result<()> {
    let f = problems::make_diag_quadratic(0.05, 0.5)?;
    for kind in [OdeKind::HighResNagSc, OdeKind::HighResHb] {
        let params = OdeParams { s: 0.01, mu: f.mu, ..OdeParams::default() };
        let sys = OdeSystem::new(kind, f.clone(), Vector::from_element(2, 1.0), params)?;
        let trace = ode::integrate(&sys, 1e-3, 30.0, 1000)?;
        let rate = sys.proved_rate().expect("strongly convex kind");
        let check = ode::check_rate(&trace, rate);
        println!("{kind}: rate {rate}, V(30) = {:e}, decay holds = {} (drift {:e})", trace.last().lyapunov, check.holds, check.max_drift);
    }
    Ok(())
}
