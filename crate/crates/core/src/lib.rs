//! Generalized accelerated gradient methods.
//!
//! The crate is organized around runnable examples (see `examples/`); this
//! page only maps the modules.
//!
//! - [`problems`]: objective oracles (quadratics, log-sum-exp) and seeded
//!   instance generators.
//! - [`algorithms`]: fixed-step iteration engines for GD, NAG-SC, heavy-ball,
//!   TMM, the extended NAG-SC and NAG-C families, and HAG.
//! - [`transforms`]: conversions between the equivalent parameterizations.
//! - [`conditions`]: sufficient conditions for acceleration, evaluated on
//!   truncated series in √q.
//! - [`lyapunov`]: discrete Lyapunov functions along trajectories and
//!   contraction checks with step-size search.
//! - [`ode`]: limiting ODEs integrated with RK4, with continuous Lyapunov
//!   monitors.
//! - [`config`] and [`bench`]: the run-config grammar and experiment suites
//!   behind the `agm` binary.
//!
//! ```
//! use agm::{algorithms, problems, Vector};
//!
//! let f = problems::make_diag_quadratic(5e-3, 1.0).unwrap();
//! let traj = algorithms::run_nag_sc(&f, 1.0 / f.l, &Vector::from_element(2, 1.0), 200).unwrap();
//! assert!(traj.last().f_gap.unwrap() < 1e-3);
//! ```

pub mod algorithms;
pub mod bench;
pub mod conditions;
pub mod config;
pub mod error;
pub mod linalg;
pub mod lyapunov;
pub mod ode;
pub mod problems;
pub mod rng;
pub mod sequence;
pub mod series;
pub mod trajectory;
pub mod transforms;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use problems::Objective;
pub use sequence::Sequence;
pub use series::SqrtQSeries;
pub use trajectory::{Record, Trajectory};
