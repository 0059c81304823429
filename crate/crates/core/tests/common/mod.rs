//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use agm::algorithms::{self, CForm, CSeqParams, HagForm, HagParams, ScParams};
use agm::problems::{self, Objective};
use agm::sequence::Sequence;
use agm::{transforms, Vector};

pub const EQUIV_TOL: f64 = 1e-9;
pub const EQUIV_ITERS: usize = 300;

/// Seeded 20-d random quadratic used by the equivalence suites.
pub fn quad20() -> Objective {
    problems::make_random_quadratic(20, 11).unwrap()
}

pub fn start(obj: &Objective) -> Vector {
    Vector::from_fn(obj.dim(), |i, _| 1.0 - 0.05 * i as f64)
}

/// Three-variable run against its single-variable rewrite at s = 0.1/L.
pub fn sc_deviation(eta: f64, nu: f64, tau: f64) -> f64 {
    let f = quad20();
    let s = 0.1 / f.l;
    let x0 = start(&f);
    let p = ScParams::constant(eta, nu, tau);
    let three = algorithms::run_extended_nag_sc(&f, s, &p, &x0, EQUIV_ITERS).unwrap();
    let q = f.mu * s;
    let coeffs = transforms::sc_three_to_single(&p, q).unwrap();
    let single = algorithms::run_single_var_coeffs(&f, s, coeffs, &x0, EQUIV_ITERS).unwrap();
    three.max_rel_deviation(&single)
}

pub fn c_cases() -> Vec<(&'static str, CSeqParams)> {
    vec![
        ("nag-c", CSeqParams::nag_c()),
        ("fista beta=0.8", CSeqParams::new(Sequence::fista(), Sequence::constant(0.8), Sequence::constant(1.0))),
        ("alternating r=4", CSeqParams::new(algorithms::lemma5_alpha(4.0).unwrap(), Sequence::constant(1.0), Sequence::constant(1.0))),
    ]
}

/// Largest deviation of the two- and three-variable forms from the
/// single-variable one.
pub fn c_deviation(p: &CSeqParams) -> f64 {
    let f = quad20();
    let s = 0.5 / f.l;
    let x0 = start(&f);
    let run = |form| algorithms::run_extended_nag_c(&f, s, p, &x0, EQUIV_ITERS, form).unwrap();
    let single = run(CForm::SingleVar);
    run(CForm::TwoVar).max_rel_deviation(&single).max(run(CForm::ThreeVar).max_rel_deviation(&single))
}

pub fn hag_cases(f: &Objective, s: f64) -> Vec<(&'static str, HagParams)> {
    vec![
        ("hag-sc (1, 2.5, 1.5)", algorithms::hag_sc_config(1.0, 2.5, 1.5, s, f.mu, f.dim()).unwrap()),
        ("hag-c r=3", algorithms::hag_c_config(1.0, 1.5, s, &Sequence::rational(3.0), f.dim()).unwrap()),
    ]
}

pub fn hag_deviation(f: &Objective, s: f64, p: &HagParams) -> f64 {
    let x0 = start(f);
    let two = algorithms::run_hag(f, s, p, &x0, EQUIV_ITERS, HagForm::TwoVar).unwrap();
    let single = algorithms::run_hag(f, s, p, &x0, EQUIV_ITERS, HagForm::SingleVar).unwrap();
    two.max_rel_deviation(&single)
}

/// Relative-plus-floor residual test used for the lemma inequalities.
pub fn residual_ok(residual: f64, scale: f64) -> bool {
    residual >= -1e-10 * scale.abs() - 1e-14
}
