mod common;

use agm::transforms::{self, RootChoice};
use agm::algorithms::ScParams;
use common::*;

#[test]
fn sc_three_var_matches_single_var() {
    for (eta, nu, tau) in [(1.0, 1.0, 1.0), (1.0, 1.0, 2.0), (1.5, 1.0, 2.0), (2.0, 1.0, 3.0)] {
        let dev = sc_deviation(eta, nu, tau);
        assert!(dev <= EQUIV_TOL, "({eta}, {nu}, {tau}): deviation {dev:e}");
    }
}

#[test]
fn c_forms_agree() {
    for (name, p) in c_cases() {
        let dev = c_deviation(&p);
        assert!(dev <= EQUIV_TOL, "{name}: deviation {dev:e}");
    }
}

#[test]
fn hag_forms_agree() {
    let f = quad20();
    let s = 0.5 / f.l;
    for (name, p) in hag_cases(&f, s) {
        let dev = hag_deviation(&f, s, &p);
        assert!(dev <= EQUIV_TOL, "{name}: deviation {dev:e}");
    }
}

#[test]
fn series_round_trip_recovers_three_var_params() {
    for (eta, nu, tau) in [(1.0, 1.0, 2.0), (1.5, 1.0, 2.0), (2.0, 1.0, 3.0), (1.0, 2.0, 1.0)] {
        let p = ScParams::constant(eta, nu, tau);
        let series = transforms::sc_three_to_single_series(&p).unwrap();
        let choice = if nu > tau { RootChoice::NuLarger } else { RootChoice::TauLarger };
        let back = transforms::single_series_to_sc_three(&series, choice, 6).unwrap().params;
        for (orig, got) in [(&p.eta, &back.eta), (&p.nu, &back.nu), (&p.tau, &back.tau)] {
            for i in 0..=6 {
                assert!((orig.coeff(i) - got.coeff(i)).abs() <= 1e-12, "({eta}, {nu}, {tau}) coeff {i}: {} vs {}", orig.coeff(i), got.coeff(i));
            }
        }
    }
}
