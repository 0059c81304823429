use agm::config::{run_config, RunConfig};

const TMM_CFG: &str = "\
[problem]
spec = diag-quadratic-2d d1=0.5 d2=1
[algo]
id = tmm
[run]
s = 0.25
k = 3
";

const TMM_GOLDEN: &str = "\
k,f_gap,grad_norm_sq
0,1.5,5
1,0.19791666666666663,0.45138888888888884
2,0.049599729938271608,0.10074266975308642
3,0.013570233464077505,0.02821214045353224
";

#[test]
fn trajectory_csv_is_stable() {
    let out = run_config(&RunConfig::parse(TMM_CFG).unwrap()).unwrap();
    assert_eq!(out.trajectory.to_csv_string(), TMM_GOLDEN);
}

#[test]
fn aux_columns_follow_the_fixed_ones() {
    let cfg = RunConfig::parse("problem = scalar-quadratic mu=1\nalgo = extended-nag-c\ns = 0.5\nk = 2\n").unwrap();
    let csv = run_config(&cfg).unwrap().trajectory.to_csv_string();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("k,f_gap,grad_norm_sq,"), "{header}");
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn summary_and_ode_headers() {
    assert_eq!(agm::bench::SUMMARY_HEADER, "cell,s,status,iters_to_1e-8,terminal_f_gap,terminal_min_grad_sq,scaled_min_grad");
    let f = agm::problems::make_scalar_quadratic(1.0).unwrap();
    let sys = agm::ode::OdeSystem::new(agm::ode::OdeKind::GradientFlow, f, agm::Vector::from_element(1, 1.0), Default::default()).unwrap();
    let csv = agm::ode::integrate(&sys, 0.1, 0.2, 1).unwrap().to_csv_string();
    assert_eq!(csv.lines().next(), Some("t,f_gap,V,rate_check"));
    assert_eq!(csv.lines().count(), 4);
}
