use ar1_tstat::montecarlo::{
    empirical_density, estimate_moments, ks_test_against, sample_functional, silverman_bandwidth, EmpiricalSummary,
    Functional, ReferenceLaw, SimulationConfig,
};
use ar1_tstat::oracle::s2_oracle;
use ar1_tstat::student::normal_pdf;
use ar1_tstat::{moments, Ar1Params, StudentLaw};

const REPS: usize = 200_000;

fn config(rho: f64, n: usize, seed: u64) -> SimulationConfig {
    SimulationConfig::new(Ar1Params::new(0.0, 1.0, rho, n).unwrap(), REPS, seed, 4).unwrap()
}

#[test]
fn s2_moments_match_oracle() {
    for (i, (n, rho)) in [(5, -0.8), (10, 0.0), (10, 0.5), (50, 0.3)].into_iter().enumerate() {
        let cfg = config(rho, n, 100 + i as u64);
        let s = estimate_moments(&cfg, Functional::S2).unwrap();
        let o = s2_oracle(&cfg.params);
        let z_mean = EmpiricalSummary::z_score(s.mean, moments::expected_s2(&cfg.params), s.std_error_mean);
        let z_var = EmpiricalSummary::z_score(s.variance, o.variance, s.std_error_variance);
        let z_m2 = EmpiricalSummary::z_score(s.second_moment, o.second_moment, s.std_error_second_moment);
        assert!(
            z_mean < 4.0 && z_var < 4.0 && z_m2 < 4.0,
            "n={n} rho={rho}: {z_mean} {z_var} {z_m2}"
        );
    }
}

#[test]
fn numerator_variance_matches_closed_form() {
    let cfg = config(0.5, 10, 7);
    let s = estimate_moments(&cfg, Functional::SampleMean).unwrap();
    let target = moments::var_scaled_sample_mean(&cfg.params);
    assert!(EmpiricalSummary::z_score(s.variance, target, s.std_error_variance) < 4.0);
    assert!(EmpiricalSummary::z_score(s.mean, 0.0, s.std_error_mean) < 4.0);
}

#[test]
fn whitened_statistic_is_student() {
    let cfg = config(0.8, 10, 9);
    let s = sample_functional(&cfg, Functional::ModifiedTStat);
    let law = ReferenceLaw::Student(StudentLaw::new(9.0).unwrap());
    let r = ks_test_against(&s.finite(), &law).unwrap();
    assert!(r.p_value > 0.001, "{r:?}");
}

#[test]
fn kde_recovers_normal_density() {
    let cfg = config(0.0, 2, 11);
    // sqrt(2) * mean of two iid N(0,1) is N(0,1).
    let s = sample_functional(&cfg, Functional::SampleMean);
    let h = silverman_bandwidth(&s.values).unwrap();
    let grid: Vec<f64> = (0..=60).map(|i| -3.0 + i as f64 * 0.1).collect();
    let d = empirical_density(&s.values, &grid, h).unwrap();
    for (x, y) in grid.iter().zip(&d) {
        assert!((y - normal_pdf(*x)).abs() < 0.01, "x={x}");
    }
}
