use ar1_tstat::moments::*;
use ar1_tstat::oracle::{cov_oracle_all, moment_reports, numerator_variance_oracle, s2_oracle};
use ar1_tstat::process::linear_form_law;
use ar1_tstat::Ar1Params;

const NS: [usize; 6] = [2, 3, 5, 10, 50, 200];
const RHOS: [f64; 6] = [-0.99, -0.5, 0.0, 0.5, 0.9, 0.99];
const TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * b.abs().max(1.0)
}

fn grid() -> impl Iterator<Item = Ar1Params> {
    NS.into_iter().flat_map(|n| {
        RHOS.into_iter()
            .map(move |rho| Ar1Params::new(0.0, 1.3, rho, n).unwrap())
    })
}

#[test]
fn numerator_variance_forms_agree() {
    for p in grid() {
        let a = var_scaled_sample_mean(&p);
        let b = var_scaled_sample_mean_limit_form(&p);
        let o = numerator_variance_oracle(&p);
        assert!(close(a, b) && close(a, o), "{p:?}: {a} {b} {o}");
    }
}

#[test]
fn numerator_variance_limit() {
    let p = Ar1Params::standard(0.5, 1_000_000).unwrap();
    assert!((var_scaled_sample_mean(&p) - 4.0).abs() < 1e-4);
    assert_eq!(long_run_variance(&p), 4.0);
}

#[test]
fn linear_form_with_uniform_weights_is_mean() {
    for p in grid().filter(|p| p.n() <= 50) {
        let w = vec![1.0 / p.n() as f64; p.n()];
        let law = linear_form_law(&p, &w).unwrap();
        let expected = var_scaled_sample_mean(&p) / p.n() as f64;
        assert!(close(law.variance, expected), "{p:?}");
    }
}

#[test]
fn covariance_terms_and_sums() {
    for p in grid() {
        let oracle = cov_oracle_all(&p);
        for (j, o) in oracle.iter().enumerate() {
            let c = cov_mean_term(&p, j + 1).unwrap();
            assert!(close(c, *o), "{p:?} j={}: {c} vs {o}", j + 1);
        }
        assert!(close(sum_cov_identity(&p), sum_cov_direct(&p)), "{p:?}");
        assert!(close(sum_cov_squared(&p), sum_cov_squared_direct(&p)), "{p:?}");
    }
}

#[test]
fn expected_s2_matches_trace() {
    for p in grid() {
        assert!(close(expected_s2(&p), s2_oracle(&p).mean), "{p:?}");
    }
    for n in NS {
        let p = Ar1Params::new(0.0, 1.3, 0.0, n).unwrap();
        assert_eq!(expected_s2(&p), 1.3 * 1.3);
    }
}

#[test]
fn fourth_order_forms_are_exact_only_without_correlation() {
    for p in grid() {
        let reports = moment_reports(&p);
        let flagged: Vec<_> = reports.iter().filter(|r| r.discrepancy).map(|r| r.quantity).collect();
        for q in &flagged {
            assert!(matches!(q, MomentQuantity::SecondMomentS2 | MomentQuantity::VarianceS2));
        }
        if p.rho() == 0.0 {
            assert!(flagged.is_empty(), "{p:?}");
        }
        for r in &reports {
            let o = r.oracle.unwrap();
            assert_eq!(r.authoritative(), if r.discrepancy { o } else { r.closed_form });
        }
    }
    let flagged_somewhere = grid()
        .filter(|p| p.rho() != 0.0)
        .any(|p| moment_reports(&p).iter().any(|r| r.discrepancy));
    assert!(flagged_somewhere);
}
