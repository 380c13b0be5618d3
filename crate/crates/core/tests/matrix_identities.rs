use ar1_tstat::process::{build_a_inverse, build_covariance, build_l, build_m, build_n_perturbation, build_omega};
use ar1_tstat::{Ar1Params, DenseMatrix};
use proptest::prelude::*;

const NS: [usize; 6] = [2, 3, 5, 10, 50, 200];
const RHOS: [f64; 6] = [-0.99, -0.5, 0.0, 0.5, 0.9, 0.99];

fn scale(m: &DenseMatrix) -> f64 {
    m.entries().iter().fold(1.0f64, |a, v| a.max(v.abs()))
}

fn check(p: &Ar1Params) {
    let n = p.n();
    let omega = build_omega(p);
    let m = build_m(p);
    let l = build_l(p);
    let a = build_a_inverse(p);
    let eye = DenseMatrix::identity(n);

    assert!(m.is_lower_triangular());
    assert!(l.is_lower_triangular());
    let g = m.matmul(&m.transpose()).unwrap().max_abs_diff(&omega).unwrap();
    assert!(g <= 1e-12 * scale(&omega), "M M^T at {p:?}: {g:e}");
    let g = l.transpose().matmul(&l).unwrap().max_abs_diff(&a).unwrap();
    assert!(g <= 1e-12 * scale(&a), "L^T L at {p:?}: {g:e}");
    let g = a.matmul(&omega).unwrap().max_abs_diff(&eye).unwrap();
    assert!(g <= 1e-10, "A Omega at {p:?}: {g:e}");
    let g = l
        .matmul(&omega)
        .unwrap()
        .matmul(&l.transpose())
        .unwrap()
        .max_abs_diff(&eye)
        .unwrap();
    assert!(g <= 1e-10, "L Omega L^T at {p:?}: {g:e}");
}

#[test]
fn identities_hold_across_grid() {
    for n in NS {
        for rho in RHOS {
            check(&Ar1Params::standard(rho, n).unwrap());
        }
    }
}

#[test]
fn perturbation_reconstructs_factor() {
    let p = Ar1Params::standard(0.7, 12).unwrap();
    let m = build_m(&p);
    let n = build_n_perturbation(&p);
    let sum = DenseMatrix::from_fn(12, |i, j| n[(i, j)] + if i == j { 1.0 } else { 0.0 });
    assert_eq!(sum.max_abs_diff(&m).unwrap(), 0.0);
}

#[test]
fn factor_agrees_with_generic_cholesky() {
    for rho in RHOS {
        let p = Ar1Params::standard(rho, 30).unwrap();
        let generic = build_omega(&p).cholesky().unwrap();
        let g = generic.max_abs_diff(&build_m(&p)).unwrap();
        assert!(g <= 1e-11 * scale(&generic), "rho {rho}: {g:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identities_hold_for_random_parameters(n in 2usize..60, rho in -0.995f64..0.995) {
        check(&Ar1Params::standard(rho, n).unwrap());
    }

    #[test]
    fn covariance_is_symmetric_toeplitz_and_positive(
        n in 2usize..40, rho in -0.99f64..0.99, sigma in 0.1f64..10.0,
    ) {
        let p = Ar1Params::new(0.0, sigma, rho, n).unwrap();
        let s = build_covariance(&p);
        prop_assert!(s.is_symmetric(0.0));
        for i in 1..n {
            for j in 1..n {
                prop_assert_eq!(s[(i, j)], s[(i - 1, j - 1)]);
            }
        }
        prop_assert!(s.is_positive_definite());
    }
}
