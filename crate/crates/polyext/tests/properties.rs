//! Property-based invariants over randomized parameters.

use proptest::prelude::*;

use polyext::field::{FieldFile, FieldKind};
use polyext::kernel::{poisson_eval, KernelPoint};
use polyext::orders::{dtn_deficit, multiplier, DeficitKind};
use polyext::specfun::{bessel_k_scaled, gamma, gamma_ratio};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_recurrence_holds(nu in 0.05f64..8.0, t in 0.02f64..50.0) {
        let km = bessel_k_scaled(nu - 1.0, t).unwrap();
        let k0 = bessel_k_scaled(nu, t).unwrap();
        let kp = bessel_k_scaled(nu + 1.0, t).unwrap();
        let resid = (kp - km - 2.0 * nu / t * k0).abs();
        prop_assert!(resid < 1e-9 * kp, "nu={nu} t={t}: {resid}");
    }

    #[test]
    fn gamma_functional_equation(x in 0.1f64..40.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        let r = gamma_ratio(x + 1.0, x).unwrap();
        prop_assert!((r - x).abs() <= 1e-11 * x);
    }

    #[test]
    fn multiplier_bounded_monotone(alpha in 0.1f64..5.0, t in 0.01f64..100.0) {
        let m1 = multiplier(alpha, t).unwrap();
        let m2 = multiplier(alpha, 1.25 * t).unwrap();
        prop_assert!(m1 > 0.0 && m1 <= 1.0);
        prop_assert!(m2 < m1, "alpha={alpha} t={t}: {m1} -> {m2}");
        let d = dtn_deficit(alpha, t, DeficitKind::Dirichlet).unwrap();
        prop_assert_eq!(d, 1.0 - m1);
    }

    #[test]
    fn kernel_scaling_invariance(
        alpha in 0.2f64..3.0,
        r in 0.0f64..4.0,
        y in prop::sample::select(vec![0.2, 0.7, 1.0, 2.5])
    ) {
        let a = poisson_eval(&KernelPoint { n: 3, alpha, r, y }).unwrap() * y.powi(3);
        let b = poisson_eval(&KernelPoint { n: 3, alpha, r: r / y, y: 1.0 }).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * b);
    }

    #[test]
    fn field_file_text_round_trip(
        n in 1u32..6,
        alpha in 0.1f64..3.0,
        rows in prop::collection::vec((0.01f64..10.0, 0.0f64..5.0, -2.0f64..2.0), 1..40)
    ) {
        let file = FieldFile { kind: FieldKind::Spectral, n, alpha, b: 1.0 - 2.0 * (alpha - alpha.floor()), rows };
        let dir = std::env::temp_dir().join(format!("polyext-prop-{}", std::process::id()));
        let _ = std::fs::create_dir_all(&dir);
        let path = dir.join("f.csv");
        polyext::field::write_field_file(&file, &path).unwrap();
        let back = polyext::field::load_field(&path).unwrap();
        prop_assert_eq!(file, back);
    }
}
