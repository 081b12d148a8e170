use proptest::prelude::*;

use vacpol::cli::{cmd_point, EvaluationMethod, RunConfig, CSV_HEADER};
use vacpol::fermi::{
    fermi_moment, fermi_weight, fermi_weighted_integral, make_fermi, sommerfeld_integrate, MomentMethod, Polynomial,
};
use vacpol::specfun::{bickley, e1, shi_chi};
use vacpol::uehling_point::{g, uehling_point, PointMethod};
use vacpol::{AccuracyControl, PhysicalConstants};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_is_positive_and_decreasing(z in 1e-4f64..25.0, step in 1e-3f64..5.0) {
        let (a, b) = (g(z).unwrap(), g(z + step).unwrap());
        prop_assert!(b > 0.0);
        prop_assert!(b < a);
    }

    #[test]
    fn bickley_recursion_holds(z in 0.01f64..20.0, n in 3u32..=10) {
        let ki = |m: u32| bickley(m, z).unwrap();
        let nf = n as f64;
        let lhs = (nf - 1.0) * ki(n);
        let rhs = (nf - 2.0) * ki(n - 2) + z * (ki(n - 3) - ki(n - 1));
        prop_assert!(rel(rhs, lhs) < 1e-10);
    }

    #[test]
    fn bickley_decreases_in_order_and_argument(z in 0.01f64..20.0, n in 1u32..=8) {
        prop_assert!(bickley(n + 1, z).unwrap() < bickley(n, z).unwrap());
        prop_assert!(bickley(n, z * 1.1).unwrap() < bickley(n, z).unwrap());
    }

    #[test]
    fn shi_minus_chi_is_minus_e1(z in 0.01f64..30.0) {
        let (shi, chi) = shi_chi(z).unwrap();
        prop_assert!(((shi - chi) - e1(z).unwrap()).abs() <= 1e-11 * shi.abs().max(chi.abs()));
    }

    #[test]
    fn point_potential_is_attractive_and_linear_in_z(cr in 1e-5f64..15.0, z_nuc in 1.0f64..120.0) {
        let k = PhysicalConstants::default();
        let r = cr / k.c;
        let one = uehling_point(r, 1.0, PointMethod::Bickley, &k).unwrap().value;
        let many = uehling_point(r, z_nuc, PointMethod::Bickley, &k).unwrap().value;
        prop_assert!(one < 0.0);
        prop_assert!(rel(many / z_nuc, one) < 1e-14);
    }

    #[test]
    fn point_routes_agree(cr in 1e-3f64..10.0) {
        let k = PhysicalConstants::default();
        let r = cr / k.c;
        let a = uehling_point(r, 1.0, PointMethod::Bickley, &k).unwrap().value;
        let b = uehling_point(r, 1.0, PointMethod::Mezo, &k).unwrap().value;
        prop_assert!(rel(b, a) < 1e-8);
    }

    #[test]
    fn fermi_weight_is_a_step(t in -700.0f64..700.0) {
        let w = fermi_weight(t);
        prop_assert!((0.0..=1.0).contains(&w));
        prop_assert!((w + fermi_weight(-t) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moments_closed_form_matches_quadrature(ratio in 3.0f64..60.0, k in 0u32..=6) {
        let d = make_fermi(1.0, 1.0, 1.0 / ratio).unwrap();
        let closed = fermi_moment(&d, k, MomentMethod::Closed).unwrap();
        let quad = fermi_moment(&d, k, MomentMethod::Quadrature).unwrap();
        prop_assert!(rel(closed, quad) < 1e-10);
    }

    #[test]
    fn development_is_exact_for_polynomials(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..=6),
        ratio in 4.0f64..40.0,
    ) {
        prop_assume!(coeffs.iter().any(|c| c.abs() > 0.1));
        let (xi, a) = (1.0, 1.0 / ratio);
        let h = Polynomial::new(coeffs);
        let ctrl = AccuracyControl::with_tol(1e-12).unwrap();
        let s = sommerfeld_integrate(&h, xi, a, 3, 40, &ctrl).unwrap();
        let o = fermi_weighted_integral(&h, xi, a, &ctrl).unwrap().value;
        let scale = fermi_weighted_integral(&Polynomial::new(vec![1.0; 6]), xi, a, &ctrl).unwrap().value;
        prop_assert!((s.value - o).abs() <= 1e-10 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_has_one_row_per_point(points in 2usize..40, lo in 1e-6f64..1e-3, span in 1.5f64..1e3) {
        let config = RunConfig {
            method: Some(EvaluationMethod::Bickley),
            points,
            r_min: lo,
            r_max: lo * span,
            ..Default::default()
        };
        let csv = cmd_point(&config).unwrap().to_csv();
        let mut lines = csv.lines();
        prop_assert_eq!(lines.next(), Some(CSV_HEADER));
        prop_assert_eq!(lines.count(), points);
    }
}
