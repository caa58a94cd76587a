use approx::assert_relative_eq;
use proptest::prelude::*;
use structhol::area::RegionSpec;
use structhol::contour::ContourSpec;
use structhol::theorems::{self as th, SamplePoints, StructuralVariant, TransformKind};
use structhol::{parse, Complex, Expr};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn e(s: &str) -> Expr {
    parse(s).unwrap()
}

fn grid(n: usize) -> SamplePoints {
    RegionSpec::rect(c(-1.0, -1.0), c(1.0, 1.0))
        .with_resolution(n, n)
        .into()
}

const ENTIRE_PHIS: [&str; 8] = [
    "1",
    "2+i",
    "z",
    "sin(z)",
    "exp(2*z)",
    "z^3 - i*z",
    "cos(z)*z",
    "-3.5",
];
const ANY_KS: [&str; 8] = [
    "conj(z)",
    "z",
    "1 + z*sin(conj(z))",
    "conj(z)^2",
    "0",
    "exp(conj(z))*z",
    "cos(z*conj(z))",
    "sqrt(conj(z) + 3)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn constructed_solutions_satisfy_the_condition(phi in 0usize..8, k in 0usize..8) {
        let k = e(ANY_KS[k]);
        let w = th::build_structural_solution(&e(ENTIRE_PHIS[phi]), &k);
        let r = th::structural_residual(&w, &k, &grid(12), StructuralVariant::ReducedForm, 1e-10).unwrap();
        prop_assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn variants_coincide_when_k_is_one(phi in 0usize..8, k in 0usize..8) {
        // any w, including ones that do not solve the condition
        let w = th::build_structural_solution(&e(ENTIRE_PHIS[phi]), &e(ANY_KS[k]));
        let one = e("1");
        let reduced = th::structural_residual(&w, &one, &grid(8), StructuralVariant::ReducedForm, 1e-10).unwrap();
        let strong = th::structural_residual(&w, &one, &grid(8), StructuralVariant::StrongForm, 1e-10).unwrap();
        prop_assert_eq!(reduced.metrics, strong.metrics);
    }
}

#[test]
fn exponential_transform_always_closes() {
    let unit = ContourSpec::circle(c(0.0, 0.0), 1.0);
    let mut largest_mul_k = 0.0f64;
    for k in [
        "conj(z)",
        "1 + z*sin(conj(z))",
        "conj(z)^2",
        "exp(conj(z))*z",
    ] {
        let k = e(k);
        for phi in ["1", "2+i", "z", "sin(z)"] {
            let w = th::build_structural_solution(&e(phi), &k);
            let r = th::generalized_cauchy_check(&w, &k, &unit, TransformKind::MulExpK, 256, 1e-8)
                .unwrap();
            assert!(r.pass, "{}", r.to_json());
            largest_mul_k = largest_mul_k.max(r.complex("integral_mul_k").unwrap().norm());
        }
    }
    assert!(largest_mul_k > 1.0);
}

#[test]
fn integral_formula_matches_jets_and_differences() {
    let center = c(0.0, 0.0);
    for w in ["exp(z)", "sin(z)*z", "1/(z - 2)", "sqrt(z + 3)"] {
        let f = e(w);
        for z in [c(0.3, 0.1), c(-0.2, 0.4)] {
            let d1 = th::cauchy_eval(&f, center, 1.0, z, 1, 256).unwrap();
            assert!(
                (d1 - f.eval_jet(z).unwrap().dz).norm() <= 1e-6,
                "{w} at {z}"
            );
            let h = 1e-4;
            for k in 1..=3 {
                let lower = |p: Complex| th::cauchy_eval(&f, center, 1.0, p, k - 1, 256).unwrap();
                let fd = (lower(z + h) - lower(z - h)) / (2.0 * h);
                let direct = th::cauchy_eval(&f, center, 1.0, z, k, 256).unwrap();
                assert!((fd - direct).norm() <= 1e-6, "{w} at {z}, k = {k}");
            }
        }
    }
}

#[test]
fn taylor_coefficients_obey_the_liouville_bound() {
    let f = e("sin(z)");
    for r in [1.0, 2.0, 3.0, 4.0] {
        let m = th::cauchy_estimate_check(&f, c(0.0, 0.0), r, 0, 256, 1e-9)
            .unwrap()
            .real("M")
            .unwrap();
        let a = th::taylor_coefficients(&f, r, 12, 256).unwrap();
        for (k, ak) in a.iter().enumerate() {
            assert!(
                ak.norm() <= m / r.powi(k as i32) + 1e-12,
                "r = {r}, k = {k}"
            );
        }
        assert_relative_eq!(a[1].re, 1.0, max_relative = 1e-10);
        assert_relative_eq!(a[3].re, -1.0 / 6.0, max_relative = 1e-10);
    }
}

#[test]
fn structural_maximum_follows_the_real_part_of_k() {
    // |w| = e^(−Re K): the maximum sits where Re K is smallest
    let disc = RegionSpec::disc(c(0.0, 0.0), 1.0).with_resolution(64, 256);
    let m = th::max_modulus_scan(&e("exp(-conj(z))"), &disc).unwrap();
    assert!((m.argmax - c(-1.0, 0.0)).norm() < 1e-12);
    let m = th::max_modulus_scan(&e("exp(-(i*conj(z)))"), &disc).unwrap();
    // Re(i·z̄) = y, so the maximum is at the bottom of the disc
    assert!((m.argmax - c(0.0, -1.0)).norm() < 1e-12);
    assert_relative_eq!(m.max_value, 1f64.exp(), max_relative = 1e-12);
}

#[test]
fn pole_bearing_k_skips_grid_points_only() {
    // e^z/z has a pole at the origin, which is on the 33×33 grid
    let k = e("exp(z)/z");
    let w = th::build_structural_solution(&e("1"), &k);
    let r =
        th::structural_residual(&w, &k, &grid(33), StructuralVariant::ReducedForm, 1e-10).unwrap();
    assert_eq!(r.n_skipped, 1);
    assert!(r.pass);
    let unit = ContourSpec::circle(c(0.0, 0.0), 1.0);
    let g = th::generalized_cauchy_check(&w, &k, &unit, TransformKind::MulExpK, 256, 1e-8).unwrap();
    assert!(g.pass);
    // line integrals never skip
    let through_pole = ContourSpec::circle(c(1.0, 0.0), 1.0);
    assert!(
        th::generalized_cauchy_check(&w, &k, &through_pole, TransformKind::None, 256, 1e-8)
            .is_err()
    );
}
