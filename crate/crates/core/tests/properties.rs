use nalgebra::DMatrix;
use proptest::prelude::*;

use quadric_lab::contact::{expected_scalar, ricci};
use quadric_lab::hypersurfaces::{build_m, HypersurfaceModel};
use quadric_lab::lie_core::SoElement;
use quadric_lab::quadric::{
    c0_apply, classify_singular, curvature, g_metric, j_apply, jacobi_closed_form, jacobi_spectrum,
    RealStructure, TangentVector,
};

const N: usize = 4;

fn entries(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn element() -> impl Strategy<Value = SoElement> {
    (entries(4), entries(N * N), entries(2 * N)).prop_map(|(a, k, b)| {
        let a = DMatrix::from_vec(2, 2, a);
        let k = DMatrix::from_vec(N, N, k);
        SoElement::new(N, &(&a - a.transpose()), &(&k - k.transpose()), &DMatrix::from_vec(2, N, b)).unwrap()
    })
}

fn tangent() -> impl Strategy<Value = TangentVector> {
    entries(2 * N).prop_map(|b| TangentVector::from_block(&DMatrix::from_vec(2, N, b)))
}

fn close(a: &TangentVector, b: &TangentVector) -> f64 {
    (a - b).amax()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_a_lie_bracket(x in element(), y in element(), z in element()) {
        let xy = x.bracket(&y).unwrap();
        prop_assert!((&xy + &y.bracket(&x).unwrap()).amax() < 1e-12);
        let jac = x.bracket(&xy.bracket(&z).unwrap()).unwrap();
        let cyc = &(&x.bracket(&y.bracket(&z).unwrap()).unwrap() + &y.bracket(&z.bracket(&x).unwrap()).unwrap())
            + &z.bracket(&x.bracket(&y).unwrap()).unwrap();
        prop_assert!(cyc.amax() < 1e-11, "{}", jac.amax());
        prop_assert!((xy.theta() - x.theta().bracket(&y.theta()).unwrap()).amax() < 1e-12);
    }

    #[test]
    fn killing_form_is_invariant(x in element(), y in element(), z in element()) {
        let lhs = x.bracket(&y).unwrap().killing(&z).unwrap();
        let rhs = x.killing(&y.bracket(&z).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
        prop_assert!(x.b_theta(&x).unwrap() >= 0.0);
    }

    #[test]
    fn complex_and_real_structures(x in tangent(), y in tangent(), phi in 0.0f64..6.3) {
        prop_assert!(close(&j_apply(&j_apply(&x)), &(-&x)) < 1e-12);
        prop_assert!((g_metric(&j_apply(&x), &j_apply(&y)) - g_metric(&x, &y)).abs() < 1e-12);
        prop_assert!(close(&c0_apply(&j_apply(&x)), &(-&j_apply(&c0_apply(&x)))) < 1e-12);
        let c = RealStructure::new(phi);
        prop_assert!(close(&c.apply(&c.apply(&x)), &x) < 1e-12);
        prop_assert!((g_metric(&c.apply(&x), &c.apply(&y)) - g_metric(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn curvature_symmetries(x in tangent(), y in tangent(), z in tangent(), w in tangent()) {
        let r = |a: &TangentVector, b: &TangentVector, c: &TangentVector| curvature(a, b, c, 0.0);
        prop_assert!(close(&r(&x, &y, &z), &(-&r(&y, &x, &z))) < 1e-12);
        let bianchi = &(&r(&x, &y, &z) + &r(&y, &z, &x)) + &r(&z, &x, &y);
        prop_assert!(bianchi.amax() < 1e-12);
        let a = g_metric(&r(&x, &y, &z), &w);
        let b = g_metric(&r(&z, &w, &x), &y);
        prop_assert!((a - b).abs() < 1e-11);
        // sectional curvature lies in [-4, 0] after normalisation
        let k = g_metric(&r(&x, &y, &y), &x);
        let den = g_metric(&x, &x) * g_metric(&y, &y) - g_metric(&x, &y).powi(2);
        if den > 1e-6 {
            prop_assert!(k / den <= 1e-12 && k / den >= -4.0 - 1e-9);
        }
        // independent of the real structure chosen in the circle
        prop_assert!(close(&curvature(&x, &y, &z, 0.0), &curvature(&x, &y, &z, 1.3)) < 1e-12);
    }

    #[test]
    fn jacobi_spectrum_of_any_unit_vector(v in tangent()) {
        prop_assume!(v.norm() > 1e-3);
        let v = v.normalized();
        let class = classify_singular(&v).unwrap();
        let rep = jacobi_spectrum(&v).unwrap();
        prop_assert!(rep.residual_against(&jacobi_closed_form(N, class.t)) < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_alpha_gives_a_hopf_hypersurface(alpha in prop_oneof![Just(0.0), 0.01f64..8.0], n in 3usize..6) {
        let model = HypersurfaceModel::from_alpha(alpha).unwrap();
        prop_assert!((model.alpha() - alpha).abs() < 1e-9 * (1.0 + alpha));
        let h = build_m(n, model).unwrap();
        for c in &h.shape.checks {
            prop_assert!(c.pass, "{}: {} {}", model.label(), c.name, c.residual);
        }
        let r = ricci(model, n).unwrap();
        prop_assert!((r.scalar - expected_scalar(n)).abs() < 1e-9);
        prop_assert!(r.all_pass());
    }
}
