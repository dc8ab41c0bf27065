//! Values frozen from an independent numpy implementation of the same
//! constructions (separate matrix model, Killing-field route for tubes and
//! equidistant hypersurfaces) and from direct evaluation of the closed forms.

use quadric_lab::contact::{ricci, scalar_curvature};
use quadric_lab::hypersurfaces::{
    build_m, jacobi_transport, jacobi_transport_shape, orbit_shape, HypersurfaceKind, HypersurfaceModel,
};
use quadric_lab::quadric::{classify_singular, jacobi_spectrum, singular_vector, SingularityKind};
use quadric_lab::root_system::{root_vector, RootLabel, RootSystem};

const TANH_1_TIMES_2: f64 = 1.5231883119115297;
const COTH_1_TIMES_2: f64 = 2.626070570998663;
const COTH_HALF_TIMES_2: f64 = 4.327906827477306;
const QUARTER_LN_3: f64 = 0.27465307216702745;
const HALF_SINH_1: f64 = 0.5876005968219007;
const COSH_1: f64 = 1.5430806348152437;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() < tol, "{a} vs {b}");
}

#[test]
fn hopf_curvatures() {
    close(HypersurfaceModel::equidistant(0.5).unwrap().alpha(), TANH_1_TIMES_2, 1e-15);
    close(HypersurfaceModel::tube(0.5).unwrap().alpha(), COTH_1_TIMES_2, 1e-15);
    close(HypersurfaceModel::tube(0.25).unwrap().alpha(), COTH_HALF_TIMES_2, 1e-14);
    close(HypersurfaceModel::from_alpha(4.0).unwrap().r, QUARTER_LN_3, 1e-15);
    for (kind, r, alpha) in [
        (HypersurfaceKind::TubeOfP, 0.25, COTH_HALF_TIMES_2),
        (HypersurfaceKind::TubeOfP, 0.5, COTH_1_TIMES_2),
        (HypersurfaceKind::Equidistant, 0.5, TANH_1_TIMES_2),
    ] {
        let h = build_m(4, HypersurfaceModel::new(kind, r).unwrap()).unwrap();
        let b = h.frame.blocks.xi;
        close(h.shape.matrix[(b, b)], alpha, 1e-12);
    }
}

#[test]
fn tube_limits() {
    let mut prev = f64::INFINITY;
    for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let a = HypersurfaceModel::tube(r).unwrap().alpha();
        assert!(a < prev && a > 2.0);
        prev = a;
    }
    // tanh(20) rounds to 1
    close(HypersurfaceModel::tube(10.0).unwrap().alpha(), 2.0, 1e-8);
    close(HypersurfaceModel::equidistant(10.0).unwrap().alpha(), 2.0, 1e-8);
    assert!(HypersurfaceModel::equidistant(1e-6).unwrap().alpha() < 1e-5);
}

#[test]
fn jacobi_closed_form_entries() {
    let tube = jacobi_transport(3, HypersurfaceKind::TubeOfP, 0.5).unwrap();
    let xi = &tube.reeb_direction;
    close(xi.dot(&(&tube.d * xi)), HALF_SINH_1, 1e-14);
    let eq = jacobi_transport(3, HypersurfaceKind::Equidistant, 0.5).unwrap();
    let xi = &eq.reeb_direction;
    close(xi.dot(&(&eq.d * xi)), COSH_1, 1e-14);
}

#[test]
fn killing_route_signed_spectra() {
    // signed (outward) spectra from the numpy Killing-field computation, n = 4
    let frozen: [(HypersurfaceKind, f64, f64); 3] = [
        (HypersurfaceKind::TubeOfP, 0.5, -2.626070570998663),
        (HypersurfaceKind::TubeOfP, 1.0, -2.0746294414550963),
        (HypersurfaceKind::Equidistant, 0.5, -1.5231883119115297),
    ];
    for (kind, r, reeb) in frozen {
        let a = orbit_shape(4, kind, r).unwrap();
        let s = quadric_lab::spectrum::SpectrumReport::from_symmetric(&((&a + a.transpose()) * 0.5));
        let expected = [(1.0, 2), (0.0, 2), (-1.0, 2), (reeb, 1)];
        assert!(s.residual_against(&expected) < 1e-12, "{kind} {r}: {:?}", s.pattern());
        let rep = jacobi_transport_shape(4, kind, r).unwrap();
        assert!(rep.signed_spectrum.residual_against(&expected) < 1e-12);
    }
}

#[test]
fn regular_singular_vector() {
    let v = singular_vector(5, 0.3, 0, 2);
    let c = classify_singular(&v).unwrap();
    assert_eq!(c.kind, SingularityKind::Regular);
    close(c.t, 0.3, 1e-6);
    let rep = jacobi_spectrum(&v).unwrap();
    assert!(rep.cluster_near(-0.17466438509032167, 1e-10).is_some());
}

#[test]
fn scalar_curvature_values() {
    close(scalar_curvature(HypersurfaceModel::minimal(), 3).unwrap(), -26.0, 1e-10);
    close(scalar_curvature(HypersurfaceModel::minimal(), 4).unwrap(), -52.0, 1e-10);
    close(scalar_curvature(HypersurfaceModel::horocyclic(), 4).unwrap(), -52.0, 1e-10);
    let r = ricci(HypersurfaceModel::minimal(), 4).unwrap();
    assert_eq!(r.eigenvalues().len(), 2);
    close(r.eigenvalues()[0].0, -4.0, 1e-12);
    assert_eq!(r.eigenvalues()[1].1, 6);
}

#[test]
fn root_data() {
    for n in [3, 4, 7] {
        let rs = RootSystem::new(n).unwrap();
        assert_eq!(rs.root(RootLabel::ALPHA1).multiplicity, 1);
        assert_eq!(rs.root(RootLabel::ALPHA2).multiplicity, n - 2);
        assert_eq!(rs.root(RootLabel::ALPHA1_PLUS_ALPHA2).multiplicity, n - 2);
        assert_eq!(rs.root(RootLabel::ALPHA1_PLUS_2ALPHA2).multiplicity, 1);
        let h = root_vector(n, RootLabel::ALPHA1);
        close(rs.an_metric(&h, &h).unwrap(), 4.0, 1e-14);
    }
    assert!(RootSystem::new(2).is_err());
}
