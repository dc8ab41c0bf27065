//! Assembly of `M_alpha` at the base point: adapted tangent frame, almost
//! contact data and the checks shared by all members of the family.

use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use super::transport::{jacobi_transport, transport_report};
use super::{
    named_subalgebra, shape_by_bracket, HypersurfaceKind, HypersurfaceModel, ShapeOperatorReport,
    MODEL_TOL, STRUCTURE_TOL,
};
use crate::error::{Error, Result};
use crate::lie_core::Subspace;
use crate::linalg::{commutator_norm, complement_columns, sorted_eigen};
use crate::quadric::{
    c0_apply, classify_singular, coords, curvature, from_coords, g_metric, j_apply, leakage,
    operator_matrix, RealStructure, SingularityClass, TangentVector,
};
use crate::root_system::{root_vector, RootLabel, RootSystem, SubalgebraName};
use crate::spectrum::Check;

/// Index ranges of the blocks of an adapted frame, in frame order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameBlocks {
    /// `C zeta, J C zeta`: the complex line `C ⊖ Q`.
    pub cq: Range<usize>,
    pub t1: Range<usize>,
    pub t_minus1: Range<usize>,
    pub xi: usize,
}

impl FrameBlocks {
    fn new(n: usize) -> Self {
        Self {
            cq: 0..2,
            t1: 2..n,
            t_minus1: n..2 * n - 2,
            xi: 2 * n - 2,
        }
    }

    /// Range of the maximal complex subbundle `C = ker eta`.
    pub fn contact(&self) -> Range<usize> {
        0..self.xi
    }

    /// Range of `Q`.
    pub fn q(&self) -> Range<usize> {
        self.t1.start..self.t_minus1.end
    }
}

/// Orthonormal tangent frame of `M_alpha` at the base point, ordered
/// `(C ⊖ Q, T_1, T_-1, xi)`, together with the almost contact data.
#[derive(Debug, Clone)]
pub struct HypersurfaceFrame {
    pub n: usize,
    pub tangent_basis: Vec<TangentVector>,
    /// Unit normal with Hopf curvature `+alpha`.
    pub normal: TangentVector,
    /// `xi = -J zeta`.
    pub reeb: TangentVector,
    /// Tangential part of `J` in `tangent_basis`.
    pub structure_phi: DMatrix<f64>,
    pub contact: Subspace,
    pub q: Subspace,
    pub complex_c_zeta: Subspace,
    pub blocks: FrameBlocks,
}

impl HypersurfaceFrame {
    /// `eta = g(., xi)` in the frame.
    pub fn eta(&self) -> DVector<f64> {
        coords(&self.tangent_basis, &self.reeb)
    }

    fn block(&self, r: Range<usize>) -> Subspace {
        Subspace::span(self.n, self.tangent_basis[r].iter().map(|e| e.element().clone()))
    }

    pub fn t1(&self) -> Subspace {
        self.block(self.blocks.t1.clone())
    }

    pub fn t_minus1(&self) -> Subspace {
        self.block(self.blocks.t_minus1.clone())
    }
}

/// `M_alpha` at the base point.
#[derive(Debug, Clone)]
pub struct Hypersurface {
    pub model: HypersurfaceModel,
    pub frame: HypersurfaceFrame,
    /// Shape operator in the adapted frame; `checks` holds (a)-(h) and the
    /// model-specific eigenspace identities.
    pub shape: ShapeOperatorReport,
    /// `K = R(., zeta) zeta` compressed to the adapted frame.
    pub normal_jacobi: DMatrix<f64>,
    /// Angle of the real structure `C` with `T_1 ⊂ V(C)`.
    pub aligned_phi: f64,
    pub normal_class: SingularityClass,
}

impl Hypersurface {
    pub fn alpha(&self) -> f64 {
        self.model.alpha()
    }

    pub fn n(&self) -> usize {
        self.frame.n
    }
}

/// Raw output of the two computational routes, before reframing.
struct Raw {
    frame: Vec<TangentVector>,
    normal: TangentVector,
    report: ShapeOperatorReport,
}

fn raw_shape(n: usize, model: &HypersurfaceModel) -> Result<Raw> {
    let rs = RootSystem::new(n)?;
    match model.kind {
        HypersurfaceKind::Minimal => {
            let s1 = named_subalgebra(&rs, SubalgebraName::S1);
            let normal = rs.root_space(RootLabel::ALPHA1).basis()[0].clone();
            let bs = shape_by_bracket(&rs, &s1, &normal)?;
            Ok(Raw { frame: bs.frame, normal: bs.normal, report: bs.report })
        }
        HypersurfaceKind::Horocyclic => {
            let h1 = named_subalgebra(&rs, SubalgebraName::H1);
            let normal = root_vector(n, RootLabel::ALPHA1) * 0.5;
            let bs = shape_by_bracket(&rs, &h1, &normal)?;
            Ok(Raw { frame: bs.frame, normal: bs.normal, report: bs.report })
        }
        HypersurfaceKind::TubeOfP | HypersurfaceKind::Equidistant => {
            let jt = jacobi_transport(n, model.kind, model.r)?;
            let report = transport_report(&jt)?;
            // reported orientation: normal -zeta0
            Ok(Raw { frame: jt.base_frame, normal: -&jt.base_normal, report })
        }
    }
}

/// Builds `M_alpha` for `model` and evaluates the Hopf-family checks:
/// (a) `A xi = alpha xi`, (b) `A phi + phi A = 0`, (c) integrability of `C`,
/// (d) curvature adaptedness, (e) `tr A = alpha`, (f) isotropic normal,
/// (g) `J T_1 = T_-1`, (h) `T_1 ⊂ V(C)`, `T_-1 ⊂ JV(C)` for the aligned `C`.
pub fn build_m(n: usize, model: HypersurfaceModel) -> Result<Hypersurface> {
    if model.kind.needs_radius() && !(model.r.is_finite() && model.r > 0.0) {
        return Err(Error::InvalidRadius(model.r));
    }
    let raw = raw_shape(n, &model)?;
    let alpha = model.alpha();
    let zeta = raw.normal;
    let dim = raw.frame.len();
    if dim != 2 * n - 1 {
        return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: dim });
    }

    let xi = -&j_apply(&zeta);
    let xi_c = coords(&raw.frame, &xi);
    let c_zeta = c0_apply(&zeta);
    let jc_zeta = j_apply(&c_zeta);
    let cz_c = coords(&raw.frame, &c_zeta);
    let jcz_c = coords(&raw.frame, &jc_zeta);
    let tangency = (1.0 - xi_c.norm()).abs().max((1.0 - cz_c.norm()).abs()).max((1.0 - jcz_c.norm()).abs());
    if tangency > 1e-8 {
        return Err(Error::NotTangent(tangency));
    }

    // Q = C ⊖ C C zeta, split by the sign of A
    let q_cols = complement_columns(&[cz_c.clone(), jcz_c.clone(), xi_c.clone()], dim);
    let qm = DMatrix::from_columns(&q_cols);
    let a_raw = &raw.report.matrix;
    let (vals, vecs) = sorted_eigen(&(qm.transpose() * a_raw * &qm));
    let mut cols = vec![cz_c, jcz_c];
    cols.extend(vecs.iter().take(vals.len()).map(|v| &qm * v));
    cols.push(xi_c);
    let p = DMatrix::from_columns(&cols);
    let frame: Vec<TangentVector> = cols.iter().map(|c| from_coords(&raw.frame, c)).collect();
    let blocks = FrameBlocks::new(n);

    let a = p.transpose() * a_raw * &p;
    let a_signed = p.transpose() * &raw.report.signed_matrix * &p;
    let mut shape = ShapeOperatorReport::new(a.clone(), a_signed);
    shape.checks = raw.report.checks;
    let checks = &mut shape.checks;

    let orthonormal = (p.transpose() * &p - DMatrix::identity(dim, dim)).amax();
    checks.push(Check::new("adapted frame orthonormal", orthonormal, STRUCTURE_TOL));
    let q_leak = {
        let q = blocks.q();
        let mut m = a.clone();
        m.view_mut((q.start, q.start), (q.len(), q.len())).fill(0.0);
        m.rows(q.start, q.len()).amax().max(m.columns(q.start, q.len()).amax())
    };
    checks.push(Check::new("A preserves Q", q_leak, MODEL_TOL));
    checks.push(Check::new(
        "principal curvatures alpha (x1), 0 (x2), 1 (x n-2), -1 (x n-2)",
        shape.spectrum.residual_against(&model.expected_spectrum(n)),
        MODEL_TOL,
    ));
    let mut diag = DVector::zeros(dim);
    for i in blocks.t1.clone() {
        diag[i] = 1.0;
    }
    for i in blocks.t_minus1.clone() {
        diag[i] = -1.0;
    }
    diag[blocks.xi] = alpha;
    checks.push(Check::new(
        "A = diag(0, 0, 1, .., -1, .., alpha) in the adapted frame",
        (&a - DMatrix::from_diagonal(&diag)).amax(),
        MODEL_TOL,
    ));

    // (a) Hopf
    let e_xi = DVector::from_fn(dim, |i, _| if i == blocks.xi { 1.0 } else { 0.0 });
    checks.push(Check::new("(a) Hopf: A xi = alpha xi", (&a * &e_xi - &e_xi * alpha).amax(), MODEL_TOL));

    // (b), (c)
    let phi = operator_matrix(&frame, j_apply);
    let anti = &a * &phi + &phi * &a;
    checks.push(Check::new("(b) A phi + phi A = 0", anti.amax(), MODEL_TOL));
    let c = blocks.contact();
    checks.push(Check::new(
        "(c) integrability: g((A phi + phi A) X, Y) = 0 on C",
        anti.view((c.start, c.start), (c.len(), c.len())).amax(),
        MODEL_TOL,
    ));

    // (d)
    let k_op = |v: &TangentVector| curvature(v, &zeta, &zeta, 0.0);
    let kmat = operator_matrix(&frame, k_op);
    checks.push(Check::new(
        "(d) curvature-adapted: K preserves the tangent space",
        leakage(&frame, k_op),
        MODEL_TOL,
    ));
    checks.push(Check::new("(d) curvature-adapted: [K, A] = 0", commutator_norm(&kmat, &a), MODEL_TOL));

    // (e)
    checks.push(Check::new("(e) mean curvature: tr A = alpha", (a.trace() - alpha).abs(), MODEL_TOL));

    // (f) g(C zeta, zeta) = 0 for every C in the circle
    let isotropy = g_metric(&c0_apply(&zeta), &zeta).hypot(g_metric(&j_apply(&c0_apply(&zeta)), &zeta));
    checks.push(Check::new("(f) normal is A-isotropic", isotropy, MODEL_TOL));
    let normal_class = classify_singular(&zeta)?;

    // (g)
    let t1 = frame_span(n, &frame, blocks.t1.clone());
    let tm1 = frame_span(n, &frame, blocks.t_minus1.clone());
    let jt1 = t1.map(|x| j_apply(&TangentVector::project(x)).into_element());
    checks.push(Check::new("(g) J T1 = T-1", jt1.span_distance(&tm1), MODEL_TOL));

    // (h) the real structure maximizing g(C x, x) on T1
    let (mut sc, mut ss) = (0.0, 0.0);
    for e in &frame[blocks.t1.clone()] {
        let ce = c0_apply(e);
        sc += g_metric(&ce, e);
        ss += g_metric(&j_apply(&ce), e);
    }
    let aligned_phi = ss.atan2(sc).rem_euclid(2.0 * std::f64::consts::PI);
    let aligned = RealStructure::new(aligned_phi);
    checks.push(Check::new(
        "(h) T1 in V(C) for the aligned real structure",
        aligned.v_space(n).inclusion_residual(&t1),
        MODEL_TOL,
    ));
    checks.push(Check::new(
        "(h) T-1 in JV(C) for the aligned real structure",
        aligned.jv_space(n).inclusion_residual(&tm1),
        MODEL_TOL,
    ));

    let rs = RootSystem::new(n)?;
    checks.extend(model_checks(&rs, model.kind, &t1, &tm1, aligned_phi));

    let contact = frame_span(n, &frame, blocks.contact());
    let q = frame_span(n, &frame, blocks.q());
    let complex_c_zeta = frame_span(n, &frame, blocks.cq.clone());
    Ok(Hypersurface {
        model,
        frame: HypersurfaceFrame {
            n,
            tangent_basis: frame,
            normal: zeta,
            reeb: xi,
            structure_phi: phi,
            contact,
            q,
            complex_c_zeta,
            blocks,
        },
        shape,
        normal_jacobi: kmat,
        aligned_phi,
        normal_class,
    })
}

fn frame_span(n: usize, frame: &[TangentVector], r: Range<usize>) -> Subspace {
    Subspace::span(n, frame[r].iter().map(|e| e.element().clone()))
}

/// Eigenspace identities that hold in the `p`-picture of the orbit models.
fn model_checks(
    rs: &RootSystem,
    kind: HypersurfaceKind,
    t1: &Subspace,
    tm1: &Subspace,
    aligned_phi: f64,
) -> Vec<Check> {
    use RootLabel as R;
    let angle = |target: f64| {
        let d = (aligned_phi - target).rem_euclid(2.0 * std::f64::consts::PI);
        d.min(2.0 * std::f64::consts::PI - d)
    };
    let twist = |l: RootLabel, sign: f64| {
        rs.p_alpha(l).map(|x| {
            let tv = TangentVector::project(x);
            (&tv + &(&j_apply(&tv) * sign)).into_element()
        })
    };
    match kind {
        HypersurfaceKind::Horocyclic => vec![
            Check::new("T1 = p_(alpha1+alpha2)", t1.span_distance(&rs.p_alpha(R::ALPHA1_PLUS_ALPHA2)), MODEL_TOL),
            Check::new("T-1 = p_alpha2", tm1.span_distance(&rs.p_alpha(R::ALPHA2)), MODEL_TOL),
            Check::new("aligned real structure is C0", angle(0.0), MODEL_TOL),
        ],
        HypersurfaceKind::Minimal => vec![
            Check::new("T1 = {X - JX : X in p_alpha2}", t1.span_distance(&twist(R::ALPHA2, -1.0)), MODEL_TOL),
            Check::new(
                "T1 = {X + JX : X in p_(alpha1+alpha2)}",
                t1.span_distance(&twist(R::ALPHA1_PLUS_ALPHA2, 1.0)),
                MODEL_TOL,
            ),
            Check::new("T-1 = {X + JX : X in p_alpha2}", tm1.span_distance(&twist(R::ALPHA2, 1.0)), MODEL_TOL),
            Check::new(
                "T-1 = {X - JX : X in p_(alpha1+alpha2)}",
                tm1.span_distance(&twist(R::ALPHA1_PLUS_ALPHA2, -1.0)),
                MODEL_TOL,
            ),
            Check::new("aligned real structure is JC0", angle(FRAC_PI_2), MODEL_TOL),
        ],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all(h: &Hypersurface) {
        for c in &h.shape.checks {
            assert!(c.pass, "{}: {} residual {}", h.model.label(), c.name, c.residual);
        }
    }

    #[test]
    fn all_models_pass() {
        for n in [3, 4, 5] {
            for model in [
                HypersurfaceModel::minimal(),
                HypersurfaceModel::horocyclic(),
                HypersurfaceModel::tube(0.5).unwrap(),
                HypersurfaceModel::equidistant(0.25).unwrap(),
            ] {
                let h = build_m(n, model).unwrap();
                assert_all(&h);
                assert_eq!(h.frame.tangent_basis.len(), 2 * n - 1);
            }
        }
    }

    #[test]
    fn minimal_structure() {
        let h = build_m(4, HypersurfaceModel::minimal()).unwrap();
        assert!(h.shape.check("T1 = {X - JX : X in p_alpha2}").unwrap().pass);
        assert!((h.aligned_phi - FRAC_PI_2).abs() < 1e-9);
        assert_eq!(h.frame.q.dim(), 4);
        assert_eq!(h.frame.complex_c_zeta.dim(), 2);
        assert_eq!(h.frame.contact.dim(), 6);
    }

    #[test]
    fn tube_hopf_curvature() {
        let h = build_m(3, HypersurfaceModel::tube(0.5).unwrap()).unwrap();
        let a = h.shape.matrix[(h.frame.blocks.xi, h.frame.blocks.xi)];
        assert!((a - 2.0 / 1f64.tanh()).abs() < 1e-12);
        assert!(h.shape.signed_matrix[(h.frame.blocks.xi, h.frame.blocks.xi)] < 0.0);
    }
}
