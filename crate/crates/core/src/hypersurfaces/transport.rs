//! Shape operators of tubes around `P` and of the hypersurfaces equidistant to
//! the minimal orbit, via the Jacobi equation `D'' + R_perp D = 0` along the
//! normal geodesic, plus an independent route through Killing fields.
//!
//! Everything is written in a parallel orthonormal frame along the geodesic
//! `exp(t zeta0) o`, identified with the orthogonal complement of `zeta0` in `p`.
//! Since the curvature tensor is parallel, `R_perp` is constant in this frame.

use nalgebra::{DMatrix, DVector};

use super::{
    named_subalgebra, shape_by_bracket, HypersurfaceKind, ShapeOperatorReport, MODEL_TOL,
    STRUCTURE_TOL,
};
use crate::error::{Error, Result};
use crate::lie_core::{SoElement, Subspace};
use crate::linalg::{cluster_ranges, commutator_norm, sorted_eigen};
use crate::quadric::{coords, curvature, g_metric, j_apply, operator_matrix, TangentVector};
use crate::root_system::{RootLabel, RootSystem, SubalgebraName};
use crate::spectrum::Check;

/// Solution of the Jacobi equation for the tube or equidistant family at radius `r`.
#[derive(Debug, Clone)]
pub struct JacobiTransport {
    pub n: usize,
    pub kind: HypersurfaceKind,
    pub r: f64,
    /// Orthonormal frame of the orthogonal complement of `zeta0`.
    pub base_frame: Vec<TangentVector>,
    /// Unit normal of the base (`P` or the minimal orbit) at `o`.
    pub base_normal: TangentVector,
    /// Coordinates of `J zeta0` in `base_frame`.
    pub reeb_direction: DVector<f64>,
    /// `R_perp = R(., zeta0) zeta0` in `base_frame`.
    pub curvature: DMatrix<f64>,
    /// Initial values `D(0)` and `D'(0)`.
    pub d0: DMatrix<f64>,
    pub d1: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub d_prime: DMatrix<f64>,
    /// `A^r = -D'(r) D(r)^-1` with respect to the outward normal `gamma'(r)`.
    pub shape: DMatrix<f64>,
}

/// The `J zeta0` diagonal entry of `D(r)`: `sinh(2r)/2` for tubes, `cosh(2r)`
/// for equidistant hypersurfaces.
pub fn reeb_jacobi_closed_form(kind: HypersurfaceKind, r: f64) -> f64 {
    match kind {
        HypersurfaceKind::TubeOfP => 0.5 * (2.0 * r).sinh(),
        _ => (2.0 * r).cosh(),
    }
}

/// Base data: frame of `zeta0^perp`, `zeta0`, `D(0)`, `D'(0)`.
struct Base {
    frame: Vec<TangentVector>,
    normal: TangentVector,
    d0: DMatrix<f64>,
    d1: DMatrix<f64>,
}

fn base(rs: &RootSystem, kind: HypersurfaceKind) -> Result<Base> {
    match kind {
        HypersurfaceKind::TubeOfP => {
            let d = named_subalgebra(rs, SubalgebraName::D);
            let bs = shape_by_bracket(rs, &d, &super::p_normal_an(rs, 0.0))?;
            let mut frame = bs.frame;
            let k = frame.len();
            frame.push(j_apply(&bs.normal));
            // Jacobi fields of a focal submanifold: D(0) = id on T_oP, 0 on the
            // normal direction J zeta0; D'(0) = -A_P on T_oP, id on J zeta0
            let mut d0 = DMatrix::zeros(k + 1, k + 1);
            let mut d1 = DMatrix::zeros(k + 1, k + 1);
            d0.view_mut((0, 0), (k, k)).fill_with_identity();
            d1.view_mut((0, 0), (k, k)).copy_from(&(-&bs.report.matrix));
            d1[(k, k)] = 1.0;
            Ok(Base { frame, normal: bs.normal, d0, d1 })
        }
        HypersurfaceKind::Equidistant | HypersurfaceKind::Minimal => {
            let s1 = named_subalgebra(rs, SubalgebraName::S1);
            let normal = rs.root_space(RootLabel::ALPHA1).basis()[0].clone();
            let bs = shape_by_bracket(rs, &s1, &normal)?;
            let k = bs.frame.len();
            Ok(Base {
                frame: bs.frame,
                normal: bs.normal,
                d0: DMatrix::identity(k, k),
                d1: -bs.report.matrix,
            })
        }
        HypersurfaceKind::Horocyclic => Err(Error::InvalidModel(
            "the horocyclic model has no Jacobi transport description".into(),
        )),
    }
}

/// Closed-form solution of `D'' = -K D` with commuting symmetric `K`, `D(0)`,
/// `D'(0)`: on a joint eigenvector with `K = kappa <= 0`, `c = sqrt(-kappa)`,
/// `D(r) = d0 cosh(cr) + d1 sinh(cr)/c`.
fn closed_form(
    k: &DMatrix<f64>,
    d0: &DMatrix<f64>,
    d1: &DMatrix<f64>,
    r: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let comm = commutator_norm(k, d0)
        .max(commutator_norm(k, d1))
        .max(commutator_norm(d0, d1));
    if comm > STRUCTURE_TOL {
        return Err(Error::NotCommuting(comm));
    }
    let basis = joint_eigenbasis(&[k, d1, d0]);
    let m = k.nrows();
    let mut dr = DMatrix::zeros(m, m);
    let mut dpr = DMatrix::zeros(m, m);
    let mut off: f64 = 0.0;
    for q in &basis {
        let kq = k * q;
        let kappa = q.dot(&kq);
        let a = q.dot(&(d0 * q));
        let b = q.dot(&(d1 * q));
        off = off
            .max((kq - q * kappa).amax())
            .max((d0 * q - q * a).amax())
            .max((d1 * q - q * b).amax());
        let c = (-kappa).max(0.0).sqrt();
        let (val, der) = if c < 1e-12 {
            (a + b * r, b)
        } else {
            let (ch, sh) = ((c * r).cosh(), (c * r).sinh());
            (a * ch + b * sh / c, a * c * sh + b * ch)
        };
        let qq = q * q.transpose();
        dr += &qq * val;
        dpr += &qq * der;
    }
    if off > STRUCTURE_TOL {
        return Err(Error::NotCommuting(off));
    }
    Ok((dr, dpr))
}

/// Orthonormal basis diagonalizing all the given commuting symmetric
/// matrices, refining the eigenspaces of the first by the second and so on.
fn joint_eigenbasis(ops: &[&DMatrix<f64>]) -> Vec<DVector<f64>> {
    let m = ops[0].nrows();
    let mut blocks: Vec<Vec<DVector<f64>>> = vec![(0..m)
        .map(|i| DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 }))
        .collect()];
    for op in ops {
        let mut next = Vec::new();
        for block in blocks {
            let q = DMatrix::from_columns(&block);
            let restricted = q.transpose() * *op * &q;
            let (vals, vecs) = sorted_eigen(&restricted);
            for range in cluster_ranges(&vals) {
                next.push(vecs[range].iter().map(|v| &q * v).collect());
            }
        }
        blocks = next;
    }
    blocks.into_iter().flatten().collect()
}

/// Solves the Jacobi equation in closed form for a tube around `P`
/// (`TubeOfP`) or an equidistant hypersurface of the minimal orbit.
pub fn jacobi_transport(n: usize, kind: HypersurfaceKind, r: f64) -> Result<JacobiTransport> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    if !kind.needs_radius() {
        return Err(Error::InvalidModel(format!("{kind} has no radius")));
    }
    let rs = RootSystem::new(n)?;
    let b = base(&rs, kind)?;
    let zeta0 = &b.normal;
    let kmat = operator_matrix(&b.frame, |x| curvature(x, zeta0, zeta0, 0.0));
    let (d, d_prime) = closed_form(&kmat, &b.d0, &b.d1, r)?;
    let shape = solve_shape(&d, &d_prime, r)?;
    let reeb = j_apply(zeta0);
    Ok(JacobiTransport {
        n,
        kind,
        r,
        reeb_direction: coords(&b.frame, &reeb),
        base_frame: b.frame,
        base_normal: b.normal,
        curvature: kmat,
        d0: b.d0,
        d1: b.d1,
        d,
        d_prime,
        shape,
    })
}

/// `-D'(r) D(r)^-1`, or [`Error::Focal`] when `D(r)` is singular.
pub(crate) fn solve_shape(d: &DMatrix<f64>, d_prime: &DMatrix<f64>, r: f64) -> Result<DMatrix<f64>> {
    let lu = d.clone().lu();
    let det = lu.determinant();
    if !(det.abs() > 1e-12) {
        return Err(Error::Focal(r));
    }
    // A = -D' D^-1  <=>  D^T A^T = -D'^T
    let at = d
        .transpose()
        .lu()
        .solve(&(-d_prime.transpose()))
        .ok_or(Error::Focal(r))?;
    Ok(at.transpose())
}

/// Shape operator report for the tube/equidistant hypersurface at radius `r`:
/// `matrix` is `D' D^-1` (normal `-zeta0`, Hopf curvature `+alpha`) and
/// `signed_matrix` is `A^r = -D' D^-1` (normal `gamma'(r)`).
pub fn jacobi_transport_shape(n: usize, kind: HypersurfaceKind, r: f64) -> Result<ShapeOperatorReport> {
    transport_report(&jacobi_transport(n, kind, r)?)
}

pub(crate) fn transport_report(jt: &JacobiTransport) -> Result<ShapeOperatorReport> {
    let (n, kind, r) = (jt.n, jt.kind, jt.r);
    let model = super::HypersurfaceModel::new(kind, r)?;
    let alpha = model.alpha();
    let mut report = ShapeOperatorReport::new(-&jt.shape, jt.shape.clone());
    report.checks.push(Check::new(
        "signed spectrum 0 (x2), 1 (x n-2), -1 (x n-2), -alpha",
        report
            .signed_spectrum
            .residual_against(&[(0.0, 2), (1.0, n - 2), (-1.0, n - 2), (-alpha, 1)]),
        MODEL_TOL,
    ));
    let xi = &jt.reeb_direction;
    report.checks.push(Check::new(
        "D(r) on J zeta0 matches closed form",
        (xi.dot(&(&jt.d * xi)) - reeb_jacobi_closed_form(kind, r)).abs(),
        MODEL_TOL,
    ));
    let orbit = orbit_shape(n, kind, r)?;
    report.checks.push(Check::new(
        "Jacobi transport agrees with Killing fields of the cohomogeneity-one subalgebra",
        (&orbit - &jt.shape).amax(),
        MODEL_TOL,
    ));
    Ok(report)
}

/// Shape operator `A^r` of the orbit through `exp(r zeta0) o` of the
/// cohomogeneity-one subalgebra (`k_alpha1 + d` for tubes, `s1` for the
/// minimal/equidistant family, `h1` for the horocyclic one), written in the
/// same parallel frame as [`jacobi_transport`].
///
/// Each `X` gives the Killing Jacobi field `Y(t) = (Ad(exp(-t zeta0)) X)_p`,
/// `Y'(t) = -(Ad(exp(-t zeta0)) [zeta0, X])_p`, and `A^r = -Y'(r) Y(r)^-1`.
pub fn orbit_shape(n: usize, kind: HypersurfaceKind, r: f64) -> Result<DMatrix<f64>> {
    if !(r.is_finite() && r >= 0.0) || (kind == HypersurfaceKind::TubeOfP && r == 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    let rs = RootSystem::new(n)?;
    let (algebra, frame, zeta0) = match kind {
        HypersurfaceKind::TubeOfP => {
            let b = base(&rs, kind)?;
            let h = rs.k_alpha(RootLabel::ALPHA1).sum(&named_subalgebra(&rs, SubalgebraName::D));
            (h, b.frame, b.normal)
        }
        HypersurfaceKind::Equidistant | HypersurfaceKind::Minimal => {
            let b = base(&rs, kind)?;
            (named_subalgebra(&rs, SubalgebraName::S1), b.frame, b.normal)
        }
        HypersurfaceKind::Horocyclic => {
            let h1 = named_subalgebra(&rs, SubalgebraName::H1);
            let normal = crate::root_system::root_vector(n, RootLabel::ALPHA1) * 0.5;
            let bs = shape_by_bracket(&rs, &h1, &normal)?;
            (h1, bs.frame, bs.normal)
        }
    };
    killing_shape(&algebra, &frame, &zeta0, r)
}

fn killing_shape(
    algebra: &Subspace,
    frame: &[TangentVector],
    zeta0: &TangentVector,
    r: f64,
) -> Result<DMatrix<f64>> {
    let n = zeta0.n();
    let z = zeta0.element().matrix();
    let e = (z * -r).exp();
    let e_inv = (z * r).exp();
    let ad = |x: &SoElement| {
        TangentVector::project(&SoElement::from_matrix_unchecked(n, &e * x.matrix() * &e_inv))
    };
    let k = algebra.dim();
    let m = frame.len();
    let mut y = DMatrix::zeros(m, k);
    let mut yp = DMatrix::zeros(m, k);
    let mut normal_part: f64 = 0.0;
    for (j, x) in algebra.basis().iter().enumerate() {
        let yx = ad(x);
        let ypx = -&ad(&zeta0.element().br(x));
        normal_part = normal_part.max(g_metric(&yx, zeta0).abs() / yx.norm().max(1e-300));
        y.set_column(j, &coords(frame, &yx));
        yp.set_column(j, &coords(frame, &ypx));
    }
    if normal_part > 1e-8 {
        return Err(Error::NotInSubspace { space: "orbit tangent space", residual: normal_part });
    }
    if k != m {
        return Err(Error::DimensionMismatch { expected: m, found: k });
    }
    solve_shape(&y, &yp, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tube_closed_form() {
        let r = 0.5;
        let rep = jacobi_transport_shape(4, HypersurfaceKind::TubeOfP, r).unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{}: {}", c.name, c.residual);
        }
        let alpha = 2.0 / (2.0 * r).tanh();
        assert!(rep.spectrum.residual_against(&[(alpha, 1), (0.0, 2), (1.0, 2), (-1.0, 2)]) < 1e-12);
    }

    #[test]
    fn equidistant_closed_form() {
        let rep = jacobi_transport_shape(3, HypersurfaceKind::Equidistant, 0.5).unwrap();
        assert!(rep.all_pass());
        let alpha = 2.0 * 1f64.tanh();
        assert!(rep.spectrum.residual_against(&[(alpha, 1), (0.0, 2), (1.0, 1), (-1.0, 1)]) < 1e-12);
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(matches!(
            jacobi_transport(3, HypersurfaceKind::TubeOfP, -1.0),
            Err(Error::InvalidRadius(_))
        ));
        assert!(jacobi_transport(3, HypersurfaceKind::Minimal, 1.0).is_err());
    }

    #[test]
    fn orbit_route_at_base_point() {
        // at r = 0 the Killing route reproduces the bracket-projection operators
        let rs = RootSystem::new(4).unwrap();
        let h1 = named_subalgebra(&rs, SubalgebraName::H1);
        let normal = crate::root_system::root_vector(4, RootLabel::ALPHA1) * 0.5;
        let bs = shape_by_bracket(&rs, &h1, &normal).unwrap();
        let a = orbit_shape(4, HypersurfaceKind::Horocyclic, 0.0).unwrap();
        assert!((a - bs.report.matrix).amax() < 1e-12);
    }
}
