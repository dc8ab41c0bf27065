//! The homogeneous complex hypersurface `P` and the one-parameter family of
//! homogeneous Hopf hypersurfaces `M_alpha`: tubes around `P` (`alpha > 2`),
//! the minimal orbit (`alpha = 0`), its equidistant hypersurfaces
//! (`0 < alpha < 2`) and the horocyclic orbit (`alpha = 2`).
//!
//! Shape operators of orbits of subalgebras of `a + n` are computed by
//! projecting brackets with the normal; tubes and equidistant hypersurfaces
//! by solving the Jacobi equation along the normal geodesic.

mod assemble;
mod transport;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{orthonormalize, SoElement, Subspace};
use crate::linalg::asymmetry;
use crate::quadric::{
    curvature, g_metric, j_apply, leakage, operator_matrix, RealStructure, TangentVector,
};
use crate::root_system::{named_subalgebra, root_vector, RootLabel, RootSystem, SubalgebraName};
use crate::spectrum::{Check, Cluster, SpectrumReport};

pub use assemble::{build_m, FrameBlocks, Hypersurface, HypersurfaceFrame};
pub(crate) use transport::solve_shape;
pub use transport::{
    jacobi_transport, jacobi_transport_shape, orbit_shape, reeb_jacobi_closed_form, JacobiTransport,
};

/// Tolerance on structural residuals (symmetry, isometry, inclusions).
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tolerance on model residuals (spectra, Hopf identities).
pub const MODEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HypersurfaceKind {
    TubeOfP,
    Minimal,
    Equidistant,
    Horocyclic,
}

impl HypersurfaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TubeOfP => "tube",
            Self::Minimal => "minimal",
            Self::Equidistant => "equidistant",
            Self::Horocyclic => "horocyclic",
        }
    }

    pub fn needs_radius(self) -> bool {
        matches!(self, Self::TubeOfP | Self::Equidistant)
    }
}

impl fmt::Display for HypersurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HypersurfaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tube" => Ok(Self::TubeOfP),
            "minimal" => Ok(Self::Minimal),
            "equidistant" => Ok(Self::Equidistant),
            "horocyclic" => Ok(Self::Horocyclic),
            _ => Err(Error::InvalidModel(format!("unknown model {s:?}"))),
        }
    }
}

/// A member of the family `M_alpha`, parametrized by kind and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypersurfaceModel {
    pub kind: HypersurfaceKind,
    /// Distance to `P` (tubes) or to the minimal orbit (equidistant); 0 otherwise.
    pub r: f64,
}

impl HypersurfaceModel {
    pub fn new(kind: HypersurfaceKind, r: f64) -> Result<Self> {
        if kind.needs_radius() {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidRadius(r));
            }
            Ok(Self { kind, r })
        } else {
            Ok(Self { kind, r: 0.0 })
        }
    }

    pub fn tube(r: f64) -> Result<Self> {
        Self::new(HypersurfaceKind::TubeOfP, r)
    }

    pub fn equidistant(r: f64) -> Result<Self> {
        Self::new(HypersurfaceKind::Equidistant, r)
    }

    pub fn minimal() -> Self {
        Self { kind: HypersurfaceKind::Minimal, r: 0.0 }
    }

    pub fn horocyclic() -> Self {
        Self { kind: HypersurfaceKind::Horocyclic, r: 0.0 }
    }

    /// The model with Hopf principal curvature `alpha >= 0`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidModel(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if alpha == 0.0 {
            Ok(Self::minimal())
        } else if alpha < 2.0 {
            Self::equidistant(0.5 * (alpha / 2.0).atanh())
        } else if alpha == 2.0 {
            Ok(Self::horocyclic())
        } else {
            Self::tube(0.5 * (2.0 / alpha).atanh())
        }
    }

    /// Hopf principal curvature: `2 coth(2r)`, `0`, `2 tanh(2r)` or `2`.
    pub fn alpha(&self) -> f64 {
        match self.kind {
            HypersurfaceKind::TubeOfP => 2.0 / (2.0 * self.r).tanh(),
            HypersurfaceKind::Minimal => 0.0,
            HypersurfaceKind::Equidistant => 2.0 * (2.0 * self.r).tanh(),
            HypersurfaceKind::Horocyclic => 2.0,
        }
    }

    /// Principal curvatures `alpha (x1), 0 (x2), 1 (x n-2), -1 (x n-2)`.
    pub fn expected_spectrum(&self, n: usize) -> Vec<(f64, usize)> {
        vec![(self.alpha(), 1), (0.0, 2), (1.0, n - 2), (-1.0, n - 2)]
    }

    pub fn label(&self) -> String {
        if self.kind.needs_radius() {
            format!("{}(r={})", self.kind, self.r)
        } else {
            self.kind.to_string()
        }
    }
}

/// Shape operator in an orthonormal tangent frame together with its spectrum
/// and the checks evaluated on it. `matrix` uses the reported orientation
/// (Hopf curvature `+alpha`), `signed_matrix` the orientation in which it was
/// computed.
#[derive(Debug, Clone)]
pub struct ShapeOperatorReport {
    pub matrix: DMatrix<f64>,
    pub signed_matrix: DMatrix<f64>,
    pub spectrum: SpectrumReport,
    pub signed_spectrum: SpectrumReport,
    pub checks: Vec<Check>,
}

impl ShapeOperatorReport {
    pub(crate) fn new(matrix: DMatrix<f64>, signed_matrix: DMatrix<f64>) -> Self {
        Self {
            spectrum: SpectrumReport::from_symmetric(&matrix),
            signed_spectrum: SpectrumReport::from_symmetric(&signed_matrix),
            matrix,
            signed_matrix,
            checks: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Shape operator of the orbit through `o` of the connected subgroup of `AN`
/// with Lie algebra `s`, with respect to a unit normal in `a + n`.
#[derive(Debug, Clone)]
pub struct BracketShape {
    /// Orthonormal basis of `s` for the left-invariant metric.
    pub frame_an: Vec<SoElement>,
    /// Its image in `p` under `X -> (X - theta X)/2`, orthonormal for `g`.
    pub frame: Vec<TangentVector>,
    pub normal_an: SoElement,
    pub normal: TangentVector,
    pub report: ShapeOperatorReport,
}

/// `A X = [zeta, X]_s` with `zeta` the `p`-part of the normal and `[.]_s` the
/// orthogonal projection onto `s`, written in an orthonormal frame of `s`.
///
/// Also evaluates the Koszul formula for left-invariant metrics
/// `<A X, Y> = (<[N, X], Y> + <[N, Y], X>)/2` as an independent route, and the
/// isometry between `(a + n, < >)` and `(p, g)`.
pub fn shape_by_bracket(rs: &RootSystem, s: &Subspace, normal: &SoElement) -> Result<BracketShape> {
    let an = rs.an();
    let r = an.inclusion_residual(s);
    if r > STRUCTURE_TOL {
        return Err(Error::NotInSubspace { space: "a+n", residual: r });
    }
    let closure = s.closure_residual();
    if closure > STRUCTURE_TOL {
        return Err(Error::NotSubalgebra(closure));
    }
    let nn = rs.an_metric(normal, normal)?;
    if (nn - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(nn.sqrt()));
    }
    let ip = |a: &SoElement, b: &SoElement| rs.an_metric(a, b).expect("inside a + n");
    let frame_an = orthonormalize(s.basis(), ip);
    let ortho = frame_an.iter().map(|e| ip(e, normal).abs()).fold(0.0, f64::max);
    if ortho > STRUCTURE_TOL {
        return Err(Error::NormalNotOrthogonal(ortho));
    }
    let zeta = normal.cartan_split().1;
    let k = frame_an.len();
    let mut a = DMatrix::zeros(k, k);
    let mut koszul = DMatrix::zeros(k, k);
    let images: Vec<SoElement> = frame_an
        .iter()
        .map(|e| s.project(&zeta.br(e)).expect("same n"))
        .collect();
    let raw: Vec<SoElement> = frame_an.iter().map(|e| normal.br(e)).collect();
    for i in 0..k {
        for j in 0..k {
            a[(i, j)] = ip(&frame_an[i], &images[j]);
            koszul[(i, j)] = 0.5 * (ip(&raw[j], &frame_an[i]) + ip(&raw[i], &frame_an[j]));
        }
    }
    let frame: Vec<TangentVector> = frame_an.iter().map(TangentVector::project).collect();
    let normal_p = TangentVector::project(normal);
    let gram = operator_matrix(&frame, |x| x.clone());
    let isometry = (gram - DMatrix::identity(k, k)).amax();
    let normal_perp = frame.iter().map(|e| g_metric(e, &normal_p).abs()).fold(0.0, f64::max);
    let asym = asymmetry(&a);
    let mut report = ShapeOperatorReport::new(a.clone(), a.clone());
    report.checks.push(Check::new("shape operator symmetric", asym, STRUCTURE_TOL));
    report
        .checks
        .push(Check::new("bracket projection agrees with Koszul formula", (&a - &koszul).amax(), STRUCTURE_TOL));
    report
        .checks
        .push(Check::new("a+n metric isometric to g on p-parts", isometry.max(normal_perp), STRUCTURE_TOL));
    Ok(BracketShape {
        frame_an,
        frame,
        normal_an: normal.clone(),
        normal: normal_p,
        report,
    })
}

/// `[[m, m], m] ⊆ m` for a subspace of `p`; returns the largest relative residual.
pub fn lie_triple_check(m: &Subspace) -> Check {
    let mut r: f64 = 0.0;
    let b = m.basis();
    for x in b {
        for y in b {
            let xy = x.br(y);
            for z in b {
                let v = xy.br(z);
                let scale = x.b_theta_norm() * y.b_theta_norm() * z.b_theta_norm();
                let p = m.project(&v).expect("same n");
                r = r.max((&v - &p).b_theta_norm() / scale.max(1e-300));
            }
        }
    }
    Check::new("Lie triple system", r, STRUCTURE_TOL)
}

/// True iff `s` is a Heisenberg algebra of dimension `2 dim(center) + 1` with
/// 1-dimensional center equal to `[s, s]`.
pub fn heisenberg_check(s: &Subspace) -> Result<bool> {
    let closure = s.closure_residual();
    if closure > STRUCTURE_TOL {
        return Err(Error::NotSubalgebra(closure));
    }
    let derived = s.bracket_span(s);
    let second = s.bracket_span(&derived);
    let center = crate::root_system::center(s);
    let n = s.n();
    Ok(s.dim() == 2 * n - 3
        && derived.dim() == 1
        && second.is_empty()
        && derived.span_eq(&center))
}

/// Unit normal `cos(phi) H_alpha1/2 + sin(phi) zeta_hat` of `P` in `a + n`,
/// where `zeta_hat` is the unit vector of `g_alpha1`.
pub fn p_normal_an(rs: &RootSystem, phi: f64) -> SoElement {
    let n = rs.n();
    let h = root_vector(n, RootLabel::ALPHA1) * 0.5;
    let z = &rs.root_space(RootLabel::ALPHA1).basis()[0];
    &(&h * phi.cos()) + &(z * phi.sin())
}

/// The `phi`-independent data of `P` at `o` plus the shape operator for one
/// unit normal.
#[derive(Debug, Clone)]
pub struct ComplexHypersurface {
    pub n: usize,
    pub phi: f64,
    /// Orthonormal frame of `T_o P` (p-parts of an orthonormal basis of `d`).
    pub frame: Vec<TangentVector>,
    pub normal_space: Subspace,
    pub normal: TangentVector,
    pub shape: ShapeOperatorReport,
}

impl ComplexHypersurface {
    /// Eigenspace of the shape operator near `value`, as a subspace of `p`.
    pub fn eigenspace(&self, value: f64) -> Subspace {
        let c = self.shape.spectrum.cluster_near(value, 1e-6);
        cluster_subspace(&self.frame, c)
    }
}

pub(crate) fn cluster_subspace(frame: &[TangentVector], c: Option<&Cluster>) -> Subspace {
    let n = frame[0].n();
    match c {
        Some(c) => Subspace::span(
            n,
            c.vectors
                .iter()
                .map(|v| crate::quadric::from_coords(frame, v).into_element()),
        ),
        None => Subspace::zero(n),
    }
}

/// Builds `P^(n-1)` with unit normal `zeta = cos(phi) H_alpha1/2 + sin(phi) J H_alpha1/2`
/// and checks its principal curvatures, eigenspaces and curvature adaptedness.
pub fn build_p(n: usize, phi: f64) -> Result<ComplexHypersurface> {
    let rs = RootSystem::new(n)?;
    let d = named_subalgebra(&rs, SubalgebraName::D);
    let bs = shape_by_bracket(&rs, &d, &p_normal_an(&rs, phi))?;
    let frame = bs.frame;
    let zeta = bs.normal;
    let mut shape = bs.report;
    let nu = Subspace::span(
        n,
        [
            root_vector(n, RootLabel::ALPHA1),
            rs.p_alpha(RootLabel::ALPHA1).basis()[0].clone(),
        ],
    );

    shape.checks.push(Check::new(
        "principal curvatures 0 (x2), 1 (x n-2), -1 (x n-2)",
        shape.spectrum.residual_against(&[(0.0, 2), (1.0, n - 2), (-1.0, n - 2)]),
        MODEL_TOL,
    ));
    shape.checks.push(Check::new(
        "unit normal lies in R H_alpha1 + p_alpha1",
        nu.residual(zeta.element()).unwrap_or(f64::INFINITY),
        STRUCTURE_TOL,
    ));

    let eig = |v: f64| cluster_subspace(&frame, shape.spectrum.cluster_near(v, 1e-6));
    let (t0, t1, tm1) = (eig(0.0), eig(1.0), eig(-1.0));
    let x = rs.p_alpha(RootLabel::ALPHA1_PLUS_ALPHA2);
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let rotate = |a: f64, b: f64| {
        x.map(|v| {
            let tv = TangentVector::project(v);
            (&(&tv * a) + &(&j_apply(&tv) * b)).into_element()
        })
    };
    let t0_expected = Subspace::span(n, [root_vector(n, RootLabel::ALPHA1_PLUS_2ALPHA2)])
        .sum(&rs.p_alpha(RootLabel::ALPHA1_PLUS_2ALPHA2));
    let c0_nu = nu.map(|v| crate::quadric::c0_apply(&TangentVector::project(v)).into_element());
    shape.checks.push(Check::new(
        "T0 = R H_(alpha1+2alpha2) + p_(alpha1+2alpha2)",
        t0.span_distance(&t0_expected),
        STRUCTURE_TOL,
    ));
    shape
        .checks
        .push(Check::new("T0 = C0(normal space)", t0.span_distance(&c0_nu), STRUCTURE_TOL));
    shape.checks.push(Check::new(
        "T1 = {cos(phi/2) X + sin(phi/2) JX : X in p_(alpha1+alpha2)}",
        t1.span_distance(&rotate(c, s)),
        STRUCTURE_TOL,
    ));
    shape.checks.push(Check::new(
        "T-1 = {sin(phi/2) X - cos(phi/2) JX : X in p_(alpha1+alpha2)}",
        tm1.span_distance(&rotate(s, -c)),
        STRUCTURE_TOL,
    ));
    let cphi = RealStructure::new(phi);
    shape.checks.push(Check::new(
        "T1 in V(C_phi)",
        cphi.v_space(n).inclusion_residual(&t1),
        STRUCTURE_TOL,
    ));
    shape.checks.push(Check::new(
        "T-1 in JV(C_phi)",
        cphi.jv_space(n).inclusion_residual(&tm1),
        STRUCTURE_TOL,
    ));

    // A_(J zeta) = J A_zeta, using the shape operator at phi + pi/2 in the same frame
    let turned = shape_by_bracket(&rs, &d, &p_normal_an(&rs, phi + std::f64::consts::FRAC_PI_2))?;
    let jmat = operator_matrix(&frame, j_apply);
    shape.checks.push(Check::new(
        "tangent space is J-invariant",
        leakage(&frame, j_apply),
        STRUCTURE_TOL,
    ));
    shape.checks.push(Check::new(
        "A_(J zeta) = J A_zeta",
        (&turned.report.matrix - &jmat * &shape.matrix).amax(),
        STRUCTURE_TOL,
    ));
    let k_op = |v: &TangentVector| curvature(v, &zeta, &zeta, 0.0);
    let kmat = operator_matrix(&frame, k_op);
    shape.checks.push(Check::new(
        "curvature-adapted: normal Jacobi operator preserves T_oP",
        leakage(&frame, k_op),
        STRUCTURE_TOL,
    ));
    shape.checks.push(Check::new(
        "curvature-adapted: [K, A] = 0",
        crate::linalg::commutator_norm(&kmat, &shape.matrix),
        STRUCTURE_TOL,
    ));
    let triple = lie_triple_check(&nu);
    shape.checks.push(Check::new("normal space is a Lie triple system", triple.residual, triple.tol));
    let class = crate::quadric::classify_singular(&zeta)?;
    shape.checks.push(Check::new(
        "unit normal is A-isotropic",
        std::f64::consts::FRAC_PI_4 - class.t,
        crate::quadric::CLASSIFY_TOL,
    ));
    Ok(ComplexHypersurface {
        n,
        phi,
        frame,
        normal_space: nu,
        normal: zeta,
        shape,
    })
}

/// The subspaces of `p` whose Lie triple property is part of the geometry of
/// `P`: its normal space, `C0` of it, the tangent and normal spaces of the
/// totally geodesic `CH^(n-2)`, and the pieces of the parabolic decomposition.
pub fn lie_triple_subspaces(rs: &RootSystem) -> Vec<(&'static str, Subspace)> {
    use RootLabel as R;
    let n = rs.n();
    let line = |l: RootLabel| Subspace::span(n, [root_vector(n, l)]);
    let p = |l: RootLabel| rs.p_alpha(l);
    vec![
        ("R H_alpha1 + p_alpha1", line(R::ALPHA1).sum(&p(R::ALPHA1))),
        (
            "R H_(alpha1+2alpha2) + p_(alpha1+2alpha2)",
            line(R::ALPHA1_PLUS_2ALPHA2).sum(&p(R::ALPHA1_PLUS_2ALPHA2)),
        ),
        ("p_(alpha1+alpha2) + p_alpha2", p(R::ALPHA1_PLUS_ALPHA2).sum(&p(R::ALPHA2))),
        (
            "a + p_(alpha1+2alpha2) + p_alpha1",
            Subspace::direct_sum(n, [rs.a(), &p(R::ALPHA1_PLUS_2ALPHA2), &p(R::ALPHA1)]),
        ),
        ("a + p_alpha1", rs.a().sum(&p(R::ALPHA1))),
    ]
}

/// Span inclusions `[k_*, p_*] ⊆ p_*` and
/// `[p_(a1+a2) + p_a2, p_(a1+a2) + p_a2] ⊆ k0 + k_a1 + k_(a1+2a2)`.
/// Returns `(description, relative residual)` pairs.
pub fn bracket_relations(rs: &RootSystem) -> Vec<(String, f64)> {
    use RootLabel as R;
    let n = rs.n();
    let mut out = Vec::new();
    let p12 = rs.p_alpha(R::ALPHA1_PLUS_ALPHA2).sum(&rs.p_alpha(R::ALPHA2));
    let target = Subspace::direct_sum(
        n,
        [rs.k0(), &rs.k_alpha(R::ALPHA1), &rs.k_alpha(R::ALPHA1_PLUS_2ALPHA2)],
    );
    out.push((
        "[p_(alpha1+alpha2)+p_alpha2, same] in k0+k_alpha1+k_(alpha1+2alpha2)".to_string(),
        target.inclusion_residual(&p12.bracket_span(&p12)),
    ));
    let ks: [(&str, Subspace); 3] = [
        ("k0", rs.k0().clone()),
        ("k_alpha1", rs.k_alpha(R::ALPHA1)),
        ("k_(alpha1+2alpha2)", rs.k_alpha(R::ALPHA1_PLUS_2ALPHA2)),
    ];
    let targets = [
        (R::ALPHA1_PLUS_ALPHA2, [R::ALPHA1_PLUS_ALPHA2, R::ALPHA2, R::ALPHA2]),
        (R::ALPHA2, [R::ALPHA2, R::ALPHA1_PLUS_ALPHA2, R::ALPHA1_PLUS_ALPHA2]),
    ];
    for (src, dst) in targets {
        for ((kname, k), d) in ks.iter().zip(dst) {
            let img = k.bracket_span(&rs.p_alpha(src));
            out.push((
                format!("[{kname}, p_{src}] in p_{d}"),
                rs.p_alpha(d).inclusion_residual(&img),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_round_trip() {
        for alpha in [0.0, 0.3, 1.0, 1.9, 2.0, 2.5, 4.0, 10.0] {
            let m = HypersurfaceModel::from_alpha(alpha).unwrap();
            assert!((m.alpha() - alpha).abs() < 1e-12, "{alpha}");
        }
        assert!(HypersurfaceModel::from_alpha(-1.0).is_err());
        assert!(matches!(HypersurfaceModel::tube(0.0), Err(Error::InvalidRadius(_))));
        assert!(matches!(HypersurfaceModel::equidistant(f64::NAN), Err(Error::InvalidRadius(_))));
        assert_eq!("tube".parse::<HypersurfaceKind>().unwrap(), HypersurfaceKind::TubeOfP);
    }

    #[test]
    fn p_spectrum_and_eigenspaces() {
        for phi in [0.0, 0.7, std::f64::consts::PI] {
            let p = build_p(4, phi).unwrap();
            for c in &p.shape.checks {
                assert!(c.pass, "phi={phi}: {} residual {}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn bracket_shape_rejects_bad_normals() {
        let rs = RootSystem::new(3).unwrap();
        let d = named_subalgebra(&rs, SubalgebraName::D);
        let h = root_vector(3, RootLabel::ALPHA1_PLUS_2ALPHA2);
        let h = &h * (1.0 / rs.an_metric(&h, &h).unwrap().sqrt());
        assert!(matches!(shape_by_bracket(&rs, &d, &h), Err(Error::NormalNotOrthogonal(_))));
        let z = root_vector(3, RootLabel::ALPHA1);
        assert!(matches!(shape_by_bracket(&rs, &d, &z), Err(Error::NotUnit(_))));
    }

    #[test]
    fn heisenberg() {
        let rs = RootSystem::new(4).unwrap();
        assert!(heisenberg_check(&named_subalgebra(&rs, SubalgebraName::N1)).unwrap());
        assert!(!heisenberg_check(&named_subalgebra(&rs, SubalgebraName::D)).unwrap());
        assert!(!heisenberg_check(rs.nilradical()).unwrap());
    }

    #[test]
    fn triple_systems_and_relations() {
        let rs = RootSystem::new(5).unwrap();
        for (name, m) in lie_triple_subspaces(&rs) {
            assert!(lie_triple_check(&m).pass, "{name}");
        }
        let bad = rs.p_alpha(RootLabel::ALPHA1).sum(&rs.p_alpha(RootLabel::ALPHA2));
        assert!(!lie_triple_check(&bad).pass);
        for (name, r) in bracket_relations(&rs) {
            assert!(r < STRUCTURE_TOL, "{name}: {r}");
        }
    }
}
