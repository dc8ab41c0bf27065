//! Restricted roots of so(2,n) with respect to the maximal abelian subspace
//! `a` of `p`, the Iwasawa summand `n`, the left-invariant metric on `a + n`
//! and the named subalgebras used to build the hypersurfaces.
//!
//! `a` consists of the matrices `H(a1, a2)` whose only nonzero entries are
//! `X[0][2] = X[2][0] = a1` and `X[1][3] = X[3][1] = a2`. With `e1(H) = a1`,
//! `e2(H) = a2` the simple roots are `alpha1 = e1 - e2` and `alpha2 = e2`,
//! giving a root system of type B2.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::lie_core::{SoElement, Subspace};

/// Restricted root `c1 * alpha1 + c2 * alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootLabel {
    pub c1: i32,
    pub c2: i32,
}

impl RootLabel {
    pub const ALPHA1: Self = Self { c1: 1, c2: 0 };
    pub const ALPHA2: Self = Self { c1: 0, c2: 1 };
    pub const ALPHA1_PLUS_ALPHA2: Self = Self { c1: 1, c2: 1 };
    pub const ALPHA1_PLUS_2ALPHA2: Self = Self { c1: 1, c2: 2 };

    pub const POSITIVE: [Self; 4] = [
        Self::ALPHA1,
        Self::ALPHA2,
        Self::ALPHA1_PLUS_ALPHA2,
        Self::ALPHA1_PLUS_2ALPHA2,
    ];

    pub fn new(c1: i32, c2: i32) -> Option<Self> {
        let l = Self { c1, c2 };
        Self::all().contains(&l).then_some(l)
    }

    pub fn all() -> [Self; 8] {
        let p = Self::POSITIVE;
        [p[0], p[1], p[2], p[3], -p[0], -p[1], -p[2], -p[3]]
    }

    pub fn is_positive(self) -> bool {
        self.c1 > 0 || (self.c1 == 0 && self.c2 > 0)
    }

    /// `alpha1` and `alpha1 + 2 alpha2` (and negatives) are the long roots.
    pub fn is_long(self) -> bool {
        self.c2 == 2 * self.c1
            || (self.c2 == 0 && self.c1 != 0)
    }

    pub fn multiplicity(self, n: usize) -> usize {
        if self.is_long() {
            1
        } else {
            n - 2
        }
    }

    /// `alpha(H(a1, a2))`.
    pub fn eval(self, a1: f64, a2: f64) -> f64 {
        // alpha1 = e1 - e2, alpha2 = e2
        self.c1 as f64 * a1 + (self.c2 - self.c1) as f64 * a2
    }
}

impl std::ops::Neg for RootLabel {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c1: -self.c1, c2: -self.c2 }
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.is_positive() { *self } else { -*self };
        let sign = if self.is_positive() { "" } else { "-" };
        let body = match (p.c1, p.c2) {
            (1, 0) => "alpha1",
            (0, 1) => "alpha2",
            (1, 1) => "(alpha1+alpha2)",
            (1, 2) => "(alpha1+2alpha2)",
            _ => "?",
        };
        if sign.is_empty() {
            write!(f, "{}", body.trim_start_matches('(').trim_end_matches(')'))
        } else {
            write!(f, "-{body}")
        }
    }
}

/// `H(a1, a2)` in `a`.
pub fn a_element(n: usize, a1: f64, a2: f64) -> SoElement {
    SoElement::from_entries(n, &[(0, 2, a1), (1, 3, a2)])
}

/// Coordinates `(a1, a2)` of an element of `a` (read off, not projected).
pub fn a_coords(x: &SoElement) -> (f64, f64) {
    (x.matrix()[(0, 2)], x.matrix()[(1, 3)])
}

/// Root vector `H_alpha`, determined by `<H_alpha, H> = alpha(H)` for all `H`
/// in `a`, where `<H, H'> = tr(H H') / 4`.
pub fn root_vector(n: usize, label: RootLabel) -> SoElement {
    let e = [a_element(n, 1.0, 0.0), a_element(n, 0.0, 1.0)];
    let gram = Matrix2::from_fn(|i, j| 0.25 * e[i].trace_product(&e[j]));
    let rhs = Vector2::new(label.eval(1.0, 0.0), label.eval(0.0, 1.0));
    let x = gram
        .lu()
        .solve(&rhs)
        .expect("Gram matrix of the standard basis of a is invertible");
    a_element(n, x[0], x[1])
}

/// Basis of a positive root space with the explicit parametrization by
/// `v, w` in R^(n-2) (standard basis vectors) and `x = y = 1`.
fn positive_root_basis(n: usize, label: RootLabel) -> Vec<SoElement> {
    let unit = |k: usize, top: usize, bottom: usize| {
        let c = 4 + k;
        let mut m = nalgebra::DMatrix::zeros(n + 2, n + 2);
        m[(top, c)] = 1.0;
        m[(bottom, c)] = 1.0;
        m[(c, top)] = 1.0;
        m[(c, bottom)] = -1.0;
        SoElement::from_matrix_unchecked(n, m)
    };
    let fixed = |entries: [f64; 8]| {
        let pos = [(0, 1), (0, 3), (1, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 2)];
        let mut m = nalgebra::DMatrix::zeros(n + 2, n + 2);
        for (&(i, j), v) in pos.iter().zip(entries) {
            m[(i, j)] = v;
        }
        SoElement::from_matrix_unchecked(n, m)
    };
    match (label.c1, label.c2) {
        (1, 1) => (0..n - 2).map(|k| unit(k, 0, 2)).collect(),
        (0, 1) => (0..n - 2).map(|k| unit(k, 1, 3)).collect(),
        (1, 0) => vec![fixed([1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, -1.0])],
        (1, 2) => vec![fixed([1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0])],
        _ => unreachable!("not a positive root"),
    }
}

/// A restricted root with its root space and root vector.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub label: RootLabel,
    pub space: Subspace,
    pub root_vector: SoElement,
    pub multiplicity: usize,
}

/// All eight root data; negative root spaces are `theta` of the positive ones.
pub fn build_roots(n: usize) -> Result<Vec<RootDatum>> {
    if n < 3 {
        return Err(Error::InvalidRank(n));
    }
    let mut out = Vec::with_capacity(8);
    for sign in [1, -1] {
        for p in RootLabel::POSITIVE {
            let basis = positive_root_basis(n, p);
            let (label, basis) = if sign == 1 {
                (p, basis)
            } else {
                (-p, basis.iter().map(SoElement::theta).collect())
            };
            let space = Subspace::new(n, basis)?;
            out.push(RootDatum {
                label,
                multiplicity: space.dim(),
                root_vector: root_vector(n, label),
                space,
            });
        }
    }
    Ok(out)
}

/// The full restricted root decomposition at a fixed `n`, together with the
/// Iwasawa pieces.
#[derive(Debug, Clone)]
pub struct RootSystem {
    n: usize,
    roots: Vec<RootDatum>,
    a: Subspace,
    k0: Subspace,
    nil: Subspace,
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        let roots = build_roots(n)?;
        let a = Subspace::new(n, vec![a_element(n, 1.0, 0.0), a_element(n, 0.0, 1.0)])?;
        // so(n-2) acting on the last n-2 coordinates
        let mut k0 = Vec::new();
        for i in 4..n + 2 {
            for j in i + 1..n + 2 {
                k0.push(SoElement::from_entries(n, &[(i, j, 1.0)]));
            }
        }
        let k0 = Subspace::new(n, k0)?;
        let nil = Subspace::direct_sum(
            n,
            roots.iter().filter(|r| r.label.is_positive()).map(|r| &r.space),
        );
        Ok(Self { n, roots, a, k0, nil })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[RootDatum] {
        &self.roots
    }

    pub fn root(&self, label: RootLabel) -> &RootDatum {
        self.roots
            .iter()
            .find(|r| r.label == label)
            .expect("every label of the B2 system is present")
    }

    pub fn root_space(&self, label: RootLabel) -> &Subspace {
        &self.root(label).space
    }

    /// Dual basis `H^1 = H(1,0)`, `H^2 = H(1,1)` of `a` with respect to the simple roots.
    pub fn a_dual_basis(&self) -> [SoElement; 2] {
        [a_element(self.n, 1.0, 0.0), a_element(self.n, 1.0, 1.0)]
    }

    pub fn a(&self) -> &Subspace {
        &self.a
    }

    /// `k0 = so(n-2)`, the part of the centralizer of `a` inside `k`. Empty for `n = 3`.
    pub fn k0(&self) -> &Subspace {
        &self.k0
    }

    /// `g0 = a + k0`, the centralizer of `a`.
    pub fn g0(&self) -> Subspace {
        self.a.sum(&self.k0)
    }

    /// `n`, the sum of the positive root spaces.
    pub fn nilradical(&self) -> &Subspace {
        &self.nil
    }

    pub fn an(&self) -> Subspace {
        self.a.sum(&self.nil)
    }

    /// `p_alpha = (1 - theta)(g_alpha)`.
    pub fn p_alpha(&self, label: RootLabel) -> Subspace {
        self.root_space(label).map(|x| x.cartan_split().1)
    }

    /// `k_alpha = (1 + theta)(g_alpha)`.
    pub fn k_alpha(&self, label: RootLabel) -> Subspace {
        self.root_space(label).map(|x| x.cartan_split().0)
    }

    /// Splits `x` in `a + n` into its `a` and `n` parts.
    pub fn decompose_an(&self, x: &SoElement) -> Result<(SoElement, SoElement)> {
        let h = self.a.project(x)?;
        let rest = x - &h;
        let r = self.nil.residual(&rest)?;
        let scale = x.b_theta_norm().max(1e-300);
        if r * rest.b_theta_norm() / scale > 1e-10 {
            return Err(Error::NotInSubspace { space: "a+n", residual: r });
        }
        Ok((h, rest))
    }

    /// Left-invariant metric `<H1 + X1, H2 + X2> = tr(H1 H2)/4 - tr(X1 theta(X2))/8`.
    pub fn an_metric(&self, x: &SoElement, y: &SoElement) -> Result<f64> {
        let (h1, x1) = self.decompose_an(x)?;
        let (h2, x2) = self.decompose_an(y)?;
        Ok(an_metric_parts(&h1, &x1, &h2, &x2))
    }

    /// Dimension check: `2 * sum of positive multiplicities + dim g0 = dim g`.
    pub fn dimension_audit(&self) -> (usize, usize) {
        let roots: usize = self.roots.iter().map(|r| r.multiplicity).sum();
        (roots + self.g0().dim(), crate::lie_core::algebra_dim(self.n))
    }
}

pub(crate) fn an_metric_parts(h1: &SoElement, x1: &SoElement, h2: &SoElement, x2: &SoElement) -> f64 {
    0.25 * h1.trace_product(h2) - 0.125 * x1.trace_product(&x2.theta())
}

/// Fixed registry of subalgebras used by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubalgebraName {
    /// `R H_(alpha1+2alpha2) + g_alpha2 + g_(alpha1+alpha2) + g_(alpha1+2alpha2)`
    D,
    /// Heisenberg algebra `g_alpha2 + g_(alpha1+alpha2) + g_(alpha1+2alpha2)`
    N1,
    /// `a + n1`
    S1,
    /// `R H_(alpha1+2alpha2) + n`
    H1,
    /// `g_-alpha1 + g0 + g_alpha1`
    L1,
    /// `g_-alpha1 + R H_alpha1 + g_alpha1 + k0`
    M1,
    /// `l1 + n1`
    Q1,
    /// `R H_(alpha1+2alpha2)`
    A1,
    /// `R H_alpha1`
    AUp1,
    /// `g_-alpha1 + R H_alpha1 + g_alpha1`
    G1,
    /// `k_alpha1 + k0`
    K1,
}

impl SubalgebraName {
    pub const ALL: [Self; 11] = [
        Self::D,
        Self::N1,
        Self::S1,
        Self::H1,
        Self::L1,
        Self::M1,
        Self::Q1,
        Self::A1,
        Self::AUp1,
        Self::G1,
        Self::K1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::D => "d",
            Self::N1 => "n1",
            Self::S1 => "s1",
            Self::H1 => "h1",
            Self::L1 => "l1",
            Self::M1 => "m1",
            Self::Q1 => "q1",
            Self::A1 => "a1",
            Self::AUp1 => "a_up1",
            Self::G1 => "g1",
            Self::K1 => "k1",
        }
    }
}

impl fmt::Display for SubalgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubalgebraName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidModel(format!("unknown subalgebra {s:?}")))
    }
}

/// Tolerance on the bracket-closure residual of a registered subalgebra.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Builds a single named subalgebra.
pub fn named_subalgebra(rs: &RootSystem, name: SubalgebraName) -> Subspace {
    use RootLabel as R;
    let n = rs.n();
    let line = |label: RootLabel| Subspace::span(n, [root_vector(n, label)]);
    let g = |label: RootLabel| rs.root_space(label).clone();
    let n1 = || {
        Subspace::direct_sum(
            n,
            [&g(R::ALPHA2), &g(R::ALPHA1_PLUS_ALPHA2), &g(R::ALPHA1_PLUS_2ALPHA2)],
        )
    };
    let g1 = || Subspace::direct_sum(n, [&g(-R::ALPHA1), &line(R::ALPHA1), &g(R::ALPHA1)]);
    let m1 = || g1().sum(rs.k0());
    match name {
        SubalgebraName::D => line(R::ALPHA1_PLUS_2ALPHA2).sum(&n1()),
        SubalgebraName::N1 => n1(),
        SubalgebraName::S1 => rs.a().sum(&n1()),
        SubalgebraName::H1 => line(R::ALPHA1_PLUS_2ALPHA2).sum(rs.nilradical()),
        SubalgebraName::L1 => Subspace::direct_sum(n, [&g(-R::ALPHA1), &rs.g0(), &g(R::ALPHA1)]),
        SubalgebraName::M1 => m1(),
        SubalgebraName::Q1 => {
            Subspace::direct_sum(n, [&g(-R::ALPHA1), &rs.g0(), &g(R::ALPHA1), &n1()])
        }
        SubalgebraName::A1 => line(R::ALPHA1_PLUS_2ALPHA2),
        SubalgebraName::AUp1 => line(R::ALPHA1),
        SubalgebraName::G1 => g1(),
        SubalgebraName::K1 => rs.k_alpha(R::ALPHA1).sum(rs.k0()),
    }
}

/// All registered subalgebras, each verified to be closed under the bracket.
pub fn build_named_subalgebras(n: usize) -> Result<BTreeMap<SubalgebraName, Subspace>> {
    let rs = RootSystem::new(n)?;
    let mut out = BTreeMap::new();
    for name in SubalgebraName::ALL {
        let s = named_subalgebra(&rs, name);
        let r = s.closure_residual();
        if r > CLOSURE_TOL {
            return Err(Error::NotSubalgebra(r));
        }
        out.insert(name, s);
    }
    Ok(out)
}

/// Terms of the lower central series `s, [s,s], [s,[s,s]], ...` until it
/// stabilizes (at most `n + 2` steps).
pub fn lower_central_series(s: &Subspace) -> Vec<Subspace> {
    let mut out = vec![s.clone()];
    for _ in 0..s.n() + 2 {
        let last = out.last().expect("nonempty");
        if last.is_empty() {
            break;
        }
        let next = s.bracket_span(last);
        if next.dim() == last.dim() {
            break;
        }
        out.push(next);
    }
    out
}

pub fn is_nilpotent(s: &Subspace) -> bool {
    lower_central_series(s).last().map(Subspace::is_empty).unwrap_or(true)
}

/// Terms of the derived series `s, [s,s], [[s,s],[s,s]], ...`.
pub fn derived_series(s: &Subspace) -> Vec<Subspace> {
    let mut out = vec![s.clone()];
    for _ in 0..s.dim() + 1 {
        let last = out.last().expect("nonempty");
        if last.is_empty() {
            break;
        }
        let next = last.bracket_span(last);
        if next.dim() == last.dim() {
            break;
        }
        out.push(next);
    }
    out
}

pub fn is_solvable(s: &Subspace) -> bool {
    derived_series(s).last().map(Subspace::is_empty).unwrap_or(true)
}

/// Center of `s`: kernel of `x -> ([x, b_1], ..., [x, b_k])` restricted to `s`.
pub fn center(s: &Subspace) -> Subspace {
    let k = s.dim();
    if k == 0 {
        return s.clone();
    }
    let d = s.n() + 2;
    // columns: vectorized ad(basis_i) applied to every basis element
    let mut m = nalgebra::DMatrix::zeros(k * d * d, k);
    for (i, a) in s.basis().iter().enumerate() {
        for (j, b) in s.basis().iter().enumerate() {
            let c = a.br(b);
            for (idx, v) in c.matrix().iter().enumerate() {
                m[(j * d * d + idx, i)] = *v;
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max().max(1e-300);
    let mut kernel = Vec::new();
    for (row, &sv) in svd.singular_values.iter().enumerate() {
        if sv < 1e-10 * smax {
            kernel.push(crate::lie_core::linear_combination(
                s.n(),
                v_t.row(row).iter().copied().zip(s.basis().iter()),
            ));
        }
    }
    Subspace::span(s.n(), kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(RootLabel::all().len(), 8);
        assert!(RootLabel::new(2, 1).is_none());
        assert!(RootLabel::ALPHA1.is_long() && RootLabel::ALPHA1_PLUS_2ALPHA2.is_long());
        assert!(!RootLabel::ALPHA2.is_long() && !(-RootLabel::ALPHA1_PLUS_ALPHA2).is_long());
        assert_eq!(RootLabel::ALPHA1_PLUS_2ALPHA2.to_string(), "alpha1+2alpha2");
        assert_eq!((-RootLabel::ALPHA1_PLUS_ALPHA2).to_string(), "-(alpha1+alpha2)");
    }

    #[test]
    fn rejects_small_n() {
        assert_eq!(build_roots(2).unwrap_err(), Error::InvalidRank(2));
    }

    #[test]
    fn root_spaces_are_eigenspaces() {
        for n in 3..7 {
            let rs = RootSystem::new(n).unwrap();
            let h = a_element(n, 0.3, -0.7);
            for r in rs.roots() {
                assert_eq!(r.multiplicity, r.label.multiplicity(n));
                let lam = r.label.eval(0.3, -0.7);
                for x in r.space.basis() {
                    let res = &h.br(x) - &(x * lam);
                    assert!(res.amax() < 1e-14, "{} n={n}", r.label);
                }
            }
        }
    }

    #[test]
    fn root_vectors_match_explicit_matrices() {
        let n = 4;
        let cases = [
            (RootLabel::ALPHA1, (2.0, -2.0)),
            (RootLabel::ALPHA2, (0.0, 2.0)),
            (RootLabel::ALPHA1_PLUS_ALPHA2, (2.0, 0.0)),
            (RootLabel::ALPHA1_PLUS_2ALPHA2, (2.0, 2.0)),
        ];
        for (l, (x1, x2)) in cases {
            let h = root_vector(n, l);
            let (a1, a2) = a_coords(&h);
            assert!((a1 - x1).abs() < 1e-15 && (a2 - x2).abs() < 1e-15, "{l}");
        }
        let h = root_vector(n, RootLabel::ALPHA1);
        assert!((0.25 * h.trace_product(&h) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_audit_balances() {
        for n in 3..9 {
            let rs = RootSystem::new(n).unwrap();
            let (lhs, rhs) = rs.dimension_audit();
            assert_eq!(lhs, rhs);
            assert_eq!(rs.g0().dim(), 2 + (n - 2) * (n - 3) / 2);
        }
    }

    #[test]
    fn an_metric_rejects_k_elements() {
        let rs = RootSystem::new(3).unwrap();
        let z = SoElement::from_entries(3, &[(0, 1, 1.0)]);
        assert!(matches!(
            rs.an_metric(&z, &z),
            Err(Error::NotInSubspace { space: "a+n", .. })
        ));
    }

    #[test]
    fn registry_round_trip() {
        for name in SubalgebraName::ALL {
            assert_eq!(name.as_str().parse::<SubalgebraName>().unwrap(), name);
        }
        assert!("x".parse::<SubalgebraName>().is_err());
    }

    #[test]
    fn subalgebra_dimensions() {
        for n in 3..6 {
            let m = build_named_subalgebras(n).unwrap();
            let dim = |s| m[&s].dim();
            assert_eq!(dim(SubalgebraName::D), 2 * n - 2);
            assert_eq!(dim(SubalgebraName::N1), 2 * n - 3);
            assert_eq!(dim(SubalgebraName::S1), 2 * n - 1);
            assert_eq!(dim(SubalgebraName::H1), 2 * n - 1);
            assert_eq!(dim(SubalgebraName::G1), 3);
            assert_eq!(dim(SubalgebraName::K1), 1 + (n - 2) * (n - 3) / 2);
        }
    }

    #[test]
    fn heisenberg_center() {
        let rs = RootSystem::new(5).unwrap();
        let n1 = named_subalgebra(&rs, SubalgebraName::N1);
        let c = center(&n1);
        assert!(c.span_eq(rs.root_space(RootLabel::ALPHA1_PLUS_2ALPHA2)));
        assert!(is_nilpotent(&n1));
        assert!(is_solvable(&named_subalgebra(&rs, SubalgebraName::D)));
        assert!(!is_solvable(&named_subalgebra(&rs, SubalgebraName::G1)));
    }
}
