//! Arithmetic in the matrix Lie algebra so(2,n).
//!
//! Elements are dense `(2+n)x(2+n)` real matrices of block form
//!
//! ```text
//! [ A1  B  ]
//! [ B^T A2 ]      A1 in so(2), A2 in so(n), B in M(2,n)
//! ```
//!
//! equivalently `X^T I + I X = 0` with `I = diag(-1,-1,1,...,1)`. The Cartan
//! involution is `theta(X) = I X I`, its fixed algebra `k` is block-diagonal and
//! `p` (where `theta = -1`) is the off-diagonal part.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

/// Tolerance used when deciding linear independence inside [`Subspace::span`].
pub const INDEPENDENCE_TOL: f64 = 1e-9;
/// Relative projection residual below which a vector counts as a member of a span.
pub const SPAN_TOL: f64 = 1e-8;

/// An element of so(2,n).
#[derive(Debug, Clone, PartialEq)]
pub struct SoElement {
    n: usize,
    m: DMatrix<f64>,
}

#[inline]
fn sign(i: usize) -> f64 {
    if i < 2 {
        -1.0
    } else {
        1.0
    }
}

fn skew_residual(a: &DMatrix<f64>) -> f64 {
    (a + a.transpose()).amax()
}

impl SoElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            m: DMatrix::zeros(n + 2, n + 2),
        }
    }

    /// Assembles an element from its three blocks. `a1` (2x2) and `a2` (nxn)
    /// must be skew-symmetric, `b` is an arbitrary 2xn matrix.
    pub fn new(n: usize, a1: &DMatrix<f64>, a2: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Self> {
        check_shape("A1", a1, 2, 2)?;
        check_shape("A2", a2, n, n)?;
        check_shape("B", b, 2, n)?;
        let tol = 1e-14 * (1.0 + a1.amax().max(a2.amax()));
        let r1 = skew_residual(a1);
        if r1 > tol {
            return Err(Error::NotSkew { block: "A1", residual: r1 });
        }
        let r2 = skew_residual(a2);
        if r2 > tol {
            return Err(Error::NotSkew { block: "A2", residual: r2 });
        }
        let mut m = DMatrix::zeros(n + 2, n + 2);
        m.view_mut((0, 0), (2, 2)).copy_from(a1);
        m.view_mut((2, 2), (n, n)).copy_from(a2);
        m.view_mut((0, 2), (2, n)).copy_from(b);
        m.view_mut((2, 0), (n, 2)).copy_from(&b.transpose());
        Ok(Self { n, m })
    }

    /// Wraps a full matrix after checking the defining relation `X^T I + I X = 0`.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 3 {
            return Err(Error::BlockShape {
                block: "X",
                rows: m.nrows(),
                cols: m.ncols(),
                expected_rows: m.ncols().max(3),
                expected_cols: m.ncols().max(3),
            });
        }
        let x = Self { n: m.nrows() - 2, m };
        let r = x.invariant_residual();
        if r > 1e-12 * (1.0 + x.m.amax()) {
            return Err(Error::NotInAlgebra(r));
        }
        Ok(x)
    }

    pub(crate) fn from_matrix_unchecked(n: usize, m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), n + 2);
        Self { n, m }
    }

    /// The element of `p` with top-right block `b` (2xn).
    pub fn from_p_block(b: &DMatrix<f64>) -> Self {
        assert_eq!(b.nrows(), 2, "p block must have two rows");
        let n = b.ncols();
        let mut m = DMatrix::zeros(n + 2, n + 2);
        m.view_mut((0, 2), (2, n)).copy_from(b);
        m.view_mut((2, 0), (n, 2)).copy_from(&b.transpose());
        Self { n, m }
    }

    /// Element with the given symmetric pairs of entries, `(i, j, v)` sets
    /// `X[i][j] = v` and the partner entry so that the result lies in so(2,n).
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut m = DMatrix::zeros(n + 2, n + 2);
        for &(i, j, v) in entries {
            m[(i, j)] = v;
            if i != j {
                m[(j, i)] = -sign(i) * sign(j) * v;
            }
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Top-right 2xn block.
    pub fn p_block(&self) -> DMatrix<f64> {
        self.m.view((0, 2), (2, self.n)).into_owned()
    }

    /// `max |X^T I + I X|`; zero for every element built through this module.
    pub fn invariant_residual(&self) -> f64 {
        let d = self.m.nrows();
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                r = r.max((self.m[(j, i)] * sign(j) + sign(i) * self.m[(i, j)]).abs());
            }
        }
        r
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Matrix commutator `XY - YX`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(self.br(other))
    }

    pub(crate) fn br(&self, other: &Self) -> Self {
        let m = &self.m * &other.m - &other.m * &self.m;
        Self { n: self.n, m }
    }

    /// `tr(XY)` without forming the product.
    pub(crate) fn trace_product(&self, other: &Self) -> f64 {
        let d = self.m.nrows();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        s
    }

    /// Killing form `B(X,Y) = tr(ad X ad Y) = n tr(XY)`.
    pub fn killing(&self, other: &Self) -> Result<f64> {
        self.same_n(other)?;
        Ok(self.n as f64 * self.trace_product(other))
    }

    /// Cartan involution `theta(X) = I X I`.
    pub fn theta(&self) -> Self {
        let d = self.m.nrows();
        let m = DMatrix::from_fn(d, d, |i, j| sign(i) * sign(j) * self.m[(i, j)]);
        Self { n: self.n, m }
    }

    /// Positive definite inner product `B_theta(X,Y) = -B(X, theta Y)`.
    pub fn b_theta(&self, other: &Self) -> Result<f64> {
        self.same_n(other)?;
        Ok(self.bt(other))
    }

    pub(crate) fn bt(&self, other: &Self) -> f64 {
        -(self.n as f64) * self.trace_product(&other.theta())
    }

    pub fn b_theta_norm(&self) -> f64 {
        self.bt(self).max(0.0).sqrt()
    }

    /// Splits `X` into its `k` and `p` parts, `((X + theta X)/2, (X - theta X)/2)`.
    pub fn cartan_split(&self) -> (Self, Self) {
        let t = self.theta();
        let k = (self + &t) * 0.5;
        let p = (self - &t) * 0.5;
        (k, p)
    }

    /// Largest absolute entry.
    pub fn amax(&self) -> f64 {
        self.m.amax()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.m.amax() <= tol
    }
}

fn check_shape(block: &'static str, a: &DMatrix<f64>, rows: usize, cols: usize) -> Result<()> {
    if a.nrows() != rows || a.ncols() != cols {
        return Err(Error::BlockShape {
            block,
            rows: a.nrows(),
            cols: a.ncols(),
            expected_rows: rows,
            expected_cols: cols,
        });
    }
    Ok(())
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&SoElement> for &SoElement {
            type Output = SoElement;
            fn $f(self, rhs: &SoElement) -> SoElement {
                assert_eq!(self.n, rhs.n, "so(2,n) dimension mismatch");
                SoElement { n: self.n, m: &self.m $op &rhs.m }
            }
        }
        impl $tr<SoElement> for SoElement {
            type Output = SoElement;
            fn $f(self, rhs: SoElement) -> SoElement {
                &self $op &rhs
            }
        }
        impl $tr<&SoElement> for SoElement {
            type Output = SoElement;
            fn $f(self, rhs: &SoElement) -> SoElement {
                &self $op rhs
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);

impl Mul<f64> for &SoElement {
    type Output = SoElement;
    fn mul(self, s: f64) -> SoElement {
        SoElement { n: self.n, m: &self.m * s }
    }
}

impl Mul<f64> for SoElement {
    type Output = SoElement;
    fn mul(self, s: f64) -> SoElement {
        SoElement { n: self.n, m: self.m * s }
    }
}

impl Neg for &SoElement {
    type Output = SoElement;
    fn neg(self) -> SoElement {
        SoElement { n: self.n, m: -&self.m }
    }
}

impl Neg for SoElement {
    type Output = SoElement;
    fn neg(self) -> SoElement {
        -&self
    }
}

/// `sum_i c_i v_i`.
pub fn linear_combination<'a>(
    n: usize,
    terms: impl IntoIterator<Item = (f64, &'a SoElement)>,
) -> SoElement {
    let mut m = DMatrix::zeros(n + 2, n + 2);
    for (c, v) in terms {
        assert_eq!(v.n, n, "so(2,n) dimension mismatch");
        m += &v.m * c;
    }
    SoElement { n, m }
}

/// Modified Gram-Schmidt under an arbitrary inner product. Vectors whose
/// residual falls below `INDEPENDENCE_TOL` times their norm are dropped.
pub fn orthonormalize<F>(vectors: &[SoElement], ip: F) -> Vec<SoElement>
where
    F: Fn(&SoElement, &SoElement) -> f64,
{
    let mut out: Vec<SoElement> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let norm0 = ip(v, v).max(0.0).sqrt();
        if norm0 < 1e-300 {
            continue;
        }
        let mut r = v.clone();
        // two passes keep the result orthogonal to machine precision
        for _ in 0..2 {
            for q in &out {
                let c = ip(q, &r);
                r = &r - &(q * c);
            }
        }
        let norm = ip(&r, &r).max(0.0).sqrt();
        if norm > INDEPENDENCE_TOL * norm0 {
            out.push(r * (1.0 / norm));
        }
    }
    out
}

/// A linear subspace of so(2,n), stored as a list of independent basis
/// vectors together with their `B_theta` Gram matrix.
#[derive(Debug, Clone)]
pub struct Subspace {
    n: usize,
    basis: Vec<SoElement>,
    gram: DMatrix<f64>,
    chol: Option<Cholesky<f64, Dyn>>,
}

impl Subspace {
    /// Builds a subspace from a basis that must be linearly independent.
    pub fn new(n: usize, basis: Vec<SoElement>) -> Result<Self> {
        for b in &basis {
            if b.n != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.n });
            }
        }
        let k = basis.len();
        let gram = DMatrix::from_fn(k, k, |i, j| basis[i].bt(&basis[j]));
        if k == 0 {
            return Ok(Self { n, basis, gram, chol: None });
        }
        let eig = SymmetricEigen::new(gram.clone());
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        if !(max > 0.0) || min <= 1e-14 * max {
            return Err(Error::SingularGram);
        }
        let chol = Cholesky::new(gram.clone()).ok_or(Error::SingularGram)?;
        Ok(Self { n, basis, gram, chol: Some(chol) })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
            gram: DMatrix::zeros(0, 0),
            chol: None,
        }
    }

    /// Span of arbitrary vectors; keeps a maximal independent subset of the
    /// inputs (in order) as the basis.
    pub fn span(n: usize, vectors: impl IntoIterator<Item = SoElement>) -> Self {
        let mut kept = Vec::new();
        let mut ortho: Vec<SoElement> = Vec::new();
        for v in vectors {
            assert_eq!(v.n, n, "so(2,n) dimension mismatch");
            let norm0 = v.b_theta_norm();
            if norm0 < 1e-300 {
                continue;
            }
            let mut r = v.clone();
            for _ in 0..2 {
                for q in &ortho {
                    let c = q.bt(&r);
                    r = &r - &(q * c);
                }
            }
            let norm = r.b_theta_norm();
            if norm > INDEPENDENCE_TOL * norm0 {
                ortho.push(r * (1.0 / norm));
                kept.push(v);
            }
        }
        Self::new(n, kept).expect("greedy selection yields an independent basis")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SoElement] {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Coefficients `c` with `proj(x) = sum c_i basis_i`.
    pub fn coordinates(&self, x: &SoElement) -> Result<DVector<f64>> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.n });
        }
        let Some(chol) = &self.chol else {
            return Ok(DVector::zeros(0));
        };
        let rhs = DVector::from_iterator(self.dim(), self.basis.iter().map(|b| b.bt(x)));
        Ok(chol.solve(&rhs))
    }

    /// `B_theta`-orthogonal projection onto the span.
    pub fn project(&self, x: &SoElement) -> Result<SoElement> {
        let c = self.coordinates(x)?;
        Ok(linear_combination(self.n, c.iter().copied().zip(self.basis.iter())))
    }

    /// Relative residual `|x - proj x| / |x|` (zero for `x = 0`).
    pub fn residual(&self, x: &SoElement) -> Result<f64> {
        let p = self.project(x)?;
        let norm = x.b_theta_norm();
        if norm < 1e-300 {
            return Ok(0.0);
        }
        Ok((x - &p).b_theta_norm() / norm)
    }

    pub fn contains(&self, x: &SoElement) -> bool {
        self.residual(x).map(|r| r < SPAN_TOL).unwrap_or(false)
    }

    /// Largest relative residual of the vectors of `other` projected onto `self`;
    /// zero iff `other` is contained in `self`.
    pub fn inclusion_residual(&self, other: &Subspace) -> f64 {
        other
            .basis
            .iter()
            .map(|v| self.residual(v).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.inclusion_residual(other) < SPAN_TOL
    }

    /// Mutual projection residual; `f64::INFINITY` if the dimensions differ.
    pub fn span_distance(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.inclusion_residual(other).max(other.inclusion_residual(self))
    }

    pub fn span_eq(&self, other: &Subspace) -> bool {
        self.span_distance(other) < SPAN_TOL
    }

    /// Span of the union of both bases.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.n, self.basis.iter().chain(other.basis.iter()).cloned())
    }

    /// Sum of several subspaces.
    pub fn direct_sum<'a>(n: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Subspace {
        Subspace::span(n, parts.into_iter().flat_map(|s| s.basis.iter().cloned()))
    }

    /// Image of the subspace under a linear map.
    pub fn map<F: Fn(&SoElement) -> SoElement>(&self, f: F) -> Subspace {
        Subspace::span(self.n, self.basis.iter().map(f))
    }

    /// `[self, other]`, the span of all pairwise brackets.
    pub fn bracket_span(&self, other: &Subspace) -> Subspace {
        let mut v = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                v.push(a.br(b));
            }
        }
        Subspace::span(self.n, v)
    }

    /// Largest relative residual of `[a, b]` projected onto the span, over
    /// basis pairs. Brackets that vanish contribute zero.
    pub fn closure_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        let scale = self
            .basis
            .iter()
            .map(SoElement::b_theta_norm)
            .fold(0.0, f64::max)
            .max(1e-300);
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                let c = a.br(b);
                let p = self.project(&c).expect("same n");
                r = r.max((&c - &p).b_theta_norm() / (scale * scale));
            }
        }
        r
    }

    /// `B_theta`-orthonormal basis (derived view; the stored basis is unchanged).
    pub fn orthonormal_basis(&self) -> Vec<SoElement> {
        orthonormalize(&self.basis, |a, b| a.bt(b))
    }

    /// Orthogonal complement of `self` inside `ambient`.
    pub fn complement_in(&self, ambient: &Subspace) -> Subspace {
        let residuals = ambient
            .basis
            .iter()
            .map(|v| v - &self.project(v).expect("same n"));
        Subspace::span(self.n, residuals)
    }
}

/// Standard basis of so(2,n): `E_ij - E_ji` in the two diagonal blocks and
/// `E_ij + E_ji` across them. Pairwise `B_theta`-orthogonal.
pub fn standard_basis(n: usize) -> Vec<SoElement> {
    let d = n + 2;
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(SoElement::from_entries(n, &[(i, j, 1.0)]));
        }
    }
    out
}

/// Dimension of so(2,n).
pub fn algebra_dim(n: usize) -> usize {
    (n + 2) * (n + 1) / 2
}

/// `k = so(2) + so(n)` as a subspace.
pub fn k_subspace(n: usize) -> Subspace {
    let basis = standard_basis(n)
        .into_iter()
        .filter(|x| x.theta() == *x)
        .collect();
    Subspace::new(n, basis).expect("standard basis is orthogonal")
}

/// `p`, the `-1` eigenspace of theta.
pub fn p_subspace(n: usize) -> Subspace {
    let basis = standard_basis(n)
        .into_iter()
        .filter(|x| x.theta() != *x)
        .collect();
    Subspace::new(n, basis).expect("standard basis is orthogonal")
}
