//! Riemannian geometry of the complex hyperbolic quadric at the base point `o`.
//!
//! The tangent space `T_o` is identified with `p`. The metric is the Killing
//! inner product renormalized as `g = B_theta / (4n)`, which puts the minimum of
//! the sectional curvature at `-4`. `J` is `ad` of the generator of the SO(2)
//! factor and the real structures form the circle
//! `C_phi = cos(phi) C0 + sin(phi) J C0` with `C0 = Ad(diag(1,-1,1,...,1))`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie_core::{linear_combination, SoElement, Subspace};
use crate::spectrum::{Check, SpectrumReport};

/// Residual tolerance for the closed-form Jacobi spectrum.
pub const JACOBI_TOL: f64 = 1e-8;
/// Threshold on `t` for classifying singular vectors.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// A tangent vector at `o`, i.e. an element of `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(SoElement);

impl TangentVector {
    /// Rejects elements with a nonzero `k` part.
    pub fn new(x: SoElement) -> Result<Self> {
        let (k, _) = x.cartan_split();
        let r = k.amax();
        if r > 1e-12 * (1.0 + x.amax()) {
            return Err(Error::NotTangent(r));
        }
        Ok(Self(x))
    }

    /// Tangent vector from its 2xn off-diagonal block.
    pub fn from_block(b: &DMatrix<f64>) -> Self {
        Self(SoElement::from_p_block(b))
    }

    /// Drops the `k` part of `x`.
    pub fn project(x: &SoElement) -> Self {
        Self(x.cartan_split().1)
    }

    pub fn zero(n: usize) -> Self {
        Self(SoElement::zero(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn element(&self) -> &SoElement {
        &self.0
    }

    pub fn into_element(self) -> SoElement {
        self.0
    }

    pub fn block(&self) -> DMatrix<f64> {
        self.0.p_block()
    }

    pub fn norm(&self) -> f64 {
        g_metric(self, self).max(0.0).sqrt()
    }

    pub fn normalized(&self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn amax(&self) -> f64 {
        self.0.amax()
    }
}

macro_rules! tv_binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&TangentVector> for &TangentVector {
            type Output = TangentVector;
            fn $f(self, rhs: &TangentVector) -> TangentVector {
                TangentVector(&self.0 $op &rhs.0)
            }
        }
        impl $tr<TangentVector> for TangentVector {
            type Output = TangentVector;
            fn $f(self, rhs: TangentVector) -> TangentVector {
                TangentVector(&self.0 $op &rhs.0)
            }
        }
    };
}
tv_binop!(Add, add, +);
tv_binop!(Sub, sub, -);

impl Mul<f64> for &TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> TangentVector {
        TangentVector(&self.0 * s)
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> TangentVector {
        TangentVector(self.0 * s)
    }
}

impl Neg for &TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector(-&self.0)
    }
}

/// `sum_i c_i v_i` for tangent vectors.
pub fn combine<'a>(n: usize, terms: impl IntoIterator<Item = (f64, &'a TangentVector)>) -> TangentVector {
    TangentVector(linear_combination(n, terms.into_iter().map(|(c, v)| (c, &v.0))))
}

/// Renormalized metric `g = B_theta / (4n)`.
pub fn g_metric(x: &TangentVector, y: &TangentVector) -> f64 {
    assert_eq!(x.n(), y.n(), "so(2,n) dimension mismatch");
    x.0.bt(&y.0) / (4.0 * x.n() as f64)
}

/// The `k` generator whose `ad` is `J`: top-left block `[[0,-1],[1,0]]`.
pub fn j_generator(n: usize) -> SoElement {
    SoElement::from_entries(n, &[(0, 1, -1.0)])
}

/// Complex structure `J = ad(z)` on `p`; on blocks `B -> [[0,-1],[1,0]] B`.
pub fn j_apply(x: &TangentVector) -> TangentVector {
    TangentVector(j_generator(x.n()).br(&x.0))
}

/// `C0 = Ad(c0)` with `c0 = diag(1,-1,1,...,1)`; on blocks it negates the second row.
pub fn c0_apply(x: &TangentVector) -> TangentVector {
    let d = x.n() + 2;
    let c = |i: usize| if i == 1 { -1.0 } else { 1.0 };
    let m = DMatrix::from_fn(d, d, |i, j| c(i) * c(j) * x.0.matrix()[(i, j)]);
    TangentVector(SoElement::from_matrix_unchecked(x.n(), m))
}

/// The real structure `C_phi = cos(phi) C0 + sin(phi) J C0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealStructure {
    pub phi: f64,
}

impl RealStructure {
    pub const C0: Self = Self { phi: 0.0 };

    pub fn new(phi: f64) -> Self {
        Self { phi }
    }

    pub fn apply(&self, x: &TangentVector) -> TangentVector {
        real_structure_apply(*self, x)
    }

    /// `V(C)`, the +1 eigenspace, as a subspace of so(2,n).
    pub fn v_space(&self, n: usize) -> Subspace {
        self.eigenspace(n, 1.0)
    }

    /// `JV(C)`, the -1 eigenspace.
    pub fn jv_space(&self, n: usize) -> Subspace {
        self.eigenspace(n, -1.0)
    }

    fn eigenspace(&self, n: usize, sign: f64) -> Subspace {
        let vs = p_frame(n)
            .iter()
            .map(|e| (e + &(self.apply(e) * sign)).into_element())
            .collect::<Vec<_>>();
        Subspace::span(n, vs)
    }
}

pub fn real_structure_apply(c: RealStructure, x: &TangentVector) -> TangentVector {
    let cx = c0_apply(x);
    let jcx = j_apply(&cx);
    &(&cx * c.phi.cos()) + &(&jcx * c.phi.sin())
}

/// Riemannian curvature tensor of `(Q*, g)` at `o`, evaluated with the real
/// structure `C_phi`. The value does not depend on `phi`.
pub fn curvature(x: &TangentVector, y: &TangentVector, z: &TangentVector, phi: f64) -> TangentVector {
    let c = RealStructure::new(phi);
    let (jx, jy, jz) = (j_apply(x), j_apply(y), j_apply(z));
    let (cx, cy) = (c.apply(x), c.apply(y));
    let (jcx, jcy) = (j_apply(&cx), j_apply(&cy));
    let terms = [
        (g_metric(x, z), y),
        (-g_metric(y, z), x),
        (g_metric(&jx, z), &jy),
        (-g_metric(&jy, z), &jx),
        (2.0 * g_metric(&jx, y), &jz),
        (g_metric(&cx, z), &cy),
        (-g_metric(&cy, z), &cx),
        (g_metric(&jcx, z), &jcy),
        (-g_metric(&jcy, z), &jcx),
    ];
    combine(x.n(), terms)
}

/// `g`-orthonormal basis of `p`: the matrices `sqrt(2)(E_{i,2+j} + E_{2+j,i})`.
pub fn p_frame(n: usize) -> Vec<TangentVector> {
    let s = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..2 {
        for j in 0..n {
            out.push(TangentVector(SoElement::from_entries(n, &[(i, 2 + j, s)])));
        }
    }
    out
}

/// Coordinates of `v` in an orthonormal frame.
pub fn coords(frame: &[TangentVector], v: &TangentVector) -> DVector<f64> {
    DVector::from_iterator(frame.len(), frame.iter().map(|e| g_metric(e, v)))
}

/// Vector with the given coordinates in a frame.
pub fn from_coords(frame: &[TangentVector], c: &DVector<f64>) -> TangentVector {
    let n = frame.first().map(TangentVector::n).expect("nonempty frame");
    combine(n, c.iter().copied().zip(frame.iter()))
}

/// Matrix of `f` compressed to the frame: `M_ij = g(f(e_j), e_i)`.
pub fn operator_matrix<F>(frame: &[TangentVector], f: F) -> DMatrix<f64>
where
    F: Fn(&TangentVector) -> TangentVector,
{
    let k = frame.len();
    let mut m = DMatrix::zeros(k, k);
    for (j, e) in frame.iter().enumerate() {
        let fe = f(e);
        for (i, ei) in frame.iter().enumerate() {
            m[(i, j)] = g_metric(&fe, ei);
        }
    }
    m
}

/// Largest norm of the component of `f(e_j)` orthogonal to the frame.
pub fn leakage<F>(frame: &[TangentVector], f: F) -> f64
where
    F: Fn(&TangentVector) -> TangentVector,
{
    frame
        .iter()
        .map(|e| {
            let fe = f(e);
            let back = from_coords(frame, &coords(frame, &fe));
            (&fe - &back).norm()
        })
        .fold(0.0, f64::max)
}

/// Jacobi operator `X -> R(X, v) v` in the standard frame of `p`.
pub fn jacobi_operator(v: &TangentVector) -> DMatrix<f64> {
    operator_matrix(&p_frame(v.n()), |x| curvature(x, v, v, 0.0))
}

/// Ricci operator of the quadric at `o` in the standard frame of `p`.
pub fn ricci_operator(n: usize) -> DMatrix<f64> {
    let frame = p_frame(n);
    operator_matrix(&frame, |x| {
        let terms: Vec<TangentVector> = frame.iter().map(|e| curvature(x, e, e, 0.0)).collect();
        combine(n, terms.iter().map(|t| (1.0, t)))
    })
}

fn unit(v: &TangentVector) -> Result<TangentVector> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotUnit(norm));
    }
    Ok(v * (1.0 / norm))
}

/// Position of a unit vector relative to the circle of real structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SingularityKind {
    /// `v` lies in `V(C)` for some real structure (`t = 0`).
    Principal,
    /// `v = (u + Jw)/sqrt(2)` with `u, w` orthonormal in `V(C)` (`t = pi/4`).
    Isotropic,
    /// `0 < t < pi/4`; the vector lies in a unique maximal flat.
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityClass {
    pub kind: SingularityKind,
    /// Angle in `[0, pi/4]` with `v = cos(t) u + sin(t) J w`.
    pub t: f64,
    /// Angle of the real structure maximizing `g(C_phi v, v)`.
    pub aligned_phi: f64,
}

/// Finds `t` and the aligning real structure by maximizing
/// `m(phi) = g(C_phi v, v) = cos(2t) cos(phi - phi0)` over the circle.
pub fn classify_singular(v: &TangentVector) -> Result<SingularityClass> {
    let v = unit(v)?;
    let m = |phi: f64| g_metric(&RealStructure::new(phi).apply(&v), &v);
    const GRID: usize = 256;
    let step = 2.0 * PI / GRID as f64;
    let (mut best, mut best_val) = (0usize, f64::NEG_INFINITY);
    for k in 0..GRID {
        let val = m(k as f64 * step);
        if val > best_val {
            best = k;
            best_val = val;
        }
    }
    let mut phi = best as f64 * step;
    // m'(phi) = m(phi + pi/2) because C_(phi+pi/2) = -sin(phi) C0 + cos(phi) J C0
    let dm = |phi: f64| m(phi + PI / 2.0);
    let (mut lo, mut hi) = (phi - step, phi + step);
    if dm(lo) > 0.0 && dm(hi) < 0.0 {
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if dm(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        phi = 0.5 * (lo + hi);
    }
    let max = m(phi).clamp(-1.0, 1.0);
    let t = (0.5 * max.acos()).clamp(0.0, FRAC_PI_4);
    let kind = if t < CLASSIFY_TOL {
        SingularityKind::Principal
    } else if FRAC_PI_4 - t < CLASSIFY_TOL {
        SingularityKind::Isotropic
    } else {
        SingularityKind::Regular
    };
    Ok(SingularityClass {
        kind,
        t,
        aligned_phi: phi.rem_euclid(2.0 * PI),
    })
}

/// Closed-form Jacobi spectrum of `v = cos(t) u + sin(t) J w`.
pub fn jacobi_closed_form(n: usize, t: f64) -> Vec<(f64, usize)> {
    let (c, s) = ((2.0 * t).cos(), (2.0 * t).sin());
    vec![
        (0.0, 2),
        (-1.0 + c, n - 2),
        (-1.0 - c, n - 2),
        (-2.0 + 2.0 * s, 1),
        (-2.0 - 2.0 * s, 1),
    ]
}

/// Spectrum of the Jacobi operator `R(., v) v`, checked against the closed
/// form at the `t` found by [`classify_singular`].
pub fn jacobi_spectrum(v: &TangentVector) -> Result<SpectrumReport> {
    let v = unit(v)?;
    let class = classify_singular(&v)?;
    let mut report = SpectrumReport::from_symmetric(&jacobi_operator(&v));
    let expected = jacobi_closed_form(v.n(), class.t);
    report.checks.push(Check::new(
        "jacobi spectrum matches closed form at classified t",
        report.residual_against(&expected),
        JACOBI_TOL,
    ));
    Ok(report)
}

/// `cos(t) u + sin(t) J w` with `u, w` the `i`-th and `k`-th standard unit
/// vectors of `V(C0)` (first row of the block).
pub fn singular_vector(n: usize, t: f64, i: usize, k: usize) -> TangentVector {
    let frame = p_frame(n);
    let u = &frame[i];
    let w = &frame[k];
    &(u * t.cos()) + &(&j_apply(w) * t.sin())
}

/// Sectional curvature of the plane spanned by `x` and `y`.
pub fn sectional_curvature(x: &TangentVector, y: &TangentVector) -> f64 {
    let num = g_metric(&curvature(x, y, y, 0.0), x);
    let den = g_metric(x, x) * g_metric(y, y) - g_metric(x, y).powi(2);
    num / den
}
