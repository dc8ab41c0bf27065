//! Independent routes used to cross-check the closed-form constructions:
//! the Killing form as a trace of adjoint matrices, the curvature tensor of
//! the symmetric space as a double bracket, and a fixed-step integrator for
//! the Jacobi equation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hypersurfaces::JacobiTransport;
use crate::lie_core::{standard_basis, SoElement, Subspace};
use crate::quadric::{combine, operator_matrix, p_frame, TangentVector};

/// Step used by [`integrate_jacobi`] unless stated otherwise.
pub const ODE_STEP: f64 = 1e-4;
/// Agreement required between the integrator and the closed form.
pub const ODE_TOL: f64 = 1e-6;

/// Matrix of `ad(x)` in the standard basis of so(2,n).
pub fn ad_matrix(x: &SoElement) -> DMatrix<f64> {
    let n = x.n();
    let basis = standard_basis(n);
    let full = Subspace::new(n, basis.clone()).expect("standard basis is independent");
    let cols: Vec<_> = basis
        .iter()
        .map(|b| full.coordinates(&x.br(b)).expect("same n"))
        .collect();
    DMatrix::from_columns(&cols)
}

/// `tr(ad x ad y)`, computed from adjoint matrices.
pub fn killing_by_trace(x: &SoElement, y: &SoElement) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { expected: x.n(), found: y.n() });
    }
    Ok((ad_matrix(x) * ad_matrix(y)).trace())
}

/// `R(x, y) z = -[[x, y], z]` on `p`.
pub fn bracket_curvature(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> TangentVector {
    let w = x.element().br(y.element()).br(z.element());
    -&TangentVector::project(&w)
}

/// Ricci operator of the quadric at `o` in the standard frame of `p`,
/// contracted from [`bracket_curvature`].
pub fn ricci_by_brackets(n: usize) -> DMatrix<f64> {
    let frame = p_frame(n);
    operator_matrix(&frame, |x| {
        let terms: Vec<TangentVector> = frame.iter().map(|e| bracket_curvature(x, e, e)).collect();
        combine(n, terms.iter().map(|t| (1.0, t)))
    })
}

/// `D(r)` and `D'(r)` for `D'' = -K D` by the classical 4-stage Runge-Kutta
/// method with step close to `h`.
pub fn integrate_jacobi(
    k: &DMatrix<f64>,
    d0: &DMatrix<f64>,
    d1: &DMatrix<f64>,
    r: f64,
    h: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    let steps = (r / h).ceil().max(1.0) as usize;
    let h = r / steps as f64;
    let (mut d, mut v) = (d0.clone(), d1.clone());
    let acc = |d: &DMatrix<f64>| -(k * d);
    for _ in 0..steps {
        let (k1d, k1v) = (v.clone(), acc(&d));
        let (k2d, k2v) = (&v + &k1v * (h / 2.0), acc(&(&d + &k1d * (h / 2.0))));
        let (k3d, k3v) = (&v + &k2v * (h / 2.0), acc(&(&d + &k2d * (h / 2.0))));
        let (k4d, k4v) = (&v + &k3v * h, acc(&(&d + &k3d * h)));
        d += (k1d + &k2d * 2.0 + &k3d * 2.0 + k4d) * (h / 6.0);
        v += (k1v + &k2v * 2.0 + &k3v * 2.0 + k4v) * (h / 6.0);
    }
    Ok((d, v))
}

/// Integrated counterpart of a closed-form [`JacobiTransport`].
#[derive(Debug, Clone)]
pub struct JacobiOde {
    pub d: DMatrix<f64>,
    pub d_prime: DMatrix<f64>,
    pub shape: DMatrix<f64>,
    /// Largest entrywise deviation of `D`, `D'` and `-D' D^-1` from the closed form.
    pub residual: f64,
}

pub fn integrate_transport(jt: &JacobiTransport, h: f64) -> Result<JacobiOde> {
    let (d, d_prime) = integrate_jacobi(&jt.curvature, &jt.d0, &jt.d1, jt.r, h)?;
    let shape = crate::hypersurfaces::solve_shape(&d, &d_prime, jt.r)?;
    let residual = (&d - &jt.d)
        .amax()
        .max((&d_prime - &jt.d_prime).amax())
        .max((&shape - &jt.shape).amax());
    Ok(JacobiOde { d, d_prime, shape, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurfaces::{jacobi_transport, HypersurfaceKind};
    use crate::quadric::curvature;

    #[test]
    fn killing_matches_trace_formula() {
        let n = 3;
        let b = standard_basis(n);
        for x in &b[..4] {
            for y in &b {
                let k = killing_by_trace(x, y).unwrap();
                assert!((k - x.killing(y).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bracket_curvature_matches_formula() {
        let f = p_frame(4);
        for (x, y, z) in [(0, 1, 2), (3, 5, 5), (7, 2, 0)] {
            let a = bracket_curvature(&f[x], &f[y], &f[z]);
            let b = curvature(&f[x], &f[y], &f[z], 0.4);
            assert!((&a - &b).amax() < 1e-12);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        // D'' = -D, D(0) = 1, D'(0) = 0 -> cos
        let one = DMatrix::identity(1, 1);
        let (d, v) = integrate_jacobi(&one, &one, &DMatrix::zeros(1, 1), 1.0, 1e-3).unwrap();
        assert!((d[(0, 0)] - 1f64.cos()).abs() < 1e-12);
        assert!((v[(0, 0)] + 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn ode_reproduces_tube() {
        let jt = jacobi_transport(3, HypersurfaceKind::TubeOfP, 0.5).unwrap();
        let ode = integrate_transport(&jt, ODE_STEP).unwrap();
        assert!(ode.residual < ODE_TOL, "{}", ode.residual);
    }
}
