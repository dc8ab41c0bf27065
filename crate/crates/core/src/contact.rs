//! Almost contact metric structure `(phi, xi, eta, g)` induced on `M_alpha`,
//! the `d eta` identity, the normal Jacobi operator and the Ricci tensor.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurfaces::{build_m, Hypersurface, HypersurfaceFrame, HypersurfaceModel, MODEL_TOL};
use crate::oracle::bracket_curvature;
use crate::quadric::{combine, operator_matrix, TangentVector};
use crate::spectrum::{Check, SpectrumReport};

/// Tolerance for agreement of the two Ricci computations.
pub const RICCI_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ContactData {
    pub frame: HypersurfaceFrame,
    pub eta: DVector<f64>,
    pub phi_matrix: DMatrix<f64>,
    /// `d eta(e_i, e_j)`.
    pub d_eta: DMatrix<f64>,
    pub checks: Vec<Check>,
}

/// `eta(xi) = 1`, `phi xi = 0`, `phi^2 = -id + eta (x) xi`, and `d eta`
/// computed two ways.
pub fn contact_data(h: &Hypersurface) -> ContactData {
    let frame = h.frame.clone();
    let eta = frame.eta();
    let phi = frame.structure_phi.clone();
    let xi = frame.blocks.xi;
    let dim = eta.len();
    let a = &h.shape.matrix;
    let d_eta = d_eta_tensor(&phi, a);
    let mut checks = vec![
        Check::new("eta(xi) = 1", (eta[xi] - 1.0).abs(), MODEL_TOL),
        Check::new("phi xi = 0", phi.column(xi).amax(), MODEL_TOL),
        Check::new(
            "phi^2 = -id + eta (x) xi",
            (&phi * &phi + DMatrix::identity(dim, dim) - &eta * eta.transpose()).amax(),
            MODEL_TOL,
        ),
        Check::new("d eta = 0", d_eta.amax(), MODEL_TOL),
    ];
    checks.push(Check::new(
        "d eta(X, Y) = g(phi A X, Y) - g(phi A Y, X)",
        (&d_eta - d_eta_from_reeb_derivative(&phi, a)).amax(),
        MODEL_TOL,
    ));
    let (by_eigen, by_anti) = hopf_defects(a, &phi, &eta);
    checks.push(Check::new("Hopf: A xi parallel to xi", by_eigen, MODEL_TOL));
    checks.push(Check::new("Hopf: g((A phi + phi A) xi, Y) = 0", by_anti, MODEL_TOL));
    ContactData { frame, eta, phi_matrix: phi, d_eta, checks }
}

/// `d eta(X, Y) = g((A phi + phi A) X, Y)` on frame pairs.
pub fn d_eta_tensor(phi: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    (a * phi + phi * a).transpose()
}

/// `d eta(X, Y) = g(nabla_X xi, Y) - g(nabla_Y xi, X)` with `nabla_X xi = phi A X`.
pub fn d_eta_from_reeb_derivative(phi: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    let pa = phi * a;
    // g(phi A e_i, e_j) = (phi A)_ji
    pa.transpose() - pa
}

/// Two measures of how far `A` is from being Hopf: the component of `A xi`
/// orthogonal to `xi`, and `max_Y |g((A phi + phi A) xi, Y)|`.
pub fn hopf_defects(a: &DMatrix<f64>, phi: &DMatrix<f64>, eta: &DVector<f64>) -> (f64, f64) {
    let axi = a * eta;
    let along = eta * eta.dot(&axi);
    let anti = (a * phi + phi * a) * eta;
    ((axi - along).amax(), anti.amax())
}

/// Symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * 0.5
}

/// `K = R(., zeta) zeta` on `T M` with its block values `0` on `C ⊖ Q`,
/// `-1` on `Q` and `-4` on `R xi`.
pub fn normal_jacobi_on_m(h: &Hypersurface) -> Result<(DMatrix<f64>, Vec<Check>)> {
    let iso = h
        .shape
        .check("(f) normal is A-isotropic")
        .map(|c| c.residual)
        .unwrap_or(f64::INFINITY);
    if !(iso < MODEL_TOL) {
        return Err(Error::NotIsotropic(iso));
    }
    let k = h.normal_jacobi.clone();
    let b = &h.frame.blocks;
    let mut diag = DVector::zeros(k.nrows());
    for i in b.q() {
        diag[i] = -1.0;
    }
    diag[b.xi] = -4.0;
    let checks = vec![
        Check::new(
            "K = 0 on C ⊖ Q, -1 on Q, -4 on R xi",
            (&k - DMatrix::from_diagonal(&diag)).amax(),
            MODEL_TOL,
        ),
        Check::new("[K, A] = 0", crate::linalg::commutator_norm(&k, &h.shape.matrix), MODEL_TOL),
    ];
    Ok((k, checks))
}

/// Ricci operator of `M_alpha` with its eigenvalue pattern and the identities
/// it satisfies.
#[derive(Debug, Clone)]
pub struct RicciReport {
    pub n: usize,
    pub alpha: f64,
    pub matrix: DMatrix<f64>,
    pub spectrum: SpectrumReport,
    pub pseudo_einstein: bool,
    pub scalar: f64,
    pub phi_relation_residual: f64,
    pub gauss_residual: f64,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RicciSummary {
    pub eigenvalues: Vec<(f64, usize)>,
    pub pseudo_einstein: bool,
    pub scalar: f64,
}

impl RicciReport {
    /// `(value, multiplicity)` per cluster.
    pub fn eigenvalues(&self) -> Vec<(f64, usize)> {
        self.spectrum.pattern()
    }

    pub fn summary(&self) -> RicciSummary {
        RicciSummary {
            eigenvalues: self.eigenvalues(),
            pseudo_einstein: self.pseudo_einstein,
            scalar: self.scalar,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Expected Ricci eigenvalues: `-2n` on `C ⊖ Q`, `-2n + alpha` on `T_1`,
/// `-2n - alpha` on `T_-1`, `-2n + 4` on `R xi`.
pub fn expected_ricci(n: usize, alpha: f64) -> Vec<(f64, usize)> {
    let c = -2.0 * n as f64;
    vec![(c, 2), (c + alpha, n - 2), (c - alpha, n - 2), (c + 4.0, 1)]
}

/// Number of distinct Ricci eigenvalues: 2 for `alpha = 0`, 3 for `alpha = 4`, 4 otherwise.
pub fn expected_ricci_clusters(alpha: f64) -> usize {
    if alpha.abs() < 1e-6 {
        2
    } else if (alpha - 4.0).abs() < 1e-6 {
        3
    } else {
        4
    }
}

/// `4 - 2n(2n - 1)`.
pub fn expected_scalar(n: usize) -> f64 {
    let n = n as f64;
    4.0 - 2.0 * n * (2.0 * n - 1.0)
}

/// `Ric = -2n id - K + alpha A - A^2`.
pub fn ricci_from_hypersurface(h: &Hypersurface) -> RicciReport {
    let n = h.n();
    let alpha = h.alpha();
    let a = &h.shape.matrix;
    let dim = a.nrows();
    let ric = DMatrix::identity(dim, dim) * (-2.0 * n as f64) - &h.normal_jacobi + a * alpha - a * a;
    let spectrum = SpectrumReport::from_symmetric(&ric);
    let eta = h.frame.eta();
    let phi = &h.frame.structure_phi;
    let pe_form = (&ric + DMatrix::identity(dim, dim) * (2.0 * n as f64) - &eta * eta.transpose() * 4.0).amax();
    let pseudo_einstein = pe_form < MODEL_TOL && spectrum.clusters.len() == 2;
    let scalar = ric.trace();
    let phi_rel = (&ric * phi + phi * &ric + phi * (4.0 * n as f64)).amax();
    let gauss = ricci_gauss_oracle(h);
    let gauss_residual = (&ric - &gauss).amax();
    let expected = expected_ricci(n, alpha);
    let mut checks = vec![
        Check::new(
            "Ricci eigenvalues -2n, -2n + alpha, -2n - alpha, -2n + 4",
            spectrum.residual_against(&expected),
            MODEL_TOL,
        ),
        Check::new(
            "Ricci cluster count 2 / 3 / 4 at alpha = 0 / 4 / other",
            (spectrum.clusters.len() as f64 - expected_ricci_clusters(alpha) as f64).abs(),
            0.5,
        ),
        Check::new("scalar curvature 4 - 2n(2n-1)", (scalar - expected_scalar(n)).abs(), MODEL_TOL),
        Check::new("Ric phi + phi Ric = -4n phi", phi_rel, MODEL_TOL),
        Check::new("Ricci formula agrees with Gauss contraction", gauss_residual, RICCI_TOL),
    ];
    if alpha == 0.0 {
        checks.push(Check::new("pseudo-Einstein: Ric = -2n id + 4 eta (x) xi", pe_form, MODEL_TOL));
    }
    RicciReport {
        n,
        alpha,
        matrix: ric,
        spectrum,
        pseudo_einstein,
        scalar,
        phi_relation_residual: phi_rel,
        gauss_residual,
        checks,
    }
}

pub fn ricci(model: HypersurfaceModel, n: usize) -> Result<RicciReport> {
    Ok(ricci_from_hypersurface(&build_m(n, model)?))
}

/// Contraction of the Gauss equation,
/// `Ric(X, Y) = sum_i g(R(X, e_i) e_i, Y) + tr(A) g(AX, Y) - g(A^2 X, Y)`,
/// with the ambient curvature taken from double brackets.
pub fn ricci_gauss_oracle(h: &Hypersurface) -> DMatrix<f64> {
    let frame = &h.frame.tangent_basis;
    let n = h.n();
    let ambient = operator_matrix(frame, |x| {
        let terms: Vec<TangentVector> = frame.iter().map(|e| bracket_curvature(x, e, e)).collect();
        combine(n, terms.iter().map(|t| (1.0, t)))
    });
    let a = &h.shape.matrix;
    ambient + a * a.trace() - a * a
}

pub fn scalar_curvature(model: HypersurfaceModel, n: usize) -> Result<f64> {
    Ok(ricci(model, n)?.scalar)
}
