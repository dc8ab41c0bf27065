//! Clustered eigenvalue spectra and named pass/fail checks.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{cluster_ranges, expand, multiset_residual, sorted_eigen};

/// A named numerical assertion: `pass` iff `residual < tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            // NaN residuals fail
            pass: residual < tol,
        }
    }

    /// A check on a boolean fact; residual 0 when true, 1 when false.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }
}

/// One eigenvalue cluster. `vectors` are orthonormal eigenvectors in the
/// coordinates of whichever frame the operator was written in.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    pub vectors: Vec<DVector<f64>>,
}

/// Eigen-decomposition of a symmetric operator grouped into clusters
/// (descending), plus any checks attached by the producer.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub checks: Vec<Check>,
}

impl SpectrumReport {
    pub fn from_symmetric(m: &DMatrix<f64>) -> Self {
        let (values, vectors) = sorted_eigen(m);
        let clusters = cluster_ranges(&values)
            .into_iter()
            .map(|r| Cluster {
                value: values[r.clone()].iter().sum::<f64>() / r.len() as f64,
                multiplicity: r.len(),
                vectors: vectors[r].to_vec(),
            })
            .collect();
        Self {
            eigenvalues: values,
            clusters,
            checks: Vec::new(),
        }
    }

    /// `(value, multiplicity)` per cluster.
    pub fn pattern(&self) -> Vec<(f64, usize)> {
        self.clusters.iter().map(|c| (c.value, c.multiplicity)).collect()
    }

    /// Largest eigenvalue deviation from the expected multiset.
    pub fn residual_against(&self, expected: &[(f64, usize)]) -> f64 {
        multiset_residual(&self.eigenvalues, &expand(expected))
    }

    /// Cluster whose value is within `tol` of `value`.
    pub fn cluster_near(&self, value: f64, tol: f64) -> Option<&Cluster> {
        self.clusters.iter().find(|c| (c.value - value).abs() < tol)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
