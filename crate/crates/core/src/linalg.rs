//! Small dense helpers on top of nalgebra: sorted symmetric eigensolves,
//! eigenvalue clustering and subspace comparisons in coordinates.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Two eigenvalues share a cluster when their gap is below `CLUSTER_TOL * (1 + |lambda|)`.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
/// The input is symmetrized first so round-off asymmetry cannot leak in.
pub fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (values, vectors)
}

/// Groups descending-sorted values into runs of nearly equal values. Returns
/// index ranges into the input.
pub fn cluster_ranges(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let gap = (values[i - 1] - values[i]).abs();
            gap >= CLUSTER_TOL * (1.0 + values[i - 1].abs())
        };
        if split {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Largest deviation between two multisets of reals after sorting; infinite
/// when the sizes differ.
pub fn multiset_residual(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Expands `(value, multiplicity)` pairs into a flat list.
pub fn expand(pattern: &[(f64, usize)]) -> Vec<f64> {
    pattern
        .iter()
        .flat_map(|&(v, m)| std::iter::repeat(v).take(m))
        .collect()
}

/// Orthonormal basis (as columns) of the span of the given columns; columns
/// whose residual is below `tol` relative to their norm are dropped.
pub fn orthonormal_columns(cols: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for c in cols {
        let n0 = c.norm();
        if n0 == 0.0 {
            continue;
        }
        let mut r = c.clone();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&r);
                r.axpy(-d, q, 1.0);
            }
        }
        let nr = r.norm();
        if nr > tol * n0 {
            out.push(r / nr);
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of `span(cols)` in R^dim.
pub fn complement_columns(cols: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let base = orthonormal_columns(cols, 1e-9);
    let mut all = base.clone();
    for i in 0..dim {
        all.push(DVector::from_fn(dim, |j, _| if i == j { 1.0 } else { 0.0 }));
    }
    orthonormal_columns(&all, 1e-9).split_off(base.len())
}

/// Matrix whose columns are the given vectors.
pub fn columns_to_matrix(cols: &[DVector<f64>], rows: usize) -> DMatrix<f64> {
    if cols.is_empty() {
        return DMatrix::zeros(rows, 0);
    }
    DMatrix::from_columns(cols)
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(cols: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let q = columns_to_matrix(cols, dim);
    &q * q.transpose()
}

/// Distance between the spans of two orthonormal column sets (spectral norm
/// of the projector difference, bounded by 1). Infinite on dimension mismatch.
pub fn span_distance(a: &[DVector<f64>], b: &[DVector<f64>], dim: usize) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let d = projector(a, dim) - projector(b, dim);
    if d.nrows() == 0 {
        return 0.0;
    }
    d.amax()
}

/// `|AB - BA|_max`.
pub fn commutator_norm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a * b - b * a).amax()
}

/// `max |M - M^T|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_descending() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 3.0, 0.0]));
        let (v, vecs) = sorted_eigen(&m);
        assert_eq!(v, vec![3.0, 0.0, -1.0]);
        assert!((vecs[0][1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clusters_respect_relative_gap() {
        let r = cluster_ranges(&[2.0, 2.0 + 1e-9, 1.0, -1.0, -1.0]);
        assert_eq!(r, vec![0..2, 2..3, 3..5]);
        assert!(cluster_ranges(&[]).is_empty());
    }

    #[test]
    fn multiset_ignores_order() {
        assert_eq!(multiset_residual(&[1.0, 2.0], &[2.0, 1.0]), 0.0);
        assert!(multiset_residual(&[1.0], &[1.0, 1.0]).is_infinite());
        assert_eq!(expand(&[(1.0, 2), (0.0, 1)]), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn complement_has_right_dimension() {
        let a = vec![DVector::from_vec(vec![1.0, 1.0, 0.0])];
        let c = complement_columns(&a, 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(v.dot(&a[0]).abs() < 1e-14);
        }
    }
}
