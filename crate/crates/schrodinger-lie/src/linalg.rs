//! Numeric rank and span tests on sampled coefficient matrices.

use nalgebra::DMatrix;

/// Singular values below `tol * max(1, σ_max)` count as zero.
pub const RANK_TOL: f64 = 1e-8;

fn cutoff(s: &nalgebra::DVector<f64>, tol: f64) -> f64 {
    let smax = s.iter().cloned().fold(0.0, f64::max);
    tol * smax.max(1.0)
}

/// Numeric rank of a (rows × cols) matrix.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let c = cutoff(&svd.singular_values, tol);
    svd.singular_values.iter().filter(|&&v| v > c).count()
}

/// Orthonormal basis of the right null space, one column per vector.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    // Pad to a square-or-tall matrix so the SVD returns a full V.
    let rows = m.nrows().max(cols);
    let mut a = DMatrix::zeros(rows, cols);
    a.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let c = cutoff(&svd.singular_values, tol);
    let idx: Vec<usize> = (0..cols).filter(|&k| svd.singular_values[k] <= c).collect();
    let mut out = DMatrix::zeros(cols, idx.len());
    for (j, &k) in idx.iter().enumerate() {
        for i in 0..cols {
            out[(i, j)] = vt[(k, i)];
        }
    }
    out
}

/// Whether `v` lies in the column span of `m`.
pub fn in_span(m: &DMatrix<f64>, v: &[f64], tol: f64) -> bool {
    let r = rank(m, tol);
    let mut ext = m.clone().insert_column(m.ncols(), 0.0);
    for (i, x) in v.iter().enumerate() {
        ext[(i, m.ncols())] = *x;
    }
    rank(&ext, tol) == r
}

/// Builds a matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vec<f64>], rows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(rank(&m, RANK_TOL), 1);
        let ns = null_space(&m, RANK_TOL);
        assert_eq!(ns.ncols(), 2);
        assert!((&m * &ns).norm() < 1e-12);
        assert!(in_span(&m, &[2.0, 4.0], RANK_TOL));
        assert!(!in_span(&m, &[1.0, 0.0], RANK_TOL));
    }
}
