//! Thin dense linear-algebra helpers over nalgebra.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold used for rank and regularity decisions.
pub const RANK_RTOL: f64 = 1e-9;

pub fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `RANK_RTOL * sigma_max`.
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    let s = singular_values(m);
    let Some(&smax) = s.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > RANK_RTOL * smax).count()
}

/// Solve a square system by LU; `None` when singular.
pub fn solve(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let rhs = DVector::from_column_slice(b);
    a.clone()
        .lu()
        .solve(&rhs)
        .map(|x| x.iter().copied().collect())
}

/// Minimum-norm least-squares solution via the SVD pseudo-inverse.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    if a.nrows() == 0 {
        return vec![0.0; a.ncols()];
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = if smax > 0.0 { RANK_RTOL * smax } else { 1.0 };
    let rhs = DVector::from_column_slice(b);
    match svd.solve(&rhs, eps) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; a.ncols()],
    }
}

/// Max-abs norm of a slice.
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_rank_one_matrix() {
        let m = to_matrix(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(numeric_rank(&m), 1);
        assert_eq!(numeric_rank(&DMatrix::zeros(3, 3)), 0);
    }

    #[test]
    fn min_norm_solution_of_underdetermined_system() {
        let a = to_matrix(&[vec![1.0, 1.0]]);
        let x = lstsq_min_norm(&a, &[2.0]);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lu_detects_singular() {
        let a = to_matrix(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(solve(&a, &[1.0, 1.0]).is_none());
        let b = to_matrix(&[vec![2.0, 0.0], vec![0.0, 4.0]]);
        assert_eq!(solve(&b, &[2.0, 2.0]).unwrap(), vec![1.0, 0.5]);
    }
}
