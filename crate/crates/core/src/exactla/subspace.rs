use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubspaceError {
    #[error("no subspaces given")]
    Empty,
    #[error("bases live in different ambient dimensions")]
    AmbientMismatch,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Orthonormal basis (as columns) of the intersection of the column spans.
///
/// Each input must have orthonormal columns. The intersection is the null space of
/// the stacked complements I − UᵢUᵢᵀ; singular values below `tol · σ_max` count as zero.
pub fn subspace_intersect(bases: &[DMatrix<f64>], tol: f64) -> Result<DMatrix<f64>, SubspaceError> {
    let first = bases.first().ok_or(SubspaceError::Empty)?;
    let d = first.nrows();
    if bases.iter().any(|b| b.nrows() != d) {
        return Err(SubspaceError::AmbientMismatch);
    }
    let mut stacked = DMatrix::<f64>::zeros(d * bases.len(), d);
    for (i, u) in bases.iter().enumerate() {
        let comp = DMatrix::<f64>::identity(d, d) - u * u.transpose();
        stacked.view_mut((i * d, 0), (d, d)).copy_from(&comp);
    }
    Ok(null_space(&stacked, tol))
}

/// Orthonormal basis of the numerical null space (columns).
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let d = m.ncols();
    // pad so the SVD always returns all d right singular vectors
    let m = if m.nrows() < d {
        let mut p = DMatrix::zeros(d, d);
        p.view_mut((0, 0), (m.nrows(), d)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<_> = (0..d)
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= tol * smax)
        .map(|i| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the column span, rank decided by `tol · σ_max`.
pub fn orthonormal_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<_> = (0..svd.singular_values.len())
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > tol * smax)
        .map(|i| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}
