//! Dense complex-matrix substrate.
//!
//! Every "equals zero" decision in the crate goes through the thresholds in
//! [`Tolerances`]; matrix comparisons use the Frobenius norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SpectralObservable;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds used by every predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius-norm threshold for "this matrix is zero".
    pub atol_matrix: f64,
    /// Width used when clustering eigenvalues into degenerate groups.
    pub eig_group_tol: f64,
    /// Threshold for comparing probabilities.
    pub prob_tol: f64,
    /// Smallest probability gap for which a witness counts as demonstrable.
    pub witness_gap_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            atol_matrix: 1e-9,
            eig_group_tol: 1e-8,
            prob_tol: 1e-9,
            witness_gap_min: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("atol_matrix", self.atol_matrix),
            ("eig_group_tol", self.eig_group_tol),
            ("prob_tol", self.prob_tol),
            ("witness_gap_min", self.witness_gap_min),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m.nrows())
}

pub fn check_dim(m: &CMatrix, dim: usize) -> Result<()> {
    let found = check_square(m)?;
    if found != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found,
        });
    }
    Ok(())
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

pub fn unitary_deviation(u: &CMatrix) -> f64 {
    frobenius(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn check_unitary(u: &CMatrix, tol: &Tolerances) -> Result<()> {
    check_square(u)?;
    let deviation = unitary_deviation(u);
    if deviation > tol.atol_matrix {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// `true` iff `m` is Hermitian and idempotent within `atol_matrix`.
pub fn validate_projector(m: &CMatrix, tol: &Tolerances) -> bool {
    if check_square(m).is_err() {
        return false;
    }
    hermitian_deviation(m) <= tol.atol_matrix && frobenius(&(m * m - m)) <= tol.atol_matrix
}

/// `‖XY − YX‖_F`.
pub fn commutator_norm(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    let dim = check_square(x)?;
    check_dim(y, dim)?;
    Ok(frobenius(&(x * y - y * x)))
}

/// `U M U†`.
pub fn conjugate(u: &CMatrix, m: &CMatrix) -> CMatrix {
    u * m * u.adjoint()
}

/// `|v⟩⟨v|` for a (not necessarily normalized) vector.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `tr(XY)` without forming the product.
pub fn trace_product(x: &CMatrix, y: &CMatrix) -> C64 {
    let n = x.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// Projector onto the span of the listed basis states.
pub fn basis_projector(dim: usize, indices: &[usize]) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for &i in indices {
        p[(i, i)] = ONE;
    }
    p
}

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues, one
/// eigenvector per column.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(h.nrows(), h.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Splits `H` into distinct eigenvalues and their eigen-projectors.
///
/// Sorted eigenvalues are clustered by single linkage: consecutive values
/// closer than `eig_group_tol` share a projector. The reported eigenvalue of
/// a cluster is its mean.
pub fn spectral_decompose(h: &CMatrix, tol: &Tolerances) -> Result<SpectralObservable> {
    let dim = check_square(h)?;
    let deviation = hermitian_deviation(h);
    if deviation > tol.atol_matrix {
        return Err(Error::NotHermitian { deviation });
    }
    let (values, vectors) = hermitian_eigen(h);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &value) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(group) if value - values[*group.last().unwrap()] <= tol.eig_group_tol => {
                group.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    for group in &groups {
        let mean = group.iter().map(|&i| values[i]).sum::<f64>() / group.len() as f64;
        let mut p = CMatrix::zeros(dim, dim);
        for &i in group {
            let v = vectors.column(i).into_owned();
            p += outer(&v);
        }
        eigenvalues.push(mean);
        projectors.push(p);
    }
    SpectralObservable::new(eigenvalues, projectors, None, tol)
}

/// Largest singular value of `m` with its left and right singular vectors.
pub fn leading_singular_pair(m: &CMatrix) -> (f64, CVector, CVector) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (best, sigma) = svd.singular_values.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, s)| if s > acc.1 { (i, s) } else { acc },
    );
    let left = u.column(best).into_owned();
    // v_t holds V†; row `best` conjugated is the right singular vector.
    let right = v_t.row(best).adjoint();
    (sigma, left, right)
}

/// Gram-Schmidt: extends the given orthonormal-ish columns to a unitary by
/// orthonormalizing them first, then sweeping in standard basis vectors.
pub fn orthonormal_completion(columns: &[CVector], dim: usize) -> CMatrix {
    let mut basis: Vec<CVector> = Vec::with_capacity(dim);
    let candidates = columns
        .iter()
        .cloned()
        .chain((0..dim).map(|i| basis_vector(dim, i)));
    for mut v in candidates {
        if basis.len() == dim {
            break;
        }
        // two passes keep the result orthogonal to machine precision
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v.unscale(norm));
        }
    }
    let mut u = CMatrix::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        u.set_column(j, b);
    }
    u
}

/// Block-diagonal direct sum of square matrices.
pub fn direct_sum(blocks: &[&CMatrix]) -> CMatrix {
    let dim = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(dim, dim);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((offset, offset), (b.nrows(), b.ncols()))
            .copy_from(*b);
        offset += b.nrows();
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
