//! Random instances for property tests and demonstrations.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, outer, CMatrix, CVector, Tolerances, C64};
use crate::model::{DensityOperator, SpectralObservable};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` divided out.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian_matrix(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::pure(&random_ket(dim, rng)).expect("gaussian ket is non-zero")
}

/// Random full-rank mixed state `G G† / tr(G G†)`.
pub fn random_mixed_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let g = gaussian_matrix(dim, rng);
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityOperator::new(m.unscale(tr), &Tolerances::default()).expect("Wishart matrix is a state")
}

/// Splits `0..dim` into `blocks` non-empty consecutive runs.
pub fn random_block_sizes<R: Rng + ?Sized>(dim: usize, blocks: usize, rng: &mut R) -> Vec<usize> {
    assert!(blocks >= 1 && blocks <= dim);
    let mut sizes = vec![1; blocks];
    for _ in 0..dim - blocks {
        let i = rng.random_range(0..blocks);
        sizes[i] += 1;
    }
    sizes
}

/// Observable whose eigen-projectors are spanned by consecutive columns of
/// `basis`, grouped by `sizes`, with random distinct eigenvalues.
pub fn observable_from_basis<R: Rng + ?Sized>(
    basis: &CMatrix,
    sizes: &[usize],
    rng: &mut R,
) -> SpectralObservable {
    let dim = basis.nrows();
    let mut projectors = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &size in sizes {
        let mut p = CMatrix::zeros(dim, dim);
        for j in start..start + size {
            p += outer(&basis.column(j).into_owned());
        }
        projectors.push(p);
        start += size;
    }
    let mut values: Vec<f64> = Vec::with_capacity(sizes.len());
    while values.len() < sizes.len() {
        let v: f64 = rng.random_range(-3.0..3.0);
        if values.iter().all(|w| (w - v).abs() > 0.1) {
            values.push(v);
        }
    }
    SpectralObservable::new(values, projectors, None, &Tolerances::default())
        .expect("orthonormal columns give a valid observable")
}

/// Random observable with `blocks` eigen-projectors in a Haar-random basis.
pub fn random_observable<R: Rng + ?Sized>(
    dim: usize,
    blocks: usize,
    rng: &mut R,
) -> SpectralObservable {
    let basis = haar_unitary(dim, rng);
    let sizes = random_block_sizes(dim, blocks, rng);
    observable_from_basis(&basis, &sizes, rng)
}

/// Random observable commuting with `a`: a basis of eigenvectors of `a`
/// (random within each eigenspace), shuffled and grouped into `blocks`
/// projectors. Any such grouping commutes with `a`.
pub fn random_commuting_observable<R: Rng + ?Sized>(
    a: &SpectralObservable,
    blocks: usize,
    rng: &mut R,
) -> SpectralObservable {
    let dim = a.dim();
    let mut columns: Vec<CVector> = Vec::with_capacity(dim);
    for p in a.projectors() {
        let (values, vectors) = crate::linalg::hermitian_eigen(p);
        let range: Vec<CVector> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.5)
            .map(|(i, _)| vectors.column(i).into_owned())
            .collect();
        let r = haar_unitary(range.len(), rng);
        for j in 0..range.len() {
            let mut v = CVector::zeros(dim);
            for (i, base) in range.iter().enumerate() {
                v += base * r[(i, j)];
            }
            columns.push(v);
        }
    }
    columns.shuffle(rng);
    let mut basis = CMatrix::zeros(dim, dim);
    for (j, v) in columns.iter().enumerate() {
        basis.set_column(j, v);
    }
    let sizes = random_block_sizes(dim, blocks, rng);
    observable_from_basis(&basis, &sizes, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator_norm, unitary_deviation};
    use rand::SeedableRng;

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for dim in 1..7 {
            assert!(unitary_deviation(&haar_unitary(dim, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn commuting_observables_commute() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let dim = rng.random_range(2..=6);
            let blocks_a = rng.random_range(2..=dim.min(4));
            let a = random_observable(dim, blocks_a, &mut rng);
            let blocks_b = rng.random_range(2..=dim.min(4));
            let b = random_commuting_observable(&a, blocks_b, &mut rng);
            assert!(commutator_norm(&a.matrix(), &b.matrix()).unwrap() < 1e-10);
        }
    }
}
