use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Tolerances};

use super::observable::SpectralObservable;
use super::state::{clamp_probability, DensityOperator};

/// One definite-value constituent of a butchered mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Index of the source eigen-projector.
    pub index: usize,
    pub weight: f64,
    pub state: DensityOperator,
}

/// The coherence-deprived ("butchered") decomposition `Σ_k p_k ρ_k` of a
/// state with respect to an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcheredMixture {
    weights: Vec<f64>,
    branches: Vec<Branch>,
    source: SpectralObservable,
}

impl ButcheredMixture {
    /// `p_k = tr(Q_k ρ)`, `ρ_k = Q_k ρ Q_k / p_k`. Branches with
    /// `p_k ≤ prob_tol` are dropped; the stored weights are never renormalized.
    pub fn butcher(
        rho: &DensityOperator,
        observable: &SpectralObservable,
        tol: &Tolerances,
    ) -> Result<Self> {
        if observable.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: observable.dim(),
            });
        }
        let mut weights = Vec::with_capacity(observable.len());
        let mut branches = Vec::new();
        for (k, q) in observable.projectors().iter().enumerate() {
            let block = q * rho.matrix() * q;
            let weight = clamp_probability(crate::linalg::trace(&block).re, tol);
            weights.push(weight);
            if weight > tol.prob_tol {
                branches.push(Branch {
                    index: k,
                    weight,
                    state: DensityOperator::from_raw(block.unscale(weight)),
                });
            }
        }
        Ok(ButcheredMixture {
            weights,
            branches,
            source: observable.clone(),
        })
    }

    /// All weights `p_k`, one per eigen-projector of the source observable.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn source(&self) -> &SpectralObservable {
        &self.source
    }

    /// `Σ_k p_k ρ_k`.
    pub fn recombine(&self) -> DensityOperator {
        let dim = self.source.dim();
        let matrix = self
            .branches
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, b| {
                acc + b.state.matrix().scale(b.weight)
            });
        DensityOperator::from_raw(matrix)
    }
}
