//! States, observables, timelines and the coherence-deprived mixtures built
//! from them.

mod experiment;
mod mixture;
mod observable;
mod state;

pub use experiment::{Candidate, Experiment, Timeline};
pub use mixture::{Branch, ButcheredMixture};
pub use observable::SpectralObservable;
pub use state::DensityOperator;

use crate::error::Result;
use crate::linalg::{CMatrix, Tolerances};

/// `U ρ U†`.
pub fn evolve_state(
    rho: &DensityOperator,
    u: &CMatrix,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    rho.evolve(u, tol)
}

pub fn born_probabilities(
    observable: &SpectralObservable,
    rho: &DensityOperator,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    rho.born_probabilities(observable, tol)
}

pub fn retrospect(
    a: &SpectralObservable,
    u: &CMatrix,
    tol: &Tolerances,
) -> Result<SpectralObservable> {
    a.retrospect(u, tol)
}

pub fn forward_evolve_observable(
    b: &SpectralObservable,
    u: &CMatrix,
    tol: &Tolerances,
) -> Result<SpectralObservable> {
    b.forward_evolve(u, tol)
}

pub fn butcher(
    rho: &DensityOperator,
    b: &SpectralObservable,
    tol: &Tolerances,
) -> Result<ButcheredMixture> {
    ButcheredMixture::butcher(rho, b, tol)
}

pub fn recombine(mixture: &ButcheredMixture) -> DensityOperator {
    mixture.recombine()
}

pub fn is_coherent(
    rho: &DensityOperator,
    b: &SpectralObservable,
    tol: &Tolerances,
) -> Result<bool> {
    rho.is_coherent(b, tol)
}

pub fn coarsen(
    b: &SpectralObservable,
    partition: &[Vec<usize>],
    new_values: &[f64],
    tol: &Tolerances,
) -> Result<SpectralObservable> {
    b.coarsen(partition, new_values, tol)
}

pub fn has_definite_value(rho: &DensityOperator, q: &CMatrix, tol: &Tolerances) -> Result<bool> {
    rho.has_definite_value(q, tol)
}
