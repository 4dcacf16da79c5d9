//! Finite-dimensional quantum experiments (state, unitary timeline,
//! projective measurement) and the classification of intermediate
//! observables as *which-result* or *interference* observables.
//!
//! The crate is layered:
//!
//! * [`linalg`]: dense complex matrices, projector checks, spectral
//!   decomposition, commutators;
//! * [`model`]: density operators, spectral observables, timelines,
//!   butchered (coherence-deprived) mixtures;
//! * [`complementarity`]: the decision procedures, with certificates for
//!   which-result observables and explicit witness states for interference;
//! * [`catalog`]: ready-made Mach-Zehnder, two-slit and Stern-Gerlach
//!   experiments;
//! * [`scenario`] and [`report`]: the JSON scenario format and the
//!   deterministic reports produced by the `qcomplement` binary.
//!
//! ```
//! use qcomplement::catalog::{build, CatalogId};
//! use qcomplement::complementarity::{classify_all, Verdict};
//! use qcomplement::Tolerances;
//!
//! let exp = build(CatalogId::MzInterference).unwrap();
//! let report = classify_all(&exp, &Tolerances::default()).unwrap();
//! assert_eq!(report.entries[0].verdict, Verdict::Interference);
//! ```

pub mod catalog;
pub mod cli;
pub mod complementarity;
pub mod error;
pub mod linalg;
pub mod model;
pub mod random;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, Tolerances, C64};
pub use model::{
    ButcheredMixture, Candidate, DensityOperator, Experiment, SpectralObservable, Timeline,
};
