use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_unitary, identity, CMatrix, Tolerances};

use super::observable::{check_partition, SpectralObservable};
use super::state::DensityOperator;

/// Named moments and the unitary steps between consecutive ones.
///
/// `steps[j]` evolves the system from `moments[j]` to `moments[j + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    moments: Vec<String>,
    steps: Vec<CMatrix>,
}

impl Timeline {
    pub fn new<S: Into<String>>(
        moments: impl IntoIterator<Item = S>,
        steps: Vec<CMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let moments: Vec<String> = moments.into_iter().map(Into::into).collect();
        if moments.len() != steps.len() + 1 {
            return Err(Error::InvalidTimeline(format!(
                "{} moments need {} steps, got {}",
                moments.len(),
                moments.len().saturating_sub(1),
                steps.len()
            )));
        }
        for (i, m) in moments.iter().enumerate() {
            if moments[..i].contains(m) {
                return Err(Error::InvalidTimeline(format!("duplicate moment `{m}`")));
            }
        }
        for step in &steps {
            check_unitary(step, tol)?;
            check_dim(step, steps[0].nrows())?;
        }
        Ok(Timeline { moments, steps })
    }

    /// A single step from `t_i` to `t_f`.
    pub fn single(step: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(["t_i", "t_f"], vec![step], tol)
    }

    pub fn moments(&self) -> &[String] {
        &self.moments
    }

    pub fn steps(&self) -> &[CMatrix] {
        &self.steps
    }

    pub fn initial(&self) -> &str {
        &self.moments[0]
    }

    pub fn last(&self) -> &str {
        self.moments
            .last()
            .expect("timeline has at least one moment")
    }

    pub fn index_of(&self, moment: &str) -> Result<usize> {
        self.moments
            .iter()
            .position(|m| m == moment)
            .ok_or_else(|| Error::UnknownMoment(moment.to_string()))
    }

    /// Composed evolution `U(to − from)`: later steps multiply on the left.
    pub fn propagator(&self, from: &str, to: &str, dim: usize) -> Result<CMatrix> {
        let i = self.index_of(from)?;
        let j = self.index_of(to)?;
        if i > j {
            return Err(Error::BackwardInterval {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        Ok(self.steps[i..j]
            .iter()
            .fold(identity(dim), |acc, step| step * acc))
    }
}

/// An observable attached to an intermediate moment, to be classified.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub moment: String,
    pub observable: SpectralObservable,
    /// User-declared physical meaning; reported, never inferred.
    pub meaningful: bool,
    /// When set, the candidate is judged against this coarsening of the
    /// measured observable instead of the measured observable itself.
    pub measured_coarsening: Option<Vec<Vec<usize>>>,
}

impl Candidate {
    pub fn new(
        name: impl Into<String>,
        moment: impl Into<String>,
        observable: SpectralObservable,
    ) -> Self {
        Candidate {
            name: name.into(),
            moment: moment.into(),
            observable,
            meaningful: true,
            measured_coarsening: None,
        }
    }

    pub fn meaningful(mut self, meaningful: bool) -> Self {
        self.meaningful = meaningful;
        self
    }

    pub fn against_coarsening(mut self, partition: Vec<Vec<usize>>) -> Self {
        self.measured_coarsening = Some(partition);
        self
    }
}

/// Initial state, timeline, measured observable at the final moment, and
/// the candidate observables to classify.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    initial: DensityOperator,
    timeline: Timeline,
    measured: SpectralObservable,
    candidates: Vec<Candidate>,
}

impl Experiment {
    pub fn new(
        initial: DensityOperator,
        timeline: Timeline,
        measured: SpectralObservable,
        candidates: Vec<Candidate>,
    ) -> Result<Self> {
        let dim = initial.dim();
        if let Some(step) = timeline.steps().first() {
            check_dim(step, dim)?;
        }
        if measured.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: measured.dim(),
            });
        }
        for (i, cand) in candidates.iter().enumerate() {
            if candidates[..i].iter().any(|c| c.name == cand.name) {
                return Err(Error::InvalidObservable(format!(
                    "duplicate candidate name `{}`",
                    cand.name
                )));
            }
            if cand.observable.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: cand.observable.dim(),
                });
            }
            timeline.index_of(&cand.moment)?;
            if let Some(partition) = &cand.measured_coarsening {
                check_partition(partition, measured.len())?;
            }
        }
        Ok(Experiment {
            initial,
            timeline,
            measured,
            candidates,
        })
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn initial_state(&self) -> &DensityOperator {
        &self.initial
    }

    pub fn timeline(&self) -> &Timeline {
        &self.timeline
    }

    pub fn measured(&self) -> &SpectralObservable {
        &self.measured
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate(&self, name: &str) -> Result<&Candidate> {
        self.candidates
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }

    /// Same experiment with a different preparation.
    pub fn with_initial(mut self, initial: DensityOperator) -> Result<Self> {
        if initial.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: initial.dim(),
            });
        }
        self.initial = initial;
        Ok(self)
    }

    pub fn with_candidates(mut self, candidates: Vec<Candidate>) -> Result<Self> {
        let Experiment {
            initial,
            timeline,
            measured,
            ..
        } = self;
        self = Experiment::new(initial, timeline, measured, candidates)?;
        Ok(self)
    }

    pub fn propagator(&self, from: &str, to: &str) -> Result<CMatrix> {
        self.timeline.propagator(from, to, self.dim())
    }

    /// `U(t_f − t)`.
    pub fn tail(&self, moment: &str) -> Result<CMatrix> {
        self.propagator(moment, self.timeline.last())
    }

    /// `ρ(t) = U(t − t_i) ρ(t_i) U(t − t_i)†`.
    pub fn state_at(&self, moment: &str, tol: &Tolerances) -> Result<DensityOperator> {
        let u = self.propagator(self.timeline.initial(), moment)?;
        self.initial.evolve(&u, tol)
    }

    pub fn final_state(&self, tol: &Tolerances) -> Result<DensityOperator> {
        self.state_at(self.timeline.last(), tol)
    }

    /// Final-moment outcome probabilities of the measured observable.
    pub fn final_probabilities(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        self.final_state(tol)?
            .born_probabilities(&self.measured, tol)
    }

    /// The measured observable a candidate is judged against.
    pub fn measured_for(
        &self,
        candidate: &Candidate,
        tol: &Tolerances,
    ) -> Result<SpectralObservable> {
        match &candidate.measured_coarsening {
            Some(partition) => self.measured.coarsen_keep_min(partition, tol),
            None => Ok(self.measured.clone()),
        }
    }

    /// Retrospective observable `A^r(t) = U(t_f − t)† A U(t_f − t)`.
    pub fn retrospective(&self, moment: &str, tol: &Tolerances) -> Result<SpectralObservable> {
        self.measured.retrospect(&self.tail(moment)?, tol)
    }
}
