//! JSON scenario files.
//!
//! Complex numbers are `[re, im]` pairs, matrices are row-major arrays of
//! rows. Unknown fields are rejected. Every validation error names the
//! offending field, e.g. `timeline.steps[0]: not unitary`.
//!
//! ```json
//! {
//!   "name": "qubit",
//!   "dimension": 2,
//!   "initial_state": { "ket": [[1, 0], [0, 0]] },
//!   "timeline": { "moments": ["t_i", "t_f"], "steps": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]] },
//!   "measured": { "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]] },
//!   "candidates": [
//!     { "name": "B", "moment": "t_i", "observable": { "projectors": [
//!         [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
//!         [[[0, 0], [0, 0]], [[0, 0], [1, 0]]] ] } }
//!   ]
//! }
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{
    check_unitary, hermitian_deviation, validate_projector, CMatrix, CVector, Tolerances, C64,
};
use crate::model::{Candidate, DensityOperator, Experiment, SpectralObservable, Timeline};

pub type ComplexSpec = [f64; 2];
pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    pub initial_state: StateSpec,
    pub timeline: TimelineSpec,
    pub measured: ObservableSpec,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
}

/// Exactly one of `ket` or `density`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<ComplexSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineSpec {
    pub moments: Vec<String>,
    pub steps: Vec<MatrixSpec>,
}

/// Either `projectors` (with optional `eigenvalues`) or a Hermitian `matrix`
/// to be decomposed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub name: String,
    pub moment: String,
    pub observable: ObservableSpec,
    #[serde(default = "default_true")]
    pub meaningful: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_coarsening: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol_matrix: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig_group_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_gap_min: Option<f64>,
}

impl ToleranceSpec {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            atol_matrix: self.atol_matrix.unwrap_or(base.atol_matrix),
            eig_group_tol: self.eig_group_tol.unwrap_or(base.eig_group_tol),
            prob_tol: self.prob_tol.unwrap_or(base.prob_tol),
            witness_gap_min: self.witness_gap_min.unwrap_or(base.witness_gap_min),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioErrorKind {
    Syntax,
    Validation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub kind: ScenarioErrorKind,
    /// Field path (`timeline.steps[0]`) or `line L, column C` for syntax errors.
    pub path: String,
    pub message: String,
}

impl ScenarioError {
    fn validation(path: impl Into<String>, message: impl fmt::Display) -> Self {
        ScenarioError {
            kind: ScenarioErrorKind::Validation,
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ScenarioErrorKind::Syntax => {
                write!(f, "syntax error at {}: {}", self.path, self.message)
            }
            ScenarioErrorKind::Validation => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

type Parsed<T> = std::result::Result<T, ScenarioError>;

/// A validated scenario: the document as written plus the experiment and
/// tolerances it describes.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub document: ScenarioDocument,
    pub experiment: Experiment,
    pub tolerances: Tolerances,
}

pub fn parse_scenario(bytes: &[u8]) -> Parsed<Scenario> {
    let document: ScenarioDocument = serde_json::from_slice(bytes).map_err(|e| ScenarioError {
        kind: ScenarioErrorKind::Syntax,
        path: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let (experiment, tolerances) = document.validate()?;
    Ok(Scenario {
        document,
        experiment,
        tolerances,
    })
}

impl ScenarioDocument {
    /// Builds the experiment, reporting the first invalid field.
    pub fn validate(&self) -> Parsed<(Experiment, Tolerances)> {
        let tol = self
            .tolerances
            .as_ref()
            .map(|t| t.apply(Tolerances::default()))
            .unwrap_or_default();
        tol.validate()
            .map_err(|e| ScenarioError::validation("tolerances", e))?;

        let dim = self.dimension;
        if dim == 0 {
            return Err(ScenarioError::validation("dimension", "must be positive"));
        }

        let initial = self.initial_state.build(dim, &tol)?;

        let t = &self.timeline;
        if t.moments.len() != t.steps.len() + 1 {
            return Err(ScenarioError::validation(
                "timeline.moments",
                format!(
                    "{} moments need {} steps, got {}",
                    t.moments.len(),
                    t.moments.len().saturating_sub(1),
                    t.steps.len()
                ),
            ));
        }
        for (i, m) in t.moments.iter().enumerate() {
            if t.moments[..i].contains(m) {
                return Err(ScenarioError::validation(
                    format!("timeline.moments[{i}]"),
                    format!("duplicate moment `{m}`"),
                ));
            }
        }
        let mut steps = Vec::with_capacity(t.steps.len());
        for (i, s) in t.steps.iter().enumerate() {
            let path = format!("timeline.steps[{i}]");
            let u = to_matrix(s, dim, &path)?;
            if check_unitary(&u, &tol).is_err() {
                return Err(ScenarioError::validation(path, "not unitary"));
            }
            steps.push(u);
        }
        let timeline = Timeline::new(t.moments.clone(), steps, &tol)
            .map_err(|e| ScenarioError::validation("timeline", e))?;

        let measured = self.measured.build(dim, &tol, "measured")?;

        let mut candidates = Vec::with_capacity(self.candidates.len());
        for (i, c) in self.candidates.iter().enumerate() {
            let path = format!("candidates[{i}]");
            if self.candidates[..i].iter().any(|o| o.name == c.name) {
                return Err(ScenarioError::validation(
                    format!("{path}.name"),
                    format!("duplicate candidate `{}`", c.name),
                ));
            }
            if !t.moments.contains(&c.moment) {
                return Err(ScenarioError::validation(
                    format!("{path}.moment"),
                    format!("unknown moment `{}`", c.moment),
                ));
            }
            let observable = c
                .observable
                .build(dim, &tol, &format!("{path}.observable"))?;
            let mut cand = Candidate::new(c.name.clone(), c.moment.clone(), observable)
                .meaningful(c.meaningful);
            if let Some(partition) = &c.measured_coarsening {
                measured.coarsen_keep_min(partition, &tol).map_err(|e| {
                    ScenarioError::validation(format!("{path}.measured_coarsening"), e)
                })?;
                cand = cand.against_coarsening(partition.clone());
            }
            candidates.push(cand);
        }

        let experiment = Experiment::new(initial, timeline, measured, candidates)
            .map_err(|e| ScenarioError::validation("scenario", e))?;
        Ok((experiment, tol))
    }

    /// Writes an experiment back out. Matrices are stored exactly, so parsing
    /// the result reproduces the experiment bit for bit.
    pub fn from_experiment(
        exp: &Experiment,
        tol: &Tolerances,
        name: Option<&str>,
        description: Option<&str>,
    ) -> Self {
        let tolerances = (*tol != Tolerances::default()).then_some(ToleranceSpec {
            atol_matrix: Some(tol.atol_matrix),
            eig_group_tol: Some(tol.eig_group_tol),
            prob_tol: Some(tol.prob_tol),
            witness_gap_min: Some(tol.witness_gap_min),
        });
        ScenarioDocument {
            name: name.map(str::to_string),
            description: description.map(str::to_string),
            dimension: exp.dim(),
            initial_state: StateSpec {
                ket: None,
                density: Some(from_matrix(exp.initial_state().matrix())),
            },
            timeline: TimelineSpec {
                moments: exp.timeline().moments().to_vec(),
                steps: exp.timeline().steps().iter().map(from_matrix).collect(),
            },
            measured: ObservableSpec::from_observable(exp.measured()),
            candidates: exp
                .candidates()
                .iter()
                .map(|c| CandidateSpec {
                    name: c.name.clone(),
                    moment: c.moment.clone(),
                    observable: ObservableSpec::from_observable(&c.observable),
                    meaningful: c.meaningful,
                    measured_coarsening: c.measured_coarsening.clone(),
                })
                .collect(),
            tolerances,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }
}

impl StateSpec {
    fn build(&self, dim: usize, tol: &Tolerances) -> Parsed<DensityOperator> {
        match (&self.ket, &self.density) {
            (Some(ket), None) => {
                if ket.len() != dim {
                    return Err(ScenarioError::validation(
                        "initial_state.ket",
                        format!("expected {dim} amplitudes, got {}", ket.len()),
                    ));
                }
                let v = CVector::from_iterator(dim, ket.iter().map(|z| C64::new(z[0], z[1])));
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(ScenarioError::validation(
                        "initial_state.ket",
                        "non-finite amplitude",
                    ));
                }
                if (v.norm() - 1.0).abs() > tol.prob_tol.sqrt() {
                    return Err(ScenarioError::validation(
                        "initial_state.ket",
                        format!("ket norm is {}, expected 1", v.norm()),
                    ));
                }
                DensityOperator::pure(&v)
                    .map_err(|e| ScenarioError::validation("initial_state.ket", e))
            }
            (None, Some(rho)) => {
                let m = to_matrix(rho, dim, "initial_state.density")?;
                DensityOperator::new(m, tol)
                    .map_err(|e| ScenarioError::validation("initial_state.density", e))
            }
            _ => Err(ScenarioError::validation(
                "initial_state",
                "give exactly one of `ket` or `density`",
            )),
        }
    }
}

impl ObservableSpec {
    fn build(&self, dim: usize, tol: &Tolerances, path: &str) -> Parsed<SpectralObservable> {
        let observable = match (&self.projectors, &self.matrix) {
            (Some(projectors), None) => {
                let mut mats = Vec::with_capacity(projectors.len());
                for (k, p) in projectors.iter().enumerate() {
                    let ppath = format!("{path}.projectors[{k}]");
                    let m = to_matrix(p, dim, &ppath)?;
                    if !validate_projector(&m, tol) {
                        return Err(ScenarioError::validation(ppath, "not a projector"));
                    }
                    mats.push(m);
                }
                let eigenvalues = match &self.eigenvalues {
                    Some(values) => values.clone(),
                    None => (0..mats.len()).map(|k| k as f64).collect(),
                };
                SpectralObservable::new(eigenvalues, mats, None, tol)
                    .map_err(|e| ScenarioError::validation(path, e))?
            }
            (None, Some(matrix)) => {
                if self.eigenvalues.is_some() {
                    return Err(ScenarioError::validation(
                        format!("{path}.eigenvalues"),
                        "eigenvalues come from `matrix`; drop this field",
                    ));
                }
                let mpath = format!("{path}.matrix");
                let m = to_matrix(matrix, dim, &mpath)?;
                let deviation = hermitian_deviation(&m);
                if deviation > tol.atol_matrix {
                    return Err(ScenarioError::validation(
                        mpath,
                        format!("not Hermitian (deviation {deviation:.3e})"),
                    ));
                }
                SpectralObservable::from_hermitian(&m, tol)
                    .map_err(|e| ScenarioError::validation(mpath, e))?
            }
            _ => {
                return Err(ScenarioError::validation(
                    path,
                    "give exactly one of `projectors` or `matrix`",
                ))
            }
        };
        match &self.labels {
            Some(labels) if labels.len() != observable.len() => Err(ScenarioError::validation(
                format!("{path}.labels"),
                format!(
                    "{} labels for {} eigen-projectors",
                    labels.len(),
                    observable.len()
                ),
            )),
            Some(labels) => Ok(observable.with_labels(labels.clone())),
            None => Ok(observable),
        }
    }

    pub fn from_observable(obs: &SpectralObservable) -> Self {
        ObservableSpec {
            projectors: Some(obs.projectors().iter().map(from_matrix).collect()),
            eigenvalues: Some(obs.eigenvalues().to_vec()),
            matrix: None,
            labels: obs.labels().map(<[String]>::to_vec),
        }
    }
}

fn to_matrix(spec: &MatrixSpec, dim: usize, path: &str) -> Parsed<CMatrix> {
    if spec.len() != dim {
        return Err(ScenarioError::validation(
            path,
            format!("expected {dim} rows, got {}", spec.len()),
        ));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (i, row) in spec.iter().enumerate() {
        if row.len() != dim {
            return Err(ScenarioError::validation(
                format!("{path}[{i}]"),
                format!("expected {dim} entries, got {}", row.len()),
            ));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(ScenarioError::validation(
                    format!("{path}[{i}][{j}]"),
                    "non-finite entry",
                ));
            }
            m[(i, j)] = C64::new(z[0], z[1]);
        }
    }
    Ok(m)
}

fn from_matrix(m: &CMatrix) -> MatrixSpec {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}
