use crate::error::{Error, Result};
use crate::linalg::{
    check_square, check_unitary, conjugate, frobenius, identity, trace, validate_projector,
    CMatrix, Tolerances,
};

/// An observable in spectral form: distinct eigenvalues, each with an
/// orthogonal eigen-projector, the projectors summing to the identity.
///
/// Only the projector family enters the classifiers; eigenvalues are labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralObservable {
    eigenvalues: Vec<f64>,
    projectors: Vec<CMatrix>,
    labels: Option<Vec<String>>,
}

impl SpectralObservable {
    pub fn new(
        eigenvalues: Vec<f64>,
        projectors: Vec<CMatrix>,
        labels: Option<Vec<String>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidObservable("no eigen-projectors".into()));
        }
        if eigenvalues.len() != projectors.len() {
            return Err(Error::InvalidObservable(format!(
                "{} eigenvalues for {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != projectors.len() {
                return Err(Error::InvalidObservable(format!(
                    "{} labels for {} projectors",
                    labels.len(),
                    projectors.len()
                )));
            }
        }
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidObservable("non-finite eigenvalue".into()));
        }
        for (i, a) in eigenvalues.iter().enumerate() {
            if eigenvalues[..i].iter().any(|b| a == b) {
                return Err(Error::DuplicateValues);
            }
        }

        let dim = check_square(&projectors[0])?;
        let mut sum = CMatrix::zeros(dim, dim);
        for (k, p) in projectors.iter().enumerate() {
            crate::linalg::check_dim(p, dim)?;
            if !validate_projector(p, tol) {
                return Err(Error::InvalidObservable(format!(
                    "projector {k} is not an orthogonal projector"
                )));
            }
            if trace(p).re < 0.5 {
                return Err(Error::InvalidObservable(format!("projector {k} is zero")));
            }
            for (j, q) in projectors[..k].iter().enumerate() {
                if frobenius(&(p * q)) > tol.atol_matrix {
                    return Err(Error::InvalidObservable(format!(
                        "projectors {j} and {k} are not orthogonal"
                    )));
                }
            }
            sum += p;
        }
        if frobenius(&(sum - identity(dim))) > tol.atol_matrix {
            return Err(Error::InvalidObservable(
                "projectors do not sum to the identity".into(),
            ));
        }
        Ok(SpectralObservable {
            eigenvalues,
            projectors,
            labels,
        })
    }

    /// Uses `0, 1, 2, …` as eigenvalues.
    pub fn from_projectors(projectors: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let eigenvalues = (0..projectors.len()).map(|k| k as f64).collect();
        Self::new(eigenvalues, projectors, None, tol)
    }

    /// Decomposes a Hermitian matrix.
    pub fn from_hermitian(h: &CMatrix, tol: &Tolerances) -> Result<Self> {
        crate::linalg::spectral_decompose(h, tol)
    }

    /// The trivial observable `{I}`.
    pub fn trivial(dim: usize) -> Self {
        SpectralObservable {
            eigenvalues: vec![0.0],
            projectors: vec![identity(dim)],
            labels: None,
        }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(
            labels.len(),
            self.projectors.len(),
            "one label per projector"
        );
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of eigen-event `k`, falling back to its index.
    pub fn label(&self, k: usize) -> String {
        match &self.labels {
            Some(labels) => labels[k].clone(),
            None => k.to_string(),
        }
    }

    /// `Σ a_n P_n`.
    pub fn matrix(&self) -> CMatrix {
        let dim = self.dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(CMatrix::zeros(dim, dim), |acc, (a, p)| acc + p.scale(*a))
    }

    fn conjugated(&self, u: &CMatrix, tol: &Tolerances, forward: bool) -> Result<Self> {
        check_unitary(u, tol)?;
        crate::linalg::check_dim(u, self.dim())?;
        let projectors = self
            .projectors
            .iter()
            .map(|p| {
                if forward {
                    conjugate(u, p)
                } else {
                    u.adjoint() * p * u
                }
            })
            .collect();
        Ok(SpectralObservable {
            eigenvalues: self.eigenvalues.clone(),
            projectors,
            labels: self.labels.clone(),
        })
    }

    /// Retrospective form `U† P_n U`, eigenvalues copied verbatim.
    pub fn retrospect(&self, u: &CMatrix, tol: &Tolerances) -> Result<Self> {
        self.conjugated(u, tol, false)
    }

    /// Formally evolved form `U Q_k U†`.
    pub fn forward_evolve(&self, u: &CMatrix, tol: &Tolerances) -> Result<Self> {
        self.conjugated(u, tol, true)
    }

    /// Merges eigen-projectors according to `partition`; group `g` gets
    /// eigenvalue `new_values[g]`.
    pub fn coarsen(
        &self,
        partition: &[Vec<usize>],
        new_values: &[f64],
        tol: &Tolerances,
    ) -> Result<Self> {
        check_partition(partition, self.len())?;
        if new_values.len() != partition.len() {
            return Err(Error::InvalidPartition(format!(
                "{} values for {} groups",
                new_values.len(),
                partition.len()
            )));
        }
        let dim = self.dim();
        let projectors = partition
            .iter()
            .map(|group| {
                group.iter().fold(CMatrix::zeros(dim, dim), |acc, &k| {
                    acc + &self.projectors[k]
                })
            })
            .collect();
        let labels = self.labels.as_ref().map(|labels| {
            partition
                .iter()
                .map(|group| {
                    group
                        .iter()
                        .map(|&k| labels[k].as_str())
                        .collect::<Vec<_>>()
                        .join("+")
                })
                .collect()
        });
        Self::new(new_values.to_vec(), projectors, labels, tol)
    }

    /// Coarsening whose group values are the smallest original eigenvalue in
    /// each group (always distinct).
    pub fn coarsen_keep_min(&self, partition: &[Vec<usize>], tol: &Tolerances) -> Result<Self> {
        check_partition(partition, self.len())?;
        let values: Vec<f64> = partition
            .iter()
            .map(|group| {
                group
                    .iter()
                    .map(|&k| self.eigenvalues[k])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        self.coarsen(partition, &values, tol)
    }

    /// Pairs each projector of `self` with an equal projector of `other`.
    /// Returns `mapping[k] = n` when the families coincide up to ordering.
    pub fn projector_match(
        &self,
        other: &SpectralObservable,
        tol: &Tolerances,
    ) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.dim() != other.dim() {
            return None;
        }
        let mut used = vec![false; other.len()];
        let mut mapping = Vec::with_capacity(self.len());
        for p in &self.projectors {
            let n = (0..other.len())
                .find(|&n| !used[n] && frobenius(&(p - &other.projectors[n])) <= tol.atol_matrix)?;
            used[n] = true;
            mapping.push(n);
        }
        Some(mapping)
    }

    /// Equality up to eigenvalues: the projector families coincide.
    pub fn equal_up_to_eigenvalues(&self, other: &SpectralObservable, tol: &Tolerances) -> bool {
        self.projector_match(other, tol).is_some()
    }
}

pub(crate) fn check_partition(partition: &[Vec<usize>], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for group in partition {
        if group.is_empty() {
            return Err(Error::InvalidPartition("empty group".into()));
        }
        for &k in group {
            if k >= len {
                return Err(Error::InvalidPartition(format!(
                    "index {k} out of range for {len} eigen-projectors"
                )));
            }
            if seen[k] {
                return Err(Error::InvalidPartition(format!("index {k} appears twice")));
            }
            seen[k] = true;
        }
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("index {k} not covered")));
    }
    Ok(())
}
