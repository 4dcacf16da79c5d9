use crate::error::{Error, Result};
use crate::linalg::{
    check_dim, check_square, check_unitary, conjugate, hermitian_deviation, hermitian_eigen, outer,
    trace, trace_product, validate_projector, CMatrix, CVector, Tolerances,
};

use super::observable::SpectralObservable;

/// A density operator `ρ`: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > tol.atol_matrix {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {deviation:.3e})"
            )));
        }
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > tol.prob_tol {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let (values, _) = hermitian_eigen(&matrix);
        if let Some(&min) = values.first() {
            if min < -tol.atol_matrix {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityOperator { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket; the ket is normalized first.
    pub fn pure(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(
                "ket has zero or non-finite norm".into(),
            ));
        }
        Ok(DensityOperator {
            matrix: outer(&ket.unscale(norm)),
        })
    }

    /// Trusted constructor for matrices produced by operations that preserve
    /// the invariants.
    pub(crate) fn from_raw(matrix: CMatrix) -> Self {
        DensityOperator { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: crate::linalg::identity(dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &CMatrix, tol: &Tolerances) -> Result<Self> {
        check_unitary(u, tol)?;
        check_dim(u, self.dim())?;
        Ok(DensityOperator {
            matrix: conjugate(u, &self.matrix),
        })
    }

    /// `tr(Q ρ)` for an arbitrary operator `Q` of matching dimension.
    pub fn expectation(&self, q: &CMatrix) -> Result<f64> {
        check_dim(q, self.dim())?;
        Ok(trace_product(q, &self.matrix).re)
    }

    /// Born rule: `p_n = tr(P_n ρ)`, values within `prob_tol` of 0 or 1 clamped.
    pub fn born_probabilities(
        &self,
        observable: &SpectralObservable,
        tol: &Tolerances,
    ) -> Result<Vec<f64>> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.dim(),
            });
        }
        Ok(observable
            .projectors()
            .iter()
            .map(|p| clamp_probability(trace_product(p, &self.matrix).re, tol))
            .collect())
    }

    /// `|tr(Q ρ) − 1| ≤ prob_tol`.
    pub fn has_definite_value(&self, q: &CMatrix, tol: &Tolerances) -> Result<bool> {
        check_dim(q, self.dim())?;
        if !validate_projector(q, tol) {
            return Err(Error::NotProjector);
        }
        Ok((self.expectation(q)? - 1.0).abs() <= tol.prob_tol)
    }

    /// Coherent relative to `observable`: some cross-block `Q_k ρ Q_k′`
    /// (k ≠ k′) is non-zero.
    pub fn is_coherent(&self, observable: &SpectralObservable, tol: &Tolerances) -> Result<bool> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.dim(),
            });
        }
        let qs = observable.projectors();
        for (k, qk) in qs.iter().enumerate() {
            let left = qk * &self.matrix;
            for (j, qj) in qs.iter().enumerate() {
                if j != k && crate::linalg::frobenius(&(&left * qj)) > tol.atol_matrix {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

pub(crate) fn clamp_probability(p: f64, tol: &Tolerances) -> f64 {
    if p < 0.0 && p >= -tol.prob_tol {
        0.0
    } else if p > 1.0 && p <= 1.0 + tol.prob_tol {
        1.0
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_projector, c, frobenius, identity};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn plus() -> DensityOperator {
        DensityOperator::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap()
    }

    fn computational(dim: usize) -> SpectralObservable {
        SpectralObservable::from_projectors(
            (0..dim).map(|i| basis_projector(dim, &[i])).collect(),
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_trace_and_negative_spectrum() {
        let m = identity(2);
        assert!(matches!(
            DensityOperator::new(m, &tol()),
            Err(Error::InvalidState(_))
        ));
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(
            DensityOperator::new(m, &tol()),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn evolve_by_identity_is_noop() {
        let rho = plus();
        let out = rho.evolve(&identity(2), &tol()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn evolve_by_balanced_beam_splitter() {
        let h = 1.0 / 2f64.sqrt();
        let u = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, h), c(0.0, h), c(h, 0.0)]);
        let rho = DensityOperator::new(basis_projector(2, &[0]), &tol()).unwrap();
        let out = rho.evolve(&u, &tol()).unwrap();
        // direct product: U|0⟩ = (1, i)/√2, so ρ′ = [[½, −i/2], [i/2, ½]]
        let expected =
            CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)]);
        assert!(frobenius(&(out.matrix() - expected)) < 1e-15);
        assert!((trace(out.matrix()).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evolve_rejects_non_unitary_and_mismatched() {
        let rho = plus();
        assert!(matches!(
            rho.evolve(&identity(2).scale(1.1), &tol()),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            rho.evolve(&identity(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn born_rule_examples() {
        let inside = DensityOperator::new(basis_projector(3, &[0]), &tol()).unwrap();
        assert_eq!(
            inside
                .born_probabilities(&computational(3), &tol())
                .unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        let p = plus()
            .born_probabilities(&computational(2), &tol())
            .unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!(matches!(
            plus().born_probabilities(&computational(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityOperator::maximally_mixed(2);
        assert!(!diag.is_coherent(&computational(2), &tol()).unwrap());
        assert!(!plus()
            .is_coherent(&SpectralObservable::trivial(2), &tol())
            .unwrap());
        // Q_0 ρ Q_1 = ½|0⟩⟨1|
        assert!(plus().is_coherent(&computational(2), &tol()).unwrap());
    }

    #[test]
    fn definite_value_examples() {
        let zero = DensityOperator::new(basis_projector(2, &[0]), &tol()).unwrap();
        assert!(zero
            .has_definite_value(&basis_projector(2, &[0]), &tol())
            .unwrap());
        assert!(!zero
            .has_definite_value(&basis_projector(2, &[1]), &tol())
            .unwrap());
        assert!(!plus()
            .has_definite_value(&basis_projector(2, &[0]), &tol())
            .unwrap());
        assert!((plus().expectation(&basis_projector(2, &[0])).unwrap() - 0.5).abs() < 1e-15);
        let not_projector = identity(2).scale(0.5);
        assert_eq!(
            plus().has_definite_value(&not_projector, &tol()),
            Err(Error::NotProjector)
        );
    }
}
