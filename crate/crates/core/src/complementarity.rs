//! Which-result versus interference classification of intermediate
//! observables.
//!
//! For a candidate `B` attached to moment `t`, everything is decided on the
//! formally evolved projectors `Q_k^f = U(t_f − t) Q_k U(t_f − t)†` and the
//! measured projectors `P_n`:
//!
//! * `B` is which-result iff every cross-block `Q_k^f P_n Q_k′^f` (k ≠ k′)
//!   vanishes, equivalently `[B^f, A] = 0`;
//! * it is *simplest* which-result iff each `Q_k^f` fits inside a single
//!   `P_n(k)` with `k ↦ n(k)` a bijection, in which case `B` coincides with
//!   the retrospective observable `A^r(t)`;
//! * otherwise an explicit initial state is built whose final statistics
//!   differ from those of its butchered mixture.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    c, commutator_norm, frobenius, hermitian_eigen, leading_singular_pair, trace_product, CMatrix,
    CVector, Tolerances, C64,
};
use crate::model::{ButcheredMixture, Candidate, DensityOperator, Experiment, SpectralObservable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    WhichResult,
    Interference,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::WhichResult => "which-result",
            Verdict::Interference => "interference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhichResultCertificate {
    pub moment: String,
    /// `true` iff `B` equals `A^r(t)` projector-wise.
    pub simplest: bool,
    /// `bijection[k] = n(k)`; present only when `simplest`.
    pub bijection: Option<Vec<usize>>,
    /// For each `k`, the outcomes `n` reachable from eigen-event `Q_k`.
    pub reachable: Vec<Vec<usize>>,
}

/// Result of deciding the range-containment condition.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateOutcome {
    Certificate(WhichResultCertificate),
    /// The condition fails. `unmatched` lists eigen-events with no single
    /// outcome of certainty; `collisions` lists outcomes claimed twice.
    NoCertificate {
        unmatched: Vec<usize>,
        collisions: Vec<usize>,
    },
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&WhichResultCertificate> {
        match self {
            CertificateOutcome::Certificate(cert) => Some(cert),
            CertificateOutcome::NoCertificate { .. } => None,
        }
    }

    pub fn is_certificate(&self) -> bool {
        self.certificate().is_some()
    }
}

/// An initial state whose raw and butchered final statistics differ.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceWitness {
    pub k: usize,
    pub k_prime: usize,
    pub n: usize,
    /// Unit vector in the range of `Q_k^f`.
    pub l_k: CVector,
    /// Unit vector in the range of `Q_k′^f`.
    pub l_k_prime: CVector,
    pub alpha: C64,
    pub beta: C64,
    /// `U(t_f − t_i)† (α l_k + β l_k′)`.
    pub initial_ket: CVector,
    pub initial_state: DensityOperator,
    /// `|⟨l_k|P_n|l_k′⟩|`.
    pub predicted_gap: f64,
    /// Gap obtained by simulating the witness forward.
    pub simulated_gap: f64,
    /// Gap below `witness_gap_min`: algebraically real, practically invisible.
    pub marginal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub candidate: String,
    pub moment: String,
    pub meaningful: bool,
    pub verdict: Verdict,
    pub certificate: Option<WhichResultCertificate>,
    pub witness: Option<InterferenceWitness>,
    /// `‖[B^f, A]‖_F` with the declared eigenvalues.
    pub commutator_norm: f64,
    /// `max ‖Q_k^f P_n Q_k′^f‖_F` over k ≠ k′ and n.
    pub max_cross_block: f64,
    /// Whether the commutator and the cross-block criteria agreed.
    pub criteria_agree: bool,
}

impl Classification {
    pub fn is_simplest(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.simplest)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub entries: Vec<Classification>,
    /// At least one meaningful candidate is which-result.
    pub absolute_which_result: bool,
}

/// Largest cross-block and where it sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossBlockScan {
    pub max_norm: f64,
    /// `(k, n, k′)` of the largest block, if any pair k ≠ k′ exists.
    pub argmax: Option<(usize, usize, usize)>,
}

/// Scans `Q_k^f P_n Q_k′^f` for all k ≠ k′ and n. Ties keep the first
/// triple in (k, n, k′) lexicographic order.
pub fn cross_block_scan(b_final: &SpectralObservable, a: &SpectralObservable) -> CrossBlockScan {
    // ‖Q_k P Q_k′‖_F = ‖V_k† P V_k′‖_F for orthonormal range bases V
    let ranges: Vec<CMatrix> = b_final.projectors().iter().map(range_basis).collect();
    let mut best = CrossBlockScan {
        max_norm: 0.0,
        argmax: None,
    };
    for (k, vk) in ranges.iter().enumerate() {
        for (n, p) in a.projectors().iter().enumerate() {
            let left = vk.adjoint() * p;
            for (kp, vkp) in ranges.iter().enumerate() {
                if kp == k {
                    continue;
                }
                let norm = frobenius(&(&left * vkp));
                if best.argmax.is_none() || norm > best.max_norm {
                    best = CrossBlockScan {
                        max_norm: norm,
                        argmax: Some((k, n, kp)),
                    };
                }
            }
        }
    }
    best
}

fn range_basis(q: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(q);
    let columns: Vec<CVector> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| vectors.column(i).into_owned())
        .collect();
    CMatrix::from_columns(&columns)
}

/// Largest change in any outcome probability caused by butchering `ρ(t)`
/// with respect to `B` before evolving it to the final moment.
pub fn verify_blindness(
    rho_t: &DensityOperator,
    b: &SpectralObservable,
    u_tail: &CMatrix,
    a: &SpectralObservable,
    tol: &Tolerances,
) -> Result<f64> {
    let dim = rho_t.dim();
    for d in [b.dim(), a.dim(), u_tail.nrows()] {
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            });
        }
    }
    let raw = rho_t.evolve(u_tail, tol)?;
    let butchered = ButcheredMixture::butcher(rho_t, b, tol)?
        .recombine()
        .evolve(u_tail, tol)?;
    Ok(a.projectors()
        .iter()
        .map(|p| {
            (trace_product(p, raw.matrix()).re - trace_product(p, butchered.matrix()).re).abs()
        })
        .fold(0.0, f64::max))
}

/// `ρ(t)` shows interference relative to `B` in the measurement of `A`.
pub fn exhibits_interference(
    rho_t: &DensityOperator,
    b: &SpectralObservable,
    u_tail: &CMatrix,
    a: &SpectralObservable,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(verify_blindness(rho_t, b, u_tail, a, tol)? > tol.prob_tol)
}

/// Everything the decision procedures need about one candidate.
struct Setup {
    moment: String,
    u_tail: CMatrix,
    measured: SpectralObservable,
    b: SpectralObservable,
    b_final: SpectralObservable,
}

impl Setup {
    fn new(candidate: &Candidate, exp: &Experiment, tol: &Tolerances) -> Result<Self> {
        let timeline = exp.timeline();
        let index = timeline.index_of(&candidate.moment)?;
        if index + 1 >= timeline.moments().len() {
            return Err(Error::NotBeforeFinal(candidate.moment.clone()));
        }
        if candidate.observable.dim() != exp.dim() {
            return Err(Error::DimensionMismatch {
                expected: exp.dim(),
                found: candidate.observable.dim(),
            });
        }
        let u_tail = exp.tail(&candidate.moment)?;
        let measured = exp.measured_for(candidate, tol)?;
        let b_final = candidate.observable.forward_evolve(&u_tail, tol)?;
        Ok(Setup {
            moment: candidate.moment.clone(),
            u_tail,
            measured,
            b: candidate.observable.clone(),
            b_final,
        })
    }

    fn reachable(&self, tol: &Tolerances) -> Vec<Vec<usize>> {
        self.b_final
            .projectors()
            .iter()
            .map(|q| {
                self.measured
                    .projectors()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| frobenius(&(*p * q)) > tol.atol_matrix)
                    .map(|(n, _)| n)
                    .collect()
            })
            .collect()
    }

    fn certify(&self, tol: &Tolerances) -> Result<CertificateOutcome> {
        let ps = self.measured.projectors();
        let mut assignment = Vec::with_capacity(self.b.len());
        let mut unmatched = Vec::new();
        for (k, s) in self.b_final.projectors().iter().enumerate() {
            // certainty for every state with property Q_k ⟺ range(U Q_k U†) ⊆ range(P_n)
            match ps
                .iter()
                .position(|p| frobenius(&(p * s - s)) <= tol.atol_matrix)
            {
                Some(n) => assignment.push(n),
                None => unmatched.push(k),
            }
        }
        let mut collisions: Vec<usize> = (0..ps.len())
            .filter(|n| assignment.iter().filter(|&&m| m == *n).count() > 1)
            .collect();
        if unmatched.is_empty() && collisions.is_empty() && assignment.len() != ps.len() {
            // injective but not onto: some outcome is never certain
            collisions = (0..ps.len()).filter(|n| !assignment.contains(n)).collect();
        }
        if !unmatched.is_empty() || !collisions.is_empty() {
            return Ok(CertificateOutcome::NoCertificate {
                unmatched,
                collisions,
            });
        }

        // conclusion: Q_k = U† P_n(k) U for every k
        let retro = self.measured.retrospect(&self.u_tail, tol)?;
        let matches = self
            .b
            .projectors()
            .iter()
            .zip(&assignment)
            .all(|(q, &n)| frobenius(&(q - &retro.projectors()[n])) <= tol.atol_matrix);
        if !matches {
            return Ok(CertificateOutcome::NoCertificate {
                unmatched: (0..self.b.len()).collect(),
                collisions: Vec::new(),
            });
        }
        Ok(CertificateOutcome::Certificate(WhichResultCertificate {
            moment: self.moment.clone(),
            simplest: true,
            bijection: Some(assignment),
            reachable: self.reachable(tol),
        }))
    }

    fn witness(
        &self,
        exp: &Experiment,
        scan: CrossBlockScan,
        tol: &Tolerances,
    ) -> Result<InterferenceWitness> {
        let (k, n, k_prime) = match scan.argmax {
            Some(triple) if scan.max_norm > tol.atol_matrix => triple,
            _ => return Err(Error::NoWitness),
        };
        let qk = &self.b_final.projectors()[k];
        let qkp = &self.b_final.projectors()[k_prime];
        let p = &self.measured.projectors()[n];

        let block = qk * p * qkp;
        let (_, left, right) = leading_singular_pair(&block);
        let l_k = normalized(qk * left);
        let l_k_prime = normalized(qkp * right);

        let overlap = l_k.dotc(&(p * &l_k_prime));
        let phi = -overlap.arg();
        let alpha = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let beta = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phi);
        // gap = αβ*⟨l_k′|P_n|l_k⟩ + βα*⟨l_k|P_n|l_k′⟩ = 2·Re(βα*·overlap) = |overlap|
        let predicted_gap = overlap.norm();

        let final_ket = &l_k * alpha + &l_k_prime * beta;
        let full = exp.propagator(exp.timeline().initial(), exp.timeline().last())?;
        let initial_ket = full.adjoint() * &final_ket;
        let initial_state = DensityOperator::pure(&initial_ket)?;

        let lead_in = exp.propagator(exp.timeline().initial(), &self.moment)?;
        let rho_t = initial_state.evolve(&lead_in, tol)?;
        let raw = rho_t.evolve(&self.u_tail, tol)?;
        let butchered = ButcheredMixture::butcher(&rho_t, &self.b, tol)?
            .recombine()
            .evolve(&self.u_tail, tol)?;
        let simulated_gap =
            trace_product(p, raw.matrix()).re - trace_product(p, butchered.matrix()).re;
        if (simulated_gap - predicted_gap).abs() > tol.prob_tol {
            return Err(Error::WitnessMismatch {
                predicted: predicted_gap,
                simulated: simulated_gap,
            });
        }

        Ok(InterferenceWitness {
            k,
            k_prime,
            n,
            l_k,
            l_k_prime,
            alpha,
            beta,
            initial_ket,
            initial_state,
            predicted_gap,
            simulated_gap,
            marginal: predicted_gap < tol.witness_gap_min,
        })
    }
}

fn normalized(v: CVector) -> CVector {
    let norm = v.norm();
    v.unscale(norm)
}

/// Decides the bijection condition for `candidate`. A certificate always
/// has `simplest = true`.
pub fn certify_which_result(
    candidate: &Candidate,
    exp: &Experiment,
    tol: &Tolerances,
) -> Result<CertificateOutcome> {
    Setup::new(candidate, exp, tol)?.certify(tol)
}

/// Builds an initial state exposing the interference of `candidate`, or
/// fails with [`Error::NoWitness`] when all cross-blocks vanish.
pub fn construct_witness(
    candidate: &Candidate,
    exp: &Experiment,
    tol: &Tolerances,
) -> Result<InterferenceWitness> {
    let setup = Setup::new(candidate, exp, tol)?;
    let scan = cross_block_scan(&setup.b_final, &setup.measured);
    setup.witness(exp, scan, tol)
}

pub fn classify(
    candidate: &Candidate,
    exp: &Experiment,
    tol: &Tolerances,
) -> Result<Classification> {
    let setup = Setup::new(candidate, exp, tol)?;
    let scan = cross_block_scan(&setup.b_final, &setup.measured);
    let comm = commutator_norm(&setup.b_final.matrix(), &setup.measured.matrix())?;
    let scale = (frobenius(&setup.b_final.matrix()) * frobenius(&setup.measured.matrix())).max(1.0);
    let commuting = comm <= tol.atol_matrix * scale;
    let blocks_vanish = scan.max_norm <= tol.atol_matrix;

    let (verdict, certificate, witness) = if blocks_vanish {
        let certificate = match setup.certify(tol)? {
            CertificateOutcome::Certificate(cert) => cert,
            CertificateOutcome::NoCertificate { .. } => WhichResultCertificate {
                moment: setup.moment.clone(),
                simplest: false,
                bijection: None,
                reachable: setup.reachable(tol),
            },
        };
        (Verdict::WhichResult, Some(certificate), None)
    } else {
        let witness = setup.witness(exp, scan, tol)?;
        (Verdict::Interference, None, Some(witness))
    };

    Ok(Classification {
        candidate: candidate.name.clone(),
        moment: candidate.moment.clone(),
        meaningful: candidate.meaningful,
        verdict,
        certificate,
        witness,
        commutator_norm: comm,
        max_cross_block: scan.max_norm,
        criteria_agree: commuting == blocks_vanish,
    })
}

/// Classifies every candidate in declaration order.
pub fn classify_all(exp: &Experiment, tol: &Tolerances) -> Result<ClassificationReport> {
    let entries = exp
        .candidates()
        .par_iter()
        .map(|cand| classify(cand, exp, tol))
        .collect::<Result<Vec<_>>>()?;
    let absolute_which_result = entries
        .iter()
        .any(|e| e.meaningful && e.verdict == Verdict::WhichResult);
    Ok(ClassificationReport {
        entries,
        absolute_which_result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_projector, identity, CVector, ONE, ZERO};
    use crate::model::Timeline;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn computational(dim: usize) -> SpectralObservable {
        SpectralObservable::from_projectors(
            (0..dim).map(|i| basis_projector(dim, &[i])).collect(),
            &tol(),
        )
        .unwrap()
    }

    fn hadamard() -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
    }

    fn plus() -> DensityOperator {
        DensityOperator::pure(&CVector::from_vec(vec![ONE, ONE])).unwrap()
    }

    fn qubit_experiment(step: CMatrix) -> Experiment {
        let a = computational(2);
        Experiment::new(
            plus(),
            Timeline::single(step, &tol()).unwrap(),
            a.clone(),
            vec![Candidate::new("B", "t_i", a)],
        )
        .unwrap()
    }

    #[test]
    fn identity_evolution_is_simplest_which_result() {
        let exp = qubit_experiment(identity(2));
        let cls = classify(&exp.candidates()[0], &exp, &tol()).unwrap();
        assert_eq!(cls.verdict, Verdict::WhichResult);
        assert!(cls.is_simplest());
        assert_eq!(cls.certificate.unwrap().bijection, Some(vec![0, 1]));
        assert!(cls.criteria_agree);
    }

    #[test]
    fn swap_gives_non_identity_bijection() {
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let exp = qubit_experiment(x);
        let outcome = certify_which_result(&exp.candidates()[0], &exp, &tol()).unwrap();
        assert_eq!(outcome.certificate().unwrap().bijection, Some(vec![1, 0]));
    }

    #[test]
    fn hadamard_gives_interference_with_half_gap() {
        let exp = qubit_experiment(hadamard());
        let cls = classify(&exp.candidates()[0], &exp, &tol()).unwrap();
        assert_eq!(cls.verdict, Verdict::Interference);
        let w = cls.witness.unwrap();
        assert!((w.predicted_gap - 0.5).abs() < 1e-12);
        assert!((w.simulated_gap - w.predicted_gap).abs() < 1e-12);
        assert!(!w.marginal);
        assert!(cls.criteria_agree);
    }

    #[test]
    fn no_witness_for_which_result() {
        let exp = qubit_experiment(identity(2));
        assert_eq!(
            construct_witness(&exp.candidates()[0], &exp, &tol()),
            Err(Error::NoWitness)
        );
    }

    #[test]
    fn blindness_for_block_diagonal_state_is_zero() {
        let rho = DensityOperator::maximally_mixed(2);
        let dev = verify_blindness(
            &rho,
            &computational(2),
            &hadamard(),
            &computational(2),
            &tol(),
        )
        .unwrap();
        assert!(dev < 1e-15);
        assert!(!exhibits_interference(
            &rho,
            &computational(2),
            &hadamard(),
            &computational(2),
            &tol()
        )
        .unwrap());
    }

    #[test]
    fn blindness_against_retrospective_observable() {
        let u = hadamard();
        let a = computational(2);
        let b = a.retrospect(&u, &tol()).unwrap();
        let rho =
            DensityOperator::pure(&CVector::from_vec(vec![c(0.8, 0.0), c(0.0, 0.6)])).unwrap();
        assert!(verify_blindness(&rho, &b, &u, &a, &tol()).unwrap() <= tol().prob_tol);
    }

    #[test]
    fn coherent_plus_through_hadamard_shows_half() {
        let dev = verify_blindness(
            &plus(),
            &computational(2),
            &hadamard(),
            &computational(2),
            &tol(),
        )
        .unwrap();
        assert!((dev - 0.5).abs() < 1e-12);
    }

    #[test]
    fn candidate_at_final_moment_is_rejected() {
        let a = computational(2);
        let exp = Experiment::new(
            plus(),
            Timeline::single(identity(2), &tol()).unwrap(),
            a.clone(),
            vec![Candidate::new("B", "t_f", a)],
        )
        .unwrap();
        assert_eq!(
            classify(&exp.candidates()[0], &exp, &tol()),
            Err(Error::NotBeforeFinal("t_f".into()))
        );
    }

    #[test]
    fn empty_candidate_list_gives_empty_report() {
        let exp = qubit_experiment(identity(2))
            .with_candidates(vec![])
            .unwrap();
        let report = classify_all(&exp, &tol()).unwrap();
        assert!(report.entries.is_empty());
        assert!(!report.absolute_which_result);
    }

    #[test]
    fn absolute_flag_ignores_unmeaningful_candidates() {
        let a = computational(2);
        let exp = qubit_experiment(identity(2))
            .with_candidates(vec![Candidate::new("B", "t_i", a).meaningful(false)])
            .unwrap();
        let report = classify_all(&exp, &tol()).unwrap();
        assert_eq!(report.entries[0].verdict, Verdict::WhichResult);
        assert!(!report.absolute_which_result);
    }
}
