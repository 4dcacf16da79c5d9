//! Deterministic reports: what the binary prints.
//!
//! Every float is rounded to 12 significant digits before it is stored, so
//! the JSON form is byte-stable across runs and platforms with IEEE doubles.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complementarity::{classify, verify_blindness, Classification, Verdict};
use crate::error::Result;
use crate::linalg::{Tolerances, C64};
use crate::model::Experiment;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<Outcome>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<CandidateSummary>>,
    /// Some meaningful candidate is a which-result observable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absolute_which_result: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub index: usize,
    pub label: String,
    pub eigenvalue: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub event: String,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub name: String,
    pub moment: String,
    pub meaningful: bool,
    /// Outcome labels of the measured observable the candidate is judged against.
    pub measured_against: Vec<String>,
    pub verdict: String,
    pub simplest: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bijection: Option<Vec<Pairing>>,
    /// For each eigen-event, the outcomes it can lead to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reachable: Option<Vec<Vec<String>>>,
    pub commutator_norm: f64,
    pub max_cross_block: f64,
    pub criteria_agree: bool,
    /// Largest probability shift butchering causes for the scenario's own
    /// initial state. Zero does not make the candidate which-result.
    pub initial_state_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub events: [String; 2],
    pub outcome: String,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub initial_ket: Vec<[f64; 2]>,
    pub predicted_gap: f64,
    pub simulated_gap: f64,
    pub marginal: bool,
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn complex(z: C64) -> [f64; 2] {
    [round12(z.re), round12(z.im)]
}

impl Report {
    fn empty(exp: &Experiment, tol: &Tolerances, scenario: Option<&str>) -> Self {
        Report {
            tool: ToolInfo {
                name: TOOL_NAME.to_string(),
                version: TOOL_VERSION.to_string(),
            },
            tolerances: *tol,
            scenario: scenario.map(str::to_string),
            dimension: exp.dim(),
            outcomes: None,
            candidates: None,
            absolute_which_result: None,
        }
    }

    /// Outcome probabilities at the final moment.
    pub fn simulate(exp: &Experiment, tol: &Tolerances, scenario: Option<&str>) -> Result<Self> {
        let mut report = Self::empty(exp, tol, scenario);
        report.outcomes = Some(outcomes(exp, tol)?);
        Ok(report)
    }

    /// Classification of every candidate, or only `only` when given.
    pub fn classify(
        exp: &Experiment,
        tol: &Tolerances,
        scenario: Option<&str>,
        only: Option<&str>,
    ) -> Result<Self> {
        let mut report = Self::empty(exp, tol, scenario);
        let summaries = candidate_summaries(exp, tol, only)?;
        if only.is_none() {
            report.absolute_which_result = Some(
                summaries
                    .iter()
                    .any(|s| s.meaningful && s.verdict == Verdict::WhichResult.as_str()),
            );
        }
        report.candidates = Some(summaries);
        Ok(report)
    }

    /// Probabilities and classifications together.
    pub fn full(exp: &Experiment, tol: &Tolerances, scenario: Option<&str>) -> Result<Self> {
        let mut report = Self::classify(exp, tol, scenario, None)?;
        report.outcomes = Some(outcomes(exp, tol)?);
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let name = self.scenario.as_deref().unwrap_or("scenario");
        let _ = writeln!(out, "{name} (dimension {})", self.dimension);
        if let Some(outcomes) = &self.outcomes {
            let _ = writeln!(out, "\noutcome probabilities at the final moment");
            let width = outcomes.iter().map(|o| o.label.len()).max().unwrap_or(0);
            for o in outcomes {
                let _ = writeln!(
                    out,
                    "  {:<width$}  {}",
                    o.label,
                    self.show(o.probability),
                    width = width
                );
            }
        }
        if let Some(candidates) = &self.candidates {
            let _ = writeln!(out, "\ncandidates");
            for c in candidates {
                self.candidate_table(&mut out, c);
            }
        }
        if let Some(absolute) = self.absolute_which_result {
            let _ = writeln!(
                out,
                "\nwhich-result in the absolute sense: {}",
                if absolute { "yes" } else { "no" }
            );
        }
        out
    }

    fn show(&self, x: f64) -> String {
        if x.abs() < self.tolerances.prob_tol {
            "0".to_string()
        } else {
            format!("{x}")
        }
    }

    fn candidate_table(&self, out: &mut String, c: &CandidateSummary) {
        let mut verdict = c.verdict.clone();
        if c.simplest {
            verdict.push_str(" (simplest)");
        }
        if !c.meaningful {
            verdict.push_str(", not meaningful");
        }
        let _ = writeln!(out, "  {} at {}: {}", c.name, c.moment, verdict);
        let _ = writeln!(
            out,
            "    measured against: {}",
            c.measured_against.join(", ")
        );
        if let Some(bijection) = &c.bijection {
            let pairs: Vec<String> = bijection
                .iter()
                .map(|p| format!("{} -> {}", p.event, p.outcome))
                .collect();
            let _ = writeln!(out, "    bijection: {}", pairs.join(", "));
        } else if let Some(reachable) = &c.reachable {
            let sets: Vec<String> = reachable
                .iter()
                .map(|r| format!("{{{}}}", r.join(", ")))
                .collect();
            let _ = writeln!(out, "    reachable outcomes: {}", sets.join(" "));
        }
        let _ = writeln!(
            out,
            "    commutator norm {}, largest cross-block {}{}",
            self.show(c.commutator_norm),
            self.show(c.max_cross_block),
            if c.criteria_agree {
                ""
            } else {
                " (criteria disagree)"
            }
        );
        let _ = writeln!(
            out,
            "    butchering shift for the given initial state: {}",
            self.show(c.initial_state_deviation)
        );
        match &c.witness {
            Some(w) => {
                let _ = writeln!(
                    out,
                    "    witness: events {} / {}, outcome {}, gap {} (simulated {}){}",
                    w.events[0],
                    w.events[1],
                    w.outcome,
                    w.predicted_gap,
                    w.simulated_gap,
                    if w.marginal { ", marginal" } else { "" }
                );
                let amplitudes: Vec<String> = w
                    .initial_ket
                    .iter()
                    .map(|z| format!("{}{:+}i", z[0], z[1]))
                    .collect();
                let _ = writeln!(out, "    witness initial ket: [{}]", amplitudes.join(", "));
            }
            None if c.verdict == Verdict::WhichResult.as_str() => {
                let _ = writeln!(out, "    no witness: every cross-block vanishes");
            }
            None => {}
        }
    }
}

fn outcomes(exp: &Experiment, tol: &Tolerances) -> Result<Vec<Outcome>> {
    let probabilities = exp.final_probabilities(tol)?;
    let a = exp.measured();
    Ok(probabilities
        .iter()
        .enumerate()
        .map(|(n, &p)| Outcome {
            index: n,
            label: a.label(n),
            eigenvalue: round12(a.eigenvalues()[n]),
            probability: round12(p),
        })
        .collect())
}

fn candidate_summaries(
    exp: &Experiment,
    tol: &Tolerances,
    only: Option<&str>,
) -> Result<Vec<CandidateSummary>> {
    let selected: Vec<_> = match only {
        Some(name) => vec![exp.candidate(name)?],
        None => exp.candidates().iter().collect(),
    };
    use rayon::prelude::*;
    selected
        .par_iter()
        .map(|cand| {
            let classification = classify(cand, exp, tol)?;
            let measured = exp.measured_for(cand, tol)?;
            let deviation = verify_blindness(
                &exp.state_at(&cand.moment, tol)?,
                &cand.observable,
                &exp.tail(&cand.moment)?,
                &measured,
                tol,
            )?;
            Ok(summarize(&classification, cand, &measured, deviation))
        })
        .collect()
}

fn summarize(
    c: &Classification,
    cand: &crate::model::Candidate,
    measured: &crate::model::SpectralObservable,
    deviation: f64,
) -> CandidateSummary {
    let b = &cand.observable;
    let bijection = c
        .certificate
        .as_ref()
        .and_then(|cert| cert.bijection.as_ref())
        .map(|map| {
            map.iter()
                .enumerate()
                .map(|(k, &n)| Pairing {
                    event: b.label(k),
                    outcome: measured.label(n),
                })
                .collect()
        });
    let reachable = c.certificate.as_ref().map(|cert| {
        cert.reachable
            .iter()
            .map(|ns| ns.iter().map(|&n| measured.label(n)).collect())
            .collect()
    });
    let witness = c.witness.as_ref().map(|w| WitnessSummary {
        events: [b.label(w.k), b.label(w.k_prime)],
        outcome: measured.label(w.n),
        alpha: complex(w.alpha),
        beta: complex(w.beta),
        initial_ket: w.initial_ket.iter().map(|&z| complex(z)).collect(),
        predicted_gap: round12(w.predicted_gap),
        simulated_gap: round12(w.simulated_gap),
        marginal: w.marginal,
    });
    CandidateSummary {
        name: c.candidate.clone(),
        moment: c.moment.clone(),
        meaningful: c.meaningful,
        measured_against: (0..measured.len()).map(|n| measured.label(n)).collect(),
        verdict: c.verdict.as_str().to_string(),
        simplest: c.is_simplest(),
        bijection,
        reachable,
        commutator_norm: round12(c.commutator_norm),
        max_cross_block: round12(c.max_cross_block),
        criteria_agree: c.criteria_agree,
        initial_state_deviation: round12(deviation),
        witness,
    }
}
