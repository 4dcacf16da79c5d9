//! An experiment built from scratch: a qubit, a Hadamard gate, a
//! measurement in the computational basis, and three candidates.

use qcomplement::complementarity::classify_all;
use qcomplement::linalg::{basis_projector, c};
use qcomplement::{
    CMatrix, Candidate, DensityOperator, Experiment, SpectralObservable, Timeline, Tolerances,
};

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();
    let s = 1.0 / 2f64.sqrt();
    let hadamard = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    let z = SpectralObservable::from_projectors(
        vec![basis_projector(2, &[0]), basis_projector(2, &[1])],
        &tol,
    )?
    .with_labels(["0", "1"]);
    let x = z.retrospect(&hadamard, &tol)?.with_labels(["+", "-"]);

    let exp = Experiment::new(
        DensityOperator::maximally_mixed(2),
        Timeline::new(["before", "after"], vec![hadamard], &tol)?,
        z.clone(),
        vec![
            Candidate::new("Z", "before", z),
            Candidate::new("X", "before", x),
            Candidate::new("trivial", "before", SpectralObservable::trivial(2)).meaningful(false),
        ],
    )?;

    let report = classify_all(&exp, &tol)?;
    for c in &report.entries {
        println!(
            "{:<8} {:<13} simplest={} max cross-block {:.3}",
            c.candidate,
            c.verdict.as_str(),
            c.is_simplest(),
            c.max_cross_block
        );
    }
    println!("absolute which-result: {}", report.absolute_which_result);
    Ok(())
}
