//! Single and double Stern-Gerlach set-ups.

use qcomplement::catalog::{double_stern_gerlach, stern_gerlach};
use qcomplement::complementarity::classify_all;
use qcomplement::Tolerances;

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();

    let s = 1.0 / 2f64.sqrt();
    for axis in [[0.0, 0.0, 1.0], [s, 0.0, s], [1.0, 0.0, 0.0]] {
        let exp = stern_gerlach(axis)?;
        let probs = exp.final_probabilities(&tol)?;
        let report = classify_all(&exp, &tol)?;
        let c = &report.entries[0];
        println!(
            "axis {:?}: dots ({:.4}, {:.4}), spin observable is {}{}",
            axis,
            probs[0],
            probs[1],
            c.verdict.as_str(),
            if c.is_simplest() { " (simplest)" } else { "" }
        );
    }

    let exp = double_stern_gerlach()?;
    let a = exp.measured();
    println!("double Stern-Gerlach");
    for (n, p) in exp.final_probabilities(&tol)?.iter().enumerate() {
        println!("  P({}) = {:.4}", a.label(n), p);
    }
    for c in &classify_all(&exp, &tol)?.entries {
        let reachable = c
            .certificate
            .as_ref()
            .map(|cert| format!("{:?}", cert.reachable))
            .unwrap_or_default();
        println!(
            "  {} at {}: {} {}",
            c.candidate,
            c.moment,
            c.verdict.as_str(),
            reachable
        );
    }
    Ok(())
}
