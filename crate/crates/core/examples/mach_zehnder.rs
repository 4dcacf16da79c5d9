//! Mach-Zehnder interferometer with and without the second beam splitter.
//!
//! Sweeps the preparator angle, prints detector probabilities, and
//! classifies the which-way observable for both devices.

use qcomplement::catalog::mach_zehnder;
use qcomplement::complementarity::classify_all;
use qcomplement::Tolerances;

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();

    println!("theta  which-way (D_h, D_v)   interference (D_h, D_v)");
    for theta in [0.0, 30.0, 45.0, 60.0, 90.0, 135.0] {
        let ww = mach_zehnder(theta, false)?.final_probabilities(&tol)?;
        let int = mach_zehnder(theta, true)?.final_probabilities(&tol)?;
        println!(
            "{theta:>5}  ({:.4}, {:.4})       ({:.4}, {:.4})",
            ww[0], ww[1], int[0], int[1]
        );
    }

    for (device, interference) in [("which-way", false), ("interference", true)] {
        let exp = mach_zehnder(45.0, interference)?;
        let report = classify_all(&exp, &tol)?;
        for c in &report.entries {
            println!(
                "{device} device: {} at {} is {} (|[B^f, A]| = {:.3e})",
                c.candidate,
                c.moment,
                c.verdict.as_str(),
                c.commutator_norm
            );
        }
    }
    Ok(())
}
