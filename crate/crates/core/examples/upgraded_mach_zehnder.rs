//! Three-mode Mach-Zehnder with an extra beam splitter in the upper arm.
//!
//! With the top splitter in place, the path observable at the start is
//! which-result while the same path question asked one step later is not.

use qcomplement::catalog::upgraded_mach_zehnder;
use qcomplement::complementarity::classify_all;
use qcomplement::Tolerances;

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();
    for (title, top) in [("interference device", true), ("which-way device", false)] {
        let exp = upgraded_mach_zehnder(top)?;
        let a = exp.measured();
        println!("{title}");
        for (n, p) in exp.final_probabilities(&tol)?.iter().enumerate() {
            println!("  P({}) = {:.6}", a.label(n), p);
        }
        let report = classify_all(&exp, &tol)?;
        for c in &report.entries {
            let mut line = format!(
                "  {:<6} at {:<3}  {}",
                c.candidate,
                c.moment,
                c.verdict.as_str()
            );
            if c.is_simplest() {
                line.push_str(" (simplest)");
            }
            if let Some(w) = &c.witness {
                let b = &exp.candidate(&c.candidate)?.observable;
                line.push_str(&format!(
                    ", witness on {}/{} with gap {:.3}",
                    b.label(w.k),
                    b.label(w.k_prime),
                    w.simulated_gap
                ));
            }
            println!("{line}");
        }
        println!("  absolute which-result: {}", report.absolute_which_result);
    }
    Ok(())
}
