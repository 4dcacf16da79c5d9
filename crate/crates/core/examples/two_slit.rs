//! Two slits with the screen near (paths overlap) and far (paths separated).

use qcomplement::catalog::two_slit;
use qcomplement::complementarity::classify_all;
use qcomplement::Tolerances;

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();
    let bins = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    for (title, near) in [("near screen", true), ("far screen", false)] {
        let exp = two_slit(bins, near)?;
        let probs = exp.final_probabilities(&tol)?;
        let shown: Vec<String> = probs.iter().map(|p| format!("{p:.3}")).collect();
        let c = &classify_all(&exp, &tol)?.entries[0];
        println!("{title}: bins [{}]", shown.join(" "));
        println!(
            "  slit observable: {}, largest cross-block {:.3}",
            c.verdict.as_str(),
            c.max_cross_block
        );
    }
    Ok(())
}
