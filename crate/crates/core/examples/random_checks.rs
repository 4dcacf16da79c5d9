//! Random experiments: commuting candidates are blind to butchering for
//! every state, non-commuting ones have a witness whose gap matches the
//! prediction.

use qcomplement::complementarity::{classify, verify_blindness, Verdict};
use qcomplement::random::{
    haar_unitary, random_commuting_observable, random_mixed_state, random_observable,
};
use qcomplement::{Candidate, Experiment, Timeline, Tolerances};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut which, mut interference, mut worst_blind, mut worst_gap) = (0, 0, 0.0f64, 0.0f64);

    for _ in 0..100 {
        let dim = rng.random_range(2..=6);
        let u = haar_unitary(dim, &mut rng);
        let a = random_observable(dim, rng.random_range(2..=dim.min(4)), &mut rng);
        let blocks = rng.random_range(2..=dim.min(4));
        let b_final = if rng.random_bool(0.5) {
            random_commuting_observable(&a, blocks, &mut rng)
        } else {
            random_observable(dim, blocks, &mut rng)
        };
        let b = b_final.retrospect(&u, &tol)?;
        let exp = Experiment::new(
            random_mixed_state(dim, &mut rng),
            Timeline::single(u.clone(), &tol)?,
            a.clone(),
            vec![Candidate::new("B", "t_i", b.clone())],
        )?;
        let c = classify(&exp.candidates()[0], &exp, &tol)?;
        match c.verdict {
            Verdict::WhichResult => {
                which += 1;
                for _ in 0..20 {
                    let rho = random_mixed_state(dim, &mut rng);
                    worst_blind = worst_blind.max(verify_blindness(&rho, &b, &u, &a, &tol)?);
                }
            }
            Verdict::Interference => {
                interference += 1;
                let w = c.witness.expect("interference comes with a witness");
                worst_gap = worst_gap.max((w.simulated_gap - w.predicted_gap).abs());
            }
        }
    }
    println!("which-result {which}, interference {interference}");
    println!("largest butchering shift for which-result candidates: {worst_blind:.2e}");
    println!("largest witness prediction error: {worst_gap:.2e}");
    Ok(())
}
