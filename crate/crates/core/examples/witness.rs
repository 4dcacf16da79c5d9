//! Builds the interference witness for a candidate and checks it by hand:
//! evolve the witness state with and without butchering and compare the
//! outcome probabilities.

use qcomplement::catalog::{build, CatalogId};
use qcomplement::complementarity::construct_witness;
use qcomplement::model::ButcheredMixture;
use qcomplement::Tolerances;

fn main() -> qcomplement::Result<()> {
    let tol = Tolerances::default();
    let id: CatalogId = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "umz-interference".into())
        .parse()?;
    let exp = build(id)?;

    for cand in exp.candidates() {
        let w = match construct_witness(cand, &exp, &tol) {
            Ok(w) => w,
            Err(qcomplement::Error::NoWitness) => {
                println!("{}: no witness, every cross-block vanishes", cand.name);
                continue;
            }
            Err(e) => return Err(e),
        };
        let probe = exp.clone().with_initial(w.initial_state.clone())?;
        let rho_t = probe.state_at(&cand.moment, &tol)?;
        let tail = probe.tail(&cand.moment)?;
        let a = probe.measured_for(cand, &tol)?;
        let raw = rho_t.evolve(&tail, &tol)?.born_probabilities(&a, &tol)?;
        let cut = ButcheredMixture::butcher(&rho_t, &cand.observable, &tol)?
            .recombine()
            .evolve(&tail, &tol)?
            .born_probabilities(&a, &tol)?;
        println!(
            "{}: events {}/{}, outcome {}: coherent {:.6}, butchered {:.6}, predicted gap {:.6}",
            cand.name,
            cand.observable.label(w.k),
            cand.observable.label(w.k_prime),
            a.label(w.n),
            raw[w.n],
            cut[w.n],
            w.predicted_gap
        );
    }
    Ok(())
}
