//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcomplement::catalog::{build, CatalogId};
use qcomplement::complementarity::{
    certify_which_result, classify, construct_witness, cross_block_scan, verify_blindness,
    CertificateOutcome, Classification, InterferenceWitness, Verdict,
};
use qcomplement::linalg::commutator_norm;
use qcomplement::model::ButcheredMixture;
use qcomplement::random::{
    haar_unitary, random_commuting_observable, random_mixed_state, random_observable,
    random_pure_state,
};
use qcomplement::{
    CMatrix, Candidate, DensityOperator, Experiment, SpectralObservable, Timeline, Tolerances,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type M = DMatrix<Complex64>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn fro(m: &M) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn tr_re(m: &M) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

// Direct evaluation of the interference gap: coherent vs. butchered
// probability of outcome n, written with plain matrix products.
fn oracle_gap(rho0: &M, to_t: &M, tail: &M, qs: &[CMatrix], p: &M) -> f64 {
    let rho_t = to_t * rho0 * to_t.adjoint();
    let coherent = tail * &rho_t * tail.adjoint();
    let mut mixed = M::zeros(rho_t.nrows(), rho_t.ncols());
    for q in qs {
        mixed += q * &rho_t * q;
    }
    let butchered = tail * mixed * tail.adjoint();
    (tr_re(&(p * coherent)) - tr_re(&(p * butchered))).abs()
}

fn witness_checks(
    exp: &Experiment,
    cand: &Candidate,
    w: &InterferenceWitness,
    tol: &Tolerances,
) -> (f64, f64) {
    let to_t = exp
        .propagator(exp.timeline().initial(), &cand.moment)
        .unwrap();
    let tail = exp.tail(&cand.moment).unwrap();
    let a = exp.measured_for(cand, tol).unwrap();
    let p = &a.projectors()[w.n];
    let gap = oracle_gap(
        w.initial_state.matrix(),
        &to_t,
        &tail,
        cand.observable.projectors(),
        p,
    );
    let predicted = (w.l_k.adjoint() * p * &w.l_k_prime)[(0, 0)].norm();
    (
        (gap - w.predicted_gap).abs(),
        (predicted - w.predicted_gap).abs(),
    )
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let exp = build(CatalogId::UmzInterference).unwrap();
    let probs = exp.final_probabilities(&Tolerances::default()).unwrap();
    let expected = [0.5, 0.0, 0.5];
    let err = probs
        .iter()
        .zip(expected)
        .map(|(p, e)| (p - e).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    check(
        err <= 1e-9 && elapsed < Duration::from_secs(1),
        format!("upgraded Mach-Zehnder probabilities {probs:.12?}, max error {err:.1e}, {elapsed:.2?} (limit 1 s)"),
    )
}

#[derive(Debug, PartialEq)]
enum Expect {
    Which { simplest: bool },
    WhichAnySimplest,
    Interference,
}

fn golden() -> Vec<(CatalogId, &'static str, Expect)> {
    use CatalogId::*;
    use Expect::*;
    vec![
        (MzWhichWay, "B", Which { simplest: true }),
        (MzInterference, "B", Interference),
        (TwoSlitFar, "B", Which { simplest: true }),
        (TwoSlitNear, "B", Interference),
        (SternGerlach, "B", Which { simplest: true }),
        (DoubleSternGerlach, "B", Which { simplest: false }),
        (UmzInterference, "B", Which { simplest: true }),
        (UmzInterference, "B_0", Interference),
        (UmzInterference, "B'_0", WhichAnySimplest),
        (UmzWhichWay, "B|f(A)", Which { simplest: true }),
        (UmzWhichWay, "B_0", Which { simplest: true }),
    ]
}

fn matches(c: &Classification, e: &Expect) -> bool {
    match e {
        Expect::Which { simplest } => {
            c.verdict == Verdict::WhichResult && c.is_simplest() == *simplest
        }
        Expect::WhichAnySimplest => c.verdict == Verdict::WhichResult,
        Expect::Interference => c.verdict == Verdict::Interference,
    }
}

fn criterion2(interference: &mut Vec<(Experiment, Candidate, InterferenceWitness)>) -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    for (id, name, expect) in golden() {
        let exp = build(id).unwrap();
        let cand = exp.candidate(name).unwrap().clone();
        let c = classify(&cand, &exp, &tol).unwrap();
        if !matches(&c, &expect) {
            failures.push(format!(
                "{id}/{name}: got {:?} simplest={}",
                c.verdict,
                c.is_simplest()
            ));
        }
        if let Some(w) = c.witness {
            interference.push((exp, cand, w));
        }
    }
    // umz-whichway B: no certificate against A itself
    let exp = build(CatalogId::UmzWhichWay).unwrap();
    let b = exp.candidate("B").unwrap();
    match certify_which_result(b, &exp, &tol).unwrap() {
        CertificateOutcome::NoCertificate { .. } => {}
        other => failures.push(format!(
            "umz-whichway/B against A: expected no certificate, got {other:?}"
        )),
    }
    let c = classify(b, &exp, &tol).unwrap();
    if c.verdict == Verdict::WhichResult {
        failures.push("umz-whichway/B against A: classified which-result".into());
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < Duration::from_secs(5),
        if failures.is_empty() {
            format!(
                "golden verdict table, {} entries, {elapsed:.2?} (limit 5 s)",
                golden().len() + 1
            )
        } else {
            failures.join("; ")
        },
    )
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    commuting: bool,
) -> (Experiment, CMatrix, SpectralObservable) {
    let tol = Tolerances::default();
    let dim = rng.random_range(2..=6);
    let u = haar_unitary(dim, rng);
    let a = random_observable(dim, rng.random_range(2..=dim.min(4)), rng);
    let blocks = rng.random_range(2..=dim.min(4));
    let b_final = if commuting {
        random_commuting_observable(&a, blocks, rng)
    } else {
        random_observable(dim, blocks, rng)
    };
    let b = b_final.retrospect(&u, &tol).unwrap();
    let exp = Experiment::new(
        random_mixed_state(dim, rng),
        Timeline::single(u.clone(), &tol).unwrap(),
        a,
        vec![Candidate::new("B", "t_i", b.clone())],
    )
    .unwrap();
    (exp, u, b)
}

fn criterion3(interference: &mut Vec<(Experiment, Candidate, InterferenceWitness)>) -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let (mut commuting_count, mut worst_commuting, mut smallest_gap) = (0, 0.0f64, f64::INFINITY);
    for i in 0..200 {
        let (exp, u, b) = random_instance(&mut rng, i % 2 == 0);
        let a = exp.measured().clone();
        let b_final = b.forward_evolve(&u, &tol).unwrap();
        let comm = commutator_norm(&b_final.matrix(), &a.matrix()).unwrap();
        let cross = cross_block_scan(&b_final, &a).max_norm;
        let c = classify(&exp.candidates()[0], &exp, &tol).unwrap();
        if comm <= 1e-8 {
            commuting_count += 1;
            let mut worst = cross;
            for _ in 0..50 {
                let rho = if rng.random_bool(0.5) {
                    random_mixed_state(exp.dim(), &mut rng)
                } else {
                    random_pure_state(exp.dim(), &mut rng)
                };
                worst = worst.max(verify_blindness(&rho, &b, &u, &a, &tol).unwrap());
            }
            worst_commuting = worst_commuting.max(worst);
            if worst > 1e-8 || c.verdict != Verdict::WhichResult {
                failures.push(format!("instance {i}: commuting but deviation {worst:.1e}"));
            }
        } else {
            let ok = match &c.witness {
                Some(w) => {
                    smallest_gap = smallest_gap.min(w.simulated_gap);
                    w.simulated_gap >= 1e-6 && cross > 1e-8
                }
                None => false,
            };
            if !ok || c.verdict != Verdict::Interference {
                failures.push(format!(
                    "instance {i}: non-commuting (norm {comm:.1e}) without witness gap"
                ));
            }
            if let Some(w) = c.witness {
                let cand = exp.candidates()[0].clone();
                interference.push((exp, cand, w));
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        if failures.is_empty() {
            format!(
                "200 random instances ({commuting_count} commuting, worst deviation {worst_commuting:.1e}; \
                 smallest witness gap {smallest_gap:.3}), {elapsed:.2?} (limit 30 s)"
            )
        } else {
            failures.join("; ")
        },
    )
}

// Cayley transform of a small random Hermitian matrix: a unitary near I.
fn near_identity(dim: usize, eps: f64, rng: &mut ChaCha8Rng) -> M {
    let g = qcomplement::random::gaussian_matrix(dim, rng);
    let h = (&g + g.adjoint()) * Complex64::new(0.5 * eps, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let id = M::identity(dim, dim);
    let num = &id - &h * i;
    let den = (&id + &h * i).try_inverse().unwrap();
    num * den
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut worst_match = 0.0f64;
    for i in 0..100 {
        let dim = rng.random_range(2..=6);
        let u = haar_unitary(dim, &mut rng);
        let a = random_observable(dim, rng.random_range(2..=dim.min(4)), &mut rng);
        let b = a.retrospect(&u, &tol).unwrap();
        for (k, q) in b.projectors().iter().enumerate() {
            worst_match = worst_match.max(fro(&(&u * q * u.adjoint() - &a.projectors()[k])));
        }
        let exp = Experiment::new(
            random_mixed_state(dim, &mut rng),
            Timeline::single(u.clone(), &tol).unwrap(),
            a.clone(),
            vec![Candidate::new("B", "t_i", b)],
        )
        .unwrap();
        let identity: Vec<usize> = (0..a.len()).collect();
        match certify_which_result(&exp.candidates()[0], &exp, &tol).unwrap() {
            CertificateOutcome::Certificate(cert)
                if cert.simplest && cert.bijection.as_ref() == Some(&identity) => {}
            other => failures.push(format!("retrospect instance {i}: {other:?}")),
        }
    }
    for i in 0..100 {
        let dim = rng.random_range(2..=6);
        let u = haar_unitary(dim, &mut rng);
        let a = random_observable(dim, rng.random_range(2..=dim.min(4)), &mut rng);
        let v = near_identity(dim, 0.05, &mut rng);
        let b = a.retrospect(&(&u * v), &tol).unwrap();
        // condition fails independently: some eigen-projector of B, evolved
        // forward, is not inside any single eigenspace of A
        let fails = b.projectors().iter().any(|q| {
            let s = &u * q * u.adjoint();
            a.projectors().iter().all(|p| fro(&(p * &s - &s)) > 1e-6)
        });
        let exp = Experiment::new(
            random_mixed_state(dim, &mut rng),
            Timeline::single(u, &tol).unwrap(),
            a,
            vec![Candidate::new("B", "t_i", b)],
        )
        .unwrap();
        let outcome = certify_which_result(&exp.candidates()[0], &exp, &tol).unwrap();
        if !fails || outcome.is_certificate() {
            failures.push(format!(
                "perturbed instance {i}: condition fails={fails}, got {outcome:?}"
            ));
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && worst_match <= 1e-9 && elapsed < Duration::from_secs(10),
        if failures.is_empty() {
            format!("100 certified (projector match {worst_match:.1e}), 100 perturbed rejected, {elapsed:.2?} (limit 10 s)")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion5(interference: &[(Experiment, Candidate, InterferenceWitness)]) -> Outcome {
    let tol = Tolerances::default();
    let mut worst_sim = 0.0f64;
    let mut worst_formula = 0.0f64;
    for (exp, cand, w) in interference {
        let (sim, formula) = witness_checks(exp, cand, w, &tol);
        worst_sim = worst_sim
            .max(sim)
            .max((w.simulated_gap - w.predicted_gap).abs());
        worst_formula = worst_formula.max(formula);
    }
    let exp = build(CatalogId::MzInterference).unwrap();
    let cand = exp.candidate("B").unwrap();
    let w = construct_witness(cand, &exp, &tol).unwrap();
    let to_t = exp.propagator("t_i", "t_i").unwrap();
    let mz_gap = oracle_gap(
        w.initial_state.matrix(),
        &to_t,
        &exp.tail("t_i").unwrap(),
        cand.observable.projectors(),
        &exp.measured().projectors()[w.n],
    );
    let ok = !interference.is_empty()
        && worst_sim <= 1e-9
        && worst_formula <= 1e-9
        && (mz_gap - 0.5).abs() <= 1e-9
        && (w.predicted_gap - 0.5).abs() <= 1e-9;
    check(
        ok,
        format!(
            "{} witnesses re-simulated, worst gap error {worst_sim:.1e}, formula error {worst_formula:.1e}; \
             mz-interference gap {mz_gap:.12}",
            interference.len()
        ),
    )
}

fn random_timeline_experiment(rng: &mut ChaCha8Rng) -> Experiment {
    let tol = Tolerances::default();
    let dim = rng.random_range(2..=6);
    let steps: Vec<CMatrix> = (0..rng.random_range(1..=4))
        .map(|_| haar_unitary(dim, rng))
        .collect();
    let moments: Vec<String> = (0..=steps.len()).map(|j| format!("t{j}")).collect();
    let initial: DensityOperator = if rng.random_bool(0.5) {
        random_mixed_state(dim, rng)
    } else {
        random_pure_state(dim, rng)
    };
    let a = random_observable(dim, rng.random_range(2..=dim.min(4)), rng);
    Experiment::new(
        initial,
        Timeline::new(moments, steps, &tol).unwrap(),
        a,
        vec![],
    )
    .unwrap()
}

fn criterion6() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut moments = 0;
    for _ in 0..100 {
        let exp = random_timeline_experiment(&mut rng);
        let mut total = M::identity(exp.dim(), exp.dim());
        for s in exp.timeline().steps() {
            total = s * total;
        }
        let rho_f = &total * exp.initial_state().matrix() * total.adjoint();
        let p: Vec<f64> = exp
            .measured()
            .projectors()
            .iter()
            .map(|pn| tr_re(&(pn * &rho_f)))
            .collect();
        for m in exp.timeline().moments() {
            moments += 1;
            let ar = exp.retrospective(m, &tol).unwrap();
            let rho_t = exp.state_at(m, &tol).unwrap();
            for (n, pr) in ar.projectors().iter().enumerate() {
                worst = worst.max((tr_re(&(pr * rho_t.matrix())) - p[n]).abs());
            }
        }
    }
    check(
        worst <= 1e-10,
        format!(
            "100 random experiments, {moments} moments, worst deviation {worst:.1e} (limit 1e-10)"
        ),
    )
}

fn criterion7() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_mix, mut worst_cov) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let exp = random_timeline_experiment(&mut rng);
        let a = exp.measured();
        let first = exp.timeline().initial().to_string();
        let rho_f = exp.final_state(&tol).unwrap();
        let final_mix = ButcheredMixture::butcher(&rho_f, a, &tol)
            .unwrap()
            .recombine();
        let initial_mix = ButcheredMixture::butcher(
            exp.initial_state(),
            &exp.retrospective(&first, &tol).unwrap(),
            &tol,
        )
        .unwrap();
        for m in exp.timeline().moments() {
            let rho_t = exp.state_at(m, &tol).unwrap();
            let tail = exp.tail(m).unwrap();
            let ar = exp.retrospective(m, &tol).unwrap();
            let mixed = ButcheredMixture::butcher(&rho_t, &ar, &tol).unwrap();
            let evolved = mixed.recombine().evolve(&tail, &tol).unwrap();
            worst_mix = worst_mix.max(fro(&(evolved.matrix() - final_mix.matrix())));

            let u = exp.propagator(&first, m).unwrap();
            for n in 0..a.len() {
                let lhs = weighted(&initial_mix, n).map(|x| &u * x * u.adjoint());
                let rhs = weighted(&mixed, n);
                let dev = match (lhs, rhs) {
                    (Some(l), Some(r)) => fro(&(l - r)),
                    (None, None) => 0.0,
                    (Some(x), None) | (None, Some(x)) => fro(&x),
                };
                worst_cov = worst_cov.max(dev);
            }
        }
    }
    check(
        worst_mix <= 1e-9 && worst_cov <= 1e-9,
        format!("100 random instances, mixture evolution {worst_mix:.1e}, covariance {worst_cov:.1e} (limit 1e-9)"),
    )
}

// Weight times constituent state of branch n, if that branch is populated.
fn weighted(mix: &ButcheredMixture, n: usize) -> Option<M> {
    mix.branches()
        .iter()
        .find(|b| b.index == n)
        .map(|b| b.state.matrix() * Complex64::new(b.weight, 0.0))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qcomplement::cli::run(
        std::iter::once("qcomplement").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn run_binary(args: &[&str]) -> (i32, Vec<u8>) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_qcomplement"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion8() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qcomplement-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut failures = Vec::new();
    for id in CatalogId::ALL {
        let id = id.as_str();
        let args = ["classify", "--catalog", id, "--format", "json"];
        let (c1, first) = run_binary(&args);
        let (c2, second) = run_binary(&args);
        let (c3, third) = run_cli(&args);
        if c1 != 0 || c2 != 0 || c3 != 0 || first != second || first != third {
            failures.push(format!("{id}: classify output differs between runs"));
            continue;
        }
        let (code, exported) = run_cli(&["catalog", "export", id]);
        let path = dir.join(format!("{id}.json"));
        std::fs::write(&path, &exported).unwrap();
        let (code2, reparsed) = run_cli(&[
            "classify",
            "--scenario",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        if code != 0 || code2 != 0 || reparsed != first {
            failures.push(format!("{id}: export round trip changed the report"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} catalog scenarios: byte-identical JSON twice, export round trip identical",
                CatalogId::ALL.len()
            )
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let mut interference = Vec::new();
    let results = [
        ("1", criterion1()),
        ("2", criterion2(&mut interference)),
        ("3", criterion3(&mut interference)),
        ("4", criterion4()),
        ("5", criterion5(&interference)),
        ("6", criterion6()),
        ("7", criterion7()),
        ("8", criterion8()),
    ];
    let mut failed = 0;
    for (n, r) in &results {
        println!(
            "{} criterion {n}: {}",
            if r.ok { "PASS" } else { "FAIL" },
            r.detail
        );
        failed += usize::from(!r.ok);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
