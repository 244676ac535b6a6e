//! One pass/fail line per acceptance criterion. Runs under a plain `main` so
//! the lines are printed even when every criterion passes.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use modlab_core::bisim::{check_tau_bisim, greatest_tau_bisim};
use modlab_core::formula::{
    enumerate_formulas, graded, lyndon_premise, param_elim_lift, parse, print, var, Formula, LiteralSet, Modality,
};
use modlab_core::positivity::{
    check_monotone, positivity_witness_search, synthesize_positive, verify_witness, SearchMode, SearchOutcome,
};
use modlab_core::repro::{
    cluster, cluster_restriction_sweep, dframe, phi_cluster, product_trials, run_case, zigzag_preservation_trials,
    zigzag_split_trials,
};
use modlab_core::sample::{
    literals_of, random_formula, random_kripke, random_monotone_nbd, random_relation, random_valuation,
};
use modlab_core::structures::{dual_model, frame_validity, Compiled, Frame, Model, Relation, WorldSet};
use modlab_core::{Guards, KripkeFrame, Var};
use rand::Rng;

use common::{all_kripke, all_subsets, brute_force_greatest, rng};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn case_passes(id: &str) -> Outcome {
    match run_case(id, &Guards::default()) {
        Ok(r) => {
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let summary = r.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ");
            if failed.is_empty() {
                outcome(true, format!("{id}: {summary}"))
            } else {
                outcome(false, format!("{id}: failed {}", failed.join(", ")))
            }
        }
        Err(e) => outcome(false, format!("{id}: {e}")),
    }
}

fn f0_lin() -> Outcome {
    case_passes("f0-lin")
}

fn cluster_cases() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for id in ["cluster-2-0", "cluster-3-1"] {
        let t = Instant::now();
        let o = case_passes(id);
        let took = t.elapsed();
        passed &= o.passed && took < Duration::from_secs(1);
        details.push(format!("{} ({took:.2?})", o.detail));
    }
    outcome(passed, details.join("; "))
}

/// Semantic classes of formulas over `p` up to `max_size` on `frame`.
fn classes(frame: &Frame, max_size: usize) -> Vec<Formula> {
    let vars = [var("p")];
    let mut seen = HashSet::new();
    enumerate_formulas(&LiteralSet::all_of(&vars), max_size)
        .filter(|f| {
            let prog = Compiled::new(f, &vars);
            seen.insert(
                (0..1u64 << frame.size())
                    .map(|x| prog.eval(frame, &[x]))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

fn two_cluster_decision() -> Outcome {
    let g = Guards::default();
    let c2 = Frame::Kripke(cluster(2).unwrap());
    let p = [var("p")];
    let f = parse("[]p | (~p & <>p)").unwrap();
    let search = positivity_witness_search(&c2, &f, &p, &SearchMode::Exhaustive, &g).unwrap();
    let witness_ok = search.witness().map(|w| verify_witness(w).unwrap()).unwrap_or(false);
    let synth = synthesize_positive(&c2, &f, &p, 9, &g).unwrap();
    let synth_ok = synth.found.is_none() && synth.bound_reached == 9 && !synth.truncated;

    let frames: Vec<(&str, Frame)> = vec![
        ("C1", Frame::Kripke(cluster(1).unwrap())),
        ("C2", c2.clone()),
        ("C3", Frame::Kripke(cluster(3).unwrap())),
        ("chain", Frame::Kripke(KripkeFrame::new(2, [(0, 1)]).unwrap())),
        ("D1", Frame::Kripke(dframe(1).unwrap())),
        ("D2", Frame::Kripke(dframe(2).unwrap())),
    ];
    let mut corpus: Vec<(Frame, Formula)> = frames
        .iter()
        .flat_map(|(_, frame)| classes(frame, 5).into_iter().map(move |f| (frame.clone(), f)))
        .collect();
    corpus.push((c2.clone(), f.clone()));
    corpus.push((Frame::Kripke(cluster(3).unwrap()), phi_cluster(3, 1).unwrap()));
    let (mut monotone, mut refuted, mut found, mut both) = (0, 0, 0, 0);
    for (frame, f) in &corpus {
        if !check_monotone(frame, f, &p, &g).unwrap().monotone {
            continue;
        }
        monotone += 1;
        let w = matches!(
            positivity_witness_search(frame, f, &p, &SearchMode::Exhaustive, &g).unwrap(),
            SearchOutcome::Found(_)
        );
        let s = synthesize_positive(frame, f, &p, 7, &g).unwrap().found.is_some();
        refuted += w as u32;
        found += s as u32;
        both += (w && s) as u32;
    }
    outcome(
        witness_ok && synth_ok && both == 0 && refuted > 0,
        format!(
            "witness {}, synthesis none up to {} after {} candidates; corpus: {monotone} monotone classes, {refuted} refuted, {found} with positive equivalent, {both} both",
            if witness_ok { "found and verified" } else { "missing" },
            synth.bound_reached,
            synth.candidates_checked
        ),
    )
}

fn greatest_matches_oracle() -> Outcome {
    let frames = all_kripke(2);
    let p = var("p");
    let taus = all_subsets(&LiteralSet::all_of(std::slice::from_ref(&p)));
    let (mut cases, mut discrepancies) = (0u64, 0u64);
    for f1 in &frames {
        for f2 in &frames {
            for a in 0..4u64 {
                for b in 0..4u64 {
                    let model = |f: &Frame, bits| {
                        let mut val = modlab_core::Valuation::new(2);
                        val.set(p.clone(), WorldSet::from_bits(2, bits)).unwrap();
                        Model::new(f.clone(), val).unwrap()
                    };
                    let (m1, m2) = (model(f1, a), model(f2, b));
                    for tau in &taus {
                        cases += 1;
                        if greatest_tau_bisim(&m1, &m2, tau).unwrap() != brute_force_greatest(&m1, &m2, tau) {
                            discrepancies += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(
        discrepancies == 0,
        format!("{cases} model pairs and types, {discrepancies} discrepancies"),
    )
}

fn zigzag_split() -> Outcome {
    let s = zigzag_split_trials(2024, 1000, 6).unwrap();
    outcome(
        s.failures == 0,
        format!("{} full relations, {} failures", s.trials, s.failures),
    )
}

fn cluster_restriction() -> Outcome {
    let (a, b) = (
        cluster_restriction_sweep(2).unwrap(),
        cluster_restriction_sweep(3).unwrap(),
    );
    outcome(
        a.mismatches == 0 && b.mismatches == 0 && a.relations == 511 && b.relations == 65535,
        format!(
            "D2: {} relations, {} bisimulations; D3: {} relations, {} bisimulations; {} mismatches",
            a.relations,
            a.bisimulations,
            b.relations,
            b.bisimulations,
            a.mismatches + b.mismatches
        ),
    )
}

fn zigzag_preservation() -> Outcome {
    let s = zigzag_preservation_trials(939, 500, &Guards::default()).unwrap();
    outcome(
        s.failures == 0 && s.trials == 500,
        format!(
            "{} trials, {} failures, counters {:?}",
            s.trials, s.failures, s.counters
        ),
    )
}

fn products() -> Outcome {
    let s = product_trials(8, 100, 300, 200, &Guards::default()).unwrap();
    let applicable = s.counters.get("alpha-applicable").copied().unwrap_or(0);
    outcome(
        s.failures == 0 && applicable == 300 && s.counters.get("bound-checked") == Some(&200),
        format!(
            "{} products, {} failures, counters {:?}",
            s.trials, s.failures, s.counters
        ),
    )
}

fn random_kripke_model(r: &mut impl Rng, vars: &[Var]) -> Model {
    let n = r.gen_range(1..=5);
    let density = r.gen_range(0.1..0.9);
    let frame = random_kripke(r, n, density);
    let val = random_valuation(r, n, vars);
    Model::new(frame, val).unwrap()
}

fn semantic_shadows() -> Outcome {
    let g = Guards::default();
    let (p0, p1, q) = (var("p0"), var("p1"), var("q"));
    let all = [p0.clone(), p1.clone(), q.clone()];
    let mut r = rng(41);
    let mut equiv_failures = 0;
    for _ in 0..1000 {
        let m = random_kripke_model(&mut r, &all);
        let phi = random_formula(&mut r, &literals_of(&all), 3);
        let etas = [
            random_formula(&mut r, &literals_of(&all), 2),
            random_formula(&mut r, &literals_of(&all), 2),
        ];
        let d = phi.modal_depth();
        let agree = Formula::big_and(
            [p0.clone(), p1.clone()]
                .iter()
                .zip(&etas)
                .map(|(p, eta)| Formula::iff(Formula::atom(p.clone()), eta.clone())),
        );
        let map: BTreeMap<Var, Formula> = [(p0.clone(), etas[0].clone()), (p1.clone(), etas[1].clone())].into();
        let claim = Formula::implies(
            graded(Modality::Nec, d, &agree),
            Formula::iff(phi.clone(), phi.substitute(&map)),
        );
        equiv_failures += !m.eval(&claim).is_full() as u32;
    }

    let (p, rv) = (var("p"), var("r"));
    let pr = [p.clone(), rv.clone()];
    let mut lift_failures = 0;
    for _ in 0..1000 {
        let m = random_kripke_model(&mut r, &pr);
        let phi = random_formula(&mut r, &literals_of(&pr), 3);
        let psi = param_elim_lift(&phi, std::slice::from_ref(&p), std::slice::from_ref(&rv)).unwrap();
        let back: BTreeMap<Var, Formula> = [(rv.suffixed("'"), Formula::neg_atom(rv.clone()))].into();
        lift_failures += (m.eval(&psi.substitute(&back)) != m.eval(&phi)) as u32;
    }

    let (mut premise_trials, mut premise_failures, mut drawn) = (0, 0, 0);
    while premise_trials < 1000 {
        drawn += 1;
        let n = r.gen_range(1..=4);
        let density = r.gen_range(0.1..0.9);
        let frame = Frame::Kripke(random_kripke(&mut r, n, density));
        let f = random_formula(&mut r, &literals_of(&pr), 3);
        if !check_monotone(&frame, &f, std::slice::from_ref(&p), &g)
            .unwrap()
            .monotone
        {
            continue;
        }
        premise_trials += 1;
        let eta = lyndon_premise(&f, std::slice::from_ref(&p)).unwrap();
        premise_failures += !frame_validity(&frame, &Formula::implies(eta, f), &g)
            .unwrap()
            .is_valid() as u32;
    }
    outcome(
        equiv_failures + lift_failures + premise_failures == 0,
        format!(
            "agreement implication: {equiv_failures}/1000 failures; parameter lift: {lift_failures}/1000; monotone premise: {premise_failures}/{premise_trials} ({drawn} drawn)"
        ),
    )
}

fn infrastructure() -> Outcome {
    let lits = LiteralSet::all_of(&[var("p"), var("q")]);
    let (mut formulas, mut round_trip) = (0u64, 0u64);
    for f in enumerate_formulas(&lits, 6) {
        formulas += 1;
        round_trip += (parse(&print(&f)).ok().as_ref() != Some(&f)) as u64;
    }

    let mut r = rng(10);
    let mut galois = 0;
    for _ in 0..1000 {
        let (n1, n2) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let z = random_relation(&mut r, n1, n2);
        for x in 0..1u64 << n1 {
            let x = WorldSet::from_bits(n1, x);
            galois += !x.is_subset(&z.conjugate(&z.image(&x).unwrap()).unwrap()) as u32;
        }
        for y in 0..1u64 << n2 {
            let y = WorldSet::from_bits(n2, y);
            galois += !z.image(&z.conjugate(&y).unwrap()).unwrap().is_subset(&y) as u32;
        }
    }

    let pq = [var("p"), var("q")];
    let nbd_model = |r: &mut rand_chacha::ChaCha8Rng| {
        let n = r.gen_range(1..=4);
        let reflexive = r.gen();
        let frame = random_monotone_nbd(r, n, reflexive);
        let val = random_valuation(r, n, &pq);
        Model::new(frame, val).unwrap()
    };
    let mut duality = 0;
    for _ in 0..500 {
        let m = nbd_model(&mut r);
        let f = random_formula(&mut r, &literals_of(&pq), 3);
        duality += (m.eval(&f) != dual_model(&m).unwrap().eval(&f.dualize())) as u32;
    }

    let taus = all_subsets(&LiteralSet::all_of(&pq));
    let mut transport = 0;
    for i in 0..200 {
        let (m1, m2) = (nbd_model(&mut r), nbd_model(&mut r));
        let tau = &taus[r.gen_range(0..taus.len())];
        let z = if i % 2 == 0 {
            greatest_tau_bisim(&m1, &m2, tau).unwrap()
        } else {
            random_relation(&mut r, m1.size(), m2.size())
        };
        let ok = |a: &Model, b: &Model, z: &Relation, t: &LiteralSet| check_tau_bisim(a, b, z, t).unwrap().is_none();
        let forward = ok(&m1, &m2, &z, tau);
        transport += (forward != ok(&m2, &m1, &z.inverse(), &tau.negated())) as u32;
        let (d1, d2) = (dual_model(&m1).unwrap(), dual_model(&m2).unwrap());
        transport += (forward != ok(&d1, &d2, &z, tau)) as u32;
    }
    outcome(
        round_trip + (galois + duality + transport) as u64 == 0,
        format!(
            "round trip {round_trip}/{formulas} failures; Galois {galois}; duality {duality}/500; inversion and dual transport {transport}/200"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "named five-world counterexample", f0_lin, secs(2)),
        (2, "cluster counterexamples", cluster_cases, secs(2)),
        (3, "two-cluster positivity decision", two_cluster_decision, secs(10)),
        (
            4,
            "greatest bisimulation vs brute force",
            greatest_matches_oracle,
            secs(30),
        ),
        (5, "zigzag-free full subrelations", zigzag_split, secs(5)),
        (6, "cluster restriction characterization", cluster_restriction, secs(30)),
        (7, "zigzag-free preservation", zigzag_preservation, secs(60)),
        (8, "maximal bisimulation products", products, secs(60)),
        (
            9,
            "semantic identities of the formula lifts",
            semantic_shadows,
            secs(30),
        ),
        (10, "infrastructure laws", infrastructure, secs(60)),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let t = Instant::now();
        let o = run();
        let took = t.elapsed();
        let pass = o.passed && took <= limit;
        failed += !pass as u32;
        println!(
            "criterion {n:>2} {} {name} [{took:.2?} of {limit:?}] {}",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
