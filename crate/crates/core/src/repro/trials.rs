//! Seeded and exhaustive sweeps behind the registered cases.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::builders::dframe;
use crate::bisim::{
    check_frame_bisim, check_morphism, check_tau_bisim, check_zigzag_decomposition, greatest_tau_bisim,
    greatest_tau_bisim_within, preserves, zigzag_free_subrelation, ZigzagDecomposition,
};
use crate::error::Result;
use crate::formula::{axiom, enumerate_formulas, var, Formula, Literal, LiteralSet, Var};
use crate::guard::Guards;
use crate::positivity::{check_monotone, positivity_witness_search, SearchMode, SearchOutcome, Witness};
use crate::product::{max_product, positive_bound_check, preservation_suite, AxiomStatus, BisimProduct};
use crate::sample::{
    literals_of, random_formula, random_full_relation, random_kripke, random_monotone_nbd, random_positive,
    random_zigzag_free_within,
};
use crate::structures::{
    bit_iter, frame_validity, full_mask, Compiled, Frame, Model, NbdFrame, Relation, Valuation, WorldSet,
};

/// Outcome of a seeded sweep. `counters` carry sweep-specific tallies.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub counters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Value>,
}

impl TrialSummary {
    fn new(seed: u64, trials: u64) -> Self {
        TrialSummary {
            seed,
            trials,
            failures: 0,
            counters: BTreeMap::new(),
            first_failure: None,
        }
    }

    fn bump(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_default() += 1;
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    fn fail(&mut self, key: &str, detail: impl FnOnce() -> Value) {
        self.failures += 1;
        self.bump(key);
        if self.first_failure.is_none() {
            self.first_failure = Some(serde_json::json!({ "kind": key, "detail": detail() }));
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Zigzag-free full subrelations of random full relations with sides up to
/// `max_side`.
pub fn zigzag_split_trials(seed: u64, trials: u64, max_side: usize) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialSummary::new(seed, trials);
    for _ in 0..trials {
        let (n1, n2) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
        let z = random_full_relation(&mut rng, n1, n2);
        let d = zigzag_free_subrelation(&z)?;
        let u = d.union();
        if !(u.is_full() && u.is_subset(&z) && check_zigzag_decomposition(&u, &d)) {
            out.fail(
                "invalid-split",
                || serde_json::json!({ "z": to_value(&z), "split": to_value(&d) }),
            );
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ClusterRestrictionSweep {
    pub k: usize,
    pub relations: u64,
    pub bisimulations: u64,
    pub mismatches: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Relation>,
}

/// Every nonempty relation on the `k`-cluster-plus-top frame: it is a
/// bisimulation iff its restriction to the cluster is full.
pub fn cluster_restriction_sweep(k: usize) -> Result<ClusterRestrictionSweep> {
    let d = Frame::Kripke(dframe(k)?);
    let n = k + 1;
    let cells = n * n;
    let cluster = full_mask(k);
    let mut out = ClusterRestrictionSweep {
        k,
        relations: 0,
        bisimulations: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for code in 1u64..1 << cells {
        let rows = (0..n).map(|i| code >> (i * n) & full_mask(n)).collect();
        let z = Relation::from_rows(n, n, rows);
        let is_bisim = check_frame_bisim(&d, &d, &z)?.is_none();
        let inside: Vec<u64> = (0..k).map(|i| z.row(i) & cluster).collect();
        let covered = inside.iter().fold(0, |acc, r| acc | r);
        let full_inside = inside.iter().all(|r| *r != 0) && covered == cluster;
        out.relations += 1;
        out.bisimulations += is_bisim as u64;
        if is_bisim != full_inside {
            out.mismatches += 1;
            out.first_mismatch.get_or_insert(z);
        }
    }
    Ok(out)
}

/// For every valuation of `p` on the `k`-cluster-plus-top frame and every
/// cluster world `w`, copying the truth at `w` to the top world and mapping
/// the top world to `w` gives a morphism onto the original model.
/// Returns the number of failing (valuation, world) combinations.
pub fn top_collapse_morphisms(k: usize) -> Result<(u64, u64)> {
    let frame = dframe(k)?;
    let n = k + 1;
    let p = var("p");
    let (mut checked, mut failed) = (0, 0);
    for bits in 0..1u64 << n {
        let target = Model::new(
            frame.clone(),
            Valuation::from_sets(n, [(p.clone(), WorldSet::from_bits(n, bits))])?,
        )?;
        for w in 0..k {
            let top = (bits >> w & 1) << k;
            let adjusted_bits = bits & full_mask(k) | top;
            let adjusted = Model::new(
                frame.clone(),
                Valuation::from_sets(n, [(p.clone(), WorldSet::from_bits(n, adjusted_bits))])?,
            )?;
            let map: Vec<usize> = (0..k).chain([w]).collect();
            let f = Relation::from_function(&map, n)?;
            checked += 1;
            if check_morphism(&f, &adjusted, &target, None)?.is_some() {
                failed += 1;
            }
        }
    }
    Ok((checked, failed))
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct MonotoneSweep {
    pub k: usize,
    pub max_size: usize,
    pub formulas: u64,
    /// Formulas with pairwise distinct truth-set signatures on the frame.
    pub classes: u64,
    pub monotone_classes: u64,
    pub witnesses: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_witness: Option<Witness>,
}

/// Every formula over `p` up to `max_size` that is monotone on the
/// `k`-cluster-plus-top frame, one per semantic class, against an exhaustive
/// positivity witness search.
pub fn monotone_positivity_sweep(k: usize, max_size: usize, guards: &Guards) -> Result<MonotoneSweep> {
    let frame = Frame::Kripke(dframe(k)?);
    let n = frame.size();
    let p = var("p");
    let vars = [p.clone()];
    let mut seen = std::collections::HashSet::new();
    let mut out = MonotoneSweep {
        k,
        max_size,
        formulas: 0,
        classes: 0,
        monotone_classes: 0,
        witnesses: 0,
        first_witness: None,
    };
    for f in enumerate_formulas(&LiteralSet::all_of(&vars), max_size) {
        out.formulas += 1;
        let prog = Compiled::new(&f, &vars);
        let sig: Vec<u64> = (0..1u64 << n).map(|x| prog.eval(&frame, &[x])).collect();
        if !seen.insert(sig) {
            continue;
        }
        out.classes += 1;
        if !check_monotone(&frame, &f, &vars, guards)?.monotone {
            continue;
        }
        out.monotone_classes += 1;
        if let SearchOutcome::Found(w) = positivity_witness_search(&frame, &f, &vars, &SearchMode::Exhaustive, guards)?
        {
            out.witnesses += 1;
            out.first_witness.get_or_insert(*w);
        }
    }
    Ok(out)
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, kripke: bool) -> Frame {
    if kripke {
        let density = rng.gen_range(0.2..0.8);
        Frame::Kripke(random_kripke(rng, n, density))
    } else {
        let reflexive = rng.gen();
        Frame::Nbd(random_monotone_nbd(rng, n, reflexive))
    }
}

/// Valuations of `vars` on two frames making `z1 ∪ z2` a `pvars`-directed
/// bisimulation at the literal level: values are copied along the
/// functional part into the left model and along the inverse-functional
/// part into the right model, then `pvars` are loosened in the allowed
/// direction.
fn aligned_valuations(
    rng: &mut ChaCha8Rng,
    d: &ZigzagDecomposition,
    vars: &[Var],
    pvars: &[Var],
) -> Result<(Valuation, Valuation)> {
    let (n1, n2) = (d.z1.left_size(), d.z1.right_size());
    let mut v1 = Valuation::new(n1);
    let mut v2 = Valuation::new(n2);
    for v in vars {
        let mut s1 = rng.gen::<u64>() & full_mask(n1);
        let mut s2 = rng.gen::<u64>() & full_mask(n2);
        let copy = |from: u64, a: usize, to: &mut u64, b: usize| *to = *to & !(1 << b) | (from >> a & 1) << b;
        for (a, b) in d.z2.pairs() {
            copy(s1, a, &mut s2, b);
        }
        for (a, b) in d.z1.pairs() {
            copy(s2, b, &mut s1, a);
        }
        if pvars.contains(v) {
            for (a, _) in d.z1.pairs() {
                if rng.gen_ratio(1, 3) {
                    s1 &= !(1 << a);
                }
            }
            for (_, b) in d.z2.pairs() {
                if rng.gen_ratio(1, 3) {
                    s2 |= 1 << b;
                }
            }
        }
        v1.set(v.clone(), WorldSet::from_bits(n1, s1))?;
        v2.set(v.clone(), WorldSet::from_bits(n2, s2))?;
    }
    Ok((v1, v2))
}

/// Formulas monotone in `p` on both frames are preserved under zigzag-free
/// `p`-directed bisimulations between models on them.
///
/// Each trial draws two frames of at most four worlds (both Kripke or both
/// monotone neighborhood, the right one a copy of the left half the time), a
/// formula over `p, r` monotone in `p` on both, a random zigzag-free relation
/// inside the greatest frame bisimulation refined to a bisimulation, and
/// valuations aligned with it.
pub fn zigzag_preservation_trials(seed: u64, trials: u64, guards: &Guards) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialSummary::new(seed, trials);
    let (p, r) = (var("p"), var("r"));
    let vars = [p.clone(), r.clone()];
    let pvars = [p.clone()];
    let lits = literals_of(&vars);
    let tau = LiteralSet::directed(&vars, &pvars);
    let none = LiteralSet::new();
    let mut done = 0;
    while done < trials {
        out.bump("frames-drawn");
        let kripke = rng.gen();
        let n1 = rng.gen_range(1..=4);
        let f1 = random_frame(&mut rng, n1, kripke);
        let f2 = if rng.gen() {
            f1.clone()
        } else {
            let n2 = rng.gen_range(1..=4);
            random_frame(&mut rng, n2, kripke)
        };
        let (b1, b2) = (Model::bare(f1.clone()), Model::bare(f2.clone()));
        let greatest = greatest_tau_bisim(&b1, &b2, &none)?;
        if greatest.is_empty() {
            continue;
        }
        let Some((d, z)) = (0..20).find_map(|_| {
            let d = random_zigzag_free_within(&mut rng, &greatest);
            let z = greatest_tau_bisim_within(&b1, &b2, &none, &d.union()).ok()?;
            (!z.is_empty()).then(|| {
                let z1 = z.intersection(&d.z1).expect("same shape");
                let z2 = z.intersection(&d.z2).expect("same shape");
                (ZigzagDecomposition { z1, z2 }, z)
            })
        }) else {
            continue;
        };
        let Some(f) = (0..50).find_map(|_| {
            let f = random_formula(&mut rng, &lits, 3);
            let mono = |fr: &Frame| check_monotone(fr, &f, &pvars, guards).map(|v| v.monotone);
            match (mono(&f1), mono(&f2)) {
                (Ok(true), Ok(true)) => Some(Ok(f)),
                (Err(e), _) | (_, Err(e)) => Some(Err(e)),
                _ => None,
            }
        }) else {
            continue;
        };
        let f = f?;
        let (v1, v2) = aligned_valuations(&mut rng, &d, &vars, &pvars)?;
        let (m1, m2) = (Model::new(f1, v1)?, Model::new(f2, v2)?);
        done += 1;
        if f.vars().is_empty() {
            out.bump("closed-formulas");
        }
        if let Some(v) = check_tau_bisim(&m1, &m2, &z, &tau)? {
            out.fail(
                "generator-not-bisimulation",
                || serde_json::json!({ "violation": to_value(&v), "z": to_value(&z) }),
            );
            continue;
        }
        if let Some(pair) = preserves(&z, &m1, &m2, &f)? {
            out.fail("not-preserved", || {
                serde_json::json!({
                    "formula": to_value(&f), "m1": to_value(&m1), "m2": to_value(&m2),
                    "z": to_value(&z), "pair": pair,
                })
            });
        }
    }
    Ok(out)
}

/// `f2` obtained by splitting worlds of `f1` along a random surjection `g`
/// from `n2 ≥ n1` worlds, with `◇₂Y = g⁻¹◇₁gY`; the graph of `g`, read
/// from `f1` to `f2`, is a full bisimulation.
fn inflate(rng: &mut ChaCha8Rng, f1: &NbdFrame, n2: usize) -> (NbdFrame, Relation) {
    let n1 = f1.size();
    let g: Vec<usize> = (0..n2).map(|w| if w < n1 { w } else { rng.gen_range(0..n1) }).collect();
    let image = |y: u64| bit_iter(y).fold(0u64, |acc, w| acc | 1 << g[w]);
    let preimage = |x: u64| {
        (0..n2)
            .filter(|&w| x >> g[w] & 1 == 1)
            .fold(0u64, |acc, w| acc | 1 << w)
    };
    let f2 = NbdFrame::from_fn(n2, |y| preimage(f1.dia_bits(image(y))));
    let z = Relation::from_pairs(n1, n2, (0..n2).map(|w| (g[w], w))).expect("in range");
    (f2, z)
}

/// Random monotone neighborhood frames with at most four worlds and a full
/// bisimulation whose graph fits the product guard; the greatest frame
/// bisimulation is used whenever it does.
pub fn random_bisim_pair(rng: &mut ChaCha8Rng, guards: &Guards) -> Result<(Frame, Frame, Relation)> {
    loop {
        let n1 = rng.gen_range(1..=4);
        let reflexive = rng.gen();
        let f1 = random_monotone_nbd(rng, n1, reflexive);
        let (f2, fallback) = if rng.gen_ratio(1, 4) {
            let n2 = rng.gen_range(1..=4);
            (random_monotone_nbd(rng, n2, reflexive), None)
        } else {
            let n2 = rng.gen_range(n1..=4);
            let (f2, z) = inflate(rng, &f1, n2);
            (f2, Some(z))
        };
        let (f1, f2) = (Frame::Nbd(f1), Frame::Nbd(f2));
        let z = greatest_tau_bisim(&Model::bare(f1.clone()), &Model::bare(f2.clone()), &LiteralSet::new())?;
        if z.is_full() && z.len() <= guards.max_product_worlds {
            return Ok((f1, f2, z));
        }
        if let Some(z) = fallback {
            return Ok((f1, f2, z));
        }
    }
}

pub const PRESERVED_AXIOMS: [&str; 3] = ["AT", "A4", "AP"];

/// `¬α ∨ ◇p`, the NNF of `α → ◇p`.
fn bounded_by_diamond(alpha: Formula) -> Formula {
    Formula::or(alpha.negate(), Formula::dia(Formula::Lit(Literal::pos(var("p")))))
}

/// Maximal products of random bisimilar monotone frames: projection
/// equations and maximality, projections as morphisms, preservation of the
/// fixed axioms and of `α(p) → ◇p` for random positive `α` valid on both
/// factors, and the positive bound inclusion for random positive `α`.
pub fn product_trials(
    seed: u64,
    pairs: u64,
    alpha_trials: u64,
    bound_trials: u64,
    guards: &Guards,
) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialSummary::new(seed, pairs);
    let p = var("p");
    let named: Vec<(String, Formula)> = PRESERVED_AXIOMS
        .iter()
        .map(|n| (n.to_string(), axiom(n).expect("listed axiom")))
        .collect();
    let mut built: Vec<(Frame, Frame, Relation, BisimProduct)> = Vec::new();
    for _ in 0..pairs {
        let (f1, f2, z) = random_bisim_pair(&mut rng, guards)?;
        let prod = max_product(&f1, &f2, &z, guards)?;
        out.counters
            .entry("largest-carrier".into())
            .and_modify(|c| *c = (*c).max(z.len() as u64))
            .or_insert(z.len() as u64);
        if let Some(v) = crate::product::check_product(&prod, &f1, &f2)? {
            out.fail("product-check", || to_value(&v));
        }
        let bare = Model::bare(prod.as_frame());
        for (k, dst) in [(1, &f1), (2, &f2)] {
            if let Some(v) = check_morphism(&prod.projection(k), &bare, &Model::bare(dst.clone()), None)? {
                out.fail("projection-not-morphism", || to_value(&v));
            }
        }
        for report in preservation_suite(&f1, &f2, &z, &named, guards)? {
            match &report.status {
                AxiomStatus::Preserved => out.bump("axiom-preserved"),
                AxiomStatus::NotApplicable => out.bump("axiom-not-applicable"),
                _ => out.fail("axiom", || to_value(&report)),
            }
        }
        built.push((f1, f2, z, prod));
    }
    if built.is_empty() {
        return Ok(out);
    }
    let mut applicable = 0;
    let max_attempts = alpha_trials.saturating_mul(200);
    let mut attempts = 0;
    while applicable < alpha_trials && attempts < max_attempts {
        let (f1, f2, _, prod) = &built[(attempts % built.len() as u64) as usize];
        attempts += 1;
        let depth = rng.gen_range(0..=3);
        let f = bounded_by_diamond(random_positive(&mut rng, std::slice::from_ref(&p), depth));
        if !(frame_validity(f1, &f, guards)?.is_valid() && frame_validity(f2, &f, guards)?.is_valid()) {
            continue;
        }
        applicable += 1;
        if let crate::structures::Validity::Countermodel { valuation, world } =
            frame_validity(&prod.as_frame(), &f, guards)?
        {
            out.fail("alpha-not-preserved", || {
                serde_json::json!({ "formula": to_value(&f), "product": to_value(prod), "valuation": to_value(&valuation), "world": world })
            });
        }
    }
    out.counters.insert("alpha-attempts".into(), attempts);
    out.counters.insert("alpha-applicable".into(), applicable);
    for t in 0..bound_trials {
        let (f1, f2, _, prod) = &built[(t % built.len() as u64) as usize];
        let depth = rng.gen_range(0..=3);
        let alpha = random_positive(&mut rng, std::slice::from_ref(&p), depth);
        out.bump("bound-checked");
        if let Some(x) = positive_bound_check(prod, f1, f2, &alpha)? {
            out.fail(
                "positive-bound",
                || serde_json::json!({ "alpha": to_value(&alpha), "subset": to_value(&x) }),
            );
        }
    }
    Ok(out)
}
