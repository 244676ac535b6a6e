use serde::Serialize;
use serde_json::{json, Value};

use super::builders::{cluster, cluster_models, dframe, f0, lin_models, phi_cluster, phi_lin};
use super::trials::{
    cluster_restriction_sweep, monotone_positivity_sweep, product_trials, top_collapse_morphisms, zigzag_split_trials,
    PRESERVED_AXIOMS,
};
use super::CheckResult;
use crate::bisim::{check_tau_bisim, greatest_tau_bisim};
use crate::error::Result;
use crate::formula::{var, Formula, LiteralSet, Var};
use crate::guard::Guards;
use crate::positivity::{check_monotone, directed_tau, positivity_witness_search, verify_witness, SearchMode, Witness};
use crate::structures::{Frame, Model, Relation};

pub const SPLIT_SEED: u64 = 1;
pub const SPLIT_TRIALS: u64 = 1000;
pub const SPLIT_MAX_SIDE: usize = 6;
pub const PRODUCT_SEED: u64 = 8;
pub const PRODUCT_PAIRS: u64 = 100;
pub const PRODUCT_ALPHA_TRIALS: u64 = 300;
pub const PRODUCT_BOUND_TRIALS: u64 = 200;
pub const SWEEP_MAX_SIZE: usize = 6;

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

struct Refutation {
    frame: Frame,
    f: Formula,
    pvars: Vec<Var>,
    m1: Model,
    m2: Model,
    z: Relation,
    pair: (usize, usize),
}

impl Refutation {
    fn lin() -> Refutation {
        let (m1, m2, z) = lin_models();
        Refutation {
            frame: Frame::Kripke(f0()),
            f: phi_lin(),
            pvars: vec![var("p")],
            m1,
            m2,
            z,
            pair: (4, 3),
        }
    }

    fn cluster(k: usize, m: usize) -> Result<Refutation> {
        let (m1, m2, z) = cluster_models(k, m)?;
        Ok(Refutation {
            frame: Frame::Kripke(cluster(k)?),
            f: phi_cluster(k, m)?,
            pvars: vec![var("p")],
            m1,
            m2,
            z,
            pair: (0, 0),
        })
    }

    fn tau(&self) -> LiteralSet {
        directed_tau(&self.f, &self.pvars)
    }

    fn inputs(&self) -> Value {
        json!({
            "frame": to_value(&self.frame),
            "formula": to_value(&self.f),
            "pvars": to_value(&self.pvars),
            "tau": to_value(&self.tau()),
            "m1": to_value(&self.m1),
            "m2": to_value(&self.m2),
            "z": to_value(&self.z),
            "pair": self.pair,
        })
    }

    fn run(&self, search: bool, guards: &Guards) -> Result<(Vec<CheckResult>, Value)> {
        let tau = self.tau();
        let (w1, w2) = self.pair;
        let mut checks = Vec::new();
        let violation = check_tau_bisim(&self.m1, &self.m2, &self.z, &tau)?;
        checks.push(check(
            "p-directed-bisimulation",
            violation.is_none(),
            violation.map_or("all lit, zig and zag conditions hold".to_string(), |v| v.to_string()),
        ));
        let left = self.m1.holds_at(w1, &self.f);
        checks.push(check("holds-left", left, format!("M1, {w1} |= f is {left}")));
        let right = self.m2.holds_at(w2, &self.f);
        checks.push(check("fails-right", !right, format!("M2, {w2} |= f is {right}")));
        let mono = check_monotone(&self.frame, &self.f, &self.pvars, guards)?;
        checks.push(check(
            "monotone",
            mono.monotone,
            format!("{} valuation pairs compared", mono.pairs_checked),
        ));
        let greatest = greatest_tau_bisim(&self.m1, &self.m2, &tau)?;
        checks.push(check(
            "inside-greatest-bisimulation",
            self.z.is_subset(&greatest),
            format!("greatest has {} pairs", greatest.len()),
        ));
        let witness = Witness {
            f: self.f.clone(),
            g: self.f.clone(),
            tau: tau.clone(),
            m1: self.m1.clone(),
            m2: self.m2.clone(),
            z: self.z.clone(),
            pair: self.pair,
        };
        let ok = verify_witness(&witness)?;
        checks.push(check(
            "witness-verifies",
            ok,
            "re-checked by evaluation and the bisimulation checker",
        ));
        let mut certificate = json!({ "witness": to_value(&witness), "monotonicity": to_value(&mono) });
        if search {
            let found = positivity_witness_search(&self.frame, &self.f, &self.pvars, &SearchMode::Exhaustive, guards)?;
            let w = found.witness();
            let ok = match w {
                Some(w) => verify_witness(w)?,
                None => false,
            };
            checks.push(check(
                "exhaustive-search-finds-witness",
                ok,
                w.map_or("no witness".to_string(), |w| format!("pair {:?}", w.pair)),
            ));
            if let Some(w) = w {
                certificate["search_witness"] = to_value(w);
            }
        }
        Ok((checks, certificate))
    }
}

pub fn inputs(id: &str) -> Result<Value> {
    Ok(match id {
        "f0-lin" => Refutation::lin().inputs(),
        "cluster-2-0" => Refutation::cluster(2, 0)?.inputs(),
        "cluster-3-1" => Refutation::cluster(3, 1)?.inputs(),
        "dk-qqq-2" => json!({ "frame": to_value(&Frame::Kripke(dframe(2)?)) }),
        "dk-qqq-3" => json!({ "frame": to_value(&Frame::Kripke(dframe(3)?)) }),
        "ppqq-prop" => json!({ "seed": SPLIT_SEED, "trials": SPLIT_TRIALS, "max_side": SPLIT_MAX_SIDE }),
        "dk-lpp-sample" => json!({
            "frame": to_value(&Frame::Kripke(dframe(2)?)),
            "pvars": ["p"],
            "max_size": SWEEP_MAX_SIZE,
        }),
        "product-preserv" => json!({
            "seed": PRODUCT_SEED,
            "pairs": PRODUCT_PAIRS,
            "alpha_trials": PRODUCT_ALPHA_TRIALS,
            "bound_trials": PRODUCT_BOUND_TRIALS,
            "axioms": PRESERVED_AXIOMS,
        }),
        _ => unreachable!("registered ids only"),
    })
}

fn cluster_restriction(k: usize) -> Result<(Vec<CheckResult>, Value)> {
    let sweep = cluster_restriction_sweep(k)?;
    let (checked, failed) = top_collapse_morphisms(k)?;
    let checks = vec![
        check(
            "bisimulation-iff-full-on-cluster",
            sweep.mismatches == 0,
            format!(
                "{} nonempty relations, {} bisimulations, {} mismatches",
                sweep.relations, sweep.bisimulations, sweep.mismatches
            ),
        ),
        check(
            "top-collapse-is-morphism",
            failed == 0,
            format!("{checked} valuation/world combinations, {failed} failures"),
        ),
    ];
    Ok((
        checks,
        json!({ "sweep": to_value(&sweep), "morphisms_checked": checked, "morphism_failures": failed }),
    ))
}

pub fn run(id: &str, guards: &Guards) -> Result<(Vec<CheckResult>, Value)> {
    match id {
        "f0-lin" => Refutation::lin().run(false, guards),
        "cluster-2-0" => Refutation::cluster(2, 0)?.run(true, guards),
        "cluster-3-1" => Refutation::cluster(3, 1)?.run(true, guards),
        "dk-qqq-2" => cluster_restriction(2),
        "dk-qqq-3" => cluster_restriction(3),
        "ppqq-prop" => {
            let s = zigzag_split_trials(SPLIT_SEED, SPLIT_TRIALS, SPLIT_MAX_SIDE)?;
            let checks = vec![check(
                "split-full-contained-zigzag-free",
                s.failures == 0,
                format!("{} relations, {} failures", s.trials, s.failures),
            )];
            Ok((checks, to_value(&s)))
        }
        "dk-lpp-sample" => {
            let s = monotone_positivity_sweep(2, SWEEP_MAX_SIZE, guards)?;
            let checks = vec![
                check(
                    "monotone-classes-found",
                    s.monotone_classes > 0,
                    format!(
                        "{} formulas, {} classes, {} monotone",
                        s.formulas, s.classes, s.monotone_classes
                    ),
                ),
                check(
                    "no-positivity-witness",
                    s.witnesses == 0,
                    format!("{} witnesses", s.witnesses),
                ),
            ];
            Ok((checks, to_value(&s)))
        }
        "product-preserv" => {
            let s = product_trials(
                PRODUCT_SEED,
                PRODUCT_PAIRS,
                PRODUCT_ALPHA_TRIALS,
                PRODUCT_BOUND_TRIALS,
                guards,
            )?;
            let checks = product_checks(&s, PRODUCT_ALPHA_TRIALS);
            Ok((checks, to_value(&s)))
        }
        _ => unreachable!("registered ids only"),
    }
}

pub(crate) fn product_checks(s: &super::TrialSummary, alpha_trials: u64) -> Vec<CheckResult> {
    let zero = |key: &str| s.counter(key) == 0;
    vec![
        check(
            "projection-equations-and-maximality",
            zero("product-check"),
            format!("{} products", s.trials),
        ),
        check("projections-are-morphisms", zero("projection-not-morphism"), ""),
        check(
            "fixed-axioms-preserved",
            zero("axiom") && s.counter("axiom-preserved") > 0,
            format!(
                "{} preserved, {} not valid on both factors",
                s.counter("axiom-preserved"),
                s.counter("axiom-not-applicable")
            ),
        ),
        check(
            "alpha-implies-diamond-preserved",
            zero("alpha-not-preserved") && s.counter("alpha-applicable") == alpha_trials,
            format!(
                "{} instances valid on both factors out of {} drawn",
                s.counter("alpha-applicable"),
                s.counter("alpha-attempts")
            ),
        ),
        check(
            "positive-bound-inclusion",
            zero("positive-bound"),
            format!("{} formulas", s.counter("bound-checked")),
        ),
    ]
}
