//! Searching model pairs for formulas not preserved under the greatest
//! τ-bisimulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bisim::{first_offending_pair, greatest_tau_bisim};
use crate::error::Result;
use crate::formula::{Formula, LiteralSet, Var};
use crate::guard::Guards;
use crate::structures::{full_mask, unpack, Compiled, Frame, Model, Relation, Valuation};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// Two models on one frame, a τ-bisimulation `z` between them, and a pair of
/// `z` where `f` holds on the left and `g` fails on the right.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Witness {
    pub f: Formula,
    pub g: Formula,
    pub tau: LiteralSet,
    pub m1: Model,
    pub m2: Model,
    pub z: Relation,
    pub pair: (usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchOutcome {
    Found(Box<Witness>),
    /// Exhaustive sweep without a witness. `complete` is set on Kripke frames,
    /// where this certifies that an interpolant (positive equivalent) exists.
    NoneFound {
        pairs_checked: u64,
        complete: bool,
    },
    /// Sampled sweep without a witness; says nothing about existence.
    Exhausted {
        seed: u64,
        trials: u64,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// The literals of a `p⃗`-directed bisimulation over `vars(f)`.
pub fn directed_tau(f: &Formula, pvars: &[Var]) -> LiteralSet {
    LiteralSet::directed(&f.vars(), pvars)
}

/// Looks for models on `frame` refuting `p⃗`-positive equivalence of `f`.
pub fn positivity_witness_search(
    frame: &Frame,
    f: &Formula,
    pvars: &[Var],
    mode: &SearchMode,
    guards: &Guards,
) -> Result<SearchOutcome> {
    interpolant_witness_search(frame, f, f, &directed_tau(f, pvars), mode, guards)
}

struct PairSearch<'a> {
    frame: &'a Frame,
    f: &'a Formula,
    g: &'a Formula,
    tau: &'a LiteralSet,
    vars: Vec<Var>,
    pf: Compiled,
    pg: Compiled,
}

impl<'a> PairSearch<'a> {
    fn new(frame: &'a Frame, f: &'a Formula, g: &'a Formula, tau: &'a LiteralSet) -> Self {
        let mut vars = f.vars();
        vars.extend(g.vars());
        let vars: Vec<Var> = vars.into_iter().collect();
        PairSearch {
            frame,
            f,
            g,
            tau,
            pf: Compiled::new(f, &vars),
            pg: Compiled::new(g, &vars),
            vars,
        }
    }

    fn check(&self, masks1: &[u64], masks2: &[u64], e1: u64) -> Result<Option<Witness>> {
        let full = full_mask(self.frame.size());
        if e1 == 0 {
            return Ok(None);
        }
        let e2 = self.pg.eval(self.frame, masks2);
        if e2 == full {
            return Ok(None);
        }
        let n = self.frame.size();
        let m1 = Model::new(self.frame.clone(), Valuation::from_masks(n, &self.vars, masks1))?;
        let m2 = Model::new(self.frame.clone(), Valuation::from_masks(n, &self.vars, masks2))?;
        let z = greatest_tau_bisim(&m1, &m2, self.tau)?;
        Ok(first_offending_pair(&z, e1, e2).map(|pair| Witness {
            f: self.f.clone(),
            g: self.g.clone(),
            tau: self.tau.clone(),
            m1,
            m2,
            z,
            pair,
        }))
    }
}

/// Looks for models on `frame` where `f` does not entail `g` under the
/// greatest τ-bisimulation. Each model pair is checked against its greatest
/// τ-bisimulation only, since preservation under it implies preservation under
/// all of its subrelations.
///
/// Exhaustive order: the left valuation counter is outermost.
pub fn interpolant_witness_search(
    frame: &Frame,
    f: &Formula,
    g: &Formula,
    tau: &LiteralSet,
    mode: &SearchMode,
    guards: &Guards,
) -> Result<SearchOutcome> {
    let search = PairSearch::new(frame, f, g, tau);
    let n = frame.size();
    let k = search.vars.len();
    let mut masks1 = vec![0u64; k];
    let mut masks2 = vec![0u64; k];
    match mode {
        SearchMode::Exhaustive => {
            guards.ensure_bits("model pair sweep", (2 * n * k) as f64)?;
            let total = 1u64 << (n * k);
            for a in 0..total {
                unpack(a, n, k, &mut masks1);
                let e1 = search.pf.eval(frame, &masks1);
                if e1 == 0 {
                    continue;
                }
                for b in 0..total {
                    unpack(b, n, k, &mut masks2);
                    if let Some(w) = search.check(&masks1, &masks2, e1)? {
                        return Ok(SearchOutcome::Found(Box::new(w)));
                    }
                }
            }
            Ok(SearchOutcome::NoneFound {
                pairs_checked: total * total,
                complete: matches!(frame, Frame::Kripke(_)),
            })
        }
        SearchMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let full = full_mask(n);
            for _ in 0..*trials {
                masks1.iter_mut().for_each(|m| *m = rng.gen::<u64>() & full);
                masks2.iter_mut().for_each(|m| *m = rng.gen::<u64>() & full);
                let e1 = search.pf.eval(frame, &masks1);
                if let Some(w) = search.check(&masks1, &masks2, e1)? {
                    return Ok(SearchOutcome::Found(Box::new(w)));
                }
            }
            Ok(SearchOutcome::Exhausted {
                seed: *seed,
                trials: *trials,
            })
        }
    }
}

/// Checks one given pair of models on `frame` against their greatest τ-bisimulation.
pub fn witness_for_models(
    m1: &Model,
    m2: &Model,
    f: &Formula,
    g: &Formula,
    tau: &LiteralSet,
) -> Result<Option<Witness>> {
    let z = greatest_tau_bisim(m1, m2, tau)?;
    let e1 = m1.eval(f).bits();
    let e2 = m2.eval(g).bits();
    Ok(first_offending_pair(&z, e1, e2).map(|pair| Witness {
        f: f.clone(),
        g: g.clone(),
        tau: tau.clone(),
        m1: m1.clone(),
        m2: m2.clone(),
        z,
        pair,
    }))
}

/// Re-checks a witness using only evaluation and the bisimulation checker.
pub fn verify_witness(w: &Witness) -> Result<bool> {
    let (w1, w2) = w.pair;
    Ok(w.z.contains(w1, w2)
        && crate::bisim::check_tau_bisim(&w.m1, &w.m2, &w.z, &w.tau)?.is_none()
        && w.m1.holds_at(w1, &w.f)
        && !w.m2.holds_at(w2, &w.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};
    use crate::structures::KripkeFrame;

    fn c2() -> Frame {
        Frame::Kripke(KripkeFrame::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap())
    }

    #[test]
    fn finds_cluster_counterexample() {
        let f = parse("[]p | (~p & <>p)").unwrap();
        let out =
            positivity_witness_search(&c2(), &f, &[var("p")], &SearchMode::Exhaustive, &Guards::default()).unwrap();
        let w = out.witness().expect("witness");
        assert!(verify_witness(w).unwrap());
    }

    #[test]
    fn positive_formula_has_no_witness() {
        let f = parse("<>p").unwrap();
        let out =
            positivity_witness_search(&c2(), &f, &[var("p")], &SearchMode::Exhaustive, &Guards::default()).unwrap();
        assert_eq!(
            out,
            SearchOutcome::NoneFound {
                pairs_checked: 16,
                complete: true
            }
        );
    }

    #[test]
    fn sampled_reports_seed() {
        let f = parse("<>p").unwrap();
        let mode = SearchMode::Sampled { seed: 7, trials: 20 };
        let out = positivity_witness_search(&c2(), &f, &[var("p")], &mode, &Guards::default()).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted { seed: 7, trials: 20 });
    }
}
