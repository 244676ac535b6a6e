//! Bounded bottom-up synthesis of positive equivalents and interpolants.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Literal, LiteralSet, Var};
use crate::guard::Guards;
use crate::structures::{frame_validity, full_mask, unpack, Compiled, Frame};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SynthesisResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<Formula>,
    /// Largest formula size fully explored.
    pub bound_reached: usize,
    /// Candidates built, including semantic duplicates.
    pub candidates_checked: u64,
    /// Candidates kept after deduplication.
    pub distinct: u64,
    /// Set when the candidate budget stopped the search early.
    pub truncated: bool,
}

/// Truth sets of a formula under every valuation of a fixed variable list,
/// in counter order.
type Signature = Box<[u64]>;

struct Space<'a> {
    frame: &'a Frame,
    valuations: usize,
    full: u64,
}

impl Space<'_> {
    fn constant(&self, b: bool) -> Signature {
        vec![if b { self.full } else { 0 }; self.valuations].into()
    }

    fn literal(&self, vars: &[Var], l: &Literal) -> Signature {
        let n = self.frame.size();
        let i = vars
            .iter()
            .position(|v| *v == l.var)
            .expect("literal over the search variables");
        let mut masks = vec![0u64; vars.len()];
        (0..self.valuations as u64)
            .map(|c| {
                unpack(c, n, vars.len(), &mut masks);
                if l.positive {
                    masks[i]
                } else {
                    !masks[i] & self.full
                }
            })
            .collect()
    }

    fn of_formula(&self, vars: &[Var], f: &Formula) -> Signature {
        let n = self.frame.size();
        let prog = Compiled::new(f, vars);
        let mut masks = vec![0u64; vars.len()];
        (0..self.valuations as u64)
            .map(|c| {
                unpack(c, n, vars.len(), &mut masks);
                prog.eval(self.frame, &masks)
            })
            .collect()
    }

    fn dia(&self, a: &[u64]) -> Signature {
        a.iter().map(|x| self.frame.dia_bits(*x)).collect()
    }

    fn nec(&self, a: &[u64]) -> Signature {
        a.iter().map(|x| self.frame.box_bits(*x)).collect()
    }
}

fn and(a: &[u64], b: &[u64]) -> Signature {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn or(a: &[u64], b: &[u64]) -> Signature {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn within(lo: &[u64], x: &[u64], hi: &[u64]) -> bool {
    lo.iter().zip(x).zip(hi).all(|((l, x), h)| l & !x == 0 && x & !h == 0)
}

struct Pool<'a> {
    store: Vec<(Formula, Signature)>,
    levels: Vec<Vec<usize>>,
    seen: HashSet<Signature>,
    fresh: Vec<(Formula, Signature)>,
    checked: u64,
    budget: u64,
    accept: &'a dyn Fn(&[u64]) -> bool,
}

enum Offer {
    Continue,
    Hit(Formula),
    OutOfBudget,
}

impl Pool<'_> {
    fn offer(&mut self, f: Formula, sig: Signature) -> Offer {
        if self.checked >= self.budget {
            return Offer::OutOfBudget;
        }
        self.checked += 1;
        if !self.seen.insert(sig.clone()) {
            return Offer::Continue;
        }
        let hit = (self.accept)(&sig);
        self.fresh.push((f.clone(), sig));
        if hit {
            Offer::Hit(f)
        } else {
            Offer::Continue
        }
    }

    fn close_level(&mut self) {
        let base = self.store.len();
        let count = self.fresh.len();
        self.store.append(&mut self.fresh);
        self.levels.push((base..base + count).collect());
    }

    fn result(&self, found: Option<Formula>, bound_reached: usize, truncated: bool) -> SynthesisResult {
        SynthesisResult {
            found,
            bound_reached,
            candidates_checked: self.checked,
            distinct: (self.store.len() + self.fresh.len()) as u64,
            truncated,
        }
    }
}

/// Enumerates formulas over `alphabet` by size, keeping one representative
/// per signature, until `accept` holds.
///
/// Within a size, candidates follow constructor order `◇, □, ∧, ∨` over
/// earlier representatives; `∧`/`∨` only take ordered child pairs since they
/// are commutative.
fn search(
    space: &Space<'_>,
    vars: &[Var],
    alphabet: &[Literal],
    max_size: usize,
    guards: &Guards,
    accept: &dyn Fn(&[u64]) -> bool,
) -> SynthesisResult {
    let mut pool = Pool {
        store: Vec::new(),
        levels: vec![Vec::new()],
        seen: HashSet::new(),
        fresh: Vec::new(),
        checked: 0,
        budget: guards.max_candidates,
        accept,
    };
    for size in 1..=max_size {
        let mut candidates: Vec<(Formula, Signature)> = Vec::new();
        let mut outcome = Offer::Continue;
        if size == 1 {
            candidates.push((Formula::Bot, space.constant(false)));
            candidates.push((Formula::Top, space.constant(true)));
            for l in alphabet {
                candidates.push((Formula::Lit(l.clone()), space.literal(vars, l)));
            }
            for (f, sig) in candidates {
                outcome = pool.offer(f, sig);
                if !matches!(outcome, Offer::Continue) {
                    break;
                }
            }
        } else {
            outcome = grow(&mut pool, space, size);
        }
        match outcome {
            Offer::Hit(f) => return pool.result(Some(f), size, false),
            Offer::OutOfBudget => return pool.result(None, size - 1, true),
            Offer::Continue => pool.close_level(),
        }
    }
    pool.result(None, max_size, false)
}

fn grow(pool: &mut Pool<'_>, space: &Space<'_>, size: usize) -> Offer {
    let prev = pool.levels[size - 1].clone();
    for modal in [true, false] {
        for &a in &prev {
            let (fa, sa) = &pool.store[a];
            let (f, sig) = if modal {
                (Formula::dia(fa.clone()), space.dia(sa))
            } else {
                (Formula::nec(fa.clone()), space.nec(sa))
            };
            match pool.offer(f, sig) {
                Offer::Continue => {}
                other => return other,
            }
        }
    }
    for conj in [true, false] {
        for left in 1..size - 1 {
            let right = size - 1 - left;
            let (ls, rs) = (pool.levels[left].clone(), pool.levels[right].clone());
            for &a in &ls {
                for &b in rs.iter().filter(|&&b| a <= b) {
                    let (fa, sa) = &pool.store[a];
                    let (fb, sb) = &pool.store[b];
                    let (f, sig) = if conj {
                        (Formula::and(fa.clone(), fb.clone()), and(sa, sb))
                    } else {
                        (Formula::or(fa.clone(), fb.clone()), or(sa, sb))
                    };
                    match pool.offer(f, sig) {
                        Offer::Continue => {}
                        other => return other,
                    }
                }
            }
        }
    }
    Offer::Continue
}

fn space_for<'a>(frame: &'a Frame, vars: &[Var], guards: &Guards) -> Result<Space<'a>> {
    guards.ensure_bits("signature", (frame.size() * vars.len()) as f64)?;
    Ok(Space {
        frame,
        valuations: 1usize << (frame.size() * vars.len()),
        full: full_mask(frame.size()),
    })
}

/// Smallest `p⃗`-positive formula over `vars(f)` equivalent to `f` on `frame`,
/// searched up to `max_size`. Candidates use every literal over `vars(f)`
/// except the negations of `pvars`.
pub fn synthesize_positive(
    frame: &Frame,
    f: &Formula,
    pvars: &[Var],
    max_size: usize,
    guards: &Guards,
) -> Result<SynthesisResult> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    let alphabet = LiteralSet::directed(&vars, pvars).literals();
    let space = space_for(frame, &vars, guards)?;
    let target = space.of_formula(&vars, f);
    let result = search(&space, &vars, &alphabet, max_size, guards, &|sig| sig == &*target);
    if let Some(alpha) = &result.found {
        debug_assert!(alpha.is_positive_in(pvars));
        if !frame_validity(frame, &Formula::iff(f.clone(), alpha.clone()), guards)?.is_valid() {
            return Err(Error::Unsupported(format!(
                "synthesized `{alpha}` failed re-validation"
            )));
        }
    }
    Ok(result)
}

/// Smallest `ι` with literals in `τ` over `vars(f) ∪ vars(g)` such that
/// `f → ι` and `ι → g` are valid on `frame`, searched up to `max_size`.
pub fn synthesize_interpolant(
    frame: &Frame,
    f: &Formula,
    g: &Formula,
    tau: &LiteralSet,
    max_size: usize,
    guards: &Guards,
) -> Result<SynthesisResult> {
    let mut all = f.vars();
    all.extend(g.vars());
    let vars: Vec<Var> = all.into_iter().collect();
    let alphabet: Vec<Literal> = tau.intersection(&LiteralSet::all_of(&vars)).literals();
    let space = space_for(frame, &vars, guards)?;
    let lo = space.of_formula(&vars, f);
    let hi = space.of_formula(&vars, g);
    let result = search(&space, &vars, &alphabet, max_size, guards, &|sig| within(&lo, sig, &hi));
    if let Some(iota) = &result.found {
        let ok = frame_validity(frame, &Formula::implies(f.clone(), iota.clone()), guards)?.is_valid()
            && frame_validity(frame, &Formula::implies(iota.clone(), g.clone()), guards)?.is_valid();
        if !ok {
            return Err(Error::Unsupported(format!("synthesized `{iota}` failed re-validation")));
        }
    }
    Ok(result)
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
    fn idempotent_conjunction() {
        let f = parse("<>p & <>p").unwrap();
        let r = synthesize_positive(&c2(), &f, &[var("p")], 5, &Guards::default()).unwrap();
        assert_eq!(r.found, Some(parse("<>p").unwrap()));
        assert_eq!(r.bound_reached, 2);
    }

    #[test]
    fn cluster_counterexample_has_no_small_positive_equivalent() {
        let f = parse("[]p | (~p & <>p)").unwrap();
        let r = synthesize_positive(&c2(), &f, &[var("p")], 9, &Guards::default()).unwrap();
        assert_eq!(r.found, None);
        assert_eq!(r.bound_reached, 9);
        assert!(!r.truncated);
    }

    #[test]
    fn interpolant_of_formula_with_itself() {
        let f = parse("p & <>q").unwrap();
        let r = synthesize_interpolant(&c2(), &f, &f, &f.lits(), 5, &Guards::default()).unwrap();
        assert_eq!(r.found, Some(f));
    }

    #[test]
    fn single_point_interpolant() {
        let c1 = Frame::Kripke(KripkeFrame::new(1, [(0, 0)]).unwrap());
        let f = parse("p & q").unwrap();
        let g = parse("<>p | r").unwrap();
        let tau = LiteralSet::all_of(&[var("p")]);
        let r = synthesize_interpolant(&c1, &f, &g, &tau, 3, &Guards::default()).unwrap();
        assert_eq!(r.found, Some(parse("p").unwrap()));
    }

    #[test]
    fn budget_truncates() {
        let f = parse("[]p | (~p & <>p)").unwrap();
        let guards = Guards {
            max_candidates: 5,
            ..Guards::default()
        };
        let r = synthesize_positive(&c2(), &f, &[var("p")], 9, &guards).unwrap();
        assert!(r.truncated);
        assert!(r.bound_reached < 9);
    }
}
