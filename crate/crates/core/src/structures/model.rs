//! Valuations, models, and formula evaluation.

use std::collections::{BTreeMap, BTreeSet};

use super::frame::{restrict_frame, Frame};
use super::worldset::{full_mask, WorldSet};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};

/// Assignment of world sets to a finite support of variables. Variables
/// outside the support read as the empty set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Valuation {
    worlds: usize,
    assignment: BTreeMap<Var, WorldSet>,
}

impl Valuation {
    pub fn new(worlds: usize) -> Valuation {
        Valuation {
            worlds,
            assignment: BTreeMap::new(),
        }
    }

    pub fn from_sets(worlds: usize, sets: impl IntoIterator<Item = (Var, WorldSet)>) -> Result<Valuation> {
        let mut v = Valuation::new(worlds);
        for (var, set) in sets {
            v.set(var, set)?;
        }
        Ok(v)
    }

    /// Builds a valuation from world lists, e.g. `[("p", vec![0, 2])]`.
    pub fn from_lists<'a>(worlds: usize, lists: impl IntoIterator<Item = (&'a str, Vec<usize>)>) -> Result<Valuation> {
        let mut v = Valuation::new(worlds);
        for (name, ws) in lists {
            let var = Var::new(name).map_err(Error::InvalidParameter)?;
            v.set(var, WorldSet::from_worlds(worlds, ws)?)?;
        }
        Ok(v)
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn set(&mut self, var: Var, set: WorldSet) -> Result<()> {
        if set.universe() != self.worlds {
            return Err(Error::dims(format!(
                "valuation of `{var}` is over {} worlds, frame has {}",
                set.universe(),
                self.worlds
            )));
        }
        self.assignment.insert(var, set);
        Ok(())
    }

    pub fn get(&self, var: &Var) -> WorldSet {
        self.assignment
            .get(var)
            .copied()
            .unwrap_or_else(|| WorldSet::empty(self.worlds))
    }

    pub fn support(&self) -> impl Iterator<Item = &Var> {
        self.assignment.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &WorldSet)> {
        self.assignment.iter()
    }

    /// Bitmasks of `vars`, in the given order.
    pub fn masks(&self, vars: &[Var]) -> Vec<u64> {
        vars.iter().map(|v| self.get(v).bits()).collect()
    }

    pub(crate) fn from_masks(worlds: usize, vars: &[Var], masks: &[u64]) -> Valuation {
        Valuation {
            worlds,
            assignment: vars
                .iter()
                .zip(masks)
                .map(|(v, m)| (v.clone(), WorldSet::from_bits(worlds, *m)))
                .collect(),
        }
    }

    /// Pointwise `≤` on `pvars` and equality elsewhere, over the union of supports.
    pub fn leq_on(&self, other: &Valuation, pvars: &BTreeSet<Var>) -> bool {
        let vars: BTreeSet<&Var> = self.support().chain(other.support()).collect();
        vars.into_iter().all(|v| {
            let (a, b) = (self.get(v), other.get(v));
            if pvars.contains(v) {
                a.is_subset(&b)
            } else {
                a == b
            }
        })
    }

    pub fn restrict(&self, v: &WorldSet) -> Valuation {
        let worlds: Vec<usize> = v.iter().collect();
        let assignment = self
            .assignment
            .iter()
            .map(|(var, set)| {
                let bits = worlds
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| set.contains(**w))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                (var.clone(), WorldSet::from_bits(worlds.len(), bits))
            })
            .collect();
        Valuation {
            worlds: worlds.len(),
            assignment,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Model {
    pub frame: Frame,
    pub val: Valuation,
}

impl Model {
    pub fn new(frame: impl Into<Frame>, val: Valuation) -> Result<Model> {
        let frame = frame.into();
        if frame.size() != val.worlds() {
            return Err(Error::dims(format!(
                "valuation over {} worlds on a frame with {}",
                val.worlds(),
                frame.size()
            )));
        }
        Ok(Model { frame, val })
    }

    /// The frame with the empty valuation.
    pub fn bare(frame: Frame) -> Model {
        let val = Valuation::new(frame.size());
        Model { frame, val }
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }

    pub fn eval(&self, f: &Formula) -> WorldSet {
        eval(self, f)
    }

    pub fn holds_at(&self, w: usize, f: &Formula) -> bool {
        eval(self, f).contains(w)
    }
}

/// Truth set of `f` in `m`.
pub fn eval(m: &Model, f: &Formula) -> WorldSet {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    let prog = Compiled::new(f, &vars);
    WorldSet::from_bits(m.size(), prog.eval(&m.frame, &m.val.masks(&vars)))
}

pub fn holds_at(m: &Model, w: usize, f: &Formula) -> bool {
    eval(m, f).contains(w)
}

/// The dual model `(F^d, ϑ)`.
pub fn dual_model(m: &Model) -> Result<Model> {
    Ok(Model {
        frame: m.frame.dual()?,
        val: m.val.clone(),
    })
}

/// Induced submodel on `v`, worlds renumbered in increasing order.
pub fn restrict_model(m: &Model, v: &WorldSet) -> Result<Model> {
    Ok(Model {
        frame: restrict_frame(&m.frame, v)?,
        val: m.val.restrict(v),
    })
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Const(bool),
    Lit(usize, bool),
    And,
    Or,
    Dia,
    Nec,
}

/// A formula flattened to postfix over variable indices, for repeated
/// evaluation under many valuations.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    depth: usize,
}

impl Compiled {
    /// `vars` fixes the index of each variable; every variable of `f` must occur.
    pub fn new(f: &Formula, vars: &[Var]) -> Compiled {
        let index: BTreeMap<&Var, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut ops = Vec::with_capacity(f.size());
        fn go(f: &Formula, index: &BTreeMap<&Var, usize>, ops: &mut Vec<Op>) {
            match f {
                Formula::Bot => ops.push(Op::Const(false)),
                Formula::Top => ops.push(Op::Const(true)),
                Formula::Lit(l) => ops.push(Op::Lit(index[&l.var], l.positive)),
                Formula::Dia(a) => {
                    go(a, index, ops);
                    ops.push(Op::Dia);
                }
                Formula::Nec(a) => {
                    go(a, index, ops);
                    ops.push(Op::Nec);
                }
                Formula::And(a, b) => {
                    go(a, index, ops);
                    go(b, index, ops);
                    ops.push(Op::And);
                }
                Formula::Or(a, b) => {
                    go(a, index, ops);
                    go(b, index, ops);
                    ops.push(Op::Or);
                }
            }
        }
        go(f, &index, &mut ops);
        let mut depth = 0usize;
        let mut max = 0;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Lit(..) => depth += 1,
                Op::And | Op::Or => depth -= 1,
                Op::Dia | Op::Nec => {}
            }
            max = max.max(depth);
        }
        Compiled { ops, depth: max }
    }

    /// Truth set under the given variable masks.
    pub fn eval(&self, frame: &Frame, masks: &[u64]) -> u64 {
        let mut stack = Vec::with_capacity(self.depth);
        self.eval_with(frame, masks, &mut stack)
    }

    /// As [`Compiled::eval`], reusing a scratch stack.
    pub fn eval_with(&self, frame: &Frame, masks: &[u64], stack: &mut Vec<u64>) -> u64 {
        let full = full_mask(frame.size());
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Const(b) => stack.push(if b { full } else { 0 }),
                Op::Lit(i, pos) => stack.push(if pos { masks[i] } else { !masks[i] & full }),
                Op::And => {
                    let b = stack.pop().unwrap();
                    let a = stack.last_mut().unwrap();
                    *a &= b;
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    let a = stack.last_mut().unwrap();
                    *a |= b;
                }
                Op::Dia => {
                    let a = stack.last_mut().unwrap();
                    *a = frame.dia_bits(*a);
                }
                Op::Nec => {
                    let a = stack.last_mut().unwrap();
                    *a = frame.box_bits(*a);
                }
            }
        }
        stack.pop().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};
    use crate::guard::Guards;
    use crate::structures::frame::KripkeFrame;

    #[test]
    fn eval_basics() {
        let chain = KripkeFrame::new(2, [(0, 1)]).unwrap();
        let m = Model::new(chain, Valuation::from_lists(2, [("p", vec![1])]).unwrap()).unwrap();
        assert_eq!(m.eval(&parse("<>p").unwrap()).to_vec(), vec![0]);
        assert_eq!(m.eval(&parse("[]p").unwrap()).to_vec(), vec![0, 1]);
        assert_eq!(m.eval(&parse("[]false").unwrap()).to_vec(), vec![1]);
        assert!(m.eval(&Formula::Top).is_full());
        // unsupported variables are empty
        assert!(m.eval(&parse("q").unwrap()).is_empty());
        assert!(m.eval(&parse("~q").unwrap()).is_full());
    }

    #[test]
    fn dual_model_eval() {
        let chain = KripkeFrame::new(2, [(0, 1)]).unwrap();
        let nbd = chain.to_nbd(&Guards::default()).unwrap();
        let m = Model::new(nbd, Valuation::from_lists(2, [("p", vec![0])]).unwrap()).unwrap();
        let d = dual_model(&m).unwrap();
        let f = parse("<>p | [](p & <>~p)").unwrap();
        assert_eq!(m.eval(&f), d.eval(&f.dualize()));
    }

    #[test]
    fn valuation_order() {
        let a = Valuation::from_lists(2, [("p", vec![0]), ("q", vec![1])]).unwrap();
        let b = Valuation::from_lists(2, [("p", vec![0, 1]), ("q", vec![1])]).unwrap();
        let ps: BTreeSet<Var> = [var("p")].into_iter().collect();
        assert!(a.leq_on(&b, &ps));
        assert!(!b.leq_on(&a, &ps));
        assert!(!a.leq_on(&b, &BTreeSet::new()));
        assert!(Valuation::from_lists(2, [("p", vec![2])]).is_err());
    }
}
