//! Formula constructions: graded modalities, NNF slot splitting, and the
//! fresh-variable lifts used to trade parameters and monotone variables.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Literal, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modality {
    Dia,
    Nec,
}

/// `◇^{≤n} f` as `f ∨ ◇f ∨ … ∨ ◇ⁿf`, or `□^{≤n} f` as the matching conjunction.
pub fn graded(kind: Modality, n: usize, f: &Formula) -> Formula {
    let mut layers = Vec::with_capacity(n + 1);
    let mut cur = f.clone();
    for _ in 0..=n {
        let next = match kind {
            Modality::Dia => Formula::dia(cur.clone()),
            Modality::Nec => Formula::nec(cur.clone()),
        };
        layers.push(cur);
        cur = next;
    }
    match kind {
        Modality::Dia => Formula::big_or(layers),
        Modality::Nec => Formula::big_and(layers),
    }
}

/// A positive template over slot variables plus the literal each slot stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NnfSplit {
    pub template: Formula,
    /// `slots[i]` is the literal plugged into slot `r{i}`.
    pub slots: Vec<Literal>,
}

impl NnfSplit {
    pub fn slot_var(i: usize) -> Var {
        Var::new(&format!("r{i}")).expect("valid slot name")
    }

    /// Plugs the literals back in. Slots are replaced simultaneously, so slot
    /// names never capture variables of the original formula.
    pub fn reassemble(&self) -> Formula {
        let lookup: BTreeMap<Var, &Literal> = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, l)| (NnfSplit::slot_var(i), l))
            .collect();
        self.template.map_literals(&mut |l| {
            let target = lookup[&l.var];
            Formula::Lit(target.clone())
        })
    }
}

/// Splits `f` into a positive template over fresh slots `r0, r1, …`, one slot
/// per distinct literal: positive literals first, then negative ones, each
/// group ordered by variable.
pub fn nnf_split(f: &Formula) -> NnfSplit {
    let lits = f.lits();
    let slots: Vec<Literal> = lits
        .pos
        .iter()
        .cloned()
        .map(Literal::pos)
        .chain(lits.neg.iter().cloned().map(Literal::neg))
        .collect();
    let index: BTreeMap<&Literal, usize> = slots.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let template = f.map_literals(&mut |l| Formula::atom(NnfSplit::slot_var(index[l])));
    NnfSplit { template, slots }
}

fn fresh_names(base: &[Var], suffix: &str, taken: &BTreeSet<Var>) -> Result<Vec<Var>> {
    let fresh: Vec<Var> = base.iter().map(|v| v.suffixed(suffix)).collect();
    for v in &fresh {
        if taken.contains(v) || base.contains(v) {
            return Err(Error::NameClash(v.to_string()));
        }
    }
    Ok(fresh)
}

/// `⋀ᵢ □^{≤d}(¬qᵢ ∨ pᵢ) ∧ f(q⃗)` with `d` the modal depth of `f` and
/// `qᵢ = pᵢ_q`.
pub fn lyndon_premise(f: &Formula, pvars: &[Var]) -> Result<Formula> {
    let qvars = fresh_names(pvars, "_q", &f.vars())?;
    let d = f.modal_depth();
    let rename: BTreeMap<Var, Formula> = pvars
        .iter()
        .zip(&qvars)
        .map(|(p, q)| (p.clone(), Formula::atom(q.clone())))
        .collect();
    let premises = pvars.iter().zip(&qvars).map(|(p, q)| {
        graded(
            Modality::Nec,
            d,
            &Formula::or(Formula::neg_atom(q.clone()), Formula::atom(p.clone())),
        )
    });
    Ok(Formula::big_and(premises.chain([f.substitute(&rename)])))
}

/// Rewrites `f` to be positive in `rvars ∪ r̄'` (each `¬r` becomes `r'`) and
/// returns `ψ = (φ' ∧ ⋀ⱼ □^{≤d}(rⱼ ∨ rⱼ')) ∨ ⋁ⱼ ◇^{≤d}(rⱼ ∧ rⱼ')`.
///
/// Substituting `r̄' := ¬r̄` gives a formula Kripke-equivalent to `f`.
pub fn param_elim_lift(f: &Formula, pvars: &[Var], rvars: &[Var]) -> Result<Formula> {
    if let Some(shared) = rvars.iter().find(|r| pvars.contains(r)) {
        return Err(Error::InvalidParameter(format!(
            "`{shared}` is both a monotone variable and a parameter"
        )));
    }
    if rvars.is_empty() {
        return Ok(f.clone());
    }
    let mut taken = f.vars();
    taken.extend(pvars.iter().cloned());
    let primed = fresh_names(rvars, "'", &taken)?;
    let prime_of: BTreeMap<&Var, &Var> = rvars.iter().zip(&primed).collect();
    let lifted = f.map_literals(&mut |l| match prime_of.get(&l.var) {
        Some(r_prime) if !l.positive => Formula::atom((*r_prime).clone()),
        _ => Formula::Lit(l.clone()),
    });
    let d = f.modal_depth();
    let covers = rvars.iter().zip(&primed).map(|(r, rp)| {
        graded(
            Modality::Nec,
            d,
            &Formula::or(Formula::atom(r.clone()), Formula::atom(rp.clone())),
        )
    });
    let clashes = rvars.iter().zip(&primed).map(|(r, rp)| {
        graded(
            Modality::Dia,
            d,
            &Formula::and(Formula::atom(r.clone()), Formula::atom(rp.clone())),
        )
    });
    Ok(Formula::or(
        Formula::big_and([lifted].into_iter().chain(covers)),
        Formula::big_or(clashes),
    ))
}

/// Returns `(φ ∧ η, ψ[q̄ ↦ q̄_r] ∧ η)` with `η = ⋁ pᵢ ∨ ⊤` (just `⊤` when `pvars`
/// is empty) and `q̄` the variables of `ψ` outside `pvars`. The two outputs
/// share exactly the variables `pvars`.
pub fn craig_lift(phi: &Formula, psi: &Formula, pvars: &[Var]) -> Result<(Formula, Formula)> {
    let eta = if pvars.is_empty() {
        Formula::Top
    } else {
        Formula::or(Formula::big_or(pvars.iter().cloned().map(Formula::atom)), Formula::Top)
    };
    let others: Vec<Var> = psi.vars().into_iter().filter(|v| !pvars.contains(v)).collect();
    let mut taken = phi.vars();
    taken.extend(psi.vars());
    let fresh = fresh_names(&others, "_r", &taken)?;
    let rename: BTreeMap<Var, Formula> = others
        .iter()
        .zip(fresh)
        .map(|(q, r)| (q.clone(), Formula::atom(r)))
        .collect();
    Ok((
        Formula::and(phi.clone(), eta.clone()),
        Formula::and(psi.substitute(&rename), eta),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn graded_examples() {
        assert_eq!(graded(Modality::Dia, 0, &p("p")), p("p"));
        assert_eq!(graded(Modality::Nec, 2, &p("p")), p("p & []p & [][]p"));
        assert_eq!(
            graded(Modality::Dia, 1, &Formula::Bot),
            Formula::or(Formula::Bot, Formula::dia(Formula::Bot))
        );
        assert_eq!(graded(Modality::Dia, 3, &p("<>p")).modal_depth(), 4);
    }

    #[test]
    fn nnf_split_examples() {
        let s = nnf_split(&p("~p"));
        assert_eq!(s.template, p("r0"));
        assert_eq!(s.slots, vec![Literal::neg(var("p"))]);

        let s = nnf_split(&p("p & ~p"));
        assert_eq!(s.template, p("r0 & r1"));
        assert_eq!(s.slots, vec![Literal::pos(var("p")), Literal::neg(var("p"))]);

        // slot names overlapping input variables are harmless
        let f = p("r1 & ~r0 | <>(r0 & ~r1)");
        let s = nnf_split(&f);
        assert!(s.template.is_positive());
        assert_eq!(s.reassemble(), f);
    }

    #[test]
    fn lyndon_premise_examples() {
        assert_eq!(lyndon_premise(&p("p"), &[var("p")]).unwrap(), p("(~p_q | p) & p_q"));
        assert_eq!(
            lyndon_premise(&p("<>p"), &[var("p")]).unwrap(),
            p("((~p_q|p) & [](~p_q|p)) & <>p_q")
        );
        assert_eq!(
            lyndon_premise(&p("p & p_q"), &[var("p")]),
            Err(Error::NameClash("p_q".into()))
        );
    }

    #[test]
    fn param_elim_lift_examples() {
        let f = p("<>(p & ~r)");
        assert_eq!(param_elim_lift(&f, &[var("p")], &[]).unwrap(), f);
        assert_eq!(
            param_elim_lift(&p("~r"), &[], &[var("r")]).unwrap(),
            p("(r' & (r|r')) | (r & r')")
        );
        let psi = param_elim_lift(&p("<>~r & []r"), &[], &[var("r")]).unwrap();
        assert!(psi.is_positive());
        assert_eq!(
            param_elim_lift(&p("~r | r'"), &[], &[var("r")]),
            Err(Error::NameClash("r'".into()))
        );
        assert!(param_elim_lift(&p("r"), &[var("r")], &[var("r")]).is_err());
    }

    #[test]
    fn craig_lift_examples() {
        let (a, b) = craig_lift(&p("p & q1"), &p("p | q2"), &[var("p")]).unwrap();
        assert_eq!(a, p("(p&q1)&(p|true)"));
        assert_eq!(b, p("(p|q2_r)&(p|true)"));
        let shared: BTreeSet<Var> = a.vars().intersection(&b.vars()).cloned().collect();
        assert_eq!(shared, [var("p")].into_iter().collect());

        let (a, b) = craig_lift(&p("q"), &p("q"), &[]).unwrap();
        assert_eq!(a, p("q & true"));
        assert_eq!(b, p("q_r & true"));
        assert!(a.vars().intersection(&b.vars()).next().is_none());
    }
}
