//! τ-bisimulations between finite models: checking, greatest fixed points,
//! preservation, zigzag-free decompositions and morphisms.

mod morphism;
mod zigzag;

use std::fmt;

use serde::Serialize;

pub use morphism::{check_morphism, is_reduction, MorphismViolation};
pub use zigzag::{check_zigzag_decomposition, zigzag_free_subrelation, ZigzagDecomposition};

use crate::error::{Error, Result};
use crate::formula::{Formula, Literal, LiteralSet};
use crate::structures::{bit_iter, full_mask, Frame, Model, Relation, WorldSet};

/// Largest frame swept subset by subset when a check cannot use the Kripke
/// shortcut.
const MAX_SUBSET_SWEEP: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Condition {
    #[serde(rename = "zig")]
    Zig,
    #[serde(rename = "zag")]
    Zag,
    #[serde(rename = "lit")]
    Lit,
    #[serde(rename = "zig_K")]
    ZigK,
    #[serde(rename = "zag_K")]
    ZagK,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Zig => "zig",
            Condition::Zag => "zag",
            Condition::Lit => "lit",
            Condition::ZigK => "zig_K",
            Condition::ZagK => "zag_K",
        })
    }
}

/// A failed bisimulation condition at `pair`.
///
/// * `lit`: `literal` holds at `pair.0` but not at `pair.1`.
/// * `zig_K`: `successor` is an `R₁`-successor of `pair.0` with no `Z`-image
///   among the `R₂`-successors of `pair.1`; `zag_K` is the mirror image.
/// * `zig`: `pair.0 ∈ ◇₁X` but `pair.1 ∉ ◇₂ZX` for `X = subset`; `zag`:
///   `pair.1 ∈ ◇₂X` but `pair.0 ∉ ◇₁Z⁻¹X`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BisimViolation {
    pub condition: Condition,
    pub pair: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal: Option<Literal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub successor: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<WorldSet>,
}

impl fmt::Display for BisimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}, {})", self.condition, self.pair.0, self.pair.1)?;
        if let Some(l) = &self.literal {
            write!(f, " for literal {l}")?;
        }
        if let Some(s) = self.successor {
            write!(f, " via successor {s}")?;
        }
        if let Some(x) = &self.subset {
            write!(f, " for X = {x}")?;
        }
        Ok(())
    }
}

impl BisimViolation {
    fn lit(literal: Literal, pair: (usize, usize)) -> Self {
        BisimViolation {
            condition: Condition::Lit,
            pair,
            literal: Some(literal),
            successor: None,
            subset: None,
        }
    }

    fn kripke(condition: Condition, pair: (usize, usize), successor: usize) -> Self {
        BisimViolation {
            condition,
            pair,
            literal: None,
            successor: Some(successor),
            subset: None,
        }
    }

    fn nbd(condition: Condition, pair: (usize, usize), subset: WorldSet) -> Self {
        BisimViolation {
            condition,
            pair,
            literal: None,
            successor: None,
            subset: Some(subset),
        }
    }

    /// Re-checks the witness against the inputs from scratch.
    pub fn confirm(&self, m1: &Model, m2: &Model, z: &Relation, tau: &LiteralSet) -> bool {
        let (w1, w2) = self.pair;
        if !z.contains(w1, w2) {
            return false;
        }
        match self.condition {
            Condition::Lit => match &self.literal {
                Some(l) => tau.contains(l) && literal_bits(m1, l) >> w1 & 1 == 1 && literal_bits(m2, l) >> w2 & 1 == 0,
                None => false,
            },
            Condition::ZigK | Condition::ZagK => {
                let (Some(k1), Some(k2), Some(v)) = (m1.frame.as_kripke(), m2.frame.as_kripke(), self.successor) else {
                    return false;
                };
                if self.condition == Condition::ZigK {
                    k1.successors(w1) >> v & 1 == 1 && z.row(v) & k2.successors(w2) == 0
                } else {
                    k2.successors(w2) >> v & 1 == 1 && z.preimage_bits(1 << v) & k1.successors(w1) == 0
                }
            }
            Condition::Zig => match &self.subset {
                Some(x) if x.universe() == m1.size() => {
                    m1.frame.dia_bits(x.bits()) >> w1 & 1 == 1
                        && m2.frame.dia_bits(z.image_bits(x.bits())) >> w2 & 1 == 0
                }
                _ => false,
            },
            Condition::Zag => match &self.subset {
                Some(x) if x.universe() == m2.size() => {
                    m2.frame.dia_bits(x.bits()) >> w2 & 1 == 1
                        && m1.frame.dia_bits(z.preimage_bits(x.bits())) >> w1 & 1 == 0
                }
                _ => false,
            },
        }
    }
}

pub(crate) fn literal_bits(m: &Model, l: &Literal) -> u64 {
    let set = m.val.get(&l.var).bits();
    if l.positive {
        set
    } else {
        !set & full_mask(m.size())
    }
}

fn check_dims(m1: &Model, m2: &Model, z: &Relation) -> Result<()> {
    if z.left_size() != m1.size() || z.right_size() != m2.size() {
        return Err(Error::dims(format!(
            "relation is {}x{}, models have {} and {} worlds",
            z.left_size(),
            z.right_size(),
            m1.size(),
            m2.size()
        )));
    }
    Ok(())
}

fn both_kripke(m1: &Model, m2: &Model) -> bool {
    m1.frame.as_kripke().is_some() && m2.frame.as_kripke().is_some()
}

fn check_sweepable(m1: &Model, m2: &Model) -> Result<()> {
    let n = m1.size().max(m2.size());
    if n > MAX_SUBSET_SWEEP {
        return Err(Error::GuardExceeded {
            what: "subset sweep over a mixed Kripke/neighborhood pair".into(),
            needed_bits: n as u32,
            guard_bits: MAX_SUBSET_SWEEP as u32,
        });
    }
    Ok(())
}

/// Checks that `z` is a τ-bisimulation from `m1` to `m2`. Conditions are tried
/// in the order lit, zig, zag; within a condition the least witness is returned.
/// Two Kripke models are checked with `zig_K`/`zag_K`.
pub fn check_tau_bisim(m1: &Model, m2: &Model, z: &Relation, tau: &LiteralSet) -> Result<Option<BisimViolation>> {
    check_dims(m1, m2, z)?;
    for l in tau.literals() {
        let (s1, s2) = (literal_bits(m1, &l), literal_bits(m2, &l));
        for w1 in bit_iter(s1) {
            let bad = z.row(w1) & !s2;
            if bad != 0 {
                return Ok(Some(BisimViolation::lit(l, (w1, bad.trailing_zeros() as usize))));
            }
        }
    }
    if both_kripke(m1, m2) {
        Ok(kripke_violation(m1, m2, z))
    } else {
        check_sweepable(m1, m2)?;
        Ok(zig_violation(&m1.frame, &m2.frame, z).or_else(|| zag_violation(&m1.frame, &m2.frame, z)))
    }
}

/// Frame bisimulation check (τ = ∅).
pub fn check_frame_bisim(f1: &Frame, f2: &Frame, z: &Relation) -> Result<Option<BisimViolation>> {
    check_tau_bisim(
        &Model::bare(f1.clone()),
        &Model::bare(f2.clone()),
        z,
        &LiteralSet::new(),
    )
}

fn kripke_violation(m1: &Model, m2: &Model, z: &Relation) -> Option<BisimViolation> {
    let (k1, k2) = (m1.frame.as_kripke()?, m2.frame.as_kripke()?);
    let inv = z.inverse();
    for (w1, w2) in z.pairs() {
        for v1 in bit_iter(k1.successors(w1)) {
            if z.row(v1) & k2.successors(w2) == 0 {
                return Some(BisimViolation::kripke(Condition::ZigK, (w1, w2), v1));
            }
        }
    }
    for (w1, w2) in z.pairs() {
        for v2 in bit_iter(k2.successors(w2)) {
            if inv.row(v2) & k1.successors(w1) == 0 {
                return Some(BisimViolation::kripke(Condition::ZagK, (w1, w2), v2));
            }
        }
    }
    None
}

fn zig_violation(f1: &Frame, f2: &Frame, z: &Relation) -> Option<BisimViolation> {
    let n1 = f1.size();
    for x in 0..1u64 << n1 {
        let target = f2.dia_bits(z.image_bits(x));
        for w1 in bit_iter(f1.dia_bits(x)) {
            let bad = z.row(w1) & !target;
            if bad != 0 {
                let pair = (w1, bad.trailing_zeros() as usize);
                return Some(BisimViolation::nbd(Condition::Zig, pair, WorldSet::from_bits(n1, x)));
            }
        }
    }
    None
}

fn zag_violation(f1: &Frame, f2: &Frame, z: &Relation) -> Option<BisimViolation> {
    let (n1, n2) = (f1.size(), f2.size());
    for x in 0..1u64 << n2 {
        let d2 = f2.dia_bits(x);
        let source = f1.dia_bits(z.preimage_bits(x));
        for w1 in bit_iter(!source & full_mask(n1)) {
            let bad = z.row(w1) & d2;
            if bad != 0 {
                let pair = (w1, bad.trailing_zeros() as usize);
                return Some(BisimViolation::nbd(Condition::Zag, pair, WorldSet::from_bits(n2, x)));
            }
        }
    }
    None
}

/// `Z(□₁X) ⊆ □₂Z(X)` for all `X`; equivalent to zag on monotone frames.
pub fn zag_prime_holds(f1: &Frame, f2: &Frame, z: &Relation) -> bool {
    (0..1u64 << f1.size()).all(|x| z.image_bits(f1.box_bits(x)) & !f2.box_bits(z.image_bits(x)) == 0)
}

/// The plain subset form of zag, ignoring the Kripke shortcut.
pub fn zag_holds(f1: &Frame, f2: &Frame, z: &Relation) -> bool {
    zag_violation(f1, f2, z).is_none()
}

/// The plain subset form of zig, ignoring the Kripke shortcut.
pub fn zig_holds(f1: &Frame, f2: &Frame, z: &Relation) -> bool {
    zig_violation(f1, f2, z).is_none()
}

fn ensure_monotone(m: &Model, side: &str) -> Result<()> {
    if let Frame::Nbd(n) = &m.frame {
        if let Some((x, y)) = n.monotonicity_violation() {
            return Err(Error::NotMonotone(format!(
                "{side} frame: ◇{} ⊄ ◇{}",
                WorldSet::from_bits(n.size(), x),
                WorldSet::from_bits(n.size(), y)
            )));
        }
    }
    Ok(())
}

/// The greatest τ-bisimulation from `m1` to `m2`, by refining the
/// lit-consistent full relation to a fixed point.
pub fn greatest_tau_bisim(m1: &Model, m2: &Model, tau: &LiteralSet) -> Result<Relation> {
    greatest_tau_bisim_within(m1, m2, tau, &Relation::full(m1.size(), m2.size()))
}

/// The greatest τ-bisimulation contained in `bound`.
pub fn greatest_tau_bisim_within(m1: &Model, m2: &Model, tau: &LiteralSet, bound: &Relation) -> Result<Relation> {
    ensure_monotone(m1, "first")?;
    ensure_monotone(m2, "second")?;
    check_dims(m1, m2, bound)?;
    let mut rows = bound.rows().to_vec();
    for l in tau.literals() {
        let (s1, s2) = (literal_bits(m1, &l), literal_bits(m2, &l));
        for w1 in bit_iter(s1) {
            rows[w1] &= s2;
        }
    }
    let (n1, n2) = (m1.size(), m2.size());
    let mut z = Relation::from_rows(n1, n2, rows);
    if both_kripke(m1, m2) {
        refine_kripke(m1, m2, &mut z);
    } else {
        check_sweepable(m1, m2)?;
        refine_nbd(&m1.frame, &m2.frame, &mut z);
    }
    Ok(z)
}

fn refine_kripke(m1: &Model, m2: &Model, z: &mut Relation) {
    let (k1, k2) = (m1.frame.as_kripke().unwrap(), m2.frame.as_kripke().unwrap());
    loop {
        let inv = z.inverse();
        let mut next = z.clone();
        for (w1, w2) in z.pairs() {
            let zig = bit_iter(k1.successors(w1)).all(|v1| z.row(v1) & k2.successors(w2) != 0);
            let zag = zig && bit_iter(k2.successors(w2)).all(|v2| inv.row(v2) & k1.successors(w1) != 0);
            if !zag {
                next.remove(w1, w2);
            }
        }
        if next == *z {
            return;
        }
        *z = next;
    }
}

fn refine_nbd(f1: &Frame, f2: &Frame, z: &mut Relation) {
    let (n1, n2) = (f1.size(), f2.size());
    loop {
        let mut rows = z.rows().to_vec();
        for x in 0..1u64 << n1 {
            let cur = Relation::from_rows(n1, n2, rows.clone());
            let target = f2.dia_bits(cur.image_bits(x));
            for w1 in bit_iter(f1.dia_bits(x)) {
                rows[w1] &= target;
            }
        }
        for x in 0..1u64 << n2 {
            let cur = Relation::from_rows(n1, n2, rows.clone());
            let d2 = f2.dia_bits(x);
            let source = f1.dia_bits(cur.preimage_bits(x));
            for w1 in bit_iter(!source & full_mask(n1)) {
                rows[w1] &= !d2;
            }
        }
        if rows == z.rows() {
            return;
        }
        *z = Relation::from_rows(n1, n2, rows);
    }
}

/// First pair of `z` (lexicographically) carrying `f` from `m1` to a world
/// where `f` fails in `m2`.
pub fn preserves(z: &Relation, m1: &Model, m2: &Model, f: &Formula) -> Result<Option<(usize, usize)>> {
    entails_under(z, m1, m2, f, f)
}

/// First pair `(w₁, w₂) ∈ Z` with `m1, w₁ ⊨ f` and `m2, w₂ ⊭ g`.
pub fn entails_under(z: &Relation, m1: &Model, m2: &Model, f: &Formula, g: &Formula) -> Result<Option<(usize, usize)>> {
    check_dims(m1, m2, z)?;
    let e1 = m1.eval(f).bits();
    let e2 = m2.eval(g).bits();
    Ok(first_offending_pair(z, e1, e2))
}

pub(crate) fn first_offending_pair(z: &Relation, e1: u64, e2: u64) -> Option<(usize, usize)> {
    for w1 in bit_iter(e1) {
        let bad = z.row(w1) & !e2;
        if bad != 0 {
            return Some((w1, bad.trailing_zeros() as usize));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var;
    use crate::guard::Guards;
    use crate::structures::{KripkeFrame, NbdFrame, Valuation};

    fn c2() -> KripkeFrame {
        KripkeFrame::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    #[test]
    fn identity_is_bisimulation() {
        let m = Model::new(c2(), Valuation::from_lists(2, [("p", vec![1])]).unwrap()).unwrap();
        let tau = LiteralSet::all_of(&[var("p")]);
        assert_eq!(check_tau_bisim(&m, &m, &Relation::identity(2), &tau).unwrap(), None);
        let g = greatest_tau_bisim(&m, &m, &tau).unwrap();
        assert!(Relation::identity(2).is_subset(&g));
    }

    #[test]
    fn lit_violation_reported_first() {
        let m1 = Model::new(c2(), Valuation::from_lists(2, [("p", vec![0])]).unwrap()).unwrap();
        let m2 = Model::new(c2(), Valuation::new(2)).unwrap();
        let tau = LiteralSet::from_parts([var("p")], []);
        let v = check_tau_bisim(&m1, &m2, &Relation::full(2, 2), &tau).unwrap().unwrap();
        assert_eq!(v.condition, Condition::Lit);
        assert_eq!(v.pair, (0, 0));
        assert!(v.confirm(&m1, &m2, &Relation::full(2, 2), &tau));
    }

    #[test]
    fn kripke_zig_violation() {
        let chain = KripkeFrame::new(2, [(0, 1)]).unwrap();
        let m1 = Model::bare(chain.into());
        let m2 = Model::bare(KripkeFrame::new(1, []).unwrap().into());
        let z = Relation::full(2, 1);
        let v = check_tau_bisim(&m1, &m2, &z, &LiteralSet::new()).unwrap().unwrap();
        assert_eq!(v.condition, Condition::ZigK);
        assert_eq!((v.pair, v.successor), ((0, 0), Some(1)));
        assert!(v.confirm(&m1, &m2, &z, &LiteralSet::new()));
    }

    #[test]
    fn nbd_path_matches_kripke_path() {
        let chain = KripkeFrame::new(2, [(0, 1)]).unwrap();
        let m1 = Model::bare(Frame::Nbd(chain.to_nbd(&Guards::default()).unwrap()));
        let m2 = Model::bare(Frame::Nbd(NbdFrame::from_fn(1, |_| 0)));
        let z = Relation::full(2, 1);
        let v = check_tau_bisim(&m1, &m2, &z, &LiteralSet::new()).unwrap().unwrap();
        assert_eq!(v.condition, Condition::Zig);
        assert!(v.confirm(&m1, &m2, &z, &LiteralSet::new()));
    }

    #[test]
    fn non_monotone_rejected() {
        let bad = Model::bare(Frame::Nbd(NbdFrame::new(1, vec![1, 0]).unwrap()));
        assert!(matches!(
            greatest_tau_bisim(&bad, &bad, &LiteralSet::new()),
            Err(Error::NotMonotone(_))
        ));
    }

    #[test]
    fn empty_relation_preserves_everything() {
        let m = Model::new(c2(), Valuation::from_lists(2, [("p", vec![0])]).unwrap()).unwrap();
        let f = crate::formula::parse("p & <>~p").unwrap();
        assert_eq!(preserves(&Relation::empty(2, 2), &m, &m, &f).unwrap(), None);
        assert!(preserves(&Relation::empty(3, 2), &m, &m, &f).is_err());
    }
}
