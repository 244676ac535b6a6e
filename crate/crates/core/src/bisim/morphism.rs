//! Morphisms (total functional bisimulations) and reductions.

use std::fmt;

use serde::Serialize;

use super::literal_bits;
use crate::error::{Error, Result};
use crate::formula::{Literal, LiteralSet, Var};
use crate::structures::{bit_iter, full_mask, is_cone, restrict_frame, Frame, KripkeFrame, Model, Relation, WorldSet};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum MorphismViolation {
    /// `w R₁ v` but not `f(w) R₂ f(v)`.
    Fwd { world: usize, successor: usize },
    /// `f(w) R₂ u` but no `R₁`-successor of `w` maps to `u`.
    Bwd { world: usize, target: usize },
    /// `world` lies in exactly one of `f⁻¹◇₂X` and `◇₁f⁻¹X`.
    Equation { subset: WorldSet, world: usize },
    /// `world` and `f(world)` disagree on `literal`.
    Lit { literal: Literal, world: usize },
    /// Nothing maps onto `world`.
    NotOnto { world: usize },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Fwd { world, successor } => {
                write!(f, "fwd fails: {world} R {successor} is not mapped to an edge")
            }
            MorphismViolation::Bwd { world, target } => {
                write!(
                    f,
                    "bwd fails: image of {world} sees {target}, which has no preimage among its successors"
                )
            }
            MorphismViolation::Equation { subset, world } => {
                write!(f, "f⁻¹◇X ≠ ◇f⁻¹X at world {world} for X = {subset}")
            }
            MorphismViolation::Lit { literal, world } => {
                write!(f, "literal {literal} not transported at world {world}")
            }
            MorphismViolation::NotOnto { world } => write!(f, "world {world} is not in the image"),
        }
    }
}

/// Checks that the total function `f` is a morphism between frames (when
/// both models are bare) or models. Models must agree on every literal over
/// their supports, except that with `pvars` given only the literals of the
/// directed type (all but `¬p` for `p ∈ pvars`) are transported.
pub fn check_morphism(
    f: &Relation,
    src: &Model,
    dst: &Model,
    pvars: Option<&[Var]>,
) -> Result<Option<MorphismViolation>> {
    let map = as_total_function(f)?;
    if f.left_size() != src.size() || f.right_size() != dst.size() {
        return Err(Error::dims(format!(
            "map is {}x{}, structures have {} and {} worlds",
            f.left_size(),
            f.right_size(),
            src.size(),
            dst.size()
        )));
    }
    let vars = src.val.support().chain(dst.val.support());
    let tau = match pvars {
        Some(ps) => LiteralSet::directed(vars, ps),
        None => LiteralSet::all_of(vars),
    };
    for l in tau.literals() {
        let (s1, s2) = (literal_bits(src, &l), literal_bits(dst, &l));
        if let Some(w) = bit_iter(s1).find(|&w| s2 >> map[w] & 1 == 0) {
            return Ok(Some(MorphismViolation::Lit { literal: l, world: w }));
        }
    }
    Ok(frame_violation(&map, &src.frame, &dst.frame))
}

fn as_total_function(f: &Relation) -> Result<Vec<usize>> {
    f.as_function().ok_or_else(|| {
        let w = (0..f.left_size()).find(|&w| f.row(w).count_ones() != 1).unwrap_or(0);
        Error::NotFunction(format!("world {w} has {} images", f.row(w).count_ones()))
    })
}

fn frame_violation(map: &[usize], src: &Frame, dst: &Frame) -> Option<MorphismViolation> {
    if let (Frame::Kripke(k1), Frame::Kripke(k2)) = (src, dst) {
        return kripke_violation(map, k1, k2);
    }
    let preimage = |x: u64| -> u64 {
        map.iter()
            .enumerate()
            .filter(|(_, t)| x >> **t & 1 == 1)
            .fold(0, |acc, (w, _)| acc | 1 << w)
    };
    for x in 0..1u64 << dst.size() {
        let lhs = preimage(dst.dia_bits(x));
        let rhs = src.dia_bits(preimage(x));
        let diff = (lhs ^ rhs) & full_mask(src.size());
        if diff != 0 {
            return Some(MorphismViolation::Equation {
                subset: WorldSet::from_bits(dst.size(), x),
                world: diff.trailing_zeros() as usize,
            });
        }
    }
    None
}

fn kripke_violation(map: &[usize], k1: &KripkeFrame, k2: &KripkeFrame) -> Option<MorphismViolation> {
    for (w, v) in k1.edges() {
        if k2.successors(map[w]) >> map[v] & 1 == 0 {
            return Some(MorphismViolation::Fwd { world: w, successor: v });
        }
    }
    for w in 0..k1.size() {
        let reached = bit_iter(k1.successors(w)).fold(0u64, |acc, v| acc | 1 << map[v]);
        let missing = k2.successors(map[w]) & !reached;
        if missing != 0 {
            return Some(MorphismViolation::Bwd {
                world: w,
                target: missing.trailing_zeros() as usize,
            });
        }
    }
    None
}

/// Whether `f` is an onto morphism from the cone `v` of `f1` to `f2`.
///
/// `f` may be indexed either by the worlds of `f1` (rows outside `v` are
/// ignored) or by the worlds of `v` renumbered in increasing order.
pub fn is_reduction(
    f: &Relation,
    f1: &KripkeFrame,
    v: &WorldSet,
    f2: &KripkeFrame,
) -> Result<Option<MorphismViolation>> {
    if v.universe() != f1.size() {
        return Err(Error::dims("cone set does not match the frame"));
    }
    if !is_cone(f1, v) {
        return Err(Error::NotCone(v.to_string()));
    }
    let f = if f.left_size() == v.len() {
        f.clone()
    } else if f.left_size() == f1.size() {
        f.restrict(v, &WorldSet::full(f.right_size()))
    } else {
        return Err(Error::dims(format!(
            "map has {} rows, cone has {} worlds",
            f.left_size(),
            v.len()
        )));
    };
    let sub = restrict_frame(&Frame::Kripke(f1.clone()), v)?;
    let src = Model::bare(sub);
    let dst = Model::bare(Frame::Kripke(f2.clone()));
    if let Some(bad) = check_morphism(&f, &src, &dst, None)? {
        return Ok(Some(bad));
    }
    let missing = !f.range().bits() & full_mask(f2.size());
    if missing != 0 {
        return Ok(Some(MorphismViolation::NotOnto {
            world: missing.trailing_zeros() as usize,
        }));
    }
    Ok(None)
}
