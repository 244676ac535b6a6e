//! Maximal bisimulation products of finite monotone neighborhood frames.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bisim::check_frame_bisim;
use crate::error::{Error, Result};
use crate::formula::{Formula, Literal, Var};
use crate::guard::Guards;
use crate::structures::{
    bit_iter, frame_validity, full_mask, Frame, NbdFrame, Relation, Validity, Valuation, WorldSet,
};

/// The frame `(Z, ◇)` over the pairs of a full bisimulation, listed in
/// lexicographic order, with its two projections.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BisimProduct {
    pub carrier: Vec<(usize, usize)>,
    pub frame: NbdFrame,
    pub left_size: usize,
    pub right_size: usize,
}

impl BisimProduct {
    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn pi1(&self) -> Vec<usize> {
        self.carrier.iter().map(|p| p.0).collect()
    }

    pub fn pi2(&self) -> Vec<usize> {
        self.carrier.iter().map(|p| p.1).collect()
    }

    /// Projection `k ∈ {1, 2}` as a relation from the carrier to `W_k`.
    pub fn projection(&self, k: usize) -> Relation {
        match k {
            1 => Relation::from_function(&self.pi1(), self.left_size),
            _ => Relation::from_function(&self.pi2(), self.right_size),
        }
        .expect("projections stay inside the factors")
    }

    /// `π_k X` as a bitmask over `W_k`.
    #[inline]
    pub fn project(&self, k: usize, x: u64) -> u64 {
        bit_iter(x).fold(0, |acc, i| {
            let (a, b) = self.carrier[i];
            acc | 1 << if k == 1 { a } else { b }
        })
    }

    /// `π_k⁻¹ X_k` as a bitmask over the carrier.
    #[inline]
    pub fn lift(&self, k: usize, xk: u64) -> u64 {
        self.carrier
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| xk >> if k == 1 { *a } else { *b } & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn as_frame(&self) -> Frame {
        Frame::Nbd(self.frame.clone())
    }
}

impl Serialize for BisimProduct {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("type", "nbd")?;
        m.serialize_entry("worlds", &self.size())?;
        m.serialize_entry("dia", self.frame.table())?;
        m.serialize_entry("carrier", &self.carrier)?;
        m.serialize_entry("pi1", &self.pi1())?;
        m.serialize_entry("pi2", &self.pi2())?;
        m.end()
    }
}

fn require_monotone(f: &Frame, side: &str) -> Result<()> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone(format!("{side} factor")));
    }
    Ok(())
}

/// `◇_max X = π₁⁻¹◇₁π₁X ∩ π₂⁻¹◇₂π₂X` on the graph of a full frame bisimulation `z`.
pub fn max_product(f1: &Frame, f2: &Frame, z: &Relation, guards: &Guards) -> Result<BisimProduct> {
    require_monotone(f1, "first")?;
    require_monotone(f2, "second")?;
    if z.left_size() != f1.size() || z.right_size() != f2.size() {
        return Err(Error::dims("relation does not match the factors"));
    }
    if !z.is_full() {
        return Err(Error::NotFull(format!("domain {}, range {}", z.domain(), z.range())));
    }
    if z.len() > guards.max_product_worlds {
        return Err(Error::GuardExceeded {
            what: "product carrier".into(),
            needed_bits: z.len() as u32,
            guard_bits: guards.max_product_worlds as u32,
        });
    }
    if let Some(v) = check_frame_bisim(f1, f2, z)? {
        return Err(Error::NotBisimulation(v.to_string()));
    }
    let mut p = BisimProduct {
        carrier: z.pairs().collect(),
        frame: NbdFrame::from_fn(0, |_| 0),
        left_size: f1.size(),
        right_size: f2.size(),
    };
    let frame = NbdFrame::from_fn(p.size(), |x| {
        p.lift(1, f1.dia_bits(p.project(1, x))) & p.lift(2, f2.dia_bits(p.project(2, x)))
    });
    p.frame = frame;
    Ok(p)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ProductViolation {
    /// `◇π_k⁻¹X_k ≠ π_k⁻¹◇_kX_k`.
    Equation { k: usize, subset: WorldSet },
    /// `◇X ⊄ ◇(X ∪ {w})`; `subset` is `X`, `larger` is `X ∪ {w}`.
    NotMonotone { subset: WorldSet, larger: WorldSet },
    /// Adding `world` to `◇X` (and to `◇Y` for all `Y ⊇ X`) keeps the
    /// equations, so a larger monotone operator satisfies them.
    NotMaximal { subset: WorldSet, world: usize },
}

/// Verifies the projection equations for every `X_k ⊆ W_k`, monotonicity, and
/// that no monotone operator satisfying the equations exceeds `◇` anywhere.
pub fn check_product(p: &BisimProduct, f1: &Frame, f2: &Frame) -> Result<Option<ProductViolation>> {
    if f1.size() != p.left_size || f2.size() != p.right_size {
        return Err(Error::dims("factors do not match the product"));
    }
    let n = p.size();
    for (k, fk) in [(1, f1), (2, f2)] {
        for xk in 0..1u64 << fk.size() {
            if p.frame.dia_bits(p.lift(k, xk)) != p.lift(k, fk.dia_bits(xk)) {
                return Ok(Some(ProductViolation::Equation {
                    k,
                    subset: WorldSet::from_bits(fk.size(), xk),
                }));
            }
        }
    }
    if let Some((x, y)) = p.frame.monotonicity_violation() {
        return Ok(Some(ProductViolation::NotMonotone {
            subset: WorldSet::from_bits(n, x),
            larger: WorldSet::from_bits(n, y),
        }));
    }
    // Points that may be added to ◇X: they must already lie in ◇π_k⁻¹X_k
    // for every X_k whose lift contains X.
    for x in 0..1u64 << n {
        let mut allowed = full_mask(n);
        for (k, fk) in [(1, f1), (2, f2)] {
            let base = p.project(k, x);
            let free = !base & full_mask(fk.size());
            for extra in crate::positivity::submasks(free) {
                allowed &= p.frame.dia_bits(p.lift(k, base | extra));
            }
        }
        let extra = allowed & !p.frame.dia_bits(x);
        if extra != 0 {
            return Ok(Some(ProductViolation::NotMaximal {
                subset: WorldSet::from_bits(n, x),
                world: extra.trailing_zeros() as usize,
            }));
        }
    }
    Ok(None)
}

/// The operator `X ↦ α(X)` induced by a formula in one variable.
fn induced(frame: &Frame, alpha: &Formula, var: Option<&Var>, x: u64) -> u64 {
    let n = frame.size();
    let mut val = Valuation::new(n);
    if let Some(v) = var {
        val.set(v.clone(), WorldSet::from_bits(n, x))
            .expect("sized to the frame");
    }
    let m = crate::structures::Model::new(frame.clone(), val).expect("sized to the frame");
    m.eval(alpha).bits()
}

fn single_var(alpha: &Formula) -> Result<Option<Var>> {
    let vars = alpha.vars();
    if vars.len() > 1 {
        return Err(Error::Unsupported(format!("`{alpha}` has more than one variable")));
    }
    Ok(vars.into_iter().next())
}

/// Checks `α_F X ⊆ π₁⁻¹α_{F₁}π₁X ∩ π₂⁻¹α_{F₂}π₂X` for every `X` over the carrier.
pub fn positive_bound_check(p: &BisimProduct, f1: &Frame, f2: &Frame, alpha: &Formula) -> Result<Option<WorldSet>> {
    if !alpha.is_positive() {
        return Err(Error::Unsupported(format!("`{alpha}` is not positive")));
    }
    let var = single_var(alpha)?;
    let frame = p.as_frame();
    for x in 0..1u64 << p.size() {
        let lhs = induced(&frame, alpha, var.as_ref(), x);
        let rhs = p.lift(1, induced(f1, alpha, var.as_ref(), p.project(1, x)))
            & p.lift(2, induced(f2, alpha, var.as_ref(), p.project(2, x)));
        if lhs & !rhs != 0 {
            return Ok(Some(WorldSet::from_bits(p.size(), x)));
        }
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AxiomStatus {
    /// Valid on both factors and on the product.
    Preserved,
    /// Not valid on both factors, so nothing to check.
    NotApplicable,
    /// Valid on both factors but refuted on the product.
    Counterexample { valuation: Valuation, world: usize },
    /// Neither closed nor of the form `α(p) → ◇p` with `α` positive.
    Rejected { reason: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AxiomReport {
    pub name: String,
    pub formula: Formula,
    #[serde(flatten)]
    pub status: AxiomStatus,
}

/// Whether `f` is closed or has the NNF shape `¬α(p) ∨ ◇p` with `α` positive.
pub fn admissible_axiom(f: &Formula) -> std::result::Result<(), String> {
    if f.is_closed() {
        return Ok(());
    }
    if let Formula::Or(neg_alpha, rhs) = f {
        if let Formula::Dia(inner) = &**rhs {
            if let Formula::Lit(Literal { var, positive: true }) = &**inner {
                let alpha = neg_alpha.negate();
                let only_p = alpha.vars().iter().all(|v| v == var);
                if alpha.is_positive() && only_p {
                    return Ok(());
                }
                return Err(format!("premise `{alpha}` is not a positive formula in `{var}` alone"));
            }
        }
    }
    Err(format!("`{f}` is neither closed nor of the form α(p) -> <>p"))
}

/// Validity of each admissible axiom on the maximal product, for axioms valid
/// on both factors.
pub fn preservation_suite(
    f1: &Frame,
    f2: &Frame,
    z: &Relation,
    axioms: &[(String, Formula)],
    guards: &Guards,
) -> Result<Vec<AxiomReport>> {
    let p = max_product(f1, f2, z, guards)?;
    let pf = p.as_frame();
    let mut out = Vec::with_capacity(axioms.len());
    for (name, f) in axioms {
        let status = match admissible_axiom(f) {
            Err(reason) => AxiomStatus::Rejected { reason },
            Ok(()) => {
                if frame_validity(f1, f, guards)?.is_valid() && frame_validity(f2, f, guards)?.is_valid() {
                    match frame_validity(&pf, f, guards)? {
                        Validity::Valid => AxiomStatus::Preserved,
                        Validity::Countermodel { valuation, world } => AxiomStatus::Counterexample { valuation, world },
                    }
                } else {
                    AxiomStatus::NotApplicable
                }
            }
        };
        out.push(AxiomReport {
            name: name.clone(),
            formula: f.clone(),
            status,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{axiom, parse};
    use crate::structures::KripkeFrame;

    fn nbd(k: KripkeFrame) -> Frame {
        Frame::Nbd(k.to_nbd(&Guards::default()).unwrap())
    }

    fn c2() -> Frame {
        nbd(KripkeFrame::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap())
    }

    #[test]
    fn identity_product_is_the_factor() {
        let p = max_product(&c2(), &c2(), &Relation::identity(2), &Guards::default()).unwrap();
        assert_eq!(p.as_frame(), c2());
        assert_eq!(check_product(&p, &c2(), &c2()).unwrap(), None);
    }

    #[test]
    fn single_point() {
        let pt = nbd(KripkeFrame::new(1, [(0, 0)]).unwrap());
        let p = max_product(&pt, &pt, &Relation::full(1, 1), &Guards::default()).unwrap();
        assert_eq!(p.frame.table(), &[0, 1]);
    }

    #[test]
    fn full_cluster_product() {
        let z = Relation::full(2, 2);
        let p = max_product(&c2(), &c2(), &z, &Guards::default()).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(check_product(&p, &c2(), &c2()).unwrap(), None);
        // π₂π₁⁻¹ = Z
        let composed = p.projection(2).compose(&p.projection(1).inverse()).unwrap();
        assert_eq!(composed, z);
    }

    #[test]
    fn upward_perturbation_is_caught() {
        let p = max_product(&c2(), &c2(), &Relation::full(2, 2), &Guards::default()).unwrap();
        let mut table = p.frame.table().to_vec();
        table[0] |= 1;
        let bumped = BisimProduct {
            frame: NbdFrame::new(4, table).unwrap(),
            ..p
        };
        assert!(check_product(&bumped, &c2(), &c2()).unwrap().is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Guards::default();
        assert!(matches!(
            max_product(&c2(), &c2(), &Relation::from_pairs(2, 2, [(0, 0)]).unwrap(), &g),
            Err(Error::NotFull(_))
        ));
        let chain = nbd(KripkeFrame::new(2, [(0, 1)]).unwrap());
        assert!(matches!(
            max_product(&chain, &chain, &Relation::full(2, 2), &g),
            Err(Error::NotBisimulation(_))
        ));
    }

    #[test]
    fn positive_bound() {
        let p = max_product(&c2(), &c2(), &Relation::full(2, 2), &Guards::default()).unwrap();
        for a in ["p", "<>p", "[]<>p & p", "true"] {
            assert_eq!(
                positive_bound_check(&p, &c2(), &c2(), &parse(a).unwrap()).unwrap(),
                None
            );
        }
        assert!(positive_bound_check(&p, &c2(), &c2(), &parse("~p").unwrap()).is_err());
    }

    #[test]
    fn axiom_shapes() {
        for name in ["AT", "A4", "AP", "AN", "AD"] {
            assert!(admissible_axiom(&axiom(name).unwrap()).is_ok(), "{name}");
        }
        for name in ["AM", "AC", "AB", "A.3"] {
            assert!(admissible_axiom(&axiom(name).unwrap()).is_err(), "{name}");
        }
    }

    #[test]
    fn suite_on_reflexive_points() {
        let pt = nbd(KripkeFrame::new(1, [(0, 0)]).unwrap());
        let axioms = vec![
            ("AT".to_string(), axiom("AT").unwrap()),
            ("AB".to_string(), axiom("AB").unwrap()),
        ];
        let r = preservation_suite(&pt, &pt, &Relation::full(1, 1), &axioms, &Guards::default()).unwrap();
        assert_eq!(r[0].status, AxiomStatus::Preserved);
        assert!(matches!(r[1].status, AxiomStatus::Rejected { .. }));
    }
}
