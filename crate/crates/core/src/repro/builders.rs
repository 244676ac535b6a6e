//! The named finite structures and formulas.

use crate::error::{Error, Result};
use crate::formula::{var, Formula, Literal, Var};
use crate::structures::{KripkeFrame, Model, Relation, Valuation, WorldSet};

/// Five worlds; `i` sees every `j ≤ i`, and 0 also sees 1.
pub fn f0() -> KripkeFrame {
    let edges = (0..5).flat_map(|i| (0..=i).map(move |j| (i, j))).chain([(0, 1)]);
    KripkeFrame::new(5, edges).expect("five worlds")
}

/// The full cluster on `k` worlds.
pub fn cluster(k: usize) -> Result<KripkeFrame> {
    if k == 0 {
        return Err(Error::InvalidParameter("cluster size must be at least 1".into()));
    }
    KripkeFrame::new(k, (0..k).flat_map(|i| (0..k).map(move |j| (i, j))))
}

/// A `k`-cluster `0..k` plus a top world `k` that sees every world.
pub fn dframe(k: usize) -> Result<KripkeFrame> {
    if k == 0 {
        return Err(Error::InvalidParameter("cluster size must be at least 1".into()));
    }
    let cluster = (0..k).flat_map(|i| (0..k).map(move |j| (i, j)));
    KripkeFrame::new(k + 1, cluster.chain((0..=k).map(|j| (k, j))))
}

fn lit(name: &str, positive: bool) -> Formula {
    Formula::Lit(Literal {
        var: var(name),
        positive,
    })
}

fn dia_plus(f: Formula) -> Formula {
    Formula::dia(Formula::big_and([lit("s", false), lit("r", true), f]))
}

fn dia_minus(f: Formula) -> Formula {
    Formula::dia(Formula::big_and([lit("s", false), lit("r", false), f]))
}

fn box_plus(f: Formula) -> Formula {
    Formula::nec(Formula::big_or([lit("s", true), lit("r", false), f]))
}

fn box_minus(f: Formula) -> Formula {
    Formula::nec(Formula::big_or([lit("s", true), lit("r", true), f]))
}

/// `◇₋◇₊¬p ∧ □₊□₋□₊p ∨ □₊p`, where `◇₊`/`◇₋` step to a non-`s` world with
/// `r`/`¬r` and `□₊`/`□₋` are their duals.
pub fn phi_lin() -> Formula {
    let p = || lit("p", true);
    Formula::or(
        Formula::and(dia_minus(dia_plus(lit("p", false))), box_plus(box_minus(box_plus(p())))),
        box_plus(p()),
    )
}

/// The two models on [`f0`] and the `p`-directed bisimulation between them.
pub fn lin_models() -> (Model, Model, Relation) {
    let model = |s: usize| {
        let val =
            Valuation::from_lists(5, [("p", vec![0]), ("r", vec![0, 2]), ("s", vec![s])]).expect("worlds in range");
        Model::new(f0(), val).expect("sized to the frame")
    };
    let z = Relation::from_pairs(5, 5, [(0, 0), (1, 1), (2, 2), (2, 0), (3, 1), (4, 3)]).expect("in range");
    (model(4), model(3), z)
}

pub fn param_vars(m: usize) -> Vec<Var> {
    (0..m).map(|j| var(&format!("r{j}"))).collect()
}

/// Sign pattern `i ≥ 1` over `r0..r{m-1}`: bit `j` of `i - 1` clear gives
/// `r_j`, set gives `¬r_j`. The empty pattern is `⊤`.
pub fn sign_pattern(i: usize, m: usize) -> Formula {
    let c = i - 1;
    Formula::big_and(param_vars(m).into_iter().enumerate().map(|(j, v)| {
        Formula::Lit(Literal {
            var: v,
            positive: c >> j & 1 == 0,
        })
    }))
}

fn check_cluster_params(k: usize, m: usize) -> Result<()> {
    if k < 2 || m >= usize::BITS as usize - 1 || k > (1usize << m) + 1 {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= k <= 2^m + 1, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

/// `□p ∨ (¬p ∧ ⋀_{i<k} ◇(p ∧ α_i))` with `α_i` the sign patterns over `m`
/// parameters.
pub fn phi_cluster(k: usize, m: usize) -> Result<Formula> {
    check_cluster_params(k, m)?;
    let p = || lit("p", true);
    let diamonds = (1..k).map(|i| {
        let alpha = sign_pattern(i, m);
        Formula::dia(if alpha == Formula::Top {
            p()
        } else {
            Formula::and(p(), alpha)
        })
    });
    Ok(Formula::or(
        Formula::nec(p()),
        Formula::and(lit("p", false), Formula::big_and(diamonds)),
    ))
}

/// Models on the `k`-cluster refuting a positive equivalent of
/// [`phi_cluster`]: `p` misses world 0 on the left and world 1 on the right,
/// worlds 0 and 1 satisfy `α_1` and world `i ≥ 2` satisfies `α_i`.
pub fn cluster_models(k: usize, m: usize) -> Result<(Model, Model, Relation)> {
    check_cluster_params(k, m)?;
    let frame = cluster(k)?;
    let params = param_vars(m);
    let pattern_of = |w: usize| w.max(1) - 1;
    let model = |missing: usize| -> Result<Model> {
        let mut val = Valuation::new(k);
        val.set(var("p"), WorldSet::from_worlds(k, (0..k).filter(|&w| w != missing))?)?;
        for (j, v) in params.iter().enumerate() {
            val.set(
                v.clone(),
                WorldSet::from_worlds(k, (0..k).filter(|&w| pattern_of(w) >> j & 1 == 0))?,
            )?;
        }
        Model::new(frame.clone(), val)
    };
    let z = Relation::from_pairs(k, k, [(0, 0), (0, 1), (1, 0)].into_iter().chain((2..k).map(|i| (i, i))))?;
    Ok((model(0)?, model(1)?, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn frame_sizes() {
        assert_eq!(f0().edge_count(), 16);
        assert_eq!(cluster(2).unwrap().edge_count(), 4);
        assert_eq!(dframe(2).unwrap().edge_count(), 7);
        assert!(cluster(0).is_err());
    }

    #[test]
    fn two_cluster_formula_is_the_simple_one() {
        assert_eq!(phi_cluster(2, 0).unwrap(), parse("[]p | (~p & <>p)").unwrap());
        assert_eq!(
            phi_cluster(3, 1).unwrap(),
            parse("[]p | (~p & (<>(p & r0) & <>(p & ~r0)))").unwrap()
        );
        assert!(phi_cluster(4, 1).is_err());
        assert!(phi_cluster(1, 3).is_err());
    }

    #[test]
    fn lin_formula_shape() {
        let f = phi_lin();
        let expected =
            parse("(<>(~s & ~r & <>(~s & r & ~p)) & [](s | ~r | [](s | r | [](s | ~r | p)))) | [](s | ~r | p)")
                .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn cluster_models_match_the_construction() {
        let (m1, m2, _) = cluster_models(3, 1).unwrap();
        assert_eq!(m1.val.get(&var("p")).to_vec(), vec![1, 2]);
        assert_eq!(m2.val.get(&var("p")).to_vec(), vec![0, 2]);
        assert_eq!(m1.val.get(&var("r0")).to_vec(), vec![0, 1]);
    }
}
