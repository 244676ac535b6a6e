//! Seeded random structures for property sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bisim::ZigzagDecomposition;
use crate::formula::{Formula, Literal, LiteralSet, Var};
use crate::structures::{bit_iter, full_mask, KripkeFrame, NbdFrame, Relation, Valuation, WorldSet};

/// Random NNF formula over `lits` with modal and boolean depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, lits: &[Literal], depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..lits.len() + 2) {
            0 if rng.gen_ratio(1, 3) => Formula::Bot,
            1 if rng.gen_ratio(1, 3) => Formula::Top,
            _ if lits.is_empty() => Formula::Top,
            _ => Formula::Lit(lits.choose(rng).expect("nonempty").clone()),
        };
    }
    let sub = |rng: &mut R| random_formula(rng, lits, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::dia(sub(rng)),
        1 => Formula::nec(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        _ => Formula::or(sub(rng), sub(rng)),
    }
}

/// Random formula without negative literals over `vars`.
pub fn random_positive<R: Rng>(rng: &mut R, vars: &[Var], depth: usize) -> Formula {
    let lits: Vec<Literal> = vars.iter().cloned().map(Literal::pos).collect();
    random_formula(rng, &lits, depth)
}

/// All literals over `vars`.
pub fn literals_of(vars: &[Var]) -> Vec<Literal> {
    LiteralSet::all_of(vars).literals()
}

pub fn random_kripke<R: Rng>(rng: &mut R, n: usize, density: f64) -> KripkeFrame {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    KripkeFrame::new(n, edges).expect("edges in range")
}

/// Random monotone neighborhood frame: a sparse random seed table closed
/// upward. With `reflexive`, also `X ⊆ ◇X`.
pub fn random_monotone_nbd<R: Rng>(rng: &mut R, n: usize, reflexive: bool) -> NbdFrame {
    let full = full_mask(n);
    let mut table = vec![0u64; 1 << n];
    for x in 0..1usize << n {
        let mut d = if rng.gen_ratio(1, 3) {
            rng.gen::<u64>() & full
        } else {
            0
        };
        if reflexive {
            d |= x as u64;
        }
        for i in bit_iter(x as u64) {
            d |= table[x & !(1 << i)];
        }
        table[x] = d;
    }
    NbdFrame::new(n, table).expect("table sized to the frame")
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> WorldSet {
    WorldSet::from_bits(n, rng.gen::<u64>() & full_mask(n))
}

pub fn random_valuation<R: Rng>(rng: &mut R, n: usize, vars: &[Var]) -> Valuation {
    let mut val = Valuation::new(n);
    for v in vars {
        val.set(v.clone(), random_set(rng, n)).expect("sized to the frame");
    }
    val
}

pub fn random_relation<R: Rng>(rng: &mut R, left: usize, right: usize) -> Relation {
    let rows = (0..left).map(|_| rng.gen::<u64>() & full_mask(right)).collect();
    Relation::from_rows(left, right, rows)
}

/// Random relation with every left and right world covered.
pub fn random_full_relation<R: Rng>(rng: &mut R, left: usize, right: usize) -> Relation {
    let mut z = Relation::empty(left, right);
    for (a, b) in (0..left).flat_map(|a| (0..right).map(move |b| (a, b))) {
        if rng.gen_ratio(1, 4) {
            z.insert(a, b);
        }
    }
    for a in 0..left {
        if z.row(a) == 0 {
            z.insert(a, rng.gen_range(0..right));
        }
    }
    let range = z.range();
    for b in 0..right {
        if !range.contains(b) {
            z.insert(rng.gen_range(0..left), b);
        }
    }
    z
}

/// Random zigzag-free relation inside `bound`: left worlds in a random half
/// pick at most one image (the functional part), right worlds in a random half
/// pick at most one preimage among the remaining left worlds.
pub fn random_zigzag_free_within<R: Rng>(rng: &mut R, bound: &Relation) -> ZigzagDecomposition {
    let (n1, n2) = (bound.left_size(), bound.right_size());
    let functional_left: Vec<bool> = (0..n1).map(|_| rng.gen()).collect();
    let functional_right: Vec<bool> = (0..n2).map(|_| rng.gen()).collect();
    let mut z1 = Relation::empty(n1, n2);
    let mut z2 = Relation::empty(n1, n2);
    for a in (0..n1).filter(|&a| functional_left[a]) {
        let options: Vec<usize> = bit_iter(bound.row(a)).filter(|&b| functional_right[b]).collect();
        if let Some(&b) = options.choose(rng) {
            z1.insert(a, b);
        }
    }
    let inv = bound.inverse();
    for b in (0..n2).filter(|&b| !functional_right[b]) {
        let options: Vec<usize> = bit_iter(inv.row(b)).filter(|&a| !functional_left[a]).collect();
        if let Some(&a) = options.choose(rng) {
            z2.insert(a, b);
        }
    }
    ZigzagDecomposition { z1, z2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::check_zigzag_decomposition;
    use crate::formula::var;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let reflexive = rng.gen();
            let f = random_monotone_nbd(&mut rng, n, reflexive);
            assert!(f.is_monotone());
            let m = rng.gen_range(1..=5);
            let z = random_full_relation(&mut rng, n, m);
            assert!(z.is_full());
            let d = random_zigzag_free_within(&mut rng, &z);
            assert!(d.union().is_subset(&z));
            assert!(check_zigzag_decomposition(&d.union(), &d));
            let a = random_positive(&mut rng, &[var("p")], 3);
            assert!(a.is_positive());
        }
    }
}
