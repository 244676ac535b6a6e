#![allow(dead_code)]

use modlab_core::bisim::check_tau_bisim;
use modlab_core::formula::LiteralSet;
use modlab_core::structures::{Model, Relation};
use modlab_core::Frame;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Union of every subrelation of `W1 × W2` that passes the checker.
pub fn brute_force_greatest(m1: &Model, m2: &Model, tau: &LiteralSet) -> Relation {
    let (n1, n2) = (m1.size(), m2.size());
    let cells = n1 * n2;
    assert!(cells <= 16, "oracle limited to 16 cells");
    let mut union = Relation::empty(n1, n2);
    for code in 0u64..1 << cells {
        let rows = (0..n1).map(|i| code >> (i * n2) & ((1 << n2) - 1)).collect();
        let z = Relation::from_rows(n1, n2, rows);
        if check_tau_bisim(m1, m2, &z, tau).unwrap().is_none() {
            union = union.union(&z).unwrap();
        }
    }
    union
}

/// Every Kripke frame on `n` worlds, in edge-bitmask order.
pub fn all_kripke(n: usize) -> Vec<Frame> {
    (0u64..1 << (n * n))
        .map(|code| {
            let edges = (0..n * n).filter(|b| code >> b & 1 == 1).map(|b| (b / n, b % n));
            Frame::Kripke(modlab_core::KripkeFrame::new(n, edges).unwrap())
        })
        .collect()
}

/// Every literal set over the given literals.
pub fn all_subsets(lits: &LiteralSet) -> Vec<LiteralSet> {
    let items = lits.literals();
    (0u32..1 << items.len())
        .map(|mask| {
            let mut s = LiteralSet::new();
            for (i, l) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.insert(l.clone());
                }
            }
            s
        })
        .collect()
}
