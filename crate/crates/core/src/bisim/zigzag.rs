//! Zigzag-free relations: a functional part and an inverse-functional part
//! with disjoint domains and disjoint ranges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{bit_iter, full_mask, Relation};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ZigzagDecomposition {
    /// Functional part.
    pub z1: Relation,
    /// Inverse-functional part.
    pub z2: Relation,
}

impl ZigzagDecomposition {
    pub fn union(&self) -> Relation {
        self.z1.union(&self.z2).expect("parts share a shape")
    }
}

/// Whether `d` presents `z` as a zigzag-free relation.
pub fn check_zigzag_decomposition(z: &Relation, d: &ZigzagDecomposition) -> bool {
    if z.same_shape(&d.z1).is_err() || z.same_shape(&d.z2).is_err() {
        return false;
    }
    d.z1.is_functional()
        && d.z2.inverse().is_functional()
        && d.union() == *z
        && d.z1.domain().intersection(&d.z2.domain()).is_empty()
        && d.z1.range().intersection(&d.z2.range()).is_empty()
}

/// A zigzag-free full subrelation of a full relation `z`.
///
/// Repeatedly peels, in order of preference: the lowest left world with a
/// single remaining image together with every left world having exactly that
/// image; symmetrically the lowest right world with a single remaining
/// preimage; otherwise the least remaining pair.
pub fn zigzag_free_subrelation(z: &Relation) -> Result<ZigzagDecomposition> {
    if !z.is_full() {
        return Err(Error::NotFull(format!(
            "domain {} of {}, range {} of {}",
            z.domain(),
            z.left_size(),
            z.range(),
            z.right_size()
        )));
    }
    let (n1, n2) = (z.left_size(), z.right_size());
    let inv = z.inverse();
    let mut left = full_mask(n1);
    let mut right = full_mask(n2);
    let mut z1 = Relation::empty(n1, n2);
    let mut z2 = Relation::empty(n1, n2);
    while left != 0 {
        debug_assert!(right != 0, "fullness is kept by every peel");
        let img = |w: usize| z.row(w) & right;
        let pre = |w: usize| inv.row(w) & left;
        if let Some(w1) = bit_iter(left).find(|&w| img(w).count_ones() == 1) {
            let w2 = img(w1).trailing_zeros() as usize;
            for v in bit_iter(left).filter(|&v| img(v) == 1 << w2) {
                z1.insert(v, w2);
                left &= !(1 << v);
            }
            right &= !(1 << w2);
        } else if let Some(w2) = bit_iter(right).find(|&w| pre(w).count_ones() == 1) {
            let w1 = pre(w2).trailing_zeros() as usize;
            for v in bit_iter(right).filter(|&v| pre(v) == 1 << w1) {
                z2.insert(w1, v);
                right &= !(1 << v);
            }
            left &= !(1 << w1);
        } else {
            let w1 = left.trailing_zeros() as usize;
            let w2 = img(w1).trailing_zeros() as usize;
            z1.insert(w1, w2);
            left &= !(1 << w1);
            right &= !(1 << w2);
        }
    }
    Ok(ZigzagDecomposition { z1, z2 })
}
