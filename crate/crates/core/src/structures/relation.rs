//! Finite relations between world ranges, read as image operators.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::worldset::{bit_iter, full_mask, WorldSet, MAX_WORLDS};
use crate::error::{Error, Result};

/// `Z ⊆ left × right`, stored as one bitmask row per left world.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    left: usize,
    right: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(left: usize, right: usize) -> Relation {
        assert!(left <= MAX_WORLDS && right <= MAX_WORLDS, "relation too large");
        Relation {
            left,
            right,
            rows: vec![0; left],
        }
    }

    pub fn full(left: usize, right: usize) -> Relation {
        let mut r = Relation::empty(left, right);
        r.rows.iter_mut().for_each(|row| *row = full_mask(right));
        r
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n, n);
        for w in 0..n {
            r.rows[w] = 1 << w;
        }
        r
    }

    pub fn from_pairs(left: usize, right: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        if left > MAX_WORLDS || right > MAX_WORLDS {
            return Err(Error::InvalidParameter(format!(
                "relation sides {left}x{right} exceed {MAX_WORLDS}"
            )));
        }
        let mut r = Relation::empty(left, right);
        for (a, b) in pairs {
            if a >= left || b >= right {
                return Err(Error::dims(format!("pair ({a}, {b}) outside {left} x {right}")));
            }
            r.rows[a] |= 1 << b;
        }
        Ok(r)
    }

    /// Builds a relation from its rows; bits beyond `right` are dropped.
    pub fn from_rows(left: usize, right: usize, rows: Vec<u64>) -> Relation {
        assert_eq!(rows.len(), left);
        let mask = full_mask(right);
        Relation {
            left,
            right,
            rows: rows.into_iter().map(|r| r & mask).collect(),
        }
    }

    /// The graph of a function `w ↦ map[w]`.
    pub fn from_function(map: &[usize], right: usize) -> Result<Relation> {
        Relation::from_pairs(map.len(), right, map.iter().copied().enumerate())
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn row(&self, w: usize) -> u64 {
        self.rows[w]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.left && b < self.right && self.rows[a] >> b & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.left && b < self.right);
        self.rows[a] |= 1 << b;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        if a < self.left {
            self.rows[a] &= !(1u64 << b);
        }
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| bit_iter(*row).map(move |b| (a, b)))
    }

    #[inline]
    pub fn image_bits(&self, x: u64) -> u64 {
        bit_iter(x & full_mask(self.left)).fold(0, |acc, w| acc | self.rows[w])
    }

    #[inline]
    pub fn preimage_bits(&self, y: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, row)| *row & y != 0)
            .fold(0, |acc, (w, _)| acc | 1 << w)
    }

    fn check_left(&self, x: &WorldSet) -> Result<()> {
        if x.universe() != self.left {
            return Err(Error::dims(format!(
                "set over {} worlds, relation domain has {}",
                x.universe(),
                self.left
            )));
        }
        Ok(())
    }

    fn check_right(&self, y: &WorldSet) -> Result<()> {
        if y.universe() != self.right {
            return Err(Error::dims(format!(
                "set over {} worlds, relation codomain has {}",
                y.universe(),
                self.right
            )));
        }
        Ok(())
    }

    /// Full image `ZX`.
    pub fn image(&self, x: &WorldSet) -> Result<WorldSet> {
        self.check_left(x)?;
        Ok(WorldSet::from_bits(self.right, self.image_bits(x.bits())))
    }

    /// Full preimage `Z⁻¹Y`.
    pub fn preimage(&self, y: &WorldSet) -> Result<WorldSet> {
        self.check_right(y)?;
        Ok(WorldSet::from_bits(self.left, self.preimage_bits(y.bits())))
    }

    /// `−Z⁻¹−Y`: the worlds all of whose images lie in `Y`.
    pub fn conjugate(&self, y: &WorldSet) -> Result<WorldSet> {
        self.check_right(y)?;
        Ok(self.preimage(&y.complement())?.complement())
    }

    pub fn inverse(&self) -> Relation {
        let mut inv = Relation::empty(self.right, self.left);
        for (a, b) in self.pairs() {
            inv.rows[b] |= 1 << a;
        }
        inv
    }

    /// `self ∘ first`: first apply `first`, then `self`.
    pub fn compose(&self, first: &Relation) -> Result<Relation> {
        if first.right != self.left {
            return Err(Error::dims(format!(
                "cannot compose {}x{} after {}x{}",
                self.left, self.right, first.left, first.right
            )));
        }
        let rows = first.rows.iter().map(|row| self.image_bits(*row)).collect();
        Ok(Relation {
            left: first.left,
            right: self.right,
            rows,
        })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_shape(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Relation {
            left: self.left,
            right: self.right,
            rows,
        })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_shape(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect();
        Ok(Relation {
            left: self.left,
            right: self.right,
            rows,
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.left == other.left
            && self.right == other.right
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn same_shape(&self, other: &Relation) -> Result<()> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::dims(format!(
                "relations {}x{} and {}x{}",
                self.left, self.right, other.left, other.right
            )));
        }
        Ok(())
    }

    pub fn domain(&self) -> WorldSet {
        WorldSet::from_bits(
            self.left,
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| **r != 0)
                .fold(0, |acc, (w, _)| acc | 1 << w),
        )
    }

    pub fn range(&self) -> WorldSet {
        WorldSet::from_bits(self.right, self.rows.iter().fold(0, |acc, r| acc | r))
    }

    /// `dom Z = W₁` and `rng Z = W₂`.
    pub fn is_full(&self) -> bool {
        self.domain().is_full() && self.range().is_full()
    }

    /// Every left world has at most one image.
    pub fn is_functional(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones() <= 1)
    }

    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|r| *r != 0)
    }

    /// The function this relation is the graph of, if it is total and functional.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| (r.count_ones() == 1).then(|| r.trailing_zeros() as usize))
            .collect()
    }

    /// Restricts both sides to the given sets, reindexing worlds in order.
    pub fn restrict(&self, left: &WorldSet, right: &WorldSet) -> Relation {
        let right_index: Vec<usize> = right.iter().collect();
        let rows = left
            .iter()
            .map(|a| {
                right_index
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| self.contains(a, **b))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Relation {
            left: left.len(),
            right: right.len(),
            rows,
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{}x{} {{{}}}", self.left, self.right, pairs.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct RelationDoc {
    left: usize,
    right: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RelationDoc {
            left: self.left,
            right: self.right,
            pairs: self.pairs().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Relation, D::Error> {
        let doc = RelationDoc::deserialize(d)?;
        Relation::from_pairs(doc.left, doc.right, doc.pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_and_preimage() {
        let z = Relation::from_pairs(2, 2, [(0, 1)]).unwrap();
        let x = WorldSet::from_worlds(2, [0]).unwrap();
        assert_eq!(z.image(&x).unwrap().to_vec(), vec![1]);
        assert_eq!(
            z.preimage(&WorldSet::from_worlds(2, [1]).unwrap()).unwrap().to_vec(),
            vec![0]
        );
        assert!(z.image(&WorldSet::empty(2)).unwrap().is_empty());
        assert!(z.image(&WorldSet::empty(3)).is_err());
    }

    #[test]
    fn composition_order() {
        // r1: 0->1, r2: 1->2; r2 ∘ r1 = {(0,2)}
        let r1 = Relation::from_pairs(3, 3, [(0, 1)]).unwrap();
        let r2 = Relation::from_pairs(3, 3, [(1, 2)]).unwrap();
        assert_eq!(r2.compose(&r1).unwrap().pairs().collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(r1.compose(&r2).unwrap().is_empty());
        let bad = Relation::empty(2, 2);
        assert!(bad.compose(&r1).is_err());
    }

    #[test]
    fn function_views() {
        let f = Relation::from_function(&[1, 1, 0], 2).unwrap();
        assert!(f.is_functional() && f.is_total());
        assert_eq!(f.as_function(), Some(vec![1, 1, 0]));
        assert!(Relation::from_pairs(2, 2, [(0, 0)]).unwrap().as_function().is_none());
        assert!(Relation::full(2, 3).is_full());
        assert_eq!(f.inverse().pairs().collect::<Vec<_>>(), vec![(0, 2), (1, 0), (1, 1)]);
    }

    #[test]
    fn restrict_reindexes() {
        let z = Relation::from_pairs(3, 3, [(0, 2), (2, 2), (1, 0)]).unwrap();
        let l = WorldSet::from_worlds(3, [0, 2]).unwrap();
        let r = WorldSet::from_worlds(3, [2]).unwrap();
        assert_eq!(z.restrict(&l, &r).pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);
    }
}
