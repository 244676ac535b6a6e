use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper bound on the number of worlds of any finite structure.
pub const MAX_WORLDS: usize = 64;

/// Bitmask with the lowest `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `bits`, lowest first.
#[inline]
pub fn bit_iter(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

/// A subset of `{0, …, universe-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WorldSet {
    universe: usize,
    bits: u64,
}

impl WorldSet {
    pub fn empty(universe: usize) -> WorldSet {
        debug_assert!(universe <= MAX_WORLDS);
        WorldSet { universe, bits: 0 }
    }

    pub fn full(universe: usize) -> WorldSet {
        WorldSet {
            universe,
            bits: full_mask(universe),
        }
    }

    /// Masks `bits` down to the universe.
    pub fn from_bits(universe: usize, bits: u64) -> WorldSet {
        WorldSet {
            universe,
            bits: bits & full_mask(universe),
        }
    }

    pub fn from_worlds(universe: usize, worlds: impl IntoIterator<Item = usize>) -> Result<WorldSet> {
        if universe > MAX_WORLDS {
            return Err(Error::InvalidParameter(format!(
                "{universe} worlds exceed the limit of {MAX_WORLDS}"
            )));
        }
        let mut bits = 0;
        for w in worlds {
            if w >= universe {
                return Err(Error::dims(format!("world {w} outside universe of size {universe}")));
            }
            bits |= 1 << w;
        }
        Ok(WorldSet { universe, bits })
    }

    pub fn singleton(universe: usize, w: usize) -> WorldSet {
        debug_assert!(w < universe);
        WorldSet { universe, bits: 1 << w }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, w: usize) -> bool {
        w < self.universe && self.bits >> w & 1 == 1
    }

    pub fn insert(&mut self, w: usize) {
        debug_assert!(w < self.universe);
        self.bits |= 1 << w;
    }

    pub fn remove(&mut self, w: usize) {
        self.bits &= !(1u64 << w);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.universe)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bit_iter(self.bits)
    }

    pub fn complement(&self) -> WorldSet {
        WorldSet {
            universe: self.universe,
            bits: !self.bits & full_mask(self.universe),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.universe, other.universe);
        WorldSet {
            universe: self.universe,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.universe, other.universe);
        WorldSet {
            universe: self.universe,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        WorldSet {
            universe: self.universe,
            bits: self.bits & !other.bits,
        }
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}/{}", self.universe)
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Serialized as the sorted list of members.
impl Serialize for WorldSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = WorldSet::from_worlds(4, [0, 2]).unwrap();
        let b = WorldSet::from_worlds(4, [2, 3]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.complement().to_vec(), vec![1, 3]);
        assert!(WorldSet::empty(4).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(WorldSet::from_worlds(3, [3]).is_err());
        assert_eq!(bit_iter(0b1010).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(full_mask(64), u64::MAX);
    }
}
