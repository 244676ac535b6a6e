//! Kripke and neighborhood frames.

use super::relation::Relation;
use super::worldset::{bit_iter, full_mask, WorldSet};
use crate::error::{Error, Result};
use crate::guard::Guards;

/// A finite Kripke frame. `◇X = {w | ∃v ∈ X. w R v}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KripkeFrame {
    size: usize,
    succ: Vec<u64>,
}

impl KripkeFrame {
    pub fn new(size: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<KripkeFrame> {
        let rel = Relation::from_pairs(size, size, edges)?;
        Ok(KripkeFrame::from_relation(&rel).expect("square"))
    }

    pub fn from_relation(rel: &Relation) -> Result<KripkeFrame> {
        if rel.left_size() != rel.right_size() {
            return Err(Error::dims("accessibility relation must be square"));
        }
        Ok(KripkeFrame {
            size: rel.left_size(),
            succ: rel.rows().to_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self) -> Relation {
        Relation::from_rows(self.size, self.size, self.succ.clone())
    }

    /// `R{w}` as a bitmask.
    #[inline]
    pub fn successors(&self, w: usize) -> u64 {
        self.succ[w]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, row)| bit_iter(*row).map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|r| r.count_ones() as usize).sum()
    }

    #[inline]
    pub fn dia_bits(&self, x: u64) -> u64 {
        let mut out = 0;
        for (w, s) in self.succ.iter().enumerate() {
            if s & x != 0 {
                out |= 1 << w;
            }
        }
        out
    }

    /// The neighborhood frame with `◇X = R⁻¹X`.
    pub fn to_nbd(&self, guards: &Guards) -> Result<NbdFrame> {
        if self.size > guards.max_nbd_worlds {
            return Err(Error::GuardExceeded {
                what: "neighborhood table".into(),
                needed_bits: self.size as u32,
                guard_bits: guards.max_nbd_worlds as u32,
            });
        }
        Ok(NbdFrame::from_fn(self.size, |x| self.dia_bits(x)))
    }
}

/// A finite neighborhood frame given by its full `◇` table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NbdFrame {
    size: usize,
    dia: Vec<u64>,
}

impl NbdFrame {
    /// `table[s]` is `◇` of the subset with bitmask `s`.
    pub fn new(size: usize, table: Vec<u64>) -> Result<NbdFrame> {
        if size > 20 {
            return Err(Error::InvalidParameter(format!(
                "neighborhood frame with {size} worlds is too large"
            )));
        }
        if table.len() != 1 << size {
            return Err(Error::dims(format!(
                "neighborhood table has {} entries, expected {}",
                table.len(),
                1usize << size
            )));
        }
        let mask = full_mask(size);
        if let Some(i) = table.iter().position(|m| m & !mask != 0) {
            return Err(Error::dims(format!("dia[{i}] names a world outside the frame")));
        }
        Ok(NbdFrame { size, dia: table })
    }

    pub fn from_fn(size: usize, f: impl Fn(u64) -> u64) -> NbdFrame {
        let mask = full_mask(size);
        let dia = (0..1u64 << size).map(|x| f(x) & mask).collect();
        NbdFrame { size, dia }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[u64] {
        &self.dia
    }

    #[inline]
    pub fn dia_bits(&self, x: u64) -> u64 {
        self.dia[x as usize]
    }

    /// First pair `(X, X ∪ {w})` with `◇X ⊄ ◇(X ∪ {w})`, if any.
    pub fn monotonicity_violation(&self) -> Option<(u64, u64)> {
        for x in 0..self.dia.len() as u64 {
            for w in bit_iter(!x & full_mask(self.size)) {
                let y = x | 1 << w;
                if self.dia[x as usize] & !self.dia[y as usize] != 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violation().is_none()
    }

    /// `(W, □)` with `□X = −◇−X`.
    pub fn dual(&self) -> NbdFrame {
        let mask = full_mask(self.size);
        NbdFrame::from_fn(self.size, |x| !self.dia[(!x & mask) as usize] & mask)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Frame {
    Kripke(KripkeFrame),
    Nbd(NbdFrame),
}

impl Frame {
    pub fn size(&self) -> usize {
        match self {
            Frame::Kripke(k) => k.size(),
            Frame::Nbd(n) => n.size(),
        }
    }

    #[inline]
    pub fn dia_bits(&self, x: u64) -> u64 {
        match self {
            Frame::Kripke(k) => k.dia_bits(x),
            Frame::Nbd(n) => n.dia_bits(x),
        }
    }

    #[inline]
    pub fn box_bits(&self, x: u64) -> u64 {
        let mask = full_mask(self.size());
        !self.dia_bits(!x & mask) & mask
    }

    pub fn dia(&self, x: &WorldSet) -> WorldSet {
        WorldSet::from_bits(self.size(), self.dia_bits(x.bits()))
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Frame::Kripke(_) => true,
            Frame::Nbd(n) => n.is_monotone(),
        }
    }

    pub fn as_kripke(&self) -> Option<&KripkeFrame> {
        match self {
            Frame::Kripke(k) => Some(k),
            Frame::Nbd(_) => None,
        }
    }

    /// The neighborhood view of this frame (converting Kripke frames).
    pub fn to_nbd(&self, guards: &Guards) -> Result<NbdFrame> {
        match self {
            Frame::Kripke(k) => k.to_nbd(guards),
            Frame::Nbd(n) => Ok(n.clone()),
        }
    }

    /// Dual frame; Kripke frames must be converted to neighborhood form first.
    pub fn dual(&self) -> Result<Frame> {
        match self {
            Frame::Kripke(_) => Err(Error::KripkeUnsupported),
            Frame::Nbd(n) => Ok(Frame::Nbd(n.dual())),
        }
    }
}

impl From<KripkeFrame> for Frame {
    fn from(k: KripkeFrame) -> Frame {
        Frame::Kripke(k)
    }
}

impl From<NbdFrame> for Frame {
    fn from(n: NbdFrame) -> Frame {
        Frame::Nbd(n)
    }
}

/// Reflexive-transitive closure of a square relation.
pub fn rt_closure(r: &Relation) -> Result<Relation> {
    if r.left_size() != r.right_size() {
        return Err(Error::dims("closure needs a square relation"));
    }
    let n = r.left_size();
    let mut rows: Vec<u64> = (0..n).map(|w| r.row(w) | 1 << w).collect();
    // Warshall
    for k in 0..n {
        for w in 0..n {
            if rows[w] >> k & 1 == 1 {
                rows[w] |= rows[k];
            }
        }
    }
    Ok(Relation::from_rows(n, n, rows))
}

/// `R*{w}`.
pub fn cone(frame: &KripkeFrame, w: usize) -> Result<WorldSet> {
    if w >= frame.size() {
        return Err(Error::dims(format!("world {w} outside frame")));
    }
    let closure = rt_closure(&frame.relation())?;
    Ok(WorldSet::from_bits(frame.size(), closure.row(w)))
}

/// Whether `v` is generated by one of its own worlds.
pub fn is_cone(frame: &KripkeFrame, v: &WorldSet) -> bool {
    v.iter().any(|w| cone(frame, w).map(|c| c == *v).unwrap_or(false))
}

/// The induced subframe on `v`, worlds renumbered in increasing order.
/// Neighborhood frames restrict as `◇ᵥX = ◇X ∩ V`.
pub fn restrict_frame(frame: &Frame, v: &WorldSet) -> Result<Frame> {
    if v.universe() != frame.size() {
        return Err(Error::dims("restriction set does not match the frame"));
    }
    let worlds = v.to_vec();
    let spread = |x: u64| -> u64 { bit_iter(x).fold(0, |acc, i| acc | 1 << worlds[i]) };
    let squash = |y: u64| -> u64 {
        worlds
            .iter()
            .enumerate()
            .filter(|(_, w)| y >> **w & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };
    Ok(match frame {
        Frame::Kripke(k) => {
            let rows = worlds.iter().map(|w| squash(k.successors(*w))).collect();
            Frame::Kripke(KripkeFrame::from_relation(&Relation::from_rows(
                worlds.len(),
                worlds.len(),
                rows,
            ))?)
        }
        Frame::Nbd(n) => Frame::Nbd(NbdFrame::from_fn(worlds.len(), |x| squash(n.dia_bits(spread(x))))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> KripkeFrame {
        KripkeFrame::new(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn kripke_to_nbd_chain() {
        let n = chain2().to_nbd(&Guards::default()).unwrap();
        assert_eq!(n.dia_bits(0b10), 0b01);
        assert_eq!(n.dia_bits(0b01), 0);
        assert!(n.is_monotone());
    }

    #[test]
    fn kripke_to_nbd_cluster() {
        let c2 = KripkeFrame::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let n = c2.to_nbd(&Guards::default()).unwrap();
        assert_eq!(n.table(), &[0, 0b11, 0b11, 0b11]);
    }

    #[test]
    fn kripke_to_nbd_guard() {
        let big = KripkeFrame::new(15, []).unwrap();
        assert!(matches!(
            big.to_nbd(&Guards::default()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn minimal_non_monotone() {
        let f = NbdFrame::new(1, vec![0b1, 0b0]).unwrap();
        assert!(!f.is_monotone());
        assert_eq!(f.monotonicity_violation(), Some((0, 1)));
    }

    #[test]
    fn table_validation() {
        assert!(NbdFrame::new(2, vec![0, 0, 0]).is_err());
        assert!(NbdFrame::new(1, vec![0, 0b10]).is_err());
    }

    #[test]
    fn dual_of_chain() {
        let n = chain2().to_nbd(&Guards::default()).unwrap();
        let d = n.dual();
        // □X = −◇−X: □∅ = −◇{0,1} = {1}; □{1} = −◇{0} = {0,1}
        assert_eq!(d.table(), &[0b10, 0b10, 0b11, 0b11]);
        assert_eq!(d.dual(), n);
        assert!(Frame::Kripke(chain2()).dual().is_err());
    }

    #[test]
    fn closure_and_cones() {
        let empty = Relation::empty(3, 3);
        assert_eq!(rt_closure(&empty).unwrap(), Relation::identity(3));
        let chain = KripkeFrame::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(cone(&chain, 0).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(cone(&chain, 1).unwrap().to_vec(), vec![1, 2]);
        assert!(is_cone(&chain, &WorldSet::from_worlds(3, [1, 2]).unwrap()));
        assert!(!is_cone(&chain, &WorldSet::from_worlds(3, [0, 2]).unwrap()));
    }

    #[test]
    fn restriction() {
        let chain = KripkeFrame::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let v = WorldSet::from_worlds(3, [1, 2]).unwrap();
        let sub = restrict_frame(&Frame::Kripke(chain.clone()), &v).unwrap();
        assert_eq!(sub, Frame::Kripke(KripkeFrame::new(2, [(0, 1)]).unwrap()));
        let empty = restrict_frame(&Frame::Kripke(chain), &WorldSet::empty(3)).unwrap();
        assert_eq!(empty.size(), 0);
    }
}
