//! Deterministic enumeration of NNF formulas by size.

use super::{Formula, LiteralSet};

/// Streams every formula over the literals of `lits`, ordered by node count
/// and then by the structural order of [`Formula`]
/// (`Bot < Top < Lit < Dia < Nec < And < Or`, recursively).
pub struct FormulaEnumerator {
    atoms: Vec<Formula>,
    max_size: usize,
    levels: Vec<Vec<Formula>>,
    level: usize,
    index: usize,
}

impl FormulaEnumerator {
    pub fn new(lits: &LiteralSet, max_size: usize) -> FormulaEnumerator {
        let atoms = [Formula::Bot, Formula::Top]
            .into_iter()
            .chain(lits.literals().into_iter().map(Formula::Lit))
            .collect();
        FormulaEnumerator {
            atoms,
            max_size,
            // levels[0] is unused so that levels[n] holds size-n formulas
            levels: vec![Vec::new()],
            level: 0,
            index: 0,
        }
    }

    fn build_level(&mut self, n: usize) {
        let mut out = Vec::new();
        if n == 1 {
            out = self.atoms.clone();
        } else {
            for f in &self.levels[n - 1] {
                out.push(Formula::dia(f.clone()));
                out.push(Formula::nec(f.clone()));
            }
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for a in &self.levels[left] {
                    for b in &self.levels[right] {
                        out.push(Formula::and(a.clone(), b.clone()));
                        out.push(Formula::or(a.clone(), b.clone()));
                    }
                }
            }
        }
        out.sort();
        self.levels.push(out);
    }
}

impl Iterator for FormulaEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if self.level > 0 && self.index < self.levels[self.level].len() {
                let f = self.levels[self.level][self.index].clone();
                self.index += 1;
                return Some(f);
            }
            if self.level >= self.max_size {
                return None;
            }
            self.level += 1;
            self.index = 0;
            self.build_level(self.level);
        }
    }
}

pub fn enumerate_formulas(lits: &LiteralSet, max_size: usize) -> FormulaEnumerator {
    FormulaEnumerator::new(lits, max_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};

    fn only_p() -> LiteralSet {
        LiteralSet::from_parts([var("p")], [])
    }

    #[test]
    fn size_one() {
        let got: Vec<String> = enumerate_formulas(&only_p(), 1).map(|f| f.to_string()).collect();
        assert_eq!(got, ["false", "true", "p"]);
    }

    #[test]
    fn size_two_golden() {
        let got: Vec<String> = enumerate_formulas(&only_p(), 2).map(|f| f.to_string()).collect();
        assert_eq!(
            got,
            ["false", "true", "p", "<>false", "<>true", "<>p", "[]false", "[]true", "[]p"]
        );
    }

    #[test]
    fn ordering_is_size_then_structure() {
        let lits = LiteralSet::from_parts([var("p")], [var("p")]);
        let all: Vec<Formula> = enumerate_formulas(&lits, 4).collect();
        for w in all.windows(2) {
            assert!((w[0].size(), &w[0]) < (w[1].size(), &w[1]));
        }
        assert!(all.contains(&parse("p & ~p").unwrap()));
        assert!(all.contains(&parse("<>[]~p").unwrap()));
    }

    #[test]
    fn empty_literal_set_gives_constants() {
        let got: Vec<Formula> = enumerate_formulas(&LiteralSet::new(), 1).collect();
        assert_eq!(got, vec![Formula::Bot, Formula::Top]);
    }
}
