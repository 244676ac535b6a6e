//! Modal formulas in negation normal form.
//!
//! Negation and implication exist only in the surface syntax accepted by
//! [`parse`]; every [`Formula`] value is in NNF, with negation on literals only.

mod axioms;
mod build;
mod enumerate;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use axioms::{axiom, axioms, AXIOM_NAMES};
pub use build::{craig_lift, graded, lyndon_premise, nnf_split, param_elim_lift, Modality, NnfSplit};
pub use enumerate::{enumerate_formulas, FormulaEnumerator};
pub use parse::{parse, ParseError, ParseErrorKind};

/// A propositional variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Var(Arc<str>);

impl Var {
    /// Builds a variable, rejecting names outside `[a-zA-Z_][a-zA-Z0-9_']*`
    /// and the keywords `true`/`false`.
    pub fn new(name: &str) -> Result<Var, String> {
        if is_valid_name(name) {
            Ok(Var(Arc::from(name)))
        } else {
            Err(format!("invalid variable name `{name}`"))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `self` with `suffix` appended; used for deterministic fresh names.
    pub fn suffixed(&self, suffix: &str) -> Var {
        Var(Arc::from(format!("{}{}", self.0, suffix)))
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return false;
    }
    name != "true" && name != "false"
}

impl TryFrom<String> for Var {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Var::new(&s)
    }
}

impl From<Var> for String {
    fn from(v: Var) -> String {
        v.0.to_string()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience constructor for variables in tests and builders.
///
/// Panics on an invalid name.
pub fn var(name: &str) -> Var {
    Var::new(name).expect("valid variable name")
}

/// A variable or its negation. Ordered by variable, positive before negative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: Var) -> Literal {
        Literal { var, positive: false }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            var: self.var.clone(),
            positive: !self.positive,
        }
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.var
            .cmp(&other.var)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "~{}", self.var)
        }
    }
}

/// A set of literals, stored as its positive and negative variable parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct LiteralSet {
    #[serde(default)]
    pub pos: BTreeSet<Var>,
    #[serde(default)]
    pub neg: BTreeSet<Var>,
}

impl LiteralSet {
    pub fn new() -> LiteralSet {
        LiteralSet::default()
    }

    pub fn from_parts<P, N>(pos: P, neg: N) -> LiteralSet
    where
        P: IntoIterator<Item = Var>,
        N: IntoIterator<Item = Var>,
    {
        LiteralSet {
            pos: pos.into_iter().collect(),
            neg: neg.into_iter().collect(),
        }
    }

    /// Both polarities of every variable in `vars`.
    pub fn all_of<'a>(vars: impl IntoIterator<Item = &'a Var>) -> LiteralSet {
        let vars: BTreeSet<Var> = vars.into_iter().cloned().collect();
        LiteralSet {
            pos: vars.clone(),
            neg: vars,
        }
    }

    /// The literals of a directed bisimulation over `vars`: everything except
    /// the negations of `pvars`.
    pub fn directed<'a>(
        vars: impl IntoIterator<Item = &'a Var>,
        pvars: impl IntoIterator<Item = &'a Var>,
    ) -> LiteralSet {
        let mut set = LiteralSet::all_of(vars);
        for p in pvars {
            set.neg.remove(p);
        }
        set
    }

    pub fn insert(&mut self, lit: Literal) {
        if lit.positive {
            self.pos.insert(lit.var);
        } else {
            self.neg.insert(lit.var);
        }
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        if lit.positive {
            self.pos.contains(&lit.var)
        } else {
            self.neg.contains(&lit.var)
        }
    }

    /// `¬τ`: polarities swapped.
    pub fn negated(&self) -> LiteralSet {
        LiteralSet {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    /// `τ±`: both polarities of every mentioned variable.
    pub fn with_both_polarities(&self) -> LiteralSet {
        let vars = self.vars();
        LiteralSet {
            pos: vars.clone(),
            neg: vars,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.pos.union(&self.neg).cloned().collect()
    }

    pub fn is_subset(&self, other: &LiteralSet) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    pub fn intersection(&self, other: &LiteralSet) -> LiteralSet {
        LiteralSet {
            pos: self.pos.intersection(&other.pos).cloned().collect(),
            neg: self.neg.intersection(&other.neg).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    /// Literals in [`Literal`] order.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out: Vec<Literal> = self
            .pos
            .iter()
            .cloned()
            .map(Literal::pos)
            .chain(self.neg.iter().cloned().map(Literal::neg))
            .collect();
        out.sort();
        out
    }
}

/// An NNF modal formula.
///
/// The variant order is the constructor order used by the enumerator:
/// `Bot < Top < Lit < Dia < Nec < And < Or`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Top,
    Lit(Literal),
    /// `◇φ`
    Dia(Box<Formula>),
    /// `□φ`
    Nec(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(v: Var) -> Formula {
        Formula::Lit(Literal::pos(v))
    }

    pub fn neg_atom(v: Var) -> Formula {
        Formula::Lit(Literal::neg(v))
    }

    pub fn lit(l: Literal) -> Formula {
        Formula::Lit(l)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }

    pub fn nec(a: Formula) -> Formula {
        Formula::Nec(Box::new(a))
    }

    /// NNF of `a → b`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(a.negate(), b)
    }

    /// NNF of `a ↔ b`, as `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Left-nested conjunction; the empty conjunction is `⊤`.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `⊥`.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    /// NNF of the negation.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Bot => Formula::Top,
            Formula::Top => Formula::Bot,
            Formula::Lit(l) => Formula::Lit(l.negated()),
            Formula::Dia(a) => Formula::nec(a.negate()),
            Formula::Nec(a) => Formula::dia(a.negate()),
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
        }
    }

    /// The dual formula: `◇` and `□` swapped.
    pub fn dualize(&self) -> Formula {
        match self {
            Formula::Bot | Formula::Top | Formula::Lit(_) => self.clone(),
            Formula::Dia(a) => Formula::nec(a.dualize()),
            Formula::Nec(a) => Formula::dia(a.dualize()),
            Formula::And(a, b) => Formula::and(a.dualize(), b.dualize()),
            Formula::Or(a, b) => Formula::or(a.dualize(), b.dualize()),
        }
    }

    /// Simultaneous substitution. A negative literal over a mapped variable
    /// becomes the NNF negation of the image. Unmapped variables stay put.
    pub fn substitute(&self, map: &BTreeMap<Var, Formula>) -> Formula {
        match self {
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Lit(l) => match map.get(&l.var) {
                Some(image) if l.positive => image.clone(),
                Some(image) => image.negate(),
                None => self.clone(),
            },
            Formula::Dia(a) => Formula::dia(a.substitute(map)),
            Formula::Nec(a) => Formula::nec(a.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
        }
    }

    /// Replaces literals one by one (not variables); used to plug slots back.
    pub(crate) fn map_literals(&self, f: &mut impl FnMut(&Literal) -> Formula) -> Formula {
        match self {
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Lit(l) => f(l),
            Formula::Dia(a) => Formula::dia(a.map_literals(f)),
            Formula::Nec(a) => Formula::nec(a.map_literals(f)),
            Formula::And(a, b) => Formula::and(a.map_literals(f), b.map_literals(f)),
            Formula::Or(a, b) => Formula::or(a.map_literals(f), b.map_literals(f)),
        }
    }

    fn visit_literals<'a>(&'a self, f: &mut impl FnMut(&'a Literal)) {
        match self {
            Formula::Bot | Formula::Top => {}
            Formula::Lit(l) => f(l),
            Formula::Dia(a) | Formula::Nec(a) => a.visit_literals(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_literals(f);
                b.visit_literals(f);
            }
        }
    }

    pub fn lits(&self) -> LiteralSet {
        let mut set = LiteralSet::new();
        self.visit_literals(&mut |l| set.insert(l.clone()));
        set
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut set = BTreeSet::new();
        self.visit_literals(&mut |l| {
            set.insert(l.var.clone());
        });
        set
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Lit(_) => 0,
            Formula::Dia(a) | Formula::Nec(a) => a.modal_depth() + 1,
            Formula::And(a, b) | Formula::Or(a, b) => a.modal_depth().max(b.modal_depth()),
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Lit(_) => 1,
            Formula::Dia(a) | Formula::Nec(a) => a.size() + 1,
            Formula::And(a, b) | Formula::Or(a, b) => a.size() + b.size() + 1,
        }
    }

    /// True iff no negative literal over `pvars` occurs.
    pub fn is_positive_in<'a>(&self, pvars: impl IntoIterator<Item = &'a Var>) -> bool {
        let neg = self.lits().neg;
        pvars.into_iter().all(|p| !neg.contains(p))
    }

    /// True iff no negative literal occurs at all.
    pub fn is_positive(&self) -> bool {
        self.lits().neg.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vars().is_empty()
    }
}

/// Canonical text: binary nodes are always parenthesized, unary operators
/// bind directly. `parse` reads it back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bot => f.write_str("false"),
            Formula::Top => f.write_str("true"),
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Dia(a) => write!(f, "<>{a}"),
            Formula::Nec(a) => write!(f, "[]{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// The canonical text of a formula.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn negate_examples() {
        assert_eq!(p("p").negate(), p("~p"));
        assert_eq!(p("<>true").negate(), Formula::nec(Formula::Bot));
        assert_eq!(
            p("p & []~q").negate(),
            Formula::or(Formula::neg_atom(var("p")), Formula::dia(Formula::atom(var("q"))))
        );
    }

    #[test]
    fn dualize_examples() {
        assert_eq!(p("<>p").dualize(), p("[]p"));
        assert_eq!(Formula::Bot.dualize(), Formula::Bot);
        assert_eq!(axiom("AT").unwrap().dualize(), p("p -> []p"));
    }

    #[test]
    fn substitute_examples() {
        let mut map = BTreeMap::new();
        map.insert(var("p"), p("<>q"));
        assert_eq!(p("~p").substitute(&map), p("[]~q"));

        let mut map = BTreeMap::new();
        map.insert(var("p"), Formula::Bot);
        assert_eq!(p("p | r").substitute(&map), Formula::or(Formula::Bot, p("r")));

        let f = p("<>(p & ~q) | []r");
        let id: BTreeMap<Var, Formula> = f.vars().into_iter().map(|v| (v.clone(), Formula::atom(v))).collect();
        assert_eq!(f.substitute(&id), f);
    }

    #[test]
    fn lits_and_vars() {
        let f = p("~p");
        assert!(f.lits().pos.is_empty());
        assert_eq!(f.lits().neg, [var("p")].into_iter().collect());
        assert_eq!(f.vars(), [var("p")].into_iter().collect());
        assert_eq!(p("<>(p & []q)").modal_depth(), 2);
        assert_eq!(p("p").modal_depth(), 0);
        let cex = p("[]p | (~p & <>p)");
        assert!(!cex.is_positive_in(&[var("p")]));
        assert!(cex.is_positive_in(&[var("q")]));
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&Formula::nec(p("p"))), "[]p");
        assert_eq!(print(&Formula::Bot), "false");
        assert_eq!(print(&p("[]p | (~p & <>p)")), "([]p | (~p & <>p))");
    }

    #[test]
    fn literal_set_ops() {
        let tau = LiteralSet::from_parts([var("p")], [var("q")]);
        assert_eq!(tau.negated(), LiteralSet::from_parts([var("q")], [var("p")]));
        assert_eq!(tau.with_both_polarities().len(), 4);
        let d = LiteralSet::directed(&[var("p"), var("r")], &[var("p")]);
        assert!(d.contains(&Literal::pos(var("p"))));
        assert!(!d.contains(&Literal::neg(var("p"))));
        assert!(d.contains(&Literal::neg(var("r"))));
    }

    #[test]
    fn var_names() {
        assert!(Var::new("r'").is_ok());
        assert!(Var::new("_x1").is_ok());
        assert!(Var::new("1x").is_err());
        assert!(Var::new("true").is_err());
        assert!(Var::new("").is_err());
    }
}
