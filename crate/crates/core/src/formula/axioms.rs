//! Named axiom formulas.

use super::{parse, Formula};

pub const AXIOM_NAMES: [&str; 9] = ["AM", "AC", "AN", "AP", "AD", "AT", "A4", "AB", "A.3"];

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "AM" => "<>p -> <>(p | q)",
        "AC" => "<>(p | q) -> <>p | <>q",
        "AN" => "[]true",
        "AP" => "<>true",
        "AD" => "[]p -> <>p",
        "AT" => "p -> <>p",
        "A4" => "<><>p -> <>p",
        "AB" => "<>p -> []<>p",
        "A.3" => "<>p & <>q -> <>(p & <>q) | <>(q & <>p) | <>(p & q)",
        _ => return None,
    })
}

/// Looks up one axiom by name, in NNF.
pub fn axiom(name: &str) -> Option<Formula> {
    source(name).map(|s| parse(s).expect("axiom sources parse"))
}

/// All axioms in table order.
pub fn axioms() -> Vec<(&'static str, Formula)> {
    AXIOM_NAMES
        .iter()
        .map(|n| (*n, axiom(n).expect("listed axiom")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_complete() {
        assert_eq!(axioms().len(), 9);
        assert_eq!(axiom("AX"), None);
    }

    #[test]
    fn shapes() {
        assert_eq!(axiom("AM").unwrap(), parse("[]~p | <>(p | q)").unwrap());
        assert_eq!(axiom("AN").unwrap(), Formula::nec(Formula::Top));
        assert_eq!(axiom("AP").unwrap(), Formula::dia(Formula::Top));
        assert_eq!(axiom("AT").unwrap(), parse("~p | <>p").unwrap());
        // A.3: a two-conjunct antecedent and three diamond disjuncts
        match axiom("A.3").unwrap() {
            Formula::Or(lhs, rhs) => {
                assert_eq!(*lhs, parse("[]~p | []~q").unwrap());
                assert_eq!(*rhs, parse("<>(p & <>q) | <>(q & <>p) | <>(p & q)").unwrap());
            }
            other => panic!("unexpected shape {other}"),
        }
    }
}
