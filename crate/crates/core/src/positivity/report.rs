use serde::Serialize;

use super::monotone::{check_monotone, MonotonicityVerdict};
use super::synth::{synthesize_positive, SynthesisResult};
use super::witness::{positivity_witness_search, SearchMode, SearchOutcome, Witness};
use crate::error::Result;
use crate::formula::{Formula, Var};
use crate::guard::Guards;
use crate::structures::Frame;

#[derive(Clone, Debug)]
pub struct Budgets {
    pub mode: SearchMode,
    pub max_size: usize,
    pub guards: Guards,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            mode: SearchMode::Exhaustive,
            max_size: 7,
            guards: Guards::default(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LppVerdict {
    NotMonotone,
    RefutedWithWitness,
    PositiveEquivalentFound {
        alpha: Formula,
    },
    /// No witness and no positive equivalent within the bounds.
    /// `positive_equivalent_certified` is set when an exhaustive search on a
    /// Kripke frame found no witness, so an equivalent exists beyond the bound.
    Inconclusive {
        bound_reached: usize,
        positive_equivalent_certified: bool,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LppReport {
    #[serde(flatten)]
    pub verdict: LppVerdict,
    pub monotonicity: MonotonicityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisResult>,
}

/// Monotonicity check, then witness search, then bounded synthesis.
pub fn lpp_report(frame: &Frame, f: &Formula, pvars: &[Var], budgets: &Budgets) -> Result<LppReport> {
    let monotonicity = check_monotone(frame, f, pvars, &budgets.guards)?;
    if !monotonicity.monotone {
        return Ok(LppReport {
            verdict: LppVerdict::NotMonotone,
            monotonicity,
            witness: None,
            synthesis: None,
        });
    }
    let search = positivity_witness_search(frame, f, pvars, &budgets.mode, &budgets.guards)?;
    if let SearchOutcome::Found(w) = search {
        return Ok(LppReport {
            verdict: LppVerdict::RefutedWithWitness,
            monotonicity,
            witness: Some(*w),
            synthesis: None,
        });
    }
    let certified = matches!(search, SearchOutcome::NoneFound { complete: true, .. });
    let synthesis = synthesize_positive(frame, f, pvars, budgets.max_size, &budgets.guards)?;
    let verdict = match &synthesis.found {
        Some(alpha) => LppVerdict::PositiveEquivalentFound { alpha: alpha.clone() },
        None => LppVerdict::Inconclusive {
            bound_reached: synthesis.bound_reached,
            positive_equivalent_certified: certified,
        },
    };
    Ok(LppReport {
        verdict,
        monotonicity,
        witness: None,
        synthesis: Some(synthesis),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};
    use crate::structures::KripkeFrame;

    fn c2() -> Frame {
        Frame::Kripke(KripkeFrame::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap())
    }

    #[test]
    fn verdicts_on_the_two_cluster() {
        let b = Budgets::default();
        let p = [var("p")];
        let r = lpp_report(&c2(), &parse("<>p").unwrap(), &p, &b).unwrap();
        assert_eq!(
            r.verdict,
            LppVerdict::PositiveEquivalentFound {
                alpha: parse("<>p").unwrap()
            }
        );
        let r = lpp_report(&c2(), &parse("~p").unwrap(), &p, &b).unwrap();
        assert_eq!(r.verdict, LppVerdict::NotMonotone);
        let r = lpp_report(&c2(), &parse("[]p | (~p & <>p)").unwrap(), &p, &b).unwrap();
        assert_eq!(r.verdict, LppVerdict::RefutedWithWitness);
    }
}
