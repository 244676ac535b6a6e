//! Exhaustive `p⃗`-monotonicity on a finite frame.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::formula::{Formula, Var};
use crate::guard::Guards;
use crate::structures::{full_mask, unpack, Compiled, Frame, Valuation};

/// `val1 ≤_p⃗ val2`, yet `f` holds at `world` under `val1` and fails under `val2`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MonotoneCounterexample {
    pub val1: Valuation,
    pub val2: Valuation,
    pub world: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MonotonicityVerdict {
    pub monotone: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<MonotoneCounterexample>,
    /// Number of valuation pairs compared.
    pub pairs_checked: u64,
}

/// Ascending submasks of `m`, starting at 0.
pub(crate) fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        let succ = (cur | !m).wrapping_add(1) & m;
        next = (succ != 0).then_some(succ);
        Some(cur)
    })
}

/// Decides whether `f` is monotone in `pvars` on `frame` by comparing every
/// pair of valuations of `vars(f)` that grow on `pvars` and agree elsewhere.
///
/// Sweep order: the assignment to the other variables is outermost, then the
/// smaller valuation, then its supersets; each as a binary counter with the
/// first variable most significant.
pub fn check_monotone(frame: &Frame, f: &Formula, pvars: &[Var], guards: &Guards) -> Result<MonotonicityVerdict> {
    let pset: BTreeSet<&Var> = pvars.iter().collect();
    let (ps, os): (Vec<Var>, Vec<Var>) = f.vars().into_iter().partition(|v| pset.contains(v));
    let n = frame.size();
    let (kp, ko) = (ps.len(), os.len());
    guards.ensure_bits("monotonicity sweep", (n * kp) as f64 * 3f64.log2() + (n * ko) as f64)?;
    let vars: Vec<Var> = ps.iter().chain(&os).cloned().collect();
    let prog = Compiled::new(f, &vars);
    let mut masks = vec![0u64; kp + ko];
    let mut stack = Vec::new();
    let pbits = n * kp;
    let ptotal = 1u64 << pbits;
    let mut table = vec![0u64; ptotal as usize];
    let mut pairs = 0u64;
    for other in 0..1u64 << (n * ko) {
        unpack(other, n, ko, &mut masks[kp..]);
        for (a, slot) in table.iter_mut().enumerate() {
            unpack(a as u64, n, kp, &mut masks[..kp]);
            *slot = prog.eval_with(frame, &masks, &mut stack);
        }
        for a in 0..ptotal {
            let ea = table[a as usize];
            let free = !a & full_mask(pbits);
            for s in submasks(free) {
                pairs += 1;
                let b = a | s;
                let lost = ea & !table[b as usize];
                if lost != 0 {
                    let mut m1 = masks.clone();
                    unpack(a, n, kp, &mut m1[..kp]);
                    let mut m2 = masks.clone();
                    unpack(b, n, kp, &mut m2[..kp]);
                    return Ok(MonotonicityVerdict {
                        monotone: false,
                        counterexample: Some(MonotoneCounterexample {
                            val1: Valuation::from_masks(n, &vars, &m1),
                            val2: Valuation::from_masks(n, &vars, &m2),
                            world: lost.trailing_zeros() as usize,
                        }),
                        pairs_checked: pairs,
                    });
                }
            }
        }
    }
    Ok(MonotonicityVerdict {
        monotone: true,
        counterexample: None,
        pairs_checked: pairs,
    })
}
