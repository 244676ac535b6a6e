//! Frame validity by exhaustive valuation sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::frame::Frame;
use super::model::{Compiled, Valuation};
use super::worldset::full_mask;
use crate::error::Result;
use crate::formula::{Formula, Var};
use crate::guard::Guards;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Validity {
    Valid,
    Countermodel { valuation: Valuation, world: usize },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Outcome of a sampled validity check; `Valid` only means no sample failed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SampledValidity {
    pub seed: u64,
    pub trials: u64,
    #[serde(skip)]
    pub countermodel: Option<(Valuation, usize)>,
}

/// Splits a counter into per-variable masks; the first variable takes the
/// most significant chunk, world 0 the lowest bit within a chunk.
#[inline]
pub(crate) fn unpack(counter: u64, n: usize, k: usize, out: &mut [u64]) {
    let mask = full_mask(n);
    for (i, slot) in out.iter_mut().enumerate().take(k) {
        *slot = counter >> (n * (k - 1 - i)) & mask;
    }
}

/// Whether `f` holds at every world of every model on `frame`. The first
/// countermodel in counter order is returned.
pub fn frame_validity(frame: &Frame, f: &Formula, guards: &Guards) -> Result<Validity> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    let n = frame.size();
    let k = vars.len();
    guards.ensure_bits("valuation sweep", (n * k) as f64)?;
    let prog = Compiled::new(f, &vars);
    let full = full_mask(n);
    let mut masks = vec![0u64; k];
    let mut stack = Vec::new();
    for counter in 0..1u64 << (n * k) {
        unpack(counter, n, k, &mut masks);
        let truth = prog.eval_with(frame, &masks, &mut stack);
        if truth != full {
            let world = (!truth & full).trailing_zeros() as usize;
            return Ok(Validity::Countermodel {
                valuation: Valuation::from_masks(n, &vars, &masks),
                world,
            });
        }
    }
    Ok(Validity::Valid)
}

/// Random-valuation variant of [`frame_validity`] for frames past the guard.
pub fn frame_validity_sampled(frame: &Frame, f: &Formula, seed: u64, trials: u64) -> SampledValidity {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    let n = frame.size();
    let prog = Compiled::new(f, &vars);
    let full = full_mask(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut masks = vec![0u64; vars.len()];
    for _ in 0..trials {
        for m in masks.iter_mut() {
            *m = rng.gen::<u64>() & full;
        }
        let truth = prog.eval(frame, &masks);
        if truth != full {
            let world = (!truth & full).trailing_zeros() as usize;
            return SampledValidity {
                seed,
                trials,
                countermodel: Some((Valuation::from_masks(n, &vars, &masks), world)),
            };
        }
    }
    SampledValidity {
        seed,
        trials,
        countermodel: None,
    }
}

/// `f ↔ g` is valid on `frame`.
pub fn frame_equivalent(frame: &Frame, f: &Formula, g: &Formula, guards: &Guards) -> Result<bool> {
    Ok(frame_validity(frame, &Formula::iff(f.clone(), g.clone()), guards)?.is_valid())
}
