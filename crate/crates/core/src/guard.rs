//! Resource guards for exhaustive sweeps.

use crate::error::{Error, Result};

/// Default exponent for exhaustive sweeps (2^24 steps).
pub const DEFAULT_GUARD_BITS: u32 = 24;
/// Largest neighborhood frame stored as a full subset table.
pub const DEFAULT_MAX_NBD_WORLDS: usize = 14;
/// Largest carrier of a bisimulation product.
pub const DEFAULT_MAX_PRODUCT_WORLDS: usize = 12;
/// Candidate budget of one synthesis call.
pub const DEFAULT_MAX_CANDIDATES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub bits: u32,
    pub max_nbd_worlds: usize,
    pub max_product_worlds: usize,
    pub max_candidates: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            bits: DEFAULT_GUARD_BITS,
            max_nbd_worlds: DEFAULT_MAX_NBD_WORLDS,
            max_product_worlds: DEFAULT_MAX_PRODUCT_WORLDS,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

impl Guards {
    pub fn with_bits(bits: u32) -> Self {
        Guards {
            bits,
            ..Guards::default()
        }
    }

    /// Fails unless a sweep of `2^needed` steps fits under the guard.
    pub fn ensure_bits(&self, what: &str, needed: f64) -> Result<()> {
        if needed > self.bits as f64 {
            return Err(Error::GuardExceeded {
                what: what.to_string(),
                needed_bits: needed.ceil() as u32,
                guard_bits: self.bits,
            });
        }
        Ok(())
    }
}
