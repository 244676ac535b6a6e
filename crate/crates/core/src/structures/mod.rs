//! Finite frames, models, relations and world sets.

mod frame;
mod model;
mod relation;
mod serde_impls;
mod validity;
mod worldset;

pub use frame::{cone, is_cone, restrict_frame, rt_closure, Frame, KripkeFrame, NbdFrame};
pub use model::{dual_model, eval, holds_at, restrict_model, Compiled, Model, Valuation};
pub use relation::Relation;
pub use validity::{frame_equivalent, frame_validity, frame_validity_sampled, SampledValidity, Validity};
pub use worldset::{bit_iter, full_mask, WorldSet, MAX_WORLDS};

pub(crate) use validity::unpack;
