//! Shared decoding machinery: per-check sorted magnitude vectors with their
//! Step-A removal and Step-B insertion, the variable node update, and the
//! per-frame decoder state.

mod sorted;
mod state;
mod vnu;

pub use sorted::{
    compute_rcv, step_a_remove, step_b_insert, MagEntry, Placement, SortedMagVector, TempMagVector,
    UpdateMode, VectorError,
};
pub use state::{hard_decision, init_state, Capacity, DecoderState};
pub use vnu::{vertical_update, VerticalUpdate};

pub(crate) use state::totals_to_bits;
pub(crate) use vnu::vertical_update_into;
