use super::sorted::SortedMagVector;
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::{Msg, Sign};

/// Number of entries kept per check vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Capacity {
    /// As many as the check degree.
    #[default]
    Full,
    /// At most this many (clamped to the check degree).
    Entries(usize),
}

impl Capacity {
    pub fn for_degree(self, degree: usize) -> usize {
        match self {
            Capacity::Full => degree,
            Capacity::Entries(l) => l.min(degree),
        }
    }
}

/// Per-frame decoder memory. Edge arrays are indexed by the matrix's edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderState {
    pub intrinsic: Vec<Msg>,
    /// Sign of the variable-to-check message currently folded into the
    /// owning check's sign product.
    pub edge_sign: Vec<Sign>,
    /// Variable-to-check magnitudes, kept only by the variants that rescan
    /// them.
    pub edge_mag: Option<Vec<u16>>,
    pub total: Vec<i32>,
    pub vectors: Vec<SortedMagVector>,
}

/// Initial state: every edge carries its variable's intrinsic message, each
/// check vector holds its smallest magnitudes and the product of all signs,
/// and totals equal the intrinsics.
pub fn init_state(
    h: &ParityCheckMatrix,
    channel_llrs: &[Msg],
    capacity: Capacity,
    keep_magnitudes: bool,
) -> Result<DecoderState, DecodeError> {
    if channel_llrs.len() != h.n() {
        return Err(DecodeError::LengthMismatch {
            got: channel_llrs.len(),
            expected: h.n(),
        });
    }
    let e = h.num_edges();
    let mut edge_sign = vec![Sign::Plus; e];
    let mut edge_mag = keep_magnitudes.then(|| vec![0u16; e]);
    let mut vectors = Vec::with_capacity(h.m());
    for c in 0..h.m() {
        for (edge, &v) in h.check_edges(c).zip(h.check_neighbors(c)) {
            edge_sign[edge] = channel_llrs[v].sign;
            if let Some(mags) = edge_mag.as_mut() {
                mags[edge] = channel_llrs[v].mag;
            }
        }
        let cap = capacity.for_degree(h.check_degree(c));
        vectors.push(SortedMagVector::from_messages(
            cap,
            h.check_neighbors(c).iter().map(|&v| (h.edge_key(v), channel_llrs[v])),
        ));
    }
    Ok(DecoderState {
        intrinsic: channel_llrs.to_vec(),
        edge_sign,
        edge_mag,
        total: channel_llrs.iter().map(|m| m.value()).collect(),
        vectors,
    })
}

/// Bit `v` is 1 iff `total[v] < 0`; a zero total decodes to 0.
pub fn hard_decision(state: &DecoderState) -> Vec<u8> {
    totals_to_bits(&state.total)
}

pub(crate) fn totals_to_bits(total: &[i32]) -> Vec<u8> {
    total.iter().map(|&t| u8::from(t < 0)).collect()
}
