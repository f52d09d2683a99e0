use super::{empty_rcv, DecodeConfig, DecodeObserver, DecodeResult, Fault, Stopper, TraceEntry};
use crate::census::classify_event;
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::{Msg, Sign};
use crate::kernel::{
    init_state, vertical_update_into, DecoderState, VectorError,
};

/// Check messages for every edge of layer `g`, in variable then edge order,
/// read from the vectors as they currently stand.
pub(super) fn layer_rcvs(
    h: &ParityCheckMatrix,
    state: &DecoderState,
    g: usize,
    config: &DecodeConfig,
    out: &mut Vec<Msg>,
) -> Result<(), DecodeError> {
    out.clear();
    for &v in h.layer(g) {
        let key = h.edge_key(v);
        for (&e, &c) in h.var_edges(v).iter().zip(h.var_neighbors(v)) {
            let old = match config.fault {
                Some(Fault::StepAKeepsOldSign) => Sign::Plus,
                None => state.edge_sign[e],
            };
            let vector = &state.vectors[c];
            let r = match vector.rcv_excluding(key, old) {
                Some(r) => r,
                None => empty_rcv(config, c, vector.sign_product() * old)?,
            };
            out.push(r);
        }
    }
    Ok(())
}

/// Variable node updates for layer `g` from `rcvs` (as laid out by
/// [`layer_rcvs`]); writes new totals and returns the new messages in `out`.
#[allow(clippy::too_many_arguments)]
pub(super) fn layer_vertical<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    state: &mut DecoderState,
    g: usize,
    iteration: usize,
    rcvs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
    out: &mut Vec<Msg>,
) {
    let scaling = config.scaling();
    out.clear();
    out.resize(rcvs.len(), Msg::ZERO);
    let mut at = 0;
    for &v in h.layer(g) {
        let d = h.var_degree(v);
        let (rs, ls) = (&rcvs[at..at + d], &mut out[at..at + d]);
        state.total[v] = vertical_update_into(state.intrinsic[v], rs, &config.fmt, scaling, ls);
        for (&c, (&r, &l)) in h.var_neighbors(v).iter().zip(rs.iter().zip(ls.iter())) {
            obs.message(&TraceEntry {
                iteration,
                layer: g,
                check: c,
                var: v,
                rcv: r,
                lcv: l,
            });
        }
        at += d;
    }
}

/// Step-A then Step-B (in place) on each check touched by layer `g`, folding in the
/// layer's new messages `lcvs` and recording one census event per edge.
pub(super) fn layer_commit<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    state: &mut DecoderState,
    g: usize,
    iteration: usize,
    lcvs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<(), DecodeError> {
    let mut at = 0;
    for &v in h.layer(g) {
        let key = h.edge_key(v);
        for (&e, &c) in h.var_edges(v).iter().zip(h.var_neighbors(v)) {
            let l = lcvs[at];
            at += 1;
            let vector = &mut state.vectors[c];
            let removed = vector.remove_in_place(key, state.edge_sign[e]);
            let placement = vector
                .insert_in_place(key, l.mag, l.sign, config.mode)
                .map_err(|err| match err {
                    VectorError::DuplicateIndex(index) => DecodeError::DuplicateIndex { check: c, index },
                    VectorError::Overflow => DecodeError::CapacityOverflow { check: c },
                })?;
            state.edge_sign[e] = l.sign;
            obs.vector_update(iteration, c, classify_event(removed, placement));
        }
    }
    Ok(())
}

pub(super) fn run<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    let mut state = init_state(h, llrs, config.vector_capacity, false)?;
    let mut stop = Stopper::new(h, config.early_termination);
    let mut rcvs = Vec::new();
    let mut lcvs = Vec::new();
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        obs.begin_iteration(iteration, h.m());
        for g in 0..h.num_layers() {
            layer_rcvs(h, &state, g, config, &mut rcvs)?;
            layer_vertical(h, &mut state, g, iteration, &rcvs, config, obs, &mut lcvs);
            layer_commit(h, &mut state, g, iteration, &lcvs, config, obs)?;
        }
        if stop.end_iteration(iteration, &state.total) {
            break;
        }
    }
    Ok(stop.finish(&state.total, iterations))
}
