use std::collections::VecDeque;

use super::incremental::{layer_commit, layer_rcvs, layer_vertical};
use super::{DecodeConfig, DecodeObserver, DecodeResult, Stopper};
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::Msg;
use crate::kernel::{init_state, DecoderState};

/// Global layer step `t` covers layer `t % G` of iteration `t / G + 1`. The
/// variable node update for step `t + P` runs alongside the vector update
/// for step `t`, so it reads vectors that do not yet hold steps
/// `t .. t + P - 1`. Signs divided out by Step-A are always the committed
/// ones.
pub(super) fn run<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    let layers = h.num_layers();
    let depth = config.pipeline_depth;
    let steps = config.max_iterations * layers;
    let mut state = init_state(h, llrs, config.vector_capacity, false)?;
    let mut stop = Stopper::new(h, config.early_termination);
    let mut rcvs = Vec::new();
    let mut pending: VecDeque<(usize, Vec<Msg>)> = VecDeque::with_capacity(depth + 1);
    let mut iterations = 0;

    let mut started = 0;
    for t in 0..depth.min(steps) {
        // iteration 1 begins with the prologue
        if t == 0 {
            obs.begin_iteration(1, h.m());
            started = 1;
        }
        issue(h, config, t, &mut state, &mut rcvs, &mut pending, obs)?;
    }
    for t in 0..steps {
        let (g, iteration) = (t % layers, t / layers + 1);
        if iteration > started {
            obs.begin_iteration(iteration, h.m());
            started = iteration;
        }
        if t + depth < steps {
            issue(h, config, t + depth, &mut state, &mut rcvs, &mut pending, obs)?;
        }
        let (step, lcvs) = pending.pop_front().expect("pipeline underrun");
        debug_assert_eq!(step, t);
        layer_commit(h, &mut state, g, iteration, &lcvs, config, obs)?;
        if g == layers - 1 {
            iterations = iteration;
            if stop.end_iteration(iteration, &state.total) {
                break;
            }
        }
    }
    Ok(stop.finish(&state.total, iterations))
}

#[allow(clippy::too_many_arguments)]
fn issue<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    config: &DecodeConfig,
    t: usize,
    state: &mut DecoderState,
    rcvs: &mut Vec<Msg>,
    pending: &mut VecDeque<(usize, Vec<Msg>)>,
    obs: &mut O,
) -> Result<(), DecodeError> {
    let layers = h.num_layers();
    let (g, iteration) = (t % layers, t / layers + 1);
    layer_rcvs(h, state, g, config, rcvs)?;
    let mut lcvs = Vec::with_capacity(rcvs.len());
    layer_vertical(h, state, g, iteration, rcvs, config, obs, &mut lcvs);
    pending.push_back((t, lcvs));
    Ok(())
}
