use super::{empty_rcv, DecodeConfig, DecodeObserver, DecodeResult, Stopper, TraceEntry};
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::{Msg, Sign};
use crate::kernel::vertical_update_into;

/// Min-Sum check update over one check's incoming messages, written to `out`
/// in the same order.
pub(crate) fn min_sum_check(
    lcv: &[Msg],
    out: &mut [Msg],
    check: usize,
    config: &DecodeConfig,
) -> Result<(), DecodeError> {
    let mut sign = Sign::Plus;
    let mut min1 = u16::MAX;
    let mut min2 = u16::MAX;
    let mut arg = usize::MAX;
    for (i, l) in lcv.iter().enumerate() {
        sign *= l.sign;
        if l.mag < min1 {
            min2 = min1;
            min1 = l.mag;
            arg = i;
        } else if l.mag < min2 {
            min2 = l.mag;
        }
    }
    for (i, (slot, l)) in out.iter_mut().zip(lcv).enumerate() {
        let s = sign * l.sign;
        let mag = if i == arg { min2 } else { min1 };
        *slot = if mag == u16::MAX {
            empty_rcv(config, check, s)?
        } else {
            Msg::new(s, mag)
        };
    }
    Ok(())
}

pub(super) fn run<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    let scaling = config.scaling();
    let mut lcv: Vec<Msg> = (0..h.num_edges()).map(|e| llrs[h.edge_var(e)]).collect();
    let mut rcv = vec![Msg::ZERO; h.num_edges()];
    let mut total: Vec<i32> = llrs.iter().map(|m| m.value()).collect();
    let mut stop = Stopper::new(h, config.early_termination);
    let mut r_buf = Vec::new();
    let mut l_buf = Vec::new();
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        obs.begin_iteration(iteration, h.m());
        for c in 0..h.m() {
            let edges = h.check_edges(c);
            min_sum_check(&lcv[edges.clone()], &mut rcv[edges], c, config)?;
        }
        for v in 0..h.n() {
            let edges = h.var_edges(v);
            r_buf.clear();
            r_buf.extend(edges.iter().map(|&e| rcv[e]));
            l_buf.resize(edges.len(), Msg::ZERO);
            total[v] = vertical_update_into(llrs[v], &r_buf, &config.fmt, scaling, &mut l_buf);
            for ((&e, &c), (&r, &l)) in edges.iter().zip(h.var_neighbors(v)).zip(r_buf.iter().zip(&l_buf)) {
                lcv[e] = l;
                obs.message(&TraceEntry {
                    iteration,
                    layer: h.layer_of_column(v),
                    check: c,
                    var: v,
                    rcv: r,
                    lcv: l,
                });
            }
        }
        if stop.end_iteration(iteration, &total) {
            break;
        }
    }
    Ok(stop.finish(&total, iterations))
}
