use super::{empty_rcv, DecodeConfig, DecodeObserver, DecodeResult, Stopper, TraceEntry};
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::{Msg, Sign};
use crate::kernel::vertical_update_into;

/// `R_cv` by direct scan of the check's stored variable-to-check messages,
/// skipping the edge `skip`.
pub(crate) fn scan_rcv(
    h: &ParityCheckMatrix,
    lcv: &[Msg],
    check: usize,
    skip: usize,
    config: &DecodeConfig,
) -> Result<Msg, DecodeError> {
    let mut sign = Sign::Plus;
    let mut min = u16::MAX;
    for e in h.check_edges(check).filter(|&e| e != skip) {
        sign *= lcv[e].sign;
        min = min.min(lcv[e].mag);
    }
    if min == u16::MAX {
        empty_rcv(config, check, sign)
    } else {
        Ok(Msg::new(sign, min))
    }
}

pub(super) fn run<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    let scaling = config.scaling();
    let mut lcv: Vec<Msg> = (0..h.num_edges()).map(|e| llrs[h.edge_var(e)]).collect();
    let mut total: Vec<i32> = llrs.iter().map(|m| m.value()).collect();
    let mut stop = Stopper::new(h, config.early_termination);
    let mut r_layer: Vec<Msg> = Vec::new();
    let mut l_buf: Vec<Msg> = Vec::new();
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        obs.begin_iteration(iteration, h.m());
        for g in 0..h.num_layers() {
            let vars = h.layer(g);
            r_layer.clear();
            for &v in vars {
                for (&e, &c) in h.var_edges(v).iter().zip(h.var_neighbors(v)) {
                    r_layer.push(scan_rcv(h, &lcv, c, e, config)?);
                }
            }
            let mut at = 0;
            for &v in vars {
                let edges = h.var_edges(v);
                let rs = &r_layer[at..at + edges.len()];
                l_buf.resize(edges.len(), Msg::ZERO);
                total[v] = vertical_update_into(llrs[v], rs, &config.fmt, scaling, &mut l_buf);
                for ((&e, &c), (&r, &l)) in edges.iter().zip(h.var_neighbors(v)).zip(rs.iter().zip(&l_buf)) {
                    lcv[e] = l;
                    obs.message(&TraceEntry {
                        iteration,
                        layer: g,
                        check: c,
                        var: v,
                        rcv: r,
                        lcv: l,
                    });
                }
                at += edges.len();
            }
        }
        if stop.end_iteration(iteration, &total) {
            break;
        }
    }
    Ok(stop.finish(&total, iterations))
}
