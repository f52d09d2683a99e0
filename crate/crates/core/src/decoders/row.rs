use super::flooding::min_sum_check;
use super::{DecodeConfig, DecodeObserver, DecodeResult, Stopper, TraceEntry};
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::Msg;

pub(super) fn run<O: DecodeObserver>(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    let fmt = &config.fmt;
    let scaling = config.scaling();
    let max_mag = fmt.magnitude_max();
    let mut rcv = vec![Msg::ZERO; h.num_edges()];
    let mut sum_r = vec![0i64; h.n()];
    let mut total: Vec<i32> = llrs.iter().map(|m| m.value()).collect();
    let mut stop = Stopper::new(h, config.early_termination);
    let mut l_buf: Vec<Msg> = Vec::new();
    let mut new_r: Vec<Msg> = Vec::new();
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        obs.begin_iteration(iteration, h.m());
        for g in 0..h.num_row_layers() {
            let checks = h.row_layer(g);
            l_buf.clear();
            for &c in checks {
                for (e, &v) in h.check_edges(c).zip(h.check_neighbors(c)) {
                    let extrinsic = fmt.saturate_accumulator(sum_r[v] - i64::from(rcv[e].value()));
                    let l = fmt.saturate_accumulator(i64::from(llrs[v].value()) + i64::from(scaling.apply(extrinsic)));
                    l_buf.push(Msg::saturating_from(l, max_mag));
                }
            }
            new_r.clear();
            new_r.resize(l_buf.len(), Msg::ZERO);
            let mut at = 0;
            for &c in checks {
                let d = h.check_degree(c);
                min_sum_check(&l_buf[at..at + d], &mut new_r[at..at + d], c, config)?;
                at += d;
            }
            let mut at = 0;
            for &c in checks {
                for (e, &v) in h.check_edges(c).zip(h.check_neighbors(c)) {
                    let r = new_r[at];
                    sum_r[v] += i64::from(r.value()) - i64::from(rcv[e].value());
                    rcv[e] = r;
                    obs.message(&TraceEntry {
                        iteration,
                        layer: g,
                        check: c,
                        var: v,
                        rcv: r,
                        lcv: l_buf[at],
                    });
                    at += 1;
                }
            }
            for &c in checks {
                for &v in h.check_neighbors(c) {
                    let all = fmt.saturate_accumulator(sum_r[v]);
                    total[v] = fmt.saturate_accumulator(i64::from(llrs[v].value()) + i64::from(scaling.apply(all)));
                }
            }
        }
        if stop.end_iteration(iteration, &total) {
            break;
        }
    }
    Ok(stop.finish(&total, iterations))
}
