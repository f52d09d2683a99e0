use crate::fixed::{FixedPointFormat, Msg, Scaling};

/// Outputs of one variable node update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalUpdate {
    /// New variable-to-check message per incoming R, same order.
    pub lcv: Vec<Msg>,
    /// A-posteriori total `L_v` at accumulator width.
    pub total: i32,
}

/// Variable node update with scaled extrinsic sums:
/// `L_cv = I + scale(Σ_{m≠c} R_mv)` saturated to the message format and
/// `L_v = I + scale(Σ_m R_mv)` saturated to the accumulator.
pub fn vertical_update(
    intrinsic: Msg,
    rcvs: &[Msg],
    fmt: &FixedPointFormat,
    scaling: Scaling,
) -> VerticalUpdate {
    let mut lcv = vec![Msg::ZERO; rcvs.len()];
    let total = vertical_update_into(intrinsic, rcvs, fmt, scaling, &mut lcv);
    VerticalUpdate { lcv, total }
}

pub(crate) fn vertical_update_into(
    intrinsic: Msg,
    rcvs: &[Msg],
    fmt: &FixedPointFormat,
    scaling: Scaling,
    out: &mut [Msg],
) -> i32 {
    debug_assert_eq!(rcvs.len(), out.len());
    let i = i64::from(intrinsic.value());
    let max_mag = fmt.magnitude_max();
    let sum: i64 = rcvs.iter().map(|r| i64::from(r.value())).sum();
    for (slot, r) in out.iter_mut().zip(rcvs) {
        let extrinsic = fmt.saturate_accumulator(sum - i64::from(r.value()));
        let l = fmt.saturate_accumulator(i + i64::from(scaling.apply(extrinsic)));
        *slot = Msg::saturating_from(l, max_mag);
    }
    let all = fmt.saturate_accumulator(sum);
    fmt.saturate_accumulator(i + i64::from(scaling.apply(all)))
}
