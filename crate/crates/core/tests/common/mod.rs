//! Independent reference implementations and property checks shared by the
//! integration and acceptance tests. Nothing here calls back into the
//! library's own decoding internals except to obtain the value under test.

#![allow(dead_code)]

use column_ldpc::channel::{frame_seed, quantized_frame, NoiseSpec};
use column_ldpc::code::QcBase;
use column_ldpc::fixed::{quantize, scale_three_quarters, FixedPointFormat, Msg, Sign};
use column_ldpc::kernel::{compute_rcv, step_a_remove, step_b_insert, SortedMagVector, UpdateMode};
use column_ldpc::ParityCheckMatrix;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

// ---------------------------------------------------------------- dense forms

pub fn dense(h: &ParityCheckMatrix) -> Vec<Vec<u8>> {
    let mut d = vec![vec![0u8; h.n()]; h.m()];
    for (c, row) in d.iter_mut().enumerate() {
        for &v in h.check_neighbors(c) {
            row[v] = 1;
        }
    }
    d
}

/// `H · x` over GF(2) is all zero.
pub fn dense_syndrome_zero(rows: &[Vec<u8>], bits: &[u8]) -> bool {
    rows.iter()
        .all(|row| row.iter().zip(bits).fold(0u8, |acc, (&h, &b)| acc ^ (h & b)) == 0)
}

/// Brute-force 4-cycle search on the expanded matrix: two rows sharing two
/// or more columns.
pub fn dense_has_four_cycle(rows: &[Vec<u8>]) -> bool {
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            let shared = rows[a]
                .iter()
                .zip(&rows[b])
                .filter(|(&x, &y)| x == 1 && y == 1)
                .count();
            if shared >= 2 {
                return true;
            }
        }
    }
    false
}

/// Circulant expansion written directly from the block definition.
pub fn dense_expand(base: &QcBase) -> Vec<Vec<u8>> {
    let z = base.z();
    let mut rows = vec![vec![0u8; base.cols_b() * z]; base.rows_b() * z];
    for i in 0..base.rows_b() {
        for j in 0..base.cols_b() {
            if let Some(s) = base.shift(i, j) {
                for r in 0..z {
                    rows[i * z + r][j * z + (r + s) % z] = 1;
                }
            }
        }
    }
    rows
}

// ------------------------------------------------------- fixed-point oracle

/// Sign-magnitude message as a (negative, magnitude) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SM {
    pub neg: bool,
    pub mag: i64,
}

impl SM {
    pub fn of(m: Msg) -> SM {
        SM {
            neg: m.sign == Sign::Minus,
            mag: i64::from(m.mag),
        }
    }

    pub fn value(self) -> i64 {
        if self.neg {
            -self.mag
        } else {
            self.mag
        }
    }

    pub fn to_msg(self) -> Msg {
        Msg::new(if self.neg { Sign::Minus } else { Sign::Plus }, self.mag as u16)
    }
}

pub struct Arith {
    pub qmax: i64,
    pub accmax: i64,
}

impl Arith {
    pub fn new(fmt: &FixedPointFormat) -> Self {
        Arith {
            qmax: (1i64 << (fmt.message_bits - 1)) - 1,
            accmax: (1i64 << (fmt.accumulator_bits - 1)) - 1,
        }
    }

    fn acc(&self, x: i64) -> i64 {
        x.max(-self.accmax).min(self.accmax)
    }

    /// 0.75 as floor(|x|/2) + floor(|x|/4) on the magnitude.
    pub fn three_quarters(x: i64) -> i64 {
        let m = x.abs();
        let r = m / 2 + m / 4;
        if x < 0 {
            -r
        } else {
            r
        }
    }

    fn msg(&self, x: i64) -> SM {
        SM {
            neg: x < 0,
            mag: x.abs().min(self.qmax),
        }
    }

    /// Variable node update with unbounded intermediate sums, saturated at
    /// the points the datapath saturates.
    pub fn vnu(&self, intrinsic: SM, r: &[SM]) -> (Vec<SM>, i64) {
        let total_r: i128 = r.iter().map(|x| i128::from(x.value())).sum();
        let lcv = r
            .iter()
            .map(|x| {
                let ext = (total_r - i128::from(x.value())).clamp(-i128::from(self.accmax), i128::from(self.accmax));
                self.msg(self.acc(intrinsic.value() + Self::three_quarters(ext as i64)))
            })
            .collect();
        let all = total_r.clamp(-i128::from(self.accmax), i128::from(self.accmax)) as i64;
        (lcv, self.acc(intrinsic.value() + Self::three_quarters(all)))
    }
}

/// Min-Sum check message from the other edges' messages; `None` when there
/// are none.
pub fn scan_min(others: impl Iterator<Item = SM>) -> Option<SM> {
    let mut neg = false;
    let mut min: Option<i64> = None;
    for m in others {
        neg ^= m.neg;
        min = Some(min.map_or(m.mag, |x| x.min(m.mag)));
    }
    min.map(|mag| SM { neg, mag })
}

pub struct OracleRun {
    pub bits: Vec<u8>,
    pub iterations: usize,
    /// (iteration, check, var, R, L) in update order.
    pub messages: Vec<(usize, usize, usize, SM, SM)>,
}

fn decide(total: &[i64]) -> Vec<u8> {
    total.iter().map(|&t| u8::from(t < 0)).collect()
}

/// Flooding scaled Min-Sum over a dense matrix.
pub fn oracle_flooding(rows: &[Vec<u8>], llrs: &[Msg], fmt: &FixedPointFormat, max_iter: usize) -> OracleRun {
    let ar = Arith::new(fmt);
    let (m, n) = (rows.len(), llrs.len());
    let intr: Vec<SM> = llrs.iter().map(|&x| SM::of(x)).collect();
    let mut l: Vec<Vec<SM>> = (0..m).map(|_| intr.clone()).collect();
    let mut r = vec![vec![SM { neg: false, mag: 0 }; n]; m];
    let mut total: Vec<i64> = intr.iter().map(|x| x.value()).collect();
    let mut messages = Vec::new();
    for it in 1..=max_iter {
        for c in 0..m {
            for v in (0..n).filter(|&v| rows[c][v] == 1) {
                let others = (0..n).filter(|&u| u != v && rows[c][u] == 1).map(|u| l[c][u]);
                r[c][v] = scan_min(others).expect("check degree >= 2");
            }
        }
        for v in 0..n {
            let checks: Vec<usize> = (0..m).filter(|&c| rows[c][v] == 1).collect();
            let rs: Vec<SM> = checks.iter().map(|&c| r[c][v]).collect();
            let (ls, t) = ar.vnu(intr[v], &rs);
            total[v] = t;
            for (k, &c) in checks.iter().enumerate() {
                l[c][v] = ls[k];
                messages.push((it, c, v, rs[k], ls[k]));
            }
        }
        if dense_syndrome_zero(rows, &decide(&total)) {
            return OracleRun {
                bits: decide(&total),
                iterations: it,
                messages,
            };
        }
    }
    OracleRun {
        bits: decide(&total),
        iterations: max_iter,
        messages,
    }
}

/// Original column-layered schedule: for each layer, every check message
/// into the layer is rescanned from stored variable-to-check messages, then
/// the layer's variables are updated.
pub fn oracle_column(
    rows: &[Vec<u8>],
    layers: &[Vec<usize>],
    llrs: &[Msg],
    fmt: &FixedPointFormat,
    max_iter: usize,
) -> OracleRun {
    let ar = Arith::new(fmt);
    let (m, n) = (rows.len(), llrs.len());
    let intr: Vec<SM> = llrs.iter().map(|&x| SM::of(x)).collect();
    let mut l: Vec<Vec<SM>> = (0..m).map(|_| intr.clone()).collect();
    let mut total: Vec<i64> = intr.iter().map(|x| x.value()).collect();
    let mut messages = Vec::new();
    for it in 1..=max_iter {
        for layer in layers {
            let mut pending = Vec::new();
            for &v in layer {
                let checks: Vec<usize> = (0..m).filter(|&c| rows[c][v] == 1).collect();
                let rs: Vec<SM> = checks
                    .iter()
                    .map(|&c| {
                        let others = (0..n).filter(|&u| u != v && rows[c][u] == 1).map(|u| l[c][u]);
                        scan_min(others).expect("check degree >= 2")
                    })
                    .collect();
                pending.push((v, checks, rs));
            }
            for (v, checks, rs) in pending {
                let (ls, t) = ar.vnu(intr[v], &rs);
                total[v] = t;
                for (k, &c) in checks.iter().enumerate() {
                    l[c][v] = ls[k];
                    messages.push((it, c, v, rs[k], ls[k]));
                }
            }
        }
        if dense_syndrome_zero(rows, &decide(&total)) {
            return OracleRun {
                bits: decide(&total),
                iterations: it,
                messages,
            };
        }
    }
    OracleRun {
        bits: decide(&total),
        iterations: max_iter,
        messages,
    }
}

/// Quantized all-zero-codeword frame, seeded like the harness.
pub fn frame(h: &ParityCheckMatrix, snr_db: f64, fmt: &FixedPointFormat, seed: u64, index: u64) -> Vec<Msg> {
    let noise = NoiseSpec::new(snr_db, h.design_rate()).unwrap();
    quantized_frame(h.n(), &noise, fmt, frame_seed(seed, 0, index))
}

// ------------------------------------------------------------- strategies

pub fn msg_strategy(max: u16) -> impl Strategy<Value = Msg> {
    (any::<bool>(), 0..=max).prop_map(|(neg, mag)| Msg::new(if neg { Sign::Minus } else { Sign::Plus }, mag))
}

/// One check of degree `d` with capacity and mode, its initial messages and
/// a sequence of (edge, new message) updates.
#[derive(Debug, Clone)]
pub struct VectorScenario {
    pub degree: usize,
    pub capacity: usize,
    pub mode: UpdateMode,
    pub init: Vec<Msg>,
    pub updates: Vec<(usize, Msg)>,
}

pub fn vector_scenario() -> impl Strategy<Value = VectorScenario> {
    (2usize..=12, 0usize..4, 0usize..3)
        .prop_flat_map(|(d, cap_pick, mode_pick)| {
            let capacity = [1, 2, 3, d][cap_pick].min(d);
            let mode = match mode_pick {
                0 if capacity == d => UpdateMode::Exact,
                2 if capacity >= 2 => UpdateMode::Simplified,
                _ => UpdateMode::ThreeMin,
            };
            (
                Just(d),
                Just(capacity),
                Just(mode),
                prop::collection::vec(msg_strategy(7), d),
                prop::collection::vec((0..d, msg_strategy(7)), 0..40),
            )
        })
        .prop_map(|(degree, capacity, mode, init, updates)| VectorScenario {
            degree,
            capacity,
            mode,
            init,
            updates,
        })
}

// --------------------------------------------------------- property checks

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

fn vector_invariants(v: &SortedMagVector, current: &[Msg], s: &VectorScenario) -> Result<(), TestCaseError> {
    let e = v.entries();
    ensure(e.len() <= s.capacity, || format!("{} entries over capacity {}", e.len(), s.capacity))?;
    ensure(e.windows(2).all(|w| w[0].mag <= w[1].mag), || format!("not ascending: {e:?}"))?;
    let mut idx: Vec<u32> = e.iter().map(|x| x.index).collect();
    idx.sort_unstable();
    ensure(idx.windows(2).all(|w| w[0] != w[1]), || format!("repeated index: {e:?}"))?;
    for x in e {
        let cur = current[x.index as usize];
        ensure(cur.mag == x.mag, || format!("stale entry {x:?}, edge holds {cur}"))?;
    }
    let product = current.iter().fold(Sign::Plus, |acc, m| acc * m.sign);
    ensure(v.sign_product() == product, || "sign product drifted".into())?;
    if s.mode == UpdateMode::Exact {
        let mut all: Vec<u16> = current.iter().map(|m| m.mag).collect();
        all.sort_unstable();
        let mags: Vec<u16> = e.iter().map(|x| x.mag).collect();
        ensure(mags == all, || format!("exact vector {mags:?} != {all:?}"))?;
    }
    Ok(())
}

/// Replays a scenario through Step-A/Step-B, checking ordering, membership
/// and sign exactness after every update, the check message against a
/// direct scan (exact) or as an upper bound of it (reduced capacity), and
/// the reduced vector against a full-capacity vector fed the same messages.
pub fn check_vector_scenario(s: &VectorScenario) -> Result<(), TestCaseError> {
    let mut current = s.init.clone();
    let mut v = SortedMagVector::from_messages(s.capacity, current.iter().enumerate().map(|(i, &m)| (i as u32, m)));
    let mut full = SortedMagVector::from_messages(s.degree, current.iter().enumerate().map(|(i, &m)| (i as u32, m)));
    vector_invariants(&v, &current, s)?;
    for &(edge, new) in &s.updates {
        let key = edge as u32;
        let before = v.valid_count();
        let temp = step_a_remove(v, key, current[edge].sign);
        ensure(temp.vector.valid_count() + usize::from(temp.removed) == before, || "Step-A count".into())?;
        let full_temp = step_a_remove(full, key, current[edge].sign);

        let direct = scan_min(
            current
                .iter()
                .enumerate()
                .filter(|&(u, _)| u != edge)
                .map(|(_, &m)| SM::of(m)),
        )
        .map(SM::to_msg);
        let exact_r = compute_rcv(&full_temp);
        ensure(exact_r == direct, || format!("full vector R {exact_r:?} != scan {direct:?}"))?;
        let approx_r = compute_rcv(&temp);
        match (approx_r, direct) {
            (Some(a), Some(d)) => {
                ensure(a.sign == d.sign, || "R sign differs from scan".into())?;
                ensure(a.mag >= d.mag, || format!("R magnitude {} below true minimum {}", a.mag, d.mag))?;
                if s.mode == UpdateMode::Exact {
                    ensure(a == d, || "exact R differs from scan".into())?;
                }
            }
            (None, _) => ensure(s.capacity == 1 || s.degree == 1, || "vector emptied with capacity > 1".into())?,
            (Some(_), None) => return Err(TestCaseError::fail("R from nothing")),
        }

        let (nv, _) =
            step_b_insert(temp, key, new.mag, new.sign, s.mode).map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
        let (nf, _) = step_b_insert(full_temp, key, new.mag, new.sign, UpdateMode::Exact)
            .map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
        current[edge] = new;
        v = nv;
        full = nf;
        vector_invariants(&v, &current, s)?;
    }
    Ok(())
}

/// Simplified and three-min Step-B agree except when the vector is full and
/// the newcomer is not below entry `capacity - 1`, where simplified drops it.
pub fn check_simplified_vs_three_min(
    capacity: usize,
    entries: &[u16],
    removed: bool,
    new_mag: u16,
) -> Result<(), TestCaseError> {
    let msgs = entries
        .iter()
        .enumerate()
        .map(|(i, &m)| (i as u32 + 1, Msg::new(Sign::Plus, m)));
    let v = SortedMagVector::from_messages(capacity, msgs);
    let temp = column_ldpc::kernel::TempMagVector { vector: v, removed };
    let full = temp.vector.valid_count() == capacity;
    let pivot = temp.vector.entries().get(capacity - 2).map(|e| e.mag);
    let (a, pa) = step_b_insert(temp.clone(), 0, new_mag, Sign::Plus, UpdateMode::ThreeMin).unwrap();
    let (b, pb) = step_b_insert(temp, 0, new_mag, Sign::Plus, UpdateMode::Simplified).unwrap();
    let may_differ = full && pivot.is_some_and(|p| new_mag >= p);
    if !may_differ {
        ensure(a == b && pa == pb, || "modes differ outside the skipped comparison".into())?;
    } else {
        ensure(pb == column_ldpc::kernel::Placement::Discarded, || "simplified kept a newcomer past its comparison window".into())?;
    }
    Ok(())
}

pub fn check_quantizer(x: f64, bits: u32, step: f64) -> Result<(), TestCaseError> {
    let fmt = FixedPointFormat::new(bits, step).unwrap();
    let q = quantize(x, &fmt);
    let nq = quantize(-x, &fmt);
    let max = (1u32 << (bits - 1)) - 1;
    ensure(u32::from(q.mag) <= max, || "magnitude above limit".into())?;
    ensure(q.mag == nq.mag, || format!("asymmetric magnitude at {x}"))?;
    if x != 0.0 {
        ensure(q.sign != nq.sign, || format!("sign not flipped at {x}"))?;
        ensure((q.sign == Sign::Minus) == (x < 0.0), || "sign not preserved".into())?;
    } else {
        ensure(q == Msg::ZERO && nq == Msg::ZERO, || "zero not +0".into())?;
    }
    let a = x.abs() / step;
    let expect = if a >= f64::from(max) { max } else { (a + 0.5).floor() as u32 };
    let expect = expect.min(max);
    ensure(u32::from(q.mag) == expect, || format!("quantize({x}) = {q}, expected magnitude {expect}"))
}

pub fn check_three_quarters(x: i32) -> Result<(), TestCaseError> {
    let y = scale_three_quarters(x);
    let m = i64::from(x).abs();
    let floor = (3 * m) / 4;
    let shift = m / 2 + m / 4;
    ensure(i64::from(y).abs() == shift, || format!("{x} -> {y}, shift-add gives {shift}"))?;
    ensure(
        i64::from(y).abs() == floor || i64::from(y).abs() == floor - 1,
        || format!("{x} -> {y} not within one of floor {floor}"),
    )?;
    ensure(y == 0 || (y < 0) == (x < 0), || "sign flipped".into())?;
    ensure(scale_three_quarters(-x) == -y, || "not odd".into())?;
    ensure(i64::from(y).abs() <= m, || "grew".into())
}

pub fn syndrome_case() -> impl Strategy<Value = (usize, usize, Vec<u8>, Vec<u8>)> {
    (1usize..=16, 1usize..=32).prop_flat_map(|(m, n)| {
        (
            Just(m),
            Just(n),
            prop::collection::vec(prop::bool::weighted(0.3).prop_map(u8::from), m * n),
            prop::collection::vec(prop_oneof![3 => Just(0u8), 1 => Just(1u8)], n),
        )
    })
}

pub fn check_syndrome(m: usize, n: usize, data: &[u8], bits: &[u8]) -> Result<(), TestCaseError> {
    let h = ParityCheckMatrix::from_dense(m, n, data).unwrap();
    let rows: Vec<Vec<u8>> = data.chunks(n).map(|r| r.to_vec()).collect();
    let expect = dense_syndrome_zero(&rows, bits);
    ensure(h.syndrome_ok(bits).unwrap() == expect, || "syndrome disagrees with dense product".into())
}

pub fn check_vnu(intrinsic: Msg, r: &[Msg], bits: u32, extra_acc: u32) -> Result<(), TestCaseError> {
    let fmt = FixedPointFormat::new(bits, 0.5).unwrap().with_accumulator_bits(bits + 2 + extra_acc);
    let got = column_ldpc::kernel::vertical_update(intrinsic, r, &fmt, column_ldpc::fixed::Scaling::ThreeQuarters);
    let rs: Vec<SM> = r.iter().map(|&x| SM::of(x)).collect();
    let (ls, total) = Arith::new(&fmt).vnu(SM::of(intrinsic), &rs);
    let ls: Vec<Msg> = ls.into_iter().map(SM::to_msg).collect();
    ensure(got.lcv == ls, || format!("L {:?} vs oracle {ls:?}", got.lcv))?;
    ensure(i64::from(got.total) == total, || format!("total {} vs oracle {total}", got.total))
}

pub fn vnu_case() -> impl Strategy<Value = (Msg, Vec<Msg>, u32, u32)> {
    (3u32..=8, 0u32..=6).prop_flat_map(|(bits, extra)| {
        let max = ((1u32 << (bits - 1)) - 1) as u16;
        (
            msg_strategy(max),
            prop::collection::vec(msg_strategy(max), 1..=8),
            Just(bits),
            Just(extra),
        )
    })
}

// ---------------------------------------------------------- census oracle

/// Per-iteration counts of the five update classes, in the order Type I,
/// new min1, new min2, new min3, discarded.
pub type ClassCounts = Vec<[u64; 5]>;

/// Replays a three-min (capacity `cap`) incremental decode from its message
/// trace with a separate list-based vector per check. Checks that every
/// traced R equals the replayed vector's R and returns the event counts.
/// Requires each check to meet each column layer at most once.
pub fn census_replay(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    trace: &[column_ldpc::decoders::TraceEntry],
    cap: usize,
    simplified: bool,
) -> Result<ClassCounts, String> {
    struct Check {
        entries: Vec<(u16, usize)>,
        neg: bool,
        edge_neg: std::collections::HashMap<usize, bool>,
    }
    let layer = |v: usize| h.layer_of_column(v);
    let mut checks: Vec<Check> = (0..h.m())
        .map(|c| {
            let mut entries: Vec<(u16, usize)> = Vec::new();
            let mut neg = false;
            let mut edge_neg = std::collections::HashMap::new();
            for &v in h.check_neighbors(c) {
                let m = llrs[v];
                neg ^= m.sign == Sign::Minus;
                edge_neg.insert(v, m.sign == Sign::Minus);
                let pos = entries.iter().position(|e| e.0 > m.mag).unwrap_or(entries.len());
                entries.insert(pos, (m.mag, layer(v)));
                entries.truncate(cap);
            }
            Check { entries, neg, edge_neg }
        })
        .collect();
    let mut counts: ClassCounts = Vec::new();
    for t in trace {
        if counts.len() < t.iteration {
            counts.resize(t.iteration, [0; 5]);
        }
        let ck = &mut checks[t.check];
        let key = layer(t.var);
        let old_neg = ck.edge_neg[&t.var];
        let removed = match ck.entries.iter().position(|e| e.1 == key) {
            Some(p) => {
                ck.entries.remove(p);
                true
            }
            None => false,
        };
        let tmp_neg = ck.neg ^ old_neg;
        let expect = ck.entries.first().map(|e| SM { neg: tmp_neg, mag: i64::from(e.0) });
        if expect.map(SM::to_msg) != Some(t.rcv) {
            return Err(format!("R mismatch at {t:?}: replay {expect:?}"));
        }
        let mag = t.lcv.mag;
        let full = ck.entries.len() == cap;
        let window = if !full {
            ck.entries.len()
        } else if simplified {
            cap - 1
        } else {
            cap
        };
        let pos = ck.entries[..window].iter().position(|e| e.0 > mag).unwrap_or(window);
        let class = if !full || pos < window {
            if full {
                ck.entries.pop();
            }
            ck.entries.insert(pos, (mag, key));
            if removed {
                0
            } else {
                (pos + 1).min(3)
            }
        } else if removed {
            return Err("removal left a full vector".into());
        } else {
            4
        };
        counts[t.iteration - 1][class] += 1;
        let new_neg = t.lcv.sign == Sign::Minus;
        ck.neg = tmp_neg ^ new_neg;
        ck.edge_neg.insert(t.var, new_neg);
    }
    Ok(counts)
}

pub fn counts_of(counters: &column_ldpc::census::EventCounters) -> ClassCounts {
    use column_ldpc::census::EventClass;
    (1..=counters.iterations())
        .map(|it| {
            let mut row = [0; 5];
            for (k, class) in EventClass::ALL.iter().enumerate() {
                row[k] = counters.count(it, *class);
            }
            row
        })
        .collect()
}
