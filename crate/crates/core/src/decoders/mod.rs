//! Complete decoding schedules over a [`ParityCheckMatrix`].
//!
//! * [`decode_flooding`]: two-phase scaled Min-Sum
//! * [`decode_row_layered`]: row layers processed in sequence
//! * [`decode_column_original`]: column layers, check messages rescanned
//!   from stored variable-to-check messages
//! * [`decode_column_incremental`]: column layers over per-check sorted
//!   vectors updated by Step-A removal and Step-B insertion
//! * [`decode_column_pipelined`]: the incremental decoder with check messages
//!   for layer `g + P` read from the vectors as of layer `g - 1`
//!
//! All variants share the fixed-point variable node update and evaluate the
//! syndrome once per full iteration.

mod column;
mod flooding;
mod incremental;
mod pipelined;
mod row;

use std::fmt;
use std::str::FromStr;

use crate::census::{EventClass, EventCounters};
use crate::code::ParityCheckMatrix;
use crate::error::DecodeError;
use crate::fixed::{FixedPointFormat, Msg, Scaling};
use crate::kernel::{totals_to_bits, Capacity, UpdateMode};

/// Decoding schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Flooding,
    RowLayered,
    ColumnOriginal,
    ColumnIncremental,
    ColumnPipelined,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Flooding,
        Variant::RowLayered,
        Variant::ColumnOriginal,
        Variant::ColumnIncremental,
        Variant::ColumnPipelined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Flooding => "flooding",
            Variant::RowLayered => "row",
            Variant::ColumnOriginal => "col-original",
            Variant::ColumnIncremental => "col-incremental",
            Variant::ColumnPipelined => "col-pipelined",
        }
    }

    /// Whether the variant maintains sorted vectors (and so honors `mode`,
    /// `vector_capacity`, and produces a census).
    pub fn uses_vectors(self) -> bool {
        matches!(self, Variant::ColumnIncremental | Variant::ColumnPipelined)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown decoder {s:?}"))
    }
}

impl FromStr for UpdateMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(UpdateMode::Exact),
            "three-min" | "three_min" => Ok(UpdateMode::ThreeMin),
            "simplified" => Ok(UpdateMode::Simplified),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl UpdateMode {
    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Exact => "exact",
            UpdateMode::ThreeMin => "three-min",
            UpdateMode::Simplified => "simplified",
        }
    }
}

/// Mutation hooks for harness sensitivity checks.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Step-A forgets to divide the old edge sign out of the sign product.
    StepAKeepsOldSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeConfig {
    pub max_iterations: usize,
    pub alpha: f64,
    pub vector_capacity: Capacity,
    pub mode: UpdateMode,
    pub pipeline_depth: usize,
    pub early_termination: bool,
    pub fmt: FixedPointFormat,
    /// Treat a vector emptied by Step-A as magnitude 0 instead of aborting.
    pub empty_vector_as_zero: bool,
    pub record_trace: bool,
    pub collect_census: bool,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            max_iterations: 10,
            alpha: 0.75,
            vector_capacity: Capacity::Entries(3),
            mode: UpdateMode::ThreeMin,
            pipeline_depth: 0,
            early_termination: true,
            fmt: FixedPointFormat::default(),
            empty_vector_as_zero: false,
            record_trace: false,
            collect_census: false,
            fault: None,
        }
    }
}

impl DecodeConfig {
    /// Full-capacity exact vectors.
    pub fn exact() -> Self {
        DecodeConfig {
            vector_capacity: Capacity::Full,
            mode: UpdateMode::Exact,
            ..Default::default()
        }
    }

    pub fn scaling(&self) -> Scaling {
        Scaling::from_alpha(self.alpha)
    }

    pub fn validate(&self, h: &ParityCheckMatrix, variant: Variant) -> Result<(), DecodeError> {
        let err = |m: String| Err(DecodeError::Config(m));
        if self.max_iterations == 0 {
            return err("max_iterations must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return err(format!("alpha {} outside (0, 1]", self.alpha));
        }
        self.fmt.validate_for_degree(h.max_var_degree())?;
        if h.num_layers() == 0 {
            return err("matrix has no columns".into());
        }
        if variant.uses_vectors() {
            if self.vector_capacity == Capacity::Entries(0) {
                return err("vector capacity must be at least 1".into());
            }
            let covers_all = match self.vector_capacity {
                Capacity::Full => true,
                Capacity::Entries(l) => l >= h.max_check_degree(),
            };
            if self.mode == UpdateMode::Exact && !covers_all {
                return err("exact mode needs capacity equal to the check degree".into());
            }
            if self.mode == UpdateMode::Simplified && matches!(self.vector_capacity, Capacity::Entries(1)) {
                return err("simplified mode needs capacity of at least 2".into());
            }
        }
        if variant == Variant::ColumnPipelined && self.pipeline_depth >= h.num_layers() {
            return err(format!(
                "pipeline depth {} must be below the layer count {}",
                self.pipeline_depth,
                h.num_layers()
            ));
        }
        Ok(())
    }
}

/// One variable node output: the check message it consumed and the
/// variable-to-check message it produced on that edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceEntry {
    pub iteration: usize,
    pub layer: usize,
    pub check: usize,
    pub var: usize,
    pub rcv: Msg,
    pub lcv: Msg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Hard decisions, one 0/1 per variable.
    pub bits: Vec<u8>,
    /// The hard decisions satisfy every check.
    pub converged: bool,
    pub iterations_used: usize,
    pub counters: EventCounters,
    pub trace: Option<Vec<TraceEntry>>,
    /// A valid codeword was reached and later left again (only possible with
    /// early termination off).
    pub left_codeword: bool,
}

impl DecodeResult {
    pub fn bit_errors(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }
}

/// Hooks called while decoding. Default methods do nothing, so a `()`
/// observer costs nothing after monomorphization.
pub trait DecodeObserver {
    fn begin_iteration(&mut self, _iteration: usize, _checks: usize) {}
    fn vector_update(&mut self, _iteration: usize, _check: usize, _class: EventClass) {}
    fn message(&mut self, _entry: &TraceEntry) {}
}

impl DecodeObserver for () {}

impl DecodeObserver for EventCounters {
    fn begin_iteration(&mut self, iteration: usize, checks: usize) {
        EventCounters::begin_iteration(self, iteration, checks);
    }

    fn vector_update(&mut self, iteration: usize, _check: usize, class: EventClass) {
        self.record(iteration, class);
    }
}

impl DecodeObserver for Vec<TraceEntry> {
    fn message(&mut self, entry: &TraceEntry) {
        self.push(*entry);
    }
}

/// Observer assembled from the config's census and trace switches.
#[derive(Debug, Default)]
struct Recorder {
    census: Option<EventCounters>,
    trace: Option<Vec<TraceEntry>>,
}

impl DecodeObserver for Recorder {
    fn begin_iteration(&mut self, iteration: usize, checks: usize) {
        if let Some(c) = self.census.as_mut() {
            c.begin_iteration(iteration, checks);
        }
    }

    fn vector_update(&mut self, iteration: usize, _check: usize, class: EventClass) {
        if let Some(c) = self.census.as_mut() {
            c.record(iteration, class);
        }
    }

    fn message(&mut self, entry: &TraceEntry) {
        if let Some(t) = self.trace.as_mut() {
            t.push(*entry);
        }
    }
}

/// Per-iteration syndrome bookkeeping shared by every schedule.
pub(crate) struct Stopper<'a> {
    h: &'a ParityCheckMatrix,
    early: bool,
    seen_codeword: bool,
    left_codeword: bool,
}

impl<'a> Stopper<'a> {
    pub(crate) fn new(h: &'a ParityCheckMatrix, early: bool) -> Self {
        Stopper {
            h,
            early,
            seen_codeword: false,
            left_codeword: false,
        }
    }

    /// Returns true when decoding should stop after this iteration.
    pub(crate) fn end_iteration(&mut self, iteration: usize, total: &[i32]) -> bool {
        let ok = self.h.syndrome_ok_unchecked(&totals_to_bits(total));
        if ok {
            self.seen_codeword = true;
        } else if self.seen_codeword && !self.left_codeword {
            self.left_codeword = true;
            log::warn!("iteration {iteration}: hard decisions left a valid codeword");
        }
        ok && self.early
    }

    pub(crate) fn finish(self, total: &[i32], iterations_used: usize) -> DecodeResult {
        let bits = totals_to_bits(total);
        let converged = self.h.syndrome_ok_unchecked(&bits);
        DecodeResult {
            bits,
            converged,
            iterations_used,
            counters: EventCounters::default(),
            trace: None,
            left_codeword: self.left_codeword,
        }
    }
}

fn check_llrs(h: &ParityCheckMatrix, llrs: &[Msg], config: &DecodeConfig) -> Result<(), DecodeError> {
    if llrs.len() != h.n() {
        return Err(DecodeError::LengthMismatch {
            got: llrs.len(),
            expected: h.n(),
        });
    }
    let max = config.fmt.magnitude_max();
    if let Some(bad) = llrs.iter().find(|m| m.mag > max) {
        return Err(DecodeError::Config(format!(
            "channel message {bad} exceeds the format's magnitude limit {max}"
        )));
    }
    Ok(())
}

/// Run `variant` with a caller-supplied observer. The returned result has
/// empty counters and no trace; the observer holds whatever it collected.
pub fn decode_with<O: DecodeObserver>(
    variant: Variant,
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
    obs: &mut O,
) -> Result<DecodeResult, DecodeError> {
    config.validate(h, variant)?;
    check_llrs(h, llrs, config)?;
    match variant {
        Variant::Flooding => flooding::run(h, llrs, config, obs),
        Variant::RowLayered => row::run(h, llrs, config, obs),
        Variant::ColumnOriginal => column::run(h, llrs, config, obs),
        Variant::ColumnIncremental => incremental::run(h, llrs, config, obs),
        Variant::ColumnPipelined => pipelined::run(h, llrs, config, obs),
    }
}

/// Run `variant`, collecting the census and trace when the config asks.
pub fn decode(
    variant: Variant,
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
) -> Result<DecodeResult, DecodeError> {
    let mut rec = Recorder {
        census: config.collect_census.then(EventCounters::default),
        trace: config.record_trace.then(Vec::new),
    };
    let mut result = decode_with(variant, h, llrs, config, &mut rec)?;
    result.counters = rec.census.unwrap_or_default();
    result.trace = rec.trace;
    Ok(result)
}

pub fn decode_flooding(h: &ParityCheckMatrix, llrs: &[Msg], config: &DecodeConfig) -> Result<DecodeResult, DecodeError> {
    decode(Variant::Flooding, h, llrs, config)
}

pub fn decode_row_layered(h: &ParityCheckMatrix, llrs: &[Msg], config: &DecodeConfig) -> Result<DecodeResult, DecodeError> {
    decode(Variant::RowLayered, h, llrs, config)
}

pub fn decode_column_original(h: &ParityCheckMatrix, llrs: &[Msg], config: &DecodeConfig) -> Result<DecodeResult, DecodeError> {
    decode(Variant::ColumnOriginal, h, llrs, config)
}

pub fn decode_column_incremental(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
) -> Result<DecodeResult, DecodeError> {
    decode(Variant::ColumnIncremental, h, llrs, config)
}

pub fn decode_column_pipelined(
    h: &ParityCheckMatrix,
    llrs: &[Msg],
    config: &DecodeConfig,
) -> Result<DecodeResult, DecodeError> {
    decode(Variant::ColumnPipelined, h, llrs, config)
}

/// Check-to-variable message for an edge whose vector has nothing left:
/// magnitude 0 if configured, else abort.
pub(crate) fn empty_rcv(config: &DecodeConfig, check: usize, sign: crate::fixed::Sign) -> Result<Msg, DecodeError> {
    if config.empty_vector_as_zero {
        Ok(Msg::new(sign, 0))
    } else {
        Err(DecodeError::EmptyVector { check })
    }
}
