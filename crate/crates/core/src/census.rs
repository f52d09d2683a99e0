//! Sorted-vector update census and the analytic complexity and throughput
//! models for the three-min column-layered decoder.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fixed::ceil_log2;
use crate::kernel::Placement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid model parameters: {0}")]
pub struct ModelError(pub String);

/// Outcome class of one Step-B update of a check's sorted vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventClass {
    /// Step-A removed the edge's old entry; the new value was then merged.
    TypeIRemovedAndInserted,
    /// Nothing removed; the new value became the smallest entry.
    KeptFullNewIsMin1,
    KeptFullNewIsMin2,
    /// Nothing removed; the new value landed third (or later, for vectors
    /// longer than three).
    KeptFullNewIsMin3,
    /// Nothing removed and the new value was dropped.
    Discarded,
}

impl EventClass {
    pub const ALL: [EventClass; 5] = [
        EventClass::TypeIRemovedAndInserted,
        EventClass::KeptFullNewIsMin1,
        EventClass::KeptFullNewIsMin2,
        EventClass::KeptFullNewIsMin3,
        EventClass::Discarded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventClass::TypeIRemovedAndInserted => "type_i_removed_and_inserted",
            EventClass::KeptFullNewIsMin1 => "kept_full_new_is_min1",
            EventClass::KeptFullNewIsMin2 => "kept_full_new_is_min2",
            EventClass::KeptFullNewIsMin3 => "kept_full_new_is_min3",
            EventClass::Discarded => "discarded",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EventClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_event(removed: bool, placement: Placement) -> EventClass {
    if removed {
        return EventClass::TypeIRemovedAndInserted;
    }
    match placement {
        Placement::Inserted(1) => EventClass::KeptFullNewIsMin1,
        Placement::Inserted(2) => EventClass::KeptFullNewIsMin2,
        Placement::Inserted(_) => EventClass::KeptFullNewIsMin3,
        Placement::Discarded => EventClass::Discarded,
    }
}

/// Event totals for one decoding iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IterationTally {
    pub counts: [u64; 5],
    /// Frames that ran this iteration.
    pub frames: u64,
    /// Σ over those frames of the number of checks.
    pub check_samples: u64,
}

/// Per-iteration event tallies, mergeable across frames and workers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventCounters {
    per_iteration: Vec<IterationTally>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub iteration: usize,
    pub event_class: &'static str,
    pub average_per_check: f64,
    pub frames_counted: u64,
}

impl EventCounters {
    fn slot(&mut self, iteration: usize) -> &mut IterationTally {
        assert!(iteration >= 1, "iterations are 1-based");
        if self.per_iteration.len() < iteration {
            self.per_iteration.resize(iteration, IterationTally::default());
        }
        &mut self.per_iteration[iteration - 1]
    }

    /// Register that one frame with `checks` check nodes entered `iteration`.
    pub fn begin_iteration(&mut self, iteration: usize, checks: usize) {
        let t = self.slot(iteration);
        t.frames += 1;
        t.check_samples += checks as u64;
    }

    pub fn record(&mut self, iteration: usize, class: EventClass) {
        self.slot(iteration).counts[class.slot()] += 1;
    }

    pub fn merge(&mut self, other: &EventCounters) {
        for (i, t) in other.per_iteration.iter().enumerate() {
            let mine = self.slot(i + 1);
            for k in 0..5 {
                mine.counts[k] += t.counts[k];
            }
            mine.frames += t.frames;
            mine.check_samples += t.check_samples;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.per_iteration.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.per_iteration.len()
    }

    pub fn tally(&self, iteration: usize) -> Option<&IterationTally> {
        iteration.checked_sub(1).and_then(|i| self.per_iteration.get(i))
    }

    pub fn count(&self, iteration: usize, class: EventClass) -> u64 {
        self.tally(iteration).map_or(0, |t| t.counts[class.slot()])
    }

    /// Average number of events of `class` per check in `iteration`, over
    /// the frames that ran that iteration.
    pub fn average(&self, iteration: usize, class: EventClass) -> Option<f64> {
        let t = self.tally(iteration)?;
        (t.check_samples > 0).then(|| t.counts[class.slot()] as f64 / t.check_samples as f64)
    }

    pub fn rows(&self) -> Vec<CensusRow> {
        let mut rows = Vec::new();
        for (i, t) in self.per_iteration.iter().enumerate() {
            if t.frames == 0 {
                continue;
            }
            for class in EventClass::ALL {
                rows.push(CensusRow {
                    iteration: i + 1,
                    event_class: class.name(),
                    average_per_check: t.counts[class.slot()] as f64 / t.check_samples as f64,
                    frames_counted: t.frames,
                });
            }
        }
        rows
    }
}

/// Fraction of check node comparators saved going from `d_c - 2`
/// comparators (full-vector update) to 2 (simplified three-min).
pub fn comparator_savings(check_degree: usize) -> Result<f64, ModelError> {
    if check_degree < 4 {
        return Err(ModelError(format!("check degree {check_degree} < 4")));
    }
    let full = (check_degree - 2) as f64;
    Ok((full - 2.0) / full)
}

/// Bits per three-entry sorted vector: three magnitudes of `q - 1` bits,
/// three indices, and the sign product.
pub fn vector_bits(message_bits: u32, index_bits: u32) -> u32 {
    3 * ((message_bits - 1) + index_bits) + 1
}

/// Fraction of extrinsic message memory saved by storing one sorted vector
/// plus per-edge sign bits instead of `d_c` full messages per check.
pub fn memory_savings(check_degree: usize, message_bits: u32, index_bits: u32) -> Result<f64, ModelError> {
    if message_bits < 2 {
        return Err(ModelError(format!("message width {message_bits} < 2")));
    }
    if check_degree == 0 {
        return Err(ModelError("check degree 0".into()));
    }
    let need = ceil_log2(check_degree as u64);
    if index_bits < need.max(1) {
        return Err(ModelError(format!(
            "index width {index_bits} cannot address {check_degree} layers"
        )));
    }
    let full = (check_degree as u32 * message_bits) as f64;
    let kept = check_degree as f64 + f64::from(vector_bits(message_bits, index_bits));
    Ok((full - kept) / full)
}

/// Cycle-count model of a block-column-serial decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputModel {
    pub f_clk: f64,
    pub info_bits: u64,
    pub init_cycles: u64,
    pub iter_cycles: u64,
    pub pipeline_cycles: u64,
}

impl ThroughputModel {
    /// One cycle per layer to build the initial vectors, one per layer per
    /// iteration, and `pipeline_depth` cycles of latency per codeword.
    pub fn for_code(
        f_clk: f64,
        n: u64,
        m: u64,
        layers: u64,
        max_iterations: u64,
        pipeline_depth: u64,
    ) -> Result<Self, ModelError> {
        let model = ThroughputModel {
            f_clk,
            info_bits: n.saturating_sub(m),
            init_cycles: layers,
            iter_cycles: layers * max_iterations,
            pipeline_cycles: pipeline_depth,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.f_clk.is_nan() || self.f_clk <= 0.0 || self.info_bits == 0 || self.init_cycles == 0 || self.iter_cycles == 0 {
            return Err(ModelError(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn total_cycles(&self) -> u64 {
        self.init_cycles + self.iter_cycles + self.pipeline_cycles
    }

    /// Information bits per second.
    pub fn throughput(&self) -> f64 {
        self.f_clk * self.info_bits as f64 / self.total_cycles() as f64
    }
}
