//! Monte-Carlo harness: FER sweeps, event census runs and lockstep
//! equivalence checks over the all-zero codeword.
//!
//! Frame `i` at SNR index `s` always draws its noise from
//! [`frame_seed`]`(master_seed, s, i)`. Frames are decoded in parallel
//! chunks and tallied strictly in frame order, so every result is
//! independent of the worker count.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::census::{CensusRow, EventCounters};
use crate::channel::{frame_seed, quantized_frame, NoiseSpec};
use crate::code::ParityCheckMatrix;
use crate::decoders::{decode, decode_with, DecodeConfig, TraceEntry, Variant};
use crate::error::{DecodeError, SimError};
use crate::kernel::UpdateMode;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub variant: Variant,
    pub decode: DecodeConfig,
    /// Eb/N0 points in dB; `f64::INFINITY` is a noiseless channel.
    pub snr_points: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub master_seed: u64,
    /// Worker threads; 0 lets rayon choose.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            variant: Variant::ColumnIncremental,
            decode: DecodeConfig::default(),
            snr_points: vec![4.0],
            min_frame_errors: 50,
            max_frames: 1_000_000,
            master_seed: 1,
            workers: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, h: &ParityCheckMatrix) -> Result<(), SimError> {
        if self.min_frame_errors == 0 {
            return Err(SimError::Config("min_frame_errors must be at least 1".into()));
        }
        if self.snr_points.is_empty() {
            return Err(SimError::Config("no SNR points".into()));
        }
        if self.max_frames < self.min_frame_errors {
            return Err(SimError::Config(format!(
                "max_frames {} below min_frame_errors {}",
                self.max_frames, self.min_frame_errors
            )));
        }
        self.decode
            .validate(h, self.variant)
            .map_err(|e| SimError::Config(e.to_string()))?;
        for &snr in &self.snr_points {
            NoiseSpec::new(snr, h.design_rate())?;
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, SimError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| SimError::Config(format!("thread pool: {e}")))
    }
}

/// Tallies for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FerPoint {
    pub snr_db: f64,
    pub frames: u64,
    /// Detected plus undetected errors.
    pub frame_errors: u64,
    /// Frames that converged to a wrong codeword.
    pub undetected_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub avg_iter: f64,
    /// Empty when no frame converged.
    pub avg_iter_converged: Option<f64>,
    #[serde(skip)]
    pub iterations_sum: u64,
    #[serde(skip)]
    pub iterations_sq_sum: u64,
}

impl FerPoint {
    /// Two-sided Clopper-Pearson interval for the frame error rate.
    pub fn fer_interval(&self, confidence: f64) -> (f64, f64) {
        clopper_pearson(self.frame_errors, self.frames, confidence)
    }

    /// Sample standard deviation of the per-frame iteration count.
    pub fn iter_std(&self) -> f64 {
        if self.frames < 2 {
            return 0.0;
        }
        let n = self.frames as f64;
        let mean = self.iterations_sum as f64 / n;
        ((self.iterations_sq_sum as f64 - n * mean * mean) / (n - 1.0)).max(0.0).sqrt()
    }
}

/// Exact binomial confidence interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let a = (1.0 - confidence) / 2.0;
    let (kf, nf) = (k as f64, n as f64);
    let lower = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0).map_or(0.0, |b| b.inverse_cdf(a))
    };
    let upper = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf).map_or(1.0, |b| b.inverse_cdf(1.0 - a))
    };
    (lower, upper)
}

#[derive(Debug, Clone, Copy)]
struct FrameOutcome {
    error: bool,
    undetected: bool,
    bit_errors: u64,
    iterations: u64,
    converged: bool,
}

#[derive(Default)]
struct Tally {
    frames: u64,
    errors: u64,
    undetected: u64,
    bit_errors: u64,
    iterations: u64,
    iterations_sq: u64,
    converged: u64,
    converged_iterations: u64,
}

impl Tally {
    fn add(&mut self, o: &FrameOutcome) {
        self.frames += 1;
        self.errors += u64::from(o.error);
        self.undetected += u64::from(o.undetected);
        self.bit_errors += o.bit_errors;
        self.iterations += o.iterations;
        self.iterations_sq += o.iterations * o.iterations;
        if o.converged {
            self.converged += 1;
            self.converged_iterations += o.iterations;
        }
    }

    fn point(&self, snr_db: f64, n: usize) -> FerPoint {
        let frames = self.frames.max(1) as f64;
        FerPoint {
            snr_db,
            frames: self.frames,
            frame_errors: self.errors,
            undetected_errors: self.undetected,
            bit_errors: self.bit_errors,
            fer: self.errors as f64 / frames,
            ber: self.bit_errors as f64 / (frames * n as f64),
            avg_iter: self.iterations as f64 / frames,
            avg_iter_converged: (self.converged > 0)
                .then(|| self.converged_iterations as f64 / self.converged as f64),
            iterations_sum: self.iterations,
            iterations_sq_sum: self.iterations_sq,
        }
    }
}

const FIRST_CHUNK: u64 = 64;
const MAX_CHUNK: u64 = 8192;

fn decode_frame(
    h: &ParityCheckMatrix,
    cfg: &SimConfig,
    noise: &NoiseSpec,
    snr_index: usize,
    frame: u64,
) -> Result<FrameOutcome, SimError> {
    let seed = frame_seed(cfg.master_seed, snr_index, frame);
    let llrs = quantized_frame(h.n(), noise, &cfg.decode.fmt, seed);
    let out = decode_with(cfg.variant, h, &llrs, &cfg.decode, &mut ()).map_err(|source| SimError::Decode {
        snr_index,
        frame,
        seed,
        source,
    })?;
    let bit_errors = out.bit_errors() as u64;
    Ok(FrameOutcome {
        error: !out.converged || bit_errors > 0,
        undetected: out.converged && bit_errors > 0,
        bit_errors,
        iterations: out.iterations_used as u64,
        converged: out.converged,
    })
}

/// FER/BER for every SNR point, stopping each point at `min_frame_errors`
/// frame errors or `max_frames` frames, whichever comes first.
pub fn run_fer_sweep(h: &ParityCheckMatrix, cfg: &SimConfig) -> Result<Vec<FerPoint>, SimError> {
    cfg.validate(h)?;
    let pool = cfg.pool()?;
    let mut points = Vec::with_capacity(cfg.snr_points.len());
    for (snr_index, &snr) in cfg.snr_points.iter().enumerate() {
        let noise = NoiseSpec::new(snr, h.design_rate())?;
        let mut tally = Tally::default();
        let mut chunk = FIRST_CHUNK;
        'point: while tally.frames < cfg.max_frames {
            let start = tally.frames;
            let end = (start + chunk).min(cfg.max_frames);
            let outcomes: Vec<Result<FrameOutcome, SimError>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|f| decode_frame(h, cfg, &noise, snr_index, f))
                    .collect()
            });
            for o in outcomes {
                tally.add(&o?);
                if tally.errors >= cfg.min_frame_errors {
                    break 'point;
                }
            }
            chunk = (chunk * 2).min(MAX_CHUNK);
        }
        log::info!(
            "{snr} dB: {} frames, {} errors",
            tally.frames,
            tally.errors
        );
        points.push(tally.point(snr, h.n()));
    }
    Ok(points)
}

/// Comment header followed by the FER rows as CSV.
pub fn write_fer_csv<W: Write>(
    mut w: W,
    metadata: &[(&str, String)],
    points: &[FerPoint],
) -> Result<(), SimError> {
    for (k, v) in metadata {
        writeln!(w, "# {k}: {v}")?;
    }
    writeln!(
        w,
        "# frame_errors: non-converged frames plus converged frames with bit errors (undetected_errors)"
    )?;
    let mut csv = csv::Writer::from_writer(w);
    for p in points {
        csv.serialize(p)?;
    }
    csv.flush()?;
    Ok(())
}

/// Per-iteration event census over `frames` frames at `snr_db`. Only frames
/// still decoding when an iteration starts contribute to it.
pub fn run_census(
    h: &ParityCheckMatrix,
    cfg: &SimConfig,
    snr_db: f64,
    frames: u64,
) -> Result<EventCounters, SimError> {
    if !cfg.variant.uses_vectors()
        || !matches!(cfg.decode.mode, UpdateMode::ThreeMin | UpdateMode::Simplified)
    {
        return Err(SimError::Config(format!(
            "census needs a column-layered three-min or simplified decoder, got {} ({})",
            cfg.variant,
            cfg.decode.mode.name()
        )));
    }
    cfg.decode
        .validate(h, cfg.variant)
        .map_err(|e| SimError::Config(e.to_string()))?;
    let noise = NoiseSpec::new(snr_db, h.design_rate())?;
    let pool = cfg.pool()?;
    pool.install(|| {
        (0..frames)
            .into_par_iter()
            .map(|f| {
                let seed = frame_seed(cfg.master_seed, 0, f);
                let llrs = quantized_frame(h.n(), &noise, &cfg.decode.fmt, seed);
                let mut counters = EventCounters::default();
                decode_with(cfg.variant, h, &llrs, &cfg.decode, &mut counters).map_err(|source| {
                    SimError::Decode {
                        snr_index: 0,
                        frame: f,
                        seed,
                        source,
                    }
                })?;
                Ok(counters)
            })
            .try_reduce(EventCounters::default, |mut a, b| {
                a.merge(&b);
                Ok(a)
            })
    })
}

pub fn write_census_csv<W: Write>(
    mut w: W,
    metadata: &[(&str, String)],
    rows: &[CensusRow],
) -> Result<(), SimError> {
    for (k, v) in metadata {
        writeln!(w, "# {k}: {v}")?;
    }
    writeln!(w, "# frames_counted: frames still decoding when the iteration began")?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

/// Where two decoders first disagreed.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub frame: u64,
    pub seed: u64,
    /// First differing trace entries; `None` on the side whose trace ended.
    pub reference: Option<TraceEntry>,
    pub candidate: Option<TraceEntry>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub frames_checked: u64,
    pub divergence: Option<Divergence>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

/// One side of an equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderSetup {
    pub variant: Variant,
    pub config: DecodeConfig,
}

impl DecoderSetup {
    pub fn new(variant: Variant, config: DecodeConfig) -> Self {
        DecoderSetup { variant, config }
    }
}

fn first_difference(
    frame: u64,
    seed: u64,
    a: Result<crate::decoders::DecodeResult, DecodeError>,
    b: Result<crate::decoders::DecodeResult, DecodeError>,
) -> Option<Divergence> {
    let div = |reference, candidate, detail: String| {
        Some(Divergence {
            frame,
            seed,
            reference,
            candidate,
            detail,
        })
    };
    let (a, b) = match (a, b) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(x), Err(y)) if x == y => return None,
        (x, y) => {
            return div(None, None, format!("outcomes differ: {:?} vs {:?}", x.err(), y.err()));
        }
    };
    let (ta, tb) = (a.trace.unwrap_or_default(), b.trace.unwrap_or_default());
    for i in 0..ta.len().max(tb.len()) {
        let (x, y) = (ta.get(i).copied(), tb.get(i).copied());
        if x != y {
            return div(x, y, format!("trace entry {i}"));
        }
    }
    if a.iterations_used != b.iterations_used {
        return div(
            None,
            None,
            format!("iterations {} vs {}", a.iterations_used, b.iterations_used),
        );
    }
    if a.bits != b.bits {
        return div(None, None, "hard decisions differ".into());
    }
    if a.counters != b.counters {
        return div(None, None, "event census differs".into());
    }
    None
}

/// Decode `frames` frames at `snr_db` with both setups, tracing every
/// message, and report the first frame (in frame order) where traces, hard
/// decisions or iteration counts differ.
pub fn run_equivalence_check(
    h: &ParityCheckMatrix,
    reference: &DecoderSetup,
    candidate: &DecoderSetup,
    snr_db: f64,
    frames: u64,
    master_seed: u64,
) -> Result<EquivalenceReport, SimError> {
    let traced = |s: &DecoderSetup| DecoderSetup {
        variant: s.variant,
        config: DecodeConfig {
            record_trace: true,
            ..s.config.clone()
        },
    };
    let (r, c) = (traced(reference), traced(candidate));
    for s in [&r, &c] {
        s.config
            .validate(h, s.variant)
            .map_err(|e| SimError::Config(e.to_string()))?;
    }
    let noise = NoiseSpec::new(snr_db, h.design_rate())?;
    let divergence = (0..frames).into_par_iter().find_map_first(|f| {
        let seed = frame_seed(master_seed, 0, f);
        let llrs = quantized_frame(h.n(), &noise, &r.config.fmt, seed);
        first_difference(
            f,
            seed,
            decode(r.variant, h, &llrs, &r.config),
            decode(c.variant, h, &llrs, &c.config),
        )
    });
    Ok(EquivalenceReport {
        frames_checked: divergence.as_ref().map_or(frames, |d| d.frame + 1),
        divergence,
    })
}
