//! Python bindings: code construction, fixed-point decoding, the AWGN
//! channel, FER sweeps, the update census and the analytic models.

use column_ldpc::census::{self, EventCounters, ThroughputModel};
use column_ldpc::channel::{self, NoiseSpec};
use column_ldpc::code::{self as code_mod, QcBase};
use column_ldpc::decoders::{DecodeConfig, DecodeResult, Variant};
use column_ldpc::kernel::{Capacity, UpdateMode};
use column_ldpc::sim::{self, DecoderSetup, FerPoint, SimConfig};
use column_ldpc::{fixed, FixedPointFormat, Msg};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "ParityCheckMatrix", module = "column_ldpc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: column_ldpc::ParityCheckMatrix,
}

#[pymethods]
impl PyMatrix {
    /// `wimax-1/2`, `random-qc:ROWS,COLS,Z,SEED`, `alist:PATH`, `qc:PATH` or a file path.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let inner = column_ldpc::ParityCheckMatrix::from_spec(spec).map_err(err)?;
        Ok(PyMatrix { inner })
    }

    #[staticmethod]
    fn from_alist(text: &str) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: code_mod::load_alist(text).map_err(err)?,
        })
    }

    /// Base matrix text: `rows cols z` then the shift grid, -1 for zero blocks.
    #[staticmethod]
    fn from_qc_text(text: &str) -> PyResult<Self> {
        let base = QcBase::parse(text).map_err(err)?;
        Ok(PyMatrix {
            inner: code_mod::expand_qc(&base),
        })
    }

    #[staticmethod]
    fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: column_ldpc::ParityCheckMatrix::from_check_neighbors(n, checks).map_err(err)?,
        })
    }

    #[staticmethod]
    fn wimax_rate_half() -> Self {
        PyMatrix {
            inner: column_ldpc::ParityCheckMatrix::wimax_rate_half(),
        }
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn num_layers(&self) -> usize {
        self.inner.num_layers()
    }

    #[getter]
    fn num_row_layers(&self) -> usize {
        self.inner.num_row_layers()
    }

    #[getter]
    fn max_check_degree(&self) -> usize {
        self.inner.max_check_degree()
    }

    #[getter]
    fn max_var_degree(&self) -> usize {
        self.inner.max_var_degree()
    }

    fn check_neighbors(&self, c: usize) -> PyResult<Vec<usize>> {
        if c >= self.inner.m() {
            return Err(PyValueError::new_err(format!("check {c} out of range")));
        }
        Ok(self.inner.check_neighbors(c).to_vec())
    }

    fn var_neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("variable {v} out of range")));
        }
        Ok(self.inner.var_neighbors(v).to_vec())
    }

    fn layer_of_column(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("variable {v} out of range")));
        }
        Ok(self.inner.layer_of_column(v))
    }

    fn syndrome_ok(&self, bits: Vec<u8>) -> PyResult<bool> {
        self.inner.syndrome_ok(&bits).map_err(err)
    }

    fn regroup_layers(&self, group_size: usize) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: self.inner.regroup_layers(group_size).map_err(err)?,
        })
    }

    fn regroup_row_layers(&self, group_size: usize) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: self.inner.regroup_row_layers(group_size).map_err(err)?,
        })
    }

    fn to_alist(&self) -> String {
        code_mod::to_alist(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "ParityCheckMatrix(m={}, n={}, layers={})",
            self.inner.m(),
            self.inner.n(),
            self.inner.num_layers()
        )
    }
}

#[pyclass(name = "DecodeConfig", module = "column_ldpc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: DecodeConfig,
}

#[pymethods]
impl PyConfig {
    /// `capacity=None` keeps every magnitude (needed by `mode="exact"`).
    #[new]
    #[pyo3(signature = (
        max_iterations = 10,
        alpha = 0.75,
        capacity = Some(3),
        mode = "three-min",
        pipeline_depth = 0,
        early_termination = true,
        message_bits = 4,
        step = 0.5,
        accumulator_bits = None,
        empty_vector_as_zero = false,
        record_trace = false,
        collect_census = false,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        max_iterations: usize,
        alpha: f64,
        capacity: Option<usize>,
        mode: &str,
        pipeline_depth: usize,
        early_termination: bool,
        message_bits: u32,
        step: f64,
        accumulator_bits: Option<u32>,
        empty_vector_as_zero: bool,
        record_trace: bool,
        collect_census: bool,
    ) -> PyResult<Self> {
        let mut fmt = FixedPointFormat::new(message_bits, step).map_err(err)?;
        if let Some(bits) = accumulator_bits {
            fmt = fmt.with_accumulator_bits(bits);
            fmt.validate().map_err(err)?;
        }
        let mode: UpdateMode = mode.parse().map_err(err)?;
        Ok(PyConfig {
            inner: DecodeConfig {
                max_iterations,
                alpha,
                vector_capacity: capacity.map_or(Capacity::Full, Capacity::Entries),
                mode,
                pipeline_depth,
                early_termination,
                fmt,
                empty_vector_as_zero,
                record_trace,
                collect_census,
                ..DecodeConfig::default()
            },
        })
    }

    /// Full-capacity exact vectors.
    #[staticmethod]
    fn exact(max_iterations: Option<usize>) -> Self {
        let mut inner = DecodeConfig::exact();
        if let Some(it) = max_iterations {
            inner.max_iterations = it;
        }
        PyConfig { inner }
    }

    #[getter]
    fn max_iterations(&self) -> usize {
        self.inner.max_iterations
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode.name()
    }

    #[getter]
    fn pipeline_depth(&self) -> usize {
        self.inner.pipeline_depth
    }

    #[getter]
    fn message_bits(&self) -> u32 {
        self.inner.fmt.message_bits
    }

    #[getter]
    fn step(&self) -> f64 {
        self.inner.fmt.step
    }

    fn validate(&self, h: &PyMatrix, variant: &str) -> PyResult<()> {
        let variant: Variant = variant.parse().map_err(err)?;
        self.inner.validate(&h.inner, variant).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

type TraceTuple = (usize, usize, usize, usize, i32, i32);

#[pyclass(name = "DecodeResult", module = "column_ldpc_py", frozen, get_all)]
struct PyDecodeResult {
    bits: Vec<u8>,
    converged: bool,
    iterations_used: usize,
    left_codeword: bool,
    /// `(iteration, layer, check, var, R, L)` per message when traced.
    trace: Option<Vec<TraceTuple>>,
    /// `(iteration, class, average per check, frames)` when the census is on.
    census: Vec<(usize, String, f64, u64)>,
}

#[pymethods]
impl PyDecodeResult {
    fn bit_errors(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    fn __repr__(&self) -> String {
        format!(
            "DecodeResult(converged={}, iterations_used={}, bit_errors={})",
            self.converged,
            self.iterations_used,
            self.bit_errors()
        )
    }
}

fn census_rows(c: &EventCounters) -> Vec<(usize, String, f64, u64)> {
    c.rows()
        .into_iter()
        .map(|r| (r.iteration, r.event_class.to_string(), r.average_per_check, r.frames_counted))
        .collect()
}

fn wrap_result(r: DecodeResult) -> PyDecodeResult {
    PyDecodeResult {
        census: census_rows(&r.counters),
        trace: r.trace.map(|t| {
            t.into_iter()
                .map(|e| (e.iteration, e.layer, e.check, e.var, e.rcv.value(), e.lcv.value()))
                .collect()
        }),
        bits: r.bits,
        converged: r.converged,
        iterations_used: r.iterations_used,
        left_codeword: r.left_codeword,
    }
}

fn config_or_default(config: Option<&PyConfig>) -> DecodeConfig {
    config.map_or_else(DecodeConfig::default, |c| c.inner.clone())
}

/// Quantize real LLRs with the config's format and decode.
#[pyfunction]
#[pyo3(signature = (variant, h, llrs, config = None))]
fn decode(py: Python<'_>, variant: &str, h: &PyMatrix, llrs: Vec<f64>, config: Option<&PyConfig>) -> PyResult<PyDecodeResult> {
    let variant: Variant = variant.parse().map_err(err)?;
    let config = config_or_default(config);
    let msgs: Vec<Msg> = llrs.iter().map(|&l| fixed::quantize(l, &config.fmt)).collect();
    let r = py
        .detach(|| column_ldpc::decode(variant, &h.inner, &msgs, &config))
        .map_err(err)?;
    Ok(wrap_result(r))
}

/// Decode already quantized integer messages.
#[pyfunction]
#[pyo3(signature = (variant, h, values, config = None))]
fn decode_quantized(
    py: Python<'_>,
    variant: &str,
    h: &PyMatrix,
    values: Vec<i32>,
    config: Option<&PyConfig>,
) -> PyResult<PyDecodeResult> {
    let variant: Variant = variant.parse().map_err(err)?;
    let config = config_or_default(config);
    let msgs: Vec<Msg> = values
        .iter()
        .map(|&v| Msg::saturating_from(v, u16::MAX))
        .collect();
    let r = py
        .detach(|| column_ldpc::decode(variant, &h.inner, &msgs, &config))
        .map_err(err)?;
    Ok(wrap_result(r))
}

#[pyfunction]
#[pyo3(signature = (llr, message_bits = 4, step = 0.5))]
fn quantize(llr: f64, message_bits: u32, step: f64) -> PyResult<i32> {
    let fmt = FixedPointFormat::new(message_bits, step).map_err(err)?;
    Ok(fixed::quantize(llr, &fmt).value())
}

#[pyfunction]
fn scale_three_quarters(x: i32) -> i32 {
    fixed::scale_three_quarters(x)
}

/// Channel LLRs of one all-zero BPSK frame at Eb/N0 `snr_db` for the code's rate.
#[pyfunction]
#[pyo3(signature = (h, snr_db, seed, frame_index = 0))]
fn channel_llrs(h: &PyMatrix, snr_db: f64, seed: u64, frame_index: u64) -> PyResult<Vec<f64>> {
    let noise = NoiseSpec::new(snr_db, h.inner.design_rate()).map_err(err)?;
    let s = channel::frame_seed(seed, 0, frame_index);
    Ok(channel::transmit_all_zero(h.inner.n(), &noise, s)
        .into_iter()
        .map(|y| channel::llr_of(y, &noise))
        .collect())
}

#[pyfunction]
fn noise_sigma(snr_db: f64, k: usize, n: usize) -> PyResult<f64> {
    Ok(NoiseSpec::new(snr_db, (k, n)).map_err(err)?.sigma)
}

#[pyclass(name = "FerPoint", module = "column_ldpc_py", frozen, get_all)]
struct PyFerPoint {
    snr_db: f64,
    frames: u64,
    frame_errors: u64,
    undetected_errors: u64,
    bit_errors: u64,
    fer: f64,
    ber: f64,
    avg_iter: f64,
    avg_iter_converged: Option<f64>,
    iter_std: f64,
    fer_low: f64,
    fer_high: f64,
}

#[pymethods]
impl PyFerPoint {
    fn __repr__(&self) -> String {
        format!(
            "FerPoint(snr_db={}, frames={}, frame_errors={}, fer={:.3e}, avg_iter={:.3})",
            self.snr_db, self.frames, self.frame_errors, self.fer, self.avg_iter
        )
    }
}

impl From<&FerPoint> for PyFerPoint {
    fn from(p: &FerPoint) -> Self {
        let (fer_low, fer_high) = p.fer_interval(0.95);
        PyFerPoint {
            snr_db: p.snr_db,
            frames: p.frames,
            frame_errors: p.frame_errors,
            undetected_errors: p.undetected_errors,
            bit_errors: p.bit_errors,
            fer: p.fer,
            ber: p.ber,
            avg_iter: p.avg_iter,
            avg_iter_converged: p.avg_iter_converged,
            iter_std: p.iter_std(),
            fer_low,
            fer_high,
        }
    }
}

/// Monte-Carlo FER sweep; results do not depend on `workers`.
#[pyfunction]
#[pyo3(signature = (h, snr_points, variant = "col-incremental", config = None, min_frame_errors = 50, max_frames = 1_000_000, seed = 1, workers = 0))]
#[allow(clippy::too_many_arguments)]
fn fer_sweep(
    py: Python<'_>,
    h: &PyMatrix,
    snr_points: Vec<f64>,
    variant: &str,
    config: Option<&PyConfig>,
    min_frame_errors: u64,
    max_frames: u64,
    seed: u64,
    workers: usize,
) -> PyResult<Vec<PyFerPoint>> {
    let cfg = SimConfig {
        variant: variant.parse().map_err(err)?,
        decode: config_or_default(config),
        snr_points,
        min_frame_errors,
        max_frames,
        master_seed: seed,
        workers,
    };
    let points = py.detach(|| sim::run_fer_sweep(&h.inner, &cfg)).map_err(err)?;
    Ok(points.iter().map(PyFerPoint::from).collect())
}

/// Per-iteration Step-B event averages as `(iteration, class, average, frames)`.
#[pyfunction]
#[pyo3(signature = (h, snr_db, frames, config = None, variant = "col-incremental", seed = 1, workers = 0))]
#[allow(clippy::too_many_arguments)]
fn run_census(
    py: Python<'_>,
    h: &PyMatrix,
    snr_db: f64,
    frames: u64,
    config: Option<&PyConfig>,
    variant: &str,
    seed: u64,
    workers: usize,
) -> PyResult<Vec<(usize, String, f64, u64)>> {
    let cfg = SimConfig {
        variant: variant.parse().map_err(err)?,
        decode: config_or_default(config),
        master_seed: seed,
        workers,
        ..SimConfig::default()
    };
    let counters = py
        .detach(|| sim::run_census(&h.inner, &cfg, snr_db, frames))
        .map_err(err)?;
    Ok(census_rows(&counters))
}

/// Lockstep trace comparison. Returns `(passed, frames_checked, detail)`.
#[pyfunction]
#[pyo3(signature = (h, reference, candidate, snr_db = 3.0, frames = 1000, seed = 1, reference_config = None, candidate_config = None))]
#[allow(clippy::too_many_arguments)]
fn equivalence_check(
    py: Python<'_>,
    h: &PyMatrix,
    reference: &str,
    candidate: &str,
    snr_db: f64,
    frames: u64,
    seed: u64,
    reference_config: Option<&PyConfig>,
    candidate_config: Option<&PyConfig>,
) -> PyResult<(bool, u64, String)> {
    let exact = |c: Option<&PyConfig>| c.map_or_else(DecodeConfig::exact, |c| c.inner.clone());
    let r = DecoderSetup::new(reference.parse().map_err(err)?, exact(reference_config));
    let c = DecoderSetup::new(candidate.parse().map_err(err)?, exact(candidate_config));
    let report = py
        .detach(|| sim::run_equivalence_check(&h.inner, &r, &c, snr_db, frames, seed))
        .map_err(err)?;
    let detail = report.divergence.as_ref().map_or_else(String::new, |d| {
        format!(
            "frame {} seed {}: {} ({:?} vs {:?})",
            d.frame, d.seed, d.detail, d.reference, d.candidate
        )
    });
    Ok((report.passed(), report.frames_checked, detail))
}

#[pyfunction]
fn comparator_savings(check_degree: usize) -> PyResult<f64> {
    census::comparator_savings(check_degree).map_err(err)
}

#[pyfunction]
fn memory_savings(check_degree: usize, message_bits: u32, index_bits: u32) -> PyResult<f64> {
    census::memory_savings(check_degree, message_bits, index_bits).map_err(err)
}

#[pyfunction]
fn vector_bits(message_bits: u32, index_bits: u32) -> u32 {
    census::vector_bits(message_bits, index_bits)
}

/// Information bits per second of a block-column-serial decoder.
#[pyfunction]
#[pyo3(signature = (f_clk, n, m, layers, max_iterations, pipeline_depth = 0))]
fn throughput(f_clk: f64, n: u64, m: u64, layers: u64, max_iterations: u64, pipeline_depth: u64) -> PyResult<f64> {
    let model = ThroughputModel::for_code(f_clk, n, m, layers, max_iterations, pipeline_depth).map_err(err)?;
    Ok(model.throughput())
}

#[pymodule]
fn column_ldpc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyDecodeResult>()?;
    m.add_class::<PyFerPoint>()?;
    m.add("VARIANTS", Variant::ALL.iter().map(|v| v.name()).collect::<Vec<_>>())?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(decode_quantized, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(scale_three_quarters, m)?)?;
    m.add_function(wrap_pyfunction!(channel_llrs, m)?)?;
    m.add_function(wrap_pyfunction!(noise_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(fer_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_census, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(comparator_savings, m)?)?;
    m.add_function(wrap_pyfunction!(memory_savings, m)?)?;
    m.add_function(wrap_pyfunction!(vector_bits, m)?)?;
    m.add_function(wrap_pyfunction!(throughput, m)?)?;
    Ok(())
}
