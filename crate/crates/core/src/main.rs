use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use column_ldpc::census::{comparator_savings, memory_savings, vector_bits, ThroughputModel};
use column_ldpc::decoders::{DecodeConfig, Fault, Variant};
use column_ldpc::kernel::{Capacity, UpdateMode};
use column_ldpc::sim::{
    run_census, run_equivalence_check, run_fer_sweep, write_census_csv, write_fer_csv, DecoderSetup, SimConfig,
};
use column_ldpc::{FixedPointFormat, ParityCheckMatrix, SimError};

#[derive(Parser)]
#[command(name = "column-ldpc", version, about = "Column-layered Min-Sum LDPC decoder simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame and bit error rates over an SNR sweep.
    Fer(FerArgs),
    /// Per-iteration sorted-vector update statistics.
    Census(CensusArgs),
    /// Lockstep trace comparison of two decoders.
    Equiv(EquivArgs),
    /// Analytic comparator, memory and throughput figures.
    Model(ModelArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// wimax-1/2, random-qc:ROWS,COLS,Z,SEED, alist:PATH, qc:PATH or a file path.
    #[arg(long, default_value = "wimax-1/2")]
    code: String,
    /// Columns per column layer (and rows per row layer); defaults to the
    /// circulant size for QC codes and 1 for alist codes.
    #[arg(long)]
    layer_size: Option<usize>,
}

impl CodeArgs {
    fn load(&self) -> Result<ParityCheckMatrix, SimError> {
        let h = ParityCheckMatrix::from_spec(&self.code)?;
        Ok(match self.layer_size {
            Some(s) => h.regroup_layers(s)?.regroup_row_layers(s)?,
            None => h,
        })
    }
}

#[derive(Args, Clone)]
struct DecoderArgs {
    #[arg(long, default_value = "col-incremental")]
    decoder: Variant,
    /// exact, three-min or simplified [default: three-min; exact for equiv]
    #[arg(long)]
    mode: Option<UpdateMode>,
    /// Entries per sorted vector, or "full" [default: 3; full for equiv]
    #[arg(long, value_parser = parse_capacity)]
    capacity: Option<Capacity>,
    #[arg(long, default_value_t = 0)]
    pipeline: usize,
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    #[arg(long, default_value_t = 4)]
    qbits: u32,
    #[arg(long, default_value_t = 0.5)]
    qstep: f64,
    /// Accumulator width; defaults to qbits + 6.
    #[arg(long)]
    acc_bits: Option<u32>,
    #[arg(long, default_value_t = 10)]
    max_iter: usize,
    /// Always run max-iter iterations.
    #[arg(long)]
    no_early_termination: bool,
    /// Treat an emptied sorted vector as magnitude 0 instead of aborting.
    #[arg(long)]
    empty_as_zero: bool,
}

impl DecoderArgs {
    fn config(&self) -> Result<DecodeConfig, SimError> {
        self.config_or(UpdateMode::ThreeMin, Capacity::Entries(3))
    }

    fn config_or(&self, mode: UpdateMode, capacity: Capacity) -> Result<DecodeConfig, SimError> {
        let mut fmt = FixedPointFormat::new(self.qbits, self.qstep).map_err(|e| SimError::Config(e.to_string()))?;
        if let Some(b) = self.acc_bits {
            fmt = fmt.with_accumulator_bits(b);
        }
        Ok(DecodeConfig {
            max_iterations: self.max_iter,
            alpha: self.alpha,
            vector_capacity: self.capacity.unwrap_or(capacity),
            mode: self.mode.unwrap_or(mode),
            pipeline_depth: self.pipeline,
            early_termination: !self.no_early_termination,
            fmt,
            empty_vector_as_zero: self.empty_as_zero,
            ..Default::default()
        })
    }

    fn metadata(&self, code: &CodeArgs, h: &ParityCheckMatrix) -> Vec<(&'static str, String)> {
        let cfg = self.config().expect("validated");
        let capacity = match cfg.vector_capacity {
            Capacity::Full => "full".to_string(),
            Capacity::Entries(l) => l.to_string(),
        };
        vec![
            ("code", code.code.clone()),
            ("n", h.n().to_string()),
            ("m", h.m().to_string()),
            ("column_layers", h.num_layers().to_string()),
            ("decoder", self.decoder.to_string()),
            ("mode", cfg.mode.name().to_string()),
            ("capacity", capacity),
            ("pipeline", self.pipeline.to_string()),
            ("alpha", self.alpha.to_string()),
            ("qbits", self.qbits.to_string()),
            ("qstep", self.qstep.to_string()),
            ("acc_bits", cfg.fmt.accumulator_bits.to_string()),
            ("max_iter", self.max_iter.to_string()),
            ("early_termination", (!self.no_early_termination).to_string()),
        ]
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct FerArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Eb/N0 in dB: START:STOP:STEP, a comma list, or inf.
    #[arg(long, value_parser = parse_snr)]
    snr: SnrList,
    #[arg(long, default_value_t = 50)]
    min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, default_value_t = 4.1)]
    snr: f64,
    #[arg(long, default_value_t = 500)]
    frames: u64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct EquivArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Reference decoder; shares the candidate's settings except pipelining.
    #[arg(long, default_value = "col-original")]
    reference: Variant,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, default_value_t = 3.0)]
    snr: f64,
    #[arg(long, default_value_t = 1000)]
    frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 32)]
    dc: usize,
    #[arg(long, default_value_t = 4)]
    qbits: u32,
    #[arg(long, default_value_t = 5)]
    idx_bits: u32,
    /// Clock frequency in MHz.
    #[arg(long, default_value_t = 388.0)]
    fclk_mhz: f64,
    #[arg(long, default_value_t = 4096)]
    n: u64,
    #[arg(long, default_value_t = 512)]
    m: u64,
    #[arg(long, default_value_t = 32)]
    layers: u64,
    #[arg(long, default_value_t = 10)]
    max_iter: u64,
    #[arg(long, default_value_t = 2)]
    pipeline: u64,
}

#[derive(Clone, Debug)]
struct SnrList(Vec<f64>);

fn parse_capacity(s: &str) -> Result<Capacity, String> {
    if s == "full" {
        return Ok(Capacity::Full);
    }
    s.parse::<usize>()
        .map(Capacity::Entries)
        .map_err(|_| format!("capacity must be a count or \"full\", got {s:?}"))
}

fn parse_snr(s: &str) -> Result<SnrList, String> {
    let num = |t: &str| -> Result<f64, String> {
        let t = t.trim();
        if t == "inf" {
            return Ok(f64::INFINITY);
        }
        t.parse::<f64>().map_err(|_| format!("bad SNR value {t:?}"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let points = match parts[..] {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
                return Err(format!("bad SNR range {s:?}"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("bad SNR spec {s:?}")),
    };
    Ok(SnrList(points))
}

fn output(path: &Option<String>) -> Result<Box<dyn Write>, SimError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, SimError> {
    match cli.command {
        Command::Fer(a) => {
            let h = a.code.load()?;
            let cfg = SimConfig {
                variant: a.decoder.decoder,
                decode: a.decoder.config()?,
                snr_points: a.snr.0.clone(),
                min_frame_errors: a.min_errors,
                max_frames: a.max_frames,
                master_seed: a.run.seed,
                workers: a.run.workers,
            };
            let points = run_fer_sweep(&h, &cfg)?;
            let mut meta = a.decoder.metadata(&a.code, &h);
            meta.push(("seed", a.run.seed.to_string()));
            meta.push(("min_errors", a.min_errors.to_string()));
            meta.push(("max_frames", a.max_frames.to_string()));
            write_fer_csv(output(&a.run.out)?, &meta, &points)?;
        }
        Command::Census(a) => {
            let h = a.code.load()?;
            let cfg = SimConfig {
                variant: a.decoder.decoder,
                decode: a.decoder.config()?,
                snr_points: vec![a.snr],
                master_seed: a.run.seed,
                workers: a.run.workers,
                ..Default::default()
            };
            let counters = run_census(&h, &cfg, a.snr, a.frames)?;
            let mut meta = a.decoder.metadata(&a.code, &h);
            meta.push(("snr_db", a.snr.to_string()));
            meta.push(("frames", a.frames.to_string()));
            meta.push(("seed", a.run.seed.to_string()));
            write_census_csv(output(&a.run.out)?, &meta, &counters.rows())?;
        }
        Command::Equiv(a) => {
            let h = a.code.load()?;
            let mut candidate = a.decoder.config_or(UpdateMode::Exact, Capacity::Full)?;
            if a.inject_fault {
                candidate.fault = Some(Fault::StepAKeepsOldSign);
            }
            let reference = DecodeConfig {
                pipeline_depth: 0,
                fault: None,
                ..candidate.clone()
            };
            let report = run_equivalence_check(
                &h,
                &DecoderSetup::new(a.reference, reference),
                &DecoderSetup::new(a.decoder.decoder, candidate),
                a.snr,
                a.frames,
                a.seed,
            )?;
            match report.divergence {
                None => println!("pass: {} frames identical", report.frames_checked),
                Some(d) => {
                    println!("FAIL at frame {} (seed {:#018x}): {}", d.frame, d.seed, d.detail);
                    if let Some(e) = d.reference.or(d.candidate) {
                        println!(
                            "  iteration {} layer {} check {} var {}",
                            e.iteration, e.layer, e.check, e.var
                        );
                    }
                    println!("  reference: {:?}", d.reference);
                    println!("  candidate: {:?}", d.candidate);
                    return Ok(ExitCode::from(3));
                }
            }
        }
        Command::Model(a) => {
            let model_err = |e: column_ldpc::census::ModelError| SimError::Config(e.to_string());
            let cmp = comparator_savings(a.dc).map_err(model_err)?;
            let mem = memory_savings(a.dc, a.qbits, a.idx_bits).map_err(model_err)?;
            let tp = ThroughputModel::for_code(a.fclk_mhz * 1e6, a.n, a.m, a.layers, a.max_iter, a.pipeline)
                .map_err(model_err)?;
            println!("comparator_savings,{cmp:.6}");
            println!("vector_bits,{}", vector_bits(a.qbits, a.idx_bits));
            println!("memory_savings,{mem:.7}");
            println!("total_cycles,{}", tp.total_cycles());
            println!("throughput_gbps,{:.6}", tp.throughput() / 1e9);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
