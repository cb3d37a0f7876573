//! Command-line front end.
//!
//! Exit status: 0 on success (for `decode`, an integral outcome), 2 when
//! `decode` ends on a pseudo-codeword or a solver failure, 1 on usage and
//! input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lpdec_core::{
    decode_adaptive_with, decode_standard, decode_with_rpc, random_code, sample_trial, stream_rng, ChannelSpec,
    DecodeOutcome, DecoderConfig, DecoderInput, OutcomeKind, ParityCheckCode, RpcSearchConfig,
};
use rand::RngCore;

use crate::alist::{load_alist, serialize_alist};
use crate::harness::{run_experiment_with_jobs, ChannelKind, CodeSource, ExperimentPlan, SweepPoint, SweepVar, Variant};
use crate::presets::{preset, PRESET_NAMES};
use crate::report::{format_sig6, write_csv};

#[derive(Debug, Parser)]
#[command(name = "lpdec", version, about = "Adaptive LP decoding of binary linear codes")]
pub struct Cli {
    /// More detail in reports (repeat for more)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode one block from an LLR file or from a simulated transmission
    Decode(DecodeArgs),
    /// Run a Monte-Carlo experiment and write CSV statistics
    Experiment(ExperimentArgs),
    /// Generate a random code and write it in alist format
    GenCode(GenCodeArgs),
    /// Print the parameters of a code
    Inspect(InspectArgs),
}

/// `n,dv,dc` for a random code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub dv: usize,
    pub dc: usize,
}

impl FromStr for RandomSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, dv, dc] = parts[..] else {
            return Err(format!("expected n,dv,dc, got {s:?}"));
        };
        let p = |t: &str| t.parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        Ok(RandomSpec {
            n: p(n)?,
            dv: p(dv)?,
            dc: p(dc)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Parity-check matrix in alist format
    #[arg(long, value_name = "PATH", conflicts_with = "random")]
    pub alist: Option<PathBuf>,
    /// Random code with the given length and degrees
    #[arg(long, value_name = "N,DV,DC")]
    pub random: Option<RandomSpec>,
    /// Seed for the random code (defaults to --seed)
    #[arg(long, value_name = "S")]
    pub code_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Awgn,
    Bsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Adaptive,
    Standard,
    Rpc,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Whitespace-separated LLRs, one per code bit
    #[arg(long, value_name = "PATH", conflicts_with_all = ["snr_db", "crossover"])]
    pub llr: Option<PathBuf>,
    /// Simulate the all-zero word over AWGN at this Eb/N0 (dB)
    #[arg(long, value_name = "F", allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    #[arg(long, value_enum, default_value = "awgn")]
    pub channel: ChannelArg,
    /// Crossover probability for --channel bsc
    #[arg(long, value_name = "P")]
    pub crossover: Option<f64>,
    #[arg(long, value_enum, default_value = "adaptive")]
    pub variant: VariantArg,
    /// Redundant-check trial budget for --variant rpc
    #[arg(long, value_name = "K", default_value_t = 100)]
    pub cmax: usize,
    /// Master seed; a random one is chosen and printed when omitted
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Named sweep: fig1, fig2, fig3 or fig4
    #[arg(long, value_name = "NAME", conflicts_with_all = ["alist", "random", "snr_db"])]
    pub preset: Option<String>,
    #[command(flatten)]
    pub code: CodeArgs,
    /// Eb/N0 sweep in dB, comma separated
    #[arg(long, value_name = "F,...", value_delimiter = ',', allow_negative_numbers = true)]
    pub snr_db: Vec<f64>,
    #[arg(long, value_enum, default_value = "awgn")]
    pub channel: ChannelArg,
    /// Crossover sweep for --channel bsc, comma separated
    #[arg(long, value_name = "P,...", value_delimiter = ',')]
    pub crossover: Vec<f64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Redundant-check trial budgets, comma separated
    #[arg(long, value_name = "K,...", value_delimiter = ',')]
    pub cmax: Vec<usize>,
    /// Trials per sweep point
    #[arg(long, value_name = "T")]
    pub trials: Option<usize>,
    /// Master seed; a random one is chosen and printed when omitted
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Worker threads (0 = one per core)
    #[arg(long, value_name = "J", default_value_t = 0)]
    pub jobs: usize,
    /// CSV destination (standard output when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per decode (makes the CSV non-reproducible)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct GenCodeArgs {
    #[arg(long, value_name = "N,DV,DC")]
    pub random: RandomSpec,
    /// A random one is chosen and printed when omitted
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Alist destination (standard output when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_name = "S", default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` and runs the command.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Decode(a) => cmd_decode(a, cli.verbose),
        Command::Experiment(a) => cmd_experiment(a),
        Command::GenCode(a) => cmd_gen_code(a),
        Command::Inspect(a) => cmd_inspect(a),
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn load_code(args: &CodeArgs, seed: u64) -> anyhow::Result<ParityCheckCode> {
    match (&args.alist, args.random) {
        (Some(path), _) => read_alist(path),
        (None, Some(r)) => Ok(random_regular(r, args.code_seed.unwrap_or(seed))?),
        (None, None) => bail!("a code is required: pass --alist PATH or --random N,DV,DC"),
    }
}

fn read_alist(path: &Path) -> anyhow::Result<ParityCheckCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_alist(&text).with_context(|| format!("parsing {}", path.display()))
}

fn random_regular(r: RandomSpec, seed: u64) -> anyhow::Result<ParityCheckCode> {
    if r.dc == 0 || !(r.n * r.dv).is_multiple_of(r.dc) {
        bail!("n*dv = {} is not divisible by dc = {}", r.n * r.dv, r.dc);
    }
    Ok(random_code(r.n, r.dv, r.n * r.dv / r.dc, seed)?)
}

fn design_rate(code: &ParityCheckCode) -> f64 {
    1.0 - code.m() as f64 / code.n() as f64
}

/// Bits packed four to a hex digit, first bit most significant; the last
/// digit is padded with zeros.
pub fn codeword_hex(word: &[u8]) -> String {
    word.chunks(4)
        .map(|c| {
            let v = c.iter().enumerate().fold(0u32, |acc, (k, &b)| acc | ((b as u32) << (3 - k)));
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

fn read_llr(path: &Path, n: usize) -> anyhow::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let llr = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad LLR value {t:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if llr.len() != n {
        bail!("{} holds {} LLRs, the code has length {n}", path.display(), llr.len());
    }
    Ok(llr)
}

fn cmd_decode(a: &DecodeArgs, verbose: u8) -> anyhow::Result<u8> {
    if a.llr.is_none() && a.snr_db.is_none() && a.crossover.is_none() {
        bail!("decode needs --llr PATH, or --snr-db F (awgn) or --crossover P (bsc) to simulate a block");
    }
    let needs_randomness = a.llr.is_none() || a.code.alist.is_none() || a.variant == VariantArg::Rpc;
    let seed = if needs_randomness { seed_or_random(a.seed) } else { a.seed.unwrap_or(0) };
    let code = load_code(&a.code, seed)?;
    let mut rng = stream_rng(seed, 0);
    let llr = match &a.llr {
        Some(path) => read_llr(path, code.n())?,
        None => {
            let channel = match a.channel {
                ChannelArg::Awgn => {
                    let snr = a.snr_db.context("--channel awgn needs --snr-db")?;
                    ChannelSpec::awgn_ebn0(snr, design_rate(&code))?
                }
                ChannelArg::Bsc => ChannelSpec::bsc(a.crossover.context("--channel bsc needs --crossover")?)?,
            };
            sample_trial(&code, channel, &vec![0; code.n()], &mut rng)?.llr
        }
    };
    let input = DecoderInput::new(&code, llr)?;
    let config = DecoderConfig::default();
    let out = match a.variant {
        VariantArg::Adaptive => decode_adaptive_with(&input, config),
        VariantArg::Standard => decode_standard(&input)?,
        VariantArg::Rpc => decode_with_rpc(&input, config, RpcSearchConfig::new(a.cmax, rng.next_u64())),
    };
    print!("{}", decode_report(&out, verbose));
    Ok(if out.kind == OutcomeKind::Integral { 0 } else { 2 })
}

pub fn decode_report(out: &DecodeOutcome, verbose: u8) -> String {
    let mut s = String::new();
    let kind = match out.kind {
        OutcomeKind::Integral => "integral",
        OutcomeKind::Fractional => "fractional",
        OutcomeKind::Failure => "failure",
    };
    let n = out.x.len();
    writeln!(s, "outcome: {kind}").unwrap();
    writeln!(s, "iterations: {}", out.iterations).unwrap();
    writeln!(s, "constraints: {}", out.constraints_final).unwrap();
    writeln!(s, "objective: {}", format_sig6(out.objective)).unwrap();
    match out.kind {
        OutcomeKind::Integral => {
            writeln!(s, "codeword: {}", codeword_hex(&out.codeword().unwrap())).unwrap();
        }
        OutcomeKind::Fractional => {
            writeln!(s, "integer_coordinates: {} of {n}", out.integer_count()).unwrap();
        }
        OutcomeKind::Failure => {
            writeln!(s, "diagnostic: {}", out.diagnostic.as_deref().unwrap_or("unknown")).unwrap();
        }
    }
    if out.rpc_trials > 0 {
        writeln!(s, "rpc_cuts: {}", out.rpc_cuts.len()).unwrap();
        writeln!(s, "rpc_trials: {}", out.rpc_trials).unwrap();
    }
    if verbose > 0 {
        writeln!(s, "lp_solves: {}", out.lp_solves).unwrap();
        let cuts: Vec<String> = out.per_iteration_cuts.iter().map(|c| c.to_string()).collect();
        writeln!(s, "cuts_per_iteration: {}", cuts.join(" ")).unwrap();
        let obj: Vec<String> = out.objective_trace.iter().map(|&v| format_sig6(v)).collect();
        writeln!(s, "objective_trace: {}", obj.join(" ")).unwrap();
    }
    if verbose > 1 {
        let x: Vec<String> = out.x.iter().map(|&v| format_sig6(v)).collect();
        writeln!(s, "x: {}", x.join(" ")).unwrap();
    }
    s
}

fn variants_from(variant: Option<VariantArg>, cmax: &[usize]) -> anyhow::Result<Vec<Variant>> {
    Ok(match variant.unwrap_or(VariantArg::Adaptive) {
        VariantArg::Adaptive => vec![Variant::Adaptive],
        VariantArg::Standard => vec![Variant::Standard],
        VariantArg::Rpc if cmax.is_empty() => bail!("--variant rpc needs --cmax K[,K...]"),
        VariantArg::Rpc => cmax.iter().map(|&c_max| Variant::Rpc { c_max }).collect(),
    })
}

fn build_plan(a: &ExperimentArgs, seed: u64) -> anyhow::Result<ExperimentPlan> {
    if let Some(name) = &a.preset {
        if !PRESET_NAMES.contains(&name.as_str()) {
            bail!("unknown preset {name:?}; expected one of {}", PRESET_NAMES.join(", "));
        }
        let mut plan = preset(name, a.trials, seed)?;
        if a.variant.is_some() {
            plan.variants = variants_from(a.variant, &a.cmax)?;
        } else if !a.cmax.is_empty() {
            let mut v = vec![Variant::Adaptive];
            v.extend(a.cmax.iter().map(|&c_max| Variant::Rpc { c_max }));
            plan.variants = v;
        }
        if let Some(s) = a.code.code_seed {
            plan.code_seed = s;
        }
        plan.timing = a.timing;
        return Ok(plan);
    }
    let code = match (&a.code.alist, a.code.random) {
        (Some(path), _) => CodeSource::Fixed(Arc::new(read_alist(path)?)),
        (None, Some(r)) => CodeSource::regular(r.n, r.dv, r.dc)?,
        (None, None) => bail!("experiment needs --preset NAME, --alist PATH or --random N,DV,DC"),
    };
    let (channel, params) = match a.channel {
        ChannelArg::Awgn if a.snr_db.is_empty() => bail!("--channel awgn needs --snr-db F[,F...]"),
        ChannelArg::Awgn => (ChannelKind::Awgn, &a.snr_db),
        ChannelArg::Bsc if a.crossover.is_empty() => bail!("--channel bsc needs --crossover P[,P...]"),
        ChannelArg::Bsc => (ChannelKind::Bsc, &a.crossover),
    };
    Ok(ExperimentPlan {
        sweep_var: SweepVar::Snr,
        points: params
            .iter()
            .map(|&p| SweepPoint {
                value: p,
                code: code.clone(),
                channel_param: p,
            })
            .collect(),
        channel,
        variants: variants_from(a.variant, &a.cmax)?,
        trials: a.trials.unwrap_or(200),
        master_seed: seed,
        code_seed: a.code.code_seed.unwrap_or(seed),
        decoder: DecoderConfig::default(),
        timing: a.timing,
    })
}

fn cmd_experiment(a: &ExperimentArgs) -> anyhow::Result<u8> {
    let seed = seed_or_random(a.seed);
    let plan = build_plan(a, seed)?;
    let stats = run_experiment_with_jobs(&plan, a.jobs)?;
    let mut summary = String::new();
    for r in &stats.rows {
        writeln!(
            summary,
            "{}={} {} (n={}, m={}): avg_iter {} max_iter {} avg_pc {} max_pc {} wer {} +- {} ml_lb {} fractional {} failures {}",
            r.sweep_var,
            format_sig6(r.sweep_value),
            r.variant,
            r.n,
            r.m,
            format_sig6(r.avg_iter),
            r.max_iter,
            format_sig6(r.avg_final_pc_constraints),
            r.max_final_pc_constraints,
            format_sig6(r.wer),
            format_sig6(r.wer_ci95),
            format_sig6(r.ml_lower_bound),
            r.fractional,
            r.failures,
        )
        .unwrap();
    }
    match &a.out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&stats, std::io::BufWriter::new(file))?;
            print!("{summary}");
        }
        None => {
            write_csv(&stats, std::io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_gen_code(a: &GenCodeArgs) -> anyhow::Result<u8> {
    let seed = seed_or_random(a.seed);
    let text = serialize_alist(&random_regular(a.random, seed)?);
    match &a.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn degree_histogram(degrees: impl Iterator<Item = usize>) -> String {
    let mut hist = std::collections::BTreeMap::new();
    for d in degrees {
        *hist.entry(d).or_insert(0usize) += 1;
    }
    hist.iter().map(|(d, c)| format!("{d}:{c}")).collect::<Vec<_>>().join(" ")
}

fn cmd_inspect(a: &InspectArgs) -> anyhow::Result<u8> {
    let code = load_code(&a.code, a.seed)?;
    println!("n: {}", code.n());
    println!("m: {}", code.m());
    println!("edges: {}", code.edge_count());
    println!("rank: {}", code.rank());
    println!("dimension: {}", code.dimension());
    println!("rate: {}", format_sig6(code.dimension() as f64 / code.n() as f64));
    println!("variable_degrees: {}", degree_histogram((0..code.n()).map(|i| code.var_neighbors(i).len())));
    println!("check_degrees: {}", degree_histogram(code.checks().map(|r| r.len())));
    Ok(0)
}
