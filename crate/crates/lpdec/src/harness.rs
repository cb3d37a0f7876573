//! Monte-Carlo experiments over random codes and channel noise.
//!
//! Every trial draws its noise from its own ChaCha stream indexed by
//! (sweep point, trial), and statistics are reduced in trial order, so the
//! output depends only on the plan and never on the worker count.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use lpdec_core::{
    decode_adaptive_with, decode_standard, decode_with_rpc, random_code, sample_trial, stream_rng, ChannelSpec,
    DecodeOutcome, DecoderConfig, DecoderInput, OutcomeKind, ParityCheckCode, RpcSearchConfig,
};
use rand::RngCore;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("sweep point {sweep_var}={value}: {message}")]
    Point {
        sweep_var: SweepVar,
        value: f64,
        message: String,
    },
    #[error("audit failed at {sweep_var}={value}, trial {trial}, {variant}: {message}")]
    Audit {
        sweep_var: SweepVar,
        value: f64,
        trial: usize,
        variant: Variant,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    CheckDegree,
    Length,
    Checks,
    Snr,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::CheckDegree => "dc",
            SweepVar::Length => "n",
            SweepVar::Checks => "m",
            SweepVar::Snr => "snr_db",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Adaptive,
    Standard,
    Rpc { c_max: usize },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Adaptive => f.write_str("adaptive"),
            Variant::Standard => f.write_str("standard"),
            Variant::Rpc { c_max } => write!(f, "rpc:{c_max}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum CodeSource {
    /// `random_code(n, dv, m, plan.code_seed)`.
    Random { n: usize, dv: usize, m: usize },
    Fixed(Arc<ParityCheckCode>),
}

impl CodeSource {
    /// Regular `(dv, dc)` parameters; `m = n dv / dc`.
    pub fn regular(n: usize, dv: usize, dc: usize) -> Result<Self, HarnessError> {
        if dc == 0 || !(n * dv).is_multiple_of(dc) {
            return Err(HarnessError::Plan(format!("n*dv = {} is not divisible by dc = {dc}", n * dv)));
        }
        Ok(CodeSource::Random { n, dv, m: n * dv / dc })
    }

    fn build(&self, seed: u64) -> Result<Arc<ParityCheckCode>, String> {
        match self {
            CodeSource::Random { n, dv, m } => random_code(*n, *dv, *m, seed).map(Arc::new).map_err(|e| e.to_string()),
            CodeSource::Fixed(code) => Ok(code.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// Parameter is Eb/N0 in dB at the design rate `1 - m/n`.
    Awgn,
    /// Parameter is the crossover probability.
    Bsc,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub code: CodeSource,
    pub channel_param: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub sweep_var: SweepVar,
    pub points: Vec<SweepPoint>,
    pub channel: ChannelKind,
    pub variants: Vec<Variant>,
    pub trials: usize,
    pub master_seed: u64,
    pub code_seed: u64,
    pub decoder: DecoderConfig,
    /// Measure wall-clock time per decode. Off by default so that output
    /// is reproducible byte for byte.
    pub timing: bool,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Plan("trial count must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(HarnessError::Plan("no sweep points".into()));
        }
        if self.variants.is_empty() {
            return Err(HarnessError::Plan("no decoder variants".into()));
        }
        if self.points.len() > u32::MAX as usize || self.trials > u32::MAX as usize {
            return Err(HarnessError::Plan("too many points or trials".into()));
        }
        Ok(())
    }
}

/// Aggregates for one (sweep point, variant).
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub sweep_var: SweepVar,
    pub sweep_value: f64,
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub avg_iter: f64,
    pub max_iter: usize,
    pub avg_final_pc_constraints: f64,
    pub max_final_pc_constraints: usize,
    pub errors: usize,
    pub wer: f64,
    /// Normal-approximation half-width of the 95% interval.
    pub wer_ci95: f64,
    pub wrong_codewords: usize,
    pub ml_lower_bound: f64,
    pub fractional: usize,
    pub failures: usize,
    pub avg_decode_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentStats {
    pub rows: Vec<StatsRow>,
}

struct TrialRecord {
    kind: OutcomeKind,
    wrong_codeword: bool,
    iterations: usize,
    constraints: usize,
    ms: f64,
}

fn channel_for(plan: &ExperimentPlan, param: f64, code: &ParityCheckCode) -> Result<ChannelSpec, String> {
    let spec = match plan.channel {
        ChannelKind::Awgn => {
            let rate = 1.0 - code.m() as f64 / code.n() as f64;
            ChannelSpec::awgn_ebn0(param, rate)
        }
        ChannelKind::Bsc => ChannelSpec::bsc(param),
    };
    spec.map_err(|e| e.to_string())
}

fn stream_id(point: usize, trial: usize) -> u64 {
    ((point as u64) << 32) | trial as u64
}

fn decode(input: &DecoderInput<'_>, plan: &ExperimentPlan, variant: Variant, rpc_seed: u64) -> Result<DecodeOutcome, String> {
    match variant {
        Variant::Adaptive => Ok(decode_adaptive_with(input, plan.decoder)),
        Variant::Standard => decode_standard(input).map_err(|e| e.to_string()),
        Variant::Rpc { c_max } => Ok(decode_with_rpc(input, plan.decoder, RpcSearchConfig::new(c_max, rpc_seed))),
    }
}

/// Checks the iteration bound and, for pseudo-codewords, that at least
/// `n - q` coordinates are integral where `q` counts parity rows.
fn audit(code: &ParityCheckCode, variant: Variant, out: &DecodeOutcome) -> Result<(), String> {
    let n = code.n();
    if variant != Variant::Standard && out.iterations > n {
        return Err(format!("{} iterations exceed n = {n}", out.iterations));
    }
    if out.kind == OutcomeKind::Fractional {
        let ints = out.integer_count();
        let q = out.constraints_final;
        if ints + q < n {
            return Err(format!("{ints} integral coordinates with {q} parity rows, n = {n}"));
        }
    }
    Ok(())
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentStats, HarnessError> {
    plan.validate()?;
    let mut rows = Vec::new();
    for (pi, point) in plan.points.iter().enumerate() {
        let point_err = |message: String| HarnessError::Point {
            sweep_var: plan.sweep_var,
            value: point.value,
            message,
        };
        let code = point.code.build(plan.code_seed).map_err(point_err)?;
        let channel = channel_for(plan, point.channel_param, &code).map_err(point_err)?;
        let zero = vec![0u8; code.n()];

        let per_trial: Vec<Result<Vec<TrialRecord>, HarnessError>> = (0..plan.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(plan.master_seed, stream_id(pi, t));
                let sample = sample_trial(&code, channel, &zero, &mut rng).map_err(|e| point_err(e.to_string()))?;
                let rpc_seed = rng.next_u64();
                let input = DecoderInput::new(&code, sample.llr).map_err(|e| point_err(e.to_string()))?;
                plan.variants
                    .iter()
                    .map(|&variant| {
                        let start = plan.timing.then(Instant::now);
                        let out = decode(&input, plan, variant, rpc_seed).map_err(point_err)?;
                        let ms = start.map_or(0.0, |s| s.elapsed().as_secs_f64() * 1e3);
                        audit(&code, variant, &out).map_err(|message| HarnessError::Audit {
                            sweep_var: plan.sweep_var,
                            value: point.value,
                            trial: t,
                            variant,
                            message,
                        })?;
                        Ok(TrialRecord {
                            kind: out.kind,
                            wrong_codeword: out.codeword().is_some_and(|w| w != zero),
                            iterations: out.iterations,
                            constraints: out.constraints_final,
                            ms,
                        })
                    })
                    .collect()
            })
            .collect();
        let per_trial = per_trial.into_iter().collect::<Result<Vec<_>, _>>()?;

        for (vi, &variant) in plan.variants.iter().enumerate() {
            rows.push(summarize(plan, point, &code, variant, per_trial.iter().map(|r| &r[vi])));
        }
    }
    Ok(ExperimentStats { rows })
}

fn summarize<'a>(
    plan: &ExperimentPlan,
    point: &SweepPoint,
    code: &ParityCheckCode,
    variant: Variant,
    records: impl Iterator<Item = &'a TrialRecord>,
) -> StatsRow {
    let (mut iter_sum, mut max_iter, mut pc_sum, mut max_pc) = (0usize, 0, 0usize, 0);
    let (mut errors, mut wrong, mut fractional, mut failures) = (0, 0, 0, 0);
    let mut ms_sum = 0.0;
    for r in records {
        iter_sum += r.iterations;
        max_iter = max_iter.max(r.iterations);
        pc_sum += r.constraints;
        max_pc = max_pc.max(r.constraints);
        ms_sum += r.ms;
        match r.kind {
            OutcomeKind::Integral if r.wrong_codeword => {
                errors += 1;
                wrong += 1;
            }
            OutcomeKind::Integral => {}
            OutcomeKind::Fractional => {
                errors += 1;
                fractional += 1;
            }
            OutcomeKind::Failure => {
                errors += 1;
                failures += 1;
            }
        }
    }
    let t = plan.trials as f64;
    let wer = errors as f64 / t;
    StatsRow {
        sweep_var: plan.sweep_var,
        sweep_value: point.value,
        variant,
        n: code.n(),
        m: code.m(),
        trials: plan.trials,
        avg_iter: iter_sum as f64 / t,
        max_iter,
        avg_final_pc_constraints: pc_sum as f64 / t,
        max_final_pc_constraints: max_pc,
        errors,
        wer,
        wer_ci95: 1.96 * (wer * (1.0 - wer) / t).sqrt(),
        wrong_codewords: wrong,
        ml_lower_bound: wrong as f64 / t,
        fractional,
        failures,
        avg_decode_ms: plan.timing.then(|| ms_sum / t),
    }
}

/// Runs `plan` on a dedicated pool of `jobs` workers (0 means one per core).
pub fn run_experiment_with_jobs(plan: &ExperimentPlan, jobs: usize) -> Result<ExperimentStats, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Plan(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(plan))
}
