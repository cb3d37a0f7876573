//! Named experiment plans at desk scale.

use lpdec_core::DecoderConfig;

use crate::harness::{ChannelKind, CodeSource, ExperimentPlan, HarnessError, SweepPoint, SweepVar, Variant};

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

/// Trials per point when the caller does not override them.
pub fn default_trials(name: &str) -> Option<usize> {
    match name {
        "fig1" | "fig2" | "fig3" => Some(200),
        "fig4" => Some(2000),
        _ => None,
    }
}

fn plan(sweep_var: SweepVar, points: Vec<SweepPoint>, variants: Vec<Variant>, trials: usize, seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        sweep_var,
        points,
        channel: ChannelKind::Awgn,
        variants,
        trials,
        master_seed: seed,
        code_seed: seed,
        decoder: DecoderConfig::default(),
        timing: false,
    }
}

/// Builds preset `name`:
///
/// * `fig1`: n = 120, rate 1/2, dc in {4, 6, 8, 10, 12}, -1 dB.
/// * `fig2`: (3, 6) codes, n in {30, 60, 120, 240}, -1 dB.
/// * `fig3`: n = 120, dv = 3, m in {15, 30, 45, 60, 75, 90}, -1 dB.
/// * `fig4`: one (3, 4) code with n = 32 at 2, 3 and 4 dB, decoded by plain
///   adaptive LP and with redundant-check cuts for several budgets.
pub fn preset(name: &str, trials: Option<usize>, seed: u64) -> Result<ExperimentPlan, HarnessError> {
    let trials = trials
        .or_else(|| default_trials(name))
        .ok_or_else(|| HarnessError::Plan(format!("unknown preset {name:?}")))?;
    let at = |value: f64, code: CodeSource| SweepPoint {
        value,
        code,
        channel_param: -1.0,
    };
    let adaptive = vec![Variant::Adaptive];
    Ok(match name {
        "fig1" => plan(
            SweepVar::CheckDegree,
            [4, 6, 8, 10, 12]
                .into_iter()
                .map(|dc| Ok(at(dc as f64, CodeSource::regular(120, dc / 2, dc)?)))
                .collect::<Result<_, HarnessError>>()?,
            adaptive,
            trials,
            seed,
        ),
        "fig2" => plan(
            SweepVar::Length,
            [30, 60, 120, 240]
                .into_iter()
                .map(|n| Ok(at(n as f64, CodeSource::regular(n, 3, 6)?)))
                .collect::<Result<_, HarnessError>>()?,
            adaptive,
            trials,
            seed,
        ),
        "fig3" => plan(
            SweepVar::Checks,
            [15, 30, 45, 60, 75, 90]
                .into_iter()
                .map(|m| at(m as f64, CodeSource::Random { n: 120, dv: 3, m }))
                .collect(),
            adaptive,
            trials,
            seed,
        ),
        "fig4" => plan(
            SweepVar::Snr,
            [2.0, 3.0, 4.0]
                .into_iter()
                .map(|snr| SweepPoint {
                    value: snr,
                    code: CodeSource::Random { n: 32, dv: 3, m: 24 },
                    channel_param: snr,
                })
                .collect(),
            vec![
                Variant::Adaptive,
                Variant::Rpc { c_max: 10 },
                Variant::Rpc { c_max: 100 },
                Variant::Rpc { c_max: 1000 },
            ],
            trials,
            seed,
        ),
        _ => return Err(HarnessError::Plan(format!("unknown preset {name:?}"))),
    })
}
