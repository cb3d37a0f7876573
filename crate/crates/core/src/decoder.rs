//! LP decoding: the adaptive cut loop, the full-relaxation baseline and the
//! integral/fractional classification of the result.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::code::ParityCheckCode;
use crate::cuts::{all_constraints, find_all_cuts, CheckRef, PcConstraint, SortStrategy, CUT_TOL, MAX_ENUMERATED_DEGREE};
use crate::error::{invalid, Error, Result};
use crate::lp::{LinearProgram, LpSolution, LpStatus};

/// Distance to 0 or 1 below which a coordinate counts as integral.
pub const INT_TOL: f64 = 1e-6;

/// Bounds present in the initial program of the adaptive decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    /// Only the bound on the side the objective pushes toward (`x_i >= 0`
    /// when `llr_i > 0`, `x_i <= 1` when `llr_i < 0`, both when zero). A
    /// missing bound is added like any other cut if a solution crosses it.
    #[default]
    HardDecision,
    /// Every variable boxed in `[0, 1]` from the start.
    UnitBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecoderConfig {
    pub sort: SortStrategy,
    pub bounds: BoundMode,
}

/// A code together with the channel log-likelihood ratios of one block.
#[derive(Debug, Clone)]
pub struct DecoderInput<'a> {
    pub code: &'a ParityCheckCode,
    pub llr: Vec<f64>,
}

impl<'a> DecoderInput<'a> {
    pub fn new(code: &'a ParityCheckCode, llr: Vec<f64>) -> Result<Self> {
        if llr.len() != code.n() {
            return Err(invalid(format!(
                "{} LLRs for a code of length {}",
                llr.len(),
                code.n()
            )));
        }
        if let Some(i) = llr.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("LLR {i} is not finite")));
        }
        Ok(DecoderInput { code, llr })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    /// The LP optimum is a codeword, hence the ML codeword.
    Integral,
    /// The LP optimum is a pseudo-codeword.
    Fractional,
    /// The solver or the loop misbehaved; see `diagnostic`.
    Failure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub kind: OutcomeKind,
    pub x: Vec<f64>,
    pub objective: f64,
    /// LP solves of the adaptive loop before any redundant-check cut.
    pub iterations: usize,
    /// Parity-check rows (original and redundant) in the final program.
    pub constraints_final: usize,
    /// New parity-check cuts added after each solve.
    pub per_iteration_cuts: Vec<usize>,
    pub objective_trace: Vec<f64>,
    /// Box bounds that had to be added because a solution crossed them.
    pub bound_cuts: usize,
    /// Redundant-parity-check inequalities added, in order.
    pub rpc_cuts: Vec<PcConstraint>,
    /// Cycle candidates examined by the redundant-check search.
    pub rpc_trials: usize,
    pub lp_solves: usize,
    pub diagnostic: Option<String>,
}

impl DecodeOutcome {
    /// The rounded solution when it is a codeword.
    pub fn codeword(&self) -> Option<Vec<u8>> {
        (self.kind == OutcomeKind::Integral).then(|| round(&self.x))
    }

    /// Coordinates within [`INT_TOL`] of 0 or 1.
    pub fn integer_count(&self) -> usize {
        self.x.iter().filter(|&&v| is_integral(v)).count()
    }
}

pub(crate) fn is_integral(v: f64) -> bool {
    v.abs() <= INT_TOL || (v - 1.0).abs() <= INT_TOL
}

fn round(x: &[f64]) -> Vec<u8> {
    x.iter().map(|&v| (v > 0.5) as u8).collect()
}

/// Integral iff every coordinate is within [`INT_TOL`] of 0 or 1 and the
/// rounded word satisfies every check of `code`.
pub fn classify_outcome(code: &ParityCheckCode, x: &[f64]) -> OutcomeKind {
    if x.iter().all(|&v| is_integral(v)) && code.is_codeword(&round(x)) {
        OutcomeKind::Integral
    } else {
        OutcomeKind::Fractional
    }
}

/// Number of integral coordinates of a pseudo-codeword.
pub fn pseudo_codeword_integer_count(outcome: &DecodeOutcome) -> Result<usize> {
    if outcome.kind == OutcomeKind::Integral {
        return Err(invalid("outcome is a codeword, not a pseudo-codeword"));
    }
    Ok(outcome.integer_count())
}

/// The starting program: objective `llr` and one bound per variable chosen by
/// the sign of its LLR (both bounds when the LLR is zero). Its optimum is the
/// hard decision.
pub fn initial_program(input: &DecoderInput<'_>) -> LinearProgram {
    let mut lp = LinearProgram::new(input.llr.clone());
    for (i, &g) in input.llr.iter().enumerate() {
        if g >= 0.0 {
            lp.set_lower(i, 0.0);
        }
        if g <= 0.0 {
            lp.set_upper(i, 1.0);
        }
    }
    lp
}

/// State shared by the adaptive loop and the redundant-check extension.
pub(crate) struct Session<'a> {
    code: &'a ParityCheckCode,
    config: DecoderConfig,
    lp: LinearProgram,
    present: BTreeSet<PcConstraint>,
    last: Option<LpSolution>,
    pub(crate) outcome: DecodeOutcome,
}

impl<'a> Session<'a> {
    pub(crate) fn new(input: &DecoderInput<'a>, config: DecoderConfig) -> Self {
        let mut lp = initial_program(input);
        if config.bounds == BoundMode::UnitBox {
            for i in 0..lp.n() {
                lp.set_lower(i, 0.0);
                lp.set_upper(i, 1.0);
            }
        }
        Session {
            code: input.code,
            config,
            lp,
            present: BTreeSet::new(),
            last: None,
            outcome: DecodeOutcome {
                kind: OutcomeKind::Failure,
                x: Vec::new(),
                objective: f64::NAN,
                iterations: 0,
                constraints_final: 0,
                per_iteration_cuts: Vec::new(),
                objective_trace: Vec::new(),
                bound_cuts: 0,
                rpc_cuts: Vec::new(),
                rpc_trials: 0,
                lp_solves: 0,
                diagnostic: None,
            },
        }
    }

    pub(crate) fn x(&self) -> &[f64] {
        &self.outcome.x
    }

    /// Adds a parity-check row; false if it was already present.
    pub(crate) fn add_constraint(&mut self, c: PcConstraint) -> bool {
        if !self.present.insert(c.clone()) {
            return false;
        }
        let added = self
            .lp
            .add_row(c.to_row())
            .expect("parity-check rows reference valid variables");
        self.outcome.constraints_final += added as usize;
        true
    }

    fn fail(&mut self, why: String) {
        self.outcome.kind = OutcomeKind::Failure;
        self.outcome.diagnostic = Some(why);
    }

    /// Solve, separate, add, repeat until no cut remains. `count_iterations`
    /// selects whether solves count toward [`DecodeOutcome::iterations`].
    pub(crate) fn run(&mut self, count_iterations: bool) {
        let n = self.code.n();
        // n solves always suffice; one more is slack for the final check
        let cap = n + 1;
        for round in 0.. {
            if round == cap {
                self.fail(format!("no convergence after {cap} LP solves"));
                return;
            }
            let sol = self.lp.solve(self.last.as_ref());
            self.outcome.lp_solves += 1;
            if count_iterations {
                self.outcome.iterations += 1;
            }
            if sol.status != LpStatus::Optimal {
                self.outcome.x = sol.x.clone();
                self.fail(format!("LP solver returned {:?}", sol.status));
                return;
            }
            let prev = self.outcome.objective_trace.last().copied();
            self.outcome.objective_trace.push(sol.objective_value);
            self.outcome.objective = sol.objective_value;
            self.outcome.x = sol.x.clone();
            if let Some(p) = prev {
                if sol.objective_value < p - 1e-7 * (1.0 + p.abs()) {
                    self.fail(format!(
                        "objective decreased from {p} to {}",
                        sol.objective_value
                    ));
                    return;
                }
            }

            let mut crossed = 0;
            for i in 0..n {
                let v = sol.x[i];
                if v < -CUT_TOL && self.lp.lower(i) == f64::NEG_INFINITY {
                    self.lp.set_lower(i, 0.0);
                    crossed += 1;
                } else if v > 1.0 + CUT_TOL && self.lp.upper(i) == f64::INFINITY {
                    self.lp.set_upper(i, 1.0);
                    crossed += 1;
                }
            }
            self.outcome.bound_cuts += crossed;

            let clamped: Vec<f64> = sol.x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
            let cuts = find_all_cuts(self.code, &clamped, self.config.sort);
            let found = cuts.len();
            let mut fresh = 0;
            for cut in cuts {
                fresh += self.add_constraint(cut.constraint) as usize;
            }
            self.outcome.per_iteration_cuts.push(fresh);
            self.last = Some(sol);
            if found == 0 && crossed == 0 {
                self.outcome.kind = classify_outcome(self.code, &self.outcome.x);
                return;
            }
            if fresh == 0 && crossed == 0 {
                self.fail(String::from("separation returned only rows already in the program"));
                return;
            }
        }
    }
}

/// Adaptive LP decoding with the default configuration.
pub fn decode_adaptive(input: &DecoderInput<'_>) -> DecodeOutcome {
    decode_adaptive_with(input, DecoderConfig::default())
}

/// Starts from the hard-decision program and repeatedly adds every violated
/// parity-check inequality until the solution lies in the fundamental
/// polytope.
pub fn decode_adaptive_with(input: &DecoderInput<'_>, config: DecoderConfig) -> DecodeOutcome {
    let mut session = Session::new(input, config);
    session.run(true);
    session.outcome
}

/// One LP over the complete relaxation: all `2^(d-1)` inequalities of every
/// check and the unit box.
pub fn decode_standard(input: &DecoderInput<'_>) -> Result<DecodeOutcome> {
    let code = input.code;
    let d = code.max_check_degree();
    if d > MAX_ENUMERATED_DEGREE {
        return Err(Error::Capacity {
            what: "check degree for the full relaxation",
            limit: MAX_ENUMERATED_DEGREE,
            requested: d,
        });
    }
    let mut lp = LinearProgram::with_unit_box(input.llr.clone());
    for (j, row) in code.checks().enumerate() {
        for c in all_constraints(CheckRef::Check(j), row)? {
            lp.add_row(c.to_row())?;
        }
    }
    let sol = lp.solve(None);
    let kind = match sol.status {
        LpStatus::Optimal => classify_outcome(code, &sol.x),
        _ => OutcomeKind::Failure,
    };
    Ok(DecodeOutcome {
        kind,
        objective: sol.objective_value,
        iterations: 1,
        constraints_final: lp.rows().len(),
        per_iteration_cuts: Vec::new(),
        objective_trace: alloc::vec![sol.objective_value],
        bound_cuts: 0,
        rpc_cuts: Vec::new(),
        rpc_trials: 0,
        lp_solves: 1,
        diagnostic: (kind == OutcomeKind::Failure).then(|| format!("LP solver returned {:?}", sol.status)),
        x: sol.x,
    })
}
