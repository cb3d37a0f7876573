//! Cutting-plane refinement with redundant parity checks.
//!
//! When adaptive decoding stops at a pseudo-codeword, sums of rows of `H`
//! can supply inequalities that cut it off while keeping every codeword
//! feasible. A row sum can only do so if its checks span a cycle through
//! fractional variables, so candidates come from random walks on the Tanner
//! graph with integral variables removed.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{combine_rows, ParityCheckCode, RpcRow};
use crate::cuts::{find_cut_on_support, CheckRef, CutReport, PcConstraint};
use crate::decoder::{is_integral, DecodeOutcome, DecoderConfig, DecoderInput, OutcomeKind, Session};

/// The Tanner graph restricted to fractional variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedGraph {
    /// Variables whose value is not within `INT_TOL` of 0 or 1.
    pub kept_vars: Vec<usize>,
    /// Checks with at least one kept neighbor, ascending.
    pub active_checks: Vec<usize>,
    check_vars: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
}

impl PrunedGraph {
    pub fn is_empty(&self) -> bool {
        self.kept_vars.is_empty()
    }

    /// Kept neighbors of check `j`.
    pub fn check_vars(&self, j: usize) -> &[usize] {
        &self.check_vars[j]
    }

    /// Checks adjacent to kept variable `i` (empty for pruned variables).
    pub fn var_checks(&self, i: usize) -> &[usize] {
        &self.var_checks[i]
    }
}

pub fn prune_graph(code: &ParityCheckCode, x: &[f64]) -> PrunedGraph {
    let kept_vars: Vec<usize> = (0..code.n()).filter(|&i| !is_integral(x[i])).collect();
    let mut var_checks = vec![Vec::new(); code.n()];
    let mut check_vars = vec![Vec::new(); code.m()];
    for &i in &kept_vars {
        var_checks[i] = code.var_neighbors(i).to_vec();
        for &j in code.var_neighbors(i) {
            check_vars[j].push(i);
        }
    }
    let active_checks = (0..code.m()).filter(|&j| !check_vars[j].is_empty()).collect();
    PrunedGraph {
        kept_vars,
        active_checks,
        check_vars,
        var_checks,
    }
}

/// One random walk on `g`.
///
/// Starts at a uniformly random active check and alternates between a
/// random kept neighbor (not the variable just used) and a random check of
/// that variable (not the check just left). Returns the checks between two
/// visits of the same check, or `None` on a dead end.
pub fn find_fractional_cycle<R: Rng + ?Sized>(g: &PrunedGraph, rng: &mut R) -> Option<Vec<usize>> {
    let &start = g.active_checks.choose(rng)?;
    let mut walk = vec![start];
    let mut prev_var = usize::MAX;
    let mut buf = Vec::new();
    loop {
        let here = *walk.last().unwrap();
        buf.clear();
        buf.extend(g.check_vars(here).iter().copied().filter(|&v| v != prev_var));
        let &var = buf.choose(rng)?;
        buf.clear();
        buf.extend(g.var_checks(var).iter().copied().filter(|&c| c != here));
        let &next = buf.choose(rng)?;
        if let Some(pos) = walk.iter().position(|&c| c == next) {
            return Some(walk.split_off(pos));
        }
        walk.push(next);
        prev_var = var;
    }
}

/// Up to `attempts` walks; the first cycle found.
pub fn search_cycle<R: Rng + ?Sized>(g: &PrunedGraph, rng: &mut R, attempts: usize) -> Option<Vec<usize>> {
    (0..attempts).find_map(|_| find_fractional_cycle(g, rng))
}

/// Sums the rows of `cycle_checks` and returns the resulting cut at `x`, if any.
pub fn rpc_cut_from_cycle(
    code: &ParityCheckCode,
    cycle_checks: &[usize],
    x: &[f64],
) -> Option<(RpcRow, PcConstraint)> {
    let row = combine_rows(code, cycle_checks).ok()?;
    if row.is_degenerate() {
        return None;
    }
    let cut = find_cut_on_support(CheckRef::Redundant(row.source_checks.clone()), &row.support, x)?;
    Some((row, cut.constraint))
}

/// A set of checks whose row sum yields a cut at the current point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutGeneratingCollection {
    pub checks: Vec<usize>,
}

impl CutGeneratingCollection {
    /// `Some` when the row sum of `checks` has a cut at `x`.
    pub fn test(code: &ParityCheckCode, checks: &[usize], x: &[f64]) -> Option<(Self, CutReport)> {
        let row = combine_rows(code, checks).ok()?;
        let cut = find_cut_on_support(CheckRef::Redundant(row.source_checks.clone()), &row.support, x)?;
        Some((
            CutGeneratingCollection {
                checks: row.source_checks,
            },
            cut,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RpcSearchConfig {
    /// Total cycle candidates examined per decode. A walk that dead-ends
    /// counts as a candidate.
    pub c_max: usize,
    /// Redundant cuts collected before the LP is solved again.
    pub batch: usize,
    pub seed: u64,
}

impl RpcSearchConfig {
    pub fn new(c_max: usize, seed: u64) -> Self {
        RpcSearchConfig {
            c_max: c_max.max(1),
            batch: 1,
            seed,
        }
    }
}

/// Adaptive decoding followed by redundant-parity-check cuts while the
/// solution stays fractional and the trial budget lasts.
///
/// Each found cut is added permanently and the adaptive loop resumes from
/// it. The walk randomness depends only on `cfg.seed`, so a larger budget
/// replays the run of a smaller one before continuing.
pub fn decode_with_rpc(input: &DecoderInput<'_>, decoder: DecoderConfig, cfg: RpcSearchConfig) -> DecodeOutcome {
    let code = input.code;
    let mut session = Session::new(input, decoder);
    session.run(true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trials = 0;
    while session.outcome.kind == OutcomeKind::Fractional && trials < cfg.c_max {
        let x: Vec<f64> = session.x().iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let graph = prune_graph(code, &x);
        let mut batch: Vec<PcConstraint> = Vec::new();
        while batch.len() < cfg.batch.max(1) && trials < cfg.c_max {
            trials += 1;
            let Some(cycle) = find_fractional_cycle(&graph, &mut rng) else {
                continue;
            };
            if let Some((_, cut)) = rpc_cut_from_cycle(code, &cycle, &x) {
                if !batch.contains(&cut) {
                    batch.push(cut);
                }
            }
        }
        if batch.is_empty() {
            break;
        }
        for cut in batch {
            if session.add_constraint(cut.clone()) {
                session.outcome.rpc_cuts.push(cut);
            }
        }
        session.run(false);
    }
    session.outcome.rpc_trials = trials;
    session.outcome
}

/// Fraction of blocks decoded to a codeword other than the one sent. Such
/// blocks are ML errors too, so this lower-bounds the ML word error rate.
pub fn ml_lower_bound_tally(outcomes: &[DecodeOutcome], transmitted: &[Vec<u8>]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    let wrong = outcomes
        .iter()
        .zip(transmitted)
        .filter(|(o, t)| o.codeword().is_some_and(|w| &w != *t))
        .count();
    wrong as f64 / outcomes.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::decode_adaptive;

    fn four_cycle() -> ParityCheckCode {
        // checks 0 and 1 share variables 0 and 1
        ParityCheckCode::from_check_neighbors(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap()
    }

    #[test]
    fn prune_integral_point() {
        let g = prune_graph(&four_cycle(), &[0.0, 1.0, 0.0, 1.0]);
        assert!(g.is_empty());
        assert!(g.active_checks.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(find_fractional_cycle(&g, &mut rng).is_none());
    }

    #[test]
    fn prune_keeps_fractional() {
        let g = prune_graph(&four_cycle(), &[0.5, 0.5, 1.0, 0.0]);
        assert_eq!(g.kept_vars, vec![0, 1]);
        assert_eq!(g.check_vars(0), &[0, 1]);
        assert!(g.var_checks(2).is_empty());
    }

    #[test]
    fn four_cycle_is_found() {
        let g = prune_graph(&four_cycle(), &[0.5, 0.5, 1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut cycle = search_cycle(&g, &mut rng, 10).unwrap();
        cycle.sort_unstable();
        assert_eq!(cycle, vec![0, 1]);
    }

    #[test]
    fn tree_has_no_cycle() {
        // path: c0 - v1 - c1 - v2 - c2
        let code = ParityCheckCode::from_check_neighbors(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let g = prune_graph(&code, &[0.5; 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(search_cycle(&g, &mut rng, 200).is_none());
    }

    #[test]
    fn identical_rows_give_no_cut() {
        let code = ParityCheckCode::from_check_neighbors(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert!(rpc_cut_from_cycle(&code, &[0, 1], &[0.5, 0.5, 0.5]).is_none());
    }

    #[test]
    fn integral_point_has_no_rpc_cut() {
        let code = four_cycle();
        assert!(code.is_codeword(&[1, 1, 0, 0]));
        assert!(rpc_cut_from_cycle(&code, &[0, 1], &[1.0, 1.0, 0.0, 0.0]).is_none());
    }

    #[test]
    fn already_integral_is_untouched() {
        let code = four_cycle();
        let input = DecoderInput::new(&code, vec![1.0; 4]).unwrap();
        let plain = decode_adaptive(&input);
        let rpc = decode_with_rpc(&input, DecoderConfig::default(), RpcSearchConfig::new(50, 0));
        assert_eq!(rpc.rpc_trials, 0);
        assert_eq!(plain, rpc);
    }

    #[test]
    fn tally_counts_wrong_codewords_only() {
        let code = four_cycle();
        let input = DecoderInput::new(&code, vec![1.0; 4]).unwrap();
        let ok = decode_adaptive(&input);
        assert_eq!(ml_lower_bound_tally(&[ok.clone(), ok.clone()], &[vec![0; 4], vec![0; 4]]), 0.0);
        assert_eq!(ml_lower_bound_tally(&[ok.clone(), ok], &[vec![0; 4], vec![1, 1, 0, 0]]), 0.5);
    }
}
