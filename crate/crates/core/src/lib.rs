//! Adaptive linear-programming decoding of binary linear codes.
//!
//! The decoder solves the LP relaxation of maximum-likelihood decoding while
//! adding only the parity-check inequalities that cut off the current
//! solution. When the relaxation ends at a fractional vertex, it can be
//! tightened further with cuts derived from redundant parity checks.
//!
//! This crate is `no_std` and only needs `alloc`; file formats, the
//! experiment runner and the command line live in the `lpdec` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod code;
pub mod cuts;
pub mod decoder;
pub mod error;
mod gf2;
pub mod lp;
pub mod rpc;

pub use channel::{awgn_llr, sample_trial, stream_rng, ChannelSpec, TrialSample};
pub use code::{
    combine_rows, enumerate_codewords, random_code, random_regular_code, CodewordSet,
    ParityCheckCode, RpcRow,
};
pub use cuts::{
    brute_force_cuts, classify_constraint, find_all_cuts, find_cut_for_check, CheckRef,
    ConstraintStatus, CutReport, PcConstraint, SortStrategy, CUT_TOL,
};
pub use decoder::{
    classify_outcome, decode_adaptive, decode_adaptive_with, decode_standard, initial_program,
    pseudo_codeword_integer_count, BoundMode, DecodeOutcome, DecoderConfig, DecoderInput,
    OutcomeKind, INT_TOL,
};
pub use error::{Error, Result};
pub use lp::{solve, LinearProgram, LpRow, LpSolution, LpStatus, FEAS_TOL};
pub use rpc::{
    decode_with_rpc, find_fractional_cycle, ml_lower_bound_tally, prune_graph,
    rpc_cut_from_cycle, CutGeneratingCollection, PrunedGraph, RpcSearchConfig,
};
