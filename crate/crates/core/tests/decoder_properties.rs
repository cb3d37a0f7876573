use lpdec_core::decoder::decode_adaptive_with;
use lpdec_core::{
    decode_adaptive, decode_standard, enumerate_codewords, pseudo_codeword_integer_count,
    random_regular_code, sample_trial, stream_rng, BoundMode, ChannelSpec, DecoderConfig,
    DecoderInput, OutcomeKind, ParityCheckCode, SortStrategy,
};
use lpdec_oracles::{cost, ml_decode};

fn small_codes() -> Vec<(ParityCheckCode, f64)> {
    vec![
        (random_regular_code(16, 3, 4, 1).unwrap(), 0.25),
        (random_regular_code(20, 3, 4, 2).unwrap(), 0.25),
        (random_regular_code(12, 3, 6, 3).unwrap(), 0.5),
        (random_regular_code(20, 3, 6, 4).unwrap(), 0.5),
    ]
}

fn llrs(code: &ParityCheckCode, rate: f64, snr: f64, seed: u64, trials: u64) -> Vec<Vec<f64>> {
    let ch = ChannelSpec::awgn_ebn0(snr, rate).unwrap();
    (0..trials)
        .map(|t| {
            sample_trial(code, ch, &vec![0; code.n()], &mut stream_rng(seed, t))
                .unwrap()
                .llr
        })
        .collect()
}

#[test]
fn adaptive_matches_full_relaxation() {
    for (k, (code, rate)) in small_codes().into_iter().enumerate() {
        for llr in llrs(&code, rate, -1.0, k as u64, 60) {
            let input = DecoderInput::new(&code, llr).unwrap();
            let a = decode_adaptive(&input);
            let s = decode_standard(&input).unwrap();
            assert!((a.objective - s.objective).abs() <= 1e-6, "{} vs {}", a.objective, s.objective);
            assert_eq!(a.kind, s.kind);
        }
    }
}

#[test]
fn integral_outcomes_are_ml() {
    for (k, (code, rate)) in small_codes().into_iter().enumerate() {
        let book = enumerate_codewords(&code).unwrap();
        for llr in llrs(&code, rate, 1.0, 10 + k as u64, 60) {
            let input = DecoderInput::new(&code, llr.clone()).unwrap();
            let out = decode_adaptive(&input);
            if let Some(word) = out.codeword() {
                let (best, _) = ml_decode(&book, &llr);
                assert!((cost(&llr, &word) - best).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn loop_invariants_hold() {
    let code = random_regular_code(60, 3, 6, 7).unwrap();
    for llr in llrs(&code, 0.5, -1.0, 30, 60) {
        let input = DecoderInput::new(&code, llr).unwrap();
        let out = decode_adaptive(&input);
        assert_ne!(out.kind, OutcomeKind::Failure, "{:?}", out.diagnostic);
        assert!(out.iterations <= code.n());
        assert!(out.constraints_final <= code.n() * (code.m() + 1));
        assert!(out.per_iteration_cuts.iter().all(|&c| c <= code.m()));
        assert!(out.objective_trace.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        if out.kind == OutcomeKind::Fractional {
            let ints = pseudo_codeword_integer_count(&out).unwrap();
            assert!(ints + out.constraints_final >= code.n());
        }
    }
}

#[test]
fn configurations_agree() {
    let code = random_regular_code(40, 3, 6, 9).unwrap();
    let variants = [
        DecoderConfig::default(),
        DecoderConfig { sort: SortStrategy::PerCheck, bounds: BoundMode::HardDecision },
        DecoderConfig { sort: SortStrategy::Global, bounds: BoundMode::UnitBox },
    ];
    for llr in llrs(&code, 0.5, -1.0, 40, 30) {
        let input = DecoderInput::new(&code, llr).unwrap();
        let objs: Vec<f64> = variants.iter().map(|&c| decode_adaptive_with(&input, c).objective).collect();
        assert!(objs.iter().all(|o| (o - objs[0]).abs() <= 1e-6), "{objs:?}");
    }
}

#[test]
fn zero_llr_entries_are_bounded() {
    let code = random_regular_code(16, 3, 4, 5).unwrap();
    let mut llr = vec![0.0; 16];
    llr[3] = -1.0;
    llr[7] = 0.5;
    let input = DecoderInput::new(&code, llr).unwrap();
    let a = decode_adaptive(&input);
    let s = decode_standard(&input).unwrap();
    assert_ne!(a.kind, OutcomeKind::Failure);
    assert!((a.objective - s.objective).abs() <= 1e-6);
}
