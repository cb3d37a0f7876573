use std::sync::Arc;

use lpdec::{
    csv_string, preset, read_csv, run_experiment, run_experiment_with_jobs, ChannelKind, CodeSource, ExperimentPlan,
    HarnessError, SweepPoint, SweepVar, Variant,
};
use lpdec_core::{random_regular_code, DecoderConfig};

fn single_point(trials: usize, variants: Vec<Variant>) -> ExperimentPlan {
    ExperimentPlan {
        sweep_var: SweepVar::Snr,
        points: vec![SweepPoint {
            value: 1.0,
            code: CodeSource::regular(24, 3, 6).unwrap(),
            channel_param: 1.0,
        }],
        channel: ChannelKind::Awgn,
        variants,
        trials,
        master_seed: 17,
        code_seed: 3,
        decoder: DecoderConfig::default(),
        timing: false,
    }
}

#[test]
fn one_trial_twice_is_byte_identical() {
    let plan = single_point(1, vec![Variant::Adaptive]);
    let a = csv_string(&run_experiment(&plan).unwrap()).unwrap();
    let b = csv_string(&run_experiment(&plan).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 2);
}

#[test]
fn worker_count_does_not_change_results() {
    let plan = single_point(40, vec![Variant::Adaptive, Variant::Rpc { c_max: 20 }]);
    let one = run_experiment_with_jobs(&plan, 1).unwrap();
    let three = run_experiment_with_jobs(&plan, 3).unwrap();
    assert_eq!(one, three);
}

#[test]
fn reload_reproduces_emitted_values() {
    let stats = run_experiment(&single_point(25, vec![Variant::Adaptive, Variant::Standard])).unwrap();
    let text = csv_string(&stats).unwrap();
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), stats.rows.len());
    for (r, s) in rows.iter().zip(&stats.rows) {
        let sig6 = |v: f64| lpdec::format_sig6(v).parse::<f64>().unwrap();
        assert_eq!(r.avg_iter, sig6(s.avg_iter));
        assert_eq!(r.avg_final_pc_constraints, sig6(s.avg_final_pc_constraints));
        assert_eq!(r.wer, sig6(s.wer));
        assert_eq!(r.wer_ci95, sig6(s.wer_ci95));
        assert_eq!(r.max_iter, s.max_iter);
        assert_eq!(r.variant, s.variant.to_string());
        assert_eq!(r.avg_decode_ms, None);
    }
}

#[test]
fn stats_are_consistent() {
    let stats = run_experiment(&single_point(60, vec![Variant::Adaptive, Variant::Rpc { c_max: 50 }])).unwrap();
    for r in &stats.rows {
        assert!(r.max_iter as f64 >= r.avg_iter);
        assert!(r.max_final_pc_constraints as f64 >= r.avg_final_pc_constraints);
        assert!((0.0..=1.0).contains(&r.wer));
        assert!(r.ml_lower_bound <= r.wer);
        assert_eq!(r.errors, r.wrong_codewords + r.fractional + r.failures);
        assert!(r.max_iter <= r.n);
    }
    // shared noise: the redundant-check search never loses a block that
    // plain adaptive decoding got right, and reaches the same first phase
    assert_eq!(stats.rows[0].avg_iter, stats.rows[1].avg_iter);
    assert!(stats.rows[1].wer <= stats.rows[0].wer);
}

#[test]
fn timing_fills_the_column() {
    let mut plan = single_point(3, vec![Variant::Adaptive]);
    plan.timing = true;
    let stats = run_experiment(&plan).unwrap();
    assert!(stats.rows[0].avg_decode_ms.is_some_and(|ms| ms >= 0.0));
}

#[test]
fn fixed_code_is_used_as_given() {
    let code = Arc::new(random_regular_code(20, 3, 4, 8).unwrap());
    let mut plan = single_point(5, vec![Variant::Adaptive]);
    plan.points[0].code = CodeSource::Fixed(code.clone());
    let stats = run_experiment(&plan).unwrap();
    assert_eq!((stats.rows[0].n, stats.rows[0].m), (20, 15));
}

#[test]
fn construction_failure_names_the_point() {
    let mut plan = single_point(1, vec![Variant::Adaptive]);
    plan.points[0].code = CodeSource::Random { n: 4, dv: 3, m: 2 };
    match run_experiment(&plan) {
        Err(HarnessError::Point { value, .. }) => assert_eq!(value, 1.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_plans() {
    assert!(run_experiment(&single_point(0, vec![Variant::Adaptive])).is_err());
    assert!(run_experiment(&single_point(1, vec![])).is_err());
    assert!(CodeSource::regular(7, 3, 4).is_err());
    let mut bsc = single_point(1, vec![Variant::Adaptive]);
    bsc.channel = ChannelKind::Bsc;
    assert!(run_experiment(&bsc).is_err());
}

#[test]
fn bsc_sweep() {
    let mut plan = single_point(20, vec![Variant::Adaptive]);
    plan.channel = ChannelKind::Bsc;
    plan.points[0].channel_param = 0.03;
    let stats = run_experiment(&plan).unwrap();
    assert!(stats.rows[0].wer < 1.0);
}

#[test]
fn presets_have_the_documented_shape() {
    let shapes = [("fig1", 5, 1), ("fig2", 4, 1), ("fig3", 6, 1), ("fig4", 3, 4)];
    for (name, points, variants) in shapes {
        let plan = preset(name, None, 1).unwrap();
        assert_eq!(plan.points.len(), points, "{name}");
        assert_eq!(plan.variants.len(), variants, "{name}");
        assert!(plan.trials >= 200);
    }
    assert!(preset("fig5", None, 1).is_err());
    assert_eq!(preset("fig2", Some(7), 1).unwrap().trials, 7);
}
