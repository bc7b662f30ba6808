use proptest::prelude::*;
use rpn_core::bank::{run_bank, Bank, BankSpec, BundleEntry, TPBundle};
use rpn_core::disc::DiscSpec;
use rpn_core::normalize::{NormalizedTP, SourceMeta};
use rpn_core::pipeline::{Pipeline, PipelineParams};
use rpn_core::prefilter::{default_radial_bank, gabor_bank, GaborSpec};
use rpn_core::recognizer::{match_stream, MatchConfig, TemplateStore};
use rpn_core::ripple::{ripple, ActivationField};
use rpn_core::similarity::cosine;
use rpn_core::{Frame, RpnError};

const SIZE: usize = 48;

fn base() -> DiscSpec {
    DiscSpec::spoke(24, 24, 23.5)
}

/// Filled polygon with `sides` vertices at `radius`, rotated by `phase`.
fn polygon(sides: usize, radius: f64, phase: f64) -> Frame {
    let c = (SIZE as f64 - 1.0) / 2.0;
    let apothem = radius * (std::f64::consts::PI / sides as f64).cos();
    Frame::from_fn(SIZE, SIZE, |x, y| {
        let (dx, dy) = (x as f64 - c, y as f64 - c);
        let inside = (0..sides).all(|k| {
            let a = phase + std::f64::consts::TAU * (k as f64 + 0.5) / sides as f64;
            dx * a.cos() + dy * a.sin() <= apothem
        });
        inside as u8 as f64
    })
}

#[test]
fn standard_bank_yields_nine_entries() {
    let spec = BankSpec::standard(base());
    let bundle = run_bank(&polygon(4, 15.0, 0.3), &spec, PipelineParams::default()).unwrap();
    assert_eq!(bundle.entries.len(), 9);
    for i in 0..3 {
        for j in 0..3 {
            let e = bundle.entry(i, j);
            assert_eq!((e.orientation_index, e.density_index), (i, j));
            assert_eq!(e.rings, [24, 12, 6][j]);
            assert_eq!(e.tp.len(), e.rings);
        }
        assert!(bundle.completion_tick(i, 2) <= bundle.completion_tick(i, 1));
        assert!(bundle.completion_tick(i, 1) <= bundle.completion_tick(i, 0));
    }
}

#[test]
fn bank_of_one_is_the_single_disc_pipeline() {
    let spec = BankSpec {
        orientations: vec![GaborSpec::radial(0.4)],
        densities: vec![24],
        base: base(),
    };
    let frame = polygon(6, 17.0, 0.1);
    let bundle = run_bank(&frame, &spec, PipelineParams::default()).unwrap();
    let pipe = Pipeline::new(base(), SIZE, SIZE, PipelineParams::default()).unwrap();
    let filtered = gabor_bank(&frame, &spec.orientations).unwrap();
    let out = pipe.run_filtered(&filtered[0]).unwrap();
    assert_eq!(bundle.entries.len(), 1);
    assert_eq!(bundle.entries[0].tp, out.normalized);
    assert_eq!(bundle.entries[0].completion_tick, out.raw.completion_tick);
}

#[test]
fn full_disc_completes_in_ring_count() {
    let spec = BankSpec::standard(DiscSpec::spoke(32, 64, 30.0));
    for &d in &spec.densities {
        let tp = ripple(&ActivationField::from_fn(32, d, |_, _| 1.0).unwrap());
        assert_eq!(tp.completion_tick, d);
    }
    assert_eq!(spec.densities, vec![64, 32, 16]);
}

fn store_of(shapes: &[(&str, Frame)]) -> (Bank, TemplateStore) {
    let spec = BankSpec::standard(base());
    let bank = Bank::new(spec.clone(), SIZE, SIZE, PipelineParams::default()).unwrap();
    let mut store = TemplateStore::new(spec);
    for (label, frame) in shapes {
        store.enroll(*label, bank.run(frame).unwrap()).unwrap();
    }
    (bank, store)
}

#[test]
fn enrollment_rules() {
    let (bank, mut store) = store_of(&[("square", polygon(4, 15.0, 0.0))]);
    assert_eq!(store.len(), 1);
    let again = bank.run(&polygon(8, 15.0, 0.0)).unwrap();
    let before = store.clone();
    assert!(matches!(store.enroll("square", again.clone()), Err(RpnError::DuplicateLabel(_))));
    assert_eq!(store, before);

    let mut truncated = again;
    truncated.entries.pop();
    assert!(matches!(store.enroll("octagon", truncated), Err(RpnError::ShapeMismatch(_))));
    assert_eq!(store, before);
}

#[test]
fn store_round_trips_byte_identically() {
    let (_, store) = store_of(&[("square", polygon(4, 15.0, 0.0)), ("hexagon", polygon(6, 16.0, 0.2))]);
    let json = store.to_json().unwrap();
    let back = TemplateStore::from_json(&json).unwrap();
    assert_eq!(back, store);
    assert_eq!(back.to_json().unwrap(), json);

    let tampered = json.replacen("rpn-template-store/1", "rpn-template-store/0", 1);
    assert!(matches!(TemplateStore::from_json(&tampered), Err(RpnError::Schema(_))));
}

#[test]
fn self_match_decides_after_first_pattern() {
    let square = polygon(4, 15.0, 0.0);
    let (bank, store) = store_of(&[("square", square.clone())]);
    let probe = bank.run(&square).unwrap();
    let state = match_stream(&store, &probe, MatchConfig::default()).unwrap();
    let d = state.decided.unwrap();
    assert_eq!(d.label, "square");
    assert_eq!(state.candidates[0].prefix_distance, 0.0);
    let first = probe.delivery_order()[0];
    assert_eq!(d.decided_at_tick, probe.entries[first].tp.len());
    // The first delivered pattern comes from the coarsest disc.
    assert_eq!(probe.entries[first].rings, 6);
}

#[test]
fn empty_store_and_bad_threshold() {
    let (bank, store) = store_of(&[]);
    let probe = bank.run(&polygon(4, 15.0, 0.0)).unwrap();
    assert_eq!(match_stream(&store, &probe, MatchConfig::default()), Err(RpnError::EmptyStore));
    let (_, store) = store_of(&[("square", polygon(4, 15.0, 0.0))]);
    let cfg = MatchConfig { prune_threshold: 0.0, warmup: 0 };
    assert!(match_stream(&store, &probe, cfg).is_err());
}

#[test]
fn identical_templates_tie_to_enrollment_order() {
    let sq = polygon(4, 15.0, 0.0);
    let (bank, store) = store_of(&[("first", sq.clone()), ("second", sq.clone())]);
    let state = match_stream(&store, &bank.run(&sq).unwrap(), MatchConfig::exhaustive()).unwrap();
    let d = state.decided.unwrap();
    assert_eq!(d.label, "first");
    assert_eq!(d.tied_with, vec!["second".to_string()]);
}

fn synthetic_bundle(values: &[f64], densities: &[usize], orientations: usize) -> TPBundle {
    let mut entries = Vec::new();
    let mut it = values.iter().copied().cycle();
    for i in 0..orientations {
        for (j, &d) in densities.iter().enumerate() {
            let samples: Vec<f64> = (0..d).map(|_| it.next().unwrap()).collect();
            entries.push(BundleEntry {
                orientation_index: i,
                density_index: j,
                orientation_deg: 45.0 * i as f64,
                rings: d,
                completion_tick: d,
                tp: NormalizedTP {
                    samples,
                    warp: 1.0,
                    amp_divisor: 1.0,
                    source: SourceMeta { inh0: 1.0, lag: 0, t_tp: 0, rings: d },
                },
            });
        }
    }
    TPBundle { orientations, densities: densities.len(), entries }
}

fn synthetic_store(templates: &[Vec<f64>]) -> TemplateStore {
    let spec = BankSpec::halving(DiscSpec::spoke(8, 8, 4.0), default_radial_bank(), 3);
    let mut store = TemplateStore::new(spec.clone());
    for (k, t) in templates.iter().enumerate() {
        store
            .enroll(format!("t{k}"), synthetic_bundle(t, &spec.densities, 3))
            .unwrap();
    }
    store
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustive_matching_is_global_cosine_argmax(
        templates in proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, 42), 2..8),
        probe in proptest::collection::vec(0.01f64..1.0, 42),
    ) {
        let store = synthetic_store(&templates);
        let probe = synthetic_bundle(&probe, &[8, 4, 2], 3);
        let state = match_stream(&store, &probe, MatchConfig::exhaustive()).unwrap();
        let x = probe.concatenated();
        let scores: Vec<f64> = store
            .templates
            .iter()
            .map(|t| cosine(&x, &t.bundle.concatenated()).unwrap())
            .collect();
        let best = (0..scores.len()).fold(0, |b, k| if scores[k] > scores[b] { k } else { b });
        let d = state.decided.unwrap();
        prop_assert_eq!(d.label, format!("t{best}"));
        prop_assert!((d.confidence - scores[best]).abs() < 1e-12);
        prop_assert_eq!(d.decided_at_tick, probe.sample_count());
    }

    #[test]
    fn pruning_is_monotone_and_deterministic(
        templates in proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, 42), 2..8),
        probe in proptest::collection::vec(0.01f64..1.0, 42),
        threshold in 0.05f64..1.0,
        warmup in 0usize..10,
    ) {
        let store = synthetic_store(&templates);
        let probe = synthetic_bundle(&probe, &[8, 4, 2], 3);
        let cfg = MatchConfig { prune_threshold: threshold, warmup };
        let a = match_stream(&store, &probe, cfg).unwrap();
        let b = match_stream(&store, &probe, cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.alive_count() >= 1);
        let counts: Vec<usize> = a.alive_history.iter().map(|h| h.1).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(counts.iter().all(|&c| c < store.len()));
        let label = a.decided.clone().unwrap().label;
        prop_assert!(a.alive().contains(&label.as_str()));
    }
}
