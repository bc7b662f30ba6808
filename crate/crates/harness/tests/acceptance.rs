//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the
//! lines always reach the test log.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpn_core::bank::{BankSpec, BundleEntry, TPBundle};
use rpn_core::normalize::{normalize, NormalizedTP, SourceMeta, DEFAULT_ALPHA};
use rpn_core::prefilter::default_radial_bank;
use rpn_core::similarity::{cosine, spearman};
use rpn_core::timing::{report, TimingParams};
use rpn_core::{match_stream, ripple, ActivationField, Bank, DiscSpec, MatchConfig, PipelineParams, TemplateStore};
use rpn_harness::config::default_disc;
use rpn_harness::corpus;
use rpn_harness::demo::connect_dots;
use rpn_harness::sweep::{self, SweepConfig};
use rpn_harness::transform::TransformKind;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_field(rng: &mut ChaCha8Rng, max_side: usize) -> ActivationField {
    let arms = rng.gen_range(1..=max_side);
    let rings = rng.gen_range(1..=max_side);
    let density: f64 = rng.gen_range(0.05..1.0);
    let values = (0..arms * rings)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(0.0..10.0) } else { 0.0 })
        .collect();
    ActivationField::new(arms, rings, values).unwrap()
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let tp = ripple(&random_field(&mut rng, 256));
        let total: f64 = tp.samples.iter().sum();
        let rel = if tp.inh0 == 0.0 { total.abs() } else { (total - tp.inh0).abs() / tp.inh0 };
        worst = worst.max(rel);
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-9 && elapsed < Duration::from_secs(5),
        format!("1000 fields, worst relative error {worst:.2e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn permutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..200 {
        let field = random_field(&mut rng, 128);
        let mut perm: Vec<usize> = (0..field.arms()).collect();
        perm.shuffle(&mut rng);
        let a = ripple(&field);
        let b = ripple(&field.permute_arms(&perm).unwrap());
        let same = a.samples.iter().zip(&b.samples).all(|(x, y)| x.to_bits() == y.to_bits())
            && a.inh_trace.iter().zip(&b.inh_trace).all(|(x, y)| x.to_bits() == y.to_bits());
        mismatches += usize::from(!same);
    }
    check(mismatches == 0, format!("200 fields, {mismatches} not bit-identical"))
}

fn corpus_images() -> Vec<(String, rpn_core::Frame)> {
    corpus::generate(corpus::DEFAULT_SIZE).into_iter().map(|c| (c.id, c.frame)).collect()
}

fn rotation_periodicity() -> Outcome {
    const PER_PERIOD: usize = 10;
    let disc = default_disc();
    let period = 2.0 * PI / disc.arms as f64;
    let steps: Vec<f64> = (0..=2 * PER_PERIOD).map(|k| k as f64 * period / PER_PERIOD as f64).collect();
    let start = Instant::now();
    let result = sweep::run(&SweepConfig::new(disc, TransformKind::Rotation, steps), corpus_images())
        .map_err(|e| e.to_string())?;
    let (mut cos_dev, mut sp_dev) = (0.0, 0.0);
    for k in 0..=PER_PERIOD {
        let (a, b) = (&result.aggregates[k], &result.aggregates[k + PER_PERIOD]);
        cos_dev += (a.cosine_mean - b.cosine_mean).abs() / (PER_PERIOD + 1) as f64;
        sp_dev += (a.spearman_mean - b.spearman_mean).abs() / (PER_PERIOD + 1) as f64;
    }
    let dip = result.aggregates.iter().map(|a| a.cosine_mean).fold(f64::INFINITY, f64::min);
    check(
        cos_dev <= 0.05 && sp_dev <= 0.05 && result.failure_count() == 0,
        format!(
            "{} images, period 2pi/{}: mean abs deviation cosine {cos_dev:.4}, spearman {sp_dev:.4}; lowest mean cosine {dip:.4}; {:.1} s",
            result.rows.len() / (2 * PER_PERIOD + 1),
            disc.arms,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn shift_sensitivity() -> Outcome {
    let cfg = SweepConfig::new(default_disc(), TransformKind::Shift, vec![0.0, 0.1]);
    let result = sweep::run(&cfg, corpus_images()).map_err(|e| e.to_string())?;
    let (base, moved) = (&result.aggregates[0], &result.aggregates[1]);
    let cos_drop = base.cosine_mean - moved.cosine_mean;
    let sp_drop = base.spearman_mean - moved.spearman_mean;
    check(
        (cos_drop - 0.17).abs() <= 0.10 && (sp_drop - 0.25).abs() <= 0.10,
        format!("{} images at 10%: cosine drop {cos_drop:.4}, spearman drop {sp_drop:.4}", moved.count),
    )
}

/// Radial profile vanishing smoothly at `u = 1`.
fn profile(coeffs: &[f64], u: f64) -> f64 {
    if u >= 1.0 {
        return 0.0;
    }
    let wave: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * (PI * (k + 1) as f64 * u).cos())
        .sum();
    (1.5 + wave) * (1.0 - u * u).powi(2)
}

/// Activity `ρ(n / extent) · n · tilt(arm)` on 1-based ring `n`. The factor `n`
/// is annulus area, so doubling `extent` is a 2x dilation with 4x total.
fn radial_field(arms: usize, rings: usize, extent: f64, coeffs: &[f64], tilt: &[f64]) -> ActivationField {
    ActivationField::from_fn(arms, rings, |arm, ring| {
        let n = (ring + 1) as f64;
        profile(coeffs, n / extent) * n * tilt[arm]
    })
    .unwrap()
}

fn dilation() -> Outcome {
    const N: usize = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut devs = Vec::new();
    for _ in 0..100 {
        let arms = rng.gen_range(1..=32);
        let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.35..0.35)).collect();
        let tilt: Vec<f64> = (0..arms).map(|_| rng.gen_range(0.5..1.5)).collect();
        let small = ripple(&radial_field(arms, N, N as f64 / 2.0, &coeffs, &tilt));
        let large = ripple(&radial_field(arms, N, N as f64, &coeffs, &tilt));
        let a = normalize(&small, N, DEFAULT_ALPHA).map_err(|e| e.to_string())?;
        let b = normalize(&large, N, DEFAULT_ALPHA).map_err(|e| e.to_string())?;
        let peak = a.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let dev = a.samples.iter().zip(&b.samples).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        devs.push(dev / peak);
    }
    devs.sort_by(f64::total_cmp);
    let within = devs.iter().filter(|d| **d <= 0.05).count();
    check(
        within == devs.len(),
        format!(
            "100 cases, N = {N}, alpha {DEFAULT_ALPHA}: deviation median {:.2}%, worst {:.2}% of peak; {within}/100 within 5%",
            100.0 * devs[devs.len() / 2],
            100.0 * devs[devs.len() - 1]
        ),
    )
}

fn timing() -> Outcome {
    let r = report(&TimingParams {
        t_project_ns: 240,
        t_ripple_ns: 1,
        t_pcn_ns: 10,
        n: 500,
    });
    check(
        r.worst_case_ns == 5740 && r.overlapped_ns == 5240,
        format!("worst case {} ns, overlapped {} ns", r.worst_case_ns, r.overlapped_ns),
    )
}

fn connect_the_dots() -> Outcome {
    let spec = BankSpec::standard(default_disc());
    let rep = connect_dots(&spec, PipelineParams::default(), MatchConfig::default(), 200, None)
        .map_err(|e| e.to_string())?;
    let decided = |p: &str| rep.outcome(p).map(|o| o.decided.clone()).unwrap_or_default();
    let (intact, cut) = (decided("intact-square"), decided("corner-cut-square"));
    check(
        intact == "square" && cut == "octagon",
        format!("intact square -> {intact}, corner-cut square -> {cut}, dashed square -> {}", decided("dashed-square")),
    )
}

fn naive_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Rank by counting: 1 + #smaller + (#equal − 1)/2.
fn naive_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let less = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

fn naive_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn metric_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut cos_err, mut sp_err) = (0.0f64, 0.0f64);
    let mut pairs = 0;
    while pairs < 1000 {
        let len = rng.gen_range(2..200);
        // Small integer alphabets force ties.
        let levels = rng.gen_range(2..12);
        let mut draw = || (0..len).map(|_| rng.gen_range(0..levels) as f64 * 0.5).collect::<Vec<f64>>();
        let (a, b) = (draw(), draw());
        if a.iter().all(|x| *x == a[0]) || b.iter().all(|x| *x == b[0]) || a.iter().all(|x| *x == 0.0) {
            continue;
        }
        pairs += 1;
        cos_err = cos_err.max((cosine(&a, &b).unwrap() - naive_cosine(&a, &b)).abs());
        let want = naive_pearson(&naive_ranks(&a), &naive_ranks(&b));
        sp_err = sp_err.max((spearman(&a, &b).unwrap() - want).abs());
    }
    check(
        cos_err <= 1e-12 && sp_err <= 1e-12,
        format!("1000 tied pairs: max error cosine {cos_err:.1e}, spearman {sp_err:.1e}"),
    )
}

fn bundle(rng: &mut ChaCha8Rng, densities: &[usize], orientations: usize) -> TPBundle {
    let mut entries = Vec::new();
    for i in 0..orientations {
        for (j, &d) in densities.iter().enumerate() {
            entries.push(BundleEntry {
                orientation_index: i,
                density_index: j,
                orientation_deg: 45.0 * i as f64,
                rings: d,
                completion_tick: d,
                tp: NormalizedTP {
                    samples: (0..d).map(|_| rng.gen_range(0.0..1.0)).collect(),
                    warp: 1.0,
                    amp_divisor: 1.0,
                    source: SourceMeta { inh0: 1.0, lag: 0, t_tp: 0, rings: d },
                },
            });
        }
    }
    TPBundle {
        orientations,
        densities: densities.len(),
        entries,
    }
}

fn exhaustive_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = BankSpec::halving(DiscSpec::spoke(16, 16, 8.0), default_radial_bank(), 3);
    let mut store = TemplateStore::new(spec.clone());
    for k in 0..20 {
        store.enroll(format!("t{k}"), bundle(&mut rng, &spec.densities, 3)).unwrap();
    }
    let mut disagreements = 0;
    for _ in 0..100 {
        let probe = bundle(&mut rng, &spec.densities, 3);
        let x = probe.concatenated();
        let mut best = (0, f64::NEG_INFINITY);
        for (k, t) in store.templates.iter().enumerate() {
            let c = naive_cosine(&x, &t.bundle.concatenated());
            if c > best.1 {
                best = (k, c);
            }
        }
        let state = match_stream(&store, &probe, MatchConfig::exhaustive()).map_err(|e| e.to_string())?;
        disagreements += usize::from(state.decided.unwrap().label != store.templates[best.0].label);
    }
    check(disagreements == 0, format!("20 templates, 100 probes, {disagreements} disagreements"))
}

fn bundle_shape() -> Outcome {
    let spec = BankSpec::standard(default_disc());
    let bank = Bank::new(spec, 200, 200, PipelineParams::default()).map_err(|e| e.to_string())?;
    let images = corpus_images();
    let mut bad = Vec::new();
    for (id, frame) in &images {
        let b = bank.run(frame).map_err(|e| e.to_string())?;
        let shape_ok = b.entries.len() == 9 && b.orientations == 3 && b.densities == 3;
        let order_ok = (0..3).all(|i| {
            (1..3).all(|j| b.completion_tick(i, j) <= b.completion_tick(i, j - 1))
        });
        if !(shape_ok && order_ok) {
            bad.push(id.clone());
        }
    }
    check(
        bad.is_empty(),
        format!("{} probes, 9 TPs each, coarse before fine; violations: {bad:?}", images.len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("conservation", conservation),
        ("arm-permutation invariance", permutation),
        ("rotation periodicity", rotation_periodicity),
        ("shift sensitivity", shift_sensitivity),
        ("dilation invariance", dilation),
        ("timing model", timing),
        ("connect the dots", connect_the_dots),
        ("metric oracles", metric_oracles),
        ("exhaustive-match equivalence", exhaustive_equivalence),
        ("bundle shape and ordering", bundle_shape),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
