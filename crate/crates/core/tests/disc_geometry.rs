use std::f64::consts::TAU;

use proptest::prelude::*;
use rpn_core::disc::{build_disc, map_pixels, DiscLayout, DiscSpec};

/// Exhaustive nearest neuron with lowest-(arm, ring) tie-breaking.
fn brute_nearest(layout: &DiscLayout, x: f64, y: f64, exclude: Option<usize>) -> (usize, f64) {
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for idx in 0..layout.positions().len() {
        if Some(idx) == exclude {
            continue;
        }
        let (arm, ring) = layout.coords(idx);
        let [ox, oy] = layout.offset(idx);
        let d2 = (x - ox) * (x - ox) + (y - oy) * (y - oy);
        if best.is_none_or(|(bd, ba, br, _)| d2 < bd || (d2 == bd && (arm, ring) < (ba, br))) {
            best = Some((d2, arm, ring, idx));
        }
    }
    let (d2, _, _, idx) = best.unwrap();
    (idx, d2)
}

fn cv(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

#[test]
fn pixel_map_matches_exhaustive_search() {
    for spec in [DiscSpec::spoke(8, 8, 32.0), DiscSpec::spiral(8, 8, 32.0, 2.0)] {
        let layout = build_disc(spec).unwrap();
        let map = map_pixels(&layout, 64, 64).unwrap();
        let (cx, cy) = map.center;
        assert_eq!((cx, cy), (31.5, 31.5));
        for py in 0..64 {
            for px in 0..64 {
                let (dx, dy) = (px as f64 - cx, py as f64 - cy);
                let expected = if dx * dx + dy * dy <= 32.0 * 32.0 {
                    Some(brute_nearest(&layout, dx, dy, None).0 as u32)
                } else {
                    None
                };
                assert_eq!(map.assignment[py * 64 + px], expected, "pixel ({px}, {py})");
            }
        }
    }
}

#[test]
fn pixel_map_matches_exhaustive_search_many_arms() {
    // More than eight arms takes the bracketed-arm fast path.
    let layout = build_disc(DiscSpec::spiral(37, 11, 20.0, 1.5)).unwrap();
    let map = map_pixels(&layout, 41, 41).unwrap();
    for (i, got) in map.assignment.iter().enumerate() {
        let (dx, dy) = ((i % 41) as f64 - 20.0, (i / 41) as f64 - 20.0);
        if dx * dx + dy * dy <= 400.0 {
            assert_eq!(*got, Some(brute_nearest(&layout, dx, dy, None).0 as u32));
        } else {
            assert_eq!(*got, None);
        }
    }
}

#[test]
fn nonempty_preimages_are_connected() {
    let layout = build_disc(DiscSpec::spoke(8, 8, 32.0)).unwrap();
    let map = map_pixels(&layout, 64, 64).unwrap();
    let sizes = map.preimage_sizes();
    assert!(sizes.iter().all(|&s| s > 0));
    for neuron in 0..map.neuron_count() {
        let pixels: Vec<usize> = (0..map.assignment.len())
            .filter(|&i| map.assignment[i] == Some(neuron as u32))
            .collect();
        let mut seen = vec![pixels[0]];
        let mut frontier = vec![pixels[0]];
        while let Some(p) = frontier.pop() {
            let (x, y) = ((p % 64) as i64, (p / 64) as i64);
            for (dx, dy) in [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1), (-1, 1), (1, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if !(0..64).contains(&nx) || !(0..64).contains(&ny) {
                    continue;
                }
                let q = (ny * 64 + nx) as usize;
                if map.assignment[q] == Some(neuron as u32) && !seen.contains(&q) {
                    seen.push(q);
                    frontier.push(q);
                }
            }
        }
        assert_eq!(seen.len(), pixels.len(), "neuron {neuron} preimage is split");
    }
}

#[test]
fn full_size_disc_assigns_every_in_disc_pixel() {
    let layout = build_disc(DiscSpec::spiral(200, 200, 100.0, 1.0)).unwrap();
    let map = map_pixels(&layout, 200, 200).unwrap();
    let in_disc = (0..200 * 200)
        .filter(|i| {
            let (dx, dy) = ((i % 200) as f64 - 99.5, (i / 200) as f64 - 99.5);
            dx * dx + dy * dy <= 100.0 * 100.0
        })
        .count();
    assert_eq!(map.assigned_pixels(), in_disc);
    // The disc holds fewer pixels than the 40 000 neurons, so some neurons
    // necessarily see no pixel at all.
    assert!(in_disc < 40_000);
    assert!(map.empty_neurons() >= 40_000 - in_disc);
    // Rings are half a pixel apart, so near the centre a ring can fall between
    // pixel radii. Away from the centre every ring is hit.
    let sizes = map.preimage_sizes();
    for ring in 4..200 {
        let ring_total: usize = (0..200).map(|arm| sizes[layout.index(arm, ring)]).sum();
        assert!(ring_total > 0, "ring {ring} is empty");
    }
}

#[test]
fn nearest_neighbor_distances_match_brute_force() {
    for spec in [DiscSpec::spoke(60, 60, 50.0), DiscSpec::spiral(60, 60, 50.0, 1.0)] {
        let layout = build_disc(spec).unwrap();
        let fast = layout.nearest_neighbor_distances();
        for (i, d) in fast.iter().enumerate() {
            let [x, y] = layout.offset(i);
            let (_, d2) = brute_nearest(&layout, x, y, Some(i));
            assert_eq!(*d, d2.sqrt());
        }
        assert!((layout.uniformity_score() - cv(&fast)).abs() < 1e-12);
    }
}

/// Twisting rings never brings neurons closer than the spoke layout does: the
/// in-ring spacing is unchanged and an adjacent ring is at least the radial
/// step away. Uniformity can therefore only match or trail the spoke score.
#[test]
fn spiral_spacing_bounded_below_by_spoke() {
    let spoke = build_disc(DiscSpec::spoke(200, 200, 100.0)).unwrap();
    let spiral = build_disc(DiscSpec::spiral(200, 200, 100.0, 1.0)).unwrap();
    let a = spoke.nearest_neighbor_distances();
    let b = spiral.nearest_neighbor_distances();
    for (i, (s, t)) in a.iter().zip(&b).enumerate() {
        assert!(t + 1e-12 >= *s, "neuron {i}: spiral {t} < spoke {s}");
    }
    assert!(spiral.uniformity_score() >= spoke.uniformity_score() - 1e-12);
}

#[test]
fn radii_increase_and_stay_inside() {
    for spec in [DiscSpec::spoke(30, 10, 7.0), DiscSpec::spiral(30, 10, 7.0, 3.0)] {
        let layout = build_disc(spec).unwrap();
        for arm in 0..30 {
            for ring in 1..10 {
                assert!(layout.polar(arm, ring)[0] > layout.polar(arm, ring - 1)[0]);
            }
            assert!(layout.polar(arm, 9)[0] <= 7.0);
        }
    }
}

fn assert_rotation_symmetric(layout: &DiscLayout) {
    let arms = layout.spec().arms;
    let rings = layout.spec().rings;
    let step = TAU / arms as f64;
    for arm in 0..arms {
        for ring in 0..rings {
            let [r, theta] = layout.polar(arm, ring);
            let [r2, theta2] = layout.polar((arm + 1) % arms, ring);
            let rotated = theta + step;
            let (x, y) = (r * rotated.cos(), r * rotated.sin());
            let (x2, y2) = (r2 * theta2.cos(), r2 * theta2.sin());
            assert!((x - x2).abs() < 1e-9 && (y - y2).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn layouts_are_rotation_symmetric_and_deterministic(
        arms in 1usize..64,
        rings in 1usize..40,
        radius in 0.5f64..150.0,
        gain in 0.0f64..4.0,
        spiral in any::<bool>(),
    ) {
        let spec = if spiral {
            DiscSpec::spiral(arms, rings, radius, gain)
        } else {
            DiscSpec::spoke(arms, rings, radius)
        };
        let a = build_disc(spec).unwrap();
        let b = build_disc(spec).unwrap();
        prop_assert_eq!(a.positions(), b.positions());
        prop_assert_eq!(a.uniformity_score().to_bits(), b.uniformity_score().to_bits());
        assert_rotation_symmetric(&a);
        for arm in 0..arms {
            for ring in 1..rings {
                prop_assert!(a.polar(arm, ring)[0] > a.polar(arm, ring - 1)[0]);
            }
        }
    }
}
