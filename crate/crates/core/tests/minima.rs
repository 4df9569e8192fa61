//! The enumeration oracle against two independent references: a plain scan of
//! the whole box, and the convergents of a continued fraction.

use pgnlab::minima::{
    compare_to_reference, compare_to_system, convergent_levels, convergent_vectors,
    integer_determinant, successive_minima, sum_deviation_bound, trajectory,
    two_system_from_levels, uniform_grid, ContinuedFraction, DirectionVector, MinimaSample,
    RadiusSchedule,
};
use pgnlab::rational::int;
use pgnlab::system::{Extension, PLSystem};

const GOLDEN: &str = "[1;1,...]";

fn golden() -> DirectionVector {
    DirectionVector::from_continued_fraction(&ContinuedFraction::parse(GOLDEN).unwrap()).unwrap()
}

fn rank(vectors: &[Vec<i64>]) -> usize {
    // rank via determinants of leading square blocks is enough for ≤ 4 vectors
    let mut rows: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&a| a as f64).collect())
        .collect();
    let mut r = 0;
    let cols = rows.first().map_or(0, |v| v.len());
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c].abs() > 1e-9) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let f = rows[i][c] / rows[r][c];
            for j in 0..cols {
                rows[i][j] -= f * rows[r][j];
            }
        }
        r += 1;
    }
    r
}

/// Every point of the box, sorted by stretch, greedy independent selection.
fn full_box(u: &DirectionVector, q: f64, radius: i64) -> Vec<f64> {
    let dim = u.dimension();
    let span = 2 * radius + 1;
    let mut all: Vec<(f64, Vec<i64>)> = Vec::new();
    for code in 0..span.pow(dim as u32) {
        let mut c = code;
        let x: Vec<i64> = (0..dim)
            .map(|_| {
                let v = c % span - radius;
                c /= span;
                v
            })
            .collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        all.push((u.stretch(&x, q), x));
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    let mut out = Vec::new();
    for (s, x) in all {
        let mut trial = chosen.clone();
        trial.push(x);
        if rank(&trial) == trial.len() {
            chosen = trial;
            out.push(s.ln());
            if out.len() == dim {
                break;
            }
        }
    }
    out
}

fn check_sample(u: &DirectionVector, s: &MinimaSample) {
    assert!(s.l.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    for (x, l) in s.witnesses.iter().zip(&s.l) {
        assert!((u.stretch(x, s.q).ln() - l).abs() < 1e-12);
    }
    assert_ne!(integer_determinant(&s.witnesses), 0);
}

#[test]
fn agrees_with_full_box_scan() {
    let dirs = [
        "cf:[1;2,...]",
        "1, 1.2599210498948732, 1.5874010519681994",
        "1, 1.189207115002721, 1.4142135623730951, 1.681792830507429",
    ];
    for (text, qs, radius) in [
        (dirs[0], [0.0, 2.5, 6.0], 40),
        (dirs[1], [0.0, 1.5, 4.0], 8),
        (dirs[2], [0.0, 1.0, 3.0], 4),
    ] {
        let u = DirectionVector::parse(text).unwrap();
        for q in qs {
            let s = successive_minima(&u, q, radius).unwrap();
            assert!(s.sufficient, "{text} q={q}");
            check_sample(&u, &s);
            let reference = full_box(&u, q, radius);
            for (a, b) in s.l.iter().zip(&reference) {
                assert!(
                    (a - b).abs() < 1e-12,
                    "{text} q={q}: {:?} vs {reference:?}",
                    s.l
                );
            }
        }
    }
}

#[test]
fn golden_first_minimum_is_a_convergent() {
    let cf = ContinuedFraction::parse(GOLDEN).unwrap();
    let u = golden();
    let convergents = convergent_vectors(&cf, 40);
    // at q = 0 the points (0, 1) and (1, 0) tie, so start above it
    for q in [0.5, 3.0, 7.5, 10.0, 12.25] {
        let s = trajectory(
            &u,
            &[q],
            RadiusSchedule::Doubling {
                start: 2,
                max: 1 << 12,
            },
        )
        .unwrap()
        .samples
        .remove(0);
        assert!(s.sufficient);
        let best = convergents
            .iter()
            .map(|x| (u.stretch(x, q), x.to_vec()))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        assert!((best.0.ln() - s.l[0]).abs() < 1e-12, "q={q}");
        assert_eq!(best.1, s.witnesses[0], "q={q}");
    }
}

#[test]
fn golden_trajectory() {
    let u = golden();
    let t = trajectory(
        &u,
        &uniform_grid(14.0, 0.25),
        RadiusSchedule::Doubling {
            start: 2,
            max: 1 << 14,
        },
    )
    .unwrap();
    assert!(t.all_sufficient());
    assert!(
        (0.40..=0.55).contains(&t.ratio_max[0]),
        "{}",
        t.ratio_max[0]
    );
    assert!(t.sum_deviation() <= sum_deviation_bound(1).unwrap());
    for d in 0..2 {
        assert!(t.samples.windows(2).all(|w| w[1].l[d] >= w[0].l[d] - 1e-12));
    }
    for s in &t.samples {
        check_sample(&u, s);
    }

    let cf = ContinuedFraction::parse(GOLDEN).unwrap();
    let cf_system = two_system_from_levels(&convergent_levels(&cf, 7.0)).unwrap();
    assert!(cf_system.validate().valid);
    let near = compare_to_system(&t.samples, &cf_system).unwrap();
    assert!(near.bounded, "{near:?}");
    let uniform = PLSystem::uniform(1, int(0), int(15), Extension::Finite).unwrap();
    let flat = compare_to_system(&t.samples, &uniform).unwrap();
    assert!(flat.bounded, "{flat:?}");
    let own = compare_to_reference(&t.samples, |q| {
        Ok(t.samples.iter().find(|s| s.q == q).unwrap().l.clone())
    })
    .unwrap();
    assert_eq!(own.sup, 0.0);
}

#[test]
fn sum_stays_near_q_in_higher_dimension() {
    for (text, qmax) in [
        ("1, 1.2599210498948732, 1.5874010519681994", 10.0),
        (
            "1, 1.189207115002721, 1.4142135623730951, 1.681792830507429",
            8.0,
        ),
    ] {
        let u = DirectionVector::parse(text).unwrap();
        let t = trajectory(
            &u,
            &uniform_grid(qmax, 0.5),
            RadiusSchedule::Doubling {
                start: 2,
                max: 1 << 10,
            },
        )
        .unwrap();
        assert!(t.all_sufficient());
        assert!(t.sum_deviation() <= sum_deviation_bound(u.dimension() - 1).unwrap());
    }
}

#[test]
fn dimension_mismatch_is_an_error() {
    let u = golden();
    let t = trajectory(&u, &[0.0, 1.0], RadiusSchedule::Fixed(8)).unwrap();
    let sys = PLSystem::uniform(2, int(0), int(3), Extension::Finite).unwrap();
    assert!(compare_to_system(&t.samples, &sys).is_err());
}
