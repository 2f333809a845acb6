use std::cmp::Ordering;

use chebpot::{dim_h0, lattice_points, lex_compare, round_to_lattice, LatticeBasis, SimplexPoint};
use proptest::prelude::*;

#[test]
fn lattice_counts_match_binomials() {
    for n in 1..=3 {
        for m in 1..=10u32 {
            let pts = lattice_points(n, m);
            assert_eq!(pts.len() as u64, dim_h0(n, m), "n={n} m={m}");
            let basis = LatticeBasis::new(n, m);
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(basis.index_of(p), Some(i));
            }
        }
    }
}

#[test]
fn scaled_lattice_points_lie_in_the_simplex() {
    for n in 1..=3 {
        for m in 1..=6u32 {
            for p in lattice_points(n, m) {
                let alpha: Vec<f64> = p.valuation().iter().map(|&k| f64::from(k) / f64::from(m)).collect();
                assert!(SimplexPoint::new(alpha).unwrap().in_closed_simplex(1e-15));
            }
        }
    }
}

proptest! {
    #[test]
    fn lex_is_a_strict_total_order(
        n in 1usize..4,
        m in 1u32..7,
        picks in prop::collection::vec(any::<prop::sample::Index>(), 3),
    ) {
        let pts = lattice_points(n, m);
        let [a, b, c] = [&pts[picks[0].index(pts.len())], &pts[picks[1].index(pts.len())], &pts[picks[2].index(pts.len())]];
        let ab = lex_compare(a, b).unwrap();
        prop_assert_eq!(ab.reverse(), lex_compare(b, a).unwrap());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab == Ordering::Less && lex_compare(b, c).unwrap() == Ordering::Less {
            prop_assert_eq!(lex_compare(a, c).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn lattice_points_are_sorted(n in 1usize..4, m in 1u32..8) {
        let pts = lattice_points(n, m);
        for w in pts.windows(2) {
            prop_assert_eq!(lex_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn rounding_is_nearest(raw in prop::collection::vec(0.0f64..1.0, 2), m in 1u32..30) {
        // Normalise into the simplex, with room for the slack coordinate.
        let total: f64 = raw.iter().sum::<f64>() + 0.3;
        let alpha = SimplexPoint::new(raw.iter().map(|x| x / total).collect()).unwrap();
        let target: Vec<f64> = alpha.barycentric().iter().map(|x| x * f64::from(m)).collect();
        let dist = |e: &[u32]| e.iter().zip(&target).map(|(&k, t)| (f64::from(k) - t).abs()).sum::<f64>();
        let chosen = round_to_lattice(&alpha, m).unwrap();
        prop_assert_eq!(chosen.degree(), m);
        let best = lattice_points(2, m).iter().map(|p| dist(p.exponents())).fold(f64::INFINITY, f64::min);
        prop_assert!(dist(chosen.exponents()) <= best + 1e-9);
    }
}
