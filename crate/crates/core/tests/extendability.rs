mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sawext::enumerate::sample_saw;
use sawext::extend::{certify, extendable_by, is_extendable, Side};
use sawext::graph::registry::{all, by_name};
use sawext::graph::{reverse, GraphFamily};
use sawext::{VertexId, Walk};

fn verdicts(g: &dyn GraphFamily, w: &Walk) -> [bool; 3] {
    [Side::Forward, Side::Backward, Side::Both].map(|s| is_extendable(g, w.as_ref(), s).unwrap())
}

fn oracle(w: &Walk) -> [bool; 3] {
    [
        common::square_escapes(w, w.end()),
        common::square_escapes(w, w.start()),
        common::square_doubly(w),
    ]
}

#[test]
fn square_matches_box_oracle_exhaustively() {
    let g = by_name("square").unwrap();
    for n in 0..=8 {
        for w in common::naive_walks(g.as_ref(), g.origin(), n) {
            assert_eq!(verdicts(g.as_ref(), &w), oracle(&w), "{:?}", w.vertices);
        }
    }
}

#[test]
fn forward_in_g_is_backward_in_the_reversal() {
    for g in all() {
        let rev = reverse(&g);
        for n in 0..=5 {
            for w in common::naive_walks(g.as_ref(), g.origin(), n) {
                let back =
                    Walk::from_vertices(rev.as_ref(), w.vertices.iter().rev().copied().collect())
                        .unwrap();
                assert_eq!(
                    is_extendable(g.as_ref(), w.as_ref(), Side::Forward).unwrap(),
                    is_extendable(rev.as_ref(), back.as_ref(), Side::Backward).unwrap(),
                    "{} {:?}",
                    g.name(),
                    w.vertices
                );
            }
        }
    }
}

#[test]
fn doubly_implies_both_single_sides() {
    for g in all() {
        for s in g.representatives() {
            for n in 0..=6 {
                for w in common::naive_walks(g.as_ref(), s, n) {
                    let [f, b, fb] = verdicts(g.as_ref(), &w);
                    assert!(!fb || (f && b), "{} {:?}", g.name(), w.vertices);
                }
            }
        }
    }
}

#[test]
fn extendable_walks_extend_by_k() {
    for g in all() {
        for n in 0..=4 {
            for w in common::naive_walks(g.as_ref(), g.origin(), n) {
                for (side, ok) in [Side::Forward, Side::Backward, Side::Both]
                    .into_iter()
                    .zip(verdicts(g.as_ref(), &w))
                {
                    if ok {
                        assert!(
                            extendable_by(g.as_ref(), w.as_ref(), 5, side),
                            "{} {:?} {side:?}",
                            g.name(),
                            w.vertices
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn certificates_are_checkable() {
    let g = by_name("square").unwrap();
    for w in common::naive_walks(g.as_ref(), g.origin(), 7) {
        let c = certify(g.as_ref(), w.as_ref(), Side::Forward).unwrap();
        if c.extendable {
            let path = &c.escapes[0];
            assert_eq!(path[0], w.end());
            let mut full = w.vertices.clone();
            full.extend(&path[1..]);
            assert!(Walk::from_vertices(g.as_ref(), full).is_ok());
        } else {
            assert!(c.trapped.contains(&w.end()));
        }
    }
}

#[test]
fn spiral_is_trapped() {
    let g = by_name("square").unwrap();
    let p = VertexId::planar;
    let w = Walk::from_vertices(
        g.as_ref(),
        vec![
            p(0, 0),
            p(1, 0),
            p(1, 1),
            p(1, 2),
            p(0, 2),
            p(-1, 2),
            p(-1, 1),
            p(0, 1),
        ],
    )
    .unwrap();
    assert_eq!(verdicts(g.as_ref(), &w), [false, true, false]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_square_walks_match_box_oracle(seed in any::<u64>(), n in 0usize..20) {
        let g = by_name("square").unwrap();
        let w = sample_saw(g.as_ref(), g.origin(), n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(verdicts(g.as_ref(), &w), oracle(&w));
    }

    #[test]
    fn extendable_by_is_monotone(seed in any::<u64>(), n in 0usize..8, k in 0usize..4) {
        let g = by_name("square").unwrap();
        let w = sample_saw(g.as_ref(), g.origin(), n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for side in [Side::Forward, Side::Backward, Side::Both] {
            if extendable_by(g.as_ref(), w.as_ref(), k + 1, side) {
                prop_assert!(extendable_by(g.as_ref(), w.as_ref(), k, side));
            }
        }
    }
}
