mod common;

use std::collections::HashSet;
use std::ops::ControlFlow;

use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sawext::enumerate::{enumerate_saws, sample_saw};
use sawext::graph::registry::{all, by_name};
use sawext::graph::{GrandparentGraph, GraphFamily};
use sawext::symmetry::{
    build_quasi_geodesic, decompose_walk, find_geodesic_ray, loop_erase, mass_transport_check,
    reverse_count_check, CaseTag, Reference,
};
use sawext::{Error, VertexId};

use common::{ball_isomorphic, ball_orbit, bfs_distance};

fn random_vertex(g: &dyn GraphFamily, steps: usize, rng: &mut ChaCha8Rng) -> VertexId {
    let mut v = g.origin();
    let mut buf = Vec::new();
    for _ in 0..steps {
        buf.clear();
        g.push_out_neighbors(v, &mut buf);
        g.push_in_neighbors(v, &mut buf);
        v = buf[rng.gen_range(0..buf.len())].1;
    }
    v
}

#[test]
fn random_vertices_look_like_their_class_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in all() {
        let reps = g.representatives();
        for _ in 0..6 {
            let v = random_vertex(g.as_ref(), 9, &mut rng);
            let s = reps[g.class_of(v)];
            assert!(
                ball_isomorphic(g.as_ref(), s, v, 2, &[]),
                "{}: {v:?} vs {s:?}",
                g.name()
            );
        }
    }
}

#[test]
fn weights_match_stabiliser_orbits() {
    // M(u) / M(v) = |Stab(u) v| / |Stab(v) u| for neighbours u, v
    let ratio = |name: &str, u: VertexId, v: VertexId| {
        let g = by_name(name).unwrap();
        let orbits = Rational64::new(
            ball_orbit(g.as_ref(), u, v, 3) as i64,
            ball_orbit(g.as_ref(), v, u, 3) as i64,
        );
        (g.weight(u) / g.weight(v), orbits)
    };
    let p = VertexId::planar;
    let (w, o) = ratio("decorated-square", p(0, 0), p(1, 0));
    assert_eq!(w, Rational64::from_integer(2));
    assert_eq!(w, o);
    let (w, o) = ratio("square", p(0, 0), p(1, 0));
    assert_eq!(
        (w, o),
        (Rational64::from_integer(1), Rational64::from_integer(1))
    );

    let g = by_name("grandparent").unwrap();
    let child = GrandparentGraph::child(g.origin(), 1);
    let (w, o) = ratio("grandparent", g.origin(), child);
    assert_eq!(w, Rational64::from_integer(2));
    assert_eq!(w, o);
}

#[test]
fn grandparent_closed_form_distance_matches_bfs() {
    let g = by_name("grandparent").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let u = random_vertex(g.as_ref(), 3, &mut rng);
        let v = random_vertex(g.as_ref(), 3, &mut rng);
        assert_eq!(
            Some(GrandparentGraph::distance(u, v)),
            bfs_distance(g.as_ref(), u, v, 6),
            "{u:?} {v:?}"
        );
    }
}

#[test]
fn grandparent_window_forty_is_certified() {
    let g = by_name("grandparent").unwrap();
    let q = build_quasi_geodesic(g.as_ref(), 40).unwrap();
    assert!(q.alpha > Rational64::from_integer(0));
    let w = q.window as i64;
    let mut buf = Vec::new();
    for i in 0..w {
        for (from, to, label) in [
            (q.v(i + 1), q.v(i), q.plus_edges[i as usize]),
            (q.v(-i - 1), q.v(-i), q.minus_edges[i as usize]),
        ] {
            buf.clear();
            g.push_out_neighbors(from, &mut buf);
            assert!(buf.contains(&(label, to)), "edge at {i}");
        }
    }
    let distinct: HashSet<VertexId> = q.vertices.iter().copied().collect();
    assert_eq!(distinct.len(), q.vertices.len());
    for i in -w..=w {
        for j in i + 1..=w {
            let d = GrandparentGraph::distance(q.v(i), q.v(j)) as i64;
            assert!(
                Rational64::from_integer(d) >= q.alpha * (j - i),
                "({i}, {j})"
            );
        }
    }
}

#[test]
fn quasi_geodesic_is_refused_off_grandparent() {
    let g = by_name("square").unwrap();
    assert!(matches!(
        build_quasi_geodesic(g.as_ref(), 5),
        Err(Error::Unsupported { .. })
    ));
    let g = by_name("oriented-ladder").unwrap();
    assert!(matches!(
        find_geodesic_ray(g.as_ref(), g.origin(), 5),
        Err(Error::Unsupported { .. })
    ));
}

#[test]
fn geodesic_rays_are_geodesic() {
    for name in [
        "square",
        "triangular",
        "cubic",
        "ladder",
        "tree3",
        "decorated-square",
    ] {
        let g = by_name(name).unwrap();
        let ray = find_geodesic_ray(g.as_ref(), g.origin(), 8).unwrap();
        assert_eq!(ray.len(), 9);
        for i in 0..ray.len() {
            for j in i + 1..ray.len() {
                assert_eq!(
                    bfs_distance(g.as_ref(), ray[i], ray[j], 9),
                    Some(j - i),
                    "{name} ({i}, {j})"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn loop_erasure_is_self_avoiding(steps in proptest::collection::vec(0usize..4, 1..60), zero in 0usize..60) {
        let p = VertexId::planar;
        let mut seq = vec![p(0, 0)];
        for s in steps {
            let [x, y, _] = seq.last().unwrap().0;
            let d = [(1, 0), (-1, 0), (0, 1), (0, -1)][s];
            seq.push(p(x + d.0, y + d.1));
        }
        let zero = zero.min(seq.len() - 1);
        let (erased, z) = loop_erase(&seq, zero);
        let distinct: HashSet<VertexId> = erased.iter().copied().collect();
        prop_assert_eq!(distinct.len(), erased.len());
        prop_assert!(erased.iter().all(|v| seq.contains(v)));
        prop_assert_eq!(erased.first(), seq.first());
        prop_assert_eq!(erased.last(), seq.last());
        prop_assert!(z < erased.len());
        prop_assert!(erased.windows(2).all(|w| (w[0].0[0] - w[1].0[0]).abs() + (w[0].0[1] - w[1].0[1]).abs() == 1));
    }
}

#[test]
fn mass_transport_is_exact() {
    for (name, n_max) in [
        ("square", 6),
        ("decorated-square", 6),
        ("ladder", 8),
        ("tree3", 8),
    ] {
        let g = by_name(name).unwrap();
        for n in 0..=n_max {
            let r = mass_transport_check(&g, n).unwrap();
            assert!(r.equal, "{name} n={n}: {} vs {}", r.lhs, r.rhs);
        }
    }
}

#[test]
fn reversal_identity_on_square_is_exact() {
    let g = by_name("square").unwrap();
    for n in 0..=8 {
        let r = reverse_count_check(&g, n).unwrap();
        assert!(
            r.exact_required && r.holds && r.forward == r.backward_reversed,
            "n={n}"
        );
    }
}

#[test]
fn reversal_within_constant_on_decorated_square() {
    let g = by_name("decorated-square").unwrap();
    for n in 0..=8 {
        let r = reverse_count_check(&g, n).unwrap();
        assert!(!r.exact_required && r.holds, "n={n}: {r:?}");
    }
}

#[test]
fn non_unimodular_family_is_refused() {
    let g = by_name("grandparent").unwrap();
    assert!(matches!(
        mass_transport_check(&g, 3),
        Err(Error::NotUnimodular { .. })
    ));
    assert!(matches!(
        reverse_count_check(&g, 3),
        Err(Error::NotUnimodular { .. })
    ));
}

#[test]
fn sampled_square_walks_decompose_along_a_ray() {
    let g = by_name("square").unwrap();
    let ray = find_geodesic_ray(g.as_ref(), g.origin(), 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let w = sample_saw(g.as_ref(), g.origin(), n, &mut rng).unwrap();
        let d = decompose_walk(g.as_ref(), &w, Reference::Ray(&ray), 0.3).unwrap();
        assert_eq!(d.case, CaseTag::Geodesic);
        assert!(d.all_certified, "{:?}", w.vertices);
        assert_eq!(d.segments[0].piece.len() + d.segments[1].piece.len(), n);
    }
}

#[test]
fn short_grandparent_walks_decompose_along_the_quasi_geodesic() {
    let g = by_name("grandparent").unwrap();
    let q = build_quasi_geodesic(g.as_ref(), 12).unwrap();
    for n in 1..=6 {
        let _ = enumerate_saws(g.as_ref(), g.origin(), n, |w| {
            let d = decompose_walk(g.as_ref(), &w.to_walk(), Reference::Quasi(&q), 0.3).unwrap();
            assert!(d.all_certified, "{:?}", w.vertices);
            match d.case {
                CaseTag::FewPlus => assert!(d.k <= d.s_plus.len()),
                CaseTag::FewMinus => assert!(d.k <= d.s_minus.len()),
                CaseTag::ManyBoth => assert_eq!(d.segments.len(), 1),
                CaseTag::Geodesic => panic!("a quasi-geodesic reference never yields the ray case"),
            }
            ControlFlow::<()>::Continue(())
        })
        .unwrap();
    }
}

#[test]
fn delta_outside_the_open_half_interval_is_refused() {
    let g = by_name("square").unwrap();
    let ray = find_geodesic_ray(g.as_ref(), g.origin(), 4).unwrap();
    let w = sawext::Walk::trivial(g.origin());
    for delta in [0.0, 0.5, -1.0] {
        assert!(matches!(
            decompose_walk(g.as_ref(), &w, Reference::Ray(&ray), delta),
            Err(Error::Parse(_))
        ));
    }
}
