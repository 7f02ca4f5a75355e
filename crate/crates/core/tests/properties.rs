use std::collections::BTreeSet;

use proptest::prelude::*;
use ttgeo::action::{act, MappingClass};
use ttgeo::complex::{build_ball, distance_map, project};
use ttgeo::farey::{det_abs, farey_ball, resolve_i4_to_edge};
use ttgeo::fixtures::{representatives, seed};
use ttgeo::graph::{bfs_distances, rooted_isomorphism, Graph};
use ttgeo::measures::{extremal_rays, extremal_rays_pairing, is_recurrent_pairing, slope_of_measure, slope_pair};
use ttgeo::parallel::with_threads;
use ttgeo::splitting::{adjacent, large_branches, split, Chirality, SplitMove, SplitOutcome};
use ttgeo::track::{enumerate_complete, faces, permutations, relabel_pairing};
use ttgeo::{FareyEdge, Psl2, Slope, SurfaceId, TrainTrack};

fn word() -> impl Strategy<Value = Psl2> {
    prop::collection::vec(0usize..4, 0..10)
        .prop_map(|w| w.into_iter().fold(Psl2::IDENTITY, |g, i| g * Psl2::generators()[i]))
}

fn slope() -> impl Strategy<Value = Slope> {
    (-40i64..40, -40i64..40)
        .prop_filter("not both zero", |&(p, q)| (p, q) != (0, 0))
        .prop_map(|(p, q)| Slope::new(p, q).unwrap())
}

fn surface() -> impl Strategy<Value = SurfaceId> {
    prop_oneof![Just(SurfaceId::S11), Just(SurfaceId::S04)]
}

/// The track reached from the seed by following adjacent moves chosen by `steps`.
fn walk(surface: SurfaceId, steps: &[usize]) -> TrainTrack {
    let mut t = seed(surface);
    for &s in steps {
        let n = adjacent(&t);
        t = n[s % n.len()].2.clone();
    }
    t
}

fn random_graph() -> impl Strategy<Value = Graph<usize>> {
    (2usize..12).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |e| Graph::from_indexed((0..n).collect(), e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_symmetric(a in slope(), b in slope()) {
        prop_assert_eq!(det_abs(a, b), det_abs(b, a));
        prop_assert_eq!(det_abs(a, a), 0);
    }

    #[test]
    fn mediants_of_edges_are_adjacent(g in word()) {
        let FareyEdge(a, b) = g.act_on_edge(FareyEdge::base());
        prop_assert_eq!(det_abs(a, b), 1);
        let m = a.mediant(b);
        prop_assert_eq!(det_abs(a, m), 1);
        prop_assert_eq!(det_abs(b, m), 1);
    }

    #[test]
    fn resolved_edges_are_adjacent_to_both(g in word()) {
        let a = g.act_on_slope(Slope::new(1, 1).unwrap());
        let b = g.act_on_slope(Slope::new(-1, 1).unwrap());
        prop_assume!(a.height().max(b.height()) < 200);
        let e = resolve_i4_to_edge(a, b).unwrap();
        for s in [e.0, e.1] {
            prop_assert_eq!(det_abs(s, a), 1);
            prop_assert_eq!(det_abs(s, b), 1);
        }
    }

    #[test]
    fn bfs_triangle_inequality(g in random_graph(), x in 0usize..12, y in 0usize..12, z in 0usize..12) {
        let n = g.len();
        let (x, y, z) = (x % n, y % n, z % n);
        let (dx, dy) = (bfs_distances(&g, x), bfs_distances(&g, y));
        if let (Some(a), Some(b)) = (dx[y], dy[z]) {
            prop_assert!(dx[z].unwrap() <= a + b);
        }
    }

    #[test]
    fn rooted_isomorphism_of_relabelled_graphs(g in random_graph(), seed in any::<u64>(), root in 0usize..12) {
        let n = g.len();
        let root = root % n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = Graph::from_indexed((0..n).collect(), g.edges().map(|(a, b)| (perm[a], perm[b])));
        let phi = rooted_isomorphism(&g, root, &h, perm[root]).expect("relabelling is an isomorphism");
        let back = rooted_isomorphism(&h, perm[root], &g, root).expect("symmetric");
        prop_assert_eq!(phi[root], perm[root]);
        prop_assert_eq!(back[perm[root]], root);
        let mapped: BTreeSet<(usize, usize)> = g.edges().map(|(a, b)| (phi[a].min(phi[b]), phi[a].max(phi[b]))).collect();
        prop_assert_eq!(mapped, h.edges().collect::<BTreeSet<_>>());
    }

    #[test]
    fn line_graph_counts(g in random_graph()) {
        prop_assert_eq!(g.line_graph().len(), g.edge_count());
    }

    #[test]
    fn class_key_is_relabelling_invariant(i in 0usize..13, p in 0usize..24) {
        let classes = enumerate_complete(SurfaceId::S04);
        let t = &classes[i % classes.len()];
        let perm = &permutations(4)[p];
        prop_assert_eq!(t.relabel(perm).class_key(), t.class_key());
        prop_assert_eq!(t.relabel(perm).canonical_key(), t.canonical_key());
    }

    #[test]
    fn slopes_ignore_gauge(s in surface(), i in 0usize..13, flips in prop::collection::vec(any::<bool>(), 4), shifts in prop::collection::vec((-3i64..4, -3i64..4), 4)) {
        let reps = representatives(s);
        let t = &reps[i % reps.len()];
        let n = t.switch_count();
        let flips = if s.twisted() { flips[..n].to_vec() } else { vec![false; n] };
        let shifts: Vec<[i64; 2]> = shifts[..n].iter().map(|&(x, y)| [x, y]).collect();
        let g = t.with_marking(t.marking().gauge(t.pairing(), &flips, &shifts)).unwrap();
        prop_assert_eq!(slope_pair(&g).unwrap(), slope_pair(t).unwrap());
        prop_assert_eq!(g.canonical_key(), t.canonical_key());
    }

    #[test]
    fn carrying_coherence(s in surface(), steps in prop::collection::vec(any::<usize>(), 0..6)) {
        let t = walk(s, &steps);
        for b in large_branches(&t) {
            for c in Chirality::BOTH {
                if let SplitOutcome::Complete { track, transfer } = split(&t, SplitMove { branch: b, chirality: c }).unwrap() {
                    for m in extremal_rays(&track) {
                        prop_assert_eq!(slope_of_measure(&track, &m).unwrap(), slope_of_measure(&t, &transfer.apply(&m)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn s11_splits_span_farey_triangles(steps in prop::collection::vec(any::<usize>(), 0..8)) {
        let t = walk(SurfaceId::S11, &steps);
        let (a, b) = slope_pair(&t).unwrap();
        for b_ in large_branches(&t) {
            for c in Chirality::BOTH {
                if let Some(s) = split(&t, SplitMove { branch: b_, chirality: c }).unwrap().into_track() {
                    let (x, y) = slope_pair(&s).unwrap();
                    let all: BTreeSet<Slope> = [a, b, x, y].into_iter().collect();
                    prop_assert_eq!(all.len(), 3);
                    let v: Vec<Slope> = all.into_iter().collect();
                    prop_assert!(det_abs(v[0], v[1]) == 1 && det_abs(v[1], v[2]) == 1 && det_abs(v[0], v[2]) == 1);
                }
            }
        }
    }

    #[test]
    fn every_large_branch_splits(s in surface(), steps in prop::collection::vec(any::<usize>(), 0..8)) {
        let t = walk(s, &steps);
        for b in large_branches(&t) {
            let ok = Chirality::BOTH.iter().any(|&c| split(&t, SplitMove { branch: b, chirality: c }).unwrap().track().is_some());
            prop_assert!(ok);
        }
    }

    #[test]
    fn adjacency_is_symmetric(s in surface(), steps in prop::collection::vec(any::<usize>(), 0..6)) {
        let t = walk(s, &steps);
        let k = t.canonical_key();
        for (_, _, n) in adjacent(&t) {
            prop_assert!(adjacent(&n).iter().any(|(_, key, _)| *key == k));
        }
    }

    #[test]
    fn action_commutes_with_splits(s in surface(), g in word(), steps in prop::collection::vec(any::<usize>(), 0..4)) {
        let t = walk(s, &steps);
        let gt = act(g, &t);
        prop_assert_eq!(project(&gt).unwrap(), g.act_on_edge(project(&t).unwrap()));
        for b in large_branches(&t) {
            for c in Chirality::BOTH {
                let mv = SplitMove { branch: b, chirality: c };
                let left = split(&t, mv).unwrap().into_track().map(|x| act(g, &x).canonical_key());
                let right = split(&gt, mv).unwrap().into_track().map(|x| x.canonical_key());
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn klein_fixes_keys(s in surface(), steps in prop::collection::vec(any::<usize>(), 0..6)) {
        let t = walk(s, &steps);
        for k in MappingClass::klein_tags() {
            prop_assert_eq!(MappingClass::klein(k).act_on_track(&t).canonical_key(), t.canonical_key());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn action_preserves_distances(s in surface(), g in word(), a in prop::collection::vec(any::<usize>(), 0..4), b in prop::collection::vec(any::<usize>(), 0..4)) {
        let (u, v) = (walk(s, &a), walk(s, &b));
        let du = distance_map(&u, 8).unwrap();
        let dg = distance_map(&act(g, &u), 8).unwrap();
        prop_assert_eq!(du.get(&v.canonical_key()), dg.get(&act(g, &v).canonical_key()));
    }
}

#[test]
fn ball_is_deterministic_across_threads() {
    for s in [SurfaceId::S11, SurfaceId::S04] {
        let one = with_threads(1, || build_ball(&seed(s), 5).unwrap());
        let four = with_threads(4, || build_ball(&seed(s), 5).unwrap());
        assert_eq!(one.keys, four.keys);
        assert_eq!(one.graph.edges().collect::<Vec<_>>(), four.graph.edges().collect::<Vec<_>>());
        assert_eq!(one.splits, four.splits);
    }
}

#[test]
fn farey_ball_is_canonical() {
    let a = farey_ball(7).unwrap();
    let b = farey_ball(7).unwrap();
    assert_eq!(a.vertices, b.vertices);
    assert_eq!(a.edges, b.edges);
    assert!(a.vertices.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn regular_line_graphs() {
    let cycle = Graph::from_indexed((0..7).collect(), (0..7).map(|i| (i, (i + 1) % 7)));
    let lc = cycle.line_graph();
    assert!((0..lc.len()).all(|v| lc.degree(v) == 2));
    let k5 = Graph::from_indexed((0..5).collect(), (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))));
    let lk = k5.line_graph();
    assert!((0..lk.len()).all(|v| lk.degree(v) == 6));
}

#[test]
fn complete_tracks_have_surface_euler_characteristic() {
    for s in [SurfaceId::S11, SurfaceId::S04] {
        for t in enumerate_complete(s) {
            let f = faces(t.pairing()).len() as i64;
            let chi = t.switch_count() as i64 - t.branch_count() as i64 + f;
            assert_eq!(chi, 2 - 2 * s.genus());
            assert_eq!(f as usize, s.punctures());
        }
    }
}

#[test]
fn distinct_classes_are_not_relabellings() {
    let classes = enumerate_complete(SurfaceId::S04);
    let perms = permutations(4);
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            assert!(perms.iter().all(|p| relabel_pairing(a.pairing(), p) != b.pairing()));
        }
    }
}

#[test]
fn recurrence_matches_ray_support() {
    for s in [SurfaceId::S11, SurfaceId::S04] {
        for t in enumerate_complete(s) {
            let rays = extremal_rays_pairing(t.pairing());
            let covered = (0..t.branch_count()).all(|b| rays.iter().any(|r| r[b] > 0));
            assert_eq!(is_recurrent_pairing(t.pairing()), covered);
            assert_eq!(rays.len(), 2);
        }
    }
}
