use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gknot_core::functors::{cover, project, pushforward, Homomorphism, Subgroup};
use gknot_core::graph::{from_gauss_codes, Smoothing, TraversalOrientation};
use gknot_core::invariants::{crossing_lower_bound, reduce_bigons, reduce_bigons_by};
use gknot_core::surface::{faces, presentation, RotationSystem};
use gknot_core::{
    apply_move, canonical_code, enumerate_moves, FramedFourGraph, GGraph, GroupElement, GroupSpec, MoveKind, MoveSite,
};

/// Double occurrence words on `n` symbols, cut into `parts` pieces.
fn shadow(max_vertices: usize) -> impl Strategy<Value = FramedFourGraph> {
    (1..=max_vertices)
        .prop_flat_map(|n| {
            let word: Vec<usize> = (0..n).flat_map(|v| [v, v]).collect();
            (Just(word).prop_shuffle(), 0..3usize, 0..2usize)
        })
        .prop_map(|(word, cut, circles)| {
            let cut = if cut == 0 { word.len() } else { word.len() / (cut + 1) };
            let words: Vec<Vec<String>> = word.chunks(cut.max(1)).map(|c| c.iter().map(|v| v.to_string()).collect()).collect();
            from_gauss_codes(&words, circles).unwrap().graph
        })
}

fn one_component(max_vertices: usize) -> impl Strategy<Value = FramedFourGraph> {
    (1..=max_vertices)
        .prop_flat_map(|n| Just((0..n).flat_map(|v| [v, v]).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|word| {
            let w: Vec<String> = word.iter().map(|v| v.to_string()).collect();
            from_gauss_codes(&[w], 0).unwrap().graph
        })
}

fn groups() -> Vec<GroupSpec> {
    vec![GroupSpec::Trivial, GroupSpec::Cyclic(2), GroupSpec::Cyclic(3), GroupSpec::Cyclic(4), GroupSpec::symmetric3()]
}

/// A labeled diagram: oriented when the shadow is good, unoriented otherwise
/// (and then only over abelian groups).
fn diagram(max_vertices: usize) -> impl Strategy<Value = GGraph> {
    (one_component(max_vertices), 0..5usize, any::<u64>()).prop_map(|(g, gi, seed)| {
        let mut group = groups()[gi].clone();
        if !g.is_good() && !group.is_abelian() {
            group = GroupSpec::Cyclic(3);
        }
        let elements = group.elements().unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let labels = (0..g.vertex_count()).map(|_| elements[rng.gen_range(0..elements.len())].clone()).collect();
        let o = g.first_source_sink_structure();
        GGraph::new(g, group, labels, o).unwrap()
    })
}

fn label_counts(k: &GGraph) -> BTreeMap<GroupElement, usize> {
    let mut m = BTreeMap::new();
    for l in k.labels() {
        *m.entry(l.clone()).or_insert(0) += 1;
    }
    m
}

fn inverse_kind(kind: MoveKind) -> MoveKind {
    match kind {
        MoveKind::R1Minus => MoveKind::R1Plus,
        MoveKind::R1Plus => MoveKind::R1Minus,
        MoveKind::R2Minus => MoveKind::R2Plus,
        MoveKind::R2Plus => MoveKind::R2Minus,
        MoveKind::R3 => MoveKind::R3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn remove_vertex_stays_valid(g in shadow(6), pick in any::<usize>()) {
        let v = pick % g.vertex_count();
        let r = g.remove_vertex(v);
        prop_assert!(r.validate().is_empty());
        prop_assert_eq!(r.half_edge_count(), g.half_edge_count() - 4);
        prop_assert_eq!(g.half_edge_count(), 4 * g.vertex_count());
    }

    #[test]
    fn smoothing_preserves_goodness(g in shadow(5)) {
        prop_assume!(g.is_good());
        for v in 0..g.vertex_count() {
            for way in [Smoothing::ParallelA, Smoothing::ParallelB] {
                prop_assert!(g.smooth(v, way).is_good());
            }
        }
    }

    #[test]
    fn structure_count_is_a_power_of_two(g in shadow(5)) {
        let count = g.source_sink_structures().len();
        // free circles are pieces too
        let pieces = g.connected_components().1 + g.free_circles();
        prop_assert!(count == 0 || count == 1 << pieces, "{count} structures, {pieces} pieces");
        if pieces == 1 {
            prop_assert!(count == 0 || count == 2);
        }
    }

    #[test]
    fn oriented_smoothing_splits_in_two(g in one_component(6)) {
        let t = TraversalOrientation::canonical(&g);
        for v in 0..g.vertex_count() {
            prop_assert_eq!(g.oriented_smooth(v, &t).unwrap().component_count(), 2);
        }
    }

    #[test]
    fn key_ignores_vertex_order(k in diagram(6), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..k.vertex_count()).collect();
        let mut rng = StdRng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(k.permute_vertices(&perm).key(), k.key());
    }

    #[test]
    fn gauss_words_round_trip(g in shadow(6)) {
        let words: Vec<Vec<String>> = g.gauss_words().iter().map(|w| w.iter().map(|v| v.to_string()).collect()).collect();
        let again = from_gauss_codes(&words, g.free_circles()).unwrap().graph;
        prop_assert_eq!(canonical_code(&again, None, None), canonical_code(&g, None, None));
    }

    #[test]
    fn element_text_round_trip(gi in 0..7usize, seed in any::<u64>()) {
        let all = [
            GroupSpec::Cyclic(7),
            GroupSpec::symmetric3(),
            GroupSpec::Free(2),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]),
            GroupSpec::Trivial,
            GroupSpec::Cyclic(1),
            GroupSpec::Free(1),
        ];
        let g = &all[gi];
        let mut rng = StdRng::seed_from_u64(seed);
        let e = match g.elements() {
            Some(es) => es[rng.gen_range(0..es.len())].clone(),
            None => {
                let gens = g.candidate_labels();
                let word: Vec<GroupElement> = (0..rng.gen_range(0..6)).map(|_| gens[rng.gen_range(0..gens.len())].clone()).collect();
                g.product_of(&word).unwrap()
            }
        };
        prop_assert_eq!(g.parse_element(&g.format_element(&e)).unwrap(), e.clone());
        if !g.is_identity(&e) {
            prop_assert_eq!(g.inversion_pair_key(&e).unwrap(), g.inversion_pair_key(&g.inverse(&e).unwrap()).unwrap());
        }
    }

    #[test]
    fn moves_are_undone(k in diagram(3), pick in any::<usize>()) {
        let sites = enumerate_moves(&k, &MoveKind::ALL, Some(5));
        prop_assume!(!sites.is_empty());
        let site = &sites[pick % sites.len()];
        let r = apply_move(&k, site).unwrap();
        prop_assert_eq!(r.orientation().is_some(), k.orientation().is_some());
        let back = enumerate_moves(&r, &[inverse_kind(site.kind())], Some(5))
            .iter()
            .any(|s| apply_move(&r, s).unwrap().key() == k.key());
        prop_assert!(back, "{:?} has no inverse", site);
    }

    #[test]
    fn label_bookkeeping(k in diagram(3), pick in any::<usize>()) {
        let sites = enumerate_moves(&k, &[MoveKind::R2Plus, MoveKind::R3], Some(5));
        prop_assume!(!sites.is_empty());
        let site = &sites[pick % sites.len()];
        let r = apply_move(&k, site).unwrap();
        let g = k.group();
        let mut expected = label_counts(&k);
        match site {
            MoveSite::R2Insert { label, .. } => {
                *expected.entry(label.clone()).or_insert(0) += 1;
                *expected.entry(g.inverse(label).unwrap()).or_insert(0) += 1;
            }
            MoveSite::R3 { vertices, .. } => {
                for &v in vertices {
                    let l = k.label(v);
                    *expected.get_mut(l).unwrap() -= 1;
                    *expected.entry(g.inverse(l).unwrap()).or_insert(0) += 1;
                }
                expected.retain(|_, c| *c > 0);
            }
            _ => unreachable!(),
        }
        prop_assert_eq!(label_counts(&r), expected);
    }

    #[test]
    fn bigon_reduction_is_confluent(g in shadow(6), seed in any::<u64>()) {
        prop_assume!(!g.find_bigons().is_empty());
        let reference = canonical_code(&reduce_bigons(&g), None, None);
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..10 {
            let r = reduce_bigons_by(&g, |n| rng.gen_range(0..n));
            prop_assert_eq!(canonical_code(&r, None, None), reference.clone());
        }
    }

    #[test]
    fn lower_bound_is_sound(k in diagram(3), picks in proptest::collection::vec(any::<usize>(), 1..3)) {
        let bound = crossing_lower_bound(&k).unwrap();
        let mut cur = k.clone();
        let mut fewest = k.vertex_count();
        for p in picks {
            let sites = enumerate_moves(&cur, &MoveKind::ALL, Some(5));
            if sites.is_empty() {
                break;
            }
            cur = apply_move(&cur, &sites[p % sites.len()]).unwrap();
            fewest = fewest.min(cur.vertex_count());
        }
        prop_assert!(bound <= fewest, "bound {bound} above {fewest}");
    }

    #[test]
    fn faces_and_relators_use_every_corner(g in one_component(5), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rot = RotationSystem { bits: (0..g.vertex_count()).map(|_| rng.gen()).collect() };
        let emb = faces(&g, &rot).unwrap();
        prop_assert_eq!(emb.faces.iter().map(Vec::len).sum::<usize>(), 4 * g.vertex_count());
        let _ = emb.genus();
        if let Some(o) = g.first_source_sink_structure() {
            let p = presentation(&g, &rot, &o).unwrap();
            prop_assert_eq!(p.relators.iter().map(Vec::len).sum::<usize>(), 4 * g.vertex_count());
        }
    }

    #[test]
    fn functor_vertex_counts(k in diagram(4)) {
        prop_assume!(k.group().is_abelian() && k.group().order().unwrap() > 1);
        let g = k.group().clone();
        let n = g.order().unwrap() as u64;
        let pushed = pushforward(&k, &Homomorphism::trivial(&g)).unwrap();
        prop_assert_eq!(pushed.vertex_count(), k.vertex_count());
        for d in (1..=n).filter(|d| n % d == 0) {
            let sub = Subgroup::cyclic_multiples(n, d).unwrap();
            prop_assert!(project(&k, &sub).unwrap().vertex_count() <= k.vertex_count());
            if let Ok(c) = cover(&k, &sub, None) {
                prop_assert_eq!(c.graph.vertex_count(), k.vertex_count() * c.sheets);
                prop_assert_eq!(c.graph.shadow().component_count(), c.expected_components(&k));
            }
        }
    }
}
