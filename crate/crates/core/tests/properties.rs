use proptest::prelude::*;

use crit2::builder::{build, build_by_tile_algebra};
use crit2::drawing::{build_drawing, verify_certificate, DrawingCertificate};
use crit2::ecolor::{chromatic_index, construct_edge_coloring};
use crit2::graph::{from_edge_list, max_degree_raw, MultiGraph};
use crit2::oracle::{has_hamiltonian_cycle_witness, is_edge_cover, is_matching, is_proper_coloring, is_proper_edge_coloring};
use crit2::props::{hamiltonian_cycle, matching_and_cover, max_degree, order_size};
use crit2::recognizer::recognize;
use crit2::signature::{canonicalize, mirror_reading, Signature, TileName};
use crit2::treewidth::{build_tree_decomposition, treewidth, validate_decomposition};
use crit2::vcolor::{chromatic_number, construct_coloring};

fn signature(max_half: usize) -> impl Strategy<Value = Signature> {
    (1..=max_half)
        .prop_flat_map(|h| prop::collection::vec(0..42usize, 2 * h + 1))
        .prop_map(|ix| Signature::new(ix.into_iter().map(TileName::from_index).collect()).unwrap())
}

fn relabel(g: &MultiGraph, perm: &[usize]) -> MultiGraph {
    let edges = g.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    MultiGraph::from_edges(g.vertex_count, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn formulas_match_the_build(s in signature(7)) {
        let b = build(&s);
        prop_assert_eq!(order_size(&s), (b.graph().vertex_count, b.graph().edges.len()));
        prop_assert_eq!(max_degree(&s), max_degree_raw(b.graph()));
        prop_assert!((4..=6).contains(&max_degree(&s)));
    }

    #[test]
    fn direct_build_equals_tile_algebra(s in signature(5)) {
        prop_assert_eq!(build_by_tile_algebra(&s).unwrap(), build(&s).labeled);
    }

    #[test]
    fn rotation_does_not_change_the_canonical_form(s in signature(6), k in 0usize..13) {
        let r = s.rotate(k % s.len());
        prop_assert_eq!(canonicalize(&r), canonicalize(&s));
        prop_assert_eq!(order_size(&r), order_size(&s));
    }

    #[test]
    fn hamiltonian_cycle_matching_and_cover(s in signature(6)) {
        let g = build(&s);
        let c = hamiltonian_cycle(&s).unwrap();
        prop_assert!(has_hamiltonian_cycle_witness(g.graph(), &c));
        let mc = matching_and_cover(&s).unwrap();
        prop_assert!(is_matching(g.graph(), &mc.matching));
        prop_assert!(is_edge_cover(g.graph(), &mc.cover));
        prop_assert_eq!(mc.cover.len(), g.graph().vertex_count.div_ceil(2));
    }

    #[test]
    fn colourings_are_proper(s in signature(6)) {
        let g = build(&s);
        let chi = chromatic_number(&s).unwrap();
        prop_assert!((2..=4).contains(&chi));
        let c = construct_coloring(&s, chi).unwrap();
        prop_assert!(is_proper_coloring(g.graph(), &c));
        prop_assert!(c.iter().collect::<std::collections::BTreeSet<_>>().len() <= chi);
        let e: Vec<usize> = construct_edge_coloring(&s).unwrap().into_iter().map(usize::from).collect();
        prop_assert!(is_proper_edge_coloring(g.graph(), &e));
        prop_assert!(chromatic_index(&s) >= max_degree(&s));
    }

    #[test]
    fn decompositions_are_valid_and_tight(s in signature(7)) {
        let d = build_tree_decomposition(&s);
        prop_assert_eq!(validate_decomposition(build(&s).graph(), &d), Ok(treewidth(&s)));
    }

    #[test]
    fn drawings_verify_and_survive_json(s in signature(7)) {
        let g = build(&s);
        let c = build_drawing(&s).unwrap();
        prop_assert_eq!(c.crossings.len(), 2);
        prop_assert!(verify_certificate(g.graph(), &c).is_ok());
        let back = DrawingCertificate::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn recognition_roundtrips(s in signature(7)) {
        let got = recognize(build(&s).graph()).unwrap();
        prop_assert_eq!(canonicalize(&got), canonicalize(&s));
    }

    #[test]
    fn relabelled_members_are_recognized(s in signature(4), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let g = build(&s);
        let mut perm: Vec<usize> = (0..g.graph().vertex_count).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let got = canonicalize(&recognize(&relabel(g.graph(), &perm)).unwrap());
        prop_assert!(got == canonicalize(&s) || got == canonicalize(&mirror_reading(&s)), "{} read as {}", s, got);
    }

    #[test]
    fn edge_lists_roundtrip(s in signature(5)) {
        let g = build(&s);
        prop_assert_eq!(&from_edge_list(&g.graph().to_edge_list()).unwrap(), g.graph());
    }
}
