mod common;

use common::{banded_graph, graph};
use coverlab::bounds::xi_value;
use coverlab::constructive::{
    cover_to_path_cover, cover_to_star_cover, insc_bounded, insp_bounded, recursion_depth,
    sp_cover_construct, sp_cover_construct_with, sp_partition_construct,
    star_partition_neighborhood, ConstructOptions,
};
use coverlab::generators::{generate, NamedGraphSpec};
use coverlab::generators::{path, Family};
use coverlab::iso::{is_family_free, ForbiddenFamily};
use coverlab::solvers::{solve_invariant, validate_certificate, SolveConfig};
use coverlab::{Error, Graph, Invariant, Mode, PieceKind, VertexSet};
use proptest::prelude::*;

fn fam(families: &[Family], n: usize) -> ForbiddenFamily {
    ForbiddenFamily::new(
        families
            .iter()
            .map(|&f| generate(&NamedGraphSpec::new(f, n)).unwrap())
            .collect(),
    )
}

/// `x = 0` adjacent to `1..=k`, random edges inside and a random tail.
fn neighbourhood_instance() -> impl Strategy<Value = (Graph, usize)> {
    (1usize..=10, 0usize..4).prop_flat_map(|(k, extra)| {
        let n = 1 + k + extra;
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
            for u in 1..n {
                for v in u + 1..n {
                    // Sparse inside X so K_4 stays rare.
                    if bits[u * n + v] && (bits[v * n + u] || v > k) {
                        edges.push((u, v));
                    }
                }
            }
            (Graph::from_edges(n, &edges).unwrap(), k)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn neighbourhood_partition_is_bounded((g, k) in neighbourhood_instance()) {
        prop_assume!(is_family_free(&g, &fam(&[Family::Complete, Family::STilde], 4)));
        let xs: VertexSet = (1..=k).collect();
        let t = star_partition_neighborhood(&g, 0, &xs, 4).unwrap();
        prop_assert!(t.valid);
        prop_assert!(t.realized as u64 <= xi_value(4, 2).to_u64().unwrap());
        prop_assert!(recursion_depth(&t).unwrap() <= 2);
        let verts = t.vertices.clone().unwrap();
        let mut covered: Vec<usize> = t.result.pieces.iter().flat_map(|p| p.iter().map(|v| verts[v])).collect();
        covered.sort();
        prop_assert_eq!(covered, (0..=k).collect::<Vec<_>>());
    }

    #[test]
    fn sp_constructions_on_banded_graphs(g in banded_graph(4..=45), root_pick in any::<usize>()) {
        let opts = ConstructOptions { root: root_pick % g.order(), c_chi: None };
        if is_family_free(&g, &Invariant::Inspc.target(4)) {
            let t = sp_cover_construct_with(&g, 4, &opts).unwrap();
            prop_assert!(validate_certificate(&g, &t.result).pass);
            for (p, l) in t.result.pieces.iter().zip(&t.result.labels) {
                if *l == PieceKind::Path {
                    prop_assert!(g.is_isometric_path_set(p));
                }
            }
            if g.order() <= 16 {
                let exact = solve_invariant(&g, Invariant::Inspc, &SolveConfig::default()).unwrap();
                prop_assert!(t.realized >= exact.value());
            }
        }
        if is_family_free(&g, &Invariant::Inspp.target(4)) {
            let t = coverlab::constructive::sp_partition_construct_with(&g, 4, &opts).unwrap();
            prop_assert!(validate_certificate(&g, &t.result).pass);
            prop_assert_eq!(t.result.mode, Mode::Partition);
        }
    }

    #[test]
    fn conversions_preserve_validity(g in banded_graph(4..=30)) {
        prop_assume!(is_family_free(&g, &Invariant::Inspc.target(4)));
        let t = sp_cover_construct(&g, 4).unwrap();
        let longest = g.order();
        if let Ok(c) = cover_to_star_cover(&g, &t.result, longest + 1) {
            prop_assert!(validate_certificate(&g, &c).pass);
            prop_assert!(c.pieces.iter().all(|p| g.is_star_set(p)));
        }
        let c = cover_to_path_cover(&g, &t.result, longest).unwrap();
        prop_assert!(validate_certificate(&g, &c).pass);
        prop_assert!(c.pieces.iter().all(|p| g.is_path_set(p)));
    }

    #[test]
    fn bounded_star_covers(g in graph(3..=9)) {
        prop_assume!(g.is_connected());
        if is_family_free(&g, &fam(&[Family::Complete, Family::SStar, Family::F1], 3)) {
            let t = insc_bounded(&g, 3).unwrap();
            prop_assert!(t.valid && t.result.pieces.iter().all(|p| g.is_star_set(p)));
        }
        if is_family_free(&g, &fam(&[Family::Complete, Family::SStar, Family::STilde], 3)) {
            let t = insp_bounded(&g, 3).unwrap();
            prop_assert!(t.valid && t.result.mode == Mode::Partition);
        }
    }
}

#[test]
fn long_paths_take_the_layered_branch() {
    for k in [25, 30, 40] {
        let g = path(k);
        for t in [
            sp_cover_construct(&g, 4).unwrap(),
            sp_partition_construct(&g, 4).unwrap(),
        ] {
            assert!(t.valid);
            let branch = t.stages.iter().find(|s| s.stage == "branch").unwrap();
            assert_eq!(branch.data["long"], k >= 24, "P_{k}");
        }
    }
}

#[test]
fn freeness_violations_carry_witnesses() {
    let g = generate(&NamedGraphSpec::new(Family::F3, 4)).unwrap();
    match sp_cover_construct(&g, 4) {
        Err(Error::FreenessViolated { name, embedding }) => {
            let member = generate(&name.parse().unwrap()).unwrap();
            assert!(embedding.is_valid(&g, &member));
        }
        other => panic!("expected a freeness violation, got {other:?}"),
    }
    assert!(matches!(
        sp_partition_construct(&path(3), 3),
        Err(Error::BadParameter(_))
    ));
}
