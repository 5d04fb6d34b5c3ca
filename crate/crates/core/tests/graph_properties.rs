mod common;

use common::{random_admg, random_dag, random_mag};
use proptest::prelude::*;
use rol_core::graph::{
    is_removable, is_removable_exhaustive, latent_projection, m_separated, m_separated_by_paths,
};
use rol_core::VertexSet;

fn all_queries(n: usize) -> impl Iterator<Item = (usize, usize, VertexSet)> {
    (0..n).flat_map(move |x| {
        (x + 1..n).flat_map(move |y| {
            VertexSet::full(n)
                .without(x)
                .without(y)
                .subsets()
                .map(move |z| (x, y, z))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reachability_matches_path_enumeration_on_mags(
        n in 2usize..=8, latents in 0usize..=3, p in 0.2f64..0.7, seed in any::<u64>()
    ) {
        let g = random_mag(n, latents, p, seed);
        for (x, y, z) in all_queries(n) {
            prop_assert_eq!(
                m_separated(&g, x, y, z).unwrap(),
                m_separated_by_paths(&g, x, y, z).unwrap(),
                "({}, {} | {:?}) in {:?}", x, y, z, g
            );
        }
    }

    #[test]
    fn reachability_matches_path_enumeration_on_mixed_graphs(
        n in 2usize..=7, p in 0.1f64..0.6, q in 0.1f64..0.6, seed in any::<u64>()
    ) {
        let g = random_admg(n, p, q, seed);
        for (x, y, z) in all_queries(n) {
            prop_assert_eq!(
                m_separated(&g, x, y, z).unwrap(),
                m_separated_by_paths(&g, x, y, z).unwrap(),
                "({}, {} | {:?}) in {:?}", x, y, z, g
            );
        }
    }

    #[test]
    fn projection_is_a_mag(
        n in 2usize..=10, latents in 0usize..=3, p in 0.2f64..0.7, seed in any::<u64>()
    ) {
        let latents = latents.min(n - 1);
        let g = random_mag(n - latents, latents, p, seed);
        prop_assert!(g.is_ancestral());
        prop_assert!(g.is_maximal().unwrap());
    }

    #[test]
    fn projection_preserves_separations(
        n in 2usize..=7, k in 0usize..=3, p in 0.2f64..0.7, seed in any::<u64>()
    ) {
        let k = k.min(n - 1);
        let dag = random_dag(n, p, seed);
        let observed = VertexSet::full(n) - VertexSet::full(k);
        let proj = latent_projection(&dag, observed).unwrap();
        let m = proj.vertices.len();
        for (x, y, z) in all_queries(m) {
            let zo: VertexSet = z.iter().map(|v| proj.original(v)).collect();
            prop_assert_eq!(
                m_separated(&proj.graph, x, y, z).unwrap(),
                m_separated(&dag, proj.original(x), proj.original(y), zo).unwrap()
            );
        }
    }

    #[test]
    fn removability_shortcut_matches_definition(
        n in 1usize..=8, latents in 0usize..=2, p in 0.2f64..0.8, seed in any::<u64>()
    ) {
        let g = random_mag(n, latents, p, seed);
        for x in 0..n {
            let fast = is_removable(&g, x).unwrap();
            prop_assert_eq!(fast, is_removable_exhaustive(&g, x).unwrap());
            let rest = g.vertices().without(x);
            let same = latent_projection(&g, rest).unwrap() == g.induced_subgraph(rest).unwrap();
            prop_assert_eq!(fast, same);
        }
    }
}

#[test]
fn childless_vertices_are_removable() {
    for seed in 0..40 {
        let g = random_mag(7, 1, 0.4, seed);
        for x in 0..7 {
            if g.children(x).is_empty() {
                assert!(is_removable(&g, x).unwrap(), "seed {seed} vertex {x}");
            }
        }
    }
}
