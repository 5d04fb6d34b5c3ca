use proptest::prelude::*;
use rol_core::data::{
    derive_seed, gen_erdos_renyi_dag, gen_erdos_renyi_dag_with_order, make_latent_instance,
    sample_sem, score, LatentSpec, SemSpec, Stream,
};
use rol_core::graph::Skeleton;
use rol_core::orders::is_c_order;

#[test]
fn erdos_renyi_edge_count_mean() {
    let n = 50;
    let p = (n as f64).powf(-0.7);
    let seeds = 200;
    let total: usize = (0..seeds)
        .map(|s| gen_erdos_renyi_dag(n, p, s).unwrap().num_edges())
        .sum();
    let mean = total as f64 / seeds as f64;
    let expected = p * (n * (n - 1) / 2) as f64;
    assert!((expected - 79.2).abs() < 0.1);
    assert!((mean - expected).abs() < 0.05 * expected, "mean {mean}");
}

#[test]
fn sample_means_are_near_zero() {
    let g = gen_erdos_renyi_dag(8, 0.4, 7).unwrap();
    let spec = SemSpec::random(g, 1, 2).unwrap();
    let n = 5000;
    let d = sample_sem(&spec, n, 3).unwrap();
    for v in 0..8 {
        let mean = d.column(v).iter().sum::<f64>() / n as f64;
        assert!(
            mean.abs() < 4.0 / (n as f64).sqrt(),
            "column {v} mean {mean}"
        );
    }
}

#[test]
fn streams_are_independent() {
    let seeds: Vec<u64> = [
        Stream::Graph,
        Stream::Coefficients,
        Stream::Noise,
        Stream::Latent,
    ]
    .into_iter()
    .map(|s| derive_seed(42, s, 0))
    .collect();
    for (i, a) in seeds.iter().enumerate() {
        assert!(seeds[i + 1..].iter().all(|b| a != b));
    }
    assert_ne!(
        derive_seed(42, Stream::Graph, 0),
        derive_seed(42, Stream::Graph, 1)
    );
    assert_eq!(
        derive_seed(42, Stream::Noise, 5),
        derive_seed(42, Stream::Noise, 5)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn er_graphs_are_dags_with_causal_order(n in 0usize..=30, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let (g, pi) = gen_erdos_renyi_dag_with_order(n, p, seed).unwrap();
        prop_assert!(g.is_dag());
        prop_assert!(is_c_order(&g, &pi).unwrap());
        prop_assert_eq!(gen_erdos_renyi_dag(n, p, seed).unwrap(), g);
    }

    #[test]
    fn latent_instances_are_mags(n in 2usize..=12, k in 0usize..=3, seed in any::<u64>()) {
        let k = k.min(n - 1);
        let g = gen_erdos_renyi_dag(n, 0.3, seed).unwrap();
        let inst = make_latent_instance(&g, LatentSpec::Count(k), seed).unwrap();
        prop_assert_eq!(inst.latent.len(), k);
        prop_assert_eq!(inst.observed.len(), n - k);
        prop_assert!(inst.mag.is_mag());
        prop_assert!(inst.observed.iter().all(|&v| !inst.latent.contains(v)));
    }

    #[test]
    fn score_is_symmetric_under_swap(
        n in 2usize..=10, a in proptest::collection::vec(any::<bool>(), 45),
        b in proptest::collection::vec(any::<bool>(), 45)
    ) {
        let build = |bits: &[bool]| {
            let mut s = Skeleton::new(n);
            let mut i = 0;
            for x in 0..n {
                for y in x + 1..n {
                    if bits[i] {
                        s.add_edge(x, y);
                    }
                    i += 1;
                }
            }
            s
        };
        let (sa, sb) = (build(&a), build(&b));
        let ab = score(&sa, &sb).unwrap();
        let ba = score(&sb, &sa).unwrap();
        prop_assert_eq!(ab.tp, ba.tp);
        prop_assert_eq!(ab.fp, ba.fn_);
        prop_assert_eq!(ab.shd, ba.shd);
        prop_assert!((ab.f1 - ba.f1).abs() < 1e-12);
        prop_assert!((ab.precision - ba.recall).abs() < 1e-12);
        prop_assert_eq!(score(&sa, &sa).unwrap().shd, 0);
    }
}
