use commenhance::detect::{detect, louvain, lpa, modularity};
use commenhance::graph::{Graph, Partition};
use commenhance::{DetectorConfig, DetectorKind};
use commenhance_testkit::fixtures::{bridged_triangles, dense, graph, random_graph, two_cliques};
use commenhance_testkit::oracle;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(algorithm: DetectorKind, seed: u64) -> DetectorConfig {
    DetectorConfig {
        algorithm,
        seed,
        ..DetectorConfig::default()
    }
}

#[test]
fn lpa_stops_only_in_reachable_terminal_states() {
    let g = bridged_triangles();
    let terminal = oracle::lpa_terminal_states(&dense(&g));
    assert!(terminal.contains(&vec![0, 0, 0, 1, 1, 1]));
    let mut seen_split = false;
    for seed in 0..200 {
        let p = lpa(&g, &config(DetectorKind::Lpa, seed)).unwrap();
        assert!(terminal.contains(p.labels()), "seed {seed}: {:?}", p.labels());
        seen_split |= p.labels() == [0, 0, 0, 1, 1, 1];
    }
    assert!(seen_split);
}

#[test]
fn lpa_on_random_graphs_lands_in_terminal_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..40 {
        let g = random_graph(&mut rng, 3, 6, 0.4);
        let terminal = oracle::lpa_terminal_states(&dense(&g));
        let p = lpa(&g, &config(DetectorKind::Lpa, round)).unwrap();
        assert!(terminal.contains(p.labels()), "{:?}", p.labels());
    }
}

#[test]
fn louvain_finds_the_optimum_on_two_cliques() {
    let (g, truth) = two_cliques();
    let (best, _) = oracle::best_modularity(&dense(&g), 3);
    for seed in 0..10 {
        let p = louvain(&g, &config(DetectorKind::Louvain, seed)).unwrap();
        assert_eq!(p, truth);
        assert!((modularity(&g, &p).unwrap() - best).abs() < 1e-12);
    }
}

#[test]
fn louvain_is_close_to_brute_force_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut total_gap = 0.0;
    let rounds = 20;
    for seed in 0..rounds {
        let g = random_graph(&mut rng, 7, 9, 0.4);
        if g.edge_count() == 0 {
            continue;
        }
        let d = dense(&g);
        let (best3, _) = oracle::best_modularity(&d, 3);
        let p = louvain(&g, &config(DetectorKind::Louvain, seed)).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert!((q - oracle::modularity(&d, p.labels())).abs() < 1e-12);
        assert!(q >= modularity(&g, &Partition::singletons(g.node_count())).unwrap() - 1e-12);
        total_gap += (best3 - q).max(0.0);
    }
    assert!(
        total_gap / rounds as f64 <= 0.02,
        "mean gap {}",
        total_gap / rounds as f64
    );
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().map(|e| (perm[e.u()], perm[e.v()])).collect();
    graph(g.node_count(), &edges)
}

#[test]
fn permuting_nodes_keeps_the_two_clique_split() {
    let (g, _) = two_cliques();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in [DetectorKind::Louvain, DetectorKind::Lpa] {
        for seed in 0..5 {
            let mut perm: Vec<usize> = (0..10).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            let p = detect(&h, &config(kind, seed)).unwrap();
            let back: Vec<usize> = (0..10).map(|i| p.label(perm[i])).collect();
            let expected = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
            if kind == DetectorKind::Louvain {
                assert!(oracle::same_grouping(&back, &expected));
            } else {
                // the bridge endpoints may be swallowed, but cliques stay whole
                assert!(back[..4].iter().all(|&l| l == back[0]));
                assert!(back[6..].iter().all(|&l| l == back[6]));
            }
        }
    }
}

#[test]
fn detectors_are_deterministic_per_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let g = random_graph(&mut rng, 5, 20, 0.3);
        for kind in [DetectorKind::Louvain, DetectorKind::Lpa] {
            let c = config(kind, 99);
            assert_eq!(detect(&g, &c).unwrap(), detect(&g, &c).unwrap());
        }
    }
}
