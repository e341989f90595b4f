use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta6::adversarial::{lower_bound_pointset, lower_bound_pointset_with, SeriesRule};
use theta6::hexgeom::{cone_of, hex_norm, Point};
use theta6::metrics::{shortest_path, spanning_ratio, theorem_check};
use theta6::routing::{greedy_path, PathDocument};
use theta6::sampling::SampleSpec;
use theta6::theta6::{edges_by_bisector_projection, edges_by_empty_triangles};
use theta6::{ConeIndex, PointSet, Scalar, Theta6Graph};

fn random_graph(seed: u64, n: usize, irrational: bool) -> Theta6Graph {
    let spec = SampleSpec { irrational, range: 4, ..SampleSpec::default() };
    Theta6Graph::build(spec.random_pointset(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

fn euclid(g: &Theta6Graph, u: usize, v: usize) -> f64 {
    let (a, b) = (g.point(u).to_f64(), g.point(v).to_f64());
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Shortest simple path length by exhaustive search.
fn brute_force(g: &Theta6Graph, s: usize, t: usize) -> Option<f64> {
    fn go(g: &Theta6Graph, u: usize, t: usize, seen: &mut Vec<bool>, len: f64, best: &mut Option<f64>) {
        if u == t {
            *best = Some(best.map_or(len, |b: f64| b.min(len)));
            return;
        }
        for e in g.out_edges(u) {
            if !seen[e.target] {
                seen[e.target] = true;
                go(g, e.target, t, seen, len + euclid(g, u, e.target), best);
                seen[e.target] = false;
            }
        }
    }
    let mut seen = vec![false; g.len()];
    seen[s] = true;
    let mut best = None;
    go(g, s, t, &mut seen, 0.0, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn three_constructions_agree(seed in any::<u64>(), n in 2usize..14, irr in any::<bool>()) {
        let g = random_graph(seed, n, irr);
        prop_assert_eq!(&g.edge_set(), &edges_by_empty_triangles(g.points()).unwrap());
        prop_assert_eq!(&g.edge_set(), &edges_by_bisector_projection(g.points()).unwrap());
    }

    #[test]
    fn out_degree_and_cones(seed in any::<u64>(), n in 2usize..14) {
        let g = random_graph(seed, n, false);
        for u in 0..g.len() {
            let targets: BTreeSet<usize> = g.out_edges(u).map(|e| e.target).collect();
            prop_assert!(targets.len() <= 6);
            for e in g.out_edges(u) {
                prop_assert_eq!(cone_of(g.point(u), g.point(e.target)).unwrap(), e.cone);
            }
            for i in ConeIndex::all() {
                let occupied = (0..g.len()).any(|w| w != u && cone_of(g.point(u), g.point(w)).unwrap() == i);
                prop_assert_eq!(occupied, g.out_edge(u, i).unwrap().is_some());
            }
        }
    }

    #[test]
    fn greedy_paths_descend_in_hex(seed in any::<u64>(), n in 2usize..16) {
        let g = random_graph(seed, n, true);
        for s in 0..g.len() {
            for t in (0..g.len()).filter(|&t| t != s) {
                let p = greedy_path(&g, s, t).unwrap();
                prop_assert_eq!(p.last(), t);
                let d: Vec<Scalar> = p.vertices.iter().map(|&w| hex_norm(&(g.point(w) - g.point(t)))).collect();
                prop_assert!(d.windows(2).all(|w| w[1] < w[0]));
            }
        }
    }

    #[test]
    fn shortest_paths_match_exhaustive_search(seed in any::<u64>(), n in 2usize..8) {
        let g = random_graph(seed, n, false);
        for s in 0..g.len() {
            for t in (0..g.len()).filter(|&t| t != s) {
                let brute = brute_force(&g, s, t).expect("Θ₆ graphs are strongly connected");
                let sp = shortest_path(&g, s, t).unwrap();
                prop_assert!(sp.distance.lo - 1e-9 <= brute && brute <= sp.distance.hi + 1e-9, "{:?} vs {}", sp.distance, brute);
            }
        }
    }
}

#[test]
fn two_points_route_over_one_edge() {
    let g = Theta6Graph::build(PointSet::new(vec![Point::origin(), Point::from_ratios((1, 1), (1, 3))]).unwrap());
    let p = greedy_path(&g, 0, 1).unwrap();
    assert_eq!(p.vertices, [0, 1]);
    let sp = shortest_path(&g, 0, 1).unwrap();
    assert_eq!(sp.vertices, [0, 1]);
    assert!(spanning_ratio(&g, false).unwrap().ratio_vs_euclid.hi <= 1.0 + 1e-12);
    let doc = PathDocument::new(&g, &p);
    let back: PathDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(back, doc);
}

#[test]
fn graph_json_round_trip() {
    let g = random_graph(5, 12, true);
    let back = Theta6Graph::from_json(&g.to_json()).unwrap();
    assert_eq!(back.edge_set(), g.edge_set());
    assert_eq!(back.points(), g.points());
}

#[test]
fn random_sets_respect_the_upper_bound() {
    for seed in 0..20 {
        let g = random_graph(seed, 24, seed % 2 == 0);
        assert!(theorem_check(&g, 1e-9, 512).all_pass(), "seed {seed}");
    }
}

#[test]
fn q_series_is_geometric() {
    let inst = lower_bound_pointset(&BigRational::new(1.into(), 100.into())).unwrap();
    let qx = |i: usize| inst.points[inst.labels[&format!("q{i}")]].x().to_f64();
    let c = inst.points[inst.labels["c"]].x().to_f64();
    let lambda = qx(0) / c;
    assert!(lambda > 0.0 && lambda < 1.0);
    for i in 1..inst.k {
        assert!((qx(i) / qx(i - 1) - lambda).abs() < 1e-12, "step {i}");
    }
}

#[test]
fn literal_series_breaks_the_path() {
    let delta = BigRational::new(1.into(), 100.into());
    let inst = lower_bound_pointset_with(&delta, SeriesRule::Literal).unwrap();
    let g = Theta6Graph::build(inst.points.clone());
    let p = greedy_path(&g, inst.s(), inst.t()).unwrap();
    assert_ne!(p.vertices, inst.expected_path());

    let inst = lower_bound_pointset(&delta).unwrap();
    let g = Theta6Graph::build(inst.points.clone());
    assert_eq!(greedy_path(&g, inst.s(), inst.t()).unwrap().vertices, inst.expected_path());
}
