use mmflow::net::{gen_bidir_line_scd, gen_line_network, BidirOptions};
use mmflow::scalar::rational;
use mmflow::sched::verify_collision_free;
use mmflow::sched::{
    build_scheduling_graph, cycle_to_rate_vector, max_mean_cycle, min_window, weight_graph,
    Digraph, GraphLimits, Schedule,
};
use mmflow::{Network, Rational};
use proptest::prelude::*;

/// Schedule made of the given blocks laid out one after another. Block bit
/// `t * L + l` is link `l` at slot `t`.
fn layout(links: usize, window: usize, blocks: &[u128]) -> Schedule {
    let mut s = Schedule::new(links, window * blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        for t in 0..window {
            for l in 0..links {
                if b >> (t * links + l) & 1 == 1 {
                    s.set(l, k * window + t, true);
                }
            }
        }
    }
    s
}

/// Vertices and edges straight from the collision checker.
fn brute_force(net: &Network, window: usize) -> (Vec<u128>, Vec<(u128, u128)>) {
    let links = net.link_count();
    let cells = links * window;
    let ok = |blocks: &[u128]| verify_collision_free(net, &layout(links, window, blocks)).is_ok();
    let verts: Vec<u128> = (0..1u128 << cells).filter(|&b| ok(&[b])).collect();
    let mut edges = Vec::new();
    for &u in &verts {
        for &v in &verts {
            if ok(&[u, v]) {
                edges.push((u, v));
            }
        }
    }
    (verts, edges)
}

fn cross_check(net: &Network, window: usize) {
    let g = build_scheduling_graph(net, window, GraphLimits::default()).unwrap();
    let (verts, edges) = brute_force(net, window);
    let mut got: Vec<u128> = g.blocks().to_vec();
    got.sort_unstable();
    assert_eq!(got, verts);
    assert_eq!(g.edge_count(), edges.len());
    for (u, v) in edges {
        let (a, b) = (g.vertex_of(u).unwrap(), g.vertex_of(v).unwrap());
        assert!(g.has_edge(a, b));
    }
}

#[test]
fn small_graphs_match_exhaustive_construction() {
    for links in 1..=4 {
        for k in 1..=2 {
            for d in 0..=2 {
                let net = gen_line_network(links, k, d).unwrap();
                let lo = min_window(&net);
                for window in lo..=(lo + 1) {
                    if links * window <= 8 {
                        cross_check(&net, window);
                    }
                }
            }
        }
    }
    for hop_delay in 0..=1 {
        let opts = BidirOptions {
            hop_delay,
            ..BidirOptions::default()
        };
        for nodes in 2..=3 {
            let (net, _) = gen_bidir_line_scd(nodes, &opts).unwrap();
            cross_check(&net, min_window(&net));
        }
    }
}

fn random_digraph(n: usize, edges: &[(usize, usize, i64)]) -> Digraph {
    let mut g = Digraph::new(n);
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v, w) in edges {
        if u < n && v < n && seen.insert((u, v)) {
            g.add_edge(u, v, rational(w, 1));
        }
    }
    g
}

fn edge_list() -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, -20i64..20), 0..30),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mean_is_affine_in_the_weights((n, edges) in edge_list(), c in 1i64..6, k in -5i64..6) {
        let g = random_digraph(n, &edges);
        let shifted: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, c * w + k)).collect();
        let h = random_digraph(n, &shifted);
        match (max_mean_cycle(&g), max_mean_cycle(&h)) {
            (None, None) => {}
            (Some(a), Some(b)) => prop_assert_eq!(a.mean * rational(c, 1) + rational(k, 1), b.mean),
            _ => prop_assert!(false, "cycle existence changed"),
        }
    }

    /// The returned cycle's rate vector scores exactly lambda / T under the
    /// weights that produced it.
    #[test]
    fn cycle_score_matches_mean(w in prop::collection::vec(-3i64..8, 4), den in 1i64..5, window in 1usize..3) {
        let net = gen_line_network(4, 1, 1).unwrap();
        let g = build_scheduling_graph(&net, window, GraphLimits::default()).unwrap();
        let a: Vec<Rational> = w.iter().map(|&x| rational(x, den)).collect();
        let wg = weight_graph(&g, &a).unwrap();
        let best = max_mean_cycle(&wg).unwrap();
        let r = cycle_to_rate_vector(&g, &best.cycle);
        prop_assert_eq!(r.dot(&a), best.mean / rational(window as i64, 1));
        prop_assert!(r.in_unit_box());
    }
}
