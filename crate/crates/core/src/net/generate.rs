use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Link, Network, Session, SessionSet};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// `L`-hop line network with `K`-hop interference.
///
/// Nodes `1..=L+1`, links `l_i = (i, i+1)`, collision sets
/// `I(l_i) = { l_j : j != i, |i+1-j| <= K }` and delays
/// `D(l_i, l_j) = d * (1 - |i+1-j|)`.
pub fn gen_line_network(hops: usize, interference: usize, delay: i64) -> Result<Network> {
    if hops < 1 || interference < 1 {
        return Err(Error::InvalidArgument(format!(
            "line network needs L >= 1 and K >= 1 (got L = {hops}, K = {interference})"
        )));
    }
    let nodes = (1..=hops + 1).map(|i| i.to_string()).collect();
    let links = (0..hops)
        .map(|i| Link {
            id: format!("l{}", i + 1),
            tail: i,
            head: i + 1,
        })
        .collect();
    let mut collisions = vec![BTreeSet::new(); hops];
    let mut delays = BTreeMap::new();
    for i in 1..=hops as i64 {
        for j in 1..=hops as i64 {
            let gap = (i + 1 - j).abs();
            if j != i && gap <= interference as i64 {
                let (a, b) = ((i - 1) as usize, (j - 1) as usize);
                collisions[a].insert(b);
                delays.insert((a, b), delay * (1 - gap));
            }
        }
    }
    Ok(Network::from_parts(nodes, links, collisions, delays))
}

/// Unicast session from the first to the last node of a line network.
pub fn line_unicast(net: &Network) -> SessionSet {
    SessionSet::new(vec![Session::unicast(0, net.node_count() - 1)])
}

#[derive(Clone, Debug)]
pub struct BidirOptions {
    /// Per-hop propagation delay in slots; 0 gives the zero-delay variant.
    pub hop_delay: i64,
    /// Traffic weights of the `1 -> N` and `N -> 1` sessions.
    pub gammas: (Rational, Rational),
}

impl Default for BidirOptions {
    fn default() -> Self {
        let one = Rational::from_integer(1.into());
        BidirOptions {
            hop_delay: 0,
            gammas: (one.clone(), one),
        }
    }
}

/// Bidirectional `N`-node line in a single collision domain.
///
/// Links `f_i = (i, i+1)` followed by `b_i = (i+1, i)`; every link collides
/// with every other link. With nodes at unit spacing, a transmission on `l'`
/// reaches the receiver of `l` after `|tail(l') - head(l)|` hops, giving
/// `D(l, l') = hop_delay * (1 - |tail(l') - head(l)|)`, which coincides with
/// the line-network delay formula on forward links.
pub fn gen_bidir_line_scd(nodes: usize, opts: &BidirOptions) -> Result<(Network, SessionSet)> {
    if nodes < 2 {
        return Err(Error::InvalidArgument(format!(
            "bidirectional line needs N >= 2 (got {nodes})"
        )));
    }
    let names = (1..=nodes).map(|i| i.to_string()).collect();
    let mut links = Vec::with_capacity(2 * (nodes - 1));
    for i in 0..nodes - 1 {
        links.push(Link {
            id: format!("f{}", i + 1),
            tail: i,
            head: i + 1,
        });
    }
    for i in 0..nodes - 1 {
        links.push(Link {
            id: format!("b{}", i + 1),
            tail: i + 1,
            head: i,
        });
    }
    let count = links.len();
    let mut collisions = vec![BTreeSet::new(); count];
    let mut delays = BTreeMap::new();
    for a in 0..count {
        for b in 0..count {
            if a == b {
                continue;
            }
            collisions[a].insert(b);
            let gap = (links[b].tail as i64 - links[a].head as i64).abs();
            delays.insert((a, b), opts.hop_delay * (1 - gap));
        }
    }
    let net = Network::from_parts(names, links, collisions, delays);
    let sessions = SessionSet::new(vec![
        Session {
            source: 0,
            sinks: vec![nodes - 1],
            gamma: opts.gammas.0.clone(),
        },
        Session {
            source: nodes - 1,
            sinks: vec![0],
            gamma: opts.gammas.1.clone(),
        },
    ]);
    Ok((net, sessions))
}

#[derive(Clone, Debug)]
pub struct RandomNetConfig {
    pub nodes: usize,
    pub sessions: usize,
    /// Probability of each extra forward link beyond the spanning tree.
    pub edge_prob: f64,
    /// Upper bound on the link count; must be at least `nodes - 1`.
    pub max_links: Option<usize>,
    /// Sinks drawn per session.
    pub sinks_per_session: usize,
}

impl RandomNetConfig {
    pub const DEFAULT_EDGE_PROB: f64 = 0.3;

    pub fn new(nodes: usize, sessions: usize) -> Self {
        RandomNetConfig {
            nodes,
            sessions,
            edge_prob: Self::DEFAULT_EDGE_PROB,
            max_links: None,
            sinks_per_session: 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub network: Network,
    pub sessions: SessionSet,
    /// How many times the generator had to reseed (`seed + offset`).
    pub seed_offset: u64,
}

const RANDOM_ATTEMPTS: u64 = 16;

/// Random connected acyclic network under 1-hop interference.
///
/// Generation uses `ChaCha8Rng::seed_from_u64(seed + offset)`:
///
/// 1. shuffle the nodes into a topological order;
/// 2. attach each node after the first to a uniformly chosen earlier node
///    (a spanning arborescence, so the network is connected);
/// 3. add every remaining forward pair with probability `edge_prob`, in
///    lexicographic order of positions, until `max_links` is reached;
/// 4. two links collide iff they share an endpoint node; all delays are 0;
/// 5. each session picks a source uniformly among nodes reaching at least
///    `sinks_per_session` others, then distinct sinks among those reached.
///
/// If some session cannot be formed the generator reseeds with the next
/// offset, up to a bounded number of attempts.
pub fn gen_random_acyclic(config: &RandomNetConfig, seed: u64) -> Result<RandomInstance> {
    if config.nodes < 3 {
        return Err(Error::InvalidArgument(format!(
            "random network needs at least 3 nodes (got {})",
            config.nodes
        )));
    }
    if !(0.0..=1.0).contains(&config.edge_prob) {
        return Err(Error::InvalidArgument(
            "edge probability must lie in [0, 1]".into(),
        ));
    }
    if config.max_links.is_some_and(|m| m + 1 < config.nodes) {
        return Err(Error::InvalidArgument(
            "max_links must be at least nodes - 1 to keep the network connected".into(),
        ));
    }
    if config.sinks_per_session == 0 {
        return Err(Error::InvalidArgument(
            "sessions need at least one sink".into(),
        ));
    }
    for offset in 0..RANDOM_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(offset));
        let network = random_dag(config, &mut rng);
        if let Some(sessions) = random_sessions(&network, config, &mut rng) {
            return Ok(RandomInstance {
                network,
                sessions,
                seed_offset: offset,
            });
        }
    }
    Err(Error::GenerationFailed {
        attempts: RANDOM_ATTEMPTS as usize,
        reason: format!(
            "no node reaches {} others in any attempt",
            config.sinks_per_session
        ),
    })
}

fn random_dag(config: &RandomNetConfig, rng: &mut ChaCha8Rng) -> Network {
    let n = config.nodes;
    let limit = config.max_links.unwrap_or(usize::MAX);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut pairs = Vec::new();
    let mut present = BTreeSet::new();
    for k in 1..n {
        let parent = rng.random_range(0..k);
        pairs.push((order[parent], order[k]));
        present.insert((parent, k));
    }
    for i in 0..n {
        for j in i + 1..n {
            if present.contains(&(i, j)) {
                continue;
            }
            if rng.random_bool(config.edge_prob) && pairs.len() < limit {
                pairs.push((order[i], order[j]));
            }
        }
    }

    let nodes = (1..=n).map(|i| i.to_string()).collect();
    let links: Vec<Link> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(tail, head))| Link {
            id: format!("e{}", i + 1),
            tail,
            head,
        })
        .collect();
    let mut incident = vec![Vec::new(); n];
    for (i, l) in links.iter().enumerate() {
        incident[l.tail].push(i);
        incident[l.head].push(i);
    }
    let mut collisions = vec![BTreeSet::new(); links.len()];
    let mut delays = BTreeMap::new();
    for group in &incident {
        for &a in group {
            for &b in group {
                if a != b {
                    collisions[a].insert(b);
                    delays.insert((a, b), 0);
                }
            }
        }
    }
    Network::from_parts(nodes, links, collisions, delays)
}

fn random_sessions(
    net: &Network,
    config: &RandomNetConfig,
    rng: &mut ChaCha8Rng,
) -> Option<SessionSet> {
    let reach: Vec<Vec<usize>> = (0..net.node_count())
        .map(|v| net.reachable_from(v).into_iter().collect())
        .collect();
    let candidates: Vec<usize> = (0..net.node_count())
        .filter(|&v| reach[v].len() >= config.sinks_per_session)
        .collect();
    let one = Rational::from_integer(1.into());
    let mut sessions = Vec::with_capacity(config.sessions);
    for _ in 0..config.sessions {
        let &source = candidates.choose(rng)?;
        let mut sinks: Vec<usize> = reach[source]
            .choose_multiple(rng, config.sinks_per_session)
            .copied()
            .collect();
        sinks.sort_unstable();
        sessions.push(Session {
            source,
            sinks,
            gamma: one.clone(),
        });
    }
    Some(SessionSet::new(sessions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::netfile;
    use crate::scalar::rational;
    use std::time::Instant;

    #[test]
    fn line_4_1_unit_delay_matches_reference_graph() {
        let net = gen_line_network(4, 1, 1).unwrap();
        assert!(net.validate().is_empty());
        assert_eq!(net.collision_set(0), &BTreeSet::from([1, 2]));
        assert_eq!(net.delay(0, 1), Some(1));
        assert_eq!(net.delay(0, 2), Some(0));
        // l2 -> {l3, l4}, l3 -> {l4}, l4 -> {}
        assert_eq!(net.collision_set(1), &BTreeSet::from([2, 3]));
        assert_eq!(net.collision_set(2), &BTreeSet::from([3]));
        assert!(net.collision_set(3).is_empty());
        assert_eq!(net.delay(1, 2), Some(1));
        assert_eq!(net.delay(1, 3), Some(0));
        assert_eq!(net.delay(2, 3), Some(1));
    }

    #[test]
    fn line_2_1_zero_delay() {
        let net = gen_line_network(2, 1, 0).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.collision_set(0), &BTreeSet::from([1]));
        // The formula is one-directional; the conflict relation is not.
        assert!(net.collision_set(1).is_empty());
        assert!(net.conflicts(1, 0));
        assert!(net.delays().values().all(|&d| d == 0));
        assert!(!net.has_nonzero_delay());
    }

    #[test]
    fn single_hop_line_has_no_collisions() {
        let net = gen_line_network(1, 1, 1).unwrap();
        assert_eq!(net.link_count(), 1);
        assert!(net.collision_set(0).is_empty());
        assert!(net.validate().is_empty());
    }

    #[test]
    fn line_rejects_degenerate_parameters() {
        assert!(gen_line_network(0, 1, 1).is_err());
        assert!(gen_line_network(3, 0, 1).is_err());
    }

    #[test]
    fn line_collision_set_sizes() {
        for hops in 1..9usize {
            for k in 1..4usize {
                let net = gen_line_network(hops, k, 1).unwrap();
                assert!(net.validate().is_empty());
                for i in 1..=hops {
                    let expected = (1..=hops)
                        .filter(|&j| j != i && (i as i64 + 1 - j as i64).abs() <= k as i64)
                        .count();
                    assert_eq!(net.collision_set(i - 1).len(), expected);
                }
            }
        }
    }

    #[test]
    fn bidir_two_nodes() {
        let (net, sessions) = gen_bidir_line_scd(2, &BidirOptions::default()).unwrap();
        assert_eq!(net.link_count(), 2);
        assert_eq!(net.collision_set(0), &BTreeSet::from([1]));
        assert_eq!(net.collision_set(1), &BTreeSet::from([0]));
        assert_eq!(sessions.len(), 2);
        assert!(sessions.validate(&net).is_empty());
    }

    #[test]
    fn bidir_three_nodes_single_collision_domain() {
        let (net, _) = gen_bidir_line_scd(3, &BidirOptions::default()).unwrap();
        assert_eq!(net.link_count(), 4);
        for l in 0..4 {
            let expected: BTreeSet<usize> = (0..4).filter(|&x| x != l).collect();
            assert_eq!(net.collision_set(l), &expected);
        }
        assert!(net.validate().is_empty());
    }

    #[test]
    fn bidir_half_rate_session() {
        let opts = BidirOptions {
            hop_delay: 0,
            gammas: (rational(1, 1), rational(1, 2)),
        };
        let (_, sessions) = gen_bidir_line_scd(2, &opts).unwrap();
        assert_eq!(sessions.sessions[1].gamma, rational(1, 2));
        assert!(gen_bidir_line_scd(1, &opts).is_err());
    }

    #[test]
    fn bidir_delay_variant_agrees_with_line_formula_on_forward_links() {
        let opts = BidirOptions {
            hop_delay: 1,
            ..BidirOptions::default()
        };
        let (net, _) = gen_bidir_line_scd(4, &opts).unwrap();
        let line = gen_line_network(3, 3, 1).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert_eq!(net.delay(a, b), line.delay(a, b));
                }
            }
        }
        assert!(net.validate().is_empty());
    }

    #[test]
    fn random_three_nodes() {
        for seed in 0..20 {
            let inst = gen_random_acyclic(&RandomNetConfig::new(3, 1), seed).unwrap();
            let net = &inst.network;
            assert!(net.validate().is_empty());
            assert!((2..=3).contains(&net.link_count()));
            let s = &inst.sessions.sessions[0];
            assert_eq!(s.sinks.len(), 2);
            let reach = net.reachable_from(s.source);
            assert!(s.sinks.iter().all(|t| reach.contains(t)));
            assert!(inst.sessions.validate(net).is_empty());
        }
    }

    #[test]
    fn random_is_deterministic() {
        let cfg = RandomNetConfig::new(12, 2);
        let a = gen_random_acyclic(&cfg, 42).unwrap();
        let b = gen_random_acyclic(&cfg, 42).unwrap();
        assert_eq!(
            netfile::write(&a.network, &a.sessions),
            netfile::write(&b.network, &b.sessions)
        );
    }

    #[test]
    fn random_respects_link_cap_and_is_acyclic() {
        let mut cfg = RandomNetConfig::new(6, 2);
        cfg.edge_prob = 0.9;
        cfg.max_links = Some(8);
        for seed in 0..30 {
            let inst = gen_random_acyclic(&cfg, seed).unwrap();
            assert!(inst.network.link_count() <= 8);
            for v in 0..inst.network.node_count() {
                assert!(!inst.network.reachable_from(v).contains(&v));
            }
        }
    }

    #[test]
    fn random_eighty_nodes_is_fast_and_valid() {
        let start = Instant::now();
        let inst = gen_random_acyclic(&RandomNetConfig::new(80, 1), 7).unwrap();
        assert!(inst.network.validate().is_empty());
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }
}
