use mmflow::net::netfile::{parse, write};
use mmflow::net::{
    gen_bidir_line_scd, gen_line_network, gen_random_acyclic, line_unicast, BidirOptions,
    RandomNetConfig,
};
use mmflow::scalar::rational;
use proptest::prelude::*;

#[test]
fn line_generators_validate() {
    for hops in 1..=8 {
        for k in 1..=3 {
            for d in 0..=2 {
                let net = gen_line_network(hops, k, d).unwrap();
                assert!(net.validate().is_empty(), "N_{hops},{k} d={d}");
                assert_eq!(net.link_count(), hops);
                line_unicast(&net).ensure_valid(&net).unwrap();
            }
        }
    }
}

#[test]
fn bidir_generator_validates() {
    for hop_delay in 0..=2 {
        for nodes in 2..=6 {
            let opts = BidirOptions {
                hop_delay,
                gammas: (rational(1, 1), rational(1, 3)),
            };
            let (net, s) = gen_bidir_line_scd(nodes, &opts).unwrap();
            assert!(net.validate().is_empty());
            s.ensure_valid(&net).unwrap();
            assert_eq!(net.link_count(), 2 * (nodes - 1));
            assert_eq!(net.has_nonzero_delay(), hop_delay != 0);
        }
    }
}

#[test]
fn random_generator_is_deterministic() {
    let cfg = RandomNetConfig::new(7, 2);
    let a = gen_random_acyclic(&cfg, 99).unwrap();
    let b = gen_random_acyclic(&cfg, 99).unwrap();
    assert_eq!(
        write(&a.network, &a.sessions),
        write(&b.network, &b.sessions)
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_networks_validate_and_round_trip(
        seed in any::<u64>(),
        nodes in 3usize..10,
        sessions in 1usize..4,
        cap in 0usize..6,
    ) {
        let cfg = RandomNetConfig {
            max_links: Some(nodes - 1 + cap),
            ..RandomNetConfig::new(nodes, sessions)
        };
        let inst = gen_random_acyclic(&cfg, seed).unwrap();
        prop_assert!(inst.network.validate().is_empty());
        prop_assert!(inst.sessions.validate(&inst.network).is_empty());
        prop_assert!(inst.network.link_count() <= nodes - 1 + cap);
        prop_assert!(!inst.network.has_nonzero_delay());
        // One-hop interference: sharing an endpoint is exactly a conflict.
        let links = inst.network.links();
        for a in 0..links.len() {
            for b in 0..links.len() {
                if a != b {
                    let (x, y) = (&links[a], &links[b]);
                    let share = x.tail == y.tail || x.tail == y.head || x.head == y.tail || x.head == y.head;
                    prop_assert_eq!(inst.network.conflicts(a, b), share);
                }
            }
        }

        let text = write(&inst.network, &inst.sessions);
        let (net, s) = parse(&text).unwrap();
        prop_assert_eq!(&net, &inst.network);
        prop_assert_eq!(&s, &inst.sessions);
    }
}

#[test]
fn delayed_line_round_trips() {
    let net = gen_line_network(5, 2, 1).unwrap();
    let (bidir, bs) = gen_bidir_line_scd(
        4,
        &BidirOptions {
            hop_delay: 1,
            gammas: (rational(2, 3), rational(1, 7)),
        },
    )
    .unwrap();
    let s = line_unicast(&net);
    assert_eq!(parse(&write(&net, &s)).unwrap(), (net, s));
    assert_eq!(parse(&write(&bidir, &bs)).unwrap(), (bidir, bs));
}

#[test]
fn diagnostics_point_at_the_offending_line() {
    let text = r#"{
  "nodes": ["1", "2"],
  "links": [
    {"id": "a", "tail": "1", "head": "2"},
    {"id": "b", "tail": "2", "head": "9"}
  ],
  "collisions": {"a": ["b"]},
  "delays": [{"from": "a", "to": "b", "d": 0}],
  "sessions": [{"source": "1", "sinks": ["2"]}]
}"#;
    let err = parse(text).unwrap_err();
    assert!(err.diagnostics.iter().any(|d| d.line == Some(5)), "{err}");

    let syntax = "{\n  \"nodes\": [\"1\",\n  ]\n}";
    let err = parse(syntax).unwrap_err();
    assert_eq!(err.diagnostics[0].line, Some(3));
}

#[test]
fn missing_delay_entry_is_reported() {
    let text = r#"{
  "nodes": ["1", "2"],
  "links": [{"id": "a", "tail": "1", "head": "2"}, {"id": "b", "tail": "1", "head": "2"}],
  "collisions": {"a": ["b"]},
  "sessions": [{"source": "1", "sinks": ["2"], "gamma": "1/2"}]
}"#;
    let err = parse(text).unwrap_err();
    assert!(!err.diagnostics.is_empty());
}
