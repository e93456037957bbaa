//! Network and session model.
//!
//! A [`Network`] is a set of nodes, directed links (parallel links allowed),
//! a per-link collision set and an integer delay for every colliding ordered
//! pair. Link `l` collides with `l' ∈ I(l)` when `l` is active in slot `t`
//! and `l'` is active in slot `t + D(l, l')`. The relation is stored as given
//! and is not assumed to be symmetric.

mod generate;
pub mod netfile;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub use generate::{
    gen_bidir_line_scd, gen_line_network, gen_random_acyclic, line_unicast, BidirOptions,
    RandomInstance, RandomNetConfig,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    links: Vec<Link>,
    collisions: Vec<BTreeSet<usize>>,
    delays: BTreeMap<(usize, usize), i64>,
}

impl Network {
    /// Assembles a network without checking it; see [`Network::validate`].
    ///
    /// `collisions` is padded or truncated to one entry per link.
    pub fn from_parts(
        nodes: Vec<String>,
        links: Vec<Link>,
        mut collisions: Vec<BTreeSet<usize>>,
        delays: BTreeMap<(usize, usize), i64>,
    ) -> Self {
        collisions.resize(links.len(), BTreeSet::new());
        Network {
            nodes,
            links,
            collisions,
            delays,
        }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.links.iter().position(|l| l.id == id)
    }

    /// The collision set `I(l)`.
    pub fn collision_set(&self, link: usize) -> &BTreeSet<usize> {
        &self.collisions[link]
    }

    pub fn delays(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.delays
    }

    pub fn delay(&self, from: usize, to: usize) -> Option<i64> {
        self.delays.get(&(from, to)).copied()
    }

    /// `(l', D(l, l'))` for every `l' ∈ I(l)`; a missing delay reads as 0.
    pub fn interferers(&self, link: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.collisions[link]
            .iter()
            .map(move |&other| (other, self.delay(link, other).unwrap_or(0)))
    }

    /// True when the two links may not be active in the same slot of a
    /// zero-delay schedule, i.e. either lies in the other's collision set.
    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        a != b && (self.collisions[a].contains(&b) || self.collisions[b].contains(&a))
    }

    pub fn has_nonzero_delay(&self) -> bool {
        self.delays.values().any(|&d| d != 0)
    }

    pub fn max_abs_delay(&self) -> u64 {
        self.delays
            .values()
            .map(|d| d.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn out_links(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.tail == node)
            .map(|(i, _)| i)
    }

    pub fn in_links(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.head == node)
            .map(|(i, _)| i)
    }

    /// Nodes reachable from `node` by a nonempty directed path.
    pub fn reachable_from(&self, node: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(u) = stack.pop() {
            for l in self.out_links(u) {
                let v = self.links[l].head;
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Returns every violated invariant; empty iff the network is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let link_name = |i: usize| {
            self.links
                .get(i)
                .map(|l| l.id.clone())
                .unwrap_or_else(|| format!("#{i}"))
        };

        let mut seen_nodes = BTreeSet::new();
        for node in &self.nodes {
            if !seen_nodes.insert(node) {
                out.push(Violation::new(
                    ViolationKind::DuplicateNode,
                    node.clone(),
                    None,
                ));
            }
        }
        let mut seen_links = BTreeSet::new();
        for (i, link) in self.links.iter().enumerate() {
            if !seen_links.insert(&link.id) {
                out.push(Violation::new(
                    ViolationKind::DuplicateLink,
                    link.id.clone(),
                    None,
                ));
            }
            for endpoint in [link.tail, link.head] {
                if endpoint >= self.nodes.len() {
                    out.push(Violation::new(
                        ViolationKind::UnknownEndpoint,
                        link_name(i),
                        Some(format!("node #{endpoint}")),
                    ));
                }
            }
        }
        for (i, set) in self.collisions.iter().enumerate() {
            for &other in set {
                if other == i {
                    out.push(Violation::new(
                        ViolationKind::SelfCollision,
                        link_name(i),
                        None,
                    ));
                } else if other >= self.links.len() {
                    out.push(Violation::new(
                        ViolationKind::UnknownCollisionTarget,
                        link_name(i),
                        Some(link_name(other)),
                    ));
                } else if !self.delays.contains_key(&(i, other)) {
                    out.push(Violation::new(
                        ViolationKind::MissingDelay,
                        link_name(i),
                        Some(link_name(other)),
                    ));
                }
            }
        }
        for &(from, to) in self.delays.keys() {
            let defined = self.collisions.get(from).is_some_and(|s| s.contains(&to));
            if !defined {
                out.push(Violation::new(
                    ViolationKind::DelayWithoutCollision,
                    link_name(from),
                    Some(link_name(to)),
                ));
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateNode,
    DuplicateLink,
    UnknownEndpoint,
    SelfCollision,
    UnknownCollisionTarget,
    MissingDelay,
    DelayWithoutCollision,
}

/// One broken network invariant, naming the offending link (and partner).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: String,
    pub other: Option<String>,
}

impl Violation {
    fn new(kind: ViolationKind, subject: String, other: Option<String>) -> Self {
        Violation {
            kind,
            subject,
            other,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let other = self.other.as_deref().unwrap_or("?");
        match self.kind {
            ViolationKind::DuplicateNode => write!(f, "node `{}` declared twice", self.subject),
            ViolationKind::DuplicateLink => write!(f, "link `{}` declared twice", self.subject),
            ViolationKind::UnknownEndpoint => {
                write!(f, "link `{}` has undeclared endpoint {other}", self.subject)
            }
            ViolationKind::SelfCollision => {
                write!(
                    f,
                    "link `{}` lists itself in its collision set",
                    self.subject
                )
            }
            ViolationKind::UnknownCollisionTarget => {
                write!(
                    f,
                    "link `{}` collides with unknown link {other}",
                    self.subject
                )
            }
            ViolationKind::MissingDelay => {
                write!(
                    f,
                    "no delay for colliding pair (`{}`, `{other}`)",
                    self.subject
                )
            }
            ViolationKind::DelayWithoutCollision => write!(
                f,
                "delay given for non-colliding pair (`{}`, `{other}`)",
                self.subject
            ),
        }
    }
}

/// A multicast session: one source, a nonempty sink set and a traffic weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub source: usize,
    pub sinks: Vec<usize>,
    pub gamma: Rational,
}

impl Session {
    pub fn unicast(source: usize, sink: usize) -> Self {
        Session {
            source,
            sinks: vec![sink],
            gamma: Rational::from_integer(1.into()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SessionSet {
    pub sessions: Vec<Session>,
}

impl SessionSet {
    pub fn new(sessions: Vec<Session>) -> Self {
        SessionSet { sessions }
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Session> {
        self.sessions.iter()
    }

    pub fn validate(&self, net: &Network) -> Vec<String> {
        let mut out = Vec::new();
        let n = net.node_count();
        if self.sessions.is_empty() {
            out.push("no sessions declared".to_string());
        }
        for (i, s) in self.sessions.iter().enumerate() {
            if s.source >= n {
                out.push(format!("session {i}: undeclared source node #{}", s.source));
            }
            if s.sinks.is_empty() {
                out.push(format!("session {i}: empty sink set"));
            }
            let mut seen = BTreeSet::new();
            for &t in &s.sinks {
                if t >= n {
                    out.push(format!("session {i}: undeclared sink node #{t}"));
                }
                if t == s.source {
                    out.push(format!("session {i}: source is also one of its sinks"));
                }
                if !seen.insert(t) {
                    out.push(format!("session {i}: sink #{t} listed twice"));
                }
            }
            if !s.gamma.is_positive() {
                out.push(format!("session {i}: traffic weight must be positive"));
            }
        }
        out
    }

    pub fn ensure_valid(&self, net: &Network) -> Result<()> {
        let problems = self.validate(net);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSessions(problems))
        }
    }
}

/// Per-link nonnegative rates in packets per slot, stored exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RateVector(pub Vec<Rational>);

impl RateVector {
    pub fn zeros(links: usize) -> Self {
        RateVector(vec![Rational::zero(); links])
    }

    pub fn indicator(links: usize, selected: &[usize]) -> Self {
        let mut v = Self::zeros(links);
        for &l in selected {
            v.0[l] = Rational::from_integer(1.into());
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot<S: Scalar>(&self, weights: &[S]) -> S {
        self.0.iter().zip(weights).fold(S::zero(), |acc, (r, w)| {
            acc + S::from_rational(r) * w.clone()
        })
    }

    pub fn to_scalars<S: Scalar>(&self) -> Vec<S> {
        self.0.iter().map(S::from_rational).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.to_scalars()
    }

    pub fn in_unit_box(&self) -> bool {
        let one = Rational::from_integer(1.into());
        self.0.iter().all(|r| !r.is_negative() && *r <= one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_link_net() -> Network {
        let nodes = vec!["1".into(), "2".into(), "3".into()];
        let links = vec![
            Link {
                id: "a".into(),
                tail: 0,
                head: 1,
            },
            Link {
                id: "b".into(),
                tail: 1,
                head: 2,
            },
        ];
        Network::from_parts(nodes, links, vec![], BTreeMap::new())
    }

    #[test]
    fn self_collision_is_reported() {
        let mut net = two_link_net();
        net.collisions[0].insert(0);
        net.delays.insert((0, 0), 0);
        let v = net.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::SelfCollision);
        assert_eq!(v[0].subject, "a");
    }

    #[test]
    fn delay_on_non_colliding_pair_is_reported() {
        let mut net = two_link_net();
        net.delays.insert((0, 1), 2);
        let v = net.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::DelayWithoutCollision);
        assert_eq!(v[0].other.as_deref(), Some("b"));
    }

    #[test]
    fn missing_delay_and_bad_endpoint() {
        let mut net = two_link_net();
        net.collisions[1].insert(0);
        net.links[0].head = 7;
        let kinds: Vec<_> = net.validate().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::MissingDelay));
        assert!(kinds.contains(&ViolationKind::UnknownEndpoint));
    }

    #[test]
    fn session_checks() {
        let net = two_link_net();
        let ok = SessionSet::new(vec![Session::unicast(0, 2)]);
        assert!(ok.validate(&net).is_empty());
        let bad = SessionSet::new(vec![Session {
            source: 0,
            sinks: vec![0],
            gamma: Rational::zero(),
        }]);
        assert_eq!(bad.validate(&net).len(), 2);
        assert!(!SessionSet::default().validate(&net).is_empty());
    }

    #[test]
    fn reachability() {
        let net = two_link_net();
        assert_eq!(net.reachable_from(0), BTreeSet::from([1, 2]));
        assert!(net.reachable_from(2).is_empty());
    }
}
