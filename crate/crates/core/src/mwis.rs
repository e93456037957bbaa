//! Exact maximum-weight independent set on the link conflict graph.
//!
//! This is the vertex oracle for zero-delay networks: the indicator of an
//! optimal set maximizes `<a, R>` over the scheduling rate region.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::net::{Network, RateVector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct IndependentSetSolution<S> {
    /// Selected link indices, ascending.
    pub selected: Vec<usize>,
    pub value: S,
    pub indicator: RateVector,
}

/// Branch-and-bound over links in index order, include branch first.
///
/// Only links with positive weight are candidates. Among optimal sets the
/// one that includes the earliest links wins (lexicographically smallest by
/// link index): the depth-first order visits sets in that preference order
/// and the incumbent is only replaced by a strictly better value.
pub fn mwis_solve<S: Scalar>(net: &Network, weights: &[S]) -> Result<IndependentSetSolution<S>> {
    if weights.len() != net.link_count() {
        return Err(Error::InvalidArgument(format!(
            "weight vector has {} entries for {} links",
            weights.len(),
            net.link_count()
        )));
    }
    let candidates: Vec<usize> = (0..net.link_count())
        .filter(|&l| weights[l].is_pos())
        .collect();
    let k = candidates.len();
    let conflict: Vec<FixedBitSet> = candidates
        .iter()
        .map(|&a| {
            let mut bits = FixedBitSet::with_capacity(k);
            for (j, &b) in candidates.iter().enumerate() {
                if net.conflicts(a, b) {
                    bits.insert(j);
                }
            }
            bits
        })
        .collect();
    let search = Search {
        weights: candidates.iter().map(|&l| weights[l].clone()).collect(),
        conflict,
    };
    let mut best = (S::zero(), Vec::new());
    let mut chosen = Vec::new();
    let mut avail = FixedBitSet::with_capacity(k);
    avail.insert_range(..);
    search.branch(&avail, S::zero(), &mut chosen, &mut best);

    let selected: Vec<usize> = best.1.iter().map(|&p| candidates[p]).collect();
    let value = selected
        .iter()
        .fold(S::zero(), |acc, &l| acc + weights[l].clone());
    Ok(IndependentSetSolution {
        indicator: RateVector::indicator(net.link_count(), &selected),
        selected,
        value,
    })
}

struct Search<S> {
    weights: Vec<S>,
    conflict: Vec<FixedBitSet>,
}

impl<S: Scalar> Search<S> {
    fn branch(
        &self,
        avail: &FixedBitSet,
        value: S,
        chosen: &mut Vec<usize>,
        best: &mut (S, Vec<usize>),
    ) {
        let Some(next) = avail.ones().next() else {
            if value.exceeds(&best.0) {
                *best = (value, chosen.clone());
            }
            return;
        };
        let bound = avail
            .ones()
            .fold(value.clone(), |acc, p| acc + self.weights[p].clone());
        if !bound.exceeds(&best.0) {
            return;
        }

        let mut include = avail.clone();
        include.set(next, false);
        include.difference_with(&self.conflict[next]);
        chosen.push(next);
        self.branch(
            &include,
            value.clone() + self.weights[next].clone(),
            chosen,
            best,
        );
        chosen.pop();

        let mut exclude = avail.clone();
        exclude.set(next, false);
        self.branch(&exclude, value, chosen, best);
    }
}

/// Greedy maximal independent set, lowest conflict degree first (ties by
/// link index), so high-degree links are considered last.
pub fn greedy_maximal_independent_set(net: &Network) -> Vec<usize> {
    let n = net.link_count();
    let degree: Vec<usize> = (0..n)
        .map(|a| (0..n).filter(|&b| net.conflicts(a, b)).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&l| (degree[l], l));
    let mut chosen: Vec<usize> = Vec::new();
    for l in order {
        if chosen.iter().all(|&c| !net.conflicts(c, l)) {
            chosen.push(l);
        }
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{gen_line_network, Link};
    use crate::scalar::{rational, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn random_conflict_net(n: usize, edges: &[(usize, usize)]) -> Network {
        let nodes = vec!["a".to_string(), "b".to_string()];
        let links = (0..n)
            .map(|i| Link {
                id: format!("l{i}"),
                tail: 0,
                head: 1,
            })
            .collect();
        let mut collisions = vec![BTreeSet::new(); n];
        let mut delays = BTreeMap::new();
        for &(a, b) in edges {
            if a != b {
                collisions[a].insert(b);
                delays.insert((a, b), 0);
            }
        }
        Network::from_parts(nodes, links, collisions, delays)
    }

    fn brute_force(net: &Network, w: &[Rational]) -> Rational {
        let n = net.link_count();
        let mut best = Rational::zero();
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let independent = set
                .iter()
                .all(|&a| set.iter().all(|&b| !net.conflicts(a, b)));
            if independent {
                let v = set.iter().fold(Rational::zero(), |acc, &l| acc + &w[l]);
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    #[test]
    fn two_link_line_tie_breaks_to_first_link() {
        let net = gen_line_network(2, 1, 0).unwrap();
        let sol = mwis_solve(&net, &[rational(1, 1), rational(1, 1)]).unwrap();
        assert_eq!(sol.value, rational(1, 1));
        assert_eq!(sol.selected, vec![0]);
        assert_eq!(
            sol.indicator,
            RateVector(vec![rational(1, 1), rational(0, 1)])
        );
    }

    #[test]
    fn zero_weights_select_nothing() {
        let net = gen_line_network(4, 1, 1).unwrap();
        let sol = mwis_solve(&net, &[0.0; 4]).unwrap();
        assert!(sol.selected.is_empty());
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn negative_weights_are_never_selected() {
        let net = random_conflict_net(3, &[]);
        let sol = mwis_solve(&net, &[-1.0, 2.0, 0.0]).unwrap();
        assert_eq!(sol.selected, vec![1]);
    }

    #[test]
    fn wrong_weight_length_is_rejected() {
        let net = gen_line_network(3, 1, 0).unwrap();
        assert!(mwis_solve(&net, &[1.0]).is_err());
    }

    #[test]
    fn asymmetric_collisions_block_both_orders() {
        let net = random_conflict_net(2, &[(1, 0)]);
        let sol = mwis_solve(&net, &[rational(1, 1), rational(2, 1)]).unwrap();
        assert_eq!(sol.selected, vec![1]);
    }

    #[test]
    fn greedy_set_is_maximal() {
        let net = gen_line_network(4, 1, 1).unwrap();
        let set = greedy_maximal_independent_set(&net);
        assert_eq!(set, vec![0, 3]);
        let net2 = gen_line_network(2, 1, 0).unwrap();
        assert_eq!(greedy_maximal_independent_set(&net2), vec![0]);
    }

    fn conflict_graph() -> impl Strategy<Value = (Network, Vec<Rational>)> {
        (1usize..=12).prop_flat_map(|n| {
            (
                proptest::collection::vec((0..n, 0..n), 0..(n * 2)),
                proptest::collection::vec(0i64..20, n),
            )
                .prop_map(move |(edges, w)| {
                    (
                        random_conflict_net(n, &edges),
                        w.into_iter().map(|x| rational(x, 3)).collect(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force((net, w) in conflict_graph()) {
            let sol = mwis_solve(&net, &w).unwrap();
            prop_assert_eq!(sol.value.clone(), brute_force(&net, &w));
            for &a in &sol.selected {
                for &b in &sol.selected {
                    prop_assert!(!net.conflicts(a, b));
                }
            }
        }

        #[test]
        fn positive_scaling_keeps_the_argmax((net, w) in conflict_graph(), c in 1i64..50) {
            let scaled: Vec<Rational> = w.iter().map(|x| x * rational(c, 7)).collect();
            let a = mwis_solve(&net, &w).unwrap();
            let b = mwis_solve(&net, &scaled).unwrap();
            prop_assert_eq!(&a.selected, &b.selected);
            prop_assert_eq!(a.value * rational(c, 7), b.value);
        }
    }
}
