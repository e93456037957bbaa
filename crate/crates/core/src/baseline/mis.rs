//! Maximal independent sets of the conflict graph, as maximal cliques of
//! its complement (Bron-Kerbosch with pivoting).

use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::net::Network;
use crate::par;

/// All maximal independent sets, each ascending, in lexicographic order.
pub fn maximal_independent_sets(net: &Network, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = net.link_count();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let compatible: Vec<FixedBitSet> = (0..n)
        .map(|a| {
            let mut bits = FixedBitSet::with_capacity(n);
            for b in 0..n {
                if a != b && !net.conflicts(a, b) {
                    bits.insert(b);
                }
            }
            bits
        })
        .collect();
    let found = AtomicUsize::new(0);
    let search = Search {
        adj: &compatible,
        found: &found,
        cap,
    };

    // One independent branch per vertex v: later compatible vertices are
    // candidates, earlier ones are excluded.
    let branches = par::map_range(n, |v| {
        let mut p = compatible[v].clone();
        let mut x = compatible[v].clone();
        for u in 0..=v {
            p.set(u, false);
        }
        for u in v..n {
            x.set(u, false);
        }
        let mut out = Vec::new();
        let mut r = vec![v];
        search.expand(&mut r, p, x, &mut out).map(|_| out)
    });
    let mut all = Vec::new();
    for b in branches {
        all.extend(b?);
    }
    for set in &mut all {
        set.sort_unstable();
    }
    all.sort();
    Ok(all)
}

struct Search<'a> {
    adj: &'a [FixedBitSet],
    found: &'a AtomicUsize,
    cap: usize,
}

impl Search<'_> {
    fn expand(
        &self,
        r: &mut Vec<usize>,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if p.is_clear() && x.is_clear() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.cap {
                return Err(Error::EnumerationOverflow {
                    what: "maximal independent sets",
                    cap: self.cap,
                });
            }
            out.push(r.clone());
            return Ok(());
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection(&self.adj[u]).count())
            .expect("p or x is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.adj[pivot]);
        for v in candidates.ones() {
            let mut np = p.clone();
            np.intersect_with(&self.adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.adj[v]);
            r.push(v);
            self.expand(r, np, nx, out)?;
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
        Ok(())
    }
}
