use std::collections::HashSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::net::RateVector;
use crate::scalar::Rational;

/// Finite list of known rate-region vertices; the region subset is their
/// convex hull, which is never formed explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSubset {
    links: usize,
    vertices: Vec<RateVector>,
    seen: HashSet<RateVector>,
}

impl RegionSubset {
    pub fn new(first: RateVector) -> Result<Self> {
        Self::from_vertices(vec![first])
    }

    /// Deduplicates while keeping first-occurrence order.
    pub fn from_vertices(vertices: Vec<RateVector>) -> Result<Self> {
        let Some(links) = vertices.first().map(RateVector::len) else {
            return Err(Error::InvalidArgument(
                "region subset must be nonempty".into(),
            ));
        };
        let mut region = RegionSubset {
            links,
            vertices: Vec::with_capacity(vertices.len()),
            seen: HashSet::new(),
        };
        for v in vertices {
            region.insert(v)?;
        }
        Ok(region)
    }

    /// Adds a vertex; returns `false` if it was already present.
    pub fn insert(&mut self, v: RateVector) -> Result<bool> {
        if v.len() != self.links {
            return Err(Error::InvalidArgument(format!(
                "rate vector has {} entries, region has {} links",
                v.len(),
                self.links
            )));
        }
        if !v.in_unit_box() {
            return Err(Error::InvalidArgument(
                "rate vector entries must lie in [0, 1]".into(),
            ));
        }
        if self.seen.contains(&v) {
            return Ok(false);
        }
        self.seen.insert(v.clone());
        self.vertices.push(v);
        Ok(true)
    }

    pub fn contains(&self, v: &RateVector) -> bool {
        self.seen.contains(v)
    }

    pub fn links(&self) -> usize {
        self.links
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RateVector] {
        &self.vertices
    }

    /// `max_k <a, R_k>` and the first index attaining it.
    pub fn best_score(&self, a: &[Rational]) -> (usize, Rational) {
        let mut best = (0, self.vertices[0].dot(a));
        for (k, v) in self.vertices.iter().enumerate().skip(1) {
            let s = v.dot(a);
            if s > best.1 {
                best = (k, s);
            }
        }
        best
    }

    /// Sorted copy of the vertex list, for order-independent comparison.
    pub fn sorted(&self) -> Vec<RateVector> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    pub fn contains_zero(&self) -> bool {
        self.vertices.iter().any(|v| v.0.iter().all(Zero::is_zero))
    }
}
