//! Extreme points of a finite point set, exactly.
//!
//! Works outward from a small inner set `E` of known extreme points. A point
//! `p` is tested against `conv(E)` with a least-deviation LP; if `p` lies
//! outside, the LP dual is a direction `a` with `<a, p> > <a, e>` for all
//! `e` in `E`, and the lexicographically largest maximizer of `<a, .>` over
//! the whole set is a new extreme point. Every LP has at most `|E|` convex
//! weights, so the cost scales with the answer rather than the input.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::lp::{LinearProgram, Relation};
use crate::net::RateVector;
use crate::scalar::Rational;

pub fn extreme_points(points: &[RateVector]) -> Vec<RateVector> {
    let distinct: Vec<RateVector> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let Some(first) = distinct.last() else {
        return Vec::new();
    };
    // The lexicographic maximum is always extreme.
    let mut extreme: Vec<RateVector> = vec![first.clone()];
    for p in &distinct {
        loop {
            if extreme.contains(p) {
                break;
            }
            match separating_direction(&extreme, p) {
                None => break,
                Some(a) => {
                    let next = lex_max_along(&distinct, &a);
                    debug_assert!(!extreme.contains(&next));
                    extreme.push(next);
                }
            }
        }
    }
    extreme.sort();
    extreme
}

/// `None` when `p` is in `conv(hull)`, else a strictly separating direction.
fn separating_direction(hull: &[RateVector], p: &RateVector) -> Option<Vec<Rational>> {
    let dim = p.len();
    let k = hull.len();
    // vars: lambda (k), s+ (dim), s- (dim)
    let mut lp = LinearProgram::<Rational>::new(k + 2 * dim);
    for j in k..k + 2 * dim {
        lp.set_objective(j, -Rational::one());
    }
    let mut rows = Vec::with_capacity(dim);
    for l in 0..dim {
        let mut row: Vec<(usize, Rational)> = hull
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.0[l].is_zero())
            .map(|(i, e)| (i, e.0[l].clone()))
            .collect();
        row.push((k + l, Rational::one()));
        row.push((k + dim + l, -Rational::one()));
        rows.push(lp.add_constraint(row, Relation::Eq, p.0[l].clone()));
    }
    lp.add_constraint(
        (0..k).map(|i| (i, Rational::one())).collect(),
        Relation::Eq,
        Rational::one(),
    );
    let sol = lp.solve().expect("deviation LP is feasible and bounded");
    if sol.objective.is_zero() {
        return None;
    }
    Some(rows.iter().map(|&r| -sol.duals[r].clone()).collect())
}

fn lex_max_along(points: &[RateVector], a: &[Rational]) -> RateVector {
    points
        .iter()
        .map(|q| (q.dot(a), q))
        .max()
        .map(|(_, q)| q.clone())
        .expect("nonempty point set")
}
