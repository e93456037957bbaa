use std::fmt;

use super::graph::SchedulingGraph;
use crate::net::{Network, RateVector};
use crate::scalar::Rational;

/// Finite binary schedule matrix, rows = links, columns = slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    links: usize,
    columns: usize,
    cells: Vec<bool>,
}

impl Schedule {
    pub fn new(links: usize, columns: usize) -> Self {
        Schedule {
            links,
            columns,
            cells: vec![false; links * columns],
        }
    }

    pub fn links(&self) -> usize {
        self.links
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn get(&self, link: usize, slot: usize) -> bool {
        self.cells[link * self.columns + slot]
    }

    pub fn set(&mut self, link: usize, slot: usize, active: bool) {
        self.cells[link * self.columns + slot] = active;
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.links {
            for t in 0..self.columns {
                f.write_str(if self.get(l, t) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Concatenates the blocks `v_0 .. v_{m-1}` of a cycle, `periods` times.
pub fn realize_schedule(graph: &SchedulingGraph, cycle: &[usize], periods: usize) -> Schedule {
    let blocks = &cycle[..cycle.len().saturating_sub(1)];
    let t = graph.window();
    let mut s = Schedule::new(graph.link_count(), periods * blocks.len() * t);
    for p in 0..periods {
        for (j, &v) in blocks.iter().enumerate() {
            let base = (p * blocks.len() + j) * t;
            for l in 0..graph.link_count() {
                for slot in 0..t {
                    if graph.cell(v, l, slot) {
                        s.set(l, base + slot, true);
                    }
                }
            }
        }
    }
    s
}

/// `link` active at `slot` while `other ∈ I(link)` is active at
/// `other_slot = slot + D(link, other)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Collision {
    pub link: usize,
    pub slot: usize,
    pub other: usize,
    pub other_slot: usize,
}

/// Checks every pair whose slots both fall inside the matrix; reports the
/// first collision in slot-major order.
pub fn verify_collision_free(net: &Network, schedule: &Schedule) -> Result<(), Collision> {
    let cols = schedule.columns() as i64;
    for slot in 0..schedule.columns() {
        for link in 0..schedule.links() {
            if !schedule.get(link, slot) {
                continue;
            }
            for (other, delay) in net.interferers(link) {
                let other_slot = slot as i64 + delay;
                if (0..cols).contains(&other_slot) && schedule.get(other, other_slot as usize) {
                    return Err(Collision {
                        link,
                        slot,
                        other,
                        other_slot: other_slot as usize,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Fraction of active columns per link.
pub fn empirical_rate(schedule: &Schedule) -> RateVector {
    let cols = schedule.columns().max(1) as i64;
    RateVector(
        (0..schedule.links())
            .map(|l| {
                let active = (0..schedule.columns())
                    .filter(|&t| schedule.get(l, t))
                    .count();
                Rational::new((active as i64).into(), cols.into())
            })
            .collect(),
    )
}
