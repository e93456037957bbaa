//! Simple-cycle enumeration (Johnson's blocking backtrack), one independent
//! search per start vertex so starts can run in parallel.

use fixedbitset::FixedBitSet;

use crate::digraph::{strongly_connected_components, Adjacency};

/// Visits every simple cycle whose smallest vertex is `s`, as the vertex
/// list `v_0 = s, ..., v_{m-1}` (the closing edge back to `s` implied).
///
/// The visitor returns `false` to stop early; the function then returns
/// `false` as well.
pub fn cycles_from<A, F>(g: &A, s: usize, mut visit: F) -> bool
where
    A: Adjacency + ?Sized,
    F: FnMut(&[usize]) -> bool,
{
    let n = g.vertex_count();
    let comp = strongly_connected_components(g, |v| v >= s)
        .into_iter()
        .find(|c| c[0] == s)
        .expect("every kept vertex belongs to a component");
    let mut inside = FixedBitSet::with_capacity(n);
    for &v in &comp {
        inside.insert(v);
    }
    if comp.len() == 1 && !g.successors(s).contains(&(s as u32)) {
        return true;
    }

    let mut blocked = FixedBitSet::with_capacity(n);
    let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut path = vec![s];
    // (vertex, next successor position, closed a cycle below)
    let mut frames: Vec<(usize, usize, bool)> = vec![(s, 0, false)];
    blocked.insert(s);

    while let Some(&mut (v, ref mut pos, ref mut found)) = frames.last_mut() {
        let succ = g.successors(v);
        if *pos < succ.len() {
            let w = succ[*pos] as usize;
            *pos += 1;
            if !inside.contains(w) {
                continue;
            }
            if w == s {
                *found = true;
                if !visit(&path) {
                    return false;
                }
            } else if !blocked.contains(w) {
                blocked.insert(w);
                path.push(w);
                frames.push((w, 0, false));
            }
            continue;
        }
        let closed = *found;
        frames.pop();
        path.pop();
        if closed {
            unblock(v, &mut blocked, &mut waiting);
        } else {
            for &w in succ {
                let w = w as usize;
                if inside.contains(w) && !waiting[w].contains(&v) {
                    waiting[w].push(v);
                }
            }
        }
        if let Some(parent) = frames.last_mut() {
            parent.2 |= closed;
        }
    }
    true
}

fn unblock(v: usize, blocked: &mut FixedBitSet, waiting: &mut [Vec<usize>]) {
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if !blocked.contains(u) {
            continue;
        }
        blocked.set(u, false);
        stack.extend(std::mem::take(&mut waiting[u]));
    }
}
