//! Minimal adjacency-list digraph utilities.

pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn successors(&self, v: usize) -> &[u32];
}

impl Adjacency for Vec<Vec<u32>> {
    fn vertex_count(&self) -> usize {
        self.len()
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self[v]
    }
}

/// Strongly connected components of the subgraph induced by vertices with
/// `keep(v)`. Each component is sorted; components are ordered by their
/// smallest vertex.
pub fn strongly_connected_components<A, F>(g: &A, keep: F) -> Vec<Vec<usize>>
where
    A: Adjacency + ?Sized,
    F: Fn(usize) -> bool,
{
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut components = Vec::new();
    // (vertex, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN || !keep(root) {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos] as usize;
                *pos += 1;
                if !keep(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components.sort_by_key(|c| c[0]);
    components
}

/// True when the component carries at least one cycle (more than one
/// vertex, or a self-loop).
pub fn component_has_cycle<A: Adjacency + ?Sized>(g: &A, comp: &[usize]) -> bool {
    comp.len() > 1 || g.successors(comp[0]).contains(&(comp[0] as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_components() {
        // 0 <-> 1 -> 2 -> 3 -> 2, 4 isolated with self-loop
        let g: Vec<Vec<u32>> = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![4]];
        let comps = strongly_connected_components(&g, |_| true);
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert!(component_has_cycle(&g, &comps[2]));
    }

    #[test]
    fn respects_vertex_filter() {
        let g: Vec<Vec<u32>> = vec![vec![1], vec![2], vec![0]];
        let comps = strongly_connected_components(&g, |v| v != 2);
        assert_eq!(comps, vec![vec![0], vec![1]]);
        assert!(!component_has_cycle(&g, &comps[0]));
    }
}
