//! Graph primitives over vertex-restricted subgraphs of a game arena.
//!
//! All functions here are deterministic: vertices are explored in ascending
//! order, components are reported sorted by their minimal vertex, and
//! shortest paths break ties toward smaller indices.

use std::collections::{BTreeSet, VecDeque};

use crate::game::{Game, Vertex};

/// Vertices reachable from `from` inside the subgraph induced on `allowed`,
/// including `from` itself. Returns the empty set when `from` is outside
/// `allowed`.
pub fn reachable_within(game: &Game, allowed: &BTreeSet<Vertex>, from: Vertex) -> BTreeSet<Vertex> {
    let mut seen = BTreeSet::new();
    if !allowed.contains(&from) {
        return seen;
    }
    seen.insert(from);
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &w in game.successors(u) {
            if allowed.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// True when the induced subgraph on `set` contains at least one edge.
pub fn has_internal_edge(game: &Game, set: &BTreeSet<Vertex>) -> bool {
    set.iter()
        .any(|&u| game.successors(u).iter().any(|v| set.contains(v)))
}

/// Strongly connected components of the subgraph induced on `within`,
/// sorted by minimal vertex. Components may be trivial (a single vertex
/// without a self-loop).
pub fn sccs_within(game: &Game, within: &BTreeSet<Vertex>) -> Vec<BTreeSet<Vertex>> {
    // Iterative Tarjan; the arena is small but recursion depth would still
    // be bounded only by |V|.
    const UNSET: usize = usize::MAX;
    let n = game.num_vertices();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut next_index = 0usize;
    let mut components: Vec<BTreeSet<Vertex>> = Vec::new();

    // Explicit DFS frames: (vertex, position in its successor list).
    let mut frames: Vec<(Vertex, usize)> = Vec::new();
    for &root in within {
        if index[root] != UNSET {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = frames.last() {
            let succs = game.successors(v);
            let mut advanced = false;
            let mut i = pos;
            while i < succs.len() {
                let w = succs[i];
                i += 1;
                if !within.contains(&w) {
                    continue;
                }
                if index[w] == UNSET {
                    frames.last_mut().expect("frame present").1 = i;
                    frames.push((w, 0));
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    advanced = true;
                    break;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if advanced {
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = BTreeSet::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.insert(w);
                    if w == v {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components.sort_by_key(|c| *c.iter().next().expect("nonempty component"));
    components
}

/// True when the subgraph induced on `set` is strongly connected (vacuously
/// for a single vertex, even without a self-loop).
pub fn is_strongly_connected_within(game: &Game, set: &BTreeSet<Vertex>) -> bool {
    match set.len() {
        0 => false,
        1 => true,
        _ => sccs_within(game, set).len() == 1,
    }
}

/// Shortest path from `from` to the nearest vertex of `targets`, staying
/// inside `allowed`. Among equally near targets the smallest index wins, and
/// the returned path (which includes both endpoints) is the breadth-first
/// one with smallest-index tie-breaking.
pub fn shortest_path_to_set(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    from: Vertex,
    targets: &BTreeSet<Vertex>,
) -> Option<Vec<Vertex>> {
    if !allowed.contains(&from) {
        return None;
    }
    let n = game.num_vertices();
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut dist: Vec<usize> = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    let mut best: Option<(usize, Vertex)> = None;
    if targets.contains(&from) {
        best = Some((0, from));
    }
    while let Some(u) = queue.pop_front() {
        if let Some((d, _)) = best {
            if dist[u] >= d {
                break;
            }
        }
        for &w in game.successors(u) {
            if allowed.contains(&w) && dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = Some(u);
                if targets.contains(&w) {
                    let cand = (dist[w], w);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
                queue.push_back(w);
            }
        }
    }
    let (_, target) = best?;
    let mut path = vec![target];
    let mut cur = target;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Some(path)
}

/// Shortest path between two vertices inside `allowed`.
pub fn shortest_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    from: Vertex,
    to: Vertex,
) -> Option<Vec<Vertex>> {
    shortest_path_to_set(game, allowed, from, &BTreeSet::from([to]))
}

/// Shortest closed walk from `v` back to `v` inside `within`, returned in
/// cycle representation: `[v, ...]` without the final repetition of `v`.
/// A self-loop yields `[v]`.
pub fn shortest_cycle_through(
    game: &Game,
    within: &BTreeSet<Vertex>,
    v: Vertex,
) -> Option<Vec<Vertex>> {
    if !within.contains(&v) {
        return None;
    }
    if game.has_edge(v, v) {
        return Some(vec![v]);
    }
    // Shortest path from any successor of v back to v, taking the smallest
    // successor that yields the minimal total length.
    let mut best: Option<Vec<Vertex>> = None;
    for &s in game.successors(v) {
        if !within.contains(&s) {
            continue;
        }
        if let Some(back) = shortest_path(game, within, s, v) {
            if best.as_ref().is_none_or(|b| back.len() < b.len()) {
                let mut walk = vec![v];
                walk.extend_from_slice(&back[..back.len() - 1]);
                best = Some(walk);
            }
        }
    }
    best
}

/// Removes every cycle from a walk, leaving a simple path with the same
/// endpoints: whenever a vertex repeats, the portion since its first
/// occurrence is dropped.
pub fn eliminate_cycles(walk: &[Vertex]) -> Vec<Vertex> {
    let mut path: Vec<Vertex> = Vec::new();
    for &v in walk {
        if let Some(pos) = path.iter().position(|&u| u == v) {
            path.truncate(pos + 1);
        } else {
            path.push(v);
        }
    }
    path
}
