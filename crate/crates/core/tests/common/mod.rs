//! Oracles and generators shared by the property and acceptance targets.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use tempgraph::{BaseRelation, IntervalGraph, RelationSet};

/// Allen relation of two proper integer intervals, read straight off the
/// endpoint comparisons.
pub fn allen(x: (i64, i64), y: (i64, i64)) -> BaseRelation {
    use std::cmp::Ordering::*;
    use BaseRelation::*;
    let (b, e) = (x.0.cmp(&y.0), x.1.cmp(&y.1));
    if x.1 < y.0 {
        return Before;
    }
    if y.1 < x.0 {
        return After;
    }
    if x.1 == y.0 {
        return Meets;
    }
    if y.1 == x.0 {
        return MetBy;
    }
    match (b, e) {
        (Equal, Equal) => Equals,
        (Equal, Less) => Starts,
        (Equal, Greater) => StartedBy,
        (Greater, Equal) => Finishes,
        (Less, Equal) => FinishedBy,
        (Greater, Less) => During,
        (Less, Greater) => Contains,
        (Less, Less) => Overlaps,
        (Greater, Greater) => OverlappedBy,
    }
}

/// All proper intervals on `0..size`.
pub fn intervals(size: i64) -> Vec<(i64, i64)> {
    (0..size).flat_map(|b| (b + 1..size).map(move |e| (b, e))).collect()
}

/// Composition table by enumerating every placement of three intervals.
pub fn brute_composition() -> [[RelationSet; 13]; 13] {
    let mut t = [[RelationSet::EMPTY; 13]; 13];
    let all = intervals(8);
    for &a in &all {
        for &b in &all {
            let r = allen(a, b).index();
            for &c in &all {
                t[r][allen(b, c).index()].insert(allen(a, c));
            }
        }
    }
    t
}

pub fn convex_sets() -> &'static [RelationSet] {
    static SETS: OnceLock<Vec<RelationSet>> = OnceLock::new();
    SETS.get_or_init(RelationSet::enumerate_convex)
}

fn convex_superset(truth: BaseRelation, pick: usize) -> RelationSet {
    let c: Vec<RelationSet> = convex_sets().iter().copied().filter(|s| s.contains(truth)).collect();
    c[pick % c.len()]
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("N{i}")).collect()
}

/// Edge choices: 0 leaves the pair out, 1 states the true relation, higher
/// values pick a convex superset of it.
pub fn graph_from_choices(ivs: &[(i64, i64)], choices: &[(u8, usize)]) -> IntervalGraph {
    let n = ivs.len();
    let mut g = IntervalGraph::with_nodes(names(n));
    let mut c = choices.iter().cycle();
    for i in 0..n {
        for j in (i + 1)..n {
            let &(kind, pick) = c.next().unwrap();
            let truth = allen(ivs[i], ivs[j]);
            let rel = match kind {
                0 => continue,
                1 => RelationSet::single(truth),
                _ => convex_superset(truth, pick),
            };
            if !rel.is_universal() {
                g.set_relation(i, j, rel).unwrap();
            }
        }
    }
    g
}

fn interval() -> impl Strategy<Value = (i64, i64)> {
    (0i64..12, 1i64..6).prop_map(|(b, len)| (b, b + len))
}

/// A consistent graph: random intervals, each pair annotated with nothing,
/// the true relation, or a convex set containing it.
pub fn consistent_graph(max_nodes: usize) -> impl Strategy<Value = IntervalGraph> {
    (2..=max_nodes)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(interval(), n),
                prop::collection::vec((0u8..4, 0usize..1000), n * (n - 1) / 2),
            )
        })
        .prop_map(|(ivs, ch)| graph_from_choices(&ivs, &ch))
}

/// Two consistent graphs over the same entities, each from its own
/// placement.
pub fn consistent_pair(max_nodes: usize) -> impl Strategy<Value = (IntervalGraph, IntervalGraph)> {
    (2..=max_nodes)
        .prop_flat_map(|n| {
            let m = n * (n - 1) / 2;
            (
                prop::collection::vec(interval(), n),
                prop::collection::vec((0u8..4, 0usize..1000), m),
                prop::collection::vec(interval(), n),
                prop::collection::vec((0u8..4, 0usize..1000), m),
            )
        })
        .prop_map(|(a, ca, b, cb)| (graph_from_choices(&a, &ca), graph_from_choices(&b, &cb)))
}

/// Arbitrary convex edges, consistent or not.
pub fn any_graph(max_nodes: usize) -> impl Strategy<Value = IntervalGraph> {
    (2..=max_nodes)
        .prop_flat_map(|n| prop::collection::vec(prop::option::of(0usize..82), n * (n - 1) / 2).prop_map(move |e| (n, e)))
        .prop_map(|(n, e)| {
            let mut g = IntervalGraph::with_nodes(names(n));
            let mut it = e.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    if let Some(k) = it.next().unwrap() {
                        let r = convex_sets()[k];
                        if !r.is_universal() {
                            g.set_relation(i, j, r).unwrap();
                        }
                    }
                }
            }
            g
        })
}

/// Path consistency the slow way: full matrix, every triple, repeat until
/// nothing changes. `None` when some relation empties.
pub fn naive_closure(g: &IntervalGraph) -> Option<Vec<Vec<RelationSet>>> {
    let n = g.node_count();
    let mut m = vec![vec![RelationSet::UNIVERSAL; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RelationSet::single(BaseRelation::Equals);
    }
    for (i, j, r) in g.edges() {
        m[i][j] = r;
        m[j][i] = r.invert();
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let r = m[i][j].intersection(m[i][k].compose(m[k][j]));
                    if r != m[i][j] {
                        if r.is_empty() {
                            return None;
                        }
                        m[i][j] = r;
                        m[j][i] = r.invert();
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Some(m);
        }
    }
}

/// Transitive closure of a DAG on at most 8 nodes, one bitmask per row.
pub fn mask_closure(adj: &[u8]) -> Vec<u8> {
    let mut c = adj.to_vec();
    let n = c.len();
    for k in 0..n {
        for i in 0..n {
            if c[i] & (1 << k) != 0 {
                c[i] |= c[k];
            }
        }
    }
    c
}

/// Every edge subset of the closure whose own closure is the same; returns
/// the smallest ones found.
pub fn brute_reductions(adj: &[u8]) -> Vec<Vec<u8>> {
    let n = adj.len();
    let target = mask_closure(adj);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| target[i] & (1 << j) != 0)
        .collect();
    let mut best: Vec<Vec<u8>> = Vec::new();
    let mut best_size = usize::MAX;
    for mask in 0u64..(1u64 << edges.len()) {
        let size = mask.count_ones() as usize;
        if size > best_size {
            continue;
        }
        let mut sub = vec![0u8; n];
        for (b, &(i, j)) in edges.iter().enumerate() {
            if mask & (1 << b) != 0 {
                sub[i] |= 1 << j;
            }
        }
        if mask_closure(&sub) == target {
            if size < best_size {
                best.clear();
                best_size = size;
            }
            best.push(sub);
        }
    }
    best
}

/// Random DAG as bitmask rows: nodes are ranked by `order` and every forward
/// pair gets an edge when its coin comes up.
pub fn dag(order: &[usize], coins: &[bool]) -> Vec<u8> {
    let n = order.len();
    let mut adj = vec![0u8; n];
    let mut c = coins.iter().cycle();
    for a in 0..n {
        for b in (a + 1)..n {
            if *c.next().unwrap() {
                adj[order[a]] |= 1 << order[b];
            }
        }
    }
    adj
}

pub fn edge_count(rows: &[u8]) -> u32 {
    rows.iter().map(|r| r.count_ones()).sum()
}

pub fn fixture(name: &str) -> IntervalGraph {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    tempgraph::native::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}
