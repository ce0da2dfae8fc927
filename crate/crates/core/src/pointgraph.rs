//! Endpoint graphs: conversion from interval graphs, merging of equal
//! endpoints, and the transitive reduction with its major/minor split.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;

use crate::algebra::PointRelation;
use crate::closure::IntervalGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointSide {
    Begin,
    End,
}

/// One end of an event. Endpoint ids are `2 * entity + side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub entity: usize,
    pub side: EndpointSide,
}

impl Endpoint {
    pub fn id(self) -> usize {
        2 * self.entity + usize::from(self.side == EndpointSide::End)
    }

    pub fn from_id(id: usize) -> Self {
        Endpoint {
            entity: id / 2,
            side: if id.is_multiple_of(2) {
                EndpointSide::Begin
            } else {
                EndpointSide::End
            },
        }
    }
}

/// Closed point-algebra network over the `2n` endpoints of an interval graph.
#[derive(Debug, Clone)]
pub struct RawPointGraph {
    names: Vec<String>,
    rel: Vec<PointRelation>,
}

fn point_closure(rel: &mut [PointRelation], m: usize, label: impl Fn(usize) -> String) -> Result<()> {
    let mut queue = VecDeque::new();
    let mut queued = vec![false; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            if rel[i * m + j] != PointRelation::ALL {
                queue.push_back((i, j));
                queued[i * m + j] = true;
            }
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        queued[i * m + j] = false;
        let rij = rel[i * m + j];
        for k in 0..m {
            if k == i || k == j {
                continue;
            }
            for (from, to, left, right) in [(i, k, rij, rel[j * m + k]), (k, j, rel[k * m + i], rij)] {
                if left == PointRelation::ALL || right == PointRelation::ALL {
                    continue;
                }
                let old = rel[from * m + to];
                let new = old.intersection(left.compose(right));
                if new == old {
                    continue;
                }
                if new.is_empty() {
                    let via = if from == i { j } else { i };
                    return Err(Error::Inconsistent {
                        from: label(from),
                        via: label(via),
                        to: label(to),
                    });
                }
                rel[from * m + to] = new;
                rel[to * m + from] = new.inverse();
                let (a, b) = if from < to { (from, to) } else { (to, from) };
                if !queued[a * m + b] {
                    queued[a * m + b] = true;
                    queue.push_back((a, b));
                }
            }
        }
    }
    Ok(())
}

fn endpoint_label(names: &[String], id: usize) -> String {
    let e = Endpoint::from_id(id);
    let suffix = match e.side {
        EndpointSide::Begin => '1',
        EndpointSide::End => '2',
    };
    format!("{}{}", names[e.entity], suffix)
}

impl RawPointGraph {
    /// Maps every interval edge to its four endpoint relations, adds the
    /// begin-before-end relation of every event and closes the result.
    /// The input is saturated first if needed.
    pub fn from_interval_graph(g: &IntervalGraph) -> Result<Self> {
        let sat;
        let g = if g.is_saturated() {
            g
        } else {
            sat = g.saturate()?;
            &sat
        };
        let n = g.node_count();
        let m = 2 * n;
        let mut rel = vec![PointRelation::ALL; m * m];
        let mut set = |a: usize, b: usize, r: PointRelation| {
            let old = rel[a * m + b];
            let new = old.intersection(r);
            rel[a * m + b] = new;
            rel[b * m + a] = new.inverse();
        };
        for i in 0..n {
            set(2 * i, 2 * i, PointRelation::EQ);
            set(2 * i + 1, 2 * i + 1, PointRelation::EQ);
            set(2 * i, 2 * i + 1, PointRelation::LT);
        }
        for (i, j, r) in g.edges() {
            let q = r.endpoints();
            set(2 * i, 2 * j, q.begin_begin);
            set(2 * i + 1, 2 * j + 1, q.end_end);
            set(2 * i, 2 * j + 1, q.begin_end);
            set(2 * i + 1, 2 * j, q.end_begin);
        }
        let names = g.names().to_vec();
        if let Some(k) = rel.iter().position(|r| r.is_empty()) {
            return Err(Error::EmptyRelation {
                from: endpoint_label(&names, k / m),
                to: endpoint_label(&names, k % m),
            });
        }
        point_closure(&mut rel, m, |id| endpoint_label(&names, id))?;
        Ok(RawPointGraph { names, rel })
    }

    pub fn endpoint_count(&self) -> usize {
        self.names.len() * 2
    }

    pub fn relation(&self, a: usize, b: usize) -> PointRelation {
        self.rel[a * self.endpoint_count() + b]
    }

    /// Collapses `=` classes into single nodes and keeps `<`/`<=` edges.
    pub fn merge_equalities(&self) -> Result<MergedPointGraph> {
        let m = self.endpoint_count();
        let mut uf = UnionFind::<usize>::new(m);
        for a in 0..m {
            for b in (a + 1)..m {
                let r = self.relation(a, b);
                if r == PointRelation::NE {
                    return Err(Error::NonConvex {
                        from: endpoint_label(&self.names, a),
                        to: endpoint_label(&self.names, b),
                        relation: r.to_string(),
                    });
                }
                if r == PointRelation::EQ {
                    uf.union(a, b);
                }
            }
        }
        // nodes are numbered by their smallest endpoint
        let mut node_of_root = vec![usize::MAX; m];
        let mut class_of = vec![0; m];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for a in 0..m {
            let root = uf.find(a);
            if node_of_root[root] == usize::MAX {
                node_of_root[root] = members.len();
                members.push(Vec::new());
            }
            class_of[a] = node_of_root[root];
            members[class_of[a]].push(a);
        }
        let k = members.len();
        let mut rel = vec![PointRelation::ALL; k * k];
        for x in 0..k {
            for y in 0..k {
                let r = self.relation(members[x][0], members[y][0]);
                if x != y && r == PointRelation::EQ {
                    return Err(Error::CyclicOrder(endpoint_label(&self.names, members[x][0])));
                }
                rel[x * k + y] = r;
            }
        }
        let mut trivial = FixedBitSet::with_capacity(k * k);
        for e in 0..self.names.len() {
            let (x, y) = (class_of[2 * e], class_of[2 * e + 1]);
            trivial.insert(x * k + y);
            trivial.insert(y * k + x);
        }
        let merged = MergedPointGraph {
            names: self.names.clone(),
            class_of,
            members,
            rel,
            trivial,
        };
        let mut dag = petgraph::graph::DiGraph::<(), ()>::new();
        let idx: Vec<_> = (0..k).map(|_| dag.add_node(())).collect();
        for (x, y, _) in merged.edges() {
            dag.add_edge(idx[x], idx[y], ());
        }
        if let Err(cycle) = petgraph::algo::toposort(&dag, None) {
            return Err(Error::CyclicOrder(merged.node_label(cycle.node_id().index())));
        }
        Ok(merged)
    }
}

/// Endpoint graph with equality classes merged into nodes. Edges point from
/// the earlier node to the later one and are labelled `<` or `<=`.
#[derive(Debug, Clone)]
pub struct MergedPointGraph {
    names: Vec<String>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    rel: Vec<PointRelation>,
    trivial: FixedBitSet,
}

impl MergedPointGraph {
    /// Full pipeline: saturate, convert to endpoints, merge.
    pub fn from_interval_graph(g: &IntervalGraph) -> Result<Self> {
        RawPointGraph::from_interval_graph(g)?.merge_equalities()
    }

    pub fn event_count(&self) -> usize {
        self.names.len()
    }

    pub fn entity_names(&self) -> &[String] {
        &self.names
    }

    pub fn node_count(&self) -> usize {
        self.members.len()
    }

    pub fn node_of(&self, endpoint: usize) -> usize {
        self.class_of[endpoint]
    }

    /// Endpoint ids of a node, ascending.
    pub fn members(&self, node: usize) -> &[usize] {
        &self.members[node]
    }

    /// Point relation between two nodes; `=` on the diagonal.
    pub fn relation(&self, x: usize, y: usize) -> PointRelation {
        self.rel[x * self.node_count() + y]
    }

    /// `<` or `<=` when there is an edge from `x` to `y`.
    pub fn label(&self, x: usize, y: usize) -> Option<PointRelation> {
        let r = self.relation(x, y);
        (x != y && (r == PointRelation::LT || r == PointRelation::LE)).then_some(r)
    }

    /// Both nodes hold the begin and the end of one event.
    pub fn is_trivial(&self, x: usize, y: usize) -> bool {
        self.trivial.contains(x * self.node_count() + y)
    }

    /// All saturated edges, trivial ones included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, PointRelation)> + '_ {
        let k = self.node_count();
        (0..k).flat_map(move |x| (0..k).filter_map(move |y| self.label(x, y).map(|r| (x, y, r))))
    }

    pub fn nontrivial_edges(&self) -> impl Iterator<Item = (usize, usize, PointRelation)> + '_ {
        self.edges().filter(|&(x, y, _)| !self.is_trivial(x, y))
    }

    pub fn endpoint_name(&self, id: usize) -> String {
        endpoint_label(&self.names, id)
    }

    /// `{A1,B1,E1}` with endpoint names sorted.
    pub fn node_label(&self, x: usize) -> String {
        let mut names: Vec<String> = self.members[x].iter().map(|&e| self.endpoint_name(e)).collect();
        names.sort();
        format!("{{{}}}", names.join(","))
    }

    /// Successor sets of the saturated edge relation.
    fn successors(&self) -> Vec<FixedBitSet> {
        let k = self.node_count();
        let mut succ = vec![FixedBitSet::with_capacity(k); k];
        for (x, y, _) in self.edges() {
            succ[x].insert(y);
        }
        succ
    }

    /// Transitive reduction of the (already transitive) edge relation;
    /// labels are taken from this graph.
    pub fn reduce(&self) -> ReducedGraph {
        let succ = self.successors();
        let reduced = reduce_transitive(&succ);
        let mut reduction = Vec::new();
        for (x, set) in reduced.iter().enumerate() {
            for y in set.ones() {
                reduction.push((x, y, self.relation(x, y)));
            }
        }
        ReducedGraph {
            base: self.clone(),
            reduction,
            in_reduction: reduced,
        }
    }

    pub fn serialize_debug(&self) -> String {
        debug_text(self, self.edges())
    }
}

/// Removes every pair `(x, y)` reachable through an intermediate node.
/// The input must be transitive and acyclic.
pub fn reduce_transitive(succ: &[FixedBitSet]) -> Vec<FixedBitSet> {
    succ.iter()
        .map(|s| {
            let mut two = FixedBitSet::with_capacity(succ.len());
            for z in s.ones() {
                two.union_with(&succ[z]);
            }
            let mut major = s.clone();
            major.difference_with(&two);
            major
        })
        .collect()
}

/// Reflexive-free transitive closure of an adjacency relation.
pub fn transitive_closure(succ: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = succ.len();
    let mut out = succ.to_vec();
    for k in 0..n {
        for i in 0..n {
            if out[i].contains(k) {
                let via = out[k].clone();
                out[i].union_with(&via);
            }
        }
    }
    out
}

fn debug_text(g: &MergedPointGraph, edges: impl Iterator<Item = (usize, usize, PointRelation)>) -> String {
    let mut nodes: Vec<String> = (0..g.node_count()).map(|x| g.node_label(x)).collect();
    let mut lines: Vec<String> = edges
        .map(|(x, y, r)| format!("{} {} {}", g.node_label(x), r, g.node_label(y)))
        .collect();
    nodes.sort();
    lines.sort();
    let mut out = String::new();
    for l in nodes.into_iter().chain(lines) {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// A merged point graph together with its transitive reduction.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    base: MergedPointGraph,
    reduction: Vec<(usize, usize, PointRelation)>,
    in_reduction: Vec<FixedBitSet>,
}

impl ReducedGraph {
    pub fn from_interval_graph(g: &IntervalGraph) -> Result<Self> {
        Ok(MergedPointGraph::from_interval_graph(g)?.reduce())
    }

    pub fn base(&self) -> &MergedPointGraph {
        &self.base
    }

    /// Every reduction edge, trivial ones included.
    pub fn reduction_edges(&self) -> &[(usize, usize, PointRelation)] {
        &self.reduction
    }

    /// Label of the reduction edge from `x` to `y`, if any.
    pub fn reduction_label(&self, x: usize, y: usize) -> Option<PointRelation> {
        self.in_reduction[x].contains(y).then(|| self.base.relation(x, y))
    }

    /// Non-trivial reduction edges.
    pub fn major_edges(&self) -> Vec<(usize, usize, PointRelation)> {
        self.reduction
            .iter()
            .copied()
            .filter(|&(x, y, _)| !self.base.is_trivial(x, y))
            .collect()
    }

    /// Non-trivial saturated edges left out of the reduction.
    pub fn minor_edges(&self) -> Vec<(usize, usize, PointRelation)> {
        self.base
            .nontrivial_edges()
            .filter(|&(x, y, _)| !self.in_reduction[x].contains(y))
            .collect()
    }

    /// `2 * events - nodes + non-trivial major edges`.
    pub fn value(&self) -> f64 {
        let b = &self.base;
        (2 * b.event_count()) as f64 - b.node_count() as f64 + self.major_edges().len() as f64
    }

    pub fn serialize_debug(&self) -> String {
        debug_text(&self.base, self.reduction.iter().copied())
    }
}

/// Edge between merged nodes: `(from, to, label)`.
pub type PointEdge = (usize, usize, PointRelation);

/// Splits a graph into (major, minor) non-trivial edge sets.
pub fn major_minor(g: &MergedPointGraph) -> (Vec<PointEdge>, Vec<PointEdge>) {
    let r = g.reduce();
    (r.major_edges(), r.minor_edges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::native;

    fn merged(text: &str) -> MergedPointGraph {
        MergedPointGraph::from_interval_graph(&native::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn single_event() {
        let g = merged("events: A\n");
        assert_eq!(g.node_count(), 2);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1, PointRelation::LT)]);
        assert!(g.is_trivial(0, 1));
        assert_eq!(g.nontrivial_edges().count(), 0);
    }

    #[test]
    fn equals_merges_both_ends() {
        let g = merged("A e B\n");
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.node_label(0), "{A1,B1}");
        assert_eq!(g.node_label(1), "{A2,B2}");
    }

    #[test]
    fn no_equalities_keeps_all_endpoints() {
        let g = merged("A b B\nB o C\n");
        assert_eq!(g.node_count(), 6);
    }

    #[test]
    fn chain_reduction() {
        let g = merged("A b B\nB b C\n");
        let r = g.reduce();
        let major: Vec<_> = r
            .major_edges()
            .iter()
            .map(|&(x, y, l)| format!("{} {} {}", g.node_label(x), l, g.node_label(y)))
            .collect();
        assert_eq!(major, vec!["{A2} < {B1}", "{B2} < {C1}"]);
        // 15 pairs, 3 trivial, 2 major
        assert_eq!(r.minor_edges().len(), 10);
        assert_eq!(r.value(), 2.0);
    }

    #[test]
    fn debug_serialization() {
        let g = merged("A m B\n");
        assert_eq!(
            g.reduce().serialize_debug(),
            "{A1}\n{A2,B1}\n{B2}\n{A1} < {A2,B1}\n{A2,B1} < {B2}\n"
        );
    }

    #[test]
    fn convex_labels() {
        let g = merged("A m,o,s B\n");
        let r = g.reduce();
        let lines = r.serialize_debug();
        assert!(lines.contains("{A1} <= {B1}"));
        assert!(lines.contains("{B1} <= {A2}"));
        assert!(lines.contains("{A2} < {B2}"));
        // A1 < A2 is implied by the path but is strict only in the base graph
        assert_eq!(r.reduction_edges().len(), 3);
        assert_eq!(g.relation(0, 1), PointRelation::LT);
    }

    #[test]
    fn inconsistent_input_fails() {
        let g = native::parse("A b B\nB b C\nC b A\n").unwrap();
        assert!(MergedPointGraph::from_interval_graph(&g).is_err());
    }
}
