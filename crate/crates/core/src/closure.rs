//! Interval graphs over named entities and their path-consistency closure.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::algebra::RelationSet;
use crate::error::{Error, Result};

/// Events (or time expressions) linked by convex Allen relation sets.
///
/// Only one direction of each edge is stored, keyed by `(i, j)` with
/// `i < j` in node-index order; the other direction is the inverse. An absent
/// edge stands for the universal relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), RelationSet>,
    annotated: BTreeSet<(usize, usize)>,
    saturated: bool,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl IntervalGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut g = Self::new();
        for n in names {
            g.add_node(n.as_ref());
        }
        g
    }

    /// Adds a node if missing and returns its index.
    pub fn add_node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Number of stored (non-universal) edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Relation from `a` to `b`; universal when no edge is stored.
    pub fn relation(&self, a: usize, b: usize) -> RelationSet {
        if a == b {
            return RelationSet::single(crate::algebra::BaseRelation::Equals);
        }
        match self.edges.get(&key(a, b)) {
            Some(&r) if a < b => r,
            Some(&r) => r.invert(),
            None => RelationSet::UNIVERSAL,
        }
    }

    pub fn relation_between(&self, a: &str, b: &str) -> Option<RelationSet> {
        Some(self.relation(self.node_index(a)?, self.node_index(b)?))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains_key(&key(a, b))
    }

    /// Stored edges as `(i, j, relation)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, RelationSet)> + '_ {
        self.edges.iter().map(|(&(i, j), &r)| (i, j, r))
    }

    /// Stored edges that came from the input rather than from inference.
    pub fn annotated_edges(&self) -> impl Iterator<Item = (usize, usize, RelationSet)> + '_ {
        self.annotated
            .iter()
            .filter_map(|k| self.edges.get(k).map(|&r| (k.0, k.1, r)))
    }

    pub fn annotated_count(&self) -> usize {
        self.annotated_edges().count()
    }

    pub fn is_annotated(&self, a: usize, b: usize) -> bool {
        self.annotated.contains(&key(a, b))
    }

    fn check_label(&self, a: usize, b: usize, rel: RelationSet) -> Result<()> {
        if rel.is_empty() {
            return Err(Error::EmptyRelation {
                from: self.names[a].clone(),
                to: self.names[b].clone(),
            });
        }
        if !rel.is_convex() {
            return Err(Error::NonConvex {
                from: self.names[a].clone(),
                to: self.names[b].clone(),
                relation: rel.to_string(),
            });
        }
        Ok(())
    }

    /// Annotates `a rel b`, intersecting with whatever is already known
    /// about the pair.
    pub fn constrain(&mut self, a: &str, b: &str, rel: RelationSet) -> Result<()> {
        let i = self.add_node(a);
        let j = self.add_node(b);
        self.constrain_idx(i, j, rel)
    }

    pub fn constrain_idx(&mut self, a: usize, b: usize, rel: RelationSet) -> Result<()> {
        if a == b {
            return Err(Error::Config(format!(
                "self relation on {}",
                self.names[a]
            )));
        }
        self.check_label(a, b, rel)?;
        let merged = self.relation(a, b).intersection(rel);
        self.check_label(a, b, merged)?;
        self.store(a, b, merged);
        self.annotated.insert(key(a, b));
        self.saturated = false;
        Ok(())
    }

    /// Replaces the relation on a pair outright and marks it annotated.
    pub fn set_relation(&mut self, a: usize, b: usize, rel: RelationSet) -> Result<()> {
        self.check_label(a, b, rel)?;
        self.store(a, b, rel);
        self.annotated.insert(key(a, b));
        self.saturated = false;
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.edges.remove(&key(a, b));
        self.annotated.remove(&key(a, b));
        self.saturated = false;
    }

    fn store(&mut self, a: usize, b: usize, rel: RelationSet) {
        let oriented = if a < b { rel } else { rel.invert() };
        if oriented.is_universal() {
            self.edges.remove(&key(a, b));
        } else {
            self.edges.insert(key(a, b), oriented);
        }
    }

    /// Same graph re-indexed so that node `k` is `names[k]`. Entities of
    /// `self` missing from `names` are an error; extra names become isolated
    /// nodes.
    pub fn with_universe(&self, names: &[String]) -> Result<IntervalGraph> {
        let mut g = IntervalGraph::with_nodes(names);
        let mut remap = Vec::with_capacity(self.names.len());
        for n in &self.names {
            remap.push(
                g.node_index(n)
                    .ok_or_else(|| Error::UnknownEntity(n.clone()))?,
            );
        }
        for (&(i, j), &r) in &self.edges {
            g.store(remap[i], remap[j], r);
        }
        for &(i, j) in &self.annotated {
            g.annotated.insert(key(remap[i], remap[j]));
        }
        g.saturated = self.saturated;
        Ok(g)
    }

    /// Graph restricted to its annotated edges.
    pub fn annotation(&self) -> IntervalGraph {
        let mut g = self.clone();
        let annotated = &self.annotated;
        g.edges.retain(|k, _| annotated.contains(k));
        g.saturated = false;
        g
    }

    /// Path-consistency closure: every relation is intersected with every
    /// composition through a third node until nothing changes.
    ///
    /// Universal results are never stored. The fixed point does not depend
    /// on the order pairs are revisited in.
    pub fn saturate(&self) -> Result<IntervalGraph> {
        if self.saturated {
            return Ok(self.clone());
        }
        let n = self.names.len();
        let mut m = vec![RelationSet::UNIVERSAL; n * n];
        for i in 0..n {
            m[i * n + i] = RelationSet::single(crate::algebra::BaseRelation::Equals);
        }
        let mut queue = VecDeque::new();
        let mut queued = vec![false; n * n];
        for (&(i, j), &r) in &self.edges {
            m[i * n + j] = r;
            m[j * n + i] = r.invert();
            queue.push_back((i, j));
            queued[i * n + j] = true;
        }

        while let Some((i, j)) = queue.pop_front() {
            queued[i * n + j] = false;
            let rij = m[i * n + j];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                // i -> j -> k tightens (i, k); k -> i -> j tightens (k, j)
                for (from, to, left, right) in [(i, k, rij, m[j * n + k]), (k, j, m[k * n + i], rij)]
                {
                    if left.is_universal() || right.is_universal() {
                        continue;
                    }
                    let old = m[from * n + to];
                    let new = old.intersection(left.compose(right));
                    if new == old {
                        continue;
                    }
                    if new.is_empty() {
                        let via = if from == i { j } else { i };
                        return Err(Error::Inconsistent {
                            from: self.names[from].clone(),
                            via: self.names[via].clone(),
                            to: self.names[to].clone(),
                        });
                    }
                    m[from * n + to] = new;
                    m[to * n + from] = new.invert();
                    let (a, b) = key(from, to);
                    if !queued[a * n + b] {
                        queued[a * n + b] = true;
                        queue.push_back((a, b));
                    }
                }
            }
        }

        let mut out = IntervalGraph {
            names: self.names.clone(),
            index: self.index.clone(),
            edges: BTreeMap::new(),
            annotated: self.annotated.clone(),
            saturated: true,
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let r = m[i * n + j];
                if !r.is_universal() {
                    out.edges.insert((i, j), r);
                }
            }
        }
        Ok(out)
    }

    pub fn is_consistent(&self) -> bool {
        self.saturate().is_ok()
    }

    /// Connected components of the undirected stored-edge structure, over
    /// nodes incident to at least one edge. Sizes only, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(self.names.len());
        let mut touched = vec![false; self.names.len()];
        for &(i, j) in self.edges.keys() {
            uf.union(i, j);
            touched[i] = true;
            touched[j] = true;
        }
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for (i, &t) in touched.iter().enumerate() {
            if t {
                *sizes.entry(uf.find(i)).or_default() += 1;
            }
        }
        let mut out: Vec<usize> = sizes.into_values().collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Edge map keyed by entity names, oriented by name order. Handy to
    /// compare graphs whose node indices differ.
    pub fn named_edges(&self) -> BTreeMap<(String, String), RelationSet> {
        self.edges()
            .map(|(i, j, r)| {
                let (a, b) = (&self.names[i], &self.names[j]);
                if a <= b {
                    ((a.clone(), b.clone()), r)
                } else {
                    ((b.clone(), a.clone()), r.invert())
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(s: &str) -> RelationSet {
        s.parse().unwrap()
    }

    #[test]
    fn single_edge_is_unchanged() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b")).unwrap();
        let s = g.saturate().unwrap();
        assert!(s.is_saturated());
        assert_eq!(s.named_edges(), g.named_edges());
    }

    #[test]
    fn before_cycle_is_inconsistent() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b")).unwrap();
        g.constrain("B", "C", rel("b")).unwrap();
        g.constrain("C", "A", rel("b")).unwrap();
        let err = g.saturate().unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
        assert!(!g.is_consistent());
    }

    #[test]
    fn chain_is_closed() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b")).unwrap();
        g.constrain("B", "C", rel("d")).unwrap();
        let s = g.saturate().unwrap();
        assert_eq!(s.relation_between("A", "C"), Some(rel("b,o,m,d,s")));
        assert_eq!(s.annotated_count(), 2);
        assert_eq!(s.edge_count(), 3);
    }

    #[test]
    fn universal_inferences_are_not_stored() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b")).unwrap();
        g.constrain("C", "B", rel("b")).unwrap();
        let s = g.saturate().unwrap();
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.relation_between("A", "C"), Some(RelationSet::UNIVERSAL));
    }

    #[test]
    fn empty_graph_is_consistent() {
        assert!(IntervalGraph::new().is_consistent());
    }

    #[test]
    fn non_convex_rejected() {
        let mut g = IntervalGraph::new();
        let err = g.constrain("A", "B", rel("b,bi")).unwrap_err();
        assert!(matches!(err, Error::NonConvex { .. }));
        let err = g.constrain("A", "B", RelationSet::EMPTY).unwrap_err();
        assert!(matches!(err, Error::EmptyRelation { .. }));
    }

    #[test]
    fn constrain_intersects_and_detects_conflicts() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b,m")).unwrap();
        g.constrain("B", "A", rel("mi,oi")).unwrap();
        assert_eq!(g.relation_between("A", "B"), Some(rel("m")));
        assert!(g.constrain("A", "B", rel("o")).is_err());
    }

    #[test]
    fn reverse_direction_is_inverse() {
        let mut g = IntervalGraph::new();
        g.constrain("B", "A", rel("d")).unwrap();
        assert_eq!(g.relation_between("A", "B"), Some(rel("di")));
        assert_eq!(g.relation_between("B", "A"), Some(rel("d")));
    }

    #[test]
    fn components() {
        let mut g = IntervalGraph::new();
        g.constrain("A", "B", rel("b")).unwrap();
        g.constrain("B", "C", rel("b")).unwrap();
        g.add_node("lonely");
        assert_eq!(g.component_sizes(), vec![3]);
        g.constrain("D", "E", rel("b")).unwrap();
        g.constrain("F", "G", rel("m")).unwrap();
        assert_eq!(g.component_sizes(), vec![3, 2, 2]);
    }
}
