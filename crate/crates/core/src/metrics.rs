//! Graph-level recall and precision over reduced endpoint graphs, plus the
//! edge-wise baselines (strict, relaxed, core) and vagueness.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{PointRelation, RelationSet};
use crate::closure::IntervalGraph;
use crate::error::{Error, Result, Side};
use crate::pointgraph::{MergedPointGraph, ReducedGraph};

/// Edge label as seen from the first node of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl PointLabel {
    pub fn from_relation(r: PointRelation) -> Option<Self> {
        match r {
            PointRelation::EQ => Some(PointLabel::Eq),
            PointRelation::LT => Some(PointLabel::Lt),
            PointRelation::LE => Some(PointLabel::Le),
            PointRelation::GT => Some(PointLabel::Gt),
            PointRelation::GE => Some(PointLabel::Ge),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Symmetric credit table over `=, <, <=, >, >=`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTable {
    w: [[f64; 5]; 5],
}

impl WeightTable {
    pub const STRICT: WeightTable = WeightTable {
        w: [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub const RELAXED: WeightTable = WeightTable {
        w: [
            [1.0, 0.0, 0.5, 0.0, 0.5],
            [0.0, 1.0, 0.5, 0.0, 0.0],
            [0.5, 0.5, 1.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 1.0, 0.5],
            [0.5, 0.0, 0.5, 0.5, 1.0],
        ],
    };

    /// Builds a table, rejecting asymmetric ones, a non-unit diagonal or
    /// values outside `[0, 1]`.
    pub fn new(w: [[f64; 5]; 5]) -> Result<Self> {
        for (i, row) in w.iter().enumerate() {
            if row[i] != 1.0 {
                return Err(Error::Config("weight table diagonal must be 1".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) || x != w[j][i] {
                    return Err(Error::Config(
                        "weights must be symmetric and within [0, 1]".into(),
                    ));
                }
            }
        }
        Ok(WeightTable { w })
    }

    pub fn weight(&self, a: PointLabel, b: PointLabel) -> f64 {
        self.w[a.index()][b.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    #[default]
    Relaxed,
}

impl Mode {
    pub fn weights(self) -> WeightTable {
        match self {
            Mode::Strict => WeightTable::STRICT,
            Mode::Relaxed => WeightTable::RELAXED,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "relaxed" => Ok(Mode::Relaxed),
            _ => Err(Error::Config(format!("unknown mode {s:?} (strict|relaxed)"))),
        }
    }
}

/// Node correspondence costs between two merged graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub splits: f64,
    pub conflations: f64,
}

/// Node value plus relation value of a reduced graph.
pub fn value(g: &ReducedGraph) -> f64 {
    g.value()
}

/// Cost of mapping every node of `from` onto the nodes of `onto`.
///
/// A node touching `i` nodes of `onto` costs `i - 1`. Fragments that `onto`
/// relates by a label with some equality credit are cheaper: joining them
/// costs `1 - w(=, label)` instead of 1.
pub fn split_count(from: &MergedPointGraph, onto: &MergedPointGraph, w: &WeightTable) -> f64 {
    let mut total = 0.0;
    for x in 0..from.node_count() {
        let mut parts: Vec<usize> = from.members(x).iter().map(|&e| onto.node_of(e)).collect();
        parts.sort_unstable();
        parts.dedup();
        let i = parts.len();
        if i < 2 {
            continue;
        }
        let mut links = Vec::new();
        for a in 0..i {
            for b in (a + 1)..i {
                if let Some(l) = PointLabel::from_relation(onto.relation(parts[a], parts[b])) {
                    let credit = w.weight(PointLabel::Eq, l);
                    if credit > 0.0 {
                        links.push((credit, a, b));
                    }
                }
            }
        }
        links.sort_by(|p, q| q.0.total_cmp(&p.0));
        let mut uf = UnionFind::<usize>::new(i);
        let mut cost = (i - 1) as f64;
        for (credit, a, b) in links {
            if uf.union(a, b) {
                cost -= credit;
            }
        }
        total += cost;
    }
    total
}

pub fn align(k: &MergedPointGraph, g: &MergedPointGraph, w: &WeightTable) -> Alignment {
    Alignment {
        splits: split_count(k, g, w),
        conflations: split_count(g, k, w),
    }
}

/// What an edge is matched against.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    /// Every saturated edge, trivial ones included.
    Saturated(&'a MergedPointGraph),
    /// Only the transitive-reduction edges.
    Reduced(&'a ReducedGraph),
}

impl Target<'_> {
    fn graph(&self) -> &MergedPointGraph {
        match self {
            Target::Saturated(g) => g,
            Target::Reduced(r) => r.base(),
        }
    }

    fn label(&self, x: usize, y: usize) -> Option<PointLabel> {
        if x == y {
            return Some(PointLabel::Eq);
        }
        match self {
            Target::Saturated(g) => PointLabel::from_relation(g.relation(x, y)),
            Target::Reduced(r) => r
                .reduction_label(x, y)
                .or_else(|| r.reduction_label(y, x).map(PointRelation::inverse))
                .and_then(PointLabel::from_relation),
        }
    }
}

/// Best credit any pair of target nodes overlapping `x` and `y` gives to the
/// source edge `x label y`.
pub fn match_credit(
    source: &MergedPointGraph,
    edge: (usize, usize, PointRelation),
    target: Target<'_>,
    w: &WeightTable,
) -> f64 {
    let (x, y, label) = edge;
    let Some(label) = PointLabel::from_relation(label) else {
        return 0.0;
    };
    let tg = target.graph();
    let nodes = |n: usize| {
        let mut v: Vec<usize> = source.members(n).iter().map(|&e| tg.node_of(e)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (xs, ys) = (nodes(x), nodes(y));
    let mut best: f64 = 0.0;
    for &a in &xs {
        for &b in &ys {
            if let Some(l) = target.label(a, b) {
                best = best.max(w.weight(label, l));
            }
        }
    }
    best
}

/// Sum of missing credit over the non-trivial major edges of `k`.
pub fn misses(k: &ReducedGraph, g_sat: &MergedPointGraph, w: &WeightTable) -> f64 {
    k.major_edges()
        .into_iter()
        .map(|e| 1.0 - match_credit(k.base(), e, Target::Saturated(g_sat), w))
        .sum()
}

pub fn major_recall(
    k: &ReducedGraph,
    g_sat: &MergedPointGraph,
    a: &Alignment,
    w: &WeightTable,
) -> Result<f64> {
    let v = k.value();
    if v <= 0.0 {
        return Err(Error::DegenerateReference);
    }
    Ok(((v - (a.splits + misses(k, g_sat, w))) / v).max(0.0))
}

/// Reference minor edges present among the candidate's reduction edges,
/// scored with strict credit and normalised by `v(K_maj)`, capped at 1.
pub fn minor_recall(k: &ReducedGraph, g: &ReducedGraph) -> f64 {
    let v = k.value();
    if v <= 0.0 {
        return 0.0;
    }
    let found: f64 = k
        .minor_edges()
        .into_iter()
        .map(|e| match_credit(k.base(), e, Target::Reduced(g), &WeightTable::STRICT))
        .sum();
    (found / v).min(1.0)
}

pub fn full_recall(major: f64, minor: f64, v_k_maj: f64) -> f64 {
    if v_k_maj <= 0.0 {
        return 0.0;
    }
    (major + minor / v_k_maj).clamp(0.0, 1.0)
}

/// Sum of missing credit over the non-trivial major edges of `g`, checked
/// against the reference closure.
pub fn errors(g: &ReducedGraph, k_sat: &MergedPointGraph, w: &WeightTable) -> f64 {
    misses(g, k_sat, w)
}

pub fn precision(
    g: &ReducedGraph,
    k_sat: &MergedPointGraph,
    a: &Alignment,
    w: &WeightTable,
) -> Result<f64> {
    let v = g.value();
    if v <= 0.0 {
        return Err(Error::DegenerateCandidate);
    }
    Ok(((v - (a.conflations + errors(g, k_sat, w))) / v).max(0.0))
}

/// Precision and recall of an edge-wise baseline; `None` when the
/// denominator is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pr {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn ratio(num: f64, den: usize) -> Option<f64> {
    (den > 0).then(|| num / den as f64)
}

fn lookup(g: &IntervalGraph, a: &str, b: &str) -> RelationSet {
    g.relation_between(a, b).unwrap_or(RelationSet::UNIVERSAL)
}

/// Exact matches over stored edges of two saturated graphs.
pub fn strict_pr(k_sat: &IntervalGraph, g_sat: &IntervalGraph) -> Pr {
    let hits = |from: &IntervalGraph, other: &IntervalGraph| {
        from.edges()
            .filter(|&(i, j, r)| lookup(other, from.name(i), from.name(j)) == r)
            .count() as f64
    };
    Pr {
        precision: ratio(hits(g_sat, k_sat), g_sat.edge_count()),
        recall: ratio(hits(k_sat, g_sat), k_sat.edge_count()),
    }
}

/// Per-pair relaxed scores for candidate `s` against reference `k`:
/// `(|S ∩ K| / |K|, |S ∩ K| / |S|)`.
pub fn relaxed_pair(s: RelationSet, k: RelationSet) -> (f64, f64) {
    let both = s.intersection(k).len() as f64;
    (both / k.len() as f64, both / s.len() as f64)
}

/// Per-pair scores of [`relaxed_pair`], the first averaged over candidate
/// edges and the second over reference edges. A pair missing on one side
/// counts as universal there.
pub fn relaxed_pr(k_sat: &IntervalGraph, g_sat: &IntervalGraph) -> Pr {
    let p: f64 = g_sat
        .edges()
        .map(|(i, j, s)| relaxed_pair(s, lookup(k_sat, g_sat.name(i), g_sat.name(j))).0)
        .sum();
    let r: f64 = k_sat
        .edges()
        .map(|(i, j, k)| relaxed_pair(lookup(g_sat, k_sat.name(i), k_sat.name(j)), k).1)
        .sum();
    Pr {
        precision: ratio(p, g_sat.edge_count()),
        recall: ratio(r, k_sat.edge_count()),
    }
}

/// Edges whose relation is strictly tighter than everything derivable
/// through a third node. Returned as `(name, name, relation)`.
pub fn core_relations(g_sat: &IntervalGraph) -> Vec<(String, String, RelationSet)> {
    let n = g_sat.node_count();
    g_sat
        .edges()
        .filter(|&(a, b, r)| {
            let mut derived = RelationSet::UNIVERSAL;
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                let (ac, cb) = (g_sat.relation(a, c), g_sat.relation(c, b));
                if ac.is_universal() || cb.is_universal() {
                    continue;
                }
                derived = derived.intersection(ac.compose(cb));
                if derived == r {
                    return false;
                }
            }
            derived != r
        })
        .map(|(a, b, r)| (g_sat.name(a).to_string(), g_sat.name(b).to_string(), r))
        .collect()
}

/// Share of core edges matched exactly by the candidate closure.
pub fn core_recall(core: &[(String, String, RelationSet)], g_sat: &IntervalGraph) -> Option<f64> {
    let hits = core
        .iter()
        .filter(|(a, b, r)| lookup(g_sat, a, b) == *r)
        .count();
    ratio(hits as f64, core.len())
}

/// Mean of `1 - 1/|r|` over stored edges.
pub fn vagueness(g: &IntervalGraph) -> Option<f64> {
    mean_vagueness(g.edges().map(|(_, _, r)| r))
}

pub fn mean_vagueness(relations: impl IntoIterator<Item = RelationSet>) -> Option<f64> {
    let (mut total, mut count) = (0.0, 0);
    for r in relations {
        total += 1.0 - 1.0 / r.len() as f64;
        count += 1;
    }
    ratio(total, count)
}

fn round6<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1e6).round() / 1e6)
}

/// Every measure for one reference/candidate pair.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(serialize_with = "round6")]
    pub v_K_maj: f64,
    #[serde(serialize_with = "round6")]
    pub v_G_maj: f64,
    #[serde(serialize_with = "round6")]
    pub splits: f64,
    #[serde(serialize_with = "round6")]
    pub conflations: f64,
    #[serde(serialize_with = "round6")]
    pub misses: f64,
    #[serde(serialize_with = "round6")]
    pub errors: f64,
    #[serde(serialize_with = "round6")]
    pub R_t: f64,
    #[serde(serialize_with = "round6")]
    pub r_t: f64,
    #[serde(serialize_with = "round6")]
    pub TR: f64,
    #[serde(serialize_with = "round6")]
    pub TP: f64,
    #[serde(serialize_with = "round6")]
    pub strict_P: f64,
    #[serde(serialize_with = "round6")]
    pub strict_R: f64,
    #[serde(serialize_with = "round6")]
    pub relaxed_P: f64,
    #[serde(serialize_with = "round6")]
    pub relaxed_R: f64,
    #[serde(serialize_with = "round6")]
    pub core_recall: f64,
    #[serde(serialize_with = "round6")]
    pub vagueness_reference: f64,
    #[serde(serialize_with = "round6")]
    pub vagueness_candidate: f64,
    pub reference_consistent: bool,
    pub candidate_consistent: bool,
    pub degenerate_reference: bool,
    pub degenerate_candidate: bool,
    pub mode: Mode,
}

impl EvalReport {
    /// Numeric fields in declaration order.
    pub fn metrics(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("v_K_maj", self.v_K_maj),
            ("v_G_maj", self.v_G_maj),
            ("splits", self.splits),
            ("conflations", self.conflations),
            ("misses", self.misses),
            ("errors", self.errors),
            ("R_t", self.R_t),
            ("r_t", self.r_t),
            ("TR", self.TR),
            ("TP", self.TP),
            ("strict_P", self.strict_P),
            ("strict_R", self.strict_R),
            ("relaxed_P", self.relaxed_P),
            ("relaxed_R", self.relaxed_R),
            ("core_recall", self.core_recall),
            ("vagueness_reference", self.vagueness_reference),
            ("vagueness_candidate", self.vagueness_candidate),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// `document,metric,value` rows, without header.
    pub fn csv_rows(&self, document: &str) -> String {
        let mut out = String::new();
        for (name, v) in self.metrics() {
            out.push_str(&format!("{document},{name},{}\n", fmt6(v)));
        }
        out
    }
}

pub const CSV_HEADER: &str = "document,metric,value";

/// Decimal with at most six fractional digits and no trailing zeros.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Macro average of each numeric field over documents.
pub fn macro_average(reports: &[EvalReport]) -> Vec<(&'static str, f64)> {
    let Some(first) = reports.first() else {
        return Vec::new();
    };
    let mut sums = first.metrics();
    for r in &reports[1..] {
        for (acc, (_, v)) in sums.iter_mut().zip(r.metrics()) {
            acc.1 += v;
        }
    }
    for s in &mut sums {
        s.1 /= reports.len() as f64;
    }
    sums
}

fn side(s: Side) -> impl Fn(Error) -> Error {
    move |e| Error::SideInconsistent {
        side: s,
        source: Box::new(e),
    }
}

/// Runs the whole pipeline on both graphs and fills every measure.
///
/// Both graphs are placed over the union of their entities, so an event
/// present on one side only appears as an unrelated interval on the other.
pub fn evaluate(k: &IntervalGraph, g: &IntervalGraph, mode: Mode) -> Result<EvalReport> {
    let mut universe: Vec<String> = k.names().to_vec();
    for n in g.names() {
        if k.node_index(n).is_none() {
            universe.push(n.clone());
        }
    }
    Evaluator::new(&k.with_universe(&universe)?, mode)?.evaluate(g)
}

/// A reference graph prepared once and compared against many candidates.
#[derive(Debug, Clone)]
pub struct Evaluator {
    mode: Mode,
    k_sat: IntervalGraph,
    k_red: ReducedGraph,
    core: Vec<(String, String, RelationSet)>,
}

impl Evaluator {
    pub fn new(k: &IntervalGraph, mode: Mode) -> Result<Self> {
        let k_sat = k.saturate().map_err(side(Side::Reference))?;
        let k_red = ReducedGraph::from_interval_graph(&k_sat).map_err(side(Side::Reference))?;
        let core = core_relations(&k_sat);
        Ok(Evaluator { mode, k_sat, k_red, core })
    }

    pub fn reference(&self) -> &ReducedGraph {
        &self.k_red
    }

    /// Scores `g`, whose entities must all belong to the reference.
    pub fn evaluate(&self, g: &IntervalGraph) -> Result<EvalReport> {
        let k_sat = &self.k_sat;
        let k_red = &self.k_red;
        let g_sat = g
            .with_universe(k_sat.names())?
            .saturate()
            .map_err(side(Side::Candidate))?;
        let g_red = ReducedGraph::from_interval_graph(&g_sat).map_err(side(Side::Candidate))?;
        let w = self.mode.weights();
        let a = align(k_red.base(), g_red.base(), &w);
        let v_k = k_red.value();
        let v_g = g_red.value();
        let miss = misses(k_red, g_red.base(), &w);
        let err = errors(&g_red, k_red.base(), &w);
        let big = major_recall(k_red, g_red.base(), &a, &w).unwrap_or(0.0);
        let small = minor_recall(k_red, &g_red);
        let tp = precision(&g_red, k_red.base(), &a, &w).unwrap_or(0.0);
        let strict = strict_pr(k_sat, &g_sat);
        let relaxed = relaxed_pr(k_sat, &g_sat);
        Ok(EvalReport {
            v_K_maj: v_k,
            v_G_maj: v_g,
            splits: a.splits,
            conflations: a.conflations,
            misses: miss,
            errors: err,
            R_t: big,
            r_t: small,
            TR: full_recall(big, small, v_k),
            TP: tp,
            strict_P: strict.precision.unwrap_or(0.0),
            strict_R: strict.recall.unwrap_or(0.0),
            relaxed_P: relaxed.precision.unwrap_or(0.0),
            relaxed_R: relaxed.recall.unwrap_or(0.0),
            core_recall: core_recall(&self.core, &g_sat).unwrap_or(0.0),
            vagueness_reference: vagueness(k_sat).unwrap_or(0.0),
            vagueness_candidate: vagueness(&g_sat).unwrap_or(0.0),
            reference_consistent: true,
            candidate_consistent: true,
            degenerate_reference: v_k <= 0.0,
            degenerate_candidate: v_g <= 0.0,
            mode: self.mode,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::native;

    fn graph(text: &str) -> IntervalGraph {
        native::parse(text).unwrap()
    }

    #[test]
    fn weight_tables_are_valid() {
        assert!(WeightTable::new(WeightTable::RELAXED.w).is_ok());
        assert!(WeightTable::new(WeightTable::STRICT.w).is_ok());
        let mut bad = WeightTable::RELAXED.w;
        bad[0][2] = 0.25;
        assert!(WeightTable::new(bad).is_err());
        assert_eq!(WeightTable::RELAXED.weight(PointLabel::Lt, PointLabel::Le), 0.5);
        assert_eq!(WeightTable::RELAXED.weight(PointLabel::Lt, PointLabel::Ge), 0.0);
    }

    #[test]
    fn empty_graph_value_is_zero() {
        let r = ReducedGraph::from_interval_graph(&graph("events: A B C\n")).unwrap();
        assert_eq!(r.value(), 0.0);
    }

    #[test]
    fn self_comparison() {
        let g = graph("A b B\nB o C\nC d,s D\n");
        for mode in [Mode::Strict, Mode::Relaxed] {
            let r = evaluate(&g, &g, mode).unwrap();
            assert_eq!((r.TR, r.TP), (1.0, 1.0));
            assert_eq!((r.splits, r.conflations, r.r_t), (0.0, 0.0, 0.0));
            assert_eq!((r.strict_P, r.strict_R), (1.0, 1.0));
            assert_eq!(r.core_recall, 1.0);
        }
    }

    #[test]
    fn relaxed_worked_numbers() {
        let set = |s: &str| s.parse::<RelationSet>().unwrap();
        assert_eq!(relaxed_pair(set("b,o"), set("b")), (1.0, 0.5));
        assert_eq!(relaxed_pair(set("bi"), set("b")), (0.0, 0.0));
        assert_eq!(relaxed_pair(set("b"), set("b")), (1.0, 1.0));
        let k = graph("X b Y\n");
        let pr = relaxed_pr(&k, &graph("X b,m Y\n"));
        assert_eq!((pr.precision, pr.recall), (Some(1.0), Some(0.5)));
        let pr = relaxed_pr(&k, &graph("X bi Y\n"));
        assert_eq!((pr.precision, pr.recall), (Some(0.0), Some(0.0)));
        let pr = strict_pr(&k, &graph("X b,m Y\n"));
        assert_eq!((pr.precision, pr.recall), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn empty_candidate_baselines() {
        let k = graph("X b Y\n").saturate().unwrap();
        let g = graph("events: X Y\n");
        assert_eq!(strict_pr(&k, &g).recall, Some(0.0));
        assert_eq!(strict_pr(&k, &g).precision, None);
        assert_eq!(relaxed_pr(&k, &g).recall, Some(1.0 / 13.0));
    }

    #[test]
    fn core_of_chain() {
        let k = graph("A b B\nB b C\n").saturate().unwrap();
        let core = core_relations(&k);
        let names: Vec<_> = core.iter().map(|(a, b, _)| format!("{a}{b}")).collect();
        assert_eq!(names, vec!["AB", "BC"]);
        let g = graph("A b B\n").saturate().unwrap();
        assert_eq!(core_recall(&core, &g), Some(0.5));
        assert_eq!(core_recall(&core, &IntervalGraph::new()), Some(0.0));
        assert_eq!(core_recall(&[], &g), None);
        let two = graph("A b B\n").saturate().unwrap();
        assert_eq!(core_relations(&two).len(), 1);
    }

    #[test]
    fn vagueness_values() {
        assert_eq!(vagueness(&graph("A b B\nB m C\n")), Some(0.0));
        assert_eq!(vagueness(&graph("A b,m B\n")), Some(0.5));
        assert_eq!(vagueness(&graph("events: A B\n")), None);
        assert_eq!(mean_vagueness([RelationSet::UNIVERSAL]), Some(12.0 / 13.0));
    }

    #[test]
    fn inconsistent_side_is_reported() {
        let bad = graph("A b B\nB b C\nC b A\n");
        let ok = graph("A b B\n");
        match evaluate(&ok, &bad, Mode::Strict) {
            Err(Error::SideInconsistent { side, .. }) => assert_eq!(side, Side::Candidate),
            other => panic!("{other:?}"),
        }
        match evaluate(&bad, &ok, Mode::Strict) {
            Err(Error::SideInconsistent { side, .. }) => assert_eq!(side, Side::Reference),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt6(0.53125), "0.53125");
        assert_eq!(fmt6(5.0 / 9.0), "0.555556");
        assert_eq!(fmt6(1.0), "1");
        let g = graph("A b B\n");
        let r = evaluate(&g, &g, Mode::Strict).unwrap();
        assert!(r.to_json().contains("\"TR\":1.0"));
        assert!(r.csv_rows("doc").starts_with("doc,v_K_maj,1\n"));
    }
}
