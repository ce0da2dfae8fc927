//! TimeML documents: parsing, conversion to interval graphs, and corpus
//! statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveDateTime, NaiveTime};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{BaseRelation, RelationSet};
use crate::closure::IntervalGraph;
use crate::error::{Error, Result};
use crate::synthgen::interval_relation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventInfo {
    pub event_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimexInfo {
    pub text: String,
    pub kind: Option<String>,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tlink {
    pub id: Option<String>,
    pub source: String,
    pub target: String,
    pub rel_type: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Keyed by event-instance id.
    pub events: BTreeMap<String, EventInfo>,
    pub timexes: BTreeMap<String, TimexInfo>,
    pub tlinks: Vec<Tlink>,
    pub warnings: Vec<String>,
}

fn text_of(node: roxmltree::Node) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a TimeML document. Events are keyed by instance id through
/// `MAKEINSTANCE` when present, otherwise by their own `eid`. Links with an
/// unknown end are dropped with a warning.
pub fn parse_timeml(content: &str, default_id: &str) -> Result<Document> {
    let opts = roxmltree::ParsingOptions {
        allow_dtd: true,
        ..Default::default()
    };
    let xml = roxmltree::Document::parse_with_options(content, opts).map_err(|e| Error::Xml(e.to_string()))?;
    let mut doc = Document {
        id: default_id.to_string(),
        ..Default::default()
    };
    let mut event_text: BTreeMap<String, String> = BTreeMap::new();
    let mut instances: Vec<(String, String)> = Vec::new();
    let mut links = Vec::new();
    for node in xml.descendants().filter(|n| n.is_element()) {
        match node.tag_name().name() {
            "DOCID" => {
                let id = text_of(node);
                if !id.is_empty() {
                    doc.id = id;
                }
            }
            "EVENT" => {
                if let Some(eid) = node.attribute("eid") {
                    event_text.insert(eid.to_string(), text_of(node));
                    if let Some(eiid) = node.attribute("eiid") {
                        instances.push((eiid.to_string(), eid.to_string()));
                    }
                }
            }
            "MAKEINSTANCE" => {
                if let (Some(eiid), Some(eid)) = (node.attribute("eiid"), node.attribute("eventID")) {
                    instances.push((eiid.to_string(), eid.to_string()));
                }
            }
            "TIMEX3" => {
                if let Some(tid) = node.attribute("tid") {
                    doc.timexes.insert(
                        tid.to_string(),
                        TimexInfo {
                            text: text_of(node),
                            kind: node.attribute("type").map(str::to_string),
                            value: node.attribute("value").map(str::to_string),
                        },
                    );
                }
            }
            "TLINK" => links.push(node),
            _ => {}
        }
    }
    let instanced: BTreeSet<&String> = instances.iter().map(|(_, e)| e).collect();
    for (eid, text) in &event_text {
        if !instanced.contains(eid) {
            doc.events.insert(
                eid.clone(),
                EventInfo { event_id: eid.clone(), text: text.clone() },
            );
        }
    }
    for (eiid, eid) in &instances {
        let text = event_text.get(eid).cloned().unwrap_or_default();
        doc.events.insert(
            eiid.clone(),
            EventInfo { event_id: eid.clone(), text },
        );
    }
    for node in links {
        let id = node.attribute("lid").map(str::to_string);
        let label = id.clone().unwrap_or_else(|| "TLINK".into());
        let source = node.attribute("eventInstanceID").or(node.attribute("timeID"));
        let target = node
            .attribute("relatedToEventInstance")
            .or(node.attribute("relatedToTime"));
        let (Some(source), Some(target), Some(rel)) = (source, target, node.attribute("relType")) else {
            doc.warnings.push(format!("{label}: missing source, target or relType"));
            continue;
        };
        let known = |x: &str| doc.events.contains_key(x) || doc.timexes.contains_key(x);
        for end in [source, target] {
            if !known(end) {
                doc.warnings.push(format!("{label}: unknown id {end}"));
            }
        }
        if known(source) && known(target) {
            doc.tlinks.push(Tlink {
                id,
                source: source.to_string(),
                target: target.to_string(),
                rel_type: rel.to_string(),
            });
        }
    }
    Ok(doc)
}

pub fn parse_timeml_file(path: &Path) -> Result<Document> {
    let content = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_timeml(&content, &stem)
}

/// relType name to Allen relation set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelTypeMap {
    map: BTreeMap<String, RelationSet>,
}

impl Default for RelTypeMap {
    fn default() -> Self {
        use BaseRelation::*;
        let table = [
            ("BEFORE", Before),
            ("AFTER", After),
            ("IBEFORE", Meets),
            ("IAFTER", MetBy),
            ("INCLUDES", Contains),
            ("IS_INCLUDED", During),
            ("DURING", During),
            ("DURING_INV", Contains),
            ("SIMULTANEOUS", Equals),
            ("IDENTITY", Equals),
            ("BEGINS", Starts),
            ("BEGUN_BY", StartedBy),
            ("ENDS", Finishes),
            ("ENDED_BY", FinishedBy),
        ];
        RelTypeMap {
            map: table
                .into_iter()
                .map(|(k, r)| (k.to_string(), RelationSet::single(r)))
                .collect(),
        }
    }
}

impl RelTypeMap {
    /// Applies `RELTYPE rel[,rel]*` lines on top of the current table.
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [name, rel] = parts[..] else {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected `RELTYPE rel[,rel]*`, got {line:?}"),
                });
            };
            let set: RelationSet = rel.parse().map_err(|e: Error| Error::Parse {
                line: n + 1,
                message: e.to_string(),
            })?;
            if !set.is_convex() || set.is_empty() {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("{rel} is not a convex relation"),
                });
            }
            self.map.insert(name.to_string(), set);
        }
        Ok(())
    }

    pub fn from_override_file(path: &Path) -> Result<Self> {
        let mut m = RelTypeMap::default();
        m.apply_overrides(&std::fs::read_to_string(path)?)?;
        Ok(m)
    }

    pub fn map(&self, name: &str) -> Result<RelationSet> {
        self.map.get(name).copied().ok_or_else(|| Error::UnknownRelType {
            name: name.to_string(),
            accepted: self.map.keys().cloned().collect::<Vec<_>>().join(", "),
        })
    }
}

pub fn map_reltype(name: &str) -> Result<RelationSet> {
    RelTypeMap::default().map(name)
}

/// Calendar span of a fully specified date or time value, in half-seconds
/// since the epoch, as `(first, last)` with both ends inclusive. Doubling
/// keeps single-second values non-degenerate.
pub fn calendar_span(value: &str) -> Option<(i64, i64)> {
    let (start, next) = calendar_bounds(value)?;
    let (s, e) = (start.and_utc().timestamp(), next.and_utc().timestamp());
    Some((2 * s, 2 * e - 1))
}

fn calendar_bounds(value: &str) -> Option<(NaiveDateTime, NaiveDateTime)> {
    let midnight = NaiveTime::MIN;
    let digits = |s: &str, n: usize| s.len() == n && s.bytes().all(|b| b.is_ascii_digit());
    let (date, time) = match value.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (value, None),
    };
    let parts: Vec<&str> = date.split('-').collect();
    match (parts.as_slice(), time) {
        ([y], None) if digits(y, 4) => {
            let y: i32 = y.parse().ok()?;
            Some((
                NaiveDate::from_ymd_opt(y, 1, 1)?.and_time(midnight),
                NaiveDate::from_ymd_opt(y + 1, 1, 1)?.and_time(midnight),
            ))
        }
        ([y, m], None) if digits(y, 4) && digits(m, 2) => {
            let start = NaiveDate::from_ymd_opt(y.parse().ok()?, m.parse().ok()?, 1)?;
            let next = if start.month() == 12 {
                NaiveDate::from_ymd_opt(start.year() + 1, 1, 1)?
            } else {
                NaiveDate::from_ymd_opt(start.year(), start.month() + 1, 1)?
            };
            Some((start.and_time(midnight), next.and_time(midnight)))
        }
        ([y, m, d], t) if digits(y, 4) && digits(m, 2) && digits(d, 2) => {
            let day = NaiveDate::from_ymd_opt(y.parse().ok()?, m.parse().ok()?, d.parse().ok()?)?;
            let Some(t) = t else {
                return Some((day.and_time(midnight), day.succ_opt()?.and_time(midnight)));
            };
            let fields: Vec<&str> = t.split(':').collect();
            if !fields.iter().all(|f| digits(f, 2)) {
                return None;
            }
            let num = |i: usize| fields[i].parse::<u32>().ok();
            let (time, step) = match fields.len() {
                1 => (NaiveTime::from_hms_opt(num(0)?, 0, 0)?, chrono::Duration::hours(1)),
                2 => (NaiveTime::from_hms_opt(num(0)?, num(1)?, 0)?, chrono::Duration::minutes(1)),
                3 => (
                    NaiveTime::from_hms_opt(num(0)?, num(1)?, num(2)?)?,
                    chrono::Duration::seconds(1),
                ),
                _ => return None,
            };
            let start = day.and_time(time);
            Some((start, start + step))
        }
        _ => None,
    }
}

/// Allen relation between two fully specified calendar values, if both
/// parse.
pub fn time_time_relation(a: &str, b: &str) -> Option<RelationSet> {
    Some(interval_relation(calendar_span(a)?, calendar_span(b)?, 0))
}

/// Result of converting a document.
#[derive(Debug, Clone)]
pub struct Conversion {
    pub graph: IntervalGraph,
    pub warnings: Vec<String>,
    /// Pairs whose links contradict each other; their edge is left out.
    pub conflicts: Vec<(String, String)>,
}

/// Builds the interval graph of a document: one node per event instance and
/// timex, one edge per link, plus calendar relations between timexes when
/// `time_time` is set.
pub fn to_interval_graph(doc: &Document, time_time: bool, map: &RelTypeMap) -> Conversion {
    let mut g = IntervalGraph::with_nodes(doc.events.keys().chain(doc.timexes.keys()));
    let mut warnings = doc.warnings.clone();
    let mut conflicts = BTreeSet::new();
    let mut add = |g: &mut IntervalGraph, warnings: &mut Vec<String>, a: &str, b: &str, rel: RelationSet, what: &str| {
        if a == b {
            warnings.push(format!("{what}: relation of {a} with itself"));
            return;
        }
        let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        if conflicts.contains(&key) {
            return;
        }
        if g.constrain(a, b, rel).is_err() {
            warnings.push(format!("{what}: contradicts an earlier relation between {a} and {b}"));
            let (i, j) = (g.node_index(a).unwrap(), g.node_index(b).unwrap());
            g.remove_edge(i, j);
            conflicts.insert(key);
        }
    };
    for l in &doc.tlinks {
        let what = l.id.clone().unwrap_or_else(|| "TLINK".into());
        match map.map(&l.rel_type) {
            Ok(rel) => add(&mut g, &mut warnings, &l.source, &l.target, rel, &what),
            Err(e) => warnings.push(format!("{what}: {e}")),
        }
    }
    if time_time {
        let dated: Vec<(&String, &str)> = doc
            .timexes
            .iter()
            .filter(|(_, t)| !matches!(t.kind.as_deref(), Some("DURATION") | Some("SET")))
            .filter_map(|(id, t)| t.value.as_deref().map(|v| (id, v)))
            .filter(|(_, v)| calendar_span(v).is_some())
            .collect();
        for (i, (a, va)) in dated.iter().enumerate() {
            for (b, vb) in &dated[i + 1..] {
                if let Some(rel) = time_time_relation(va, vb) {
                    add(&mut g, &mut warnings, a, b, rel, "time-time");
                }
            }
        }
    }
    Conversion {
        graph: g,
        warnings,
        conflicts: conflicts.into_iter().collect(),
    }
}

/// One column of the corpus table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeStats {
    pub documents: usize,
    pub consistent: usize,
    pub average_relations: f64,
    pub average_components: f64,
    pub component_average_size: f64,
    pub max_component_average_size: f64,
    pub average_entities: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub raw: ModeStats,
    pub time_time: ModeStats,
    pub saturated: ModeStats,
    pub saturated_time_time: ModeStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsMode {
    pub time_time: bool,
    pub saturate: bool,
}

impl StatsMode {
    pub const ALL: [StatsMode; 4] = [
        StatsMode { time_time: false, saturate: false },
        StatsMode { time_time: true, saturate: false },
        StatsMode { time_time: false, saturate: true },
        StatsMode { time_time: true, saturate: true },
    ];
}

struct DocFigures {
    relations: usize,
    components: usize,
    mean_size: f64,
    max_size: usize,
    entities: usize,
}

fn figures(g: &IntervalGraph) -> DocFigures {
    let sizes = g.component_sizes();
    DocFigures {
        relations: g.edge_count(),
        components: sizes.len(),
        mean_size: if sizes.is_empty() {
            0.0
        } else {
            sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
        },
        max_size: sizes.first().copied().unwrap_or(0),
        entities: g.node_count(),
    }
}

/// Statistics of one mode. In saturated modes inconsistent documents are
/// counted but left out of the averages.
pub fn mode_stats(docs: &[Document], mode: StatsMode, map: &RelTypeMap) -> ModeStats {
    let per_doc: Vec<Option<DocFigures>> = docs
        .par_iter()
        .map(|d| {
            let g = to_interval_graph(d, mode.time_time, map).graph;
            if mode.saturate {
                g.saturate().ok().map(|s| figures(&s))
            } else {
                Some(figures(&g))
            }
        })
        .collect();
    let kept: Vec<&DocFigures> = per_doc.iter().flatten().collect();
    let n = kept.len().max(1) as f64;
    let avg = |f: &dyn Fn(&DocFigures) -> f64| kept.iter().map(|d| f(d)).sum::<f64>() / n;
    ModeStats {
        documents: docs.len(),
        consistent: kept.len(),
        average_relations: avg(&|d| d.relations as f64),
        average_components: avg(&|d| d.components as f64),
        component_average_size: avg(&|d| d.mean_size),
        max_component_average_size: avg(&|d| d.max_size as f64),
        average_entities: avg(&|d| d.entities as f64),
    }
}

pub fn corpus_stats(docs: &[Document], map: &RelTypeMap) -> CorpusStats {
    let [a, b, c, d] = StatsMode::ALL.map(|m| mode_stats(docs, m, map));
    CorpusStats {
        raw: a,
        time_time: b,
        saturated: c,
        saturated_time_time: d,
    }
}

/// Parses every `.tml` or `.xml` file under `dir`, sorted by path.
pub fn load_corpus(dir: &Path) -> Result<Vec<Document>> {
    let mut paths: Vec<_> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| matches!(p.extension().and_then(|x| x.to_str()), Some("tml") | Some("xml")))
        .collect();
    paths.sort();
    paths.par_iter().map(|p| parse_timeml_file(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"<?xml version="1.0"?>
<TimeML>
<DOCID>sample</DOCID>
<TIMEX3 tid="t1" type="DATE" value="1998-01-01">New Year's Day</TIMEX3>
<TIMEX3 tid="t2" type="DATE" value="1998-01-02">the day after</TIMEX3>
<TIMEX3 tid="t3" type="DURATION" value="P1D">a day</TIMEX3>
<EVENT eid="e1" class="OCCURRENCE">left</EVENT>
<EVENT eid="e2" class="OCCURRENCE">arrived</EVENT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
<TLINK lid="l1" relType="BEFORE" eventInstanceID="ei1" relatedToEventInstance="ei2"/>
<TLINK lid="l2" relType="IS_INCLUDED" eventInstanceID="ei1" relatedToTime="t1"/>
<TLINK lid="l3" relType="BEFORE" eventInstanceID="ei9" relatedToTime="t1"/>
</TimeML>"#;

    #[test]
    fn parse_resolves_instances() {
        let d = parse_timeml(DOC, "x").unwrap();
        assert_eq!(d.id, "sample");
        assert_eq!(d.events["ei1"].text, "left");
        assert_eq!(d.tlinks.len(), 2);
        assert_eq!(d.warnings.len(), 1);
        assert!(d.warnings[0].contains("ei9"));
    }

    #[test]
    fn malformed_xml() {
        assert!(matches!(parse_timeml("<TimeML><EVENT></TimeML>", "x"), Err(Error::Xml(_))));
    }

    #[test]
    fn reltypes() {
        assert_eq!(map_reltype("BEFORE").unwrap(), "b".parse().unwrap());
        assert_eq!(map_reltype("SIMULTANEOUS").unwrap(), "e".parse().unwrap());
        let err = map_reltype("OVERLAPPED_BY").unwrap_err();
        assert!(err.to_string().contains("IS_INCLUDED"));
        let pairs = [
            ("BEFORE", "AFTER"),
            ("IBEFORE", "IAFTER"),
            ("INCLUDES", "IS_INCLUDED"),
            ("BEGINS", "BEGUN_BY"),
            ("ENDS", "ENDED_BY"),
            ("DURING", "DURING_INV"),
            ("SIMULTANEOUS", "SIMULTANEOUS"),
            ("IDENTITY", "IDENTITY"),
        ];
        for (a, b) in pairs {
            assert_eq!(map_reltype(a).unwrap().invert(), map_reltype(b).unwrap(), "{a}");
        }
    }

    #[test]
    fn overrides() {
        let mut m = RelTypeMap::default();
        m.apply_overrides("# during may also be equality\nDURING d,s,f,e\nOVERLAPS o\n").unwrap();
        assert_eq!(m.map("DURING").unwrap(), "d,s,f,e".parse().unwrap());
        assert_eq!(m.map("OVERLAPS").unwrap(), "o".parse().unwrap());
        assert!(m.apply_overrides("X b,bi").is_err());
        assert!(m.apply_overrides("X").is_err());
    }

    #[test]
    fn calendar() {
        let rel = |a, b| time_time_relation(a, b).unwrap().to_string();
        assert_eq!(rel("1998-01-01", "1998-01-02"), "b");
        assert_eq!(rel("1998-01-01", "1998"), "s");
        assert_eq!(rel("1998-06-15", "1998"), "d");
        assert_eq!(rel("1998-12-31", "1998"), "f");
        assert_eq!(rel("1998-12", "1998-12-31"), "fi");
        assert_eq!(rel("1998-02-03T10:00", "1998-02-03"), "d");
        assert_eq!(rel("1998-02-03T10:00:00", "1998-02-03T10:00"), "s");
        assert_eq!(rel("1997", "1998-03"), "b");
        for v in ["PRESENT_REF", "1998-W05", "XXXX-XX-XX", "P1D", "1998-Q1", "1998-13"] {
            assert!(calendar_span(v).is_none(), "{v}");
        }
    }

    #[test]
    fn conversion() {
        let d = parse_timeml(DOC, "x").unwrap();
        let m = RelTypeMap::default();
        let plain = to_interval_graph(&d, false, &m);
        assert_eq!(plain.graph.node_count(), 5);
        assert_eq!(plain.graph.edge_count(), 2);
        let tt = to_interval_graph(&d, true, &m);
        assert_eq!(tt.graph.edge_count(), 3);
        assert_eq!(tt.graph.relation_between("t1", "t2"), Some("b".parse().unwrap()));
    }

    #[test]
    fn contradictory_links_are_dropped() {
        let d = Document {
            id: "c".into(),
            events: [("a", "x"), ("b", "y")]
                .map(|(k, e)| (k.to_string(), EventInfo { event_id: e.into(), text: String::new() }))
                .into_iter()
                .collect(),
            tlinks: vec![
                Tlink { id: None, source: "a".into(), target: "b".into(), rel_type: "BEFORE".into() },
                Tlink { id: None, source: "a".into(), target: "b".into(), rel_type: "AFTER".into() },
                Tlink { id: None, source: "b".into(), target: "a".into(), rel_type: "AFTER".into() },
            ],
            ..Default::default()
        };
        let c = to_interval_graph(&d, false, &RelTypeMap::default());
        assert_eq!(c.graph.edge_count(), 0);
        assert_eq!(c.conflicts, vec![("a".to_string(), "b".to_string())]);
    }

    #[test]
    fn stats_on_small_graphs() {
        let link = |s: &str, t: &str| Tlink { id: None, source: s.into(), target: t.into(), rel_type: "BEFORE".into() };
        let ev = |ids: &[&str]| {
            ids.iter()
                .map(|k| (k.to_string(), EventInfo { event_id: k.to_string(), text: String::new() }))
                .collect()
        };
        let chain = Document {
            id: "chain".into(),
            events: ev(&["a", "b", "c"]),
            tlinks: vec![link("a", "b"), link("b", "c")],
            ..Default::default()
        };
        let pairs = Document {
            id: "pairs".into(),
            events: ev(&["a", "b", "c", "d"]),
            tlinks: vec![link("a", "b"), link("c", "d")],
            ..Default::default()
        };
        let m = RelTypeMap::default();
        let s = mode_stats(&[chain], StatsMode::ALL[0], &m);
        assert_eq!((s.average_components, s.component_average_size), (1.0, 3.0));
        let s = mode_stats(&[pairs], StatsMode::ALL[2], &m);
        assert_eq!((s.average_components, s.component_average_size), (2.0, 2.0));
        assert_eq!(s.consistent, 1);
    }
}
