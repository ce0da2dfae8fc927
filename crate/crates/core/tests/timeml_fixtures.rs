use std::path::PathBuf;

use tempgraph::metrics::{evaluate, Mode};
use tempgraph::timeml::{self, RelTypeMap, StatsMode};
use tempgraph::RelationSet;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/timeml")
}

fn doc(name: &str) -> timeml::Document {
    timeml::parse_timeml_file(&dir().join(name)).unwrap()
}

#[test]
fn example_document() {
    let d = doc("example.tml");
    assert_eq!(d.tlinks.len(), 2);
    let conv = timeml::to_interval_graph(&d, false, &RelTypeMap::default());
    assert!(conv.conflicts.is_empty());
    let g = conv.graph.saturate().unwrap();
    assert!(g.is_consistent());
    assert_eq!(g.relation_between("ei1", "ei2"), Some(RelationSet::single(tempgraph::BaseRelation::Before)));
}

#[test]
fn document_without_links() {
    let d = doc("no_links.tml");
    assert!(d.tlinks.is_empty());
    let g = timeml::to_interval_graph(&d, false, &RelTypeMap::default()).graph;
    assert_eq!(g.edge_count(), 0);
    assert_eq!(g.node_count(), 2);
}

#[test]
fn dangling_reference_is_dropped() {
    let d = doc("unknown_ref.tml");
    let conv = timeml::to_interval_graph(&d, false, &RelTypeMap::default());
    assert!(conv.warnings.iter().any(|w| w.contains("ei7")), "{:?}", conv.warnings);
    assert_eq!(conv.graph.edge_count(), 2);
    assert!(conv.graph.node_index("ei7").is_none());
}

#[test]
fn calendar_links_between_timexes() {
    let d = doc("unknown_ref.tml");
    let plain = timeml::to_interval_graph(&d, false, &RelTypeMap::default()).graph;
    let tt = timeml::to_interval_graph(&d, true, &RelTypeMap::default()).graph;
    assert_eq!(plain.relation_between("t1", "t2"), Some(RelationSet::UNIVERSAL));
    assert_eq!(tt.relation_between("t1", "t2"), Some("d".parse().unwrap()));
    assert!(tt.saturate().unwrap().is_consistent());
}

#[test]
fn self_comparison_is_perfect() {
    let g = timeml::to_interval_graph(&doc("unknown_ref.tml"), true, &RelTypeMap::default()).graph;
    let r = evaluate(&g, &g, Mode::Relaxed).unwrap();
    assert!((r.TR - 1.0).abs() < 1e-12);
    assert!((r.TP - 1.0).abs() < 1e-12);
}

#[test]
fn corpus_over_fixtures() {
    let docs = timeml::load_corpus(&dir()).unwrap();
    assert_eq!(docs.len(), 3);
    let map = RelTypeMap::default();
    let raw = timeml::mode_stats(&docs, StatsMode { time_time: false, saturate: false }, &map);
    let sat = timeml::mode_stats(&docs, StatsMode { time_time: true, saturate: true }, &map);
    assert_eq!(raw.documents, 3);
    assert_eq!(sat.consistent, 3);
    assert!(sat.average_relations >= raw.average_relations);
    let all = timeml::corpus_stats(&docs, &map);
    assert_eq!(all.raw, raw);
    assert_eq!(all.saturated_time_time, sat);
}

#[test]
fn reltype_override() {
    let mut map = RelTypeMap::default();
    map.apply_overrides("# comment\nIBEFORE b,m\n").unwrap();
    assert_eq!(map.map("IBEFORE").unwrap(), "b,m".parse().unwrap());
    assert!(map.map("NOT_A_RELTYPE").is_err());
    assert!(map.apply_overrides("BEFORE b,o\n").is_err());
}
