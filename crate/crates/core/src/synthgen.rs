//! Random fully connected interval graphs whose endpoints are only known up
//! to a window of width `I`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{EndpointQuadruple, PointRelation, RelationSet};
use crate::closure::IntervalGraph;
use crate::error::{Error, Result};
use crate::metrics::vagueness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub events: usize,
    pub range: i64,
    pub indet: i64,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.events < 2 {
            return Err(Error::Config("need at least 2 events".into()));
        }
        if self.range < 1 || self.indet < 0 {
            return Err(Error::Config("range must be positive and indeterminacy non-negative".into()));
        }
        if self.range < self.indet + 1 {
            return Err(Error::Config(format!(
                "range {} leaves no room for intervals longer than {}",
                self.range, self.indet
            )));
        }
        Ok(())
    }
}

/// Possible orderings of two points whose true positions lie within `I/2`
/// of centres `a` and `b`.
pub fn window_relation(a: i64, b: i64, indet: i64) -> PointRelation {
    let mut r = PointRelation::EMPTY;
    if a - b < indet {
        r = r.union(PointRelation::LT);
    }
    if (a - b).abs() <= indet {
        r = r.union(PointRelation::EQ);
    }
    if b - a < indet {
        r = r.union(PointRelation::GT);
    }
    r
}

/// Relation set between two windowed intervals given as `(begin, end)`
/// centres.
pub fn interval_relation(i: (i64, i64), j: (i64, i64), indet: i64) -> RelationSet {
    RelationSet::from_endpoints(EndpointQuadruple::new(
        window_relation(i.0, j.0, indet),
        window_relation(i.1, j.1, indet),
        window_relation(i.0, j.1, indet),
        window_relation(i.1, j.0, indet),
    ))
}

/// Draws `(b, e)` per event in index order: `b` uniform in `[0, N-I-1]`,
/// then `e` uniform in `[b+I+1, N]`.
pub fn sample_intervals(c: &GenConfig) -> Result<Vec<(i64, i64)>> {
    c.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    Ok((0..c.events)
        .map(|_| {
            let b = rng.gen_range(0..=c.range - c.indet - 1);
            let e = rng.gen_range(b + c.indet + 1..=c.range);
            (b, e)
        })
        .collect())
}

pub fn event_name(i: usize) -> String {
    format!("e{}", i + 1)
}

/// Builds the fully connected graph over the given windowed intervals.
/// Every edge is annotated; universal relations are not stored.
pub fn graph_from_intervals(intervals: &[(i64, i64)], indet: i64) -> Result<IntervalGraph> {
    let mut g = IntervalGraph::with_nodes((0..intervals.len()).map(event_name));
    for i in 0..intervals.len() {
        for j in (i + 1)..intervals.len() {
            let r = interval_relation(intervals[i], intervals[j], indet);
            if !r.is_universal() {
                g.set_relation(i, j, r)?;
            }
        }
    }
    Ok(g)
}

pub fn generate(c: &GenConfig) -> Result<IntervalGraph> {
    graph_from_intervals(&sample_intervals(c)?, c.indet)
}

/// Sidecar written next to a generated graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSummary {
    pub config: GenConfig,
    pub intervals: Vec<(i64, i64)>,
    pub edges: usize,
    pub vagueness: f64,
}

pub fn generate_with_summary(c: &GenConfig) -> Result<(IntervalGraph, GenSummary)> {
    let intervals = sample_intervals(c)?;
    let g = graph_from_intervals(&intervals, c.indet)?;
    let summary = GenSummary {
        config: *c,
        intervals,
        edges: g.edge_count(),
        vagueness: vagueness(&g).unwrap_or(0.0),
    };
    Ok((g, summary))
}
