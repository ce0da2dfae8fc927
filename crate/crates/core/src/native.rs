//! Plain-text annotation format.
//!
//! ```text
//! # comment
//! events: A B C
//! A b,m B
//! B d C
//! ```

use crate::algebra::RelationSet;
use crate::closure::IntervalGraph;
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<IntervalGraph> {
    let mut g = IntervalGraph::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("events:") {
            for id in rest.split_whitespace() {
                g.add_node(id);
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, rel, b] = parts[..] else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `id rel id`, got {line:?}"),
            });
        };
        if a == b {
            return Err(Error::Parse {
                line: line_no,
                message: format!("relation of {a} with itself"),
            });
        }
        let rel: RelationSet = rel.parse().map_err(|e: Error| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        match g.constrain(a, b, rel) {
            Ok(()) => {}
            Err(Error::EmptyRelation { from, to }) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("contradicts an earlier line for {from} and {to}"),
                })
            }
            Err(e @ Error::NonConvex { .. }) => return Err(e),
            Err(e) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(g)
}

/// Writes every node on the `events:` line, then one line per stored edge.
pub fn serialize(g: &IntervalGraph) -> String {
    let mut out = String::new();
    if g.node_count() > 0 {
        out.push_str("events:");
        for n in g.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
    }
    for (i, j, r) in g.edges() {
        out.push_str(&format!("{} {} {}\n", g.name(i), r, g.name(j)));
    }
    out
}
