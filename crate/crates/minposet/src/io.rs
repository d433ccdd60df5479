//! Reading and writing posets as JSON, and exporting diagrams as DOT.
//!
//! The JSON document is `{"n": …, "relations": [[a, b], …]}` with `a < b`
//! meaning point `a` lies below point `b`. The writer emits the cover
//! relations only; the reader closes whatever relations it is given, so
//! the two sides agree on the poset while staying tolerant of redundant
//! input.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Serialize, Deserialize)]
struct PosetDocument {
    n: usize,
    relations: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Serializes the poset as a single-line JSON document of its cover
/// relations.
pub fn poset_to_json(p: &Poset) -> String {
    let doc = PosetDocument {
        n: p.n(),
        relations: p.cover_edges(),
        labels: p.labels().map(<[String]>::to_vec),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses a JSON document into a poset, closing the relations
/// transitively.
pub fn poset_from_json(text: &str) -> Result<Poset> {
    let doc: PosetDocument =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let poset = Poset::from_relations(doc.n, &doc.relations)?;
    match doc.labels {
        Some(labels) => {
            if labels.len() != doc.n {
                return Err(Error::Format(format!(
                    "{} labels for {} points",
                    labels.len(),
                    doc.n
                )));
            }
            Ok(poset.with_labels(labels))
        }
        None => Ok(poset),
    }
}

/// Reads one JSON poset document from a reader.
pub fn read_poset(mut reader: impl Read) -> Result<Poset> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    poset_from_json(&text)
}

/// Writes the poset as one JSON line.
pub fn write_poset(mut writer: impl Write, p: &Poset) -> Result<()> {
    writeln!(writer, "{}", poset_to_json(p))?;
    Ok(())
}

/// Renders the Hasse diagram in DOT format: covers point upward, and
/// points of equal height share a rank.
pub fn poset_to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in 0..p.n() {
        out.push_str(&format!("  p{x} [label=\"{}\"];\n", p.point_name(x)));
    }
    let heights = p.heights();
    let max_height = heights.iter().copied().max().unwrap_or(0);
    for level in 0..=max_height {
        let rank: Vec<String> = (0..p.n())
            .filter(|&x| heights[x] == level)
            .map(|x| format!("p{x};"))
            .collect();
        if !rank.is_empty() {
            out.push_str(&format!("  {{ rank=same; {} }}\n", rank.join(" ")));
        }
    }
    for (a, b) in p.cover_edges() {
        out.push_str(&format!("  p{a} -> p{b};\n"));
    }
    out.push_str("}\n");
    out
}
