//! Text formats: edge lists, partition and label files, CSV reports.
//!
//! Rows are tab-separated, comma-separated, or (when neither delimiter
//! occurs) whitespace-separated. Lines starting with `#` are comments. An
//! optional header row names the columns. Edge lists may declare their
//! orientation with a `# undirected` or `# directed` comment line, and their
//! node and relation order (isolated nodes included) with tab-separated
//! `# nodes` and `# relations` comment lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{GroundTruthLabels, LabelSet, MultiRelationalGraph};
use crate::minimize::MergeStep;
use crate::tree::Partition;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// Mirror every row. `None` follows the file's orientation comment and
    /// falls back to directed.
    pub undirected: Option<bool>,
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Non-empty, non-comment rows with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, split_fields(line)))
        }
    })
}

fn orientation_comment(text: &str) -> Option<bool> {
    text.lines()
        .map(str::trim)
        .filter_map(|l| l.strip_prefix('#'))
        .find_map(|c| match c.trim() {
            "undirected" => Some(true),
            "directed" => Some(false),
            _ => None,
        })
}

/// Labels listed on a `# nodes` / `# relations` comment line.
fn declared_labels(text: &str, key: &str) -> LabelSet {
    let mut set = LabelSet::default();
    for line in text.lines() {
        let Some(rest) = line.trim_start().strip_prefix('#') else {
            continue;
        };
        let mut parts = rest.trim_start().split('\t');
        if parts.next().map(str::trim) == Some(key) {
            for name in parts.map(str::trim).filter(|n| !n.is_empty()) {
                set.intern(name);
            }
        }
    }
    set
}

/// Column positions resolved from an optional header row.
struct Columns {
    positions: Vec<usize>,
    header_line: Option<usize>,
    width: usize,
}

fn resolve_columns(
    first: Option<&(usize, Vec<&str>)>,
    names: &[&[&str]],
    required: usize,
) -> Result<Columns> {
    let default = Columns {
        positions: (0..names.len()).collect(),
        header_line: None,
        width: names.len(),
    };
    let Some((line, fields)) = first else {
        return Ok(default);
    };
    let lower = fields[0].to_ascii_lowercase();
    if !names[0].contains(&lower.as_str()) {
        return Ok(default);
    }
    let mut positions = vec![usize::MAX; names.len()];
    for (pos, field) in fields.iter().enumerate() {
        let lower = field.to_ascii_lowercase();
        let Some(slot) = names.iter().position(|aliases| aliases.contains(&lower.as_str())) else {
            return Err(Error::UnknownHeader {
                column: field.to_string(),
            });
        };
        positions[slot] = pos;
    }
    if let Some(missing) = positions[..required].iter().position(|&p| p == usize::MAX) {
        return Err(Error::Parse {
            line: *line,
            message: format!("header lacks a `{}` column", names[missing][0]),
        });
    }
    Ok(Columns {
        positions,
        header_line: Some(*line),
        width: fields.len(),
    })
}

const EDGE_COLUMNS: [&[&str]; 4] = [
    &["src", "source"],
    &["dst", "target", "destination"],
    &["rel", "relation"],
    &["weight"],
];

fn field<'a>(fields: &[&'a str], pos: usize, line: usize, what: &str) -> Result<&'a str> {
    match fields.get(pos) {
        Some(f) if !f.is_empty() => Ok(f),
        _ => Err(Error::Parse {
            line,
            message: format!("missing {what}"),
        }),
    }
}

/// Parses an edge list with columns `src dst rel [weight]`.
pub fn parse_edge_list(text: &str, options: EdgeListOptions) -> Result<MultiRelationalGraph> {
    let rows: Vec<(usize, Vec<&str>)> = rows(text).collect();
    let cols = resolve_columns(rows.first(), &EDGE_COLUMNS, 3)?;
    let undirected = options
        .undirected
        .or_else(|| orientation_comment(text))
        .unwrap_or(false);
    let mut nodes = declared_labels(text, "nodes");
    let mut relations = declared_labels(text, "relations");
    let mut arcs = Vec::new();
    for (line, fields) in &rows {
        if Some(*line) == cols.header_line {
            continue;
        }
        let line = *line;
        let p = &cols.positions;
        let src = field(fields, p[0], line, "source")?;
        let dst = field(fields, p[1], line, "target")?;
        let rel = field(fields, p[2], line, "relation")?;
        let weight = match fields.get(p[3]).filter(|f| !f.is_empty()) {
            None => 1.0,
            Some(w) => w.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("weight `{w}` is not a number"),
            })?,
        };
        if !weight.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("weight `{weight}` is not finite"),
            });
        }
        if weight < 0.0 {
            return Err(Error::NegativeWeight { line, weight });
        }
        if fields.len() > cols.width {
            return Err(Error::Parse {
                line,
                message: format!("expected at most {} fields, found {}", cols.width, fields.len()),
            });
        }
        let s = nodes.intern(src);
        let t = nodes.intern(dst);
        let r = relations.intern(rel);
        arcs.push((s, t, r, weight));
    }
    if arcs.is_empty() {
        return Err(Error::NoArcs);
    }
    MultiRelationalGraph::with_labels(nodes, relations, arcs, !undirected)
}

pub fn load_edge_list(path: impl AsRef<Path>, options: EdgeListOptions) -> Result<MultiRelationalGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, options)
}

/// Tab-separated edge list with a header. Undirected graphs list each edge
/// once, from the smaller to the larger node index.
pub fn format_edge_list(g: &MultiRelationalGraph) -> String {
    let mut out = String::new();
    out.push_str(if g.is_directed() { "# directed\n" } else { "# undirected\n" });
    out.push_str("# nodes");
    for name in g.nodes().names() {
        out.push('\t');
        out.push_str(name);
    }
    out.push_str("\n# relations");
    for name in g.relations().names() {
        out.push('\t');
        out.push_str(name);
    }
    out.push('\n');
    out.push_str("src\tdst\trel\tweight\n");
    for a in g.arcs() {
        if !g.is_directed() && a.source > a.target {
            continue;
        }
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            g.nodes().name(a.source),
            g.nodes().name(a.target),
            g.relations().name(a.relation),
            a.weight
        );
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &MultiRelationalGraph) -> Result<()> {
    write_text(path, &format_edge_list(g))
}

/// `(node, group)` rows keyed by node label; groups are interned in
/// first-appearance order.
fn parse_assignment(text: &str, nodes: &LabelSet, group_names: &[&str]) -> Result<Vec<usize>> {
    let rows: Vec<(usize, Vec<&str>)> = rows(text).collect();
    let names: [&[&str]; 2] = [&["node", "id"], group_names];
    let cols = resolve_columns(rows.first(), &names, 2)?;
    let mut groups = LabelSet::default();
    let mut assignment = vec![usize::MAX; nodes.len()];
    for (line, fields) in &rows {
        if Some(*line) == cols.header_line {
            continue;
        }
        let node = field(fields, cols.positions[0], *line, "node")?;
        let group = field(fields, cols.positions[1], *line, group_names[0])?;
        let v = nodes
            .get(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        if assignment[v] != usize::MAX {
            return Err(Error::Parse {
                line: *line,
                message: format!("node `{node}` listed twice"),
            });
        }
        assignment[v] = groups.intern(group);
    }
    if let Some(v) = assignment.iter().position(|&c| c == usize::MAX) {
        return Err(Error::InvalidPartition(format!(
            "node `{}` has no {}",
            nodes.name(v),
            group_names[0]
        )));
    }
    Ok(assignment)
}

/// Node labels of a `node ...` file in first-appearance order.
pub fn node_column(text: &str) -> LabelSet {
    let mut set = LabelSet::default();
    for (i, (_, fields)) in rows(text).enumerate() {
        let name = fields[0];
        if i == 0 && ["node", "id"].contains(&name.to_ascii_lowercase().as_str()) {
            continue;
        }
        set.intern(name);
    }
    set
}

/// Reads a `node community` file.
pub fn parse_partition(text: &str, nodes: &LabelSet) -> Result<Partition> {
    let assignment = parse_assignment(text, nodes, &["community", "cluster"])?;
    Ok(Partition::from_assignment(&assignment))
}

/// Reads a `node class` file.
pub fn parse_labels(text: &str, nodes: &LabelSet) -> Result<GroundTruthLabels> {
    let assignment = parse_assignment(text, nodes, &["class", "label"])?;
    Ok(GroundTruthLabels::new(assignment))
}

pub fn format_partition(p: &Partition, nodes: &LabelSet) -> String {
    let mut out = String::from("node\tcommunity\n");
    for (v, c) in p.assignment().iter().enumerate() {
        let _ = writeln!(out, "{}\t{c}", nodes.name(v));
    }
    out
}

pub fn format_labels(labels: &GroundTruthLabels, nodes: &LabelSet) -> String {
    let mut out = String::from("node\tclass\n");
    for (v, c) in labels.classes().iter().enumerate() {
        let _ = writeln!(out, "{}\t{c}", nodes.name(v));
    }
    out
}

/// First line of every CSV report.
pub fn header_comment(config: &str) -> String {
    format!("# mrse-kit v{} config={config}\n", env!("CARGO_PKG_VERSION"))
}

/// `node,probability` (or `relation,probability`) rows.
pub fn format_distribution(kind: &str, names: &LabelSet, p: &[f64]) -> String {
    let mut out = format!("{kind},probability\n");
    for (i, v) in p.iter().enumerate() {
        let _ = writeln!(out, "{},{v}", names.name(i));
    }
    out
}

pub fn format_trace(trace: &[MergeStep], nodes: &LabelSet) -> String {
    let mut out = String::from("step,cluster_a,cluster_b,delta,objective\n");
    for (i, s) in trace.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            nodes.name(s.cluster_a),
            nodes.name(s.cluster_b),
            s.delta,
            s.objective
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub metric: String,
    pub dimension: usize,
    pub value: f64,
    pub iterations: usize,
}

pub fn format_entropy_report(rows: &[EntropyRow]) -> String {
    let mut out = String::from("metric,dimension,value,iterations\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.metric, r.dimension, r.value, r.iterations);
    }
    out
}

pub fn format_eval_report(scores: &crate::metrics::Scores) -> String {
    format!(
        "metric,value\nnmi,{}\nari,{}\nacc,{}\n",
        scores.nmi, scores.ari, scores.acc
    )
}
