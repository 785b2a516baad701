//! Reading and writing graphs as plain-text edge lists.
//!
//! Format: `#` starts a comment (full line or trailing), the first
//! significant line is `n=<node count>`, and every following significant
//! line is one undirected edge `u v` with 0-based endpoints. An optional
//! labels file carries one `node label` pair per significant line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelId, NodeId};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line_no: usize,
    field: &str,
    what: &str,
) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::ingestion(path, line_no, format!("invalid {what}: `{field}`")))
}

/// Loads a graph from an edge-list file, with node labels from
/// `labels_path` when given.
pub fn load_graph(path: &Path, labels_path: Option<&Path>) -> Result<Graph> {
    let text = read_to_string(path)?;
    let mut n: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if n.is_none() {
            let Some(count) = line.strip_prefix("n=") else {
                return Err(Error::ingestion(
                    path,
                    line_no,
                    format!("expected header `n=<count>`, found `{line}`"),
                ));
            };
            n = Some(parse_field(path, line_no, count.trim(), "node count")?);
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::ingestion(
                path,
                line_no,
                format!("expected `u v`, found `{line}`"),
            ));
        };
        let u: NodeId = parse_field(path, line_no, a, "node id")?;
        let v: NodeId = parse_field(path, line_no, b, "node id")?;
        edges.push((u, v));
    }
    let Some(n) = n else {
        return Err(Error::ingestion(path, 1, "missing `n=<count>` header".to_string()));
    };
    let labels = match labels_path {
        Some(lp) => Some(load_labels(lp, n)?),
        None => None,
    };
    Graph::new(n, &edges, labels).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::ingestion(path, 0, msg),
        other => other,
    })
}

/// Loads a labels file: one `node label` pair per line, every node covered
/// exactly once.
pub fn load_labels(path: &Path, n: usize) -> Result<Vec<LabelId>> {
    let text = read_to_string(path)?;
    let mut labels: Vec<Option<LabelId>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::ingestion(
                path,
                line_no,
                format!("expected `node label`, found `{line}`"),
            ));
        };
        let v: usize = parse_field(path, line_no, a, "node id")?;
        let label: LabelId = parse_field(path, line_no, b, "label")?;
        if v >= n {
            return Err(Error::ingestion(
                path,
                line_no,
                format!("node {v} out of range for n={n}"),
            ));
        }
        if labels[v].replace(label).is_some() {
            return Err(Error::ingestion(path, line_no, format!("duplicate label for node {v}")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::ingestion(path, 0, format!("node {v} has no label"))))
        .collect()
}

/// Renders a graph as edge-list text, suitable for `load_graph`.
pub fn format_graph(graph: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n={}", graph.node_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Writes a graph to `path` in edge-list format.
pub fn save_graph(graph: &Graph, path: &Path) -> Result<()> {
    fs::write(path, format_graph(graph)).map_err(|e| Error::io(path, e))
}

/// Builds an unlabeled graph from a raw citation file: each significant
/// line is a pair of arbitrary paper identifiers. Identifiers are assigned
/// dense node ids in order of first appearance; self-citations and
/// duplicate pairs are dropped.
pub fn load_citations(path: &Path) -> Result<Graph> {
    let text = read_to_string(path)?;
    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::ingestion(
                path,
                line_no,
                format!("expected two identifiers, found `{line}`"),
            ));
        };
        let mut intern = |name| {
            let next = ids.len() as NodeId;
            *ids.entry(name).or_insert(next)
        };
        let u = intern(a);
        let v = intern(b);
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(ids.len(), &edges, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn round_trips_a_graph() {
        let g = Graph::cycle(5);
        let f = tempfile::NamedTempFile::new().unwrap();
        save_graph(&g, f.path()).unwrap();
        let back = load_graph(f.path(), None).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let f = write_temp("# a triangle\n\nn=3  # three nodes\n0 1\n1 2 # last\n0 2\n");
        let g = load_graph(f.path(), None).unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn reports_line_numbers_on_bad_edges() {
        let f = write_temp("n=3\n0 1\n0 x\n");
        let err = load_graph(f.path(), None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(":3:"), "got: {msg}");
        assert!(msg.contains('x'), "got: {msg}");
    }

    #[test]
    fn rejects_missing_header() {
        let f = write_temp("0 1\n");
        let err = load_graph(f.path(), None).unwrap_err();
        assert!(err.to_string().contains("n=<count>"));
    }

    #[test]
    fn rejects_missing_file() {
        let err = load_graph(Path::new("/nonexistent/g.edges"), None).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn loads_labels() {
        let gf = write_temp("n=3\n0 1\n1 2\n");
        let lf = write_temp("# labels\n0 7\n2 7\n1 5\n");
        let g = load_graph(gf.path(), Some(lf.path())).unwrap();
        assert_eq!(g.labels(), Some(&[7, 5, 7][..]));
    }

    #[test]
    fn rejects_incomplete_labels() {
        let lf = write_temp("0 7\n1 5\n");
        let err = load_labels(lf.path(), 3).unwrap_err();
        assert!(err.to_string().contains("node 2"));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let lf = write_temp("0 7\n0 5\n");
        let err = load_labels(lf.path(), 2).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn citations_dedupe_and_densify() {
        let f = write_temp("1001 35\n35 1001\n1001 1001\n35 887\n");
        let g = load_citations(f.path()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        // 1001 -> 0, 35 -> 1, 887 -> 2.
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
    }
}
