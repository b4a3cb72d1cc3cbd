//! Graph file formats: plain edge lists ("u v" per line, `#` comments)
//! and the DIMACS-like format ("p edge n m" header, "e u v" lines,
//! 1-indexed). Writing normalizes: sorted edges, no comments.

use std::path::Path;

use thiserror::Error;

use hedgetrim_core::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `p edge n m` header")]
    MissingHeader,
    #[error("unsupported format tag {0:?} (expected `edge`)")]
    UnsupportedFormat(String),
}

/// A recoverable oddity found while parsing, reported with its line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
}

impl GraphFormat {
    /// Guesses from the file extension; `.gr`, `.col` and `.dimacs` are
    /// DIMACS-like, everything else is an edge list.
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("gr") | Some("col") | Some("dimacs") => GraphFormat::Dimacs,
            _ => GraphFormat::EdgeList,
        }
    }
}

fn parse_endpoint(token: &str, line: usize) -> Result<usize, FormatError> {
    token.parse().map_err(|_| FormatError::Malformed {
        line,
        message: format!("expected a vertex id, got {token:?}"),
    })
}

/// Parses an edge list with 0-indexed ids; `#` starts a comment. The
/// vertex count is one past the largest id seen. Duplicate edges are
/// dropped with a warning.
pub fn parse_edge_list(text: &str) -> Result<(Graph, Vec<ParseWarning>), FormatError> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut warnings = Vec::new();
    let mut n = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(FormatError::Malformed {
                line,
                message: format!("expected `u v`, got {content:?}"),
            });
        };
        let u = parse_endpoint(a, line)?;
        let v = parse_endpoint(b, line)?;
        if u == v {
            return Err(FormatError::Malformed {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        n = n.max(u + 1).max(v + 1);
        let e = (u.min(v), u.max(v));
        if edges.contains(&e) {
            warnings.push(ParseWarning {
                line,
                message: format!("duplicate edge {} {}", e.0, e.1),
            });
        } else {
            edges.push(e);
        }
    }
    let graph = Graph::from_edges(n, &edges).expect("validated while parsing");
    Ok((graph, warnings))
}

/// Normalized edge-list rendering: one sorted "u v" line per edge.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the DIMACS-like format: `c` comment lines, one `p edge n m`
/// header, `e u v` lines with 1-indexed endpoints.
pub fn parse_dimacs(text: &str) -> Result<(Graph, Vec<ParseWarning>), FormatError> {
    let mut warnings = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("p ") {
            if header.is_some() {
                return Err(FormatError::Malformed {
                    line,
                    message: "second `p` header".to_string(),
                });
            }
            let mut parts = rest.split_whitespace();
            let tag = parts.next().unwrap_or("");
            if tag != "edge" {
                return Err(FormatError::UnsupportedFormat(tag.to_string()));
            }
            let n = parse_endpoint(parts.next().unwrap_or(""), line)?;
            let m = parse_endpoint(parts.next().unwrap_or(""), line)?;
            header = Some((n, m));
            continue;
        }
        if let Some(rest) = content.strip_prefix("e ") {
            let Some((n, _)) = header else {
                return Err(FormatError::MissingHeader);
            };
            let mut parts = rest.split_whitespace();
            let u = parse_endpoint(parts.next().unwrap_or(""), line)?;
            let v = parse_endpoint(parts.next().unwrap_or(""), line)?;
            if u == 0 || v == 0 || u > n || v > n {
                return Err(FormatError::Malformed {
                    line,
                    message: format!("endpoint out of range 1..={n}"),
                });
            }
            if u == v {
                return Err(FormatError::Malformed {
                    line,
                    message: format!("self-loop at vertex {u}"),
                });
            }
            let e = (u.min(v) - 1, u.max(v) - 1);
            if edges.contains(&e) {
                warnings.push(ParseWarning {
                    line,
                    message: format!("duplicate edge {} {}", u, v),
                });
            } else {
                edges.push(e);
            }
            continue;
        }
        return Err(FormatError::Malformed {
            line,
            message: format!("unrecognized line {content:?}"),
        });
    }
    let Some((n, m)) = header else {
        return Err(FormatError::MissingHeader);
    };
    if edges.len() != m {
        warnings.push(ParseWarning {
            line: 0,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let graph = Graph::from_edges(n, &edges).expect("validated while parsing");
    Ok((graph, warnings))
}

/// Normalized DIMACS rendering: header plus sorted 1-indexed edges.
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_graph(
    text: &str,
    format: GraphFormat,
) -> Result<(Graph, Vec<ParseWarning>), FormatError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
    }
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Dimacs => write_dimacs(g),
    }
}
