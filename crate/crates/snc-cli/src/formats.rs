//! Text file formats: networks, kernel tables, and matrices.
//!
//! All three formats are line-oriented, hand-auditable, and canonical:
//! emitting a parsed value reproduces the canonical bytes exactly.
//!
//! Network files:
//! ```text
//! field 5
//! node s v1 t1
//! source s
//! sink t1
//! edge e1 s v1
//! edge e2 v1 t1
//! ```
//!
//! Kernel files hold one block per non-sink node, source first:
//! ```text
//! kernel s 2 1
//! 1
//! 0
//! ```
//!
//! Matrix files carry an explicit shape so zero-dimensional matrices stay
//! representable:
//! ```text
//! matrix 2 2
//! 1 0
//! 0 1
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use snc::{FieldSpec, LinearNetworkCode, Matrix, Network, NetworkError, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("{0}")]
    Validation(#[from] NetworkError),
    #[error("field error: {0}")]
    Field(#[from] snc::FieldError),
}

fn syntax(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, reason: reason.into() }
}

/// Numbered, comment-stripped, nonblank lines.
fn logical_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            None
        } else {
            Some((i + 1, stripped))
        }
    })
}

fn parse_scalar(line: usize, token: &str) -> Result<Scalar, ParseError> {
    token.parse::<Scalar>().map_err(|_| syntax(line, format!("invalid number `{token}`")))
}

/// Parses a network file into a validated [`Network`] plus its field.
pub fn parse_network(text: &str) -> Result<(Arc<Network>, FieldSpec), ParseError> {
    let mut field: Option<(usize, u64)> = None;
    let mut nodes: Vec<String> = Vec::new();
    let mut source: Option<(usize, String)> = None;
    let mut sinks: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();

    for (line, content) in logical_lines(text) {
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().expect("nonblank line has a token");
        let rest: Vec<&str> = tokens.collect();
        match directive {
            "field" => {
                if field.is_some() {
                    return Err(syntax(line, "duplicate field directive"));
                }
                let [p] = rest.as_slice() else {
                    return Err(syntax(line, "expected: field <prime>"));
                };
                field = Some((line, parse_scalar(line, p)?));
            }
            "node" => {
                if rest.is_empty() {
                    return Err(syntax(line, "expected: node <id>..."));
                }
                nodes.extend(rest.iter().map(|s| s.to_string()));
            }
            "source" => {
                if source.is_some() {
                    return Err(syntax(line, "duplicate source directive"));
                }
                let [id] = rest.as_slice() else {
                    return Err(syntax(line, "expected: source <id>"));
                };
                source = Some((line, id.to_string()));
            }
            "sink" => {
                if rest.is_empty() {
                    return Err(syntax(line, "expected: sink <id>..."));
                }
                sinks.extend(rest.iter().map(|s| s.to_string()));
            }
            "edge" => {
                let [id, tail, head] = rest.as_slice() else {
                    return Err(syntax(line, "expected: edge <id> <tail> <head>"));
                };
                edges.push((id.to_string(), tail.to_string(), head.to_string()));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    let (field_line, p) = field.ok_or_else(|| syntax(0, "missing field directive"))?;
    let field = FieldSpec::new(p).map_err(|e| syntax(field_line, e.to_string()))?;
    let (_, source) = source.ok_or_else(|| syntax(0, "missing source directive"))?;
    let network = Network::new(nodes, edges, &source, &sinks)?;
    Ok((Arc::new(network), field))
}

/// Canonical network emission: one node line, one sink line, edges in
/// canonical order.
#[cfg_attr(not(test), allow(dead_code))]
pub fn emit_network(net: &Network, field: FieldSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", field.order());
    let node_ids: Vec<&str> = (0..net.node_count()).map(|v| net.node_id(v)).collect();
    let _ = writeln!(out, "node {}", node_ids.join(" "));
    let _ = writeln!(out, "source {}", net.node_id(net.source()));
    let sink_ids: Vec<&str> = net.sinks().map(|t| net.node_id(t)).collect();
    let _ = writeln!(out, "sink {}", sink_ids.join(" "));
    for e in 0..net.edge_count() {
        let edge = net.edge(e);
        let _ = writeln!(out, "edge {} {} {}", edge.id, net.node_id(edge.tail), net.node_id(edge.head));
    }
    out
}

/// Parses a kernel file against a network. The code dimension is the row
/// count of the source block.
pub fn parse_kernels(
    text: &str,
    net: &Arc<Network>,
    field: FieldSpec,
) -> Result<LinearNetworkCode, ParseError> {
    let mut lines = logical_lines(text).peekable();
    let mut table: BTreeMap<String, Matrix> = BTreeMap::new();
    let mut source_rows: Option<usize> = None;
    while let Some((line, content)) = lines.next() {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let ["kernel", node, rows, cols] = tokens.as_slice() else {
            return Err(syntax(line, "expected: kernel <node> <rows> <cols>"));
        };
        let rows: usize =
            rows.parse().map_err(|_| syntax(line, format!("invalid row count `{rows}`")))?;
        let cols: usize =
            cols.parse().map_err(|_| syntax(line, format!("invalid column count `{cols}`")))?;
        let mut data = Vec::with_capacity(rows * cols);
        if cols > 0 {
            for _ in 0..rows {
                let Some((row_line, row)) = lines.next() else {
                    return Err(syntax(line, format!("kernel block for `{node}` is truncated")));
                };
                let values: Vec<&str> = row.split_whitespace().collect();
                if values.len() != cols {
                    return Err(syntax(
                        row_line,
                        format!("expected {cols} entries, found {}", values.len()),
                    ));
                }
                for v in values {
                    data.push(parse_scalar(row_line, v)?);
                }
            }
        }
        let matrix = Matrix::new(rows, cols, data, field)
            .map_err(|e| syntax(line, e.to_string()))?;
        if table.insert(node.to_string(), matrix).is_some() {
            return Err(syntax(line, format!("duplicate kernel block for `{node}`")));
        }
        if net.node_index(node) == Some(net.source()) {
            source_rows = Some(rows);
        }
    }
    let n = source_rows.ok_or_else(|| syntax(0, "missing kernel block for the source node"))?;
    LinearNetworkCode::load_kernels(Arc::clone(net), n, field, &table)
        .map_err(|e| syntax(0, e.to_string()))
}

/// Canonical kernel emission: source block first, then the remaining
/// non-sink nodes in canonical node order.
pub fn emit_kernels(code: &LinearNetworkCode) -> String {
    let net = code.network();
    let mut order: Vec<usize> = vec![net.source()];
    order.extend((0..net.node_count()).filter(|&v| v != net.source() && !net.is_sink(v)));
    let mut out = String::new();
    for v in order {
        let kernel = code.kernel(v).expect("every non-sink node has a kernel");
        let _ = writeln!(out, "kernel {} {} {}", net.node_id(v), kernel.rows(), kernel.cols());
        if kernel.cols() > 0 {
            for r in 0..kernel.rows() {
                let row: Vec<String> = kernel.row(r).iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

/// Parses a matrix file (`matrix <rows> <cols>` then row lines).
pub fn parse_matrix(text: &str, field: FieldSpec) -> Result<Matrix, ParseError> {
    let mut lines = logical_lines(text);
    let Some((header_line, header)) = lines.next() else {
        return Err(syntax(0, "missing matrix header"));
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let ["matrix", rows, cols] = tokens.as_slice() else {
        return Err(syntax(header_line, "expected: matrix <rows> <cols>"));
    };
    let rows: usize =
        rows.parse().map_err(|_| syntax(header_line, format!("invalid row count `{rows}`")))?;
    let cols: usize =
        cols.parse().map_err(|_| syntax(header_line, format!("invalid column count `{cols}`")))?;
    let mut data = Vec::with_capacity(rows * cols);
    if cols > 0 {
        for _ in 0..rows {
            let Some((row_line, row)) = lines.next() else {
                return Err(syntax(header_line, "matrix is truncated"));
            };
            let values: Vec<&str> = row.split_whitespace().collect();
            if values.len() != cols {
                return Err(syntax(row_line, format!("expected {cols} entries, found {}", values.len())));
            }
            for v in values {
                data.push(parse_scalar(row_line, v)?);
            }
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "trailing content after the matrix"));
    }
    Matrix::new(rows, cols, data, field).map_err(|e| syntax(header_line, e.to_string()))
}

pub fn emit_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "matrix {} {}", m.rows(), m.cols());
    if m.cols() > 0 {
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}
