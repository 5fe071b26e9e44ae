//! Plain-text readers and writers for point clouds, edge lists and matrices.
//!
//! All readers skip blank lines and lines starting with `#`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{graph_from_edges, Graph, PointCloud};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("`{}` is not a number", field.trim())))
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Numeric CSV rows. A first content row that does not parse as numbers is
/// treated as a header and skipped.
pub fn read_csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (k, (line_no, line)) in content_lines(text).enumerate() {
        let fields = split_fields(line);
        if k == 0 && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        rows.push(
            fields
                .iter()
                .map(|f| parse_f64(line_no, f))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(rows)
}

/// Writes rows as CSV with optional `#` comment lines and a header row.
pub fn write_csv_rows(comments: &[String], header: Option<&[&str]>, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    if let Some(h) = header {
        let _ = writeln!(out, "{}", h.join(","));
    }
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Point cloud with one point per row.
pub fn read_point_cloud(text: &str) -> Result<PointCloud> {
    PointCloud::new(read_csv_rows(text)?)
}

pub fn write_point_cloud(cloud: &PointCloud, comments: &[String]) -> String {
    let header: Vec<String> = (0..cloud.dim()).map(|d| format!("x{d}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = cloud.iter().map(<[f64]>::to_vec).collect();
    write_csv_rows(comments, Some(&header), &rows)
}

/// Edge list: a line `n <count>` followed by `i j [w]` lines with 0-based
/// node indices; the weight defaults to 1.
pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty edge list"))?;
    let mut head = first.split_whitespace();
    let n = match (head.next(), head.next(), head.next()) {
        (Some("n"), Some(count), None) => count
            .parse::<usize>()
            .map_err(|_| parse_error(first_no, format!("`{count}` is not a node count")))?,
        _ => return Err(parse_error(first_no, "expected `n <count>`")),
    };
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let fields = split_fields(line);
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(line_no, "expected `i j [w]`"));
        }
        let index = |f: &str| {
            f.parse::<usize>()
                .map_err(|_| parse_error(line_no, format!("`{f}` is not a node index")))
        };
        let w = match fields.get(2) {
            Some(f) => parse_f64(line_no, f)?,
            None => 1.0,
        };
        edges.push((index(fields[0])?, index(fields[1])?, w));
    }
    graph_from_edges(n, &edges)
}

pub fn write_edge_list(graph: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n {}", graph.n());
    for (i, j, w) in graph.edges() {
        let _ = writeln!(out, "{i} {j} {w}");
    }
    out
}

/// Dense matrix, one row per line.
pub fn read_matrix(text: &str) -> Result<DMatrix<f64>> {
    let rows = read_csv_rows(text)?;
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(k) = rows.iter().position(|r| r.len() != cols) {
        return Err(parse_error(
            k + 1,
            format!("row has {} entries, expected {cols}", rows[k].len()),
        ));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn write_matrix(m: &DMatrix<f64>, comments: &[String]) -> String {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    write_csv_rows(comments, None, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_cloud_round_trip() {
        let text = "# seed 4\nx,y\n0.5,0.25\n1e-3,0.75\n";
        let pc = read_point_cloud(text).unwrap();
        assert_eq!(pc.len(), 2);
        assert_eq!(pc.point(1), &[0.001, 0.75]);
        let back = read_point_cloud(&write_point_cloud(&pc, &["seed 4".into()])).unwrap();
        assert_eq!(back, pc);
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# path\nn 4\n0 1\n1 2 0.5\n2,3,2\n";
        let g = read_edge_list(text).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.adjacency()[(1, 2)], 0.5);
        let back = read_edge_list(&write_edge_list(&g, &[])).unwrap();
        assert_eq!(back.adjacency(), g.adjacency());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(read_edge_list("n 3\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_edge_list("0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_point_cloud("1,2\n3,z\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_edge_list("n 3\n0 5\n"), Err(Error::NodeOutOfRange { .. })));
    }

    #[test]
    fn matrix_round_trip() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, -0.5, 1.0 / 3.0, 0.0, 2.0, 1e-17]);
        assert_eq!(read_matrix(&write_matrix(&m, &["basis".into()])).unwrap(), m);
        assert!(matches!(read_matrix("1,2\n3\n"), Err(Error::Parse { .. })));
    }
}
