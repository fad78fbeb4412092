//! Reader for the 2D mesh files of the FVCA5 benchmark (`.typ1`).
//!
//! The files consist of keyword headers (`vertices`, `triangles`,
//! `quadrangles`, ..., `all edges`) each followed by a count line and that
//! many rows of 1-based indices. Triangles get their circumcenter as cell
//! point. Other polygons are accepted only when they are rectangles, which
//! get their center.

use super::{build_mesh, AdmissibleMesh, RawFace, RawMesh};
use crate::error::{Result, TpfaError};
use crate::Point;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Vertices,
    Cells,
    AllEdges,
    Skip,
}

fn classify(header: &str) -> Section {
    let h = header.to_ascii_lowercase();
    if h.starts_with("vert") {
        Section::Vertices
    } else if ["triang", "quadrang", "pentag", "hexag"].iter().any(|k| h.starts_with(k)) {
        Section::Cells
    } else if h.starts_with("all edges") {
        Section::AllEdges
    } else {
        Section::Skip
    }
}

fn cell_point(line: usize, pts: &[Point]) -> Result<Point> {
    match pts.len() {
        3 => {
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            let (bx, by, cx, cy) = (b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
            let d = 2.0 * (bx * cy - by * cx);
            let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
            Ok(Point::new(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d, 0.0))
        }
        4 => {
            let centre = pts.iter().sum::<Point>() / 4.0;
            let e0 = pts[1] - pts[0];
            let e1 = pts[2] - pts[1];
            if e0.dot(&e1).abs() > 1e-12 * e0.norm() * e1.norm() {
                return Err(TpfaError::Parse { line, message: "non-rectangular quadrangle".into() });
            }
            Ok(centre)
        }
        k => Err(TpfaError::Parse { line, message: format!("no cell point rule for {k}-gons") }),
    }
}

/// Parse an FVCA5 2D mesh file and build the admissible mesh.
pub fn read_fvca5(text: &str) -> Result<AdmissibleMesh> {
    let rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut vertices = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut cell_lines = Vec::new();
    let mut edges: Option<Vec<RawFace>> = None;
    let mut i = 0;
    let parse_err = |line: usize, m: &str| TpfaError::Parse { line, message: m.to_string() };
    while i < rows.len() {
        let (line, toks) = &rows[i];
        if toks[0].parse::<f64>().is_ok() {
            return Err(parse_err(*line, "expected a section keyword"));
        }
        let section = classify(&toks.join(" "));
        let (cline, ctoks) = rows.get(i + 1).ok_or_else(|| parse_err(*line, "missing count"))?;
        let count: usize = ctoks[0].parse().map_err(|_| parse_err(*cline, "bad count"))?;
        let body = rows.get(i + 2..i + 2 + count).ok_or_else(|| parse_err(*cline, "truncated section"))?;
        for (l, t) in body {
            let ints = || -> Result<Vec<usize>> {
                t.iter().map(|s| s.parse::<usize>().map_err(|_| parse_err(*l, "bad index"))).collect()
            };
            match section {
                Section::Vertices => {
                    if t.len() < 2 {
                        return Err(parse_err(*l, "vertex needs two coordinates"));
                    }
                    let x: f64 = t[0].parse().map_err(|_| parse_err(*l, "bad coordinate"))?;
                    let y: f64 = t[1].parse().map_err(|_| parse_err(*l, "bad coordinate"))?;
                    vertices.push(Point::new(x, y, 0.0));
                }
                Section::Cells => {
                    let v = ints()?;
                    if v.contains(&0) {
                        return Err(parse_err(*l, "indices are 1-based"));
                    }
                    cells.push(v.into_iter().map(|x| x - 1).collect());
                    cell_lines.push(*l);
                }
                Section::AllEdges => {
                    let v = ints()?;
                    if v.len() < 4 || v[0] == 0 || v[1] == 0 || v[2] == 0 {
                        return Err(parse_err(*l, "edge row must be `v1 v2 c1 c2`"));
                    }
                    let second = (v[3] > 0).then(|| v[3] - 1);
                    edges.get_or_insert_with(Vec::new).push(RawFace {
                        vertices: vec![v[0] - 1, v[1] - 1],
                        cells: (v[2] - 1, second),
                    });
                }
                Section::Skip => {}
            }
        }
        i += 2 + count;
    }
    let nv = vertices.len();
    let mut cell_points = Vec::with_capacity(cells.len());
    for (cell, &line) in cells.iter_mut().zip(&cell_lines) {
        if cell.iter().any(|&v| v >= nv) {
            return Err(parse_err(line, "vertex index out of range"));
        }
        let pts: Vec<Point> = cell.iter().map(|&v| vertices[v]).collect();
        let area2: f64 = (0..pts.len())
            .map(|k| {
                let (p, q) = (pts[k], pts[(k + 1) % pts.len()]);
                p.x * q.y - q.x * p.y
            })
            .sum();
        if area2 < 0.0 {
            cell.reverse();
        }
        cell_points.push(cell_point(line, &pts)?);
    }
    build_mesh(RawMesh { dim: 2, vertices, cells, cell_points, faces: edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_acute_triangles() {
        let text = "vertices\n4\n0 0\n1 0\n0.5 0.8\n0.5 -0.8\ntriangles\n2\n1 2 3\n1 4 2\nquadrangles\n0\nall edges\n5\n1 2 1 2\n2 3 1 0\n3 1 1 0\n1 4 2 0\n4 2 2 0\n";
        let m = read_fvca5(text).unwrap();
        assert_eq!((m.n_cells(), m.vertices().len(), m.n_faces()), (2, 4, 5));
        m.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let err = read_fvca5("vertices\n3\n0 0\n1 0\n").unwrap_err();
        assert!(matches!(err, TpfaError::Parse { .. }));
    }
}
