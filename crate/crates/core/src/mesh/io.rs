use std::fmt::Write as _;

use super::{build_mesh, AdmissibleMesh, RawFace, RawMesh};
use crate::error::{Result, TpfaError};
use crate::Point;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-empty line with comments removed, split into tokens.
    fn next_tokens(&mut self) -> Result<Vec<&'a str>> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let body = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok(toks);
            }
        }
        Err(self.err("unexpected end of file"))
    }

    fn err(&self, message: impl Into<String>) -> TpfaError {
        TpfaError::Parse { line: self.last, message: message.into() }
    }
}

fn num<T: std::str::FromStr>(lines: &Lines, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| lines.err(format!("cannot parse `{tok}`")))
}

/// Parse the plain-text mesh format (`d nv nc nf` header, then vertices,
/// cells with their points, then faces) and build the mesh.
pub fn read_mesh(text: &str) -> Result<AdmissibleMesh> {
    build_mesh(parse_raw(text)?)
}

pub(crate) fn parse_raw(text: &str) -> Result<RawMesh> {
    let mut lines = Lines::new(text);
    let head = lines.next_tokens()?;
    if head.len() != 4 {
        return Err(lines.err("header must be `d nv nc nf`"));
    }
    let dim: usize = num(&lines, head[0])?;
    let nv: usize = num(&lines, head[1])?;
    let nc: usize = num(&lines, head[2])?;
    let nf: usize = num(&lines, head[3])?;
    if dim != 2 && dim != 3 {
        return Err(lines.err(format!("dimension {dim} not supported")));
    }
    let coords = |lines: &Lines, toks: &[&str]| -> Result<Point> {
        let mut p = Point::zeros();
        for (i, t) in toks.iter().enumerate() {
            p[i] = num(lines, t)?;
        }
        Ok(p)
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let t = lines.next_tokens()?;
        if t.len() != dim {
            return Err(lines.err(format!("expected {dim} coordinates")));
        }
        vertices.push(coords(&lines, &t)?);
    }
    let mut cells = Vec::with_capacity(nc);
    let mut cell_points = Vec::with_capacity(nc);
    for _ in 0..nc {
        let t = lines.next_tokens()?;
        let k: usize = num(&lines, t[0])?;
        if t.len() != 1 + k + dim {
            return Err(lines.err(format!("cell line needs {} entries", 1 + k + dim)));
        }
        let vs = t[1..=k].iter().map(|s| num(&lines, s)).collect::<Result<Vec<usize>>>()?;
        if vs.iter().any(|&v| v >= nv) {
            return Err(lines.err("vertex index out of range"));
        }
        cells.push(vs);
        cell_points.push(coords(&lines, &t[1 + k..])?);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let t = lines.next_tokens()?;
        let m: usize = num(&lines, t[0])?;
        if t.len() != 3 + m {
            return Err(lines.err(format!("face line needs {} entries", 3 + m)));
        }
        let vs = t[1..=m].iter().map(|s| num(&lines, s)).collect::<Result<Vec<usize>>>()?;
        let c1: usize = num(&lines, t[m + 1])?;
        let c2: i64 = num(&lines, t[m + 2])?;
        if vs.iter().any(|&v| v >= nv) || c1 >= nc || c2 >= nc as i64 || c2 < -1 {
            return Err(lines.err("face index out of range"));
        }
        faces.push(RawFace { vertices: vs, cells: (c1, (c2 >= 0).then_some(c2 as usize)) });
    }
    if lines.next_tokens().is_ok() {
        return Err(lines.err("trailing data after the face list"));
    }
    Ok(RawMesh { dim, vertices, cells, cell_points, faces: Some(faces) })
}

/// Serialize in the format read by [`read_mesh`], with round-trip float output.
pub fn write_mesh(mesh: &AdmissibleMesh) -> String {
    let d = mesh.dim();
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {} {}", d, mesh.vertices().len(), mesh.n_cells(), mesh.n_faces());
    for v in mesh.vertices() {
        let row: Vec<String> = (0..d).map(|i| format!("{}", v[i])).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    for c in mesh.cells() {
        let mut row = vec![c.vertices.len().to_string()];
        row.extend(c.vertices.iter().map(|v| v.to_string()));
        row.extend((0..d).map(|i| format!("{}", c.point[i])));
        let _ = writeln!(s, "{}", row.join(" "));
    }
    for f in mesh.faces() {
        let mut row = vec![f.vertices.len().to_string()];
        row.extend(f.vertices.iter().map(|v| v.to_string()));
        row.push(f.cells.0.to_string());
        row.push(f.cells.1.map_or("-1".to_string(), |l| l.to_string()));
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_acute_triangular_grid, generate_square_grid};

    #[test]
    fn round_trip_reproduces_geometry() {
        for m in [generate_square_grid(2).unwrap(), generate_acute_triangular_grid(2).unwrap()] {
            let back = read_mesh(&write_mesh(&m)).unwrap();
            assert_eq!(back.n_cells(), m.n_cells());
            assert_eq!(back.n_faces(), m.n_faces());
            for (a, b) in m.cones().iter().zip(back.cones()) {
                assert!((a.distance - b.distance).abs() < 1e-14);
                assert!((a.normal - b.normal).norm() < 1e-14);
                assert!((a.measure - b.measure).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn malformed_header_reports_line() {
        let err = read_mesh("# comment\n\n2 4 1\n").unwrap_err();
        assert!(matches!(err, TpfaError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn comments_are_ignored() {
        let text = "2 4 1 4 # header\n0 0\n1 0\n1 1\n0 1\n4 0 1 2 3 0.5 0.5\n2 0 1 0 -1\n2 1 2 0 -1\n2 2 3 0 -1\n2 3 0 0 -1\n";
        let m = read_mesh(text).unwrap();
        assert_eq!(m.n_cells(), 1);
    }
}
