use std::collections::HashMap;

use super::{build_mesh, AdmissibleMesh, RawMesh};
use crate::error::{Result, TpfaError};
use crate::Point;

/// Uniform `n x n` square grid on the unit square, cell centers as points.
pub fn generate_square_grid(n: usize) -> Result<AdmissibleMesh> {
    if n == 0 {
        return Err(TpfaError::Config("square grid needs n >= 1".into()));
    }
    let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    generate_tensor_grid(&xs, &xs, &mid, &mid)
}

/// Rectilinear grid with breakpoints `xs`, `ys` and cell points on the tensor
/// lattice `px x py`. Any choice with `xs[i] < px[i] < xs[i+1]` (and likewise in
/// `y`) is admissible, because neighbouring points share a coordinate.
pub fn generate_tensor_grid(xs: &[f64], ys: &[f64], px: &[f64], py: &[f64]) -> Result<AdmissibleMesh> {
    let (nx, ny) = (xs.len().saturating_sub(1), ys.len().saturating_sub(1));
    if nx == 0 || ny == 0 || px.len() != nx || py.len() != ny {
        return Err(TpfaError::DataMisalignment("tensor grid breakpoints and points disagree".into()));
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for &y in ys {
        for &x in xs {
            vertices.push(Point::new(x, y, 0.0));
        }
    }
    let mut cells = Vec::with_capacity(nx * ny);
    let mut cell_points = Vec::with_capacity(nx * ny);
    for (j, &y) in py.iter().enumerate().take(ny) {
        for (i, &x) in px.iter().enumerate().take(nx) {
            cells.push(vec![vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
            cell_points.push(Point::new(x, y, 0.0));
        }
    }
    build_mesh(RawMesh { dim: 2, vertices, cells, cell_points, faces: None })
}

// Acute triangulation of the unit square, coordinates in hundredths. Every
// angle is below 74 degrees, so circumcenters sit well inside the triangles.
const PATTERN_POINTS: [(i64, i64); 12] = [
    (0, 0),
    (100, 0),
    (100, 100),
    (0, 100),
    (45, 0),
    (100, 51),
    (47, 100),
    (0, 45),
    (33, 55),
    (29, 30),
    (67, 37),
    (69, 64),
];
const PATTERN_TRIANGLES: [[usize; 3]; 14] = [
    [5, 10, 1],
    [7, 8, 3],
    [10, 4, 1],
    [8, 6, 3],
    [8, 9, 10],
    [9, 4, 10],
    [4, 9, 0],
    [9, 7, 0],
    [7, 9, 8],
    [11, 8, 10],
    [11, 6, 8],
    [5, 11, 10],
    [11, 5, 2],
    [6, 11, 2],
];

/// The base acute pattern: vertex coordinates and triangles.
pub fn acute_pattern() -> (Vec<[f64; 2]>, Vec<[usize; 3]>) {
    let pts = PATTERN_POINTS.iter().map(|&(x, y)| [x as f64 / 100.0, y as f64 / 100.0]).collect();
    (pts, PATTERN_TRIANGLES.to_vec())
}

fn circumcenter(a: &Point, b: &Point, c: &Point) -> Point {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    Point::new(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d, 0.0)
}

fn strictly_inside(x: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let orient = |p: &Point, q: &Point, r: &Point| (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    let s = orient(a, b, c).signum();
    let eps = 1e-12 * orient(a, b, c).abs();
    s * orient(a, b, x) > eps && s * orient(b, c, x) > eps && s * orient(c, a, x) > eps
}

/// Structured acute triangulation of the unit square.
///
/// The square is cut into `n x n` tiles. Each tile carries the 14-triangle
/// acute pattern, mirrored across tile edges so that neighbouring tiles match
/// vertex for vertex. Mirroring keeps circumcenters mirrored too, so the line
/// between two circumcenters across a tile edge stays orthogonal to it.
/// Cell points are the circumcenters; refinement `n -> 2n` halves `h`.
pub fn generate_acute_triangular_grid(n: usize) -> Result<AdmissibleMesh> {
    if n == 0 {
        return Err(TpfaError::Config("triangular grid needs n >= 1".into()));
    }
    let scale = 100 * n as i64;
    let mut ids: HashMap<(i64, i64), usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut cells = Vec::with_capacity(14 * n * n);
    let mut cell_points = Vec::with_capacity(14 * n * n);
    for j in 0..n as i64 {
        for i in 0..n as i64 {
            let local: Vec<usize> = PATTERN_POINTS
                .iter()
                .map(|&(x, y)| {
                    let x = if i % 2 == 1 { 100 - x } else { x };
                    let y = if j % 2 == 1 { 100 - y } else { y };
                    let key = (100 * i + x, 100 * j + y);
                    *ids.entry(key).or_insert_with(|| {
                        vertices.push(Point::new(key.0 as f64 / scale as f64, key.1 as f64 / scale as f64, 0.0));
                        vertices.len() - 1
                    })
                })
                .collect();
            for t in PATTERN_TRIANGLES {
                let mut tri = [local[t[0]], local[t[1]], local[t[2]]];
                let (a, b, c) = (vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
                if (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) < 0.0 {
                    tri.swap(1, 2);
                }
                let cc = circumcenter(&a, &b, &c);
                if !strictly_inside(&cc, &a, &b, &c) {
                    return Err(TpfaError::NonAcutePattern { triangle: cells.len() });
                }
                cells.push(tri.to_vec());
                cell_points.push(cc);
            }
        }
    }
    build_mesh(RawMesh { dim: 2, vertices, cells, cell_points, faces: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_is_acute_and_covers_the_square() {
        let (pts, tris) = acute_pattern();
        let mut area = 0.0;
        for t in &tris {
            let p: Vec<[f64; 2]> = t.iter().map(|&i| pts[i]).collect();
            for k in 0..3 {
                let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                assert!(u[0] * v[0] + u[1] * v[1] > 0.0, "obtuse or right angle in {t:?}");
            }
            area += 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0])).abs();
        }
        assert!((area - 1.0).abs() < 1e-14);
    }

    #[test]
    fn triangular_grid_levels() {
        let m1 = generate_acute_triangular_grid(1).unwrap();
        let m2 = generate_acute_triangular_grid(2).unwrap();
        let m4 = generate_acute_triangular_grid(4).unwrap();
        assert_eq!(m2.n_cells(), 56);
        for m in [&m1, &m2, &m4] {
            m.check_invariants(1e-12).unwrap();
            assert!((m.domain_measure() - 1.0).abs() < 1e-13);
        }
        let (q2, q4) = (m2.quality(), m4.quality());
        assert!((q2.h / q4.h - 2.0).abs() < 1e-12);
        assert!((q2.theta - q4.theta).abs() < 1e-12);
    }

    #[test]
    fn square_grid_counts() {
        let m = generate_square_grid(1).unwrap();
        assert_eq!(m.n_cells(), 1);
        assert_eq!(m.n_faces(), 4);
        assert!(m.faces().iter().all(|f| f.is_boundary()));
        let m = generate_square_grid(4).unwrap();
        let total: f64 = m.cells().iter().map(|c| c.measure).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
