//! Admissible finite-volume meshes: construction, validation and cached
//! cone geometry.

mod fvca;
mod generate;
mod io;

use std::collections::HashMap;
use std::ops::Range;

use nalgebra::Matrix3;

use crate::error::{Result, TpfaError};
use crate::Point;

pub use fvca::read_fvca5;
pub use generate::{
    acute_pattern, generate_acute_triangular_grid, generate_square_grid, generate_tensor_grid,
};
pub use io::{read_mesh, write_mesh};

/// Tolerance on `cos(angle(x_L - x_K, n_{K,sigma}))` for interior faces.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Relative margin (times the cell diameter) for strict interiority of `x_K`.
pub const INTERIOR_MARGIN: f64 = 1e-12;

/// A face as supplied to [`build_mesh`]: its vertices and the cells it bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFace {
    pub vertices: Vec<usize>,
    pub cells: (usize, Option<usize>),
}

/// Unvalidated mesh description.
///
/// In 2D, `faces` may be omitted and edges are derived from the cell vertex
/// cycles. In 3D the faces must be given.
#[derive(Debug, Clone, Default)]
pub struct RawMesh {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub cells: Vec<Vec<usize>>,
    pub cell_points: Vec<Point>,
    pub faces: Option<Vec<RawFace>>,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub vertices: Vec<usize>,
    /// The cell point `x_K`.
    pub point: Point,
    pub measure: f64,
    pub diameter: f64,
    /// Cones `D_{K,sigma}` of this cell, as a range into [`AdmissibleMesh::cones`].
    pub cones: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub measure: f64,
    /// Center of gravity `x̄_sigma`.
    pub centroid: Point,
    pub cells: (usize, Option<usize>),
    pub cones: (usize, Option<usize>),
    /// Position in the interior-face numbering, `None` on the boundary.
    pub interior: Option<usize>,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.cells.1.is_none()
    }
}

/// Half-diamond `D_{K,sigma}` with apex `x_K` and base `sigma`.
#[derive(Debug, Clone)]
pub struct Cone {
    pub cell: usize,
    pub face: usize,
    /// Unit normal to the face, outward to the cell.
    pub normal: Point,
    /// Orthogonal distance `d_{K,sigma}` from `x_K` to the face.
    pub distance: f64,
    /// `|D_{K,sigma}| = |sigma| d_{K,sigma} / d`.
    pub measure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshQuality {
    /// Largest cell diameter.
    pub h: f64,
    /// Smallest ratio `d_{K,sigma} / diam(K)`.
    pub theta: f64,
}

/// Validated, immutable admissible mesh with all geometry cached.
#[derive(Debug, Clone)]
pub struct AdmissibleMesh {
    dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Cell>,
    faces: Vec<Face>,
    cones: Vec<Cone>,
    interior_faces: Vec<usize>,
    domain_measure: f64,
    domain_diameter: f64,
}

impl AdmissibleMesh {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }
    /// Face indices of the interior faces, in interior numbering order.
    pub fn interior_faces(&self) -> &[usize] {
        &self.interior_faces
    }
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn n_interior_faces(&self) -> usize {
        self.interior_faces.len()
    }
    pub fn n_cones(&self) -> usize {
        self.cones.len()
    }
    /// `|Omega|`, from the divergence theorem on the boundary faces.
    pub fn domain_measure(&self) -> f64 {
        self.domain_measure
    }
    /// Exact diameter of the vertex set.
    pub fn domain_diameter(&self) -> f64 {
        self.domain_diameter
    }

    /// `x_sigma`: where the orthogonal line through `x_K` meets the face
    /// hyperplane. For interior faces this lies on `[x_K, x_L]`.
    pub fn face_point(&self, cone: usize) -> Point {
        let c = &self.cones[cone];
        self.cells[c.cell].point + c.normal * c.distance
    }

    /// Coordinates of the vertices of `cell`, in storage order.
    pub fn cell_polygon(&self, cell: usize) -> Vec<Point> {
        self.cells[cell].vertices.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn quality(&self) -> MeshQuality {
        let h = self.cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
        let theta = self
            .cones
            .iter()
            .map(|c| c.distance / self.cells[c.cell].diameter)
            .fold(f64::INFINITY, f64::min);
        MeshQuality { h, theta }
    }

    /// `(1/|K|) sum_sigma |sigma| (x̄_sigma - x_K) n^T`, which equals the
    /// identity on every cell (top-left `d x d` block).
    pub fn geometric_identity(&self, cell: usize) -> Matrix3<f64> {
        let k = &self.cells[cell];
        let mut m = Matrix3::zeros();
        for c in &self.cones[k.cones.clone()] {
            let f = &self.faces[c.face];
            m += (f.centroid - k.point) * c.normal.transpose() * f.measure;
        }
        m / k.measure
    }

    /// Re-check every structural invariant; used by tests and `mesh-info`.
    pub fn check_invariants(&self, rel_tol: f64) -> Result<()> {
        let total: f64 = self.cells.iter().map(|c| c.measure).sum();
        if (total - self.domain_measure).abs() > rel_tol * self.domain_measure {
            return Err(TpfaError::DegenerateGeometry(format!(
                "cell measures sum to {total}, domain measure is {}",
                self.domain_measure
            )));
        }
        for (k, cell) in self.cells.iter().enumerate() {
            let s: f64 = self.cones[cell.cones.clone()].iter().map(|c| c.measure).sum();
            if (s - cell.measure).abs() > rel_tol * cell.measure {
                return Err(TpfaError::DegenerateGeometry(format!(
                    "cones of cell {k} sum to {s}, cell measure is {}",
                    cell.measure
                )));
            }
            let m = self.geometric_identity(k);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let target = if i == j { 1.0 } else { 0.0 };
                    if (m[(i, j)] - target).abs() > 1e-12 {
                        return Err(TpfaError::DegenerateGeometry(format!(
                            "geometric identity fails on cell {k}: entry ({i},{j}) = {}",
                            m[(i, j)]
                        )));
                    }
                }
            }
        }
        for (fi, f) in self.faces.iter().enumerate() {
            if let (Some(a), Some(b)) = (Some(f.cones.0), f.cones.1) {
                if self.cones[a].normal + self.cones[b].normal != Point::zeros() {
                    return Err(TpfaError::OrthogonalityViolation {
                        face: fi,
                        detail: "cone normals are not opposite".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn unit_normal_2d(a: &Point, b: &Point) -> Point {
    let t = b - a;
    Point::new(t.y, -t.x, 0.0).normalize()
}

/// Area, centroid and unit normal (unoriented) of a planar polygon in 3D.
fn polygon_geometry_3d(pts: &[Point]) -> (f64, Point, Point) {
    let o = pts[0];
    let mut area_vec = Point::zeros();
    let mut centroid = Point::zeros();
    let mut area = 0.0;
    for i in 1..pts.len() - 1 {
        let cr = (pts[i] - o).cross(&(pts[i + 1] - o));
        let a = 0.5 * cr.norm();
        area_vec += cr;
        centroid += (o + pts[i] + pts[i + 1]) / 3.0 * a;
        area += a;
    }
    let centroid = if area > 0.0 { centroid / area } else { o };
    let n = if area_vec.norm() > 0.0 { area_vec.normalize() } else { Point::zeros() };
    (area, centroid, n)
}

fn point_set_diameter(pts: &[Point]) -> f64 {
    let mut d2: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d2 = d2.max((pts[i] - pts[j]).norm_squared());
        }
    }
    d2.sqrt()
}

/// Derive 2D edges from cell vertex cycles, numbering faces in order of first
/// appearance.
fn derive_edges(cells: &[Vec<usize>]) -> Result<Vec<RawFace>> {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut faces: Vec<RawFace> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for (k, cell) in cells.iter().enumerate() {
        let n = cell.len();
        for i in 0..n {
            let (a, b) = (cell[i], cell[(i + 1) % n]);
            let key = (a.min(b), a.max(b));
            match index.get(&key) {
                Some(&f) => {
                    counts[f] += 1;
                    if faces[f].cells.1.is_none() {
                        faces[f].cells.1 = Some(k);
                    }
                }
                None => {
                    index.insert(key, faces.len());
                    faces.push(RawFace { vertices: vec![a, b], cells: (k, None) });
                    counts.push(1);
                }
            }
        }
    }
    if let Some((f, &c)) = counts.iter().enumerate().find(|(_, &c)| c > 2) {
        return Err(TpfaError::NonConformity { face: f, count: c });
    }
    Ok(faces)
}

/// Face list per cell, in cell order (2D: edge order of the vertex cycle).
fn cell_face_lists(raw: &RawMesh, faces: &[RawFace]) -> Result<Vec<Vec<usize>>> {
    let nc = raw.cells.len();
    let mut lists = vec![Vec::new(); nc];
    if raw.dim == 2 {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, face) in faces.iter().enumerate() {
            if face.vertices.len() != 2 {
                return Err(TpfaError::DegenerateGeometry(format!(
                    "2D face {f} has {} vertices",
                    face.vertices.len()
                )));
            }
            let (a, b) = (face.vertices[0], face.vertices[1]);
            if index.insert((a.min(b), a.max(b)), f).is_some() {
                return Err(TpfaError::NonConformity { face: f, count: 3 });
            }
        }
        let mut seen = vec![0usize; faces.len()];
        for (k, cell) in raw.cells.iter().enumerate() {
            let n = cell.len();
            for i in 0..n {
                let (a, b) = (cell[i], cell[(i + 1) % n]);
                let f = *index.get(&(a.min(b), a.max(b))).ok_or(
                    TpfaError::NonConformity { face: usize::MAX, count: 0 },
                )?;
                let fc = faces[f].cells;
                if fc.0 != k && fc.1 != Some(k) {
                    return Err(TpfaError::NonConformity { face: f, count: seen[f] + 1 });
                }
                seen[f] += 1;
                lists[k].push(f);
            }
        }
        for (f, face) in faces.iter().enumerate() {
            let expected = if face.cells.1.is_some() { 2 } else { 1 };
            if seen[f] != expected {
                return Err(TpfaError::NonConformity { face: f, count: seen[f] });
            }
        }
    } else {
        for (f, face) in faces.iter().enumerate() {
            lists[face.cells.0].push(f);
            if let Some(l) = face.cells.1 {
                if l == face.cells.0 {
                    return Err(TpfaError::NonConformity { face: f, count: 2 });
                }
                lists[l].push(f);
            }
        }
    }
    Ok(lists)
}

/// Validate a raw description and compute all cached geometry.
///
/// Checks run in this order: conformity, degeneracy, interiority of the cell
/// points, then orthogonality.
pub fn build_mesh(raw: RawMesh) -> Result<AdmissibleMesh> {
    let dim = raw.dim;
    if dim != 2 && dim != 3 {
        return Err(TpfaError::UnsupportedDimension(dim));
    }
    let nv = raw.vertices.len();
    let nc = raw.cells.len();
    if raw.cell_points.len() != nc {
        return Err(TpfaError::DataMisalignment(format!(
            "{} cell points for {nc} cells",
            raw.cell_points.len()
        )));
    }
    for (k, cell) in raw.cells.iter().enumerate() {
        if cell.len() < dim + 1 || cell.iter().any(|&v| v >= nv) {
            return Err(TpfaError::DegenerateGeometry(format!("cell {k} has an invalid vertex list")));
        }
    }
    let faces_raw = match &raw.faces {
        Some(f) => f.clone(),
        None if dim == 2 => derive_edges(&raw.cells)?,
        None => {
            return Err(TpfaError::Config("3D meshes need an explicit face list".into()));
        }
    };
    for (f, face) in faces_raw.iter().enumerate() {
        if face.vertices.iter().any(|&v| v >= nv)
            || face.cells.0 >= nc
            || face.cells.1.is_some_and(|l| l >= nc)
        {
            return Err(TpfaError::NonConformity { face: f, count: 0 });
        }
    }
    let lists = cell_face_lists(&raw, &faces_raw)?;
    let v = &raw.vertices;

    // Face geometry.
    let mut face_geo = Vec::with_capacity(faces_raw.len());
    for (f, face) in faces_raw.iter().enumerate() {
        let pts: Vec<Point> = face.vertices.iter().map(|&i| v[i]).collect();
        let (measure, centroid, normal) = if dim == 2 {
            let m = (pts[1] - pts[0]).norm();
            let n = if m > 0.0 { unit_normal_2d(&pts[0], &pts[1]) } else { Point::zeros() };
            (m, (pts[0] + pts[1]) * 0.5, n)
        } else {
            polygon_geometry_3d(&pts)
        };
        if !(measure > 0.0) {
            return Err(TpfaError::DegenerateGeometry(format!("face {f} has zero measure")));
        }
        face_geo.push((measure, centroid, normal));
    }

    // Cell measures and diameters.
    let mut measures = Vec::with_capacity(nc);
    let mut diameters = Vec::with_capacity(nc);
    for (k, cell) in raw.cells.iter().enumerate() {
        let pts: Vec<Point> = cell.iter().map(|&i| v[i]).collect();
        let centre = pts.iter().sum::<Point>() / pts.len() as f64;
        let measure = if dim == 2 {
            let n = pts.len();
            let mut s = 0.0;
            let mut sign = 0.0;
            for i in 0..n {
                let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
                s += a.x * b.y - b.x * a.y;
                let cr = (b - a).cross(&(c - b)).z;
                if cr.abs() > 1e-14 * (b - a).norm() * (c - b).norm() {
                    if sign == 0.0 {
                        sign = cr.signum();
                    } else if cr.signum() != sign {
                        return Err(TpfaError::DegenerateGeometry(format!("cell {k} is not convex")));
                    }
                }
            }
            (0.5 * s).abs()
        } else {
            lists[k]
                .iter()
                .map(|&f| {
                    let (m, c, n) = face_geo[f];
                    let n = if (c - centre).dot(&n) < 0.0 { -n } else { n };
                    m * (c - centre).dot(&n)
                })
                .sum::<f64>()
                / 3.0
        };
        let diameter = point_set_diameter(&pts);
        if !(measure > 1e-14 * diameter.powi(dim as i32)) {
            return Err(TpfaError::DegenerateGeometry(format!("cell {k} has zero measure")));
        }
        measures.push(measure);
        diameters.push(diameter);
    }

    // Cones, with normals oriented away from each cell's vertex average.
    let mut cones: Vec<Cone> = Vec::new();
    let mut cells = Vec::with_capacity(nc);
    let mut face_cones: Vec<(usize, Option<usize>)> = vec![(usize::MAX, None); faces_raw.len()];
    for (k, cell) in raw.cells.iter().enumerate() {
        let centre = cell.iter().map(|&i| v[i]).sum::<Point>() / cell.len() as f64;
        let xk = raw.cell_points[k];
        let start = cones.len();
        for &f in &lists[k] {
            let (m, c, n) = face_geo[f];
            let mut normal = if (c - centre).dot(&n) < 0.0 { -n } else { n };
            if faces_raw[f].cells.1 == Some(k) && face_cones[f].0 != usize::MAX {
                // Second cell of an interior face: exact opposite of the first
                // cell's normal, so n_K + n_L = 0 holds bitwise.
                normal = -cones[face_cones[f].0].normal;
            }
            let distance = (c - xk).dot(&normal);
            if !(distance > INTERIOR_MARGIN * diameters[k]) {
                return Err(TpfaError::PointOutsideCell { cell: k });
            }
            let idx = cones.len();
            if faces_raw[f].cells.0 == k {
                face_cones[f].0 = idx;
            } else {
                face_cones[f].1 = Some(idx);
            }
            cones.push(Cone { cell: k, face: f, normal, distance, measure: m * distance / dim as f64 });
        }
        cells.push(Cell {
            vertices: cell.clone(),
            point: xk,
            measure: measures[k],
            diameter: diameters[k],
            cones: start..cones.len(),
        });
    }
    // The second cell's cone may predate the first cell's one.
    for (f, fc) in face_cones.iter().enumerate() {
        if let Some(b) = fc.1 {
            let a = fc.0;
            let na = cones[a].normal;
            if cones[b].normal != -na {
                let xk = cells[cones[b].cell].point;
                cones[b].normal = -na;
                cones[b].distance = (face_geo[f].1 - xk).dot(&cones[b].normal);
                cones[b].measure = face_geo[f].0 * cones[b].distance / dim as f64;
                if !(cones[b].distance > INTERIOR_MARGIN * cells[cones[b].cell].diameter) {
                    return Err(TpfaError::PointOutsideCell { cell: cones[b].cell });
                }
            }
        }
    }

    // Orthogonality, interior and boundary.
    let mut faces = Vec::with_capacity(faces_raw.len());
    let mut interior_faces = Vec::new();
    for (f, raw_face) in faces_raw.into_iter().enumerate() {
        let (measure, centroid, _) = face_geo[f];
        let (ca, cb) = face_cones[f];
        let k = raw_face.cells.0;
        match raw_face.cells.1 {
            Some(l) => {
                let d = cells[l].point - cells[k].point;
                let cosine = d.dot(&cones[ca].normal) / d.norm();
                if !(cosine >= 1.0 - ORTHOGONALITY_TOL) {
                    return Err(TpfaError::OrthogonalityViolation {
                        face: f,
                        detail: format!("cells {k} and {l}, cos = {cosine}"),
                    });
                }
            }
            None => {
                let foot = cells[k].point + cones[ca].normal * cones[ca].distance;
                if !foot_inside_face(dim, &foot, &raw_face.vertices, v, &cones[ca].normal) {
                    return Err(TpfaError::OrthogonalityViolation {
                        face: f,
                        detail: format!("orthogonal line through x_{k} misses the boundary face"),
                    });
                }
            }
        }
        let interior = raw_face.cells.1.map(|_| {
            interior_faces.push(f);
            interior_faces.len() - 1
        });
        faces.push(Face {
            vertices: raw_face.vertices,
            measure,
            centroid,
            cells: raw_face.cells,
            cones: (ca, cb),
            interior,
        });
    }

    let domain_measure = faces
        .iter()
        .filter(|f| f.is_boundary())
        .map(|f| f.measure * f.centroid.dot(&cones[f.cones.0].normal))
        .sum::<f64>()
        / dim as f64;
    let mut bverts: Vec<usize> =
        faces.iter().filter(|f| f.is_boundary()).flat_map(|f| f.vertices.iter().copied()).collect();
    bverts.sort_unstable();
    bverts.dedup();
    let bpts: Vec<Point> = bverts.iter().map(|&i| v[i]).collect();
    let domain_diameter = point_set_diameter(&bpts);

    Ok(AdmissibleMesh {
        dim,
        vertices: raw.vertices,
        cells,
        faces,
        cones,
        interior_faces,
        domain_measure,
        domain_diameter,
    })
}

fn foot_inside_face(dim: usize, foot: &Point, verts: &[usize], v: &[Point], normal: &Point) -> bool {
    let pts: Vec<Point> = verts.iter().map(|&i| v[i]).collect();
    if dim == 2 {
        let t = pts[1] - pts[0];
        let s = (foot - pts[0]).dot(&t) / t.norm_squared();
        return (-1e-12..=1.0 + 1e-12).contains(&s);
    }
    let n = pts.len();
    let scale = point_set_diameter(&pts);
    let mut sign = 0.0;
    for i in 0..n {
        let e = pts[(i + 1) % n] - pts[i];
        let s = e.cross(&(foot - pts[i])).dot(normal);
        if s.abs() <= 1e-12 * scale * scale {
            continue;
        }
        if sign == 0.0 {
            sign = s.signum();
        } else if s.signum() != sign {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y, 0.0)
    }

    #[test]
    fn two_by_two_grid_geometry() {
        let m = generate_square_grid(2).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.n_faces(), 12);
        assert_eq!(m.n_interior_faces(), 4);
        for c in m.cells() {
            assert!((c.measure - 0.25).abs() < 1e-15);
        }
        for c in m.cones() {
            assert!((c.distance - 0.25).abs() < 1e-15);
        }
        let q = m.quality();
        assert!((q.theta - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        m.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn right_triangles_with_circumcenters_are_rejected_as_point_outside() {
        let raw = RawMesh {
            dim: 2,
            vertices: vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            cells: vec![vec![0, 1, 2], vec![0, 2, 3]],
            cell_points: vec![p(0.5, 0.5), p(0.5, 0.5)],
            faces: None,
        };
        assert!(matches!(build_mesh(raw), Err(TpfaError::PointOutsideCell { .. })));
    }

    #[test]
    fn equilateral_cell_regularity() {
        let h = 3f64.sqrt() / 2.0;
        let raw = RawMesh {
            dim: 2,
            vertices: vec![p(0.0, 0.0), p(1.0, 0.0), p(0.5, h)],
            cells: vec![vec![0, 1, 2]],
            cell_points: vec![p(0.5, h / 3.0)],
            faces: None,
        };
        let m = build_mesh(raw).unwrap();
        let q = m.quality();
        assert!((q.theta - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
        m.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn skewed_points_violate_orthogonality() {
        let raw = RawMesh {
            dim: 2,
            vertices: vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(2.0, 1.0)],
            cells: vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]],
            cell_points: vec![p(0.5, 0.4), p(1.5, 0.6)],
            faces: None,
        };
        assert!(matches!(build_mesh(raw), Err(TpfaError::OrthogonalityViolation { .. })));
    }

    #[test]
    fn three_cells_on_one_edge_is_nonconforming() {
        let raw = RawMesh {
            dim: 2,
            vertices: vec![p(0.0, 0.0), p(1.0, 0.0), p(0.5, 1.0), p(0.5, -1.0), p(0.5, 0.5)],
            cells: vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 1, 4]],
            cell_points: vec![p(0.5, 0.3), p(0.5, -0.3), p(0.5, 0.1)],
            faces: None,
        };
        assert!(matches!(build_mesh(raw), Err(TpfaError::NonConformity { .. })));
    }

    #[test]
    fn single_cube_in_three_dimensions() {
        let mut vertices = Vec::new();
        for z in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for x in [0.0, 1.0] {
                    vertices.push(Point::new(x, y, z));
                }
            }
        }
        let quads = [[0, 1, 3, 2], [4, 5, 7, 6], [0, 1, 5, 4], [2, 3, 7, 6], [0, 2, 6, 4], [1, 3, 7, 5]];
        let faces = quads.iter().map(|q| RawFace { vertices: q.to_vec(), cells: (0, None) }).collect();
        let raw = RawMesh {
            dim: 3,
            vertices,
            cells: vec![(0..8).collect()],
            cell_points: vec![Point::new(0.5, 0.5, 0.5)],
            faces: Some(faces),
        };
        let m = build_mesh(raw).unwrap();
        assert!((m.cells()[0].measure - 1.0).abs() < 1e-14);
        assert!((m.domain_measure() - 1.0).abs() < 1e-14);
        for c in m.cones() {
            assert!((c.measure - 1.0 / 6.0).abs() < 1e-15);
        }
        m.check_invariants(1e-12).unwrap();
    }
}
