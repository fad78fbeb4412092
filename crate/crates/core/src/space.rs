//! The discrete space `X_T`, its gradients and norms, and the continuous
//! quantities (mean normal gradient, oscillation, interpolants) they are
//! compared against.

use std::fmt::Write as _;

use nalgebra::SVector;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Result, TpfaError};
use crate::mesh::AdmissibleMesh;
use crate::quadrature::{integrate_adaptive, integrate_triangle};
use crate::Point;

/// Absolute tolerance for quadrature of error terms, spread over the domain
/// in proportion to area.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Relative tolerance for the 1D boundary reduction of cone means.
pub const BOUNDARY_RULE_TOL: f64 = 1e-10;

/// Read access to cell and face values. Implemented by [`DiscreteField`]
/// (boundary faces pinned to zero) and [`FullField`] (every face free).
pub trait FieldValues: Sync {
    fn cell(&self, k: usize) -> f64;
    fn face(&self, mesh: &AdmissibleMesh, f: usize) -> f64;
}

/// Element of `X_T`: one value per cell and per interior face.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteField {
    pub cells: Vec<f64>,
    /// Indexed by the interior numbering of the mesh.
    pub faces: Vec<f64>,
}

impl FieldValues for DiscreteField {
    fn cell(&self, k: usize) -> f64 {
        self.cells[k]
    }
    fn face(&self, mesh: &AdmissibleMesh, f: usize) -> f64 {
        mesh.faces()[f].interior.map_or(0.0, |i| self.faces[i])
    }
}

impl DiscreteField {
    pub fn zeros(mesh: &AdmissibleMesh) -> Self {
        DiscreteField { cells: vec![0.0; mesh.n_cells()], faces: vec![0.0; mesh.n_interior_faces()] }
    }

    /// Uniform values in `[-1, 1]`.
    pub fn random<R: Rng>(mesh: &AdmissibleMesh, rng: &mut R) -> Self {
        DiscreteField {
            cells: (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
            faces: (0..mesh.n_interior_faces()).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        }
    }

    pub fn check_shape(&self, mesh: &AdmissibleMesh) -> Result<()> {
        if self.cells.len() != mesh.n_cells() || self.faces.len() != mesh.n_interior_faces() {
            return Err(TpfaError::DataMisalignment(format!(
                "field has {}+{} values, mesh needs {}+{}",
                self.cells.len(),
                self.faces.len(),
                mesh.n_cells(),
                mesh.n_interior_faces()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        DiscreteField {
            cells: self.cells.iter().map(|v| v * s).collect(),
            faces: self.faces.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &DiscreteField) -> Self {
        DiscreteField {
            cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a + s * b).collect(),
            faces: self.faces.iter().zip(&other.faces).map(|(a, b)| a + s * b).collect(),
        }
    }

    /// `sum_K |K| u_K v_K`, the `L^2` product of the cell reconstructions.
    pub fn l2_dot(&self, other: &DiscreteField, mesh: &AdmissibleMesh) -> f64 {
        mesh.cells().iter().zip(self.cells.iter().zip(&other.cells)).map(|(c, (a, b))| c.measure * a * b).sum()
    }

    pub fn l2_norm(&self, mesh: &AdmissibleMesh) -> f64 {
        self.l2_dot(self, mesh).sqrt()
    }

    /// Rows `cell,<id>,<value>` followed by `face,<face id>,<value>` for the
    /// interior faces.
    pub fn to_csv(&self, mesh: &AdmissibleMesh) -> String {
        let mut s = String::new();
        for (k, v) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "cell,{k},{v}");
        }
        for (i, v) in self.faces.iter().enumerate() {
            let _ = writeln!(s, "face,{},{v}", mesh.interior_faces()[i]);
        }
        s
    }
}

/// Cell and face values with no boundary constraint; used where the Dirichlet
/// pinning would get in the way (exactness checks on affine functions).
#[derive(Debug, Clone, PartialEq)]
pub struct FullField {
    pub cells: Vec<f64>,
    /// Indexed by global face number.
    pub faces: Vec<f64>,
}

impl FieldValues for FullField {
    fn cell(&self, k: usize) -> f64 {
        self.cells[k]
    }
    fn face(&self, _mesh: &AdmissibleMesh, f: usize) -> f64 {
        self.faces[f]
    }
}

/// One scalar per cone; carries `G_T u` and `𝒢_T φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeField(pub Vec<f64>);

impl ConeField {
    pub fn l2_norm(&self, mesh: &AdmissibleMesh) -> f64 {
        self.dot(self, mesh).sqrt()
    }
    pub fn dot(&self, other: &ConeField, mesh: &AdmissibleMesh) -> f64 {
        mesh.cones().iter().zip(self.0.iter().zip(&other.0)).map(|(c, (a, b))| c.measure * a * b).sum()
    }
    pub fn sub(&self, other: &ConeField) -> ConeField {
        ConeField(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    pub fn scaled(&self, s: f64) -> ConeField {
        ConeField(self.0.iter().map(|a| a * s).collect())
    }
}

/// One vector per cone; carries `∇_T u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVectorField(pub Vec<Point>);

impl ConeVectorField {
    pub fn l2_norm(&self, mesh: &AdmissibleMesh) -> f64 {
        mesh.cones().iter().zip(&self.0).map(|(c, v)| c.measure * v.norm_squared()).sum::<f64>().sqrt()
    }
}

/// One vector per cell; carries `∇̂_T u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellVectorField(pub Vec<Point>);

impl CellVectorField {
    pub fn l2_norm(&self, mesh: &AdmissibleMesh) -> f64 {
        mesh.cells().iter().zip(&self.0).map(|(c, v)| c.measure * v.norm_squared()).sum::<f64>().sqrt()
    }
}

/// `G_T u = (u_sigma - u_K) / d_{K,sigma}` on each cone.
pub fn normal_derivative<U: FieldValues + ?Sized>(mesh: &AdmissibleMesh, u: &U) -> ConeField {
    ConeField(mesh.cones().iter().map(|c| (u.face(mesh, c.face) - u.cell(c.cell)) / c.distance).collect())
}

/// `∇_T u = d G_T u n_{K,sigma}` on each cone.
pub fn inflated_gradient<U: FieldValues + ?Sized>(mesh: &AdmissibleMesh, u: &U) -> ConeVectorField {
    let d = mesh.dim() as f64;
    let g = normal_derivative(mesh, u);
    ConeVectorField(mesh.cones().iter().zip(&g.0).map(|(c, g)| c.normal * (d * g)).collect())
}

/// Scaling convention of the consistent gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientScaling {
    /// `(1/|K|) sum |sigma| (x̄_sigma - x_K) G u`: exact on affine functions.
    #[default]
    Unit,
    /// The same sum multiplied by the dimension, kept for comparison.
    TimesDimension,
}

/// Cell-constant consistent gradient `∇̂_T u`.
pub fn consistent_gradient<U: FieldValues + ?Sized>(
    mesh: &AdmissibleMesh,
    u: &U,
    scaling: GradientScaling,
) -> CellVectorField {
    let g = normal_derivative(mesh, u);
    let factor = match scaling {
        GradientScaling::Unit => 1.0,
        GradientScaling::TimesDimension => mesh.dim() as f64,
    };
    CellVectorField(
        mesh.cells()
            .iter()
            .map(|cell| {
                let mut acc = Point::zeros();
                for ci in cell.cones.clone() {
                    let c = &mesh.cones()[ci];
                    let f = &mesh.faces()[c.face];
                    acc += (f.centroid - cell.point) * (f.measure * g.0[ci]);
                }
                acc * (factor / cell.measure)
            })
            .collect(),
    )
}

/// `‖u‖_T = (sum_{K,sigma} |sigma|/d_{K,sigma} (u_sigma - u_K)^2)^{1/2}`.
pub fn discrete_norm<U: FieldValues + ?Sized>(mesh: &AdmissibleMesh, u: &U) -> f64 {
    mesh.cones()
        .iter()
        .map(|c| {
            let diff = u.face(mesh, c.face) - u.cell(c.cell);
            mesh.faces()[c.face].measure / c.distance * diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// A continuous function with its gradient, plus optional closed forms the
/// error functionals use in place of quadrature.
pub trait ExactSolution: Sync {
    fn value(&self, x: &Point) -> Result<f64>;
    fn gradient(&self, x: &Point) -> Result<Point>;

    /// `∫_D ∇φ·n` over the triangle with vertices `apex`, `a`, `b`.
    fn cone_normal_flux(&self, _apex: &Point, _a: &Point, _b: &Point, _n: &Point) -> Option<Result<f64>> {
        None
    }
    /// `(∫_P φ, ∫_P φ^2)` over a convex polygon.
    fn polygon_value_moments(&self, _poly: &[Point]) -> Option<Result<(f64, f64)>> {
        None
    }
    /// `(∫_P ∇φ, ∫_P |∇φ|^2)` over a convex polygon.
    fn polygon_gradient_moments(&self, _poly: &[Point]) -> Option<Result<(Point, f64)>> {
        None
    }
}

/// A vector field `φ` known pointwise, with optional closed-form cell moments.
pub trait VectorField: Sync {
    fn eval(&self, x: &Point) -> Result<Point>;
    /// `(∫_P φ, ∫_P |φ|^2)`.
    fn polygon_moments(&self, _poly: &[Point]) -> Option<Result<(Point, f64)>> {
        None
    }
}

/// The gradient of an exact solution, seen as a vector field.
pub struct GradientField<'a, E: ExactSolution + ?Sized>(pub &'a E);

impl<E: ExactSolution + ?Sized> VectorField for GradientField<'_, E> {
    fn eval(&self, x: &Point) -> Result<Point> {
        self.0.gradient(x)
    }
    fn polygon_moments(&self, poly: &[Point]) -> Option<Result<(Point, f64)>> {
        self.0.polygon_gradient_moments(poly)
    }
}

pub(crate) fn require_2d(mesh: &AdmissibleMesh) -> Result<()> {
    if mesh.dim() != 2 {
        return Err(TpfaError::UnsupportedDimension(mesh.dim()));
    }
    Ok(())
}

/// The cone triangles `(x_K, a, b)` of a 2D cell.
pub(crate) fn cone_triangles(mesh: &AdmissibleMesh, cell: usize) -> Vec<(Point, Point, Point)> {
    let k = &mesh.cells()[cell];
    k.cones
        .clone()
        .map(|ci| {
            let f = &mesh.faces()[mesh.cones()[ci].face];
            (k.point, mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]])
        })
        .collect()
}

/// Integrate a vector-valued integrand over a 2D cell by adaptive rules on its
/// cone triangles.
pub fn integrate_cell<const N: usize, F>(mesh: &AdmissibleMesh, cell: usize, f: &F) -> Result<SVector<f64, N>>
where
    F: Fn(&Point) -> Result<SVector<f64, N>>,
{
    require_2d(mesh)?;
    let mut acc = SVector::<f64, N>::zeros();
    for (ci, (a, b, c)) in mesh.cells()[cell].cones.clone().zip(cone_triangles(mesh, cell)) {
        let tol = QUADRATURE_TOL * mesh.cones()[ci].measure / mesh.domain_measure();
        acc += integrate_triangle(f, &a, &b, &c, tol)?;
    }
    Ok(acc)
}

/// `∫_D ∇φ·n_{K,sigma}` by the boundary reduction
/// `∫_D ∇φ·n = ∫_{∂D} φ (n_∂·n)`, each edge by adaptive Gauss-Kronrod.
fn cone_flux_by_boundary<E: ExactSolution + ?Sized>(phi: &E, apex: &Point, a: &Point, b: &Point, n: &Point) -> Result<f64> {
    // Orient the triangle counter-clockwise so that (t.y, -t.x) is outward.
    let ccw = (a - apex).cross(&(b - apex)).z > 0.0;
    let tri = if ccw { [*apex, *a, *b] } else { [*apex, *b, *a] };
    let mut total = 0.0;
    for i in 0..3 {
        let (p, q) = (tri[i], tri[(i + 1) % 3]);
        let t = q - p;
        let len = t.norm();
        let outward = Point::new(t.y, -t.x, 0.0) / len;
        let w = outward.dot(n);
        if w.abs() < 1e-15 {
            continue;
        }
        let integral = integrate_adaptive(|s| phi.value(&(p + t * s)), 0.0, 1.0, BOUNDARY_RULE_TOL, 1e-15)?;
        total += w * len * integral;
    }
    Ok(total)
}

/// Mean normal gradient `𝒢_T φ`: `(1/|D|) ∫_D ∇φ·n_{K,sigma}` on each cone.
pub fn mean_normal_gradient<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh) -> Result<ConeField> {
    require_2d(mesh)?;
    let vals: Vec<Result<f64>> = (0..mesh.n_cones())
        .into_par_iter()
        .map(|ci| {
            let c = &mesh.cones()[ci];
            let f = &mesh.faces()[c.face];
            let apex = mesh.cells()[c.cell].point;
            let (a, b) = (mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]]);
            let flux = match phi.cone_normal_flux(&apex, &a, &b, &c.normal) {
                Some(r) => r?,
                None => cone_flux_by_boundary(phi, &apex, &a, &b, &c.normal)?,
            };
            Ok(flux / c.measure)
        })
        .collect();
    Ok(ConeField(vals.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Pointwise variant: `∇φ(x̄_sigma)·n_{K,sigma}` on each cone.
pub fn pointwise_normal_gradient<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh) -> Result<ConeField> {
    let vals = mesh
        .cones()
        .iter()
        .map(|c| Ok(phi.gradient(&mesh.faces()[c.face].centroid)?.dot(&c.normal)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeField(vals))
}

/// `(∫_K φ, ∫_K φ^2)` for every cell.
pub fn cell_value_moments<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh) -> Result<Vec<(f64, f64)>> {
    require_2d(mesh)?;
    let v: Vec<Result<(f64, f64)>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| match phi.polygon_value_moments(&mesh.cell_polygon(k)) {
            Some(r) => r,
            None => {
                let m = integrate_cell(mesh, k, &|x: &Point| {
                    let v = phi.value(x)?;
                    Ok(SVector::<f64, 2>::new(v, v * v))
                })?;
                Ok((m[0], m[1]))
            }
        })
        .collect();
    v.into_iter().collect()
}

/// `∫_K (φ - c_K)^2` for every cell, given cell constants `c`.
pub fn cell_l2_deviation<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh, c: &[f64]) -> Result<Vec<f64>> {
    require_2d(mesh)?;
    if c.len() != mesh.n_cells() {
        return Err(TpfaError::DataMisalignment("one constant per cell expected".into()));
    }
    let v: Vec<Result<f64>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| match phi.polygon_value_moments(&mesh.cell_polygon(k)) {
            Some(r) => {
                let (m1, m2) = r?;
                Ok((m2 - 2.0 * c[k] * m1 + c[k] * c[k] * mesh.cells()[k].measure).max(0.0))
            }
            None => Ok(integrate_cell(mesh, k, &|x: &Point| {
                let d = phi.value(x)? - c[k];
                Ok(SVector::<f64, 1>::new(d * d))
            })?[0]),
        })
        .collect();
    v.into_iter().collect()
}

/// `(∫_K φ, ∫_K |φ|^2)` for a vector field on every cell.
pub fn cell_vector_moments<V: VectorField + ?Sized>(phi: &V, mesh: &AdmissibleMesh) -> Result<Vec<(Point, f64)>> {
    require_2d(mesh)?;
    let v: Vec<Result<(Point, f64)>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| match phi.polygon_moments(&mesh.cell_polygon(k)) {
            Some(r) => r,
            None => {
                let m = integrate_cell(mesh, k, &|x: &Point| {
                    let g = phi.eval(x)?;
                    Ok(SVector::<f64, 3>::new(g.x, g.y, g.norm_squared()))
                })?;
                Ok((Point::new(m[0], m[1], 0.0), m[2]))
            }
        })
        .collect();
    v.into_iter().collect()
}

/// `∫_K |φ - g_K|^2` for every cell, given cell vectors `g`.
pub fn cell_vector_deviation<V: VectorField + ?Sized>(phi: &V, mesh: &AdmissibleMesh, g: &[Point]) -> Result<Vec<f64>> {
    require_2d(mesh)?;
    if g.len() != mesh.n_cells() {
        return Err(TpfaError::DataMisalignment("one vector per cell expected".into()));
    }
    let v: Vec<Result<f64>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|k| match phi.polygon_moments(&mesh.cell_polygon(k)) {
            Some(r) => {
                let (m1, m2) = r?;
                Ok((m2 - 2.0 * g[k].dot(&m1) + g[k].norm_squared() * mesh.cells()[k].measure).max(0.0))
            }
            None => Ok(integrate_cell(mesh, k, &|x: &Point| {
                Ok(SVector::<f64, 1>::new((phi.eval(x)? - g[k]).norm_squared()))
            })?[0]),
        })
        .collect();
    v.into_iter().collect()
}

/// Oscillation `Θ_T(φ) = (2 sum_K ∫_K |φ - φ̄_K|^2)^{1/2}`.
///
/// With closed-form moments this is the variance identity
/// `2 sum_K (∫_K |φ|^2 - |K| |φ̄_K|^2)`; otherwise the centered integral is
/// computed by quadrature once the cell means are known.
pub fn oscillation<V: VectorField + ?Sized>(phi: &V, mesh: &AdmissibleMesh) -> Result<f64> {
    let moments = cell_vector_moments(phi, mesh)?;
    let means: Vec<Point> = moments.iter().zip(mesh.cells()).map(|((m, _), c)| m / c.measure).collect();
    let dev = cell_vector_deviation(phi, mesh, &means)?;
    Ok((2.0 * dev.iter().sum::<f64>()).sqrt())
}

/// How face values of the canonical interpolant are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceMode {
    /// `u_sigma = φ(x_sigma)`, `x_sigma` on the segment `[x_K, x_L]`.
    Point,
    /// `u_sigma` balancing the two one-sided fluxes.
    Harmonic,
}

fn eval_at<E: ExactSolution + ?Sized>(phi: &E, x: &Point) -> Result<f64> {
    phi.value(x).map_err(|e| match e {
        TpfaError::SingularPoint | TpfaError::Domain(_) => {
            TpfaError::UndefinedValue(format!("({}, {}): {e}", x.x, x.y))
        }
        other => other,
    })
}

/// Harmonic face value `(d_L u_K + d_K u_L) / (d_K + d_L)`.
pub fn harmonic_face_value(u_k: f64, d_k: f64, u_l: f64, d_l: f64) -> f64 {
    (d_l * u_k + d_k * u_l) / (d_k + d_l)
}

/// Canonical interpolant `ū_T ∈ X_T`: `u_K = φ(x_K)`, interior faces by
/// `mode`, boundary faces zero.
pub fn canonical_interpolant<E: ExactSolution + ?Sized>(
    phi: &E,
    mesh: &AdmissibleMesh,
    mode: FaceMode,
) -> Result<DiscreteField> {
    let cells = mesh.cells().iter().map(|c| eval_at(phi, &c.point)).collect::<Result<Vec<_>>>()?;
    let faces = mesh
        .interior_faces()
        .iter()
        .map(|&f| {
            let face = &mesh.faces()[f];
            let (ck, cl) = (face.cones.0, face.cones.1.expect("interior face"));
            match mode {
                FaceMode::Point => eval_at(phi, &mesh.face_point(ck)),
                FaceMode::Harmonic => {
                    let (k, l) = (face.cells.0, face.cells.1.expect("interior face"));
                    Ok(harmonic_face_value(cells[k], mesh.cones()[ck].distance, cells[l], mesh.cones()[cl].distance))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteField { cells, faces })
}

/// Interpolant with boundary faces left free (`φ` at the orthogonal foot).
pub fn unconstrained_interpolant<E: ExactSolution + ?Sized>(
    phi: &E,
    mesh: &AdmissibleMesh,
    mode: FaceMode,
) -> Result<FullField> {
    let inner = canonical_interpolant(phi, mesh, mode)?;
    let faces = mesh
        .faces()
        .iter()
        .map(|f| match f.interior {
            Some(i) => Ok(inner.faces[i]),
            None => eval_at(phi, &mesh.face_point(f.cones.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FullField { cells: inner.cells, faces })
}

/// `φ(x) = a·x + b`.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub a: Point,
    pub b: f64,
}

impl ExactSolution for Affine {
    fn value(&self, x: &Point) -> Result<f64> {
        Ok(self.a.dot(x) + self.b)
    }
    fn gradient(&self, _x: &Point) -> Result<Point> {
        Ok(self.a)
    }
}

/// `factor * φ`, without closed-form hooks.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<E> {
    pub factor: f64,
    pub inner: E,
}

impl<E: ExactSolution> ExactSolution for Scaled<E> {
    fn value(&self, x: &Point) -> Result<f64> {
        Ok(self.factor * self.inner.value(x)?)
    }
    fn gradient(&self, x: &Point) -> Result<Point> {
        Ok(self.inner.gradient(x)? * self.factor)
    }
}

/// `sin(π x) sin(π y)` on the unit square.
#[derive(Debug, Clone, Copy, Default)]
pub struct SineProduct;

impl ExactSolution for SineProduct {
    fn value(&self, x: &Point) -> Result<f64> {
        use std::f64::consts::PI;
        Ok((PI * x.x).sin() * (PI * x.y).sin())
    }
    fn gradient(&self, x: &Point) -> Result<Point> {
        use std::f64::consts::PI;
        let (sx, cx) = (PI * x.x).sin_cos();
        let (sy, cy) = (PI * x.y).sin_cos();
        Ok(Point::new(PI * cx * sy, PI * sx * cy, 0.0))
    }
}

impl SineProduct {
    /// `‖φ‖_{H^2}^2 = ‖φ‖^2 + ‖∇φ‖^2 + ‖D^2 φ‖^2 = 1/4 + π^2/2 + π^4`.
    pub fn h2_norm() -> f64 {
        use std::f64::consts::PI;
        (0.25 + PI * PI / 2.0 + PI.powi(4)).sqrt()
    }
}
