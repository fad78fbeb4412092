//! TPFA assembly with face unknowns eliminated, the linear solve, and the
//! discrete Riesz solver.

use crate::error::{Result, TpfaError};
use crate::mesh::AdmissibleMesh;
use crate::sparse::{dense_cholesky, pcg, CgReport, CsrMatrix};
use crate::space::{discrete_norm, normal_derivative, DiscreteField, FieldValues};

/// Problem data in the form the scheme consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyProblemData {
    /// Cell averages `(1/|K|) ∫_K f`.
    pub f: Vec<f64>,
    /// Cone normal means `(1/|D|) ∫_D F·n_{K,sigma}`, one per cone.
    pub flux: Vec<f64>,
}

impl SteadyProblemData {
    pub fn zeros(mesh: &AdmissibleMesh) -> Self {
        SteadyProblemData { f: vec![0.0; mesh.n_cells()], flux: vec![0.0; mesh.n_cones()] }
    }

    fn check(&self, mesh: &AdmissibleMesh) -> Result<()> {
        if self.f.len() != mesh.n_cells() || self.flux.len() != mesh.n_cones() {
            return Err(TpfaError::DataMisalignment(format!(
                "data has {} cell and {} cone entries, mesh has {} cells and {} cones",
                self.f.len(),
                self.flux.len(),
                mesh.n_cells(),
                mesh.n_cones()
            )));
        }
        Ok(())
    }

    /// `ℓ(v) = ∫ f v - ∫ F·∇_T v`, i.e. `a_K = |K| f_K`, `b_{K,sigma} = -|sigma| F̄_{K,sigma}`.
    pub fn functional(&self, mesh: &AdmissibleMesh) -> Result<LinearFunctional> {
        self.check(mesh)?;
        Ok(LinearFunctional {
            cell: mesh.cells().iter().zip(&self.f).map(|(c, f)| c.measure * f).collect(),
            cone: mesh.cones().iter().zip(&self.flux).map(|(c, g)| -mesh.faces()[c.face].measure * g).collect(),
        })
    }
}

/// `ℓ(v) = sum_K a_K v_K + sum_{K,sigma} b_{K,sigma} (v_sigma - v_K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctional {
    pub cell: Vec<f64>,
    pub cone: Vec<f64>,
}

impl LinearFunctional {
    pub fn zeros(mesh: &AdmissibleMesh) -> Self {
        LinearFunctional { cell: vec![0.0; mesh.n_cells()], cone: vec![0.0; mesh.n_cones()] }
    }

    /// `ℓ(v) = <z, v>_{L^2}` for a cell field `z`.
    pub fn l2_product(mesh: &AdmissibleMesh, z: &[f64]) -> Self {
        LinearFunctional {
            cell: mesh.cells().iter().zip(z).map(|(c, z)| c.measure * z).collect(),
            cone: vec![0.0; mesh.n_cones()],
        }
    }

    pub fn eval<U: FieldValues + ?Sized>(&self, mesh: &AdmissibleMesh, v: &U) -> f64 {
        let cells: f64 = self.cell.iter().enumerate().map(|(k, a)| a * v.cell(k)).sum();
        let cones: f64 = mesh
            .cones()
            .iter()
            .zip(&self.cone)
            .map(|(c, b)| b * (v.face(mesh, c.face) - v.cell(c.cell)))
            .sum();
        cells + cones
    }

    fn check(&self, mesh: &AdmissibleMesh) -> Result<()> {
        if self.cell.len() != mesh.n_cells() || self.cone.len() != mesh.n_cones() {
            return Err(TpfaError::DataMisalignment("functional does not match the mesh".into()));
        }
        Ok(())
    }
}

/// Affine recovery of an interior face value from its two cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceRecovery {
    pub w_k: f64,
    pub w_l: f64,
    pub offset: f64,
}

/// Cell-unknown SPD system plus the data needed to rebuild face values.
#[derive(Debug, Clone)]
pub struct SparseSpdSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// One entry per interior face, in interior numbering.
    pub recovery: Vec<FaceRecovery>,
}

impl SparseSpdSystem {
    /// Face values from solved cell values.
    pub fn recover(&self, mesh: &AdmissibleMesh, cells: Vec<f64>) -> DiscreteField {
        let faces = mesh
            .interior_faces()
            .iter()
            .zip(&self.recovery)
            .map(|(&f, r)| {
                let face = &mesh.faces()[f];
                r.w_k * cells[face.cells.0] + r.w_l * cells[face.cells.1.expect("interior")] + r.offset
            })
            .collect();
        DiscreteField { cells, faces }
    }
}

/// Assemble `d<G u, G v> + shift <u, v> = ℓ(v)` for all `v ∈ X_T`.
///
/// Testing with the indicator of an interior face gives `u_sigma` as an
/// affine function of `u_K`, `u_L`; substituting into the cell rows yields
/// transmissibilities `|sigma|/(d_K + d_L)` inside and `|sigma|/d_K` on the
/// boundary.
pub fn assemble_functional(mesh: &AdmissibleMesh, ell: &LinearFunctional, shift: f64) -> Result<SparseSpdSystem> {
    ell.check(mesh)?;
    let n = mesh.n_cells();
    let mut trip = Vec::with_capacity(n + 2 * mesh.n_interior_faces());
    let mut rhs = ell.cell.clone();
    for (k, c) in mesh.cells().iter().enumerate() {
        if shift != 0.0 {
            trip.push((k, k, shift * c.measure));
        }
    }
    let mut recovery = Vec::with_capacity(mesh.n_interior_faces());
    for face in mesh.faces() {
        let ck = face.cones.0;
        let k = face.cells.0;
        let dk = mesh.cones()[ck].distance;
        let bk = ell.cone[ck];
        match (face.cells.1, face.cones.1) {
            (Some(l), Some(cl)) => {
                let dl = mesh.cones()[cl].distance;
                let bl = ell.cone[cl];
                let tau = face.measure / (dk + dl);
                trip.push((k, k, tau));
                trip.push((l, l, tau));
                trip.push((k, l, -tau));
                trip.push((l, k, -tau));
                rhs[k] += (dl * bl - dk * bk) / (dk + dl);
                rhs[l] += (dk * bk - dl * bl) / (dk + dl);
                recovery.push(FaceRecovery {
                    w_k: dl / (dk + dl),
                    w_l: dk / (dk + dl),
                    offset: dk * dl * (bk + bl) / (face.measure * (dk + dl)),
                });
            }
            _ => {
                trip.push((k, k, face.measure / dk));
                rhs[k] -= bk;
            }
        }
    }
    Ok(SparseSpdSystem { matrix: CsrMatrix::from_triplets(n, trip), rhs, recovery })
}

/// Assemble the steady scheme for cell averages of `f` and cone means of `F`.
pub fn assemble_steady(mesh: &AdmissibleMesh, data: &SteadyProblemData) -> Result<SparseSpdSystem> {
    assemble_functional(mesh, &data.functional(mesh)?, 0.0)
}

/// Choice of linear solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Jacobi-preconditioned conjugate gradients.
    #[default]
    Cg,
    /// Dense Cholesky; refused above [`DENSE_LIMIT`] cells.
    Dense,
}

pub const DENSE_LIMIT: usize = 2000;
pub const CG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub method: SolveMethod,
    pub initial_guess: Option<Vec<f64>>,
}

/// Solve the cell system and rebuild the face values.
pub fn solve(mesh: &AdmissibleMesh, system: &SparseSpdSystem) -> Result<DiscreteField> {
    Ok(solve_with(mesh, system, &SolveOptions::default())?.0)
}

pub fn solve_with(
    mesh: &AdmissibleMesh,
    system: &SparseSpdSystem,
    opts: &SolveOptions,
) -> Result<(DiscreteField, Option<CgReport>)> {
    let n = system.matrix.n();
    match opts.method {
        SolveMethod::Cg => {
            let (x, rep) = pcg(&system.matrix, &system.rhs, opts.initial_guess.as_deref(), CG_TOL, (10 * n).max(10))?;
            Ok((system.recover(mesh, x), Some(rep)))
        }
        SolveMethod::Dense => {
            if n > DENSE_LIMIT {
                return Err(TpfaError::Config(format!("dense solve refused for {n} > {DENSE_LIMIT} cells")));
            }
            Ok((system.recover(mesh, dense_cholesky(&system.matrix, &system.rhs)?), None))
        }
    }
}

/// The `w ∈ X_T` with `d<G w, G v> = ℓ(v)` for every `v ∈ X_T`.
pub fn riesz_solve(mesh: &AdmissibleMesh, ell: &LinearFunctional) -> Result<DiscreteField> {
    solve(mesh, &assemble_functional(mesh, ell, 0.0)?)
}

/// Dual norm `sup_v ℓ(v)/‖v‖_T`, attained by the Riesz representative.
pub fn dual_norm(mesh: &AdmissibleMesh, ell: &LinearFunctional) -> Result<f64> {
    Ok(discrete_norm(mesh, &riesz_solve(mesh, ell)?))
}

/// `d<G u, G v> + shift <u, v> - ℓ(v)`.
pub fn weak_residual(
    mesh: &AdmissibleMesh,
    u: &DiscreteField,
    v: &DiscreteField,
    ell: &LinearFunctional,
    shift: f64,
) -> f64 {
    let d = mesh.dim() as f64;
    let gu = normal_derivative(mesh, u);
    let gv = normal_derivative(mesh, v);
    d * gu.dot(&gv, mesh) + shift * u.l2_dot(v, mesh) - ell.eval(mesh, v)
}

/// Residuals of the strong form: the cell balance for every cell and flux
/// conservation for every interior face.
pub fn strong_residuals(mesh: &AdmissibleMesh, u: &DiscreteField, data: &SteadyProblemData) -> (Vec<f64>, Vec<f64>) {
    let g = normal_derivative(mesh, u);
    let cells = mesh
        .cells()
        .iter()
        .enumerate()
        .map(|(k, cell)| {
            let mut lhs = 0.0;
            let mut rhs = cell.measure * data.f[k];
            for ci in cell.cones.clone() {
                let sigma = mesh.faces()[mesh.cones()[ci].face].measure;
                lhs -= sigma * g.0[ci];
                rhs += sigma * data.flux[ci];
            }
            lhs - rhs
        })
        .collect();
    let faces = mesh
        .interior_faces()
        .iter()
        .map(|&f| {
            let (a, b) = (mesh.faces()[f].cones.0, mesh.faces()[f].cones.1.expect("interior"));
            (g.0[a] + data.flux[a]) + (g.0[b] + data.flux[b])
        })
        .collect();
    (cells, faces)
}
