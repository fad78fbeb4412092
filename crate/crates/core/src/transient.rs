//! Implicit Euler in time with a general initial/final coupling
//! `u(0) - Φ u(T) = ξ0`, plus the space-time error functionals.

use std::f64::consts::PI;

use crate::analysis::ZETA_FLOOR;
use crate::assembly::{
    assemble_functional, dual_norm, riesz_solve, solve_with, weak_residual, LinearFunctional, SolveOptions,
    SteadyProblemData,
};
use crate::error::{Result, TpfaError};
use crate::mesh::AdmissibleMesh;
use crate::quadrature::gauss_legendre;
use crate::space::{
    canonical_interpolant, cell_value_moments, mean_normal_gradient, normal_derivative, ConeField, DiscreteField,
    FaceMode, SineProduct,
};

/// Change in `u^{(0)}` below which the coupling iteration stops.
pub const FIXED_POINT_TOL: f64 = 1e-11;
pub const MAX_SWEEPS: usize = 500;

/// Uniform time grid on `[0, T]` with `N` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, steps: usize) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) || steps == 0 {
            return Err(TpfaError::Config(format!("time grid needs T > 0 and N >= 1, got T={t_final}, N={steps}")));
        }
        Ok(TimeGrid { t_final, steps })
    }
    pub fn t_final(&self) -> f64 {
        self.t_final
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn step(&self) -> f64 {
        self.t_final / self.steps as f64
    }
    /// `m k`, with the last node exactly `T`.
    pub fn node(&self, m: usize) -> f64 {
        if m == self.steps {
            self.t_final
        } else {
            m as f64 * self.step()
        }
    }
    /// Slab `m` in `1..=N` is `((m-1)k, mk]`.
    pub fn slab(&self, m: usize) -> (f64, f64) {
        (self.node(m - 1), self.node(m))
    }
}

/// Element of `W_T`: `u^{(0)}, ..., u^{(N)}`, with `u(t) = u^{(m)}` on
/// `((m-1)k, mk]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: TimeGrid,
    pub fields: Vec<DiscreteField>,
}

impl SpaceTimeField {
    pub fn new(grid: TimeGrid, fields: Vec<DiscreteField>) -> Result<Self> {
        if fields.len() != grid.steps() + 1 {
            return Err(TpfaError::DataMisalignment(format!(
                "{} fields for {} time steps",
                fields.len(),
                grid.steps()
            )));
        }
        Ok(SpaceTimeField { grid, fields })
    }

    /// Value at time `t`, left-closed slabs.
    pub fn at(&self, t: f64) -> &DiscreteField {
        if t <= 0.0 {
            return &self.fields[0];
        }
        let m = (t / self.grid.step()).ceil() as usize;
        &self.fields[m.clamp(1, self.grid.steps())]
    }
}

/// Linear contraction `Φ` in the coupling condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingMap {
    Zero,
    Identity,
    Scaled(f64),
}

impl CouplingMap {
    pub fn scaled(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(TpfaError::Config(format!("coupling factor {lambda} outside [0, 1]")));
        }
        Ok(CouplingMap::Scaled(lambda))
    }
    pub fn factor(&self) -> f64 {
        match self {
            CouplingMap::Zero => 0.0,
            CouplingMap::Identity => 1.0,
            CouplingMap::Scaled(l) => *l,
        }
    }
}

/// Slab-averaged data and the coupling condition.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientProblemData {
    /// Slab `m` (1-based) is entry `m - 1`.
    pub slabs: Vec<SteadyProblemData>,
    /// Cell averages of `ξ0`.
    pub xi0: Vec<f64>,
    pub coupling: CouplingMap,
}

/// Slab averages `(1/k) ∫ g(t) dt` of the spatially reduced data, by
/// 3-point Gauss in time. `reduce(t)` returns the cell averages of `f(t)` and
/// the cone means of `F(t)·n`.
pub fn time_average_data<R>(grid: &TimeGrid, reduce: R) -> Result<Vec<SteadyProblemData>>
where
    R: Fn(f64) -> Result<SteadyProblemData>,
{
    let (x, w) = gauss_legendre(3);
    (1..=grid.steps())
        .map(|m| {
            let (a, b) = grid.slab(m);
            let mut acc: Option<SteadyProblemData> = None;
            for (xi, wi) in x.iter().zip(&w) {
                let d = reduce(0.5 * (a + b) + 0.5 * (b - a) * xi)?;
                let acc = acc.get_or_insert_with(|| SteadyProblemData { f: vec![0.0; d.f.len()], flux: vec![0.0; d.flux.len()] });
                if d.f.len() != acc.f.len() || d.flux.len() != acc.flux.len() {
                    return Err(TpfaError::DataMisalignment("reduced data changes size in time".into()));
                }
                acc.f.iter_mut().zip(&d.f).for_each(|(s, v)| *s += 0.5 * wi * v);
                acc.flux.iter_mut().zip(&d.flux).for_each(|(s, v)| *s += 0.5 * wi * v);
            }
            Ok(acc.expect("three Gauss points"))
        })
        .collect()
}

/// The functional `⟨f, v⟩ - ⟨F, ∇_T v⟩ + ⟨u_prev/k, v⟩` of one step.
fn step_functional(mesh: &AdmissibleMesh, u_prev: &[f64], slab: &SteadyProblemData, k: f64) -> Result<LinearFunctional> {
    let mut ell = slab.functional(mesh)?;
    for ((a, c), u) in ell.cell.iter_mut().zip(mesh.cells()).zip(u_prev) {
        *a += c.measure * u / k;
    }
    Ok(ell)
}

/// One implicit Euler step:
/// `⟨(u - u_prev)/k, v⟩ + d⟨G u, G v⟩ = ⟨f, v⟩ - ⟨F, ∇_T v⟩` for all `v`.
pub fn step(mesh: &AdmissibleMesh, u_prev: &DiscreteField, slab: &SteadyProblemData, k: f64) -> Result<DiscreteField> {
    let system = assemble_functional(mesh, &step_functional(mesh, &u_prev.cells, slab, k)?, 1.0 / k)?;
    let opts = SolveOptions { initial_guess: Some(u_prev.cells.clone()), ..Default::default() };
    Ok(solve_with(mesh, &system, &opts)?.0)
}

/// Residual of one step against a test field `v`.
pub fn step_residual(
    mesh: &AdmissibleMesh,
    u_prev: &DiscreteField,
    u: &DiscreteField,
    slab: &SteadyProblemData,
    k: f64,
    v: &DiscreteField,
) -> Result<f64> {
    Ok(weak_residual(mesh, u, v, &step_functional(mesh, &u_prev.cells, slab, k)?, 1.0 / k))
}

/// Result of [`solve_transient`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransientRun {
    pub field: SpaceTimeField,
    /// Number of passes over all time steps.
    pub sweeps: usize,
}

/// `u^{(0)}` from its cell values; faces balance the one-sided fluxes.
fn initial_field(mesh: &AdmissibleMesh, cells: Vec<f64>) -> DiscreteField {
    let faces = mesh
        .interior_faces()
        .iter()
        .map(|&f| {
            let face = &mesh.faces()[f];
            let (ck, cl) = (face.cones.0, face.cones.1.expect("interior face"));
            let (dk, dl) = (mesh.cones()[ck].distance, mesh.cones()[cl].distance);
            let (uk, ul) = (cells[face.cells.0], cells[face.cells.1.expect("interior face")]);
            (dl * uk + dk * ul) / (dk + dl)
        })
        .collect();
    DiscreteField { cells, faces }
}

/// Run the scheme. With `Φ = 0` this is a single pass; otherwise
/// `u^{(0)} ← ξ0 + Φ u^{(N)}` is iterated until it changes by less than
/// [`FIXED_POINT_TOL`] in `L^2`.
///
/// The initialization equation only sees cell values, so the face values of
/// `u^{(0)}` are free; they are set by harmonic averaging and play no role in
/// any later quantity.
pub fn solve_transient(mesh: &AdmissibleMesh, grid: &TimeGrid, data: &TransientProblemData) -> Result<TransientRun> {
    if data.slabs.len() != grid.steps() || data.xi0.len() != mesh.n_cells() {
        return Err(TpfaError::DataMisalignment("transient data does not match the grid or the mesh".into()));
    }
    let k = grid.step();
    let lambda = data.coupling.factor();
    let mut u0 = data.xi0.clone();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut fields = Vec::with_capacity(grid.steps() + 1);
        fields.push(initial_field(mesh, u0.clone()));
        for slab in &data.slabs {
            let next = step(mesh, fields.last().expect("nonempty"), slab, k)?;
            fields.push(next);
        }
        if lambda == 0.0 {
            return Ok(TransientRun { field: SpaceTimeField::new(*grid, fields)?, sweeps });
        }
        let last = &fields[grid.steps()].cells;
        let next: Vec<f64> = data.xi0.iter().zip(last).map(|(x, u)| x + lambda * u).collect();
        let change = mesh
            .cells()
            .iter()
            .zip(next.iter().zip(&u0))
            .map(|(c, (a, b))| c.measure * (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if change < FIXED_POINT_TOL {
            // The fields were computed from the previous u0; accept them only
            // once u0 is consistent with the coupling condition.
            fields[0] = initial_field(mesh, next);
            return Ok(TransientRun { field: SpaceTimeField::new(*grid, fields)?, sweeps });
        }
        if sweeps >= MAX_SWEEPS {
            return Err(TpfaError::FixedPointStall { sweeps, change });
        }
        u0 = next;
    }
}

/// `ð_t u` on each slab: `(u^{(m)} - u^{(m-1)})/k`, `m = 1..N`.
pub fn time_derivative(u: &SpaceTimeField) -> Vec<DiscreteField> {
    let k = u.grid.step();
    u.fields.windows(2).map(|w| w[1].axpy(-1.0, &w[0]).scaled(1.0 / k)).collect()
}

/// Discrete Riesz operator: `d⟨G R_T v, G w⟩ = ⟨v, w⟩` for every `w ∈ X_T`.
pub fn discrete_riesz(mesh: &AdmissibleMesh, v: &DiscreteField) -> Result<DiscreteField> {
    riesz_solve(mesh, &LinearFunctional::l2_product(mesh, &v.cells))
}

/// Reference solution of a transient problem with the closed forms the
/// space-time functionals need, bound to one mesh.
pub trait TransientExact: Sync {
    /// `𝒢_T ū(t)`.
    fn mean_normal_gradient(&self, t: f64) -> Result<ConeField>;
    /// `𝒢_T R ū'(t)`, with `R` the inverse Dirichlet Laplacian.
    fn riesz_derivative_gradient(&self, _t: f64) -> Result<ConeField> {
        Err(TpfaError::OracleMissing("a closed-form Riesz image of the time derivative"))
    }
    /// `‖ū(t) - v‖_{L^2}` for the cell values of `v`.
    fn l2_distance(&self, t: f64, v: &DiscreteField) -> Result<f64>;
}

/// `ū(x, t) = A e^{-t} sin(πx) sin(πy)` on the unit square, for which
/// `f = (2π^2 - 1) ū`, `F = 0` and `R ū' = -ū / (2π^2)`.
#[derive(Debug, Clone)]
pub struct ManufacturedHeat {
    pub amplitude: f64,
    /// `𝒢_T s` for `s = sin(πx) sin(πy)`.
    pub s_means: ConeField,
    /// `(∫_K s, ∫_K s^2)`.
    pub s_moments: Vec<(f64, f64)>,
    interp: DiscreteField,
    cell_measures: Vec<f64>,
}

impl ManufacturedHeat {
    pub fn new(mesh: &AdmissibleMesh, amplitude: f64) -> Result<Self> {
        Ok(ManufacturedHeat {
            amplitude,
            s_means: mean_normal_gradient(&SineProduct, mesh)?,
            s_moments: cell_value_moments(&SineProduct, mesh)?,
            interp: canonical_interpolant(&SineProduct, mesh, FaceMode::Point)?,
            cell_measures: mesh.cells().iter().map(|c| c.measure).collect(),
        })
    }

    fn a(&self, t: f64) -> f64 {
        self.amplitude * (-t).exp()
    }

    /// `(1/k) ∫_a^b e^{-t} dt` times the amplitude.
    pub fn slab_amplitude(&self, a: f64, b: f64) -> f64 {
        self.amplitude * ((-a).exp() - (-b).exp()) / (b - a)
    }

    /// Spatial reduction of the data at time `t`.
    pub fn reduced_data(&self, t: f64) -> SteadyProblemData {
        let c = (2.0 * PI * PI - 1.0) * self.a(t);
        SteadyProblemData {
            f: self.s_moments.iter().zip(&self.cell_measures).map(|((m, _), k)| c * m / k).collect(),
            flux: vec![0.0; self.s_means.0.len()],
        }
    }

    /// Full problem data for the Cauchy problem `u(0) = ū(0)`.
    pub fn problem(&self, grid: &TimeGrid) -> Result<TransientProblemData> {
        Ok(TransientProblemData {
            slabs: time_average_data(grid, |t| Ok(self.reduced_data(t)))?,
            xi0: self.s_moments.iter().zip(&self.cell_measures).map(|((m, _), k)| self.amplitude * m / k).collect(),
            coupling: CouplingMap::Zero,
        })
    }

    /// Per-slab conformity data of `𝒗 = ∇Rū' + ∇ū`: `∫_K div 𝒗̄` and the
    /// cone means of `𝒗̄·n`, where `𝒗̄` is the slab average.
    pub fn conformity_slabs(&self, grid: &TimeGrid) -> Vec<(Vec<f64>, Vec<f64>)> {
        let factor = 1.0 - 1.0 / (2.0 * PI * PI);
        (1..=grid.steps())
            .map(|m| {
                let (a, b) = grid.slab(m);
                let c = self.slab_amplitude(a, b);
                let div = self.s_moments.iter().map(|(m1, _)| -(2.0 * PI * PI - 1.0) * c * m1).collect();
                let cones = self.s_means.0.iter().map(|g| factor * c * g).collect();
                (div, cones)
            })
            .collect()
    }

    /// Canonical interpolant of `ū` at every grid node.
    pub fn interpolant(&self, grid: &TimeGrid) -> Result<SpaceTimeField> {
        let fields = (0..=grid.steps()).map(|m| self.interp.scaled(self.a(grid.node(m)))).collect();
        SpaceTimeField::new(*grid, fields)
    }
}

impl TransientExact for ManufacturedHeat {
    fn mean_normal_gradient(&self, t: f64) -> Result<ConeField> {
        Ok(self.s_means.scaled(self.a(t)))
    }
    fn riesz_derivative_gradient(&self, t: f64) -> Result<ConeField> {
        Ok(self.s_means.scaled(-self.a(t) / (2.0 * PI * PI)))
    }
    fn l2_distance(&self, t: f64, v: &DiscreteField) -> Result<f64> {
        let a = self.a(t);
        let s: f64 = self
            .s_moments
            .iter()
            .zip(&self.cell_measures)
            .zip(&v.cells)
            .map(|(((m1, m2), k), u)| a * a * m2 - 2.0 * a * u * m1 + u * u * k)
            .sum();
        Ok(s.max(0.0).sqrt())
    }
}

/// The three parts of `δ^(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDistance {
    /// `d ‖𝒢_T Rū' - G_T R_T ð_t u‖_{L^2 L^2}`.
    pub riesz: f64,
    /// `d ‖𝒢_T ū - G_T u‖_{L^2 L^2}`.
    pub gradient: f64,
    /// `max_t ‖ū(t) - u(t)‖_{L^2}` over the sample times.
    pub max_l2: f64,
    pub total: f64,
}

/// Gauss points per slab for the time integrals of `δ^(T)`.
pub const TIME_GAUSS_POINTS: usize = 5;
/// Interior sample points per slab for the max term.
pub const MAX_SAMPLES_PER_SLAB: usize = 3;

/// `δ^(T)(ū, u)`.
///
/// The time integrals use Gauss-Legendre on every slab, where `u` and
/// `R_T ð_t u` are constant. The max over `[0, T]` is sampled at `t = 0`,
/// just after each slab start, at three interior points and at each slab end.
pub fn delta_time<E: TransientExact + ?Sized>(mesh: &AdmissibleMesh, exact: &E, u: &SpaceTimeField) -> Result<TimeDistance> {
    let d = mesh.dim() as f64;
    let grid = u.grid;
    let derivative = time_derivative(u);
    let (x, w) = gauss_legendre(TIME_GAUSS_POINTS);
    let mut riesz2 = 0.0;
    let mut grad2 = 0.0;
    let mut max_l2 = exact.l2_distance(0.0, &u.fields[0])?;
    for m in 1..=grid.steps() {
        let (a, b) = grid.slab(m);
        let um = &u.fields[m];
        let gu = normal_derivative(mesh, um);
        let gr = normal_derivative(mesh, &discrete_riesz(mesh, &derivative[m - 1])?);
        for (xi, wi) in x.iter().zip(&w) {
            let t = 0.5 * (a + b) + 0.5 * (b - a) * xi;
            let wt = 0.5 * (b - a) * wi;
            riesz2 += wt * exact.riesz_derivative_gradient(t)?.sub(&gr).l2_norm(mesh).powi(2);
            grad2 += wt * exact.mean_normal_gradient(t)?.sub(&gu).l2_norm(mesh).powi(2);
        }
        let n = MAX_SAMPLES_PER_SLAB + 1;
        for j in 0..=n {
            // j = 0 is the right limit at the slab start.
            let t = if j == 0 { a } else { a + (b - a) * j as f64 / n as f64 };
            max_l2 = max_l2.max(exact.l2_distance(t, um)?);
        }
    }
    let riesz = d * riesz2.sqrt();
    let gradient = d * grad2.sqrt();
    Ok(TimeDistance { riesz, gradient, max_l2, total: riesz + gradient + max_l2 })
}

/// Normalization of the space-time conformity error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaNormalization {
    /// Test fields measured in `(sum_m k ‖v_m‖_T^2)^{1/2}`.
    #[default]
    DiscreteNorm,
    /// Test fields measured in `‖G_T v‖_{L^2 L^2}`, which is `1/√d` times
    /// the former, so the value is `√d` times larger.
    NormalGradient,
}

/// `ζ^(T)(𝒗) = (sum_m k ζ_m^2)^{1/2}` with `ζ_m` the dual norm of the slab
/// functional built from `∫_K div 𝒗̄` and the cone means of `𝒗̄·n`.
pub fn zeta_time(
    mesh: &AdmissibleMesh,
    grid: &TimeGrid,
    slabs: &[(Vec<f64>, Vec<f64>)],
    normalization: ZetaNormalization,
) -> Result<f64> {
    if slabs.len() != grid.steps() {
        return Err(TpfaError::DataMisalignment("one conformity slab per time step expected".into()));
    }
    let k = grid.step();
    let mut sum = 0.0;
    for (div, cones) in slabs {
        let ell = crate::analysis::conformity_functional(mesh, div, cones)?;
        sum += k * dual_norm(mesh, &ell)?.powi(2);
    }
    let z = match normalization {
        ZetaNormalization::DiscreteNorm => sum.sqrt(),
        ZetaNormalization::NormalGradient => (mesh.dim() as f64 * sum).sqrt(),
    };
    Ok(if z < ZETA_FLOOR { 0.0 } else { z })
}

/// One inequality `lhs <= rhs` with its margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-12 * (1.0 + self.rhs.abs())
    }
}

/// The three energy inequalities for a space-time field `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyChecks {
    /// `max_t ‖w(t)‖ <= ‖d G R_T ð_t w‖ + ‖d G w‖ + ‖w(0)‖`.
    pub uniform: Inequality,
    /// `½‖w(T)‖^2 - ½‖w(0)‖^2 <= ⟨G R_T ð_t w, d G w⟩`.
    pub monotone: Inequality,
    /// `‖w(T)‖^2 <= ‖d G R_T ð_t w‖^2 + (1 + diam(Ω)^2/T) ‖d G w‖^2`.
    pub coercive: Inequality,
}

impl EnergyChecks {
    pub fn all_hold(&self) -> bool {
        self.uniform.holds() && self.monotone.holds() && self.coercive.holds()
    }
}

pub fn energy_checks(mesh: &AdmissibleMesh, w: &SpaceTimeField) -> Result<EnergyChecks> {
    let d = mesh.dim() as f64;
    let k = w.grid.step();
    let mut a2 = 0.0;
    let mut b2 = 0.0;
    let mut cross = 0.0;
    for (m, dw) in time_derivative(w).iter().enumerate() {
        let gr = normal_derivative(mesh, &discrete_riesz(mesh, dw)?);
        let gw = normal_derivative(mesh, &w.fields[m + 1]);
        a2 += k * d * d * gr.l2_norm(mesh).powi(2);
        b2 += k * d * d * gw.l2_norm(mesh).powi(2);
        cross += k * d * gr.dot(&gw, mesh);
    }
    let norms: Vec<f64> = w.fields.iter().map(|f| f.l2_norm(mesh)).collect();
    let (first, last) = (norms[0], norms[norms.len() - 1]);
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let diam = mesh.domain_diameter();
    Ok(EnergyChecks {
        uniform: Inequality { lhs: max, rhs: a2.sqrt() + b2.sqrt() + first },
        monotone: Inequality { lhs: 0.5 * last * last - 0.5 * first * first, rhs: cross },
        coercive: Inequality { lhs: last * last, rhs: a2 + (1.0 + diam * diam / w.grid.t_final()) * b2 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_steady, solve};
    use crate::mesh::generate_square_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_and_evaluation_convention() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert_eq!(g.node(4), 1.0);
        assert!(TimeGrid::new(0.0, 3).is_err());
        let m = generate_square_grid(1).unwrap();
        let fields = (0..5).map(|i| DiscreteField { cells: vec![i as f64], faces: vec![] }).collect();
        let u = SpaceTimeField::new(g, fields).unwrap();
        assert_eq!(u.at(0.0).cells[0], 0.0);
        assert_eq!(u.at(0.25).cells[0], 1.0);
        assert_eq!(u.at(0.26).cells[0], 2.0);
        assert_eq!(u.at(1.0).cells[0], 4.0);
        let _ = m;
    }

    #[test]
    fn slab_average_of_linear_and_separable_data() {
        let g = TimeGrid::new(0.5, 1).unwrap();
        let avg = time_average_data(&g, |t| Ok(SteadyProblemData { f: vec![t], flux: vec![] })).unwrap();
        assert!((avg[0].f[0] - 0.25).abs() < 1e-15);
        let m = generate_square_grid(2).unwrap();
        let heat = ManufacturedHeat::new(&m, 1.0).unwrap();
        let g = TimeGrid::new(0.4, 2).unwrap();
        let p = heat.problem(&g).unwrap();
        for (i, slab) in p.slabs.iter().enumerate() {
            let (a, b) = g.slab(i + 1);
            let exact = heat.reduced_data(0.0).f.iter().map(|f| f * ((-a).exp() - (-b).exp()) / (b - a)).collect::<Vec<_>>();
            for (x, y) in slab.f.iter().zip(&exact) {
                assert!((x - y).abs() < 1e-10 * y.abs().max(1.0));
            }
        }
    }

    #[test]
    fn single_cell_step_matches_scalar_equation() {
        // One unit cell, four boundary faces with |σ|/d = 1/0.5 = 2 each:
        // (u - u0)/k + 8 u = f.
        let m = generate_square_grid(1).unwrap();
        let slab = SteadyProblemData { f: vec![3.0], flux: vec![0.0; 4] };
        let prev = DiscreteField { cells: vec![0.7], faces: vec![] };
        let k = 0.1;
        let u = step(&m, &prev, &slab, k).unwrap();
        assert!((u.cells[0] - (0.7 / k + 3.0) / (1.0 / k + 8.0)).abs() < 1e-14);
    }

    #[test]
    fn steady_state_is_a_fixed_point_and_periodic_solution() {
        let m = generate_square_grid(4).unwrap();
        let data = SteadyProblemData { f: (0..16).map(|i| 1.0 + 0.1 * i as f64).collect(), flux: vec![0.0; m.n_cones()] };
        let steady = solve(&m, &assemble_steady(&m, &data).unwrap()).unwrap();
        let next = step(&m, &steady, &data, 0.05).unwrap();
        for (a, b) in next.cells.iter().zip(&steady.cells) {
            assert!((a - b).abs() < 1e-10);
        }
        let g = TimeGrid::new(1.0, 5).unwrap();
        let problem = TransientProblemData { slabs: vec![data; 5], xi0: vec![0.0; 16], coupling: CouplingMap::Identity };
        let run = solve_transient(&m, &g, &problem).unwrap();
        for f in &run.field.fields {
            for (a, b) in f.cells.iter().zip(&steady.cells) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_data_and_scaled_coupling() {
        let m = generate_square_grid(3).unwrap();
        let g = TimeGrid::new(1.0, 3).unwrap();
        let problem = TransientProblemData {
            slabs: vec![SteadyProblemData::zeros(&m); 3],
            xi0: vec![0.0; 9],
            coupling: CouplingMap::scaled(0.5).unwrap(),
        };
        let run = solve_transient(&m, &g, &problem).unwrap();
        assert!(run.field.fields.iter().all(|f| f.cells.iter().chain(&f.faces).all(|&v| v == 0.0)));
        assert!(CouplingMap::scaled(1.5).is_err());
    }

    #[test]
    fn dissipation_and_scheme_residuals() {
        let m = generate_square_grid(4).unwrap();
        let g = TimeGrid::new(0.5, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xi0 = DiscreteField::random(&m, &mut rng).cells;
        let problem = TransientProblemData { slabs: vec![SteadyProblemData::zeros(&m); 5], xi0, coupling: CouplingMap::Zero };
        let run = solve_transient(&m, &g, &problem).unwrap();
        let norms: Vec<f64> = run.field.fields.iter().map(|f| f.l2_norm(&m)).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]));
        for i in 1..=5 {
            let v = DiscreteField::random(&m, &mut rng);
            let r = step_residual(&m, &run.field.fields[i - 1], &run.field.fields[i], &problem.slabs[i - 1], g.step(), &v).unwrap();
            assert!(r.abs() < 1e-9);
        }
    }

    #[test]
    fn time_derivative_telescopes() {
        let m = generate_square_grid(2).unwrap();
        let g = TimeGrid::new(1.0, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = DiscreteField::random(&m, &mut rng);
        let u = SpaceTimeField::new(g, (0..3).map(|i| w.scaled(i as f64)).collect()).unwrap();
        let dt = time_derivative(&u);
        // u^{(m)} = m w, k = 1/2: every slab has derivative 2 w.
        for d in &dt {
            for (a, b) in d.cells.iter().zip(&w.cells) {
                assert!((a - 2.0 * b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn riesz_self_duality() {
        let m = generate_square_grid(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (v, w) = (DiscreteField::random(&m, &mut rng), DiscreteField::random(&m, &mut rng));
        let (rv, rw) = (discrete_riesz(&m, &v).unwrap(), discrete_riesz(&m, &w).unwrap());
        assert!((v.l2_dot(&rw, &m) - rv.l2_dot(&w, &m)).abs() < 1e-12);
    }

    #[test]
    fn zero_solution_has_zero_distance() {
        let m = generate_square_grid(2).unwrap();
        let g = TimeGrid::new(1.0, 2).unwrap();
        let heat = ManufacturedHeat::new(&m, 0.0).unwrap();
        let u = SpaceTimeField::new(g, vec![DiscreteField::zeros(&m); 3]).unwrap();
        assert_eq!(delta_time(&m, &heat, &u).unwrap().total, 0.0);
        assert_eq!(zeta_time(&m, &g, &heat.conformity_slabs(&g), ZetaNormalization::default()).unwrap(), 0.0);
        let e = energy_checks(&m, &u).unwrap();
        assert!(e.all_hold() && e.monotone.lhs == 0.0 && e.monotone.rhs == 0.0);
    }

    #[test]
    fn slab_decoupling_matches_random_search() {
        use crate::analysis::conformity_functional;
        use rand::Rng;
        let m = generate_square_grid(2).unwrap();
        let g = TimeGrid::new(1.0, 2).unwrap();
        let k = g.step();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let slabs: Vec<(Vec<f64>, Vec<f64>)> = (0..2)
            .map(|_| {
                let div = (0..m.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let cones = (0..m.n_cones()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                (div, cones)
            })
            .collect();
        let zeta = zeta_time(&m, &g, &slabs, ZetaNormalization::DiscreteNorm).unwrap();
        let ells: Vec<_> = slabs.iter().map(|(d, c)| conformity_functional(&m, d, c).unwrap()).collect();
        // Quotient pieces of v + t dir: numerator a + b t, denominator c + 2 e t + f t^2.
        let num = |v: &[DiscreteField]| -> f64 { v.iter().zip(&ells).map(|(x, l)| k * l.eval(&m, x)).sum() };
        let gram = |v: &[DiscreteField], w: &[DiscreteField]| -> f64 {
            v.iter()
                .zip(w)
                .map(|(x, y)| k * m.dim() as f64 * normal_derivative(&m, x).dot(&normal_derivative(&m, y), &m))
                .sum()
        };
        let mut v: Vec<DiscreteField> = (0..2).map(|_| DiscreteField::random(&m, &mut rng)).collect();
        if num(&v) < 0.0 {
            v.iter_mut().for_each(|x| *x = x.scaled(-1.0));
        }
        for _ in 0..20 {
            for _ in 0..200 {
                let dir: Vec<DiscreteField> = (0..2).map(|_| DiscreteField::random(&m, &mut rng)).collect();
                let (a, b) = (num(&v), num(&dir));
                let (c, e, f) = (gram(&v, &v), gram(&v, &dir), gram(&dir, &dir));
                let t = (a * e - b * c) / (b * e - a * f);
                let q = |t: f64| (a + b * t) / (c + 2.0 * e * t + f * t * t).sqrt();
                if t.is_finite() && q(t) > q(0.0) {
                    v = v.iter().zip(&dir).map(|(x, y)| x.axpy(t, y)).collect();
                }
            }
        }
        let best = num(&v) / gram(&v, &v).sqrt();
        assert!((best - zeta).abs() < 1e-3 * zeta, "search {best} vs decoupled {zeta}");
        assert!(best <= zeta * (1.0 + 1e-12));
    }

    #[test]
    fn riesz_image_of_time_derivative_by_quadrature() {
        // ∫ ∇Rū'·∇v = ∫ ū' v at t = 0.3 for v = x(1-x)y(1-y)(1+x).
        let (x, w) = gauss_legendre(12);
        let a = (-0.3f64).exp();
        let (mut lhs, mut rhs) = (0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            for (yj, wj) in x.iter().zip(&w) {
                let (px, py) = (0.5 + 0.5 * xi, 0.5 + 0.5 * yj);
                let wt = 0.25 * wi * wj;
                let s = (PI * px).sin() * (PI * py).sin();
                let grad_r = [
                    -a * PI * (PI * px).cos() * (PI * py).sin() / (2.0 * PI * PI),
                    -a * PI * (PI * px).sin() * (PI * py).cos() / (2.0 * PI * PI),
                ];
                let v = px * (1.0 - px) * py * (1.0 - py) * (1.0 + px);
                let vx = ((1.0 - 2.0 * px) * (1.0 + px) + px * (1.0 - px)) * py * (1.0 - py);
                let vy = px * (1.0 - px) * (1.0 + px) * (1.0 - 2.0 * py);
                lhs += wt * (grad_r[0] * vx + grad_r[1] * vy);
                rhs += wt * (-a * s) * v;
            }
        }
        assert!((lhs - rhs).abs() < 1e-12);
        let m = generate_square_grid(3).unwrap();
        let heat = ManufacturedHeat::new(&m, 1.0).unwrap();
        let r = heat.riesz_derivative_gradient(0.3).unwrap();
        let gbar = heat.mean_normal_gradient(0.3).unwrap();
        for (x, y) in r.0.iter().zip(&gbar.0) {
            assert!((x + y / (2.0 * PI * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn energy_inequalities_on_random_fields() {
        let m = generate_square_grid(4).unwrap();
        let g = TimeGrid::new(0.7, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let fields = (0..6).map(|_| DiscreteField::random(&m, &mut rng)).collect();
            let e = energy_checks(&m, &SpaceTimeField::new(g, fields).unwrap()).unwrap();
            assert!(e.all_hold(), "{e:?}");
        }
        let w = DiscreteField::random(&m, &mut rng);
        let e = energy_checks(&m, &SpaceTimeField::new(g, vec![w; 6]).unwrap()).unwrap();
        assert!(e.monotone.lhs.abs() < 1e-14 && e.monotone.rhs.abs() < 1e-14);
    }

    #[test]
    fn manufactured_sandwich_on_coarse_grid() {
        let m = generate_square_grid(8).unwrap();
        let g = TimeGrid::new(0.5, 4).unwrap();
        let heat = ManufacturedHeat::new(&m, 1.0).unwrap();
        let run = solve_transient(&m, &g, &heat.problem(&g).unwrap()).unwrap();
        let d = delta_time(&m, &heat, &run.field).unwrap();
        for n in [ZetaNormalization::DiscreteNorm, ZetaNormalization::NormalGradient] {
            let z = zeta_time(&m, &g, &heat.conformity_slabs(&g), n).unwrap();
            assert!(z <= d.total, "{z} > {}", d.total);
        }
        assert!(matches!(
            delta_time(&m, &NoRiesz(&heat), &run.field),
            Err(TpfaError::OracleMissing(_))
        ));
    }

    struct NoRiesz<'a>(&'a ManufacturedHeat);
    impl TransientExact for NoRiesz<'_> {
        fn mean_normal_gradient(&self, t: f64) -> Result<ConeField> {
            self.0.mean_normal_gradient(t)
        }
        fn l2_distance(&self, t: f64, v: &DiscreteField) -> Result<f64> {
            self.0.l2_distance(t, v)
        }
    }
}
