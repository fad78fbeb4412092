//! Error functionals of the steady scheme and numerical checks of the
//! inequalities relating them.

use std::f64::consts::PI;

use crate::assembly::{assemble_steady, dual_norm, solve, LinearFunctional, SteadyProblemData};
use crate::error::{Result, TpfaError};
use crate::mesh::{AdmissibleMesh, MeshQuality};
use crate::sparse::{pcg, CsrMatrix};
use crate::space::{
    canonical_interpolant, cell_l2_deviation, cell_value_moments, cell_vector_deviation, cell_vector_moments,
    consistent_gradient, mean_normal_gradient, normal_derivative, oscillation, pointwise_normal_gradient, ConeField,
    DiscreteField, ExactSolution, FaceMode, GradientField, GradientScaling,
};

/// Dual norms below this are reported as zero.
pub const ZETA_FLOOR: f64 = 1e-9;

/// Everything measured on one mesh for one exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub quality: MeshQuality,
    /// `‖ū - u‖_{L^2}`.
    pub l2_error: f64,
    /// `‖𝒢_T ū - G_T u‖_{L^2}`.
    pub normal_grad_error: f64,
    /// `δ_T(ū, u)`.
    pub delta: f64,
    /// `‖∇̂_T u - ∇ū‖_{L^2}`.
    pub consistent_grad_error: f64,
    /// `ζ_T(∇ū + F)`.
    pub conformity: f64,
    /// `δ_T(ū, ū_T)`, the upper bound used for the interpolation error.
    pub interp_upper: f64,
    /// `Θ_T(∇ū)`.
    pub theta: f64,
    /// `‖ū_T - u‖_{L^2}` over cell values.
    pub cell_gap: f64,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "h,theta,l2,ngrad,delta,cgrad,zeta,interp_ub,theta_osc";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.quality.h,
            self.quality.theta,
            self.l2_error,
            self.normal_grad_error,
            self.delta,
            self.consistent_grad_error,
            self.conformity,
            self.interp_upper,
            self.theta
        )
    }

    /// Row `h,e1,e2,e3,e4,e5` in the layout of the singular benchmark table.
    pub fn benchmark_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.quality.h, self.cell_gap, self.l2_error, self.normal_grad_error, self.delta, self.interp_upper
        )
    }
}

/// The parts of `δ_T(φ, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub l2: f64,
    pub normal_grad: f64,
    pub delta: f64,
}

/// `δ_T(φ, v) = ‖φ - v‖/diam(Ω) + √d ‖𝒢_T φ - G_T v‖`, given `𝒢_T φ`.
pub fn delta_with<E: ExactSolution + ?Sized>(
    phi: &E,
    mesh: &AdmissibleMesh,
    means: &ConeField,
    v: &DiscreteField,
) -> Result<Distance> {
    v.check_shape(mesh)?;
    let l2 = cell_l2_deviation(phi, mesh, &v.cells)?.iter().sum::<f64>().sqrt();
    let normal_grad = means.sub(&normal_derivative(mesh, v)).l2_norm(mesh);
    let delta = l2 / mesh.domain_diameter() + (mesh.dim() as f64).sqrt() * normal_grad;
    Ok(Distance { l2, normal_grad, delta })
}

/// `δ_T(φ, v)`.
pub fn delta<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh, v: &DiscreteField) -> Result<Distance> {
    delta_with(phi, mesh, &mean_normal_gradient(phi, mesh)?, v)
}

/// Conformity error `ζ_T(φ)` of an `H_div` field given by `∫_K div φ` per
/// cell and the cone means of `φ·n_{K,sigma}`.
///
/// The supremum over `X_T` is attained at the Riesz representative of
/// `v ↦ sum_K (∫_K div φ) v_K + sum_{K,sigma} |sigma| φ̄_{K,sigma}·n (v_sigma - v_K)`.
pub fn conformity_error(mesh: &AdmissibleMesh, cell_div_integrals: &[f64], cone_normal_means: &[f64]) -> Result<f64> {
    let ell = conformity_functional(mesh, cell_div_integrals, cone_normal_means)?;
    let z = dual_norm(mesh, &ell)?;
    Ok(if z < ZETA_FLOOR { 0.0 } else { z })
}

pub(crate) fn conformity_functional(
    mesh: &AdmissibleMesh,
    cell_div_integrals: &[f64],
    cone_normal_means: &[f64],
) -> Result<LinearFunctional> {
    if cell_div_integrals.len() != mesh.n_cells() || cone_normal_means.len() != mesh.n_cones() {
        return Err(TpfaError::DataMisalignment("conformity data does not match the mesh".into()));
    }
    Ok(LinearFunctional {
        cell: cell_div_integrals.to_vec(),
        cone: mesh.cones().iter().zip(cone_normal_means).map(|(c, m)| mesh.faces()[c.face].measure * m).collect(),
    })
}

/// `ζ_T(∇ū + F)` for a problem whose scheme data are `data`, using
/// `div(∇ū + F) = -f`.
pub fn solution_conformity(mesh: &AdmissibleMesh, means: &ConeField, data: &SteadyProblemData) -> Result<f64> {
    let div: Vec<f64> = mesh.cells().iter().zip(&data.f).map(|(c, f)| -c.measure * f).collect();
    let cone: Vec<f64> = means.0.iter().zip(&data.flux).map(|(g, f)| g + f).collect();
    conformity_error(mesh, &div, &cone)
}

/// Consistent-gradient error together with its computable bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    pub error: f64,
    pub bound: f64,
    pub theta: f64,
}

/// `‖∇̂_T u - ∇φ‖` and the bound `(d/θ_T)(‖G_T u - 𝒢_T φ‖ + Θ_T(∇φ))`.
///
/// Fails with `BoundViolation` if the bound does not hold, which can only
/// mean a defect somewhere upstream.
pub fn consistent_gradient_error<E: ExactSolution + ?Sized>(
    phi: &E,
    mesh: &AdmissibleMesh,
    means: &ConeField,
    u: &DiscreteField,
) -> Result<GradientCheck> {
    let grad = GradientField(phi);
    let cg = consistent_gradient(mesh, u, GradientScaling::Unit);
    let error = cell_vector_deviation(&grad, mesh, &cg.0)?.iter().sum::<f64>().sqrt();
    let theta = oscillation(&grad, mesh)?;
    let ng = means.sub(&normal_derivative(mesh, u)).l2_norm(mesh);
    let q = mesh.quality();
    let bound = mesh.dim() as f64 / q.theta * (ng + theta);
    if error > bound * (1.0 + 1e-9) + 1e-12 {
        return Err(TpfaError::BoundViolation(format!("consistent gradient error {error:e} exceeds {bound:e}")));
    }
    Ok(GradientCheck { error, bound, theta })
}

/// Which normal gradient of `ū` enters the error functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalGradientMode {
    /// Cone mean of `∇ū·n`.
    #[default]
    Mean,
    /// `∇ū(x̄_sigma)·n`, for comparison only.
    Pointwise,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub normal_gradient: NormalGradientMode,
    pub interpolant_faces: Option<FaceMode>,
}

/// Full error report for a computed solution `u` of the scheme with data
/// `data` and exact solution `phi`.
pub fn error_report<E: ExactSolution + ?Sized>(
    phi: &E,
    mesh: &AdmissibleMesh,
    u: &DiscreteField,
    data: &SteadyProblemData,
    opts: &ReportOptions,
) -> Result<ErrorReport> {
    let means = match opts.normal_gradient {
        NormalGradientMode::Mean => mean_normal_gradient(phi, mesh)?,
        NormalGradientMode::Pointwise => pointwise_normal_gradient(phi, mesh)?,
    };
    let d_u = delta_with(phi, mesh, &means, u)?;
    let interp = canonical_interpolant(phi, mesh, opts.interpolant_faces.unwrap_or(FaceMode::Point))?;
    let d_i = delta_with(phi, mesh, &means, &interp)?;
    let grad = consistent_gradient_error(phi, mesh, &means, u)?;
    let conformity = solution_conformity(mesh, &means, data)?;
    let cell_gap = mesh
        .cells()
        .iter()
        .zip(interp.cells.iter().zip(&u.cells))
        .map(|(c, (a, b))| c.measure * (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(ErrorReport {
        quality: mesh.quality(),
        l2_error: d_u.l2,
        normal_grad_error: d_u.normal_grad,
        delta: d_u.delta,
        consistent_grad_error: grad.error,
        conformity,
        interp_upper: d_i.delta,
        theta: grad.theta,
        cell_gap,
    })
}

/// Margins of the two computable consequences of the error estimate:
/// `ζ <= δ(ū,u)` and `δ(ū,u) <= 3(ζ + δ(ū,ū_T))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichCheck {
    pub lower_margin: f64,
    pub upper_margin: f64,
}

impl SandwichCheck {
    pub fn passed(&self) -> bool {
        self.lower_margin >= -ZETA_FLOOR && self.upper_margin >= 0.0
    }
}

pub fn sandwich_check(report: &ErrorReport) -> SandwichCheck {
    SandwichCheck {
        lower_margin: report.delta - report.conformity,
        upper_margin: 3.0 * (report.conformity + report.interp_upper) - report.delta,
    }
}

/// `p_i = log(e_i/e_{i+1}) / log(h_i/h_{i+1})` for consecutive levels.
pub fn observed_orders(h: &[f64], e: &[f64]) -> Vec<f64> {
    h.windows(2).zip(e.windows(2)).map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect()
}

/// Lemma-style estimate of the deviation from the cell mean:
/// returns the largest ratio of `∫_K (φ̄_K - φ)^2` to
/// `h_K^2 (C_d h_K^d / |K|) ∫_K |∇φ|^2` over all cells, `C_d = π` for `d = 2`.
pub fn mean_value_ratio<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh) -> Result<f64> {
    if mesh.dim() != 2 {
        return Err(TpfaError::UnsupportedDimension(mesh.dim()));
    }
    let m = cell_value_moments(phi, mesh)?;
    let means: Vec<f64> = m.iter().zip(mesh.cells()).map(|((m1, _), c)| m1 / c.measure).collect();
    let dev = cell_l2_deviation(phi, mesh, &means)?;
    let energy = cell_vector_moments(&GradientField(phi), mesh)?;
    let mut worst: f64 = 0.0;
    for ((c, dev), (_, e)) in mesh.cells().iter().zip(&dev).zip(&energy) {
        let h = c.diameter;
        let rhs = h * h * (PI * h * h / c.measure) * e;
        if rhs > 0.0 {
            worst = worst.max(dev / rhs);
        } else if *dev > 1e-14 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(worst)
}

/// One level of a smooth-solution convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyLevel {
    pub report: ErrorReport,
    /// `h_T ‖ū‖_{H^2} / θ_T^{d/2}`, the bound for `Θ_T(∇ū)`.
    pub oscillation_bound: f64,
}

/// Observed orders across a study.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub levels: Vec<StudyLevel>,
    pub l2_orders: Vec<f64>,
    pub cgrad_orders: Vec<f64>,
}

/// Solve `-Δū = f` with `F = 0` on every mesh and collect error reports.
///
/// `source` evaluates `f`; `h2_norm` is `‖ū‖_{H^2}`.
pub fn h2_rate_study<E, S>(meshes: &[AdmissibleMesh], phi: &E, source: &S, h2_norm: f64) -> Result<RateTable>
where
    E: ExactSolution + ?Sized,
    S: ExactSolution + ?Sized,
{
    let mut levels = Vec::with_capacity(meshes.len());
    for mesh in meshes {
        let f = cell_value_moments(source, mesh)?.iter().zip(mesh.cells()).map(|((m, _), c)| m / c.measure).collect();
        let data = SteadyProblemData { f, flux: vec![0.0; mesh.n_cones()] };
        let u = solve(mesh, &assemble_steady(mesh, &data)?)?;
        let report = error_report(phi, mesh, &u, &data, &ReportOptions::default())?;
        let q = report.quality;
        let oscillation_bound = q.h / q.theta.powf(mesh.dim() as f64 / 2.0) * h2_norm;
        levels.push(StudyLevel { report, oscillation_bound });
    }
    let h: Vec<f64> = levels.iter().map(|l| l.report.quality.h).collect();
    let l2: Vec<f64> = levels.iter().map(|l| l.report.l2_error).collect();
    let cg: Vec<f64> = levels.iter().map(|l| l.report.consistent_grad_error).collect();
    Ok(RateTable { l2_orders: observed_orders(&h, &l2), cgrad_orders: observed_orders(&h, &cg), levels })
}

/// Minimizer over `X_T` of the quadratic surrogate
/// `‖φ - v‖^2/diam(Ω)^2 + d ‖𝒢_T φ - G_T v‖^2`.
///
/// Its `δ_T` is another upper bound for the interpolation error; it is not
/// the infimum of `δ_T` itself.
pub fn interpolation_surrogate<E: ExactSolution + ?Sized>(phi: &E, mesh: &AdmissibleMesh) -> Result<DiscreteField> {
    let means = mean_normal_gradient(phi, mesh)?;
    let moments = cell_value_moments(phi, mesh)?;
    let nc = mesh.n_cells();
    let n = nc + mesh.n_interior_faces();
    let d = mesh.dim() as f64;
    let diam2 = mesh.domain_diameter().powi(2);
    let mut trip = Vec::new();
    let mut rhs = vec![0.0; n];
    for (k, (c, (m1, _))) in mesh.cells().iter().zip(&moments).enumerate() {
        trip.push((k, k, c.measure / diam2));
        rhs[k] += m1 / diam2;
    }
    for (ci, c) in mesh.cones().iter().enumerate() {
        let w = d * c.measure / (c.distance * c.distance);
        let g = d * c.measure * means.0[ci] / c.distance;
        trip.push((c.cell, c.cell, w));
        rhs[c.cell] -= g;
        if let Some(i) = mesh.faces()[c.face].interior {
            let s = nc + i;
            trip.push((s, s, w));
            trip.push((s, c.cell, -w));
            trip.push((c.cell, s, -w));
            rhs[s] += g;
        }
    }
    let a = CsrMatrix::from_triplets(n, trip);
    let (x, _) = pcg(&a, &rhs, None, 1e-12, 20 * n)?;
    Ok(DiscreteField { cells: x[..nc].to_vec(), faces: x[nc..].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_square_grid;
    use crate::space::{Affine, Scaled, SineProduct};
    use crate::Point;

    #[test]
    fn zero_problem_is_exact() {
        let m = generate_square_grid(3).unwrap();
        let zero = Affine { a: Point::zeros(), b: 0.0 };
        let data = SteadyProblemData::zeros(&m);
        let u = DiscreteField::zeros(&m);
        let r = error_report(&zero, &m, &u, &data, &ReportOptions::default()).unwrap();
        assert_eq!((r.delta, r.conformity, r.interp_upper, r.consistent_grad_error), (0.0, 0.0, 0.0, 0.0));
        let s = sandwich_check(&r);
        assert!(s.passed() && s.lower_margin == 0.0 && s.upper_margin == 0.0);
    }

    #[test]
    fn delta_identity_and_homogeneity() {
        let m = generate_square_grid(4).unwrap();
        let u = DiscreteField::zeros(&m).axpy(0.3, &canonical_interpolant(&SineProduct, &m, FaceMode::Point).unwrap());
        let d = delta(&SineProduct, &m, &u).unwrap();
        assert!((d.delta - (d.l2 / 2f64.sqrt() + 2f64.sqrt() * d.normal_grad)).abs() < 1e-12 * d.delta);
        let scaled = Scaled { factor: -2.5, inner: SineProduct };
        let d2 = delta(&scaled, &m, &u.scaled(-2.5)).unwrap();
        assert!((d2.delta - 2.5 * d.delta).abs() < 1e-9 * d.delta);
    }

    #[test]
    fn gradient_bound_on_smooth_problem() {
        let m = generate_square_grid(16).unwrap();
        let means = mean_normal_gradient(&SineProduct, &m).unwrap();
        let u = canonical_interpolant(&SineProduct, &m, FaceMode::Harmonic).unwrap();
        let g = consistent_gradient_error(&SineProduct, &m, &means, &u).unwrap();
        assert!(g.error <= g.bound && g.error > 0.0);
    }

    #[test]
    fn sine_gradient_conformity_decreases() {
        // φ = ∇(sin πx sin πy), div φ = -2π^2 sin πx sin πy.
        let mut z = Vec::new();
        for n in [4, 8] {
            let m = generate_square_grid(n).unwrap();
            let means = mean_normal_gradient(&SineProduct, &m).unwrap();
            let div: Vec<f64> = cell_value_moments(&SineProduct, &m).unwrap().iter().map(|(m1, _)| -2.0 * PI * PI * m1).collect();
            z.push(conformity_error(&m, &div, &means.0).unwrap() * n as f64);
        }
        // ζ_T <= C h with a stable constant.
        assert!(z[1] <= z[0] * 1.2, "{z:?}");
    }

    #[test]
    fn mean_value_estimate_holds() {
        let m = generate_square_grid(4).unwrap();
        assert!(mean_value_ratio(&SineProduct, &m).unwrap() <= 1.01);
    }

    #[test]
    fn surrogate_beats_point_interpolant_on_its_own_objective() {
        let m = generate_square_grid(6).unwrap();
        let means = mean_normal_gradient(&SineProduct, &m).unwrap();
        let objective = |v: &DiscreteField| {
            let d = delta_with(&SineProduct, &m, &means, v).unwrap();
            (d.l2 / m.domain_diameter()).powi(2) + 2.0 * d.normal_grad.powi(2)
        };
        let s = interpolation_surrogate(&SineProduct, &m).unwrap();
        let p = canonical_interpolant(&SineProduct, &m, FaceMode::Point).unwrap();
        assert!(objective(&s) <= objective(&p) + 1e-12);
    }

    #[test]
    fn orders_of_halving() {
        let o = observed_orders(&[0.5, 0.25, 0.125], &[1.0, 0.25, 0.0625]);
        assert!(o.iter().all(|p| (p - 2.0).abs() < 1e-12));
    }
}
