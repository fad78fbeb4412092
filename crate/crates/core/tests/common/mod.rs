//! Random mesh instances and the operator properties checked on them, shared
//! by the property tests and the acceptance run.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpfa::assembly::{assemble_steady, dual_norm, riesz_solve, solve, LinearFunctional, SteadyProblemData};
use tpfa::mesh::{generate_acute_triangular_grid, generate_square_grid, generate_tensor_grid, AdmissibleMesh};
use tpfa::space::{
    consistent_gradient, discrete_norm, inflated_gradient, normal_derivative, unconstrained_interpolant, Affine,
    DiscreteField, FaceMode, GradientScaling,
};
use tpfa::Point;

pub type Check = Result<(), String>;

/// Sorted random breakpoints of `[0, 1]` with `n` cells and one cell point
/// strictly inside each cell.
fn random_axis(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let mut xs = vec![0.0];
    for x in &w {
        xs.push(xs.last().unwrap() + x);
    }
    xs[n] = 1.0;
    let ps = (0..n).map(|i| xs[i] + rng.gen_range(0.2..0.8) * (xs[i + 1] - xs[i])).collect();
    (xs, ps)
}

/// A seeded mesh from one of three families: square grids, acute
/// triangulations and rectilinear grids with off-centre cell points.
pub fn random_mesh(rng: &mut ChaCha8Rng) -> AdmissibleMesh {
    match rng.gen_range(0..3) {
        0 => generate_square_grid(rng.gen_range(2..7)).unwrap(),
        1 => generate_acute_triangular_grid(rng.gen_range(2..4)).unwrap(),
        _ => {
            let (nx, ny) = (rng.gen_range(2..7), rng.gen_range(2..7));
            let (xs, px) = random_axis(rng, nx);
            let (ys, py) = random_axis(rng, ny);
            generate_tensor_grid(&xs, &ys, &px, &py).unwrap()
        }
    }
}

pub fn instance(seed: u64) -> (AdmissibleMesh, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = random_mesh(&mut rng);
    (mesh, rng)
}

fn close(a: f64, b: f64, rel: f64, what: &str) -> Check {
    if (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300) {
        Ok(())
    } else {
        Err(format!("{what}: {a} vs {b}"))
    }
}

/// `‖u‖_T^2 = d ‖G_T u‖^2 = (1/d) ‖∇_T u‖^2`.
pub fn norm_equivalence(mesh: &AdmissibleMesh, u: &DiscreteField) -> Check {
    let d = mesh.dim() as f64;
    let t = discrete_norm(mesh, u).powi(2);
    close(t, d * normal_derivative(mesh, u).l2_norm(mesh).powi(2), 1e-12, "d‖Gu‖²")?;
    close(t, inflated_gradient(mesh, u).l2_norm(mesh).powi(2) / d, 1e-12, "‖∇u‖²/d")
}

/// `‖u‖_{L^2} <= diam(Ω) ‖u‖_T`.
pub fn poincare(mesh: &AdmissibleMesh, u: &DiscreteField) -> Check {
    let (l, r) = (u.l2_norm(mesh), mesh.domain_diameter() * discrete_norm(mesh, u));
    if l <= r { Ok(()) } else { Err(format!("‖u‖ = {l} > diam ‖u‖_T = {r}")) }
}

/// `(1/|K|) sum |σ| (x̄_σ - x_K) n^T = Id` entrywise.
pub fn geometric_identity(mesh: &AdmissibleMesh) -> Check {
    let d = mesh.dim();
    for k in 0..mesh.n_cells() {
        let m = mesh.geometric_identity(k);
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                if (m[(i, j)] - want).abs() > 1e-12 {
                    return Err(format!("cell {k}: entry ({i},{j}) = {}", m[(i, j)]));
                }
            }
        }
    }
    Ok(())
}

/// Affine functions are reproduced by `G_T` and by `∇̂_T`.
pub fn affine_exactness(mesh: &AdmissibleMesh, a: Point, b: f64) -> Check {
    let u = unconstrained_interpolant(&Affine { a, b }, mesh, FaceMode::Point).map_err(|e| e.to_string())?;
    let scale = 1.0 + a.norm() + b.abs();
    for (g, c) in normal_derivative(mesh, &u).0.iter().zip(mesh.cones()) {
        if (g - a.dot(&c.normal)).abs() > 1e-12 * scale {
            return Err(format!("normal derivative {g} vs {}", a.dot(&c.normal)));
        }
    }
    for g in consistent_gradient(mesh, &u, GradientScaling::Unit).0 {
        if (g - a).norm() > 1e-12 * scale {
            return Err(format!("consistent gradient {g:?} vs {a:?}"));
        }
    }
    Ok(())
}

/// Symmetric M-matrix, and `f >= 0, F = 0` gives `u_K >= 0`.
pub fn m_matrix_and_maximum_principle(mesh: &AdmissibleMesh, f: Vec<f64>) -> Check {
    let data = SteadyProblemData { f, flux: vec![0.0; mesh.n_cones()] };
    let system = assemble_steady(mesh, &data).map_err(|e| e.to_string())?;
    if !system.matrix.is_symmetric() || !system.matrix.is_m_matrix_pattern() {
        return Err("matrix is not a symmetric M-matrix".into());
    }
    let u = solve(mesh, &system).map_err(|e| e.to_string())?;
    let scale = u.cells.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    match u.cells.iter().cloned().fold(f64::INFINITY, f64::min) {
        m if m >= -1e-12 * scale => Ok(()),
        m => Err(format!("negative cell value {m}")),
    }
}

/// `‖w‖_T^2 = ℓ(w)` for the Riesz representative of `ℓ = ⟨z, ·⟩`.
pub fn dual_norm_identity(mesh: &AdmissibleMesh, z: &[f64]) -> Check {
    let ell = LinearFunctional::l2_product(mesh, z);
    let w = riesz_solve(mesh, &ell).map_err(|e| e.to_string())?;
    let n = discrete_norm(mesh, &w);
    close(n * n, ell.eval(mesh, &w), 1e-10, "‖w‖_T² vs ℓ(w)")?;
    close(n, dual_norm(mesh, &ell).map_err(|e| e.to_string())?, 1e-10, "dual norm")
}

/// Every property on one seeded instance, with the failing property named.
pub fn all_properties(seed: u64) -> Vec<(&'static str, Check)> {
    let (mesh, mut rng) = instance(seed);
    let u = DiscreteField::random(&mesh, &mut rng);
    let a = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0);
    let b = rng.gen_range(-1.0..1.0);
    let f: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(0.0..1.0)).collect();
    let z: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    vec![
        ("norm equivalence", norm_equivalence(&mesh, &u)),
        ("discrete Poincaré", poincare(&mesh, &u)),
        ("geometric identity", geometric_identity(&mesh)),
        ("affine exactness", affine_exactness(&mesh, a, b)),
        ("M-matrix and maximum principle", m_matrix_and_maximum_principle(&mesh, f)),
        ("dual-norm identity", dual_norm_identity(&mesh, &z)),
    ]
}
