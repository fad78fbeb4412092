//! Solve `-Δu = f + div F` on a square grid with a piecewise-constant flux
//! datum, then check the discrete equations and the local conservation.

use tpfa::assembly::{assemble_steady, solve_with, strong_residuals, weak_residual, SolveOptions, SteadyProblemData};
use tpfa::mesh::generate_square_grid;
use tpfa::space::DiscreteField;
use rand::SeedableRng;

fn main() -> tpfa::Result<()> {
    let mesh = generate_square_grid(32)?;
    // F = (1, 0) on the left half, zero elsewhere: an H^{-1} datum with a
    // jump along x = 1/2.
    let flux = mesh
        .cones()
        .iter()
        .map(|c| if mesh.cells()[c.cell].point.x < 0.5 { c.normal.x } else { 0.0 })
        .collect();
    let data = SteadyProblemData { f: vec![1.0; mesh.n_cells()], flux };
    let system = assemble_steady(&mesh, &data)?;
    let (u, report) = solve_with(&mesh, &system, &SolveOptions::default())?;
    if let Some(r) = report {
        println!("CG: {} iterations, relative residual {:e}", r.iterations, r.relative_residual);
    }
    let (cells, faces) = strong_residuals(&mesh, &u, &data);
    let worst = cells.iter().chain(&faces).fold(0.0f64, |m, r| m.max(r.abs()));
    println!("largest balance residual: {worst:e}");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let v = DiscreteField::random(&mesh, &mut rng);
    println!("weak residual against a random field: {:e}", weak_residual(&mesh, &u, &v, &data.functional(&mesh)?, 0.0));
    let max = u.cells.iter().cloned().fold(f64::MIN, f64::max);
    println!("max cell value: {max}");
    Ok(())
}
