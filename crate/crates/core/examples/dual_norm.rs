//! Riesz representative and dual norm of a linear functional on `X_T`, and
//! the conformity error of a vector field.

use tpfa::analysis::conformity_error;
use tpfa::assembly::{dual_norm, riesz_solve, LinearFunctional};
use tpfa::mesh::generate_acute_triangular_grid;
use tpfa::space::{discrete_norm, normal_derivative};

fn main() -> tpfa::Result<()> {
    let mesh = generate_acute_triangular_grid(4)?;
    // ℓ(v) = ⟨1, v⟩: the Riesz representative solves the discrete Poisson problem.
    let ell = LinearFunctional::l2_product(&mesh, &vec![1.0; mesh.n_cells()]);
    let w = riesz_solve(&mesh, &ell)?;
    let norm = dual_norm(&mesh, &ell)?;
    println!("‖ℓ‖_* = {norm}");
    println!("‖w‖_T = {}, ℓ(w)^(1/2) = {}", discrete_norm(&mesh, &w), ell.eval(&mesh, &w).sqrt());
    println!("‖G w‖ = {}", normal_derivative(&mesh, &w).l2_norm(&mesh));

    // A constant field is conforming: its conformity error vanishes.
    let cones: Vec<f64> = mesh.cones().iter().map(|c| 0.3 * c.normal.x - 1.2 * c.normal.y).collect();
    let zero_div = vec![0.0; mesh.n_cells()];
    println!("conformity error of a constant field: {}", conformity_error(&mesh, &zero_div, &cones)?);
    // Samples of x e_1 paired with zero divergence data are not conforming.
    let cones: Vec<f64> = (0..mesh.n_cones()).map(|i| mesh.face_point(i).x * mesh.cones()[i].normal.x).collect();
    println!("conformity error with a missing divergence: {}", conformity_error(&mesh, &zero_div, &cones)?);
    Ok(())
}
