//! Heat equation with the coupling `u(0) - Φ u(T) = ξ0`: time-periodic
//! (`Φ = identity`) and damped (`Φ = λ Id`) problems.

use tpfa::assembly::SteadyProblemData;
use tpfa::mesh::generate_square_grid;
use tpfa::transient::{energy_checks, solve_transient, CouplingMap, TimeGrid, TransientProblemData};

fn main() -> tpfa::Result<()> {
    let mesh = generate_square_grid(16)?;
    let grid = TimeGrid::new(1.0, 10)?;
    // Source switched on during the first half period only.
    let slabs: Vec<SteadyProblemData> = (1..=grid.steps())
        .map(|m| {
            let on = if grid.slab(m).1 <= 0.5 { 10.0 } else { 0.0 };
            SteadyProblemData { f: vec![on; mesh.n_cells()], flux: vec![0.0; mesh.n_cones()] }
        })
        .collect();
    for coupling in [CouplingMap::Identity, CouplingMap::scaled(0.5)?, CouplingMap::Zero] {
        let data = TransientProblemData { slabs: slabs.clone(), xi0: vec![0.0; mesh.n_cells()], coupling };
        let run = solve_transient(&mesh, &grid, &data)?;
        let norms: Vec<String> = run.field.fields.iter().map(|f| format!("{:.5}", f.l2_norm(&mesh))).collect();
        println!("{coupling:?}: {} sweeps, ‖u(t_m)‖ = [{}]", run.sweeps, norms.join(", "));
        println!("  energy inequalities hold: {}", energy_checks(&mesh, &run.field)?.all_hold());
    }
    Ok(())
}
