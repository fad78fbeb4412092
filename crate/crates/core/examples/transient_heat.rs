//! Manufactured heat problem `ū = e^{-t} sin(πx) sin(πy)` under simultaneous
//! refinement of space and time.

use tpfa::analysis::observed_orders;
use tpfa::mesh::generate_square_grid;
use tpfa::transient::{delta_time, energy_checks, solve_transient, zeta_time, ManufacturedHeat, TimeGrid, ZetaNormalization};

fn main() -> tpfa::Result<()> {
    let t_final = 0.5;
    let mut hs = Vec::new();
    let mut deltas = Vec::new();
    println!("n,N,delta,riesz,grad,max,zeta,zeta_interp_ratio");
    for (n, steps) in [(8, 4), (16, 8), (32, 16)] {
        let mesh = generate_square_grid(n)?;
        let grid = TimeGrid::new(t_final, steps)?;
        let heat = ManufacturedHeat::new(&mesh, 1.0)?;
        let run = solve_transient(&mesh, &grid, &heat.problem(&grid)?)?;
        let d = delta_time(&mesh, &heat, &run.field)?;
        let zeta = zeta_time(&mesh, &grid, &heat.conformity_slabs(&grid), ZetaNormalization::default())?;
        let interp = delta_time(&mesh, &heat, &heat.interpolant(&grid)?)?;
        assert!(energy_checks(&mesh, &run.field)?.all_hold());
        println!(
            "{n},{steps},{},{},{},{},{zeta},{}",
            d.total,
            d.riesz,
            d.gradient,
            d.max_l2,
            d.total / (zeta + interp.total)
        );
        hs.push(1.0 / n as f64);
        deltas.push(d.total);
    }
    println!("orders: {:?}", observed_orders(&hs, &deltas));
    Ok(())
}
