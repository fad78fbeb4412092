//! Convergence of the scheme for `ū = sin(πx) sin(πy)` on square grids,
//! with the oscillation bound checked on every level.

use std::f64::consts::PI;

use tpfa::analysis::h2_rate_study;
use tpfa::mesh::generate_square_grid;
use tpfa::space::{Scaled, SineProduct};

fn main() -> tpfa::Result<()> {
    let meshes = [8, 16, 32, 64].into_iter().map(generate_square_grid).collect::<tpfa::Result<Vec<_>>>()?;
    let source = Scaled { factor: 2.0 * PI * PI, inner: SineProduct };
    let table = h2_rate_study(&meshes, &SineProduct, &source, SineProduct::h2_norm())?;
    println!("h,l2,cgrad,theta_osc,osc_bound");
    for l in &table.levels {
        let r = &l.report;
        println!("{},{},{},{},{}", r.quality.h, r.l2_error, r.consistent_grad_error, r.theta, l.oscillation_bound);
    }
    println!("L2 orders: {:?}", table.l2_orders);
    println!("consistent gradient orders: {:?}", table.cgrad_orders);
    Ok(())
}
