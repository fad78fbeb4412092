//! Minimal-regularity benchmark on the in-repo acute triangulations.
//!
//! Run with `cargo run --release --example singular_benchmark [levels]`.

use std::time::Instant;

use tpfa::analysis::observed_orders;
use tpfa::mesh::generate_acute_triangular_grid;
use tpfa::singular::{run_level, BENCHMARK_HEADER};

fn main() -> tpfa::Result<()> {
    let levels: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    println!("cells,{BENCHMARK_HEADER},sandwich_upper_margin,seconds");
    let mut h = Vec::new();
    let mut e2 = Vec::new();
    for l in 0..levels {
        let t = Instant::now();
        let mesh = generate_acute_triangular_grid(4 << l)?;
        let level = run_level(&mesh)?;
        println!(
            "{},{},{:.3e},{:.2}",
            level.cells,
            level.report.benchmark_row(),
            level.sandwich.upper_margin,
            t.elapsed().as_secs_f64()
        );
        h.push(level.report.quality.h);
        e2.push(level.report.l2_error);
    }
    println!("observed L2 orders: {:?}", observed_orders(&h, &e2));
    Ok(())
}
