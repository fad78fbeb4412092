//! The minimal-regularity solution: exact norms on the square, on the balls
//! `B_∞(r)`, and the incomplete gamma function behind them.

use tpfa::singular::{gamma, upper_incomplete_gamma, SingularSolution};

fn main() -> tpfa::Result<()> {
    let u = SingularSolution::default();
    let (g, v) = u.exact_norms(u.r0)?;
    println!("whole square: ‖∇ū‖ = {g}, ‖ū‖ = {v}");
    println!("r,grad_norm,l2_norm");
    for p in [1.0f64, 2.0, 5.0, 10.0, 20.0] {
        let r = (-p).exp();
        let (g, v) = u.exact_norms(r)?;
        println!("{r:e},{g},{v:e}");
    }
    println!("Γ(1/2)^2 = {} (π = {})", gamma(0.5)?.powi(2), std::f64::consts::PI);
    println!("Γ(5/4, 2) = {}", upper_incomplete_gamma(1.25, 2.0)?);
    Ok(())
}
