//! The sparse SPD toolkit on its own: build a matrix from triplets, solve
//! it with preconditioned CG and compare with a dense Cholesky solve.

use tpfa::sparse::{dense_cholesky, pcg, CsrMatrix};

fn main() -> tpfa::Result<()> {
    // 1D Dirichlet Laplacian with 200 unknowns.
    let n = 200;
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 2.0));
        if i + 1 < n {
            t.push((i, i + 1, -1.0));
            t.push((i + 1, i, -1.0));
        }
    }
    let a = CsrMatrix::from_triplets(n, t);
    println!("n = {}, nnz = {}, symmetric = {}, M-matrix pattern = {}", a.n(), a.nnz(), a.is_symmetric(), a.is_m_matrix_pattern());
    let b = vec![1.0; n];
    let (x, report) = pcg(&a, &b, None, 1e-12, 10 * n)?;
    let y = dense_cholesky(&a, &b)?;
    let diff = x.iter().zip(&y).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    println!("CG: {} iterations, residual {:e}; max difference to Cholesky {diff:e}", report.iterations, report.relative_residual);
    Ok(())
}
