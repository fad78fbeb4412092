//! Read a mesh in the FVCA5 benchmark format, from a file given on the
//! command line or from a small inline example.

use tpfa::mesh::read_fvca5;

const TWO_TRIANGLES: &str = "vertices
4
0 0
1 0
0.5 0.8
0.5 -0.8
triangles
2
1 2 3
1 4 2
quadrangles
0
all edges
5
1 2 1 2
2 3 1 0
3 1 1 0
1 4 2 0
4 2 2 0
";

fn main() -> tpfa::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => TWO_TRIANGLES.to_string(),
    };
    let mesh = read_fvca5(&text)?;
    mesh.check_invariants(1e-10)?;
    let q = mesh.quality();
    println!("{} cells, {} vertices, {} edges", mesh.n_cells(), mesh.vertices().len(), mesh.n_faces());
    println!("h = {}, theta = {}", q.h, q.theta);
    for (k, c) in mesh.cells().iter().enumerate() {
        println!("cell {k}: point ({}, {}), area {}", c.point.x, c.point.y, c.measure);
    }
    Ok(())
}
