//! Generate the built-in mesh families, print their quality and round-trip
//! one through the text format.

use tpfa::mesh::{generate_acute_triangular_grid, generate_square_grid, read_mesh, write_mesh};

fn main() -> tpfa::Result<()> {
    println!("family,n,cells,vertices,faces,h,theta");
    for n in [2, 4, 8] {
        for (name, mesh) in [("square", generate_square_grid(n)?), ("acute", generate_acute_triangular_grid(n)?)] {
            let q = mesh.quality();
            println!("{name},{n},{},{},{},{},{}", mesh.n_cells(), mesh.vertices().len(), mesh.n_faces(), q.h, q.theta);
        }
    }
    let mesh = generate_acute_triangular_grid(2)?;
    let text = write_mesh(&mesh);
    let back = read_mesh(&text)?;
    assert_eq!(back.n_cells(), mesh.n_cells());
    println!("round trip through {} bytes of text: ok", text.len());
    Ok(())
}
