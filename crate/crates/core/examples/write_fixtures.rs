//! Regenerates the shipped genus-2 meshes under `fixtures/`.

use std::path::PathBuf;

use renvol::fixtures;
use renvol::mesh::io::save_off;

fn main() -> renvol::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for n in [5, 7] {
        let mesh = fixtures::genus2(n);
        let path = dir.join(format!("genus2_n{n}.off"));
        save_off(&mesh, &path)?;
        println!("{}: {} vertices, {} faces", path.display(), mesh.n_vertices(), mesh.n_faces());
    }
    Ok(())
}
