//! Compare intertwiner dimensions between stabilizer irreps with those
//! between the representations they induce.

use mackey::catalog;
use mackey::mackey::hom_correspondence_check;

fn main() -> mackey::Result<()> {
    for (name, g) in [
        ("S3 x Z/2", catalog::direct_product(catalog::s3_table(), &[2])?),
        ("affine F_5", catalog::affine(5)?),
    ] {
        for orbit in g.dual().orbits() {
            let hc = hom_correspondence_check(&g, orbit.representative, 0)?;
            println!(
                "{name}, orbit of {}: {:?} ({})",
                orbit.representative,
                hc.induced,
                hc.passed()
            );
        }
    }
    Ok(())
}
