//! Transport an irreducible system of the Heisenberg group mod 3 onto the
//! induced model built from its stalk.

use mackey::catalog;
use mackey::imprimitivity::{restrict_to_system, transport_to_induced};
use mackey::repr::decompose_regular;

fn main() -> mackey::Result<()> {
    let g = catalog::heisenberg(3)?;
    let irreps = decompose_regular(g.group(), 0)?;
    let pi = irreps.iter().find(|r| r.dim() == 3).expect("a 3-dimensional irrep");

    let sys = restrict_to_system(&g, pi)?;
    let chi0 = sys.pvm().support()[0];
    let t = transport_to_induced(&g, &sys, chi0)?;

    println!("support {:?}, base point {chi0}", sys.pvm().support());
    println!(
        "stabilizer order {}, stalk dim {}",
        t.stalk.stabilizer.order(),
        t.stalk.basis.ncols()
    );
    println!("coset representatives {:?}", t.coset_reps);
    println!("points r_i^-1[chi0] {:?}", t.points);
    println!("inverse deviation {:.1e}", t.inverse_deviation());
    println!("intertwining deviation {:.1e}", t.intertwining_deviation(&sys));
    Ok(())
}
