//! Build `Z/7 x| (Z/7)^*` by hand, check the group axioms and print the
//! orbits of the dual action with their stabilizers.

use mackey::groups::{ActionHom, FiniteAbelianGroup, FiniteGroup, SemidirectGroup};

fn main() -> mackey::Result<()> {
    let p = 7;
    let (h, units) = FiniteGroup::units_mod(p)?;
    let a = FiniteAbelianGroup::cyclic(p)?;
    // the unit r acts on Z/p by multiplication
    let mats = units.iter().map(|&r| vec![vec![r as i64]]).collect();
    let t = ActionHom::new(&h, &a, mats)?;
    let g = SemidirectGroup::new(h, a, t)?;

    println!("|G| = {} (|H| = {}, |A| = {})", g.order(), g.h().size(), g.a().order());
    println!("axioms hold: {}", g.verify_axioms().all());

    // (h, a)(h', a') = (hh', a + t_h(a'))
    let x = g.index(2, 3);
    let y = g.index(4, 1);
    let (hx, ax) = g.split(g.group().mul(x, y));
    println!("(2, 3) * (4, 1) = ({hx}, {ax})");

    for (k, orbit) in g.dual().orbits().iter().enumerate() {
        let stab = g.dual().stabilizer(g.h(), orbit.representative);
        println!(
            "orbit {k}: representative {}, size {}, stabilizer order {}",
            orbit.representative,
            orbit.members.len(),
            stab.order()
        );
    }
    Ok(())
}
