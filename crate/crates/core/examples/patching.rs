//! Restrict the regular representation of Z/27 to the fixed vectors of each
//! subgroup and check that the level measures agree on overlaps.

use mackey::groups::FiniteAbelianGroup;
use mackey::repr::regular_representation;
use mackey::spectral::{level_measure, verify_patching, SubgroupLevel};

fn main() -> mackey::Result<()> {
    let a = FiniteAbelianGroup::cyclic(27)?;
    let pi = regular_representation(&a.to_finite_group());
    let levels = a
        .subgroups()
        .iter()
        .map(|u| SubgroupLevel::new(&a, u))
        .collect::<mackey::Result<Vec<_>>>()?;

    for u in &levels {
        let lm = level_measure(&a, &pi, u)?;
        println!(
            "|U| = {:2}: dim V^U = {:2}, support {:?}",
            u.elements().len(),
            lm.basis.ncols(),
            lm.measure.support()
        );
    }
    let mut worst: f64 = 0.0;
    for u in &levels {
        for u2 in &levels {
            let r = verify_patching(&a, &pi, u, u2)?;
            worst = worst.max(r.max_deviation).max(r.max_deviation_from_global);
        }
    }
    println!("largest patching deviation over all pairs: {worst:.1e}");
    Ok(())
}
