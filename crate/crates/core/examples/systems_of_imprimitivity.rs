//! Pass between representations of the affine group of F_5 and systems of
//! imprimitivity: restrict, reassemble, compare and read off supports.

use mackey::catalog;
use mackey::imprimitivity::{assemble, restrict_to_system, system_support, systems_equivalent};
use mackey::linalg::random_invertible;
use mackey::repr::decompose_regular;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mackey::Result<()> {
    let g = catalog::affine(5)?;
    let irreps = decompose_regular(g.group(), 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    for (k, pi) in irreps.iter().enumerate() {
        let sys = restrict_to_system(&g, pi)?;
        let back = assemble(&g, &sys)?;
        let support = system_support(&g, &sys);
        println!(
            "irrep {k} (dim {}): covariance {:.1e}, round trip {:.1e}, support {:?} ({:?})",
            pi.dim(),
            sys.covariance_deviation(&g).0,
            back.max_diff(pi),
            support.characters,
            support.orbit
        );
    }

    let big = irreps.last().expect("at least one irrep");
    let conjugated = big.conjugate(&random_invertible(&mut rng, big.dim()))?;
    let s1 = restrict_to_system(&g, big)?;
    let s2 = restrict_to_system(&g, &conjugated)?;
    println!(
        "conjugate systems equivalent: {}",
        systems_equivalent(&g, &s1, &s2, 0).is_some()
    );

    let sum = restrict_to_system(&g, &irreps[0].direct_sum(big)?)?;
    println!("sum of trivial and top irrep: {:?}", system_support(&g, &sum).orbit);
    Ok(())
}
