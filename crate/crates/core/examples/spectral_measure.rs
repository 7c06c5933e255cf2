//! Decompose a representation of Z/4 into its spectral measure, rebuild it
//! from the atoms and locate the support of a few vectors.

use mackey::groups::FiniteAbelianGroup;
use mackey::linalg::{random_invertible, CVec};
use mackey::repr::MatrixRep;
use mackey::spectral::{reconstruct_rep, spectral_measure, support_of_vector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mackey::Result<()> {
    let a = FiniteAbelianGroup::cyclic(4)?;
    let i = Complex64::new(0.0, 1.0);
    let diag: Vec<_> = (0..4u32)
        .map(|x| CVec::from_vec(vec![i.powu(x), (-i).powu(x), Complex64::new(-1.0, 0.0).powu(x)]))
        .map(|d| mackey::linalg::CMat::from_diagonal(&d))
        .collect();
    // hide the diagonal form behind a random change of basis
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pi = MatrixRep::new(3, diag)?.conjugate(&random_invertible(&mut rng, 3))?;

    let p = spectral_measure(&a, &pi)?;
    for &chi in p.atoms().keys() {
        println!(
            "atom {chi}: exponents {:?}, rank {}",
            a.character(chi).exponents(),
            p.rank(chi)
        );
    }
    let d = p.deviations();
    println!("measure deviation {:.1e}", d.max());
    println!("reconstruction deviation {:.1e}", reconstruct_rep(&p)?.max_diff(&pi));

    let basis = |k: usize| {
        CVec::from_fn(3, |r, _| {
            if r == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    for k in 0..3 {
        println!("support of e_{k}: {:?}", support_of_vector(&p, &basis(k)));
    }
    Ok(())
}
