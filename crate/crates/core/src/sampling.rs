//! Seeded random inputs for the verification suites and property tests.

use rand::Rng;

use crate::groups::FiniteAbelianGroup;
use crate::linalg::{inverse, random_invertible, CMat};
use crate::repr::MatrixRep;

/// `S diag(chi_1(a), ..., chi_d(a)) S^{-1}` with random characters `chi_k`
/// and a random well-conditioned `S`.
pub fn random_abelian_rep<R: Rng + ?Sized>(a: &FiniteAbelianGroup, dim: usize, rng: &mut R) -> MatrixRep {
    let chars: Vec<usize> = (0..dim).map(|_| rng.random_range(0..a.order())).collect();
    let s = random_invertible(rng, dim);
    let s_inv = inverse(&s).expect("random_invertible returns an invertible matrix");
    let mats = (0..a.order())
        .map(|x| {
            let d = CMat::from_diagonal(&chars.iter().map(|&chi| a.pairing(chi, x)).collect::<Vec<_>>().into());
            &s * d * &s_inv
        })
        .collect();
    MatrixRep::new(dim, mats).expect("square matrices of equal size")
}

/// A finite abelian group of order at most `max_order`, as a product of one
/// to three cyclic factors of order at least 2.
pub fn random_abelian_group<R: Rng + ?Sized>(max_order: u64, rng: &mut R) -> FiniteAbelianGroup {
    let mut orders = Vec::new();
    let mut remaining = max_order.max(2);
    while orders.len() < 3 && remaining >= 2 {
        let n = rng.random_range(2..=remaining);
        orders.push(n);
        remaining /= n;
        if rng.random_bool(0.5) {
            break;
        }
    }
    FiniteAbelianGroup::new(&orders).expect("positive orders")
}
