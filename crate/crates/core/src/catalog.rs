//! Ready-made semidirect products used by the examples, the CLI suites and
//! the test-suite.

use crate::error::Result;
use crate::groups::{ActionHom, FiniteAbelianGroup, FiniteGroup, SemidirectGroup};

/// The affine group of `Z/n`: `(Z/n)^x` acting on `Z/n` by multiplication.
/// For prime `n` this is the affine group of the field with `n` elements.
pub fn affine(n: u64) -> Result<SemidirectGroup> {
    let (h, residues) = FiniteGroup::units_mod(n)?;
    let a = FiniteAbelianGroup::cyclic(n)?;
    let matrices = residues.iter().map(|&r| vec![vec![r as i64]]).collect();
    let t = ActionHom::new(&h, &a, matrices)?;
    SemidirectGroup::new(h, a, t)
}

/// Heisenberg model mod `p`: `Z/p` acting on `(Z/p)^2` by `t_c(a, b) = (a, b + c a)`.
pub fn heisenberg(p: u64) -> Result<SemidirectGroup> {
    let h = FiniteGroup::cyclic(p as usize)?;
    let a = FiniteAbelianGroup::new(&[p, p])?;
    let matrices = (0..p as i64).map(|c| vec![vec![1, 0], vec![c, 1]]).collect();
    let t = ActionHom::new(&h, &a, matrices)?;
    SemidirectGroup::new(h, a, t)
}

/// `H x A` with the trivial action.
pub fn direct_product(h: FiniteGroup, orders: &[u64]) -> Result<SemidirectGroup> {
    let a = FiniteAbelianGroup::new(orders)?;
    let t = ActionHom::trivial(&h, &a);
    SemidirectGroup::new(h, a, t)
}

/// `Z/2` acting on `Z/n` by negation (the dihedral group of order `2n`).
pub fn dihedral(n: u64) -> Result<SemidirectGroup> {
    let h = FiniteGroup::cyclic(2)?;
    let a = FiniteAbelianGroup::cyclic(n)?;
    let t = ActionHom::new(&h, &a, vec![vec![vec![1]], vec![vec![-1]]])?;
    SemidirectGroup::new(h, a, t)
}

/// The symmetric group on three letters, as the multiplication table of the
/// affine group of `Z/3`.
pub fn s3_table() -> FiniteGroup {
    affine(3).expect("affine group of Z/3").group().clone()
}

/// Named groups on which every correspondence is checked end to end.
pub fn standard() -> Vec<(String, SemidirectGroup)> {
    let mut out = Vec::new();
    for p in [3, 5, 7] {
        out.push((format!("affine F_{p}"), affine(p).expect("affine")));
    }
    for p in [2, 3] {
        out.push((format!("Heisenberg mod {p}"), heisenberg(p).expect("heisenberg")));
    }
    out.push((
        "Z/2 x Z/3 (direct)".into(),
        direct_product(FiniteGroup::cyclic(2).expect("Z/2"), &[3]).expect("direct"),
    ));
    out.push((
        "S_3 x Z/2 (direct)".into(),
        direct_product(s3_table(), &[2]).expect("direct"),
    ));
    out
}

/// Cyclic towers `Z/p^N` with the unit group, the sign action and the
/// trivial action. Used for coverage beyond [`standard`].
pub fn towers() -> Vec<(String, SemidirectGroup)> {
    let mut out = Vec::new();
    for (p, n) in [(2u64, 2u32), (2, 3), (3, 2), (5, 1)] {
        let m = p.pow(n);
        out.push((format!("(Z/{m})^x on Z/{m}"), affine(m).expect("affine")));
        out.push((format!("Z/2 sign on Z/{m}"), dihedral(m).expect("dihedral")));
        out.push((
            format!("trivial on Z/{m}"),
            direct_product(FiniteGroup::trivial(), &[m]).expect("trivial"),
        ));
    }
    out
}
