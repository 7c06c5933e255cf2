//! Matrix representations of finite groups.
//!
//! A [`MatrixRep`] is a table of `dim x dim` complex matrices indexed by the
//! element indices of some [`FiniteGroup`]. Operations that need the group
//! law take the group explicitly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{right_cosets, FiniteGroup, SemidirectGroup, Subgroup};
use crate::linalg::{
    block_diagonal, hermitian_clusters, identity, inverse, max_diff, random_complex, random_hermitian, trace, zeros,
    CMat, HOM_TOL, MATRIX_TOL, ONE,
};

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    dim: usize,
    mats: Vec<CMat>,
}

impl MatrixRep {
    pub fn new(dim: usize, mats: Vec<CMat>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::NotRepresentation("no matrices".into()));
        }
        if let Some(bad) = mats.iter().position(|m| m.shape() != (dim, dim)) {
            return Err(Error::NotRepresentation(format!(
                "matrix {bad} is {:?}, expected {dim}x{dim}",
                mats[bad].shape()
            )));
        }
        Ok(MatrixRep { dim, mats })
    }

    /// The `dim`-dimensional trivial representation of a group of the given order.
    pub fn trivial(group_order: usize, dim: usize) -> Self {
        MatrixRep {
            dim,
            mats: vec![identity(dim); group_order],
        }
    }

    /// A one-dimensional representation from its values.
    pub fn from_scalars(values: &[Complex64]) -> Self {
        MatrixRep {
            dim: 1,
            mats: values.iter().map(|&v| CMat::from_element(1, 1, v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_order(&self) -> usize {
        self.mats.len()
    }

    pub fn mat(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<CMat> {
        self.mats
    }

    /// Largest entrywise deviation from `rho(e) = I` and `rho(g) rho(h) = rho(gh)`.
    pub fn homomorphism_deviation(&self, g: &FiniteGroup) -> f64 {
        if self.mats.len() != g.size() {
            return f64::INFINITY;
        }
        let mut dev = max_diff(&self.mats[g.identity()], &identity(self.dim));
        for x in 0..g.size() {
            for y in 0..g.size() {
                let lhs = &self.mats[x] * &self.mats[y];
                dev = dev.max(max_diff(&lhs, &self.mats[g.mul(x, y)]));
            }
        }
        dev
    }

    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        if self.mats.len() != g.size() {
            return Err(Error::DimensionMismatch {
                expected: g.size(),
                found: self.mats.len(),
            });
        }
        let dev = self.homomorphism_deviation(g);
        if dev > MATRIX_TOL {
            return Err(Error::NotRepresentation(format!("homomorphism deviation {dev:.3e}")));
        }
        Ok(())
    }

    pub fn character(&self) -> ClassFunction {
        ClassFunction {
            values: self.mats.iter().map(trace).collect(),
        }
    }

    /// `T rho(g) T^{-1}`.
    pub fn conjugate(&self, t: &CMat) -> Result<Self> {
        let t_inv = inverse(t).ok_or_else(|| Error::NotRepresentation("singular conjugator".into()))?;
        Ok(MatrixRep {
            dim: self.dim,
            mats: self.mats.iter().map(|m| t * m * &t_inv).collect(),
        })
    }

    pub fn direct_sum(&self, other: &MatrixRep) -> Result<Self> {
        if self.mats.len() != other.mats.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mats.len(),
                found: other.mats.len(),
            });
        }
        Ok(MatrixRep {
            dim: self.dim + other.dim,
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| block_diagonal(a, b))
                .collect(),
        })
    }

    pub fn restrict(&self, sub: &Subgroup) -> Self {
        MatrixRep {
            dim: self.dim,
            mats: sub.embedding.iter().map(|&g| self.mats[g].clone()).collect(),
        }
    }

    /// Largest entrywise difference to another representation of the same group.
    pub fn max_diff(&self, other: &MatrixRep) -> f64 {
        if self.dim != other.dim || self.mats.len() != other.mats.len() {
            return f64::INFINITY;
        }
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| max_diff(a, b))
            .fold(0.0, f64::max)
    }
}

/// Values of a function on group elements, typically a character.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn is_class_function(&self, g: &FiniteGroup, tol: f64) -> bool {
        (0..g.size()).all(|x| (0..g.size()).all(|k| (self.values[g.conjugate(k, x)] - self.values[x]).norm() <= tol))
    }

    /// `(1/|G|) sum_g f(g) conj(f'(g))`.
    pub fn inner(&self, other: &ClassFunction) -> Complex64 {
        let n = self.values.len() as f64;
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            / n
    }

    /// Entries rounded to a grid, for ordering and comparison.
    pub fn canonical_key(&self) -> Vec<(i64, i64)> {
        self.values
            .iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    }
}

/// Left-regular representation: `rho(g) e_x = e_{gx}`.
pub fn regular_representation(g: &FiniteGroup) -> MatrixRep {
    let n = g.size();
    let mats = (0..n)
        .map(|x| {
            let mut m = zeros(n, n);
            for y in 0..n {
                m[(g.mul(x, y), y)] = ONE;
            }
            m
        })
        .collect();
    MatrixRep { dim: n, mats }
}

/// `dim Hom(rho1, rho2) = (1/|G|) sum_g tr rho1(g) conj(tr rho2(g))`.
pub fn hom_dimension(rho1: &MatrixRep, rho2: &MatrixRep) -> Result<usize> {
    if rho1.group_order() != rho2.group_order() {
        return Err(Error::DimensionMismatch {
            expected: rho1.group_order(),
            found: rho2.group_order(),
        });
    }
    let v = rho1.character().inner(&rho2.character());
    let rounded = v.re.round();
    if rounded < 0.0 || (v.re - rounded).abs() >= HOM_TOL || v.im.abs() >= HOM_TOL {
        return Err(Error::NonIntegralHom { re: v.re, im: v.im });
    }
    Ok(rounded as usize)
}

pub fn is_irreducible(rho: &MatrixRep) -> Result<bool> {
    Ok(hom_dimension(rho, rho)? == 1)
}

/// Equivalence of representations of a finite group, decided by characters.
pub fn are_equivalent(rho1: &MatrixRep, rho2: &MatrixRep) -> Result<bool> {
    if rho1.dim() != rho2.dim() {
        return Ok(false);
    }
    let h12 = hom_dimension(rho1, rho2)?;
    let h11 = hom_dimension(rho1, rho1)?;
    let h22 = hom_dimension(rho2, rho2)?;
    Ok(h12 == h11 && h12 == h22)
}

/// Rows of `rho_reg(g) q`: row `y` is row `g^{-1} y` of `q`.
fn left_translate(g: &FiniteGroup, x: usize, q: &CMat) -> CMat {
    let xi = g.inv(x);
    let mut out = zeros(q.nrows(), q.ncols());
    for y in 0..q.nrows() {
        out.set_row(y, &q.row(g.mul(xi, y)));
    }
    out
}

const DECOMPOSE_ATTEMPTS: usize = 8;

/// One irreducible representation per equivalence class, cut out of the
/// regular representation.
///
/// Isotypic blocks are the eigenspaces of a random Hermitian combination
/// of class sums; characters are read off those blocks and checked against
/// the projector formula. A block of dimension `d^2` is split into a single
/// irreducible copy with an equivariantly averaged random operator.
///
/// The output is sorted by dimension, then by character values (descending),
/// so the trivial representation comes first. The result depends only on
/// `seed`; ambiguous eigenvalue clusters trigger a retry with a seed derived
/// from it.
pub fn decompose_regular(g: &FiniteGroup, seed: u64) -> Result<Vec<MatrixRep>> {
    let mut reason = String::new();
    for attempt in 0..DECOMPOSE_ATTEMPTS {
        let s = seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match try_decompose(g, s) {
            Ok(irreps) => return Ok(irreps),
            Err(r) => reason = r,
        }
    }
    Err(Error::DecompositionFailed {
        attempts: DECOMPOSE_ATTEMPTS,
        reason,
    })
}

fn try_decompose(g: &FiniteGroup, seed: u64) -> std::result::Result<Vec<MatrixRep>, String> {
    let n = g.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; n];
    for (c, members) in classes.iter().enumerate() {
        for &x in members {
            class_of[x] = c;
        }
    }

    // Z = sum_j (r_j C_j + conj(r_j) C_j^*) is Hermitian and central, so its
    // eigenspaces are sums of isotypic blocks; generic r_j separates them.
    let weights: Vec<Complex64> = classes.iter().map(|_| random_complex(&mut rng)).collect();
    let f: Vec<Complex64> = (0..n)
        .map(|x| weights[class_of[x]] + weights[class_of[g.inv(x)]].conj())
        .collect();
    let z = CMat::from_fn(n, n, |y, x| f[g.mul(y, g.inv(x))]);
    let scale = f.iter().map(|v| v.norm()).sum::<f64>().max(1.0);
    let blocks = hermitian_clusters(&z, 1e-7 * scale);
    if blocks.len() != classes.len() {
        return Err(format!(
            "{} eigenvalue clusters for {} conjugacy classes",
            blocks.len(),
            classes.len()
        ));
    }

    let mut irreps = Vec::with_capacity(blocks.len());
    for (_, q) in blocks {
        let m = q.ncols();
        let d = (m as f64).sqrt().round() as usize;
        if d * d != m {
            return Err(format!("isotypic block of dimension {m} is not a square"));
        }
        // chi(x) = tr(Q^* rho(x) Q) / d
        let character: Vec<Complex64> = (0..n)
            .map(|x| {
                let xi = g.inv(x);
                let mut s = Complex64::new(0.0, 0.0);
                for y in 0..n {
                    let src = g.mul(xi, y);
                    for a in 0..m {
                        s += q[(y, a)].conj() * q[(src, a)];
                    }
                }
                s / d as f64
            })
            .collect();
        if (character[g.identity()] - Complex64::new(d as f64, 0.0)).norm() > 1e-6 {
            return Err("character does not take the value d at the identity".into());
        }
        // p = (d/|G|) sum_g conj(chi(g)) rho(g) must be the block projector
        let proj = CMat::from_fn(n, n, |y, x| {
            character[g.mul(y, g.inv(x))].conj() * (d as f64 / n as f64)
        });
        if max_diff(&proj, &(&q * q.adjoint())) > 1e-8 {
            return Err("isotypic projector disagrees with the eigenspace".into());
        }

        let w = if d == 1 {
            q
        } else {
            let r = random_hermitian(&mut rng, m);
            let mut t = zeros(m, m);
            for x in 0..n {
                let b = q.adjoint() * left_translate(g, x, &q);
                t += &b * &r * b.adjoint();
            }
            t /= Complex64::new(n as f64, 0.0);
            let tscale = crate::linalg::max_abs(&t).max(1e-300);
            let copies = hermitian_clusters(&t, 1e-6 * tscale);
            if copies.len() != d || copies.iter().any(|(_, v)| v.ncols() != d) {
                return Err(format!(
                    "averaged operator did not split a block of degree {d} into {d} copies"
                ));
            }
            &q * &copies[0].1
        };
        let mats: Vec<CMat> = (0..n).map(|x| w.adjoint() * left_translate(g, x, &w)).collect();
        let rep = MatrixRep { dim: d, mats };
        let dev = rep.homomorphism_deviation(g);
        if dev > MATRIX_TOL {
            return Err(format!("extracted irrep has homomorphism deviation {dev:.3e}"));
        }
        irreps.push(rep);
    }
    sort_irreps(&mut irreps);
    let total: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
    if total != n {
        return Err(format!("sum of squared dimensions {total} != {n}"));
    }
    Ok(irreps)
}

/// Deterministic order: by dimension, then by rounded character values descending.
pub fn sort_irreps(irreps: &mut [MatrixRep]) {
    irreps.sort_by_cached_key(|r| {
        let key: Vec<(i64, i64)> = r
            .character()
            .canonical_key()
            .into_iter()
            .map(|(a, b)| (-a, -b))
            .collect();
        (r.dim(), key)
    });
}

/// `(pi0 . chi)(h, a) = chi(a) pi0(h)` on `H_chi x_t A`.
///
/// `stab` must be the semidirect product of a stabilizer of `chi` with `A`
/// (for example from [`SemidirectGroup::restrict_h`]); `pi0` is indexed by
/// the elements of its `H` part.
pub fn twist_by_character(stab: &SemidirectGroup, pi0: &MatrixRep, chi: usize) -> Result<MatrixRep> {
    if pi0.group_order() != stab.h().size() {
        return Err(Error::DimensionMismatch {
            expected: stab.h().size(),
            found: pi0.group_order(),
        });
    }
    if let Some(h) = (0..stab.h().size()).find(|&h| stab.dual().apply(h, chi) != chi) {
        return Err(Error::NotStabilized { h, character: chi });
    }
    let a = stab.a();
    let mats = (0..stab.order())
        .map(|x| {
            let (h, av) = stab.split(x);
            pi0.mat(h) * a.pairing(chi, av)
        })
        .collect();
    let rep = MatrixRep { dim: pi0.dim(), mats };
    rep.validate(stab.group())?;
    Ok(rep)
}

/// Induced representation on functions `f : G -> V` with
/// `f(s g) = sigma(s) f(g)`, acted on by right translation.
///
/// The basis is indexed by (right coset, basis vector of `V`), cosets in the
/// order of their minimal representatives.
pub fn induce(parent: &FiniteGroup, sub: &Subgroup, sigma: &MatrixRep) -> Result<MatrixRep> {
    if sigma.group_order() != sub.order() {
        return Err(Error::DimensionMismatch {
            expected: sub.order(),
            found: sigma.group_order(),
        });
    }
    for &a in &sub.embedding {
        for &b in &sub.embedding {
            if sub.position(parent.mul(a, b)).is_none() {
                return Err(Error::NotSubgroup(format!(
                    "product of {a} and {b} leaves the subgroup"
                )));
            }
        }
    }
    let (reps, coset_of) = right_cosets(parent, sub);
    let k = sigma.dim();
    let dim = reps.len() * k;
    let mats = (0..parent.size())
        .map(|x| {
            let mut m = zeros(dim, dim);
            for (i, &r) in reps.iter().enumerate() {
                // (pi(x) f)(r_i) = f(r_i x) = sigma(s) f(r_j) with r_i x = s r_j
                let y = parent.mul(r, x);
                let j = coset_of[y];
                let s = parent.mul(y, parent.inv(reps[j]));
                let s_sub = sub.position(s).expect("s lies in the subgroup");
                m.view_mut((i * k, j * k), (k, k)).copy_from(sigma.mat(s_sub));
            }
            m
        })
        .collect();
    Ok(MatrixRep { dim, mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::groups::FiniteGroup;

    #[test]
    fn regular_rep_of_z3() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let reg = regular_representation(&g);
        assert_eq!(reg.dim(), 3);
        assert!(reg.validate(&g).is_ok());
        let chi = reg.character();
        assert_eq!(chi.values[0], Complex64::new(3.0, 0.0));
        assert_eq!(chi.values[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hom_dimension_basics() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let irreps = decompose_regular(&g, 0).unwrap();
        assert_eq!(irreps.len(), 3);
        assert_eq!(hom_dimension(&irreps[0], &irreps[0]).unwrap(), 1);
        assert_eq!(hom_dimension(&irreps[1], &irreps[2]).unwrap(), 0);
        let reg = regular_representation(&FiniteGroup::cyclic(2).unwrap());
        assert!(!is_irreducible(&reg).unwrap());
    }

    #[test]
    fn non_representation_gives_non_integral_hom() {
        let bogus = MatrixRep::from_scalars(&[ONE, Complex64::new(0.5, 0.0)]);
        assert!(matches!(
            hom_dimension(&bogus, &bogus),
            Err(Error::NonIntegralHom { .. })
        ));
    }

    #[test]
    fn affine_f3_irreps() {
        let g = catalog::affine(3).unwrap();
        let irreps = decompose_regular(g.group(), 0).unwrap();
        let dims: Vec<usize> = irreps.iter().map(|r| r.dim()).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        let reg = regular_representation(g.group());
        assert_eq!(hom_dimension(&reg, &irreps[2]).unwrap(), 2);
        assert!(is_irreducible(&irreps[2]).unwrap());
        // trivial first
        assert!(irreps[0].character().values.iter().all(|v| (v - ONE).norm() < 1e-9));
    }

    #[test]
    fn decomposition_is_reproducible() {
        let g = catalog::heisenberg(2).unwrap();
        let a = decompose_regular(g.group(), 5).unwrap();
        let b = decompose_regular(g.group(), 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn twisting_checks_the_stabilizer() {
        let g = catalog::affine(3).unwrap();
        let whole = Subgroup::whole(g.h());
        let (k, _) = g.restrict_h(&whole);
        let pi0 = MatrixRep::trivial(2, 1);
        let err = twist_by_character(&k, &pi0, 1).unwrap_err();
        assert!(matches!(err, Error::NotStabilized { h: 1, character: 1 }));
        let ok = twist_by_character(&k, &pi0, 0).unwrap();
        assert!(ok.mats().iter().all(|m| (m[(0, 0)] - ONE).norm() < 1e-15));
    }

    #[test]
    fn induction_rejects_non_subgroups() {
        let g = catalog::affine(3).unwrap();
        let fake = Subgroup {
            group: FiniteGroup::cyclic(2).unwrap(),
            embedding: vec![0, 1],
        };
        let sigma = MatrixRep::trivial(2, 1);
        assert!(matches!(induce(g.group(), &fake, &sigma), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn induction_from_trivial_subgroup_is_regular() {
        let g = catalog::affine(3).unwrap();
        let sub = Subgroup::from_elements(g.group(), &[0]).unwrap();
        let ind = induce(g.group(), &sub, &MatrixRep::trivial(1, 1)).unwrap();
        // with minimal coset representatives the basis is the group itself
        assert_eq!(ind.dim(), 6);
        let reg = regular_representation(g.group());
        assert!(are_equivalent(&ind, &reg).unwrap());
        assert!(ind.validate(g.group()).is_ok());
    }

    #[test]
    fn induction_from_whole_group_is_identity() {
        let g = catalog::affine(3).unwrap();
        let irreps = decompose_regular(g.group(), 0).unwrap();
        let whole = Subgroup::whole(g.group());
        let ind = induce(g.group(), &whole, &irreps[2]).unwrap();
        assert!(ind.max_diff(&irreps[2]) < 1e-15);
    }
}
