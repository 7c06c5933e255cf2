//! Spectral decomposition of representations of finite abelian groups.
//!
//! A representation `pi` of `A` corresponds to a unique projection valued
//! measure on the dual, `pi(a) = sum_chi chi(a) P_chi`, with atoms
//! `P_chi = (1/|A|) sum_a conj(chi(a)) pi(a)`. Subgroups `U` of `A` play the
//! role of compact open subgroups: the fixed space `V^U` carries a measure
//! supported on the annihilator `U^perp`, and measures for different levels
//! agree on common fixed vectors.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::FiniteAbelianGroup;
use crate::linalg::{
    identity, max_abs, max_diff, orthonormal_range, vec_norm, zeros, CMat, CVec, MATRIX_TOL, RANK_CUTOFF,
};
use crate::repr::MatrixRep;

/// Coefficients `c_chi` with `1_E(b) = sum_chi c_chi chi(b)`.
pub fn indicator_to_characters(b: &FiniteAbelianGroup, subset: &[usize]) -> Vec<Complex64> {
    let n = b.order() as f64;
    (0..b.order())
        .map(|chi| subset.iter().map(|&x| b.pairing(chi, x).conj()).sum::<Complex64>() / n)
        .collect()
}

/// `sum_chi c_chi chi(x)`.
pub fn character_sum(b: &FiniteAbelianGroup, coefficients: &[Complex64], x: usize) -> Complex64 {
    coefficients
        .iter()
        .enumerate()
        .map(|(chi, c)| c * b.pairing(chi, x))
        .sum()
}

/// An atomic projection valued measure on the dual of a finite abelian group.
/// Missing atoms are zero; the value on a set is the sum of its atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionValuedMeasure {
    group: FiniteAbelianGroup,
    dim: usize,
    atoms: BTreeMap<usize, CMat>,
}

/// Largest deviations from totality, idempotence and mutual orthogonality.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PvmDeviations {
    pub totality: f64,
    pub idempotence: f64,
    pub orthogonality: f64,
}

impl PvmDeviations {
    pub fn max(&self) -> f64 {
        self.totality.max(self.idempotence).max(self.orthogonality)
    }
}

impl ProjectionValuedMeasure {
    pub fn new(group: FiniteAbelianGroup, dim: usize, atoms: BTreeMap<usize, CMat>) -> Result<Self> {
        for (&chi, m) in &atoms {
            if chi >= group.order() {
                return Err(Error::InvalidPvm(format!("character index {chi} out of range")));
            }
            if m.shape() != (dim, dim) {
                return Err(Error::InvalidPvm(format!(
                    "atom {chi} has shape {:?}, expected {dim}x{dim}",
                    m.shape()
                )));
            }
        }
        Ok(ProjectionValuedMeasure { group, dim, atoms })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &BTreeMap<usize, CMat> {
        &self.atoms
    }

    pub fn atom(&self, chi: usize) -> CMat {
        self.atoms
            .get(&chi)
            .cloned()
            .unwrap_or_else(|| zeros(self.dim, self.dim))
    }

    /// `P_E = sum_{chi in E} P_chi`.
    pub fn set_value(&self, subset: &[usize]) -> CMat {
        let mut out = zeros(self.dim, self.dim);
        for chi in subset {
            if let Some(m) = self.atoms.get(chi) {
                out += m;
            }
        }
        out
    }

    /// Characters with a nonzero atom.
    pub fn support(&self) -> Vec<usize> {
        self.atoms
            .iter()
            .filter(|(_, m)| max_abs(m) > MATRIX_TOL)
            .map(|(&chi, _)| chi)
            .collect()
    }

    /// Rank of an atom, read off its trace.
    pub fn rank(&self, chi: usize) -> usize {
        self.atoms
            .get(&chi)
            .map_or(0, |m| crate::linalg::trace(m).re.round().max(0.0) as usize)
    }

    pub fn deviations(&self) -> PvmDeviations {
        let mut total = zeros(self.dim, self.dim);
        let mut idempotence: f64 = 0.0;
        let mut orthogonality: f64 = 0.0;
        let atoms: Vec<&CMat> = self.atoms.values().collect();
        for (i, p) in atoms.iter().enumerate() {
            total += *p;
            idempotence = idempotence.max(max_diff(&(*p * *p), p));
            for q in &atoms[i + 1..] {
                orthogonality = orthogonality.max(max_abs(&(*p * *q))).max(max_abs(&(*q * *p)));
            }
        }
        PvmDeviations {
            totality: max_diff(&total, &identity(self.dim)),
            idempotence,
            orthogonality,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.deviations();
        if d.max() > MATRIX_TOL {
            return Err(Error::InvalidPvm(format!(
                "totality {:.3e}, idempotence {:.3e}, orthogonality {:.3e}",
                d.totality, d.idempotence, d.orthogonality
            )));
        }
        Ok(())
    }

    /// `T P_chi T^{-1}` for every atom.
    pub fn conjugate(&self, t: &CMat, t_inv: &CMat) -> Self {
        ProjectionValuedMeasure {
            group: self.group.clone(),
            dim: self.dim,
            atoms: self.atoms.iter().map(|(&k, m)| (k, t * m * t_inv)).collect(),
        }
    }

    /// The same measure with one atom removed.
    pub fn without_atom(&self, chi: usize) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.remove(&chi);
        ProjectionValuedMeasure {
            group: self.group.clone(),
            dim: self.dim,
            atoms,
        }
    }

    /// Atom `P_chi` moved to `perm[chi]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        ProjectionValuedMeasure {
            group: self.group.clone(),
            dim: self.dim,
            atoms: self.atoms.iter().map(|(&k, m)| (perm[k], m.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ProjectionValuedMeasure) -> Self {
        let keys: BTreeSet<usize> = self.atoms.keys().chain(other.atoms.keys()).copied().collect();
        ProjectionValuedMeasure {
            group: self.group.clone(),
            dim: self.dim + other.dim,
            atoms: keys
                .into_iter()
                .map(|k| (k, crate::linalg::block_diagonal(&self.atom(k), &other.atom(k))))
                .collect(),
        }
    }
}

/// Atoms `P_chi = (1/|A|) sum_a conj(chi(a)) pi(a)`; zero atoms are omitted.
pub fn spectral_measure(a: &FiniteAbelianGroup, pi1: &MatrixRep) -> Result<ProjectionValuedMeasure> {
    if pi1.group_order() != a.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            found: pi1.group_order(),
        });
    }
    let n = a.order() as f64;
    let mut atoms = BTreeMap::new();
    for chi in 0..a.order() {
        let mut p = zeros(pi1.dim(), pi1.dim());
        for x in 0..a.order() {
            p += pi1.mat(x) * a.pairing(chi, x).conj();
        }
        p /= Complex64::new(n, 0.0);
        if max_abs(&p) > MATRIX_TOL {
            atoms.insert(chi, p);
        }
    }
    let pvm = ProjectionValuedMeasure::new(a.clone(), pi1.dim(), atoms)?;
    pvm.validate()?;
    Ok(pvm)
}

/// `pi(a) = sum_chi chi(a) P_chi`.
pub fn reconstruct_rep(p: &ProjectionValuedMeasure) -> Result<MatrixRep> {
    p.validate()?;
    let a = p.group();
    let mats = (0..a.order())
        .map(|x| {
            let mut m = zeros(p.dim(), p.dim());
            for (&chi, atom) in p.atoms() {
                m += atom * a.pairing(chi, x);
            }
            m
        })
        .collect();
    MatrixRep::new(p.dim(), mats)
}

/// Minimal spectral support `E(v) = { chi : P_chi v != 0 }`.
pub fn support_of_vector(p: &ProjectionValuedMeasure, v: &CVec) -> BTreeSet<usize> {
    p.atoms()
        .iter()
        .filter(|(_, m)| vec_norm(&(*m * v)) > MATRIX_TOL)
        .map(|(&chi, _)| chi)
        .collect()
}

/// A subgroup `U` of `A` with its annihilator `U^perp` in the dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLevel {
    elements: Vec<usize>,
    annihilator: Vec<usize>,
}

impl SubgroupLevel {
    pub fn new(a: &FiniteAbelianGroup, elements: &[usize]) -> Result<Self> {
        if !a.is_subgroup(elements) {
            return Err(Error::NotSubgroup(format!("{elements:?} is not a subgroup of A")));
        }
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let annihilator = (0..a.order())
            .filter(|&chi| elements.iter().all(|&u| a.pairing_phase(chi, u) == 0))
            .collect();
        Ok(SubgroupLevel { elements, annihilator })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn annihilator(&self) -> &[usize] {
        &self.annihilator
    }
}

/// Orthonormal basis of `V^U`, the range of `(1/|U|) sum_{u in U} pi(u)`.
pub fn fixed_space(pi1: &MatrixRep, elements: &[usize]) -> CMat {
    let mut avg = zeros(pi1.dim(), pi1.dim());
    for &u in elements {
        avg += pi1.mat(u);
    }
    avg /= Complex64::new(elements.len() as f64, 0.0);
    orthonormal_range(&avg, RANK_CUTOFF)
}

/// The measure of `pi` restricted to `V^U`, supported on `U^perp`.
#[derive(Clone, Debug)]
pub struct LevelMeasure {
    pub level: SubgroupLevel,
    /// Orthonormal basis of `V^U` as columns in the ambient space.
    pub basis: CMat,
    /// Measure on `V^U` in the coordinates of `basis`.
    pub measure: ProjectionValuedMeasure,
}

impl LevelMeasure {
    /// `P^U_chi v` for `v` in `V^U`, in ambient coordinates. Characters
    /// outside `U^perp` give zero.
    pub fn apply_atom(&self, chi: usize, v: &CVec) -> CVec {
        match self.measure.atoms().get(&chi) {
            Some(p) => &self.basis * (p * (self.basis.adjoint() * v)),
            None => CVec::zeros(v.len()),
        }
    }

    /// `P^U(E) v = P^U(E cap U^perp) v`.
    pub fn apply_set(&self, subset: &[usize], v: &CVec) -> CVec {
        let p = self.measure.set_value(subset);
        &self.basis * (p * (self.basis.adjoint() * v))
    }
}

pub fn level_measure(a: &FiniteAbelianGroup, pi1: &MatrixRep, u: &SubgroupLevel) -> Result<LevelMeasure> {
    if pi1.group_order() != a.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            found: pi1.group_order(),
        });
    }
    let basis = fixed_space(pi1, u.elements());
    let k = basis.ncols();
    // representatives of A/U; pi^U is constant on cosets
    let mut covered = vec![false; a.order()];
    let mut reps = Vec::new();
    for x in 0..a.order() {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &e in u.elements() {
            covered[a.add(x, e)] = true;
        }
    }
    let restricted: Vec<CMat> = reps.iter().map(|&x| basis.adjoint() * pi1.mat(x) * &basis).collect();
    let index = reps.len() as f64;
    let mut atoms = BTreeMap::new();
    for &chi in u.annihilator() {
        let mut p = zeros(k, k);
        for (&x, m) in reps.iter().zip(&restricted) {
            p += m * a.pairing(chi, x).conj();
        }
        p /= Complex64::new(index, 0.0);
        if max_abs(&p) > MATRIX_TOL {
            atoms.insert(chi, p);
        }
    }
    let measure = ProjectionValuedMeasure::new(a.clone(), k, atoms)?;
    measure.validate()?;
    Ok(LevelMeasure {
        level: u.clone(),
        basis,
        measure,
    })
}

/// Result of comparing the measures at two levels on common fixed vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchingReport {
    /// Dimension of `V^U cap V^U'`.
    pub intersection_dim: usize,
    /// Bound on `|P^U(E) v - P^U'(E) v|` over all subsets `E` and basis vectors `v`.
    pub max_deviation: f64,
    /// Same bound against the measure of `pi` on all of `V`.
    pub max_deviation_from_global: f64,
}

impl PatchingReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation < tol && self.max_deviation_from_global < tol
    }
}

/// Checks `P^U(E) v = P^U'(E) v` on `V^U cap V^U'`, computed as the fixed
/// space of the subgroup generated by `U` and `U'`.
///
/// By additivity the deviation for any `E` is at most the sum of the atomwise
/// deviations, which is what gets reported.
pub fn verify_patching(
    a: &FiniteAbelianGroup,
    pi1: &MatrixRep,
    u: &SubgroupLevel,
    u2: &SubgroupLevel,
) -> Result<PatchingReport> {
    let first = level_measure(a, pi1, u)?;
    let second = level_measure(a, pi1, u2)?;
    let global = spectral_measure(a, pi1)?;
    let mut gens = u.elements().to_vec();
    gens.extend_from_slice(u2.elements());
    let joint = a.subgroup_generated(&gens);
    let common = fixed_space(pi1, &joint);
    let mut max_deviation: f64 = 0.0;
    let mut max_global: f64 = 0.0;
    for v in common.column_iter() {
        let v = v.into_owned();
        let mut dev = 0.0;
        let mut dev_global = 0.0;
        for chi in 0..a.order() {
            let x = first.apply_atom(chi, &v);
            let y = second.apply_atom(chi, &v);
            let z = global.atom(chi) * &v;
            dev += (&x - &y).iter().map(|c| c.norm()).fold(0.0, f64::max);
            dev_global += (&x - &z).iter().map(|c| c.norm()).fold(0.0, f64::max);
        }
        max_deviation = max_deviation.max(dev);
        max_global = max_global.max(dev_global);
    }
    Ok(PatchingReport {
        intersection_dim: common.ncols(),
        max_deviation,
        max_deviation_from_global: max_global,
    })
}

/// `(X commutes with every pi(a), X commutes with every P_chi)`.
pub fn commutant_check(pi1: &MatrixRep, p: &ProjectionValuedMeasure, x: &CMat) -> (bool, bool) {
    let commutes = |m: &CMat| max_diff(&(x * m), &(m * x)) <= MATRIX_TOL;
    (pi1.mats().iter().all(commutes), p.atoms().values().all(commutes))
}
