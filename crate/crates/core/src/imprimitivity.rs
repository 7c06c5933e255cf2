//! Systems of imprimitivity `(pi2, P)` for `H` acting on the dual of `A`.
//!
//! Representations of `G = H x_t A` correspond to pairs of a representation
//! `pi2` of `H` and a projection valued measure `P` on the dual satisfying
//! `pi2(h) P_chi pi2(h)^{-1} = P_{h[chi]}`. This module converts in both
//! directions, decides irreducibility and equivalence through commutants and
//! intertwiner spaces, and moves an irreducible system onto the induced model
//! of functions on `H` with values in a single stalk.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{right_cosets, SemidirectGroup, Subgroup};
use crate::linalg::{
    identity, intertwiner_space, inverse, is_invertible, max_diff, orthonormal_range, random_complex, zeros, CMat,
    MATRIX_TOL, RANK_CUTOFF,
};
use crate::repr::{induce, MatrixRep};
use crate::spectral::{reconstruct_rep, spectral_measure, ProjectionValuedMeasure};

#[derive(Clone, Debug, PartialEq)]
pub struct SystemOfImprimitivity {
    pi2: MatrixRep,
    pvm: ProjectionValuedMeasure,
}

impl SystemOfImprimitivity {
    /// Checks dimensions, the measure invariants and covariance.
    pub fn new(g: &SemidirectGroup, pi2: MatrixRep, pvm: ProjectionValuedMeasure) -> Result<Self> {
        let sys = Self::new_unchecked(g, pi2, pvm)?;
        sys.pvm.validate()?;
        sys.check_covariance(g)?;
        Ok(sys)
    }

    /// Checks dimensions only.
    pub fn new_unchecked(g: &SemidirectGroup, pi2: MatrixRep, pvm: ProjectionValuedMeasure) -> Result<Self> {
        if pi2.group_order() != g.h().size() {
            return Err(Error::DimensionMismatch {
                expected: g.h().size(),
                found: pi2.group_order(),
            });
        }
        if pi2.dim() != pvm.dim() {
            return Err(Error::DimensionMismatch {
                expected: pi2.dim(),
                found: pvm.dim(),
            });
        }
        Ok(SystemOfImprimitivity { pi2, pvm })
    }

    pub fn pi2(&self) -> &MatrixRep {
        &self.pi2
    }

    pub fn pvm(&self) -> &ProjectionValuedMeasure {
        &self.pvm
    }

    pub fn dim(&self) -> usize {
        self.pi2.dim()
    }

    /// Largest deviation of `pi2(h) P_chi pi2(h)^{-1}` from `P_{h[chi]}` and
    /// the `(h, chi)` where it occurs.
    pub fn covariance_deviation(&self, g: &SemidirectGroup) -> (f64, (usize, usize)) {
        let dual = g.dual();
        let mut worst = (0.0, (g.h().identity(), 0));
        for h in 0..g.h().size() {
            let m = self.pi2.mat(h);
            let Some(m_inv) = inverse(m) else {
                return (f64::INFINITY, (h, 0));
            };
            for chi in 0..dual.character_count() {
                let lhs = m * self.pvm.atom(chi) * &m_inv;
                let dev = max_diff(&lhs, &self.pvm.atom(dual.apply(h, chi)));
                if dev > worst.0 {
                    worst = (dev, (h, chi));
                }
            }
        }
        worst
    }

    pub fn check_covariance(&self, g: &SemidirectGroup) -> Result<()> {
        let (deviation, (h, character)) = self.covariance_deviation(g);
        if deviation > MATRIX_TOL {
            return Err(Error::Covariance {
                h,
                character,
                deviation,
            });
        }
        Ok(())
    }

    /// `(T pi2 T^{-1}, T P T^{-1})`.
    pub fn conjugate(&self, t: &CMat) -> Result<Self> {
        let t_inv = inverse(t).ok_or_else(|| Error::NotRepresentation("singular conjugator".into()))?;
        Ok(SystemOfImprimitivity {
            pi2: self.pi2.conjugate(t)?,
            pvm: self.pvm.conjugate(t, &t_inv),
        })
    }

    pub fn direct_sum(&self, other: &SystemOfImprimitivity) -> Result<Self> {
        Ok(SystemOfImprimitivity {
            pi2: self.pi2.direct_sum(&other.pi2)?,
            pvm: self.pvm.direct_sum(&other.pvm),
        })
    }

    /// Largest difference in either the `H` matrices or the atoms.
    pub fn max_diff(&self, other: &SystemOfImprimitivity) -> f64 {
        let n = self.pvm.group().order();
        let atoms = (0..n)
            .map(|chi| max_diff(&self.pvm.atom(chi), &other.pvm.atom(chi)))
            .fold(0.0, f64::max);
        self.pi2.max_diff(&other.pi2).max(atoms)
    }

    /// The same system with the measure replaced.
    pub fn with_measure(&self, pvm: ProjectionValuedMeasure) -> Self {
        SystemOfImprimitivity {
            pi2: self.pi2.clone(),
            pvm,
        }
    }
}

/// `pi2 = pi|H`, `P` = spectral measure of `pi|A`. Verifies the conjugation
/// identity `pi2(h) pi1(a) pi2(h)^{-1} = pi1(h[a])` and covariance.
pub fn restrict_to_system(g: &SemidirectGroup, pi: &MatrixRep) -> Result<SystemOfImprimitivity> {
    pi.validate(g.group())?;
    let pi2 = MatrixRep::new(
        pi.dim(),
        (0..g.h().size()).map(|h| pi.mat(g.embed_h(h)).clone()).collect(),
    )?;
    let pi1 = MatrixRep::new(
        pi.dim(),
        (0..g.a().order()).map(|a| pi.mat(g.embed_a(a)).clone()).collect(),
    )?;
    for h in 0..g.h().size() {
        let m_inv = inverse(pi2.mat(h)).ok_or_else(|| Error::NotRepresentation("singular matrix".into()))?;
        for a in 0..g.a().order() {
            let lhs = pi2.mat(h) * pi1.mat(a) * &m_inv;
            let dev = max_diff(&lhs, pi1.mat(g.action().apply(h, a)));
            if dev > MATRIX_TOL {
                return Err(Error::NotRepresentation(format!(
                    "conjugation identity fails at h = {h}, a = {a} ({dev:.3e})"
                )));
            }
        }
    }
    let pvm = spectral_measure(g.a(), &pi1)?;
    SystemOfImprimitivity::new(g, pi2, pvm)
}

/// `pi(h, a) = pi1(a) pi2(h)` with `pi1` reconstructed from the measure.
pub fn assemble(g: &SemidirectGroup, sys: &SystemOfImprimitivity) -> Result<MatrixRep> {
    sys.check_covariance(g)?;
    let pi1 = reconstruct_rep(sys.pvm())?;
    let mats = (0..g.order())
        .map(|x| {
            let (h, a) = g.split(x);
            pi1.mat(a) * sys.pi2().mat(h)
        })
        .collect();
    let pi = MatrixRep::new(sys.dim(), mats)?;
    pi.validate(g.group())?;
    Ok(pi)
}

fn system_pairs<'a>(
    g: &SemidirectGroup,
    s1: &'a SystemOfImprimitivity,
    s2: &'a SystemOfImprimitivity,
    atoms1: &'a [CMat],
    atoms2: &'a [CMat],
) -> Vec<(&'a CMat, &'a CMat)> {
    let mut pairs: Vec<(&CMat, &CMat)> = g
        .h()
        .generators()
        .into_iter()
        .map(|h| (s1.pi2().mat(h), s2.pi2().mat(h)))
        .collect();
    pairs.extend(atoms1.iter().zip(atoms2));
    pairs
}

/// Intertwiners `T` with `T pi2(h) = pi2'(h) T` and `T P_chi = P'_chi T`.
pub fn system_intertwiners(g: &SemidirectGroup, s1: &SystemOfImprimitivity, s2: &SystemOfImprimitivity) -> Vec<CMat> {
    let keys: Vec<usize> = s1
        .pvm()
        .atoms()
        .keys()
        .chain(s2.pvm().atoms().keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let atoms1: Vec<CMat> = keys.iter().map(|&k| s1.pvm().atom(k)).collect();
    let atoms2: Vec<CMat> = keys.iter().map(|&k| s2.pvm().atom(k)).collect();
    let pairs = system_pairs(g, s1, s2, &atoms1, &atoms2);
    intertwiner_space(&pairs, s1.dim(), s2.dim())
}

/// Dimension of the space of intertwiners between two systems.
pub fn system_hom_dimension(g: &SemidirectGroup, s1: &SystemOfImprimitivity, s2: &SystemOfImprimitivity) -> usize {
    system_intertwiners(g, s1, s2).len()
}

/// True iff the joint commutant of `pi2` and `P` is one-dimensional.
pub fn system_irreducible(g: &SemidirectGroup, sys: &SystemOfImprimitivity) -> bool {
    system_hom_dimension(g, sys, sys) == 1
}

/// An invertible `T` with `T pi2 T^{-1} = pi2'` and `T P T^{-1} = P'`, if one
/// is found. A seeded random element of the intertwiner space is tested for
/// invertibility; for irreducible systems every nonzero intertwiner is
/// invertible, so the answer is exact there.
pub fn systems_equivalent(
    g: &SemidirectGroup,
    s1: &SystemOfImprimitivity,
    s2: &SystemOfImprimitivity,
    seed: u64,
) -> Option<CMat> {
    if s1.dim() != s2.dim() {
        return None;
    }
    let space = system_intertwiners(g, s1, s2);
    if space.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = zeros(s2.dim(), s1.dim());
    for basis in &space {
        t += basis * random_complex(&mut rng);
    }
    is_invertible(&t).then_some(t)
}

/// Where the support of a system sits relative to the dual orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitMembership {
    /// Index into `DualActionHom::orbits`.
    Single(usize),
    /// The support meets these orbits.
    Multiple(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSupport {
    pub characters: Vec<usize>,
    pub orbit: OrbitMembership,
}

pub fn system_support(g: &SemidirectGroup, sys: &SystemOfImprimitivity) -> SystemSupport {
    let characters = sys.pvm().support();
    let mut orbits: Vec<usize> = characters.iter().map(|&chi| g.dual().orbit_index(chi)).collect();
    orbits.sort_unstable();
    orbits.dedup();
    let orbit = if orbits.len() == 1 {
        OrbitMembership::Single(orbits[0])
    } else {
        OrbitMembership::Multiple(orbits)
    };
    SystemSupport { characters, orbit }
}

/// Stalks `P_chi V` with orthonormal bases, one per point of the support.
pub fn stalk_decomposition(g: &SemidirectGroup, sys: &SystemOfImprimitivity) -> Result<BTreeMap<usize, CMat>> {
    let stalks: BTreeMap<usize, CMat> = sys
        .pvm()
        .support()
        .into_iter()
        .map(|chi| (chi, orthonormal_range(&sys.pvm().atom(chi), RANK_CUTOFF)))
        .collect();
    let total: usize = stalks.values().map(|b| b.ncols()).sum();
    if total != sys.dim() {
        return Err(Error::InvalidPvm(format!(
            "stalk dimensions sum to {total}, not {}",
            sys.dim()
        )));
    }
    // pi2(h) carries the chi stalk into the h[chi] stalk
    for h in 0..g.h().size() {
        for (&chi, basis) in &stalks {
            let target = g.dual().apply(h, chi);
            let image = sys.pi2().mat(h) * basis;
            let dev = max_diff(&(sys.pvm().atom(target) * &image), &image);
            let same_dim = stalks.get(&target).map(|b| b.ncols()) == Some(basis.ncols());
            if dev > MATRIX_TOL || !same_dim {
                return Err(Error::Covariance {
                    h,
                    character: chi,
                    deviation: dev,
                });
            }
        }
    }
    Ok(stalks)
}

/// The stalk at a point with the action of its stabilizer.
#[derive(Clone, Debug)]
pub struct StalkData {
    pub point: usize,
    pub stabilizer: Subgroup,
    /// Orthonormal basis of `P_point V`, as columns.
    pub basis: CMat,
    /// Action of the stabilizer on the stalk, in the coordinates of `basis`.
    pub pi0: MatrixRep,
}

pub fn stalk_rep(g: &SemidirectGroup, sys: &SystemOfImprimitivity, chi0: usize) -> Result<StalkData> {
    if !sys.pvm().support().contains(&chi0) {
        return Err(Error::NotInSupport(chi0));
    }
    let stabilizer = g.dual().stabilizer(g.h(), chi0);
    let basis = orthonormal_range(&sys.pvm().atom(chi0), RANK_CUTOFF);
    let mats = stabilizer
        .embedding
        .iter()
        .map(|&h| basis.adjoint() * sys.pi2().mat(h) * &basis)
        .collect();
    let pi0 = MatrixRep::new(basis.ncols(), mats)?;
    pi0.validate(&stabilizer.group)?;
    Ok(StalkData {
        point: chi0,
        stabilizer,
        basis,
        pi0,
    })
}

/// An irreducible system moved onto functions `f : H -> V0` with
/// `f(h0 h) = pi0(h0) f(h)`.
#[derive(Clone, Debug)]
pub struct Transport {
    pub stalk: StalkData,
    /// Minimal representatives `r_i` of the right cosets `H0 r_i`.
    pub coset_reps: Vec<usize>,
    /// `r_i^{-1}[chi0]`, the point whose indicator selects coset `i`.
    pub points: Vec<usize>,
    pub induced: SystemOfImprimitivity,
    /// `v -> F_v` with `F_v(h) = pi2(h) P_{h^{-1}[chi0]} v`.
    pub forward: CMat,
    /// `f -> sum_i pi2(r_i^{-1}) f(r_i)`.
    pub backward: CMat,
}

impl Transport {
    /// Largest of `|B F - I|`, `|F B - I|`.
    pub fn inverse_deviation(&self) -> f64 {
        let n = self.forward.ncols();
        let m = self.forward.nrows();
        max_diff(&(&self.backward * &self.forward), &identity(n))
            .max(max_diff(&(&self.forward * &self.backward), &identity(m)))
    }

    /// Largest deviation of `F pi2(h) = pi2bar(h) F` and `F P_chi = Pbar_chi F`.
    pub fn intertwining_deviation(&self, sys: &SystemOfImprimitivity) -> f64 {
        let f = &self.forward;
        let mut dev: f64 = 0.0;
        for h in 0..sys.pi2().group_order() {
            dev = dev.max(max_diff(&(f * sys.pi2().mat(h)), &(self.induced.pi2().mat(h) * f)));
        }
        for chi in 0..sys.pvm().group().order() {
            dev = dev.max(max_diff(
                &(f * sys.pvm().atom(chi)),
                &(self.induced.pvm().atom(chi) * f),
            ));
        }
        dev
    }
}

pub fn transport_to_induced(g: &SemidirectGroup, sys: &SystemOfImprimitivity, chi0: usize) -> Result<Transport> {
    if !system_irreducible(g, sys) {
        return Err(Error::ReducibleSystem);
    }
    let dual = g.dual();
    let orbit = dual.orbits().swap_remove(dual.orbit_index(chi0)).members;
    let support = sys.pvm().support();
    if support != orbit {
        return Err(Error::SupportMismatch { support, orbit });
    }
    let stalk = stalk_rep(g, sys, chi0)?;
    let h = g.h();
    let (reps, _) = right_cosets(h, &stalk.stabilizer);
    let k = stalk.basis.ncols();
    let d = sys.dim();
    let dim_bar = reps.len() * k;
    if dim_bar != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: dim_bar,
        });
    }
    let points: Vec<usize> = reps.iter().map(|&r| dual.apply(h.inv(r), chi0)).collect();

    let mut forward = zeros(dim_bar, d);
    let mut backward = zeros(d, dim_bar);
    for (i, (&r, &x)) in reps.iter().zip(&points).enumerate() {
        let row = stalk.basis.adjoint() * sys.pi2().mat(r) * sys.pvm().atom(x);
        forward.view_mut((i * k, 0), (k, d)).copy_from(&row);
        let col = sys.pi2().mat(h.inv(r)) * &stalk.basis;
        backward.view_mut((0, i * k), (d, k)).copy_from(&col);
    }

    let pi2_bar = induce(h, &stalk.stabilizer, &stalk.pi0)?;
    let mut atoms = BTreeMap::new();
    for (i, &x) in points.iter().enumerate() {
        let mut p = zeros(dim_bar, dim_bar);
        p.view_mut((i * k, i * k), (k, k)).copy_from(&identity(k));
        atoms.insert(x, p);
    }
    let pvm_bar = ProjectionValuedMeasure::new(g.a().clone(), dim_bar, atoms)?;
    let induced = SystemOfImprimitivity::new(g, pi2_bar, pvm_bar)?;
    Ok(Transport {
        stalk,
        coset_reps: reps,
        points,
        induced,
        forward,
        backward,
    })
}
