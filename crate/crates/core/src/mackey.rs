//! Classification of the irreducible representations of `G = H x_t A`.
//!
//! Each orbit of the dual action contributes, for every irreducible
//! representation `pi0` of the stabilizer `H_chi` of its representative, the
//! induced representation `Ind(pi0 . chi)` from `H_chi x_t A` to `G`. The
//! report is audited against the regular-representation decomposition of `G`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{SemidirectGroup, Subgroup};
use crate::imprimitivity::{restrict_to_system, stalk_rep, system_support, OrbitMembership};
use crate::repr::{decompose_regular, hom_dimension, induce, twist_by_character, MatrixRep};

#[derive(Clone, Debug)]
pub struct ClassificationEntry {
    pub orbit_index: usize,
    pub representative: usize,
    pub orbit: Vec<usize>,
    pub stabilizer: Subgroup,
    /// Position of `pi0` in the sorted irreps of the stabilizer.
    pub stabilizer_irrep: usize,
    pub pi0: MatrixRep,
    pub induced: MatrixRep,
}

impl ClassificationEntry {
    pub fn dim(&self) -> usize {
        self.induced.dim()
    }

    pub fn stabilizer_dim(&self) -> usize {
        self.pi0.dim()
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub group_order: usize,
    pub entries: Vec<ClassificationEntry>,
    pub audit: CompletenessDetail,
}

impl ClassificationReport {
    pub fn sum_dim_sq(&self) -> usize {
        self.entries.iter().map(|e| e.dim() * e.dim()).sum()
    }

    pub fn summary(&self) -> ReportSummary {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| EntrySummary {
                orbit: e.orbit_index,
                representative: e.representative,
                orbit_size: e.orbit.len(),
                stabilizer_order: e.stabilizer.order(),
                stabilizer_irrep: e.stabilizer_irrep,
                stabilizer_dim: e.stabilizer_dim(),
                dim: e.dim(),
                irreducible: self.audit.reducible.iter().all(|&r| r != i),
                oracle_match: match self.audit.oracle_matches.get(i) {
                    Some(m) if m.len() == 1 => Some(m[0]),
                    _ => None,
                },
            })
            .collect();
        ReportSummary {
            group_order: self.group_order,
            sum_dim_sq: self.sum_dim_sq(),
            entries,
            hom_identity: self.audit.hom_failures.is_empty(),
            oracle_bijection: self.audit.oracle_bijection(),
            passed: self.audit.passed(),
        }
    }
}

/// Serializable view of a report. Integer and boolean fields only, so the
/// JSON form re-serializes byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub group_order: usize,
    pub sum_dim_sq: usize,
    pub entries: Vec<EntrySummary>,
    pub hom_identity: bool,
    pub oracle_bijection: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub orbit: usize,
    pub representative: usize,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub stabilizer_irrep: usize,
    pub stabilizer_dim: usize,
    pub dim: usize,
    pub irreducible: bool,
    pub oracle_match: Option<usize>,
}

fn orbit_entries(g: &SemidirectGroup, orbit_index: usize, seed: u64) -> Result<Vec<ClassificationEntry>> {
    let orbit = g.dual().orbits().swap_remove(orbit_index);
    let representative = orbit.representative;
    let wrap = |e: Error| Error::Orbit {
        representative,
        source: Box::new(e),
    };
    let stabilizer = g.dual().stabilizer(g.h(), representative);
    let irreps = decompose_regular(&stabilizer.group, seed).map_err(wrap)?;
    let (inner, embedding) = g.restrict_h(&stabilizer);
    irreps
        .into_iter()
        .enumerate()
        .map(|(k, pi0)| {
            let twisted = twist_by_character(&inner, &pi0, representative).map_err(wrap)?;
            let induced = induce(g.group(), &embedding, &twisted).map_err(wrap)?;
            Ok(ClassificationEntry {
                orbit_index,
                representative,
                orbit: orbit.members.clone(),
                stabilizer: stabilizer.clone(),
                stabilizer_irrep: k,
                pi0,
                induced,
            })
        })
        .collect()
}

/// One entry per (orbit, stabilizer irrep), ordered by orbit representative,
/// then by the stabilizer irrep order of `decompose_regular`.
pub fn classify(g: &SemidirectGroup, seed: u64) -> Result<ClassificationReport> {
    let orbit_count = g.dual().orbits().len();
    let per_orbit: Vec<Vec<ClassificationEntry>> = (0..orbit_count)
        .into_par_iter()
        .map(|i| orbit_entries(g, i, seed))
        .collect::<Result<_>>()?;
    let entries: Vec<ClassificationEntry> = per_orbit.into_iter().flatten().collect();
    let audit = audit_entries(&entries, g, seed)?;
    Ok(ClassificationReport {
        group_order: g.order(),
        entries,
        audit,
    })
}

/// Why a report fails to be a complete list of irreducibles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletenessDetail {
    pub sum_dim_sq: usize,
    pub group_order: usize,
    /// Entries whose induced representation is reducible.
    pub reducible: Vec<usize>,
    /// `(i, j, dim Hom)` where the hom matrix differs from the identity.
    pub hom_failures: Vec<(usize, usize, usize)>,
    /// For each entry, the oracle irreps it is equivalent to.
    pub oracle_matches: Vec<Vec<usize>>,
    /// Oracle irreps matched by no entry.
    pub uncovered: Vec<usize>,
    /// Number of irreps of `G` found by the oracle.
    pub oracle_count: usize,
}

impl CompletenessDetail {
    pub fn oracle_bijection(&self) -> bool {
        self.uncovered.is_empty()
            && self.oracle_matches.iter().all(|m| m.len() == 1)
            && self.oracle_matches.len() == self.oracle_count
    }

    pub fn passed(&self) -> bool {
        self.sum_dim_sq == self.group_order
            && self.reducible.is_empty()
            && self.hom_failures.is_empty()
            && self.oracle_bijection()
    }

    pub fn deficit(&self) -> i64 {
        self.group_order as i64 - self.sum_dim_sq as i64
    }
}

fn audit_entries(entries: &[ClassificationEntry], g: &SemidirectGroup, seed: u64) -> Result<CompletenessDetail> {
    let n = entries.len();
    let hom_rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| hom_dimension(&entries[i].induced, &entries[j].induced))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut detail = CompletenessDetail {
        sum_dim_sq: entries.iter().map(|e| e.dim() * e.dim()).sum(),
        group_order: g.order(),
        ..Default::default()
    };
    for (i, row) in hom_rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != usize::from(i == j) {
                detail.hom_failures.push((i, j, v));
            }
        }
        if row[i] != 1 {
            detail.reducible.push(i);
        }
    }
    let oracle = decompose_regular(g.group(), seed)?;
    detail.oracle_count = oracle.len();
    detail.oracle_matches = entries
        .par_iter()
        .map(|e| {
            let mut matched = Vec::new();
            for (k, rho) in oracle.iter().enumerate() {
                if rho.dim() == e.dim() && hom_dimension(&e.induced, rho)? == 1 {
                    matched.push(k);
                }
            }
            Ok(matched)
        })
        .collect::<Result<_>>()?;
    detail.uncovered = (0..oracle.len())
        .filter(|k| !detail.oracle_matches.iter().any(|m| m.contains(k)))
        .collect();
    Ok(detail)
}

/// Recomputes every audit from the entries of `report`.
pub fn completeness_check(report: &ClassificationReport, g: &SemidirectGroup, seed: u64) -> Result<CompletenessDetail> {
    audit_entries(&report.entries, g, seed)
}

/// Index of the entry equivalent to an irreducible `pi`.
///
/// The candidate is located through the system of imprimitivity of `pi`:
/// its support picks the orbit, the stalk at the representative picks the
/// stabilizer irrep. The match is then confirmed on `G` directly.
pub fn match_irrep(g: &SemidirectGroup, pi: &MatrixRep, report: &ClassificationReport) -> Result<usize> {
    let sys = restrict_to_system(g, pi)?;
    let OrbitMembership::Single(orbit) = system_support(g, &sys).orbit else {
        return Err(Error::NoMatch);
    };
    let representative = g.dual().orbits()[orbit].representative;
    let stalk = stalk_rep(g, &sys, representative)?;
    let mut found = Vec::new();
    for (i, e) in report.entries.iter().enumerate() {
        if e.orbit_index == orbit
            && e.pi0.dim() == stalk.pi0.dim()
            && hom_dimension(&stalk.pi0, &e.pi0)? == 1
            && hom_dimension(pi, &e.induced)? == 1
        {
            found.push(i);
        }
    }
    match found.as_slice() {
        [] => Err(Error::NoMatch),
        [i] => Ok(*i),
        many => Err(Error::AmbiguousMatch(many.len())),
    }
}

/// Hom dimensions among the induced representations of one orbit, next to
/// those among the stabilizer irreps they come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCorrespondence {
    pub representative: usize,
    pub induced: Vec<Vec<usize>>,
    pub stabilizer: Vec<Vec<usize>>,
}

impl HomCorrespondence {
    pub fn passed(&self) -> bool {
        self.induced == self.stabilizer
    }
}

pub fn hom_correspondence_check(g: &SemidirectGroup, representative: usize, seed: u64) -> Result<HomCorrespondence> {
    let orbit_index = g.dual().orbit_index(representative);
    let entries = orbit_entries(g, orbit_index, seed)?;
    let matrix = |f: &dyn Fn(&ClassificationEntry) -> &MatrixRep| -> Result<Vec<Vec<usize>>> {
        entries
            .iter()
            .map(|x| entries.iter().map(|y| hom_dimension(f(x), f(y))).collect())
            .collect()
    };
    Ok(HomCorrespondence {
        representative: g.dual().orbits()[orbit_index].representative,
        induced: matrix(&|e| &e.induced)?,
        stabilizer: matrix(&|e| &e.pi0)?,
    })
}
