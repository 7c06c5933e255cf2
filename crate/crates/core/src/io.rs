//! JSON interchange: group definitions, representation files and measure files.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ActionHom, FiniteAbelianGroup, FiniteGroup, SemidirectGroup};
use crate::linalg::CMat;
use crate::repr::MatrixRep;
use crate::spectral::ProjectionValuedMeasure;

/// `{"abelian": {"orders": [..]}, "h": {..}, "action": {"per_element": [..]}}`.
/// A missing `action` means the trivial action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDefinition {
    pub abelian: AbelianSpec,
    pub h: HSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianSpec {
    pub orders: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HSpec {
    Table(Vec<Vec<i64>>),
    Cyclic(i64),
    UnitsMod(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub per_element: Vec<Vec<Vec<i64>>>,
}

fn parse_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn checked_size(path: &str, n: i64, limit: usize) -> Result<usize> {
    if n < 1 {
        return Err(parse_err(path, format!("expected a positive integer, found {n}")));
    }
    let n = n as u64;
    if n > limit as u64 {
        return Err(Error::SizeLimit {
            order: usize::try_from(n).unwrap_or(usize::MAX),
            limit,
        });
    }
    Ok(n as usize)
}

impl GroupDefinition {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid group definition: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Builds the group, reporting problems with the JSON path of the
    /// offending field.
    pub fn build(&self, limit: usize) -> Result<SemidirectGroup> {
        if self.abelian.orders.is_empty() {
            return Err(parse_err("abelian.orders", "must not be empty"));
        }
        let mut a_order: usize = 1;
        let mut orders = Vec::with_capacity(self.abelian.orders.len());
        for (i, &n) in self.abelian.orders.iter().enumerate() {
            let n = checked_size(&format!("abelian.orders[{i}]"), n, limit)?;
            a_order = a_order.saturating_mul(n);
            orders.push(n as u64);
        }
        if a_order > limit {
            return Err(Error::SizeLimit { order: a_order, limit });
        }
        let a = FiniteAbelianGroup::new(&orders).map_err(|e| parse_err("abelian.orders", e))?;

        let h = match &self.h {
            HSpec::Cyclic(n) => FiniteGroup::cyclic(checked_size("h.cyclic", *n, limit)?)?,
            HSpec::UnitsMod(n) => {
                // |(Z/n)^x| < n, so n itself is bounded by the limit times a small factor
                let n = checked_size("h.units_mod", *n, limit.saturating_mul(8))?;
                FiniteGroup::units_mod(n as u64)
                    .map_err(|e| parse_err("h.units_mod", e))?
                    .0
            }
            HSpec::Table(rows) => {
                let n = rows.len();
                if n == 0 {
                    return Err(parse_err("h.table", "must not be empty"));
                }
                if n > limit {
                    return Err(Error::SizeLimit { order: n, limit });
                }
                let mut table = Vec::with_capacity(n);
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != n {
                        return Err(parse_err(
                            &format!("h.table[{i}]"),
                            format!("expected {n} entries, found {}", row.len()),
                        ));
                    }
                    let mut out = Vec::with_capacity(n);
                    for (j, &x) in row.iter().enumerate() {
                        if x < 0 || x as usize >= n {
                            return Err(parse_err(
                                &format!("h.table[{i}][{j}]"),
                                format!("entry {x} out of range 0..{n}"),
                            ));
                        }
                        out.push(x as usize);
                    }
                    table.push(out);
                }
                FiniteGroup::from_table(&table).map_err(|e| parse_err("h.table", e))?
            }
        };
        if h.size().saturating_mul(a.order()) > limit {
            return Err(Error::SizeLimit {
                order: h.size().saturating_mul(a.order()),
                limit,
            });
        }
        let action = match &self.action {
            None => ActionHom::trivial(&h, &a),
            Some(spec) => {
                let rank = a.rank();
                if spec.per_element.len() != h.size() {
                    return Err(parse_err(
                        "action.per_element",
                        format!("expected {} matrices, found {}", h.size(), spec.per_element.len()),
                    ));
                }
                for (k, m) in spec.per_element.iter().enumerate() {
                    if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                        return Err(parse_err(
                            &format!("action.per_element[{k}]"),
                            format!("expected a {rank}x{rank} matrix"),
                        ));
                    }
                }
                ActionHom::new(&h, &a, spec.per_element.clone()).map_err(|e| parse_err("action.per_element", e))?
            }
        };
        SemidirectGroup::with_limit(h, a, action, limit)
    }

    /// Definition with `H` as an explicit table and the action spelled out.
    pub fn from_group(g: &SemidirectGroup) -> Self {
        let table = g
            .h()
            .table()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x as i64).collect())
            .collect();
        let per_element = (0..g.h().size())
            .map(|h| g.action().automorphism(h).matrix().to_vec())
            .collect();
        GroupDefinition {
            abelian: AbelianSpec {
                orders: g.a().orders().iter().map(|&n| n as i64).collect(),
            },
            h: HSpec::Table(table),
            action: Some(ActionSpec { per_element }),
        }
    }
}

pub fn parse_group(text: &str, limit: usize) -> Result<SemidirectGroup> {
    GroupDefinition::from_json(text)?.build(limit)
}

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(path: &str, rows: &MatrixJson, dim: usize) -> Result<CMat> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(parse_err(path, format!("expected a {dim}x{dim} matrix")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(parse_err(path, "non-finite entry"));
    }
    Ok(CMat::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// `{"dim": d, "mats": [..]}`, one matrix per group element in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub dim: usize,
    pub mats: Vec<MatrixJson>,
}

impl RepFile {
    pub fn from_rep(rep: &MatrixRep) -> Self {
        RepFile {
            dim: rep.dim(),
            mats: rep.mats().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid representation file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_rep(&self) -> Result<MatrixRep> {
        if self.dim == 0 {
            return Err(parse_err("dim", "must be positive"));
        }
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(&format!("mats[{k}]"), m, self.dim))
            .collect::<Result<Vec<_>>>()?;
        if mats.is_empty() {
            return Err(parse_err("mats", "must not be empty"));
        }
        MatrixRep::new(self.dim, mats)
    }
}

/// `{"orders": [..], "dim": d, "atoms": {"<character index>": matrix}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvmFile {
    pub orders: Vec<u64>,
    pub dim: usize,
    pub atoms: BTreeMap<usize, MatrixJson>,
}

impl PvmFile {
    pub fn from_pvm(p: &ProjectionValuedMeasure) -> Self {
        PvmFile {
            orders: p.group().orders().to_vec(),
            dim: p.dim(),
            atoms: p.atoms().iter().map(|(&k, m)| (k, matrix_to_json(m))).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid measure file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_pvm(&self) -> Result<ProjectionValuedMeasure> {
        let a = FiniteAbelianGroup::new(&self.orders).map_err(|e| parse_err("orders", e))?;
        let mut atoms = BTreeMap::new();
        for (&k, m) in &self.atoms {
            if k >= a.order() {
                return Err(parse_err(&format!("atoms.{k}"), "character index out of range"));
            }
            atoms.insert(k, matrix_from_json(&format!("atoms.{k}"), m, self.dim)?);
        }
        ProjectionValuedMeasure::new(a, self.dim, atoms)
    }
}

/// Vectors for support queries: a list of `[re, im]` coordinate lists.
pub fn parse_vectors(text: &str, dim: usize) -> Result<Vec<crate::linalg::CVec>> {
    let raw: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid vector file: {e}")))?;
    raw.iter()
        .enumerate()
        .map(|(k, v)| {
            if v.len() != dim {
                return Err(parse_err(&format!("[{k}]"), format!("expected {dim} coordinates")));
            }
            Ok(crate::linalg::CVec::from_iterator(
                dim,
                v.iter().map(|c| Complex64::new(c[0], c[1])),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn affine_definition_round_trips() {
        let text = r#"{"abelian": {"orders": [3]}, "h": {"units_mod": 3},
                       "action": {"per_element": [[[1]], [[2]]]}}"#;
        let g = parse_group(text, 10_000).unwrap();
        assert_eq!(g.order(), 6);
        let def = GroupDefinition::from_group(&g);
        let again = parse_group(&def.to_json(), 10_000).unwrap();
        assert_eq!(again.group().table(), g.group().table());
    }

    #[test]
    fn missing_action_is_trivial() {
        let g = parse_group(r#"{"abelian": {"orders": [2, 2]}, "h": {"cyclic": 3}}"#, 100).unwrap();
        assert!(g.action().is_trivial());
        assert_eq!(g.order(), 12);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = [
            (
                r#"{"abelian": {"orders": [0]}, "h": {"cyclic": 2}}"#,
                "abelian.orders[0]",
            ),
            (
                r#"{"abelian": {"orders": [-3]}, "h": {"cyclic": 2}}"#,
                "abelian.orders[0]",
            ),
            (
                r#"{"abelian": {"orders": [2]}, "h": {"table": [[0, 1], [1]]}}"#,
                "h.table[1]",
            ),
            (
                r#"{"abelian": {"orders": [2]}, "h": {"table": [[0, 1], [1, 5]]}}"#,
                "h.table[1][1]",
            ),
            (
                r#"{"abelian": {"orders": [3]}, "h": {"cyclic": 2}, "action": {"per_element": [[[1]]]}}"#,
                "action.per_element",
            ),
            (r#"{"abelian": {"orders": [3]}, "h": {"cyclic": 2}"#, "line 1"),
        ];
        for (text, needle) in bad {
            let err = parse_group(text, 100).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} lacks {needle}");
        }
    }

    #[test]
    fn size_limit_applies_before_construction() {
        let err = parse_group(r#"{"abelian": {"orders": [1000000000]}, "h": {"cyclic": 2}}"#, 10_000).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { .. }));
        let err = parse_group(r#"{"abelian": {"orders": [100, 100]}, "h": {"cyclic": 2}}"#, 10_000).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { .. }));
    }

    #[test]
    fn rep_and_pvm_files_round_trip() {
        let g = catalog::affine(3).unwrap();
        let reg = crate::repr::regular_representation(g.group());
        let file = RepFile::from_rep(&reg);
        let back = RepFile::from_json(&file.to_json()).unwrap().to_rep().unwrap();
        assert_eq!(back, reg);

        let pi1 = MatrixRep::new(6, (0..3).map(|a| reg.mat(g.embed_a(a)).clone()).collect()).unwrap();
        let p = crate::spectral::spectral_measure(g.a(), &pi1).unwrap();
        let text = PvmFile::from_pvm(&p).to_json();
        assert_eq!(PvmFile::from_json(&text).unwrap().to_json(), text);
        assert_eq!(PvmFile::from_json(&text).unwrap().to_pvm().unwrap(), p);
    }
}
