//! Finite groups, finite abelian groups with their duals, and semidirect
//! products `H x_t A` together with the dual action of `H` on characters.
//!
//! Every group element is a canonical `usize` index. Abelian elements are
//! exponent vectors enumerated lexicographically (first coordinate most
//! significant), so index 0 is always the identity of `A` and the trivial
//! character of the dual.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::root_of_unity;

/// Largest group order accepted by default. Most operations are exhaustive.
pub const DEFAULT_SIZE_LIMIT: usize = 10_000;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

// ---------------------------------------------------------------------------
// Abelian groups and characters
// ---------------------------------------------------------------------------

/// `Z/n_1 x ... x Z/n_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    order: usize,
    exponent: u64,
}

impl FiniteAbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidOrders("empty list of orders".into()));
        }
        let mut order: usize = 1;
        for (i, &n) in orders.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidOrders(format!("order at position {i} is zero")));
            }
            order = usize::try_from(n)
                .ok()
                .and_then(|n| order.checked_mul(n))
                .ok_or_else(|| Error::InvalidOrders("group order overflows".into()))?;
        }
        let exponent = orders.iter().copied().fold(1, lcm);
        Ok(FiniteAbelianGroup {
            orders: orders.to_vec(),
            order,
            exponent,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the cyclic factor orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of the element with the given index.
    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let n = self.orders[i] as usize;
            v[i] = (index % n) as u64;
            index /= n;
        }
        v
    }

    /// Index of an exponent vector; entries are reduced modulo the orders.
    pub fn index_of(&self, v: &[i64]) -> usize {
        debug_assert_eq!(v.len(), self.rank());
        v.iter().zip(&self.orders).fold(0usize, |acc, (&x, &n)| {
            acc * n as usize + x.rem_euclid(n as i64) as usize
        })
    }

    fn index_of_reduced(&self, v: &[u64]) -> usize {
        v.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.element(x), self.element(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        self.index_of_reduced(&s)
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.element(x);
        let s: Vec<u64> = a.iter().zip(&self.orders).map(|(p, n)| (n - p) % n).collect();
        self.index_of_reduced(&s)
    }

    pub fn element_order(&self, x: usize) -> u64 {
        self.element(x)
            .iter()
            .zip(&self.orders)
            .map(|(&a, &n)| n / gcd(a, n))
            .fold(1, lcm)
    }

    /// Character with the given index (same enumeration as elements).
    pub fn character(&self, index: usize) -> CharacterVec {
        CharacterVec {
            index,
            exponents: self.element(index),
            orders: self.orders.clone(),
            exponent: self.exponent,
        }
    }

    /// `<chi, a>` as an exact phase `num / exponent`.
    pub fn pairing_phase(&self, chi: usize, a: usize) -> u64 {
        let k = self.element(chi);
        let x = self.element(a);
        let l = self.exponent;
        k.iter()
            .zip(&x)
            .zip(&self.orders)
            .map(|((&k, &x), &n)| (k * x % n) * (l / n))
            .sum::<u64>()
            % l
    }

    /// `<chi, a>` as a complex number on the unit circle.
    pub fn pairing(&self, chi: usize, a: usize) -> Complex64 {
        root_of_unity(self.pairing_phase(chi, a), self.exponent)
    }

    /// Subgroup generated by the given elements, sorted by index.
    pub fn subgroup_generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.add(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if !set.contains(&0) || set.iter().any(|&x| x >= self.order) {
            return false;
        }
        set.iter().all(|&x| set.iter().all(|&y| set.contains(&self.add(x, y))))
    }

    /// All subgroups, each sorted, listed by size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let cyclic: BTreeSet<Vec<usize>> = (0..self.order).map(|x| self.subgroup_generated(&[x])).collect();
        let mut all: BTreeSet<Vec<usize>> = cyclic.clone();
        let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                let mut gens = s.clone();
                gens.extend_from_slice(c);
                let joined = self.subgroup_generated(&gens);
                if all.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The same group as a multiplication table.
    pub fn to_finite_group(&self) -> FiniteGroup {
        let n = self.order;
        let table = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.add(x, y))
            .collect();
        FiniteGroup::from_table_unchecked(n, table)
    }
}

/// All `|A|` characters of `A`, lexicographic by exponent vector.
pub fn dual_group(a: &FiniteAbelianGroup) -> Vec<CharacterVec> {
    (0..a.order()).map(|i| a.character(i)).collect()
}

/// A character `a -> exp(2 pi i sum_i k_i a_i / n_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterVec {
    index: usize,
    exponents: Vec<u64>,
    orders: Vec<u64>,
    exponent: u64,
}

impl CharacterVec {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn eval(&self, a: &[u64]) -> Complex64 {
        let l = self.exponent;
        let num = self
            .exponents
            .iter()
            .zip(a)
            .zip(&self.orders)
            .map(|((&k, &x), &n)| (k * (x % n) % n) * (l / n))
            .sum::<u64>();
        root_of_unity(num % l, l)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }
}

// ---------------------------------------------------------------------------
// Finite groups by multiplication table
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from an explicit multiplication table, checking the
    /// group axioms exhaustively.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has length {} but the table has {n} rows",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!(
                    "row {i} contains out-of-range entry {bad}"
                )));
            }
            table.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverses = vec![0; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x * n + y] == identity && table[y * n + x] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(Error::InvalidTable(format!("associativity fails for ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            size: n,
            table,
            identity,
            inverses,
        })
    }

    /// Builds a group from a table known to satisfy the axioms.
    pub(crate) fn from_table_unchecked(size: usize, table: Vec<usize>) -> Self {
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| table[e * size + x] == x))
            .expect("table has an identity");
        let mut inverses = vec![0; size];
        for x in 0..size {
            for y in 0..size {
                if table[x * size + y] == identity {
                    inverses[x] = y;
                    break;
                }
            }
        }
        FiniteGroup {
            size,
            table,
            identity,
            inverses,
        }
    }

    pub fn trivial() -> Self {
        Self::from_table_unchecked(1, vec![0])
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("cyclic group of order 0".into()));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Ok(Self::from_table_unchecked(n, table))
    }

    /// The unit group `(Z/n)^x`. Returns the group and the residue of each
    /// element; residues are increasing, so index 0 is the residue 1.
    pub fn units_mod(n: u64) -> Result<(Self, Vec<u64>)> {
        if n < 2 {
            return Err(Error::InvalidTable(format!("units modulo {n} are not defined")));
        }
        let residues: Vec<u64> = (1..n).filter(|&r| gcd(r, n) == 1).collect();
        let pos: BTreeMap<u64, usize> = residues.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let m = residues.len();
        let mut table = Vec::with_capacity(m * m);
        for &x in &residues {
            for &y in &residues {
                table.push(pos[&(x * y % n)]);
            }
        }
        Ok((Self::from_table_unchecked(m, table), residues))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.size];
        let mut classes = Vec::new();
        for x in 0..self.size {
            if assigned[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.size).map(|g| self.conjugate(g, x)).collect();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily by ascending index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.identity]);
        for x in 0..self.size {
            if span.contains(&x) {
                continue;
            }
            gens.push(x);
            span = self.closure(&gens);
            if span.len() == self.size {
                break;
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    /// The same group with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.size;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidTable("relabeling is not a permutation".into()));
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Ok(Self::from_table_unchecked(n, table))
    }
}

/// A subgroup with its own multiplication table. Subgroup element `i` is
/// `embedding[i]` in the parent; the embedding is strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(parent: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&x| x >= parent.size()) {
            return Err(Error::NotSubgroup(format!("element {bad} is not in the group")));
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let embedding: Vec<usize> = set.iter().copied().collect();
        let position: BTreeMap<usize, usize> = embedding.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = embedding.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &embedding {
            for &b in &embedding {
                let p = parent.mul(a, b);
                match position.get(&p) {
                    Some(&i) => table.push(i),
                    None => return Err(Error::NotSubgroup(format!("product of {a} and {b} leaves the set"))),
                }
            }
        }
        Ok(Subgroup {
            group: FiniteGroup::from_table_unchecked(m, table),
            embedding,
        })
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            group: parent.clone(),
            embedding: (0..parent.size()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.embedding.len()
    }

    /// Position of a parent element inside the subgroup.
    pub fn position(&self, parent_element: usize) -> Option<usize> {
        self.embedding.binary_search(&parent_element).ok()
    }
}

/// Right cosets `S g` of a subgroup: representatives (the minimal index in
/// each coset, ascending) and the coset number of every parent element.
pub fn right_cosets(parent: &FiniteGroup, sub: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; parent.size()];
    let mut reps = Vec::new();
    for g in 0..parent.size() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(g);
        for &s in &sub.embedding {
            coset_of[parent.mul(s, g)] = c;
        }
    }
    (reps, coset_of)
}

// ---------------------------------------------------------------------------
// Automorphisms and actions
// ---------------------------------------------------------------------------

/// An integer matrix acting on exponent vectors (column convention) modulo
/// the orders, together with the permutation of `A` it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismMat {
    matrix: Vec<Vec<i64>>,
    perm: Vec<usize>,
}

impl AutomorphismMat {
    /// Checks well-definedness modulo the orders and bijectivity by
    /// enumerating `A`. `element` is used only for error reporting.
    pub fn new(a: &FiniteAbelianGroup, matrix: Vec<Vec<i64>>, element: usize) -> Result<Self> {
        let r = a.rank();
        let bad = |reason: String| Error::NotAutomorphism { element, reason };
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(bad(format!("expected a {r}x{r} matrix")));
        }
        let orders = a.orders();
        for j in 0..r {
            for i in 0..r {
                // column j applied to n_j e_j must vanish mod n_i
                let v = (matrix[i][j] as i128) * (orders[j] as i128);
                if v.rem_euclid(orders[i] as i128) != 0 {
                    return Err(bad(format!("entry ({i}, {j}) is not well defined modulo the orders")));
                }
            }
        }
        let mut perm = Vec::with_capacity(a.order());
        let mut hit = vec![false; a.order()];
        for x in 0..a.order() {
            let v = a.element(x);
            let image: Vec<i64> = (0..r)
                .map(|i| {
                    let n = orders[i] as i128;
                    (0..r)
                        .map(|j| (matrix[i][j] as i128).rem_euclid(n) * v[j] as i128 % n)
                        .sum::<i128>()
                        .rem_euclid(n) as i64
                })
                .collect();
            let y = a.index_of(&image);
            if std::mem::replace(&mut hit[y], true) {
                return Err(bad("induced map is not injective".into()));
            }
            perm.push(y);
        }
        Ok(AutomorphismMat { matrix, perm })
    }

    pub fn identity(a: &FiniteAbelianGroup) -> Self {
        let r = a.rank();
        let matrix = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        AutomorphismMat {
            matrix,
            perm: (0..a.order()).collect(),
        }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }
}

/// The action `t : H -> Aut(A)`, one automorphism per element of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionHom {
    maps: Vec<AutomorphismMat>,
}

impl ActionHom {
    /// Validates that `t_e = id` and `t_{gh} = t_g o t_h` for every pair.
    pub fn new(h: &FiniteGroup, a: &FiniteAbelianGroup, matrices: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if matrices.len() != h.size() {
            return Err(Error::DimensionMismatch {
                expected: h.size(),
                found: matrices.len(),
            });
        }
        let maps = matrices
            .into_iter()
            .enumerate()
            .map(|(i, m)| AutomorphismMat::new(a, m, i))
            .collect::<Result<Vec<_>>>()?;
        let action = ActionHom { maps };
        action.check_homomorphism(h)?;
        Ok(action)
    }

    pub fn trivial(h: &FiniteGroup, a: &FiniteAbelianGroup) -> Self {
        ActionHom {
            maps: vec![AutomorphismMat::identity(a); h.size()],
        }
    }

    fn check_homomorphism(&self, h: &FiniteGroup) -> Result<()> {
        let e = h.identity();
        if self.maps[e].perm.iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::NotHomomorphism { g: e, h: e });
        }
        for g in 0..h.size() {
            for k in 0..h.size() {
                let gk = h.mul(g, k);
                let composed = self.maps[k].perm.iter().map(|&x| self.maps[g].perm[x]);
                if !composed.eq(self.maps[gk].perm.iter().copied()) {
                    return Err(Error::NotHomomorphism { g, h: k });
                }
            }
        }
        Ok(())
    }

    /// `h[a] = t_h(a)`.
    pub fn apply(&self, h: usize, a: usize) -> usize {
        self.maps[h].apply(a)
    }

    pub fn automorphism(&self, h: usize) -> &AutomorphismMat {
        &self.maps[h]
    }

    pub fn restrict(&self, sub: &Subgroup) -> Self {
        ActionHom {
            maps: sub.embedding.iter().map(|&h| self.maps[h].clone()).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.maps
            .iter()
            .all(|m| m.perm.iter().enumerate().all(|(x, &y)| x == y))
    }
}

// ---------------------------------------------------------------------------
// Semidirect products
// ---------------------------------------------------------------------------

/// `G = H x_t A` with `(h, a)(h', a') = (h h', a + t_h(a'))`.
///
/// Element `(h, a)` has index `h * |A| + a`.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    h: FiniteGroup,
    a: FiniteAbelianGroup,
    action: ActionHom,
    whole: FiniteGroup,
    dual: DualActionHom,
}

impl SemidirectGroup {
    pub fn new(h: FiniteGroup, a: FiniteAbelianGroup, action: ActionHom) -> Result<Self> {
        Self::with_limit(h, a, action, DEFAULT_SIZE_LIMIT)
    }

    pub fn with_limit(h: FiniteGroup, a: FiniteAbelianGroup, action: ActionHom, limit: usize) -> Result<Self> {
        let order = h.size().checked_mul(a.order()).ok_or(Error::SizeLimit {
            order: usize::MAX,
            limit,
        })?;
        if order > limit {
            return Err(Error::SizeLimit { order, limit });
        }
        if action.maps.len() != h.size() {
            return Err(Error::DimensionMismatch {
                expected: h.size(),
                found: action.maps.len(),
            });
        }
        action.check_homomorphism(&h)?;
        let na = a.order();
        let mut table = Vec::with_capacity(order * order);
        for g in 0..order {
            let (h1, a1) = (g / na, g % na);
            for k in 0..order {
                let (h2, a2) = (k / na, k % na);
                let hh = h.mul(h1, h2);
                let aa = a.add(a1, action.apply(h1, a2));
                table.push(hh * na + aa);
            }
        }
        let whole = FiniteGroup::from_table_unchecked(order, table);
        let dual = DualActionHom::compute(&h, &a, &action);
        Ok(SemidirectGroup {
            h,
            a,
            action,
            whole,
            dual,
        })
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn a(&self) -> &FiniteAbelianGroup {
        &self.a
    }

    pub fn action(&self) -> &ActionHom {
        &self.action
    }

    pub fn dual(&self) -> &DualActionHom {
        &self.dual
    }

    /// The multiplication table of `G` itself.
    pub fn group(&self) -> &FiniteGroup {
        &self.whole
    }

    pub fn order(&self) -> usize {
        self.whole.size()
    }

    pub fn index(&self, h: usize, a: usize) -> usize {
        h * self.a.order() + a
    }

    pub fn split(&self, g: usize) -> (usize, usize) {
        (g / self.a.order(), g % self.a.order())
    }

    /// Index of `(e_H, a)`, the image of `a` in `A~`.
    pub fn embed_a(&self, a: usize) -> usize {
        self.index(self.h.identity(), a)
    }

    /// Index of `(h, e_A)`, the image of `h` in `H~`.
    pub fn embed_h(&self, h: usize) -> usize {
        self.index(h, 0)
    }

    /// `H_sub x_t A` for a subgroup of `H`, with its embedding into `G`.
    pub fn restrict_h(&self, sub: &Subgroup) -> (SemidirectGroup, Subgroup) {
        let action = self.action.restrict(sub);
        let inner = SemidirectGroup::with_limit(sub.group.clone(), self.a.clone(), action, usize::MAX)
            .expect("restriction of a valid action is valid");
        let na = self.a.order();
        let embedding: Vec<usize> = sub
            .embedding
            .iter()
            .flat_map(|&h| (0..na).map(move |a| h * na + a))
            .collect();
        let embedded = Subgroup {
            group: inner.whole.clone(),
            embedding,
        };
        (inner, embedded)
    }

    /// Exhaustive check of the structural identities of the semidirect product.
    pub fn verify_axioms(&self) -> AxiomReport {
        let (h, a, g) = (&self.h, &self.a, &self.whole);
        let na = a.order();
        let n = self.order();
        let multiplication = (0..n).all(|x| {
            (0..n).all(|y| {
                let ((h1, a1), (h2, a2)) = (self.split(x), self.split(y));
                g.mul(x, y) == self.index(h.mul(h1, h2), a.add(a1, self.action.apply(h1, a2)))
            })
        });
        let inverse = (0..n).all(|x| {
            let (h1, a1) = self.split(x);
            let hi = h.inv(h1);
            g.inv(x) == self.index(hi, self.action.apply(hi, a.neg(a1)))
        });
        // (h,a)(h',a')(h,a)^{-1} = (h h' h^{-1}, a + h[a'] + (h h' h^{-1})[-a])
        let conjugation = (0..n).all(|x| {
            (0..n).all(|y| {
                let ((h1, a1), (h2, a2)) = (self.split(x), self.split(y));
                let c = h.conjugate(h1, h2);
                let expected = a.add(a.add(a1, self.action.apply(h1, a2)), self.action.apply(c, a.neg(a1)));
                g.conjugate(x, y) == self.index(c, expected)
            })
        });
        let normal_a = (0..n).all(|x| {
            (0..na).all(|a2| {
                let (h1, a1) = self.split(x);
                let expected = a.add(a.add(a1, self.action.apply(h1, a2)), a.neg(a1));
                g.conjugate(x, self.embed_a(a2)) == self.embed_a(expected)
            })
        });
        let product_decomposition = (0..n).all(|x| {
            let (h1, a1) = self.split(x);
            g.mul(self.embed_a(a1), self.embed_h(h1)) == x
        });
        let trivial_intersection = (0..h.size())
            .filter(|&k| self.embed_h(k) != g.identity())
            .all(|k| self.split(self.embed_h(k)).0 != h.identity());
        let action_is_conjugation = (0..h.size()).all(|k| {
            (0..na).all(|x| g.conjugate(self.embed_h(k), self.embed_a(x)) == self.embed_a(self.action.apply(k, x)))
        });
        AxiomReport {
            multiplication,
            inverse,
            conjugation,
            normal_a,
            product_decomposition,
            trivial_intersection,
            action_is_conjugation,
        }
    }
}

/// Outcome of [`SemidirectGroup::verify_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub multiplication: bool,
    pub inverse: bool,
    pub conjugation: bool,
    pub normal_a: bool,
    pub product_decomposition: bool,
    pub trivial_intersection: bool,
    pub action_is_conjugation: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.multiplication
            && self.inverse
            && self.conjugation
            && self.normal_a
            && self.product_decomposition
            && self.trivial_intersection
            && self.action_is_conjugation
    }
}

pub fn make_semidirect(h: FiniteGroup, a: FiniteAbelianGroup, t: ActionHom) -> Result<SemidirectGroup> {
    SemidirectGroup::new(h, a, t)
}

// ---------------------------------------------------------------------------
// Dual action, orbits, stabilizers
// ---------------------------------------------------------------------------

/// `t'_h(chi)(a) = chi(t_{h^{-1}}(a))`, stored as one permutation of the
/// character indices per element of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualActionHom {
    perms: Vec<Vec<usize>>,
}

/// An orbit of the dual action; `members` is sorted and the representative
/// is its smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl DualActionHom {
    fn compute(h: &FiniteGroup, a: &FiniteAbelianGroup, action: &ActionHom) -> Self {
        let r = a.rank();
        let l = a.exponent();
        let orders = a.orders();
        // images of the basis vectors e_j under t_{h^{-1}}
        let basis: Vec<usize> = (0..r)
            .map(|j| {
                let mut v = vec![0i64; r];
                v[j] = 1;
                a.index_of(&v)
            })
            .collect();
        let perms = (0..h.size())
            .map(|k| {
                let hinv = h.inv(k);
                let images: Vec<usize> = basis.iter().map(|&e| action.apply(hinv, e)).collect();
                (0..a.order())
                    .map(|chi| {
                        let exps: Vec<i64> = (0..r)
                            .map(|j| {
                                let phase = a.pairing_phase(chi, images[j]);
                                // chi'(e_j) = exp(2 pi i phase / l) = exp(2 pi i k'_j / n_j)
                                (phase * orders[j] / l) as i64
                            })
                            .collect();
                        a.index_of(&exps)
                    })
                    .collect()
            })
            .collect();
        DualActionHom { perms }
    }

    pub fn h_order(&self) -> usize {
        self.perms.len()
    }

    pub fn character_count(&self) -> usize {
        self.perms.first().map_or(0, |p| p.len())
    }

    /// `h[chi]`.
    pub fn apply(&self, h: usize, chi: usize) -> usize {
        self.perms[h][chi]
    }

    pub fn permutation(&self, h: usize) -> &[usize] {
        &self.perms[h]
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        let n = self.character_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for chi in 0..n {
            if seen[chi] {
                continue;
            }
            let members: BTreeSet<usize> = self.perms.iter().map(|p| p[chi]).collect();
            for &m in &members {
                seen[m] = true;
            }
            out.push(Orbit {
                representative: chi,
                members: members.into_iter().collect(),
            });
        }
        out
    }

    /// Index into [`Self::orbits`] of the orbit containing `chi`.
    pub fn orbit_index(&self, chi: usize) -> usize {
        self.orbits()
            .iter()
            .position(|o| o.members.binary_search(&chi).is_ok())
            .expect("orbits partition the dual")
    }

    /// `H_chi = { h : h[chi] = chi }` as a subgroup of `H`.
    pub fn stabilizer(&self, h: &FiniteGroup, chi: usize) -> Subgroup {
        let elems: Vec<usize> = (0..h.size()).filter(|&k| self.perms[k][chi] == chi).collect();
        Subgroup::from_elements(h, &elems).expect("stabilizers are subgroups")
    }

    /// Separation of orbits by invariant open sets. The dual is a finite
    /// discrete space, so every orbit is an invariant open set and separates
    /// itself from every other orbit.
    pub fn smooth_action_check(&self) -> SmoothnessWitness {
        let orbits = self.orbits();
        let mut separators = BTreeMap::new();
        let mut smooth = true;
        for (i, oi) in orbits.iter().enumerate() {
            let invariant = oi
                .members
                .iter()
                .all(|&x| self.perms.iter().all(|p| oi.members.binary_search(&p[x]).is_ok()));
            for (j, oj) in orbits.iter().enumerate() {
                if i == j {
                    continue;
                }
                let separates = oi.members.binary_search(&oi.representative).is_ok()
                    && oi.members.binary_search(&oj.representative).is_err();
                smooth &= invariant && separates;
                separators.insert((i, j), oi.members.clone());
            }
        }
        SmoothnessWitness { smooth, separators }
    }
}

pub fn dual_action(g: &SemidirectGroup) -> DualActionHom {
    DualActionHom::compute(g.h(), g.a(), g.action())
}

/// For each ordered pair of distinct orbit indices `(i, j)`, an invariant
/// set containing orbit `i` and missing orbit `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessWitness {
    pub smooth: bool,
    pub separators: BTreeMap<(usize, usize), Vec<usize>>,
}
