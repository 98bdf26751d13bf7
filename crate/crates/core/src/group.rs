//! Finite groups given by complete multiplication tables, their subgroups,
//! quotients by normal subgroups, and Weil-normalized Haar measures.
//!
//! Elements are plain indices `0..order`. Every other type in the crate
//! refers to a [`FiniteGroup`] through an `Arc`, so a group is built once and
//! shared by all functions, characters and quotients that live over it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_order, Error, Result};

/// Orders up to this bound get an exhaustive associativity scan.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;

const SAMPLED_TRIPLES: usize = 1 << 20;

/// A finite group stored as a full Cayley table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    /// Tables are compared; labels are cosmetic.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("abelian", &self.is_abelian())
            .finish()
    }
}

impl FiniteGroup {
    /// The cyclic group Z_M with `i * j = (i + j) mod M`.
    pub fn cyclic(m: usize) -> Result<Self> {
        check_order(m)?;
        let mut mul = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                mul.push(((i + j) % m) as u32);
            }
        }
        let labels = (0..m).map(|i| i.to_string()).collect();
        Ok(Self::from_parts(m, mul, Some(labels)))
    }

    /// Direct product `A x B`; the pair `(a, b)` has index `a * |B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let order =
            a.order.checked_mul(b.order).ok_or(Error::Resource { order: usize::MAX, limit: crate::MAX_ORDER })?;
        check_order(order)?;
        let nb = b.order;
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..order {
                let (ya, yb) = (y / nb, y % nb);
                mul.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        let labels = (0..order).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))).collect();
        Ok(Self::from_parts(order, mul, Some(labels)))
    }

    /// The symmetric group on `n` points. Permutations are listed in
    /// lexicographic order of their one-line notation, so the identity is 0.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            perms.push(current.clone());
            if perms.len() > crate::MAX_ORDER {
                return Err(Error::Resource { order: perms.len(), limit: crate::MAX_ORDER });
            }
            if !next_permutation(&mut current) {
                break;
            }
        }
        let order = perms.len();
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut mul = Vec::with_capacity(order * order);
        for p in &perms {
            for q in &perms {
                // (p * q)(i) = p(q(i)): apply q first.
                let pq: Vec<usize> = q.iter().map(|&i| p[i]).collect();
                mul.push(index(&pq) as u32);
            }
        }
        let labels = perms.iter().map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>()).collect();
        Ok(Self::from_parts(order, mul, Some(labels)))
    }

    /// Builds a group from an explicit table after checking the group axioms.
    ///
    /// Associativity is scanned exhaustively up to order
    /// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`] and on a fixed pseudo-random sample
    /// of triples above it.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        check_order(order)?;
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Validation(format!("row {i} has {} entries, expected {order}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::Validation(format!("entry mul({i},{j}) = {v} is not an element")));
                }
                mul.push(v as u32);
            }
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::Validation(format!("{} labels for {order} elements", l.len())));
            }
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Validation("no two-sided identity element".into()))?;

        let mut inv = Vec::with_capacity(order);
        for x in 0..order {
            let y = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::Validation(format!("element {x} has no inverse")))?;
            inv.push(y as u32);
        }

        let group = FiniteGroup { order, mul, inv, identity, labels };
        group.check_associativity()?;
        Ok(group)
    }

    /// Assembles a group from a table already known to satisfy the axioms.
    pub(crate) fn from_parts(order: usize, mul: Vec<u32>, labels: Option<Vec<String>>) -> Self {
        debug_assert_eq!(mul.len(), order * order);
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let identity = (0..order).find(|&e| (0..order).all(|x| at(e, x) == x)).expect("group table without identity");
        let inv = (0..order)
            .map(|x| {
                let row = &mul[x * order..(x + 1) * order];
                row.iter().position(|&v| v as usize == identity).expect("missing inverse") as u32
            })
            .collect();
        FiniteGroup { order, mul, inv, identity, labels }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.order {
                return Err(Error::Validation(format!("{} labels for {} elements", l.len(), self.order)));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// The table as nested rows, the layout used by the JSON format.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|row| row.iter().map(|&v| v as usize).collect()).collect()
    }

    /// `x s x^-1`
    #[inline]
    pub fn conjugate(&self, x: usize, s: usize) -> usize {
        self.mul(self.mul(x, s), self.inv(x))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Scans for a triple violating `(ab)c = a(bc)`.
    pub fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Validation(format!("not associative at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return check(a, b, c);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a55c);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// `true` when `a` and `b` are the same group (shared or equal tables).
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A subgroup, stored as the sorted list of its members in the parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Arc<[usize]>,
    position: Arc<[Option<usize>]>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup").field("parent_order", &self.parent.order()).field("members", &self.members).finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.members, &other.members) || self.members == other.members)
            && same_group(&self.parent, &other.parent)
    }
}

impl Subgroup {
    /// Validates closure under multiplication and inversion.
    pub fn new(parent: Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        let n = parent.order();
        if let Some(&bad) = set.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidSubgroup(format!("{bad} is not an element")));
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("not closed: {a} * {b} = {}", parent.mul(a, b))));
                }
            }
        }
        Ok(Self::from_sorted(parent, set.into_iter().collect()))
    }

    fn from_sorted(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        let mut position = vec![None; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            position[m] = Some(i);
        }
        Subgroup { parent, members: members.into(), position: position.into() }
    }

    pub fn full(parent: Arc<FiniteGroup>) -> Self {
        let members = (0..parent.order()).collect();
        Self::from_sorted(parent, members)
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let e = parent.identity();
        Self::from_sorted(parent, vec![e])
    }

    /// Closure of `generators` under multiplication.
    pub fn generated_by(parent: Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= parent.order()) {
            return Err(Error::InvalidSubgroup(format!("{bad} is not an element")));
        }
        let mut seen = vec![false; parent.order()];
        let mut stack = vec![parent.identity()];
        seen[parent.identity()] = true;
        while let Some(x) = stack.pop() {
            for &g in generators {
                let y = parent.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let members = (0..parent.order()).filter(|&x| seen[x]).collect();
        Ok(Self::from_sorted(parent, members))
    }

    pub fn center(parent: Arc<FiniteGroup>) -> Self {
        let n = parent.order();
        let members = (0..n).filter(|&z| (0..n).all(|x| parent.mul(z, x) == parent.mul(x, z))).collect();
        Self::from_sorted(parent, members)
    }

    /// The commutator subgroup `[G, G]`.
    pub fn derived(parent: Arc<FiniteGroup>) -> Self {
        let n = parent.order();
        let gens: BTreeSet<usize> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| parent.commutator(a, b)).collect();
        let gens: Vec<usize> = gens.into_iter().collect();
        Self::generated_by(parent, &gens).expect("commutators are elements")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position.get(x).is_some_and(|p| p.is_some())
    }

    /// Position of `x` within [`Subgroup::members`].
    #[inline]
    pub fn position(&self, x: usize) -> Option<usize> {
        self.position.get(x).copied().flatten()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|x| self.members.iter().all(|&s| self.contains(g.conjugate(x, s))))
    }

    /// The subgroup as a standalone group, element `i` being `members()[i]`.
    pub fn to_group(&self) -> FiniteGroup {
        let k = self.members.len();
        let mut mul = Vec::with_capacity(k * k);
        for &a in self.members.iter() {
            for &b in self.members.iter() {
                mul.push(self.position(self.parent.mul(a, b)).unwrap() as u32);
            }
        }
        let labels = self.members.iter().map(|&m| self.parent.label(m)).collect();
        FiniteGroup::from_parts(k, mul, Some(labels))
    }
}

/// `true` iff `x s x^-1` lies in `s` for every `x` in the parent.
pub fn is_normal(subgroup: &Subgroup) -> bool {
    subgroup.is_normal()
}

/// The quotient `G/N` by a normal subgroup, with left cosets `xN`.
///
/// Cosets are numbered in order of their smallest member, and that member is
/// the coset's representative. Every element `x` decomposes uniquely as
/// `x = rep(proj(x)) * s` with `s` in `N`; [`QuotientGroup::offset`] returns the
/// position of `s` in `N`.
#[derive(Clone)]
pub struct QuotientGroup {
    parent: Arc<FiniteGroup>,
    normal: Subgroup,
    cosets: Vec<Vec<usize>>,
    reps: Vec<usize>,
    table: Arc<FiniteGroup>,
    proj: Vec<usize>,
    offset: Vec<usize>,
}

impl fmt::Debug for QuotientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientGroup")
            .field("parent_order", &self.parent.order())
            .field("normal", &self.normal.members())
            .field("reps", &self.reps)
            .finish()
    }
}

impl QuotientGroup {
    pub fn new(normal: &Subgroup) -> Result<Self> {
        if !normal.is_normal() {
            return Err(Error::NotNormal(format!(
                "{:?} is not normal in a group of order {}",
                normal.members(),
                normal.parent().order()
            )));
        }
        let g = normal.parent().clone();
        let n = g.order();
        let mut proj = vec![usize::MAX; n];
        let mut offset = vec![usize::MAX; n];
        let mut cosets = Vec::new();
        let mut reps = Vec::new();
        for x in 0..n {
            if proj[x] != usize::MAX {
                continue;
            }
            let idx = cosets.len();
            let mut block = Vec::with_capacity(normal.order());
            for (pos, &s) in normal.members().iter().enumerate() {
                let y = g.mul(x, s);
                proj[y] = idx;
                offset[y] = pos;
                block.push(y);
            }
            block.sort_unstable();
            cosets.push(block);
            reps.push(x);
        }
        let q = reps.len();
        let mut mul = Vec::with_capacity(q * q);
        for &a in &reps {
            for &b in &reps {
                mul.push(proj[g.mul(a, b)] as u32);
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
        let table = Arc::new(FiniteGroup::from_parts(q, mul, Some(labels)));
        Ok(QuotientGroup { parent: g, normal: normal.clone(), cosets, reps, table, proj, offset })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// The group structure on cosets.
    pub fn table(&self) -> &Arc<FiniteGroup> {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Coset index of `x` (the canonical map `x -> xN`).
    #[inline]
    pub fn proj(&self, x: usize) -> usize {
        self.proj[x]
    }

    /// Position in `N` of `rep(proj(x))^-1 x`.
    #[inline]
    pub fn offset(&self, x: usize) -> usize {
        self.offset[x]
    }

    /// The element `rep(coset) * members()[pos]`.
    #[inline]
    pub fn element(&self, coset: usize, pos: usize) -> usize {
        self.parent.mul(self.reps[coset], self.normal.members()[pos])
    }
}

/// Uniform Haar weights on `G`, `N` and `G/N`.
///
/// Haar measures on finite groups are multiples of counting measure, so one
/// weight per space describes them completely. Weil's formula forces
/// `w_q * w_n = w_g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureTriple {
    pub w_g: f64,
    pub w_n: f64,
    pub w_q: f64,
}

impl MeasureTriple {
    /// Counting measure on `G` and `N`, hence on `G/N`.
    pub fn counting() -> Self {
        MeasureTriple { w_g: 1.0, w_n: 1.0, w_q: 1.0 }
    }
}

impl Default for MeasureTriple {
    fn default() -> Self {
        Self::counting()
    }
}

/// Weil-normalized measures for the given scales on `G` and `N`.
pub fn weil_measure(wg_scale: f64, wn_scale: f64) -> Result<MeasureTriple> {
    for (name, v) in [("G", wg_scale), ("N", wn_scale)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidMeasure(format!("weight on {name} must be positive, got {v}")));
        }
    }
    Ok(MeasureTriple { w_g: wg_scale, w_n: wn_scale, w_q: wg_scale / wn_scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    #[test]
    fn cyclic_basics() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.mul(3, 2), 1);
        assert_eq!(z4.inv(1), 3);
        assert_eq!(z4.identity(), 0);
        assert!(matches!(FiniteGroup::cyclic(0), Err(Error::InvalidOrder(0))));
    }

    #[test]
    fn size_guard() {
        let big = FiniteGroup::cyclic(1 << 11).unwrap();
        assert!(matches!(FiniteGroup::product(&big, &big), Err(Error::Resource { .. })));
    }

    #[test]
    fn klein_four_is_exponent_two() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::product(&z2, &z2).unwrap();
        assert_eq!(v4.order(), 4);
        for x in 0..4 {
            assert_eq!(v4.mul(x, x), v4.identity());
        }
    }

    #[test]
    fn trivial_factor_is_neutral() {
        let z1 = FiniteGroup::cyclic(1).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(FiniteGroup::product(&z1, &s3).unwrap(), s3);
    }

    #[test]
    fn z2_times_z3_is_cyclic() {
        let p = FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(3).unwrap()).unwrap();
        assert_eq!(p.order(), 6);
        // (1,1) has index 1*3 + 1.
        assert_eq!(p.element_order(4), 6);
    }

    #[test]
    fn from_table_rejects_missing_identity() {
        let err = FiniteGroup::from_table(&[vec![0, 0], vec![1, 1]], None).unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");
    }

    #[test]
    fn from_table_rejects_missing_inverse() {
        let err = FiniteGroup::from_table(&[vec![0, 0], vec![0, 1]], None).unwrap_err();
        assert!(err.to_string().contains("inverse"), "{err}");
    }

    #[test]
    fn from_table_names_nonassociative_triple() {
        // A loop of order 5 (every row and column a permutation, identity 0)
        // that is not a group.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&t, None).unwrap_err();
        assert!(err.to_string().contains("not associative at ("), "{err}");
    }

    #[test]
    fn z4_table_round_trips() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let again = FiniteGroup::from_table(&z4.table(), None).unwrap();
        assert_eq!(again, z4);
    }

    #[test]
    fn s3_is_nonabelian() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
        g.check_associativity().unwrap();
    }

    #[test]
    fn normality_examples() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        assert!(is_normal(&Subgroup::new(z4, [0, 2]).unwrap()));

        let g = s3();
        // Transpositions have order 2.
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert!(!is_normal(&Subgroup::generated_by(g.clone(), &[t]).unwrap()));
        let a3 = Subgroup::derived(g);
        assert_eq!(a3.order(), 3);
        assert!(is_normal(&a3));
    }

    #[test]
    fn subgroup_validation() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        assert!(matches!(Subgroup::new(z4.clone(), [0, 1]), Err(Error::InvalidSubgroup(_))));
        assert!(matches!(Subgroup::new(z4.clone(), [2]), Err(Error::InvalidSubgroup(_))));
        assert!(matches!(Subgroup::new(z4, [0, 7]), Err(Error::InvalidSubgroup(_))));
    }

    #[test]
    fn quotient_of_z4() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let q = QuotientGroup::new(&Subgroup::new(z4, [0, 2]).unwrap()).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.cosets(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(q.reps(), &[0, 1]);
        assert_eq!(q.table().mul(1, 1), 0);
    }

    #[test]
    fn quotient_by_whole_group_is_trivial() {
        let g = s3();
        let q = QuotientGroup::new(&Subgroup::full(g)).unwrap();
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn quotient_requires_normality() {
        let g = s3();
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let h = Subgroup::generated_by(g, &[t]).unwrap();
        assert!(matches!(QuotientGroup::new(&h), Err(Error::NotNormal(_))));
    }

    #[test]
    fn quotient_decomposition_is_consistent() {
        let g = s3();
        let q = QuotientGroup::new(&Subgroup::derived(g.clone())).unwrap();
        for x in 0..g.order() {
            assert_eq!(q.element(q.proj(x), q.offset(x)), x);
            for y in 0..g.order() {
                assert_eq!(q.proj(g.mul(x, y)), q.table().mul(q.proj(x), q.proj(y)));
            }
        }
    }

    #[test]
    fn weil_measure_examples() {
        assert_eq!(weil_measure(1.0, 1.0).unwrap().w_q, 1.0);
        assert_eq!(weil_measure(1.0, 0.5).unwrap().w_q, 2.0);
        assert!(matches!(weil_measure(0.0, 1.0), Err(Error::InvalidMeasure(_))));
        assert!(matches!(weil_measure(1.0, -2.0), Err(Error::InvalidMeasure(_))));
    }
}
