//! Finite groups on indexed elements.
//!
//! Every group stores its elements as indices `0..order`. Groups built from a
//! Cayley table keep the table's row order; permutation groups are enumerated
//! breadth-first from the identity with generators applied in input order, so
//! the identity is always index 0 there.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Closure cap used when none is given.
pub const DEFAULT_CAP: usize = 10_000;

/// Groups up to this order are checked for associativity on every triple.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 256;

/// Number of sampled triples for larger groups.
pub const SAMPLED_TRIPLES: usize = 10_000;

/// Seed for the sampled associativity check.
pub const ASSOCIATIVITY_SEED: u64 = 0x5eed;

/// Permutation groups up to this order get a precomputed Cayley table.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Table,
    Permutation,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Table => f.write_str("table"),
            Backend::Permutation => f.write_str("permutation"),
        }
    }
}

#[derive(Debug, Clone)]
struct PermStore {
    degree: usize,
    perms: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, u32>,
}

impl PermStore {
    fn compose(&self, x: usize, y: usize) -> usize {
        let (px, py) = (&self.perms[x], &self.perms[y]);
        let prod: Vec<u32> = px.iter().map(|&i| py[i as usize]).collect();
        self.lookup[&prod] as usize
    }
}

/// An immutable finite group.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    identity: usize,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    perms: Option<PermStore>,
    backend: Backend,
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, deriving the identity and inverses.
    pub fn from_table(table: &[Vec<usize>], label: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(Error::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order: n,
                    });
                }
                flat.push(value as u32);
            }
        }
        Self::from_flat_table(flat, n, label.into())
    }

    pub(crate) fn from_flat_table(flat: Vec<u32>, n: usize, label: String) -> Result<Self> {
        let at = |x: usize, y: usize| flat[x * n + y] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NoIdentity)?;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(Error::NoInverse(x))?;
            inv.push(y as u32);
        }
        check_associative(n, at)?;
        Ok(FiniteGroup {
            label,
            order: n,
            identity,
            inv,
            table: Some(flat),
            perms: None,
            backend: Backend::Table,
        })
    }

    /// Enumerates the closure of `generators` (one-line image notation on
    /// `0..degree`) breadth-first from the identity.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut gens: Vec<Vec<u32>> = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if !is_permutation(g, degree) {
                return Err(Error::InvalidPermutation { index, degree });
            }
            gens.push(g.iter().map(|&i| i as u32).collect());
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut perms = vec![id.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(id, 0u32);
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for g in &gens {
                let next: Vec<u32> = perms[cur].iter().map(|&i| g[i as usize]).collect();
                if lookup.contains_key(&next) {
                    continue;
                }
                if perms.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                lookup.insert(next.clone(), perms.len() as u32);
                queue.push_back(perms.len());
                perms.push(next);
            }
        }
        let order = perms.len();
        let store = PermStore {
            degree,
            perms,
            lookup,
        };
        let inv = (0..order)
            .map(|x| {
                let p = &store.perms[x];
                let mut q = vec![0u32; degree];
                for (i, &j) in p.iter().enumerate() {
                    q[j as usize] = i as u32;
                }
                store.lookup[&q]
            })
            .collect();
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(order * order);
            for x in 0..order {
                for y in 0..order {
                    t.push(store.compose(x, y) as u32);
                }
            }
            t
        });
        Ok(FiniteGroup {
            label: label.into(),
            order,
            identity: 0,
            inv,
            table,
            perms: Some(store),
            backend: Backend::Permutation,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.order + y] as usize,
            None => self
                .perms
                .as_ref()
                .expect("permutation store")
                .compose(x, y),
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// One-line image of an element of a permutation group.
    pub fn permutation(&self, x: usize) -> Option<&[u32]> {
        self.perms.as_ref().map(|s| s.perms[x].as_slice())
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|s| s.degree)
    }

    /// Index of a permutation in a permutation group.
    pub fn index_of_permutation(&self, perm: &[usize]) -> Option<usize> {
        let store = self.perms.as_ref()?;
        let key: Vec<u32> = perm.iter().map(|&i| i as u32).collect();
        store.lookup.get(&key).map(|&i| i as usize)
    }

    pub fn element(&self, idx: usize) -> Result<GroupElement<'_>> {
        self.check(idx)?;
        Ok(GroupElement { group: self, idx })
    }

    pub(crate) fn check(&self, idx: usize) -> Result<()> {
        if idx < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                idx,
                order: self.order,
            })
        }
    }

    /// `x^n` by square-and-multiply; negative exponents invert first.
    pub fn power(&self, x: usize, n: i64) -> usize {
        let mut base = if n < 0 { self.inv(x) } else { x };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// Left-normed `[a, b, c] = [[a, b], c]`.
    #[inline]
    pub fn commutator3(&self, a: usize, b: usize, c: usize) -> usize {
        self.commutator(self.commutator(a, b), c)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Full Cayley table as rows of indices.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|x| self.elements().map(|y| self.mul(x, y)).collect())
            .collect()
    }

    pub(crate) fn same(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other)
    }
}

fn is_permutation(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &i in p {
        if i >= degree || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn check_associative(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<()> {
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                let xy = at(x, y);
                for z in 0..n {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(Error::NotAssociative(x, y, z));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
        for _ in 0..SAMPLED_TRIPLES {
            let (x, y, z) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if at(at(x, y), z) != at(x, at(y, z)) {
                return Err(Error::NotAssociative(x, y, z));
            }
        }
    }
    Ok(())
}

/// An element bound to its group.
#[derive(Debug, Clone, Copy)]
pub struct GroupElement<'g> {
    group: &'g FiniteGroup,
    idx: usize,
}

impl<'g> GroupElement<'g> {
    pub fn idx(self) -> usize {
        self.idx
    }

    pub fn group(self) -> &'g FiniteGroup {
        self.group
    }

    pub fn inverse(self) -> Self {
        GroupElement {
            group: self.group,
            idx: self.group.inv(self.idx),
        }
    }

    pub fn pow(self, n: i64) -> Self {
        GroupElement {
            group: self.group,
            idx: self.group.power(self.idx, n),
        }
    }

    pub fn is_identity(self) -> bool {
        self.idx == self.group.identity()
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        if !self.group.same(other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            group: self.group,
            idx: self.group.mul(self.idx, other.idx),
        })
    }

    /// `[self, other]`.
    pub fn commutator(self, other: Self) -> Result<Self> {
        if !self.group.same(other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            group: self.group,
            idx: self.group.commutator(self.idx, other.idx),
        })
    }

    /// `[[self, b], c]`.
    pub fn left_normed(self, b: Self, c: Self) -> Result<Self> {
        self.commutator(b)?.commutator(c)
    }
}

impl PartialEq for GroupElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.group.same(other.group) && self.idx == other.idx
    }
}

impl Eq for GroupElement<'_> {}

impl<'g> Mul for GroupElement<'g> {
    type Output = GroupElement<'g>;

    /// Panics if the operands live in different groups; use `try_mul` otherwise.
    fn mul(self, rhs: Self) -> Self::Output {
        self.try_mul(rhs).expect("elements of different groups")
    }
}
