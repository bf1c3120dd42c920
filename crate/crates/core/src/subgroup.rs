//! Subgroups as sorted member lists, with normal cores and lattice scans.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subset::Subset;

/// Largest order for which subgroup-lattice scans run.
pub const LATTICE_SCAN_LIMIT: usize = 200;

/// A subgroup stored as a sorted member list plus the generators it came from.
#[derive(Clone)]
pub struct Subgroup<'g> {
    group: &'g FiniteGroup,
    members: Vec<usize>,
    generators: Vec<usize>,
    bits: FixedBitSet,
}

impl<'g> Subgroup<'g> {
    pub fn whole(group: &'g FiniteGroup) -> Self {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert_range(..);
        Subgroup {
            group,
            members: group.elements().collect(),
            generators: Vec::new(),
            bits,
        }
    }

    pub fn trivial(group: &'g FiniteGroup) -> Self {
        Self::from_closed_bits(group, single(group, group.identity()), Vec::new())
    }

    fn from_closed_bits(group: &'g FiniteGroup, bits: FixedBitSet, generators: Vec<usize>) -> Self {
        Subgroup {
            group,
            members: bits.ones().collect(),
            generators,
            bits,
        }
    }

    /// Interprets a subset as a subgroup if it is one.
    pub fn from_subset(set: &Subset<'g>) -> Option<Self> {
        let g = set.group();
        if !set.contains(g.identity()) {
            return None;
        }
        let closed = set
            .iter()
            .all(|a| set.contains(g.inv(a)) && set.iter().all(|b| set.contains(g.mul(a, b))));
        closed.then(|| Self::from_closed_bits(g, set.bits().clone(), Vec::new()))
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn as_subset(&self) -> Subset<'g> {
        Subset::from_bits(self.group, self.bits.clone())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup<'_>) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// `g^-1 H g`.
    pub fn conjugate(&self, g: usize) -> Subgroup<'g> {
        let grp = self.group;
        let mut bits = FixedBitSet::with_capacity(grp.order());
        for &h in &self.members {
            bits.insert(grp.conjugate(h, g));
        }
        let generators = self
            .generators
            .iter()
            .map(|&h| grp.conjugate(h, g))
            .collect();
        Self::from_closed_bits(grp, bits, generators)
    }

    pub fn is_normal(&self) -> bool {
        let g = self.group;
        g.elements().all(|x| {
            self.members
                .iter()
                .all(|&h| self.contains(g.conjugate(h, x)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.group;
        self.members.iter().enumerate().all(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .all(|&b| g.mul(a, b) == g.mul(b, a))
        })
    }

    /// Subgroup generated by this one together with `other`.
    pub fn join(&self, other: &Subgroup<'g>) -> Subgroup<'g> {
        let mut gens = self.spanning_set();
        gens.extend(other.spanning_set());
        generate_subgroup(self.group, &gens)
    }

    fn spanning_set(&self) -> Vec<usize> {
        if self.generators.is_empty() && self.order() > 1 {
            self.members.clone()
        } else {
            self.generators.clone()
        }
    }
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.group.same(other.group) && self.bits == other.bits
    }
}

impl Eq for Subgroup<'_> {}

impl fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("group", &self.group.label())
            .field("members", &self.members)
            .field("generators", &self.generators)
            .finish()
    }
}

fn single(group: &FiniteGroup, x: usize) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(group.order());
    bits.insert(x);
    bits
}

/// Smallest subgroup containing `gens`, closed by a right-multiplication worklist.
pub fn generate_subgroup<'g>(group: &'g FiniteGroup, gens: &[usize]) -> Subgroup<'g> {
    let mut gens: Vec<usize> = gens
        .iter()
        .copied()
        .filter(|&s| s != group.identity())
        .collect();
    gens.dedup();
    let mut bits = single(group, group.identity());
    let mut work = vec![group.identity()];
    while let Some(y) = work.pop() {
        for &s in &gens {
            let z = group.mul(y, s);
            if !bits.put(z) {
                work.push(z);
            }
        }
    }
    Subgroup::from_closed_bits(group, bits, gens)
}

/// Checked variant of [`generate_subgroup`] for user-supplied indices.
pub fn try_generate_subgroup<'g>(group: &'g FiniteGroup, gens: &[usize]) -> Result<Subgroup<'g>> {
    for &s in gens {
        group.check(s)?;
    }
    Ok(generate_subgroup(group, gens))
}

/// Intersection of all conjugates `g^-1 H g`; equals `H` exactly when `H` is normal.
pub fn normal_core<'g>(h: &Subgroup<'g>) -> Subgroup<'g> {
    let g = h.group;
    let mut bits = h.bits.clone();
    for x in g.elements() {
        let mut conj = FixedBitSet::with_capacity(g.order());
        for &m in h.members() {
            conj.insert(g.conjugate(m, x));
        }
        bits.intersect_with(&conj);
    }
    Subgroup::from_closed_bits(g, bits, Vec::new())
}

/// Smallest normal subgroup containing `set`.
pub fn normal_closure<'g>(group: &'g FiniteGroup, set: &[usize]) -> Subgroup<'g> {
    let mut seen = FixedBitSet::with_capacity(group.order());
    let mut gens = Vec::new();
    for &s in set {
        for x in group.elements() {
            let c = group.conjugate(s, x);
            if !seen.put(c) {
                gens.push(c);
            }
        }
    }
    generate_subgroup(group, &gens)
}

fn check_scan_limit(group: &FiniteGroup) -> Result<()> {
    if group.order() > LATTICE_SCAN_LIMIT {
        Err(Error::BudgetExceeded {
            order: group.order(),
            cap: LATTICE_SCAN_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Every normal subgroup, sorted by order then member list.
///
/// Normal subgroups are joins of normal closures of single elements, so the
/// scan closes that family under pairwise joins.
pub fn normal_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup<'_>>> {
    check_scan_limit(group)?;
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut atoms = Vec::new();
    for x in group.elements() {
        let n = normal_closure(group, &[x]);
        if seen.insert(n.bits.clone()) {
            atoms.push(n);
        }
    }
    let mut all = atoms.clone();
    let mut frontier = atoms.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for n in &frontier {
            for a in &atoms {
                if a.is_subgroup_of(n) {
                    continue;
                }
                let j = n.join(a);
                if seen.insert(j.bits.clone()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        frontier = next;
    }
    sort_subgroups(&mut all);
    Ok(all)
}

/// Every subgroup contained in `mask`, sorted by order then member list.
///
/// Subgroups are joins of cyclic subgroups; joins leaving `mask` are pruned.
/// `budget` bounds the number of join computations.
pub fn subgroups_within<'g>(mask: &Subset<'g>, budget: u64) -> Result<Vec<Subgroup<'g>>> {
    let group = mask.group();
    check_scan_limit(group)?;
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut cyclic = Vec::new();
    for x in mask.iter() {
        let c = generate_subgroup(group, &[x]);
        if c.bits.is_subset(mask.bits()) && seen.insert(c.bits.clone()) {
            cyclic.push(c);
        }
    }
    let mut all = cyclic.clone();
    let mut frontier = cyclic.clone();
    let mut spent = 0u64;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(h) {
                    continue;
                }
                spent += 1;
                if spent > budget {
                    return Err(Error::SearchBudgetExceeded(budget));
                }
                let j = h.join(c);
                if j.bits.is_subset(mask.bits()) && seen.insert(j.bits.clone()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        frontier = next;
    }
    sort_subgroups(&mut all);
    Ok(all)
}

/// Every subgroup of the group.
pub fn all_subgroups(group: &FiniteGroup, budget: u64) -> Result<Vec<Subgroup<'_>>> {
    subgroups_within(&Subset::full(group), budget)
}

fn sort_subgroups(list: &mut [Subgroup<'_>]) {
    list.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.cmp(&b.members))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CAP, "S3")
            .unwrap()
    }

    fn s4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], DEFAULT_CAP, "S4")
            .unwrap()
    }

    fn z(n: usize) -> FiniteGroup {
        let t: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        FiniteGroup::from_table(&t, format!("Z{n}")).unwrap()
    }

    #[test]
    fn generation_examples() {
        let g = s3();
        assert_eq!(generate_subgroup(&g, &[]).members(), &[0]);
        assert_eq!(generate_subgroup(&g, &[1, 2]).order(), 6);
        let z6 = z(6);
        assert_eq!(generate_subgroup(&z6, &[2]).members(), &[0, 2, 4]);
        assert!(try_generate_subgroup(&z6, &[6]).is_err());
    }

    #[test]
    fn generation_is_idempotent() {
        let g = s4();
        for x in g.elements() {
            for y in [1, 5, 11] {
                let h = generate_subgroup(&g, &[x, y]);
                let again = generate_subgroup(&g, h.members());
                assert_eq!(h.members(), again.members());
                assert_eq!(g.order() % h.order(), 0);
            }
        }
    }

    #[test]
    fn core_of_transposition_in_s3_is_trivial() {
        let g = s3();
        let h = generate_subgroup(&g, &[1]);
        assert_eq!(h.order(), 2);
        assert!(!h.is_normal());
        assert_eq!(normal_core(&h).members(), &[0]);
        let c = generate_subgroup(&g, &[2]);
        assert!(c.is_normal());
        assert_eq!(normal_core(&c), c);
    }

    #[test]
    fn core_of_sylow2_in_s4_is_klein() {
        let g = s4();
        let idx = |p: [usize; 4]| g.index_of_permutation(&p).unwrap();
        let sylow = generate_subgroup(&g, &[idx([1, 2, 3, 0]), idx([2, 1, 0, 3])]);
        assert_eq!(sylow.order(), 8);
        let core = normal_core(&sylow);
        let mut klein = vec![
            idx([0, 1, 2, 3]),
            idx([1, 0, 3, 2]),
            idx([2, 3, 0, 1]),
            idx([3, 2, 1, 0]),
        ];
        klein.sort();
        assert_eq!(core.members(), klein.as_slice());
        assert!(core.is_normal());
        assert_eq!(normal_core(&core), core);
    }

    #[test]
    fn normal_subgroup_counts() {
        assert_eq!(normal_subgroups(&s3()).unwrap().len(), 3);
        // 1, V4, A4, S4
        let orders: Vec<usize> = normal_subgroups(&s4())
            .unwrap()
            .iter()
            .map(|n| n.order())
            .collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
        assert_eq!(normal_subgroups(&z(6)).unwrap().len(), 4);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&s3(), 1_000_000).unwrap().len(), 6);
        assert_eq!(all_subgroups(&s4(), 1_000_000).unwrap().len(), 30);
        assert_eq!(all_subgroups(&z(27), 1_000_000).unwrap().len(), 4);
        assert!(matches!(
            all_subgroups(&s4(), 3),
            Err(Error::SearchBudgetExceeded(3))
        ));
    }

    #[test]
    fn subset_round_trip() {
        let g = s3();
        let c = generate_subgroup(&g, &[2]);
        assert_eq!(Subgroup::from_subset(&c.as_subset()).unwrap(), c);
        let not = Subset::from_indices(&g, [0, 1, 2]).unwrap();
        assert!(Subgroup::from_subset(&not).is_none());
    }
}
