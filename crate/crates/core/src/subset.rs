//! Bitset subsets of a finite group and their counting measure.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::Measure;

/// A subset of a fixed group, stored as a bitset over element indices.
#[derive(Clone)]
pub struct Subset<'g> {
    group: &'g FiniteGroup,
    bits: FixedBitSet,
}

impl<'g> Subset<'g> {
    pub fn empty(group: &'g FiniteGroup) -> Self {
        Subset {
            group,
            bits: FixedBitSet::with_capacity(group.order()),
        }
    }

    pub fn full(group: &'g FiniteGroup) -> Self {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert_range(..);
        Subset { group, bits }
    }

    pub fn from_indices(
        group: &'g FiniteGroup,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for i in indices {
            group.check(i)?;
            s.bits.insert(i);
        }
        Ok(s)
    }

    pub fn from_predicate(group: &'g FiniteGroup, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(group);
        for x in group.elements() {
            if pred(x) {
                s.bits.insert(x);
            }
        }
        s
    }

    pub(crate) fn from_bits(group: &'g FiniteGroup, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), group.order());
        Subset { group, bits }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn insert(&mut self, x: usize) {
        self.bits.insert(x);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Normalized counting measure `|A| / |G|` in lowest terms.
    pub fn measure(&self) -> Measure {
        Measure::new(self.len() as u64, self.group.order() as u64)
    }

    fn same_group(&self, other: &Subset<'_>) -> Result<()> {
        if self.group.same(other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn intersection(&self, other: &Subset<'g>) -> Result<Self> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Subset::from_bits(self.group, bits))
    }

    pub fn union(&self, other: &Subset<'g>) -> Result<Self> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Subset::from_bits(self.group, bits))
    }

    pub fn is_subset_of(&self, other: &Subset<'g>) -> bool {
        self.group.same(other.group) && self.bits.is_subset(&other.bits)
    }

    /// `xA = { x a : a in A }`.
    pub fn left_translate(&self, x: usize) -> Self {
        let g = self.group;
        let mut bits = FixedBitSet::with_capacity(g.order());
        for a in self.bits.ones() {
            bits.insert(g.mul(x, a));
        }
        Subset::from_bits(g, bits)
    }

    /// `Ax = { a x : a in A }`.
    pub fn right_translate(&self, x: usize) -> Self {
        let g = self.group;
        let mut bits = FixedBitSet::with_capacity(g.order());
        for a in self.bits.ones() {
            bits.insert(g.mul(a, x));
        }
        Subset::from_bits(g, bits)
    }

    /// `A^-1`.
    pub fn inverse(&self) -> Self {
        let g = self.group;
        let mut bits = FixedBitSet::with_capacity(g.order());
        for a in self.bits.ones() {
            bits.insert(g.inv(a));
        }
        Subset::from_bits(g, bits)
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|a| self.contains(self.group.inv(a)))
    }
}

impl PartialEq for Subset<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.group.same(other.group) && self.bits == other.bits
    }
}

impl Eq for Subset<'_> {}

impl fmt::Debug for Subset<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subset")
            .field("group", &self.group.label())
            .field("members", &self.to_vec())
            .finish()
    }
}

/// Renders a measure as `p/q` in lowest terms with `q > 0`.
pub fn format_measure(m: &Measure) -> String {
    format!("{}/{}", m.numer(), m.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], 100, "S3").unwrap()
    }

    #[test]
    fn measure_basics() {
        let g = s3();
        assert_eq!(Subset::empty(&g).measure(), Measure::new(0, 1));
        assert_eq!(Subset::full(&g).measure(), Measure::new(1, 1));
        let cubes = Subset::from_predicate(&g, |x| g.power(x, 3) == g.identity());
        assert_eq!(cubes.measure(), Measure::new(1, 2));
        assert_eq!(format_measure(&cubes.measure()), "1/2");
        assert_eq!(format_measure(&Subset::empty(&g).measure()), "0/1");
    }

    #[test]
    fn mismatched_groups() {
        let (g, h) = (s3(), s3());
        let a = Subset::full(&g);
        let b = Subset::full(&h);
        assert_eq!(a.intersection(&b).unwrap_err(), Error::GroupMismatch);
        assert!(Subset::from_indices(&g, [6]).is_err());
    }

    proptest! {
        #[test]
        fn inclusion_exclusion_and_translation(a in 0u64..64, b in 0u64..64, x in 0usize..6) {
            let g = s3();
            let sa = Subset::from_predicate(&g, |i| a >> i & 1 == 1);
            let sb = Subset::from_predicate(&g, |i| b >> i & 1 == 1);
            let lhs = sa.intersection(&sb).unwrap().measure() + sa.union(&sb).unwrap().measure();
            prop_assert_eq!(lhs, sa.measure() + sb.measure());
            prop_assert_eq!(sa.left_translate(x).measure(), sa.measure());
            prop_assert_eq!(sa.right_translate(x).measure(), sa.measure());
            prop_assert_eq!(sa.inverse().inverse(), sa);
        }
    }
}
