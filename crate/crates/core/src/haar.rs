//! Counting-measure analysis of translates: exact intersection averages,
//! the product average `psi`, and k-largeness certificates.

use fixedbitset::FixedBitSet;
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::scalar::Scalar;
use crate::subset::Subset;
use crate::Measure;

/// Default cap on `|G|^n` for [`average_lambda`].
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

/// Default cap on combination checks during certificate search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Exhaustive certificate search runs only up to this group order.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 24;

fn common_group<'g>(sets: &[Subset<'g>]) -> Result<Option<&'g FiniteGroup>> {
    let Some(first) = sets.first() else {
        return Ok(None);
    };
    let g = first.group();
    if sets.iter().any(|s| !s.group().same(g)) {
        return Err(Error::GroupMismatch);
    }
    Ok(Some(g))
}

/// `m(x_1 A_1 ∩ ... ∩ x_n A_n)`.
pub fn lambda_intersection(sets: &[Subset<'_>], xs: &[usize]) -> Result<Measure> {
    if sets.len() != xs.len() {
        return Err(Error::WrongLength {
            len: xs.len(),
            expected: sets.len(),
        });
    }
    let Some(g) = common_group(sets)? else {
        return Ok(Measure::new(1, 1));
    };
    let mut acc = Subset::full(g);
    for (a, &x) in sets.iter().zip(xs) {
        g.check(x)?;
        acc = acc.intersection(&a.left_translate(x))?;
    }
    Ok(acc.measure())
}

/// Both sides of the averaging identity: the mean of `lambda_intersection`
/// over every translate tuple, and the product of the measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FubiniReport {
    pub average: Measure,
    pub product: Measure,
    pub tuples: u128,
}

impl FubiniReport {
    pub fn holds(&self) -> bool {
        self.average == self.product
    }
}

pub fn average_lambda(sets: &[Subset<'_>], budget: u128) -> Result<FubiniReport> {
    let Some(g) = common_group(sets)? else {
        let one = Measure::new(1, 1);
        return Ok(FubiniReport {
            average: one,
            product: one,
            tuples: 1,
        });
    };
    let n = g.order();
    let size = (n as u128)
        .checked_pow(sets.len() as u32)
        .unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::TupleSpaceTooLarge { size, budget });
    }
    let translates: Vec<Vec<FixedBitSet>> = sets
        .iter()
        .map(|a| {
            g.elements()
                .map(|x| a.left_translate(x).bits().clone())
                .collect()
        })
        .collect();

    // depth-first over tuples, keeping the running intersection per depth
    let mut stack: Vec<FixedBitSet> = Vec::with_capacity(sets.len() + 1);
    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    stack.push(full);
    let total = sum_counts(&translates, &mut stack, 0);

    let average = reduce(total, (n as u128) * size);
    let product = sets
        .iter()
        .fold(Measure::new(1, 1), |acc, a| acc * a.measure());
    Ok(FubiniReport {
        average,
        product,
        tuples: size,
    })
}

fn sum_counts(translates: &[Vec<FixedBitSet>], stack: &mut Vec<FixedBitSet>, depth: usize) -> u128 {
    if depth == translates.len() {
        return stack[depth].count_ones(..) as u128;
    }
    let mut total = 0;
    for t in &translates[depth] {
        let mut next = stack[depth].clone();
        next.intersect_with(t);
        if next.is_clear() {
            continue;
        }
        stack.push(next);
        total += sum_counts(translates, stack, depth + 1);
        stack.pop();
    }
    total
}

fn reduce(numer: u128, denom: u128) -> Measure {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let d = gcd(numer, denom).max(1);
    let (p, q) = (numer / d, denom / d);
    Measure::new(
        u64::try_from(p).expect("numerator fits u64"),
        u64::try_from(q).expect("denominator fits u64"),
    )
}

/// A complex function on the group with every value in the closed unit disc.
#[derive(Debug, Clone)]
pub struct GroupFunction<'g, T: Scalar> {
    group: &'g FiniteGroup,
    values: Vec<Complex<T>>,
}

impl<'g, T: Scalar> GroupFunction<'g, T> {
    pub fn new(group: &'g FiniteGroup, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::WrongLength {
                len: values.len(),
                expected: group.order(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| v.norm().is_nan() || v.norm() > T::one() + T::epsilon())
        {
            return Err(Error::UnitBallViolated(i));
        }
        Ok(GroupFunction { group, values })
    }

    pub fn constant_one(group: &'g FiniteGroup) -> Self {
        GroupFunction {
            group,
            values: vec![Complex::new(T::one(), T::zero()); group.order()],
        }
    }

    pub fn indicator(set: &Subset<'g>) -> Self {
        let g = set.group();
        let values = g
            .elements()
            .map(|x| {
                let v = if set.contains(x) { T::one() } else { T::zero() };
                Complex::new(v, T::zero())
            })
            .collect();
        GroupFunction { group: g, values }
    }

    /// Uniform sample from the unit disc at every element.
    pub fn random(group: &'g FiniteGroup, rng: &mut impl Rng) -> Self {
        let values = group
            .elements()
            .map(|_| {
                let r: f64 = rng.gen::<f64>().sqrt();
                let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                let c = Complex::from_polar(r, theta);
                let scale = |v: f64| T::from_f64(v).expect("representable");
                let mut z = Complex::new(scale(c.re), scale(c.im));
                // rounding to a narrower type may push the modulus past 1
                if z.norm() > T::one() {
                    z = z / z.norm();
                }
                z
            })
            .collect();
        GroupFunction { group, values }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// `(L_x f)(g) = f(x^-1 g)`.
    #[inline]
    pub fn translated(&self, x: usize, g: usize) -> Complex<T> {
        self.values[self.group.mul(self.group.inv(x), g)]
    }

    /// `||L_x f - L_y f||_2` under the normalized counting measure.
    pub fn translate_distance(&self, x: usize, y: usize) -> T {
        let n = T::from_usize(self.group.order()).expect("order fits");
        let sum = self
            .group
            .elements()
            .map(|g| (self.translated(x, g) - self.translated(y, g)).norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        (sum / n).sqrt()
    }
}

fn check_functions<T: Scalar>(fs: &[GroupFunction<'_, T>], xs: &[usize]) -> Result<()> {
    if fs.len() != xs.len() {
        return Err(Error::WrongLength {
            len: xs.len(),
            expected: fs.len(),
        });
    }
    if let Some(first) = fs.first() {
        if fs.iter().any(|f| !f.group.same(first.group)) {
            return Err(Error::GroupMismatch);
        }
        for &x in xs {
            first.group.check(x)?;
        }
    }
    Ok(())
}

/// `(1/|G|) sum_g prod_k f_k(x_k^-1 g)`.
pub fn psi<T: Scalar>(fs: &[GroupFunction<'_, T>], xs: &[usize]) -> Result<Complex<T>> {
    check_functions(fs, xs)?;
    let Some(first) = fs.first() else {
        return Ok(Complex::new(T::one(), T::zero()));
    };
    let g = first.group;
    let n = T::from_usize(g.order()).expect("order fits");
    let one = Complex::new(T::one(), T::zero());
    let total = g
        .elements()
        .map(|e| {
            fs.iter()
                .zip(xs)
                .fold(one, |acc, (f, &x)| acc * f.translated(x, e))
        })
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    Ok(total / n)
}

/// Outcome of comparing `|psi(x) - psi(y)|` against the sum of translate distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck<T> {
    pub difference: T,
    pub bound: T,
}

impl<T: Scalar> LipschitzCheck<T> {
    pub fn holds(&self) -> bool {
        self.difference <= self.bound + T::tolerance()
    }
}

pub fn lipschitz_check<T: Scalar>(
    fs: &[GroupFunction<'_, T>],
    xs: &[usize],
    ys: &[usize],
) -> Result<LipschitzCheck<T>> {
    check_functions(fs, ys)?;
    let difference = (psi(fs, xs)? - psi(fs, ys)?).norm();
    let bound = fs
        .iter()
        .zip(xs.iter().zip(ys))
        .map(|(f, (&x, &y))| f.translate_distance(x, y))
        .fold(T::zero(), |a, b| a + b);
    Ok(LipschitzCheck { difference, bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    Exhaustive,
}

/// A symmetric set `U` containing the identity such that
/// `A ∩ u_1 A ∩ ... ∩ u_k A` is nonempty for all `u_i` in `U`.
#[derive(Debug, Clone)]
pub struct LargenessCertificate<'g> {
    pub base: Subset<'g>,
    pub k: usize,
    pub witness_set: Subset<'g>,
}

impl LargenessCertificate<'_> {
    /// Re-checks the certificate over every ordered k-tuple from `U`.
    pub fn verify(&self, budget: u64) -> Result<bool> {
        let g = self.base.group();
        if !self.witness_set.contains(g.identity()) || !self.witness_set.is_symmetric() {
            return Ok(false);
        }
        let u = self.witness_set.to_vec();
        let mut idx = vec![0usize; self.k];
        let mut spent = 0u64;
        loop {
            spent += 1;
            if spent > budget {
                return Err(Error::SearchBudgetExceeded(budget));
            }
            let mut acc = self.base.clone();
            for &i in &idx {
                acc = acc.intersection(&self.base.left_translate(u[i]))?;
            }
            if acc.is_empty() {
                return Ok(false);
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == self.k {
                    return Ok(true);
                }
                idx[pos] += 1;
                if idx[pos] < u.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

struct CertificateSearch<'a> {
    base: &'a FixedBitSet,
    translates: Vec<Option<FixedBitSet>>,
    set: &'a Subset<'a>,
    k: usize,
    spent: u64,
    budget: u64,
}

impl CertificateSearch<'_> {
    fn translate(&mut self, u: usize) -> &FixedBitSet {
        if self.translates[u].is_none() {
            self.translates[u] = Some(self.set.left_translate(u).bits().clone());
        }
        self.translates[u].as_ref().expect("just filled")
    }

    /// Whether every combination of size `min(k, |pool|)` that contains at
    /// least one of `fresh` has a nonempty intersection with the base.
    fn extension_valid(&mut self, current: &[usize], fresh: &[usize]) -> Result<bool> {
        let mut pool: Vec<usize> = fresh.to_vec();
        pool.extend(current.iter().copied().filter(|u| !fresh.contains(u)));
        let size = self.k.min(pool.len());
        for &u in &pool {
            self.translate(u);
        }
        let base = self.base.clone();
        for first in 0..fresh.len() {
            if pool.len() - first < size {
                break;
            }
            let mut acc = base.clone();
            acc.intersect_with(self.translates[pool[first]].as_ref().expect("cached"));
            if !self.extend(&pool, first + 1, size - 1, acc)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn extend(
        &mut self,
        pool: &[usize],
        from: usize,
        left: usize,
        acc: FixedBitSet,
    ) -> Result<bool> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        if acc.is_clear() {
            return Ok(false);
        }
        if left == 0 {
            return Ok(true);
        }
        for i in from..=pool.len() - left {
            let mut next = acc.clone();
            next.intersect_with(self.translates[pool[i]].as_ref().expect("cached"));
            if !self.extend(pool, i + 1, left - 1, next)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Searches for a symmetric `U` witnessing relative k-largeness of `set`.
///
/// Greedy grows `U` from the identity by inverse pairs in least-index order.
/// Exhaustive returns a maximum-size `U`, preferring lexicographically
/// smallest pair choices on ties.
pub fn klarge_certificate<'g>(
    set: &Subset<'g>,
    k: usize,
    strategy: Strategy,
    budget: u64,
) -> Result<LargenessCertificate<'g>> {
    let g = set.group();
    if set.is_empty() {
        return Err(Error::EmptyBase);
    }
    if strategy == Strategy::Exhaustive && g.order() > EXHAUSTIVE_ORDER_LIMIT {
        return Err(Error::BudgetExceeded {
            order: g.order(),
            cap: EXHAUSTIVE_ORDER_LIMIT,
        });
    }
    let k = k.max(1);
    let mut search = CertificateSearch {
        base: set.bits(),
        translates: vec![None; g.order()],
        set,
        k,
        spent: 0,
        budget,
    };
    let pairs: Vec<Vec<usize>> = g
        .elements()
        .filter(|&x| x != g.identity() && x <= g.inv(x))
        .map(|x| {
            if g.inv(x) == x {
                vec![x]
            } else {
                vec![x, g.inv(x)]
            }
        })
        .collect();
    let identity = vec![g.identity()];

    let chosen = match strategy {
        Strategy::Greedy => {
            let mut current = identity;
            for pair in &pairs {
                if search.extension_valid(&current, pair)? {
                    current.extend(pair);
                }
            }
            current
        }
        Strategy::Exhaustive => {
            let admissible: Vec<Vec<usize>> = {
                let mut out = Vec::new();
                for pair in &pairs {
                    if search.extension_valid(&identity, pair)? {
                        out.push(pair.clone());
                    }
                }
                out
            };
            let mut suffix = vec![0usize; admissible.len() + 1];
            for i in (0..admissible.len()).rev() {
                suffix[i] = suffix[i + 1] + admissible[i].len();
            }
            let mut best = identity.clone();
            let mut current = identity;
            exhaustive(
                &mut search,
                &admissible,
                &suffix,
                0,
                &mut current,
                &mut best,
            )?;
            best
        }
    };
    Ok(LargenessCertificate {
        base: set.clone(),
        k,
        witness_set: Subset::from_indices(g, chosen)?,
    })
}

fn exhaustive(
    search: &mut CertificateSearch<'_>,
    pairs: &[Vec<usize>],
    suffix: &[usize],
    at: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) -> Result<()> {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if at == pairs.len() || current.len() + suffix[at] <= best.len() {
        return Ok(());
    }
    if search.extension_valid(current, &pairs[at])? {
        let keep = current.len();
        current.extend(&pairs[at]);
        exhaustive(search, pairs, suffix, at + 1, current, best)?;
        current.truncate(keep);
    }
    exhaustive(search, pairs, suffix, at + 1, current, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: usize) -> FiniteGroup {
        let t: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        FiniteGroup::from_table(&t, format!("Z{n}")).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CAP, "S3")
            .unwrap()
    }

    fn m(p: u64, q: u64) -> Measure {
        Measure::new(p, q)
    }

    #[test]
    fn lambda_on_z4() {
        let g = z(4);
        let a = Subset::from_indices(&g, [0, 1]).unwrap();
        let sets = [a.clone(), a.clone()];
        assert_eq!(lambda_intersection(&sets, &[0, 0]).unwrap(), m(1, 2));
        assert_eq!(lambda_intersection(&sets, &[0, 2]).unwrap(), m(0, 1));
        assert_eq!(lambda_intersection(&sets, &[0, 1]).unwrap(), m(1, 4));
        let full = [Subset::full(&g), Subset::full(&g)];
        assert_eq!(lambda_intersection(&full, &[3, 1]).unwrap(), m(1, 1));
        assert!(lambda_intersection(&sets, &[0]).is_err());
    }

    #[test]
    fn average_examples() {
        let g = z(4);
        let a = Subset::from_indices(&g, [0, 1]).unwrap();
        let r = average_lambda(&[a.clone(), a.clone()], DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(r.average, m(1, 4));
        assert!(r.holds());
        let r = average_lambda(&[a.clone(), Subset::empty(&g)], DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!((r.average, r.product), (m(0, 1), m(0, 1)));

        let s = s3();
        let c = Subset::from_predicate(&s, |x| s.power(x, 3) == 0);
        let r = average_lambda(&[c.clone(), c.clone()], DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(r.average, m(1, 4));
        assert!(matches!(
            average_lambda(&[c.clone(), c.clone(), c], 100),
            Err(Error::TupleSpaceTooLarge {
                size: 216,
                budget: 100
            })
        ));
    }

    #[test]
    fn psi_examples() {
        let g = z(2);
        let f =
            GroupFunction::<f64>::new(&g, vec![Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)])
                .unwrap();
        assert!(psi(&[f], &[1]).unwrap().norm() < 1e-15);
        let one = GroupFunction::<f64>::constant_one(&g);
        assert!(
            (psi(&[one.clone(), one], &[1, 0]).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-15
        );
        assert_eq!(
            GroupFunction::<f64>::new(&g, vec![Complex::new(1.0, 0.0), Complex::new(1.0, 1.0)])
                .unwrap_err(),
            Error::UnitBallViolated(1)
        );
    }

    #[test]
    fn psi_of_indicators_is_lambda() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let sets: Vec<Subset> = (0..3)
                .map(|_| Subset::from_predicate(&g, |_| rng.gen_bool(0.5)))
                .collect();
            let xs: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
            let fs: Vec<GroupFunction<f64>> = sets.iter().map(GroupFunction::indicator).collect();
            let lam = lambda_intersection(&sets, &xs).unwrap();
            let expect = *lam.numer() as f64 / *lam.denom() as f64;
            assert!((psi(&fs, &xs).unwrap() - Complex::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn lipschitz_generic_over_scalar() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let fs: Vec<GroupFunction<f32>> = (0..2)
                .map(|_| GroupFunction::random(&g, &mut rng))
                .collect();
            let xs = [rng.gen_range(0..6), rng.gen_range(0..6)];
            let ys = [rng.gen_range(0..6), rng.gen_range(0..6)];
            assert!(lipschitz_check(&fs, &xs, &ys).unwrap().holds());
        }
    }

    #[test]
    fn certificate_examples() {
        let g = s3();
        let full = Subset::full(&g);
        for k in 1..4 {
            let c = klarge_certificate(&full, k, Strategy::Greedy, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(c.witness_set, full);
        }
        let cyc = Subset::from_predicate(&g, |x| g.power(x, 3) == 0);
        for k in 1..4 {
            for strategy in [Strategy::Greedy, Strategy::Exhaustive] {
                let c = klarge_certificate(&cyc, k, strategy, DEFAULT_SEARCH_BUDGET).unwrap();
                assert_eq!(c.witness_set, cyc);
                assert!(c.verify(1_000_000).unwrap());
            }
        }
        let a = Subset::from_indices(&g, [0, 1]).unwrap();
        let c = klarge_certificate(&a, 1, Strategy::Greedy, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(c.witness_set.to_vec(), vec![0, 1]);
        assert_eq!(
            klarge_certificate(&Subset::empty(&g), 1, Strategy::Greedy, 10).unwrap_err(),
            Error::EmptyBase
        );
    }

    #[test]
    fn exhaustive_is_gated() {
        let g = z(25);
        let a = Subset::full(&g);
        assert!(matches!(
            klarge_certificate(&a, 2, Strategy::Exhaustive, DEFAULT_SEARCH_BUDGET),
            Err(Error::BudgetExceeded { order: 25, cap: 24 })
        ));
    }
}
