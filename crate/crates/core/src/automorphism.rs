//! Validated automorphisms and the order-3 semidirect extension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, ASSOCIATIVITY_SEED, FULL_ASSOCIATIVITY_LIMIT, SAMPLED_TRIPLES};

/// A multiplicative bijection of a group onto itself, `x -> x^alpha`.
#[derive(Debug, Clone)]
pub struct Automorphism<'g> {
    group: &'g FiniteGroup,
    map: Vec<usize>,
    order: usize,
}

impl<'g> Automorphism<'g> {
    /// Validates `map` (the image of each element index) and computes its order.
    pub fn from_map(group: &'g FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if map.len() != n {
            return Err(Error::WrongLength {
                len: map.len(),
                expected: n,
            });
        }
        let mut hit = vec![false; n];
        for &y in &map {
            if y >= n || hit[y] {
                return Err(Error::NotBijective(y));
            }
            hit[y] = true;
        }
        let respects = |x: usize, y: usize| map[group.mul(x, y)] == group.mul(map[x], map[y]);
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    if !respects(x, y) {
                        return Err(Error::NotMultiplicative(x, y));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if !respects(x, y) {
                    return Err(Error::NotMultiplicative(x, y));
                }
            }
        }
        let order = permutation_order(&map);
        Ok(Automorphism { group, map, order })
    }

    pub fn identity(group: &'g FiniteGroup) -> Self {
        Automorphism {
            group,
            map: group.elements().collect(),
            order: 1,
        }
    }

    /// `x -> g^-1 x g`.
    pub fn inner(group: &'g FiniteGroup, g: usize) -> Result<Self> {
        group.check(g)?;
        let map = group.elements().map(|x| group.conjugate(x, g)).collect();
        Self::from_map(group, map)
    }

    /// `x -> x^-1`, valid only on abelian groups.
    pub fn inversion(group: &'g FiniteGroup) -> Result<Self> {
        let map = group.elements().map(|x| group.inv(x)).collect();
        Self::from_map(group, map)
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `alpha^k`.
    pub fn apply_pow(&self, x: usize, k: usize) -> usize {
        (0..k % self.order).fold(x, |y, _| self.map[y])
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }
}

fn permutation_order(map: &[usize]) -> usize {
    let mut seen = vec![false; map.len()];
    let mut order = 1usize;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = map[x];
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `G x| <alpha>` for an automorphism with `alpha^3 = 1`.
///
/// Pairs `(g, i)` sit at index `i * |G| + g` and multiply as
/// `(g, i)(h, j) = (g * alpha^{(3 - i) mod 3}(h), (i + j) mod 3)`. Under this
/// convention `(a, 1)^3 = a * a^{alpha^2} * a^alpha`, a cyclic rotation of
/// `a^{alpha^2} a^alpha a`.
#[derive(Debug, Clone)]
pub struct SemidirectExtension<'g> {
    base: &'g FiniteGroup,
    alpha: Automorphism<'g>,
    group: FiniteGroup,
}

impl<'g> SemidirectExtension<'g> {
    pub fn new(alpha: &Automorphism<'g>) -> Result<Self> {
        if 3 % alpha.order() != 0 {
            return Err(Error::OrderNotDividing3(alpha.order()));
        }
        let base = alpha.group();
        let n = base.order();
        let powers: [Vec<usize>; 3] =
            [0, 1, 2].map(|k| base.elements().map(|x| alpha.apply_pow(x, k)).collect());
        let mut flat = Vec::with_capacity(9 * n * n);
        for i in 0..3 {
            for g in 0..n {
                for j in 0..3 {
                    for &twisted in &powers[(3 - i) % 3] {
                        flat.push(((i + j) % 3 * n + base.mul(g, twisted)) as u32);
                    }
                }
            }
        }
        let label = format!("{}:C3", base.label());
        let group = FiniteGroup::from_flat_table(flat, 3 * n, label)?;
        Ok(SemidirectExtension {
            base,
            alpha: alpha.clone(),
            group,
        })
    }

    pub fn base(&self) -> &'g FiniteGroup {
        self.base
    }

    pub fn alpha(&self) -> &Automorphism<'g> {
        &self.alpha
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn pair(&self, g: usize, i: usize) -> usize {
        (i % 3) * self.base.order() + g
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx % self.base.order(), idx / self.base.order())
    }

    pub fn into_group(self) -> FiniteGroup {
        self.group
    }
}

/// Builds the semidirect extension and returns its group.
pub fn semidirect_c3(alpha: &Automorphism<'_>) -> Result<FiniteGroup> {
    SemidirectExtension::new(alpha).map(SemidirectExtension::into_group)
}
