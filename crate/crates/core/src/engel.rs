//! Commutator laws on finite groups. Every check is an exhaustive scan that
//! reports the first counterexample in least-index order.
//!
//! Convention: `[a, b] = a^-1 b^-1 a b`, `[a, b, c] = [[a, b], c]`.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subgroup::{generate_subgroup, Subgroup};

/// Default cap on group order for triple scans.
pub const DEFAULT_TRIPLE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorLaw {
    /// `[a, b, b] = 1`
    TwoEngel,
    /// nilpotent of class at most 3
    ClassBound3,
    /// `[x, y, z][x, z, y] = 1`
    JacobiSwap,
    /// eight cube conditions imply `[a, b, b] = 1`
    Lemma2Engel,
}

impl fmt::Display for CommutatorLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommutatorLaw::TwoEngel => "two-engel",
            CommutatorLaw::ClassBound3 => "class-bound-3",
            CommutatorLaw::JacobiSwap => "jacobi-swap",
            CommutatorLaw::Lemma2Engel => "lemma-2engel",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorReport {
    pub law: CommutatorLaw,
    /// First violating tuple in lexicographic order.
    pub counterexample: Option<Vec<usize>>,
    pub checked: u64,
    /// Tuples meeting the hypothesis, for conditional laws.
    pub qualifying: Option<u64>,
}

impl CommutatorReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `[a, b, b] = 1` for all pairs of the subgroup.
pub fn is_2engel(h: &Subgroup<'_>) -> CommutatorReport {
    let g = h.group();
    let e = g.identity();
    let mut checked = 0;
    for &a in h.members() {
        for &b in h.members() {
            checked += 1;
            if g.commutator3(a, b, b) != e {
                return CommutatorReport {
                    law: CommutatorLaw::TwoEngel,
                    counterexample: Some(vec![a, b]),
                    checked,
                    qualifying: None,
                };
            }
        }
    }
    CommutatorReport {
        law: CommutatorLaw::TwoEngel,
        counterexample: None,
        checked,
        qualifying: None,
    }
}

/// Lower central series `γ_1 = H`, `γ_{i+1} = <[g, h] : g in H, h in γ_i>`.
#[derive(Debug, Clone)]
pub struct CentralSeries<'g> {
    pub terms: Vec<Subgroup<'g>>,
    /// Defined iff the series reaches the trivial subgroup.
    pub class: Option<usize>,
}

impl CentralSeries<'_> {
    pub fn is_nilpotent(&self) -> bool {
        self.class.is_some()
    }
}

pub fn nilpotency_class<'g>(h: &Subgroup<'g>) -> CentralSeries<'g> {
    let g = h.group();
    let mut terms = vec![h.clone()];
    loop {
        let last = terms.last().expect("nonempty");
        if last.order() == 1 {
            break;
        }
        let mut seen = FixedBitSet::with_capacity(g.order());
        let mut gens = Vec::new();
        for &x in h.members() {
            for &y in last.members() {
                let c = g.commutator(x, y);
                if !seen.put(c) {
                    gens.push(c);
                }
            }
        }
        let next = generate_subgroup(g, &gens);
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    let class = (terms.last().expect("nonempty").order() == 1).then(|| terms.len() - 1);
    CentralSeries { terms, class }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::BudgetExceeded { order, cap })
    } else {
        Ok(())
    }
}

/// Scans every triple `(a, b, x)`; whenever `x, bx, ax, a^-1 x, ab^-1 x,
/// ba^-1 x, abx, b^-1 a^-1 x` all cube to the identity, checks `[a, b, b] = 1`.
pub fn verify_lemma_2engel(g: &FiniteGroup, cap: usize) -> Result<CommutatorReport> {
    check_cap(g.order(), cap)?;
    let e = g.identity();
    let mut cube = FixedBitSet::with_capacity(g.order());
    for x in g.elements() {
        if g.power(x, 3) == e {
            cube.insert(x);
        }
    }
    let n = g.order() as u64;
    let mut qualifying = 0u64;
    let mut counterexample = None;
    for a in g.elements() {
        let ai = g.inv(a);
        for b in g.elements() {
            let bi = g.inv(b);
            let shifts = [
                b,
                a,
                ai,
                g.mul(a, bi),
                g.mul(b, ai),
                g.mul(a, b),
                g.mul(bi, ai),
            ];
            let mut law: Option<bool> = None;
            for x in cube.ones() {
                if shifts.iter().all(|&s| cube.contains(g.mul(s, x))) {
                    qualifying += 1;
                    let ok = *law.get_or_insert_with(|| g.commutator3(a, b, b) == e);
                    if !ok && counterexample.is_none() {
                        counterexample = Some(vec![a, b, x]);
                    }
                }
            }
        }
    }
    Ok(CommutatorReport {
        law: CommutatorLaw::Lemma2Engel,
        counterexample,
        checked: n * n * n,
        qualifying: Some(qualifying),
    })
}

/// Consequences checked on a 2-Engel subgroup: class at most 3 and
/// `[x, y, z][x, z, y] = 1` for every triple.
#[derive(Debug, Clone)]
pub struct EngelConsequences {
    /// False when the subgroup is not 2-Engel and nothing further was checked.
    pub applicable: bool,
    pub class: Option<usize>,
    pub class_bound: CommutatorReport,
    pub jacobi_swap: Option<CommutatorReport>,
}

impl EngelConsequences {
    pub fn holds(&self) -> bool {
        !self.applicable
            || (self.class_bound.holds() && self.jacobi_swap.as_ref().is_some_and(|r| r.holds()))
    }
}

pub fn verify_engel_consequences(h: &Subgroup<'_>, cap: usize) -> Result<EngelConsequences> {
    check_cap(h.order(), cap)?;
    let engel = is_2engel(h);
    if !engel.holds() {
        return Ok(EngelConsequences {
            applicable: false,
            class: None,
            class_bound: CommutatorReport {
                law: CommutatorLaw::ClassBound3,
                counterexample: None,
                checked: 0,
                qualifying: None,
            },
            jacobi_swap: None,
        });
    }
    let series = nilpotency_class(h);
    let class_ok = series.class.is_some_and(|c| c <= 3);
    let class_bound = CommutatorReport {
        law: CommutatorLaw::ClassBound3,
        counterexample: (!class_ok)
            .then(|| series.terms.last().expect("nonempty").members().to_vec()),
        checked: series.terms.len() as u64,
        qualifying: None,
    };
    let g = h.group();
    let e = g.identity();
    let mut checked = 0u64;
    let mut counterexample = None;
    'scan: for &x in h.members() {
        for &y in h.members() {
            for &z in h.members() {
                checked += 1;
                if g.mul(g.commutator3(x, y, z), g.commutator3(x, z, y)) != e {
                    counterexample = Some(vec![x, y, z]);
                    break 'scan;
                }
            }
        }
    }
    Ok(EngelConsequences {
        applicable: true,
        class: series.class,
        class_bound,
        jacobi_swap: Some(CommutatorReport {
            law: CommutatorLaw::JacobiSwap,
            counterexample,
            checked,
            qualifying: None,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

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

    fn d8() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], DEFAULT_CAP, "D8")
            .unwrap()
    }

    #[test]
    fn engel_checks() {
        let z6 = z(6);
        assert!(is_2engel(&Subgroup::whole(&z6)).holds());
        let s = s3();
        let r = is_2engel(&Subgroup::whole(&s));
        let w = r.counterexample.unwrap();
        assert_ne!(s.commutator3(w[0], w[1], w[1]), s.identity());
        // the least-index violation pairs two transpositions; a 3-cycle with a
        // transposition also fails
        let c = s.index_of_permutation(&[1, 2, 0]).unwrap();
        let t = s.index_of_permutation(&[1, 0, 2]).unwrap();
        assert_ne!(s.commutator3(c, t, t), s.identity());
    }

    #[test]
    fn central_series() {
        let z6 = z(6);
        assert_eq!(nilpotency_class(&Subgroup::whole(&z6)).class, Some(1));
        assert_eq!(nilpotency_class(&Subgroup::trivial(&z6)).class, Some(0));
        let s = s3();
        let series = nilpotency_class(&Subgroup::whole(&s));
        assert_eq!(series.class, None);
        assert_eq!(series.terms.last().unwrap().order(), 3);
        let d = d8();
        let series = nilpotency_class(&Subgroup::whole(&d));
        assert_eq!(series.class, Some(2));
        assert_eq!(series.terms[1].order(), 2);
        for t in &series.terms {
            assert!(t.is_normal());
        }
    }

    #[test]
    fn lemma_scans() {
        let trivial = z(1);
        let r = verify_lemma_2engel(&trivial, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(r.qualifying, Some(1));
        assert!(r.holds());
        let r = verify_lemma_2engel(&s3(), DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(r.qualifying, Some(27));
        assert_eq!(r.checked, 216);
        assert!(r.holds());
        assert!(matches!(
            verify_lemma_2engel(&z(65), DEFAULT_TRIPLE_CAP),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn consequences() {
        let z6 = z(6);
        let c = verify_engel_consequences(&Subgroup::whole(&z6), DEFAULT_TRIPLE_CAP).unwrap();
        assert!(c.applicable && c.holds());
        assert_eq!(c.class, Some(1));
        let c = verify_engel_consequences(&Subgroup::whole(&s3()), DEFAULT_TRIPLE_CAP).unwrap();
        assert!(!c.applicable);
        let c = verify_engel_consequences(&Subgroup::whole(&d8()), DEFAULT_TRIPLE_CAP).unwrap();
        assert!(c.applicable && c.holds());
    }

    #[test]
    fn commutator_identities() {
        let g = d8();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(g.inv(g.commutator(a, b)), g.commutator(b, a));
                assert_eq!(
                    g.commutator(a, b) == g.identity(),
                    g.mul(a, b) == g.mul(b, a)
                );
            }
        }
    }
}
