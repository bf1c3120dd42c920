//! Word-defined subsets (torsion, inverted, splitting) and the constructive
//! searches built on them: coset witnesses, pair certificates, and
//! extraction of normal abelian or 2-Engel subgroups.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::automorphism::Automorphism;
use crate::engel;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subgroup::{
    generate_subgroup, normal_core, normal_subgroups, subgroups_within, Subgroup,
    LATTICE_SCAN_LIMIT,
};
use crate::subset::{format_measure, Subset};
use crate::Measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    /// `x^n = 1`
    Torsion(usize),
    /// `x^alpha = x^-1`
    Inverted,
    /// `x^{alpha^2} x^alpha x = 1`
    Splitting,
}

impl WordKind {
    pub fn name(&self) -> &'static str {
        match self {
            WordKind::Torsion(_) => "torsion",
            WordKind::Inverted => "inverted",
            WordKind::Splitting => "splitting",
        }
    }
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordKind::Torsion(n) => write!(f, "torsion:{n}"),
            other => f.write_str(other.name()),
        }
    }
}

/// The solution set of a word condition, together with what defined it.
#[derive(Debug, Clone)]
pub struct WordSet<'g> {
    pub kind: WordKind,
    pub alpha: Option<Automorphism<'g>>,
    pub set: Subset<'g>,
}

impl<'g> WordSet<'g> {
    pub fn group(&self) -> &'g FiniteGroup {
        self.set.group()
    }

    pub fn measure(&self) -> Measure {
        self.set.measure()
    }

    fn expect_kind(&self, expected: WordKind) -> Result<()> {
        if std::mem::discriminant(&self.kind) == std::mem::discriminant(&expected) {
            Ok(())
        } else {
            Err(Error::WrongKind {
                found: self.kind.name(),
                expected: expected.name(),
            })
        }
    }
}

pub fn torsion_set(group: &FiniteGroup, n: usize) -> WordSet<'_> {
    let e = group.identity();
    WordSet {
        kind: WordKind::Torsion(n),
        alpha: None,
        set: Subset::from_predicate(group, |x| group.power(x, n as i64) == e),
    }
}

pub fn inverted_set<'g>(alpha: &Automorphism<'g>) -> WordSet<'g> {
    let g = alpha.group();
    WordSet {
        kind: WordKind::Inverted,
        alpha: Some(alpha.clone()),
        set: Subset::from_predicate(g, |x| alpha.apply(x) == g.inv(x)),
    }
}

/// `x^{alpha^2} x^alpha x`.
pub fn splitting_word(alpha: &Automorphism<'_>, x: usize) -> usize {
    let g = alpha.group();
    let xa = alpha.apply(x);
    let xaa = alpha.apply(xa);
    g.mul(g.mul(xaa, xa), x)
}

pub fn splitting_set<'g>(alpha: &Automorphism<'g>) -> Result<WordSet<'g>> {
    if 3 % alpha.order() != 0 {
        return Err(Error::OrderNotDividing3(alpha.order()));
    }
    let g = alpha.group();
    Ok(WordSet {
        kind: WordKind::Splitting,
        alpha: Some(alpha.clone()),
        set: Subset::from_predicate(g, |x| splitting_word(alpha, x) == g.identity()),
    })
}

/// A subgroup `H` and element `t` with `tH` inside the target set.
#[derive(Debug, Clone)]
pub struct CosetWitness<'g> {
    pub subgroup: Subgroup<'g>,
    pub t: usize,
    /// False when the group was too large for a full subgroup scan and only
    /// cyclic subgroups were considered.
    pub exhaustive: bool,
}

impl CosetWitness<'_> {
    pub fn verify(&self, target: &Subset<'_>) -> bool {
        let g = self.subgroup.group();
        self.subgroup
            .members()
            .iter()
            .all(|&h| target.contains(g.mul(self.t, h)))
    }
}

/// Largest `H` admitting a coset `tH` inside the target, least `t` on ties,
/// then the lexicographically smallest member list.
pub fn coset_witness<'g>(target: &WordSet<'g>, budget: u64) -> Result<CosetWitness<'g>> {
    let g = target.group();
    let x = &target.set;
    if x.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let exhaustive = g.order() <= LATTICE_SCAN_LIMIT;
    let mut best: Option<CosetWitness<'g>> = None;
    for t in x.iter() {
        // H must lie inside t^-1 X
        let shifted = x.left_translate(g.inv(t));
        let bound = largest_divisor_at_most(g.order(), shifted.len());
        if best.as_ref().is_some_and(|b| b.subgroup.order() >= bound) {
            continue;
        }
        let candidate = if let Some(h) = Subgroup::from_subset(&shifted) {
            h
        } else if exhaustive {
            // sorted by order, then member list
            let subs = subgroups_within(&shifted, budget)?;
            let top = subs.last().map_or(1, Subgroup::order);
            subs.into_iter()
                .find(|h| h.order() == top)
                .unwrap_or_else(|| Subgroup::trivial(g))
        } else {
            largest_cyclic_within(&shifted)
        };
        if best
            .as_ref()
            .is_none_or(|b| candidate.order() > b.subgroup.order())
        {
            best = Some(CosetWitness {
                subgroup: candidate,
                t,
                exhaustive,
            });
        }
    }
    Ok(best.expect("target is nonempty"))
}

fn largest_divisor_at_most(n: usize, bound: usize) -> usize {
    (1..=bound.min(n))
        .rev()
        .find(|&d| n.is_multiple_of(d))
        .unwrap_or(1)
}

fn largest_cyclic_within<'g>(mask: &Subset<'g>) -> Subgroup<'g> {
    let g = mask.group();
    let mut best = Subgroup::trivial(g);
    for x in mask.iter() {
        let c = generate_subgroup(g, &[x]);
        if c.bits().is_subset(mask.bits())
            && (c.order() > best.order()
                || (c.order() == best.order() && c.members() < best.members()))
        {
            best = c;
        }
    }
    best
}

/// Result of a pair-certificate search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCertificate {
    pub a: usize,
    pub b: usize,
    pub witness: Option<usize>,
    /// Whether the law the certificate implies (`[a,b] = 1` or `[a,b,b] = 1`) holds.
    pub law_holds: bool,
}

fn first_common(target: &Subset<'_>, shifts: &[usize]) -> Option<usize> {
    let g = target.group();
    target
        .iter()
        .find(|&x| shifts.iter().all(|&s| target.contains(g.mul(s, x))))
}

/// Least `x` in `X ∩ b^-1 X ∩ a^-1 X ∩ (ab)^-1 X`, i.e. with `x, bx, ax, abx` all in `X`.
pub fn commuting_certificate(target: &WordSet<'_>, a: usize, b: usize) -> Result<PairCertificate> {
    target.expect_kind(WordKind::Inverted)?;
    let g = target.group();
    g.check(a)?;
    g.check(b)?;
    let witness = first_common(&target.set, &[b, a, g.mul(a, b)]);
    Ok(PairCertificate {
        a,
        b,
        witness,
        law_holds: g.commutator(a, b) == g.identity(),
    })
}

/// The eight translates `a^{±1}`, `b`, `ab^-1`, `ba^-1`, `ab`, `b^-1 a^-1`
/// (plus the identity) whose product with `x` must stay in the target.
fn engel_shifts(g: &FiniteGroup, a: usize, b: usize) -> [usize; 7] {
    let (ai, bi) = (g.inv(a), g.inv(b));
    [
        b,
        a,
        ai,
        g.mul(a, bi),
        g.mul(b, ai),
        g.mul(a, b),
        g.mul(bi, ai),
    ]
}

/// Least `x` in the eight-translate intersection for the pair `(a, b)`.
pub fn engel_pair_certificate(target: &WordSet<'_>, a: usize, b: usize) -> Result<PairCertificate> {
    target.expect_kind(WordKind::Splitting)?;
    let g = target.group();
    g.check(a)?;
    g.check(b)?;
    let witness = first_common(&target.set, &engel_shifts(g, a, b));
    Ok(PairCertificate {
        a,
        b,
        witness,
        law_holds: g.commutator3(a, b, b) == g.identity(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Abelian,
    TwoEngel,
}

impl Law {
    pub fn holds(&self, h: &Subgroup<'_>) -> bool {
        match self {
            Law::Abelian => h.is_abelian(),
            Law::TwoEngel => engel::is_2engel(h).counterexample.is_none(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Law::Abelian => "abelian",
            Law::TwoEngel => "2-engel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Proof,
    Direct,
    Both,
}

impl Mode {
    fn proof(self) -> bool {
        matches!(self, Mode::Proof | Mode::Both)
    }
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub mode: Mode,
    /// Longest product of `V`-elements whose pairs must carry certificates.
    pub max_length: usize,
    /// The target set must have measure strictly above this.
    pub threshold: Measure,
    /// Cap on certificate searches during the proof-following growth.
    pub budget: u64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            mode: Mode::Both,
            max_length: 2,
            threshold: Measure::new(0, 1),
            budget: 10_000_000,
        }
    }
}

/// Output of the certificate-driven growth of a symmetric set `V`.
#[derive(Debug, Clone)]
pub struct ProofFollowing<'g> {
    pub generating_set: Vec<usize>,
    pub generated: Subgroup<'g>,
    pub core: Subgroup<'g>,
    /// `(a, b, x)` for every certified pair of bounded products of `V`.
    pub certificates: Vec<(usize, usize, usize)>,
    /// Candidates whose pairs were all certified but whose generated
    /// subgroup still failed the law.
    pub law_gaps: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExtractionReport<'g> {
    pub law: Law,
    pub mode: Mode,
    pub target_kind: WordKind,
    pub target_measure: Measure,
    pub proof: Option<ProofFollowing<'g>>,
    pub direct: Option<Subgroup<'g>>,
    pub result: Subgroup<'g>,
    pub normal: bool,
    pub law_holds: bool,
    /// Set when both modes ran: whether proof-following matched the maximum.
    pub reached_maximum: Option<bool>,
}

impl ExtractionReport<'_> {
    pub fn index(&self) -> usize {
        self.result.index()
    }

    /// Re-validates normality by a conjugation scan and the law by a pair scan.
    pub fn verify(&self) -> bool {
        self.result.is_normal() && self.law.holds(&self.result)
    }
}

/// `t` in the target and the slice `A = { a in K : t a in X }`.
#[derive(Debug, Clone)]
pub struct SliceWitness<'g> {
    pub t: usize,
    pub slice: Subset<'g>,
    pub slice_is_subgroup: bool,
    pub inside_target: bool,
}

fn check_target(target: &WordSet<'_>, threshold: Measure) -> Result<()> {
    if target.set.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let m = target.measure();
    if m <= threshold {
        return Err(Error::BelowThreshold {
            measure: format_measure(&m),
            threshold: format_measure(&threshold),
        });
    }
    Ok(())
}

/// Products of at most `len` elements of `v`.
fn bounded_products(g: &FiniteGroup, v: &[usize], len: usize) -> Vec<usize> {
    let mut seen = FixedBitSet::with_capacity(g.order());
    seen.insert(g.identity());
    let mut layer = vec![g.identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for &p in &layer {
            for &s in v {
                let q = g.mul(p, s);
                if !seen.put(q) {
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    seen.ones().collect()
}

fn proof_following<'g>(
    target: &WordSet<'g>,
    law: Law,
    opts: &ExtractOptions,
    certify: impl Fn(usize, usize) -> Result<PairCertificate>,
) -> Result<ProofFollowing<'g>> {
    let g = target.group();
    let mut cache: HashMap<(usize, usize), Option<usize>> = HashMap::new();
    let mut spent = 0u64;
    let mut v = vec![g.identity()];
    let mut law_gaps = Vec::new();
    for c in g.elements() {
        if c == g.identity() || c > g.inv(c) {
            continue;
        }
        let mut trial = v.clone();
        trial.push(c);
        if g.inv(c) != c {
            trial.push(g.inv(c));
        }
        let products = bounded_products(g, &trial, opts.max_length);
        let mut all_certified = true;
        'pairs: for &a in &products {
            for &b in &products {
                let w = match cache.get(&(a, b)) {
                    Some(w) => *w,
                    None => {
                        spent += 1;
                        if spent > opts.budget {
                            return Err(Error::SearchBudgetExceeded(opts.budget));
                        }
                        let w = certify(a, b)?.witness;
                        cache.insert((a, b), w);
                        w
                    }
                };
                if w.is_none() {
                    all_certified = false;
                    break 'pairs;
                }
            }
        }
        if !all_certified {
            continue;
        }
        if law.holds(&generate_subgroup(g, &trial)) {
            v = trial;
        } else {
            law_gaps.push(c);
        }
    }
    v.sort_unstable();
    let products = bounded_products(g, &v, opts.max_length);
    let mut certificates = Vec::with_capacity(products.len() * products.len());
    for &a in &products {
        for &b in &products {
            let x = cache[&(a, b)].expect("accepted pairs are certified");
            certificates.push((a, b, x));
        }
    }
    let generated = generate_subgroup(g, &v);
    let core = normal_core(&generated);
    Ok(ProofFollowing {
        generating_set: v,
        generated,
        core,
        certificates,
        law_gaps,
    })
}

/// Largest normal subgroup satisfying `law`; ties go to the smallest member list.
pub fn maximal_normal_with_law<'g>(group: &'g FiniteGroup, law: Law) -> Result<Subgroup<'g>> {
    let normals = normal_subgroups(group)?;
    let mut best: Option<Subgroup<'g>> = None;
    for n in normals.into_iter().filter(|n| law.holds(n)) {
        if best.as_ref().is_none_or(|b| n.order() > b.order()) {
            best = Some(n);
        }
    }
    Ok(best.unwrap_or_else(|| Subgroup::trivial(group)))
}

fn extract<'g>(
    target: &WordSet<'g>,
    law: Law,
    opts: &ExtractOptions,
    certify: impl Fn(usize, usize) -> Result<PairCertificate>,
) -> Result<ExtractionReport<'g>> {
    check_target(target, opts.threshold)?;
    let g = target.group();
    let proof = if opts.mode.proof() {
        Some(proof_following(target, law, opts, certify)?)
    } else {
        None
    };
    let direct = match opts.mode {
        Mode::Direct => Some(maximal_normal_with_law(g, law)?),
        Mode::Both if g.order() <= LATTICE_SCAN_LIMIT => Some(maximal_normal_with_law(g, law)?),
        _ => None,
    };
    let result = match (&direct, &proof) {
        (Some(d), _) => d.clone(),
        (None, Some(p)) => p.core.clone(),
        (None, None) => unreachable!("at least one mode runs"),
    };
    let reached_maximum = match (&direct, &proof) {
        (Some(d), Some(p)) => Some(p.core.order() == d.order()),
        _ => None,
    };
    Ok(ExtractionReport {
        law,
        mode: opts.mode,
        target_kind: target.kind,
        target_measure: target.measure(),
        normal: result.is_normal(),
        law_holds: law.holds(&result),
        proof,
        direct,
        result,
        reached_maximum,
    })
}

/// Normal abelian subgroup for the inverted set of `alpha`, with the coset slice.
pub fn abelian_subgroup_extract<'g>(
    alpha: &Automorphism<'g>,
    opts: &ExtractOptions,
) -> Result<(ExtractionReport<'g>, SliceWitness<'g>)> {
    let target = inverted_set(alpha);
    let report = extract(&target, Law::Abelian, opts, |a, b| {
        commuting_certificate(&target, a, b)
    })?;
    let witness = slice_witness(&target.set, &report.result);
    Ok((report, witness))
}

/// The `t` in `X` whose slice `{ a in K : t a in X }` is largest, least index on ties.
pub fn slice_witness<'g>(target: &Subset<'g>, k: &Subgroup<'g>) -> SliceWitness<'g> {
    let g = target.group();
    let mut best: Option<(usize, Subset<'g>)> = None;
    for t in target.iter() {
        let slice = Subset::from_indices(
            g,
            k.members()
                .iter()
                .copied()
                .filter(|&a| target.contains(g.mul(t, a))),
        )
        .expect("members are in range");
        if best.as_ref().is_none_or(|(_, s)| slice.len() > s.len()) {
            best = Some((t, slice));
        }
    }
    let (t, slice) = best.expect("target is nonempty");
    let slice_is_subgroup = Subgroup::from_subset(&slice).is_some();
    let inside_target = slice.iter().all(|a| target.contains(g.mul(t, a)));
    SliceWitness {
        t,
        slice,
        slice_is_subgroup,
        inside_target,
    }
}

/// Normal 2-Engel subgroup for the splitting set of `alpha`.
pub fn engel_subgroup_extract<'g>(
    alpha: &Automorphism<'g>,
    opts: &ExtractOptions,
) -> Result<ExtractionReport<'g>> {
    let target = splitting_set(alpha)?;
    extract(&target, Law::TwoEngel, opts, |a, b| {
        engel_pair_certificate(&target, a, b)
    })
}
