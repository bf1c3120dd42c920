//! Per-command handlers. Each maps one catalog entry (or tower) to a JSON payload.

use engelhaar::automorphism::Automorphism;
use engelhaar::catalog::{Catalog, CatalogEntry};
use engelhaar::engel::{self, DEFAULT_TRIPLE_CAP};
use engelhaar::haar::{
    self, average_lambda, klarge_certificate, lambda_intersection, lipschitz_check,
    DEFAULT_SEARCH_BUDGET, DEFAULT_TUPLE_BUDGET,
};
use engelhaar::subgroup::Subgroup;
use engelhaar::subset::format_measure;
use engelhaar::words::{
    self, abelian_subgroup_extract, coset_witness, engel_subgroup_extract, ExtractOptions,
    ExtractionReport, PairCertificate, WordSet,
};
use engelhaar::{FiniteGroup, GroupFunction64, Measure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{
    CliError, Command, Flags, ModeArg, OpResult, Output, SetSpec, Skipped, StrategyArg,
    VerifyCommand,
};

type Collected = (Vec<(String, Output)>, Vec<Skipped>);

pub(crate) type GroupOp<'f> = Box<dyn Fn(&CatalogEntry) -> OpResult + Send + Sync + 'f>;

/// Sets named on the command line, or the command's default set.
pub(crate) fn sets_or_default(command: &Command, flags: &Flags) -> Vec<SetSpec> {
    if !flags.sets.is_empty() {
        return flags.sets.clone();
    }
    match command {
        Command::CommuteCert | Command::ExtractAbelian => {
            vec![SetSpec::Inverted("identity".into())]
        }
        Command::EngelCert | Command::ExtractEngel => vec![SetSpec::Splitting("identity".into())],
        Command::Tower => vec![SetSpec::Torsion(3)],
        _ => Vec::new(),
    }
}

fn one_set(command: &Command, flags: &Flags) -> Result<SetSpec, CliError> {
    match sets_or_default(command, flags).as_slice() {
        [s] => Ok(s.clone()),
        [] => Err(CliError::Invalid(format!(
            "`{}` needs --set",
            command.name()
        ))),
        _ => Err(CliError::Invalid(format!(
            "`{}` takes exactly one --set",
            command.name()
        ))),
    }
}

fn some_sets(command: &Command, flags: &Flags) -> Result<Vec<SetSpec>, CliError> {
    let sets = sets_or_default(command, flags);
    if sets.is_empty() {
        return Err(CliError::Invalid(format!(
            "`{}` needs at least one --set",
            command.name()
        )));
    }
    Ok(sets)
}

fn word_set<'e>(entry: &'e CatalogEntry, spec: &SetSpec) -> Result<WordSet<'e>, String> {
    let aut = |name: &str| entry.automorphism(name).map_err(|e| e.to_string());
    match spec {
        SetSpec::Torsion(n) => Ok(words::torsion_set(&entry.group, *n)),
        SetSpec::Inverted(a) => Ok(words::inverted_set(&aut(a)?)),
        SetSpec::Splitting(a) => words::splitting_set(&aut(a)?).map_err(|e| e.to_string()),
    }
}

fn alpha_of<'e>(entry: &'e CatalogEntry, spec: &SetSpec) -> Result<Automorphism<'e>, String> {
    match spec {
        SetSpec::Inverted(a) | SetSpec::Splitting(a) => {
            entry.automorphism(a).map_err(|e| e.to_string())
        }
        SetSpec::Torsion(_) => Err(format!("{spec} does not name an automorphism")),
    }
}

fn measure_str(m: Measure) -> Value {
    json!(format_measure(&m))
}

fn members(h: &Subgroup<'_>) -> Value {
    json!(h.members())
}

fn left_coset(g: &FiniteGroup, t: usize, xs: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = xs.iter().map(|&x| g.mul(t, x)).collect();
    v.sort_unstable();
    v
}

fn e2s(e: engelhaar::Error) -> String {
    e.to_string()
}

/// Seeds a generator from the run seed and the group label, so each group
/// draws the same stream regardless of scheduling.
fn group_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (slot, byte) in key[8..].iter_mut().zip(label.bytes()) {
        *slot = byte;
    }
    ChaCha8Rng::from_seed(key)
}

fn set_payload(spec: &SetSpec, x: &WordSet<'_>) -> Value {
    json!({
        "set": spec.to_string(),
        "order": x.group().order(),
        "size": x.set.len(),
        "measure": measure_str(x.measure()),
        "members": x.set.to_vec(),
    })
}

fn certificate_payload(c: &PairCertificate) -> Value {
    json!({ "a": c.a, "b": c.b, "witness": c.witness, "law_holds": c.law_holds })
}

fn extraction_payload(r: &ExtractionReport<'_>) -> Value {
    let proof = r.proof.as_ref().map(|p| {
        json!({
            "generating_set": p.generating_set,
            "generated": members(&p.generated),
            "core": members(&p.core),
            "certificates": p.certificates.len(),
            "law_gaps": p.law_gaps,
        })
    });
    json!({
        "law": r.law.name(),
        "target": r.target_kind.to_string(),
        "target_measure": measure_str(r.target_measure),
        "proof": proof,
        "direct": r.direct.as_ref().map(members),
        "result": members(&r.result),
        "result_order": r.result.order(),
        "index": r.index(),
        "normal": r.normal,
        "law_holds": r.law_holds,
        "reached_maximum": r.reached_maximum,
        "verified": r.verify(),
    })
}

fn extract_options(flags: &Flags) -> ExtractOptions {
    ExtractOptions {
        mode: match flags.mode {
            ModeArg::Proof => words::Mode::Proof,
            ModeArg::Direct => words::Mode::Direct,
            ModeArg::Both => words::Mode::Both,
        },
        threshold: flags.threshold.unwrap_or_else(|| Measure::new(0, 1)),
        budget: flags.budget.unwrap_or(ExtractOptions::default().budget),
        ..ExtractOptions::default()
    }
}

/// Scans all pairs, or the pair given by `--a`/`--b`. Unsound certificates are findings.
fn certificates(entry: &CatalogEntry, spec: &SetSpec, flags: &Flags, engel: bool) -> OpResult {
    let x = word_set(entry, spec)?;
    let g = &entry.group;
    let cert = |a, b| {
        if engel {
            words::engel_pair_certificate(&x, a, b)
        } else {
            words::commuting_certificate(&x, a, b)
        }
        .map_err(e2s)
    };
    if let (Some(a), Some(b)) = (flags.a, flags.b) {
        for v in [a, b] {
            g.element(v).map_err(e2s)?;
        }
        let c = cert(a, b)?;
        let finding = c.witness.is_some() && !c.law_holds;
        let mut v = certificate_payload(&c);
        v["set"] = json!(spec.to_string());
        return Ok(Output { value: v, finding });
    }
    let (mut certified, mut sound, mut law) = (0u64, 0u64, 0u64);
    let mut first_unsound = None;
    for a in g.elements() {
        for b in g.elements() {
            let c = cert(a, b)?;
            law += c.law_holds as u64;
            if c.witness.is_some() {
                certified += 1;
                if c.law_holds {
                    sound += 1;
                } else if first_unsound.is_none() {
                    first_unsound = Some(certificate_payload(&c));
                }
            }
        }
    }
    let n = g.order() as u64;
    Ok(Output {
        value: json!({
            "set": spec.to_string(),
            "target_measure": measure_str(x.measure()),
            "pairs": n * n,
            "law_pairs": law,
            "certified": certified,
            "certified_sound": sound,
            "first_unsound": first_unsound,
        }),
        finding: certified != sound,
    })
}

pub(crate) fn group_op<'f>(command: &Command, flags: &'f Flags) -> Result<GroupOp<'f>, CliError> {
    let budget = flags.budget;
    Ok(match command {
        Command::Measure => {
            let spec = one_set(command, flags)?;
            Box::new(move |e| {
                let x = word_set(e, &spec)?;
                Ok(json!({
                    "set": spec.to_string(),
                    "order": e.group.order(),
                    "size": x.set.len(),
                    "measure": measure_str(x.measure()),
                })
                .into())
            })
        }
        Command::Lambda => {
            let specs = some_sets(command, flags)?;
            if !flags.at.is_empty() && flags.at.len() != specs.len() {
                return Err(CliError::Invalid(format!(
                    "--at lists {} elements for {} sets",
                    flags.at.len(),
                    specs.len()
                )));
            }
            Box::new(move |e| {
                let sets = specs
                    .iter()
                    .map(|s| word_set(e, s).map(|w| w.set))
                    .collect::<Result<Vec<_>, _>>()?;
                let at = if flags.at.is_empty() {
                    vec![e.group.identity(); sets.len()]
                } else {
                    flags.at.clone()
                };
                let m = lambda_intersection(&sets, &at).map_err(e2s)?;
                Ok(json!({
                    "sets": specs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "at": at,
                    "lambda": measure_str(m),
                })
                .into())
            })
        }
        Command::Average => {
            let specs = some_sets(command, flags)?;
            Box::new(move |e| {
                let sets = specs
                    .iter()
                    .map(|s| word_set(e, s).map(|w| w.set))
                    .collect::<Result<Vec<_>, _>>()?;
                let r = average_lambda(&sets, budget.map_or(DEFAULT_TUPLE_BUDGET, u128::from))
                    .map_err(e2s)?;
                let tuples = u64::try_from(r.tuples)
                    .map_err(|_| "tuple count exceeds 64 bits".to_string())?;
                Ok(Output {
                    value: json!({
                        "sets": specs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "average": measure_str(r.average),
                        "product": measure_str(r.product),
                        "tuples": tuples,
                        "holds": r.holds(),
                    }),
                    finding: !r.holds(),
                })
            })
        }
        Command::Psi => {
            let (k, seed) = (flags.k, flags.seed);
            Box::new(move |e| {
                let g = &e.group;
                let mut rng = group_rng(seed, e.label());
                let fs: Vec<GroupFunction64<'_>> = (0..k)
                    .map(|_| GroupFunction64::random(g, &mut rng))
                    .collect();
                let xs: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.order())).collect();
                let ys: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.order())).collect();
                let px = haar::psi(&fs, &xs).map_err(e2s)?;
                let py = haar::psi(&fs, &ys).map_err(e2s)?;
                let check = lipschitz_check(&fs, &xs, &ys).map_err(e2s)?;
                Ok(Output {
                    value: json!({
                        "k": k,
                        "xs": xs,
                        "ys": ys,
                        "psi_x": [px.re, px.im],
                        "psi_y": [py.re, py.im],
                        "difference": check.difference,
                        "bound": check.bound,
                        "holds": check.holds(),
                    }),
                    finding: !check.holds(),
                })
            })
        }
        Command::Klarge => {
            let spec = one_set(command, flags)?;
            let strategy = match flags.strategy {
                StrategyArg::Greedy => haar::Strategy::Greedy,
                StrategyArg::Exhaustive => haar::Strategy::Exhaustive,
            };
            let k = flags.k;
            Box::new(move |e| {
                let x = word_set(e, &spec)?;
                let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
                let c = klarge_certificate(&x.set, k, strategy, budget).map_err(e2s)?;
                let verified = c.verify(budget).ok();
                Ok(Output {
                    value: json!({
                        "set": spec.to_string(),
                        "k": k,
                        "target_measure": measure_str(x.measure()),
                        "witness_set": c.witness_set.to_vec(),
                        "witness_size": c.witness_set.len(),
                        "verified": verified,
                    }),
                    finding: verified == Some(false),
                })
            })
        }
        Command::Torsion { n } => {
            let spec = SetSpec::Torsion(*n);
            Box::new(move |e| Ok(set_payload(&spec, &word_set(e, &spec)?).into()))
        }
        Command::Inverted { aut } => {
            let spec = SetSpec::Inverted(aut.clone());
            Box::new(move |e| Ok(set_payload(&spec, &word_set(e, &spec)?).into()))
        }
        Command::Splitting { aut } => {
            let spec = SetSpec::Splitting(aut.clone());
            Box::new(move |e| {
                let x = word_set(e, &spec)?;
                let mut v = set_payload(&spec, &x);
                v["automorphism_order"] = json!(x.alpha.as_ref().map(Automorphism::order));
                Ok(v.into())
            })
        }
        Command::Witness => {
            let spec = one_set(command, flags)?;
            Box::new(move |e| {
                let x = word_set(e, &spec)?;
                let w = coset_witness(&x, budget.unwrap_or(DEFAULT_SEARCH_BUDGET)).map_err(e2s)?;
                let verified = w.verify(&x.set);
                Ok(Output {
                    value: json!({
                        "set": spec.to_string(),
                        "target_measure": measure_str(x.measure()),
                        "subgroup": members(&w.subgroup),
                        "subgroup_order": w.subgroup.order(),
                        "t": w.t,
                        "coset": left_coset(&e.group, w.t, w.subgroup.members()),
                        "exhaustive": w.exhaustive,
                        "verified": verified,
                    }),
                    finding: !verified,
                })
            })
        }
        Command::CommuteCert | Command::EngelCert => {
            let spec = one_set(command, flags)?;
            let engel = *command == Command::EngelCert;
            Box::new(move |e| certificates(e, &spec, flags, engel))
        }
        Command::ExtractAbelian => {
            let spec = one_set(command, flags)?;
            let opts = extract_options(flags);
            Box::new(move |e| {
                let alpha = alpha_of(e, &spec)?;
                let (r, s) = abelian_subgroup_extract(&alpha, &opts).map_err(e2s)?;
                let mut v = extraction_payload(&r);
                v["slice"] = json!({
                    "t": s.t,
                    "members": s.slice.to_vec(),
                    "coset": left_coset(&e.group, s.t, &s.slice.to_vec()),
                    "is_subgroup": s.slice_is_subgroup,
                    "inside_target": s.inside_target,
                });
                Ok(Output {
                    value: v,
                    finding: !r.verify(),
                })
            })
        }
        Command::ExtractEngel => {
            let spec = one_set(command, flags)?;
            let opts = extract_options(flags);
            Box::new(move |e| {
                let alpha = alpha_of(e, &spec)?;
                let r = engel_subgroup_extract(&alpha, &opts).map_err(e2s)?;
                Ok(Output {
                    value: extraction_payload(&r),
                    finding: !r.verify(),
                })
            })
        }
        Command::Engel => Box::new(|e| {
            let r = engel::is_2engel(&Subgroup::whole(&e.group));
            Ok(json!({ "holds": r.holds(), "counterexample": r.counterexample, "checked": r.checked }).into())
        }),
        Command::Class => Box::new(|e| {
            let s = engel::nilpotency_class(&Subgroup::whole(&e.group));
            Ok(json!({
                "class": s.class,
                "nilpotent": s.is_nilpotent(),
                "series_orders": s.terms.iter().map(Subgroup::order).collect::<Vec<_>>(),
                "series": s.terms.iter().map(members).collect::<Vec<_>>(),
            })
            .into())
        }),
        Command::Verify { check } => {
            let cap = flags.max_order.unwrap_or(DEFAULT_TRIPLE_CAP);
            match check {
                VerifyCommand::Lemma2Engel => Box::new(move |e| {
                    let r = engel::verify_lemma_2engel(&e.group, cap).map_err(e2s)?;
                    Ok(Output {
                        value: json!({
                            "order": e.group.order(),
                            "checked": r.checked,
                            "qualifying": r.qualifying,
                            "counterexample": r.counterexample,
                            "holds": r.holds(),
                        }),
                        finding: !r.holds(),
                    })
                }),
                VerifyCommand::EngelConsequences => Box::new(move |e| {
                    let c = engel::verify_engel_consequences(&Subgroup::whole(&e.group), cap)
                        .map_err(e2s)?;
                    let jacobi = c.jacobi_swap.as_ref();
                    Ok(Output {
                        value: json!({
                            "order": e.group.order(),
                            "applicable": c.applicable,
                            "class": c.class,
                            "class_bound_holds": c.class_bound.holds(),
                            "jacobi_swap_holds": jacobi.map(|r| r.holds()),
                            "jacobi_swap_checked": jacobi.map(|r| r.checked),
                            "counterexample": jacobi.and_then(|r| r.counterexample.clone()),
                            "holds": c.holds(),
                        }),
                        finding: !c.holds(),
                    })
                }),
            }
        }
        Command::Validate => Box::new(|e| {
            let g = &e.group;
            let auts = e
                .automorphism_names()
                .into_iter()
                .map(|name| {
                    e.automorphism(name)
                        .map(|a| json!({ "name": name, "order": a.order() }))
                        .map_err(|err| err.to_string())
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({
                "order": g.order(),
                "backend": g.backend().to_string(),
                "degree": g.degree(),
                "abelian": g.is_abelian(),
                "automorphisms": auts,
            })
            .into())
        }),
        Command::Tower => unreachable!("towers are dispatched separately"),
    })
}

/// Torsion measure sequence for each selected tower.
pub(crate) fn towers(catalog: &Catalog, flags: &Flags) -> Result<Collected, CliError> {
    let n = match one_set(&Command::Tower, flags)? {
        SetSpec::Torsion(n) => n,
        other => {
            return Err(CliError::Invalid(format!(
                "`tower` needs a torsion set, got {other}"
            )))
        }
    };
    let mut names: Vec<&str> = match &flags.tower {
        Some(name) => {
            catalog.tower(name)?;
            vec![name.as_str()]
        }
        None => catalog.towers.iter().map(|t| t.name.as_str()).collect(),
    };
    names.sort_unstable();
    let outputs = names
        .par_iter()
        .map(|&name| {
            let t = catalog
                .tower(name)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let seq = t.torsion_measure_sequence(n);
            let non_increasing = seq.windows(2).all(|w| w[1] <= w[0]);
            let last = *seq.last().expect("towers have a level");
            let value = json!({
                "n": n,
                "levels": t.levels().iter().map(|g| g.label()).collect::<Vec<_>>(),
                "orders": t.levels().iter().map(|g| g.order()).collect::<Vec<_>>(),
                "sequence": seq.into_iter().map(measure_str).collect::<Vec<_>>(),
                "non_increasing": non_increasing,
                "images_contained": t.torsion_images_contained(n),
                "upper_bound": { "depth": t.depth(), "measure": measure_str(last) },
            });
            Ok((
                name.to_string(),
                Output {
                    value,
                    finding: !non_increasing,
                },
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((outputs, Vec::new()))
}
