//! JSON catalogs of groups with their automorphisms, plus quotient towers.
//!
//! ```json
//! {
//!   "groups": [
//!     { "label": "Z2", "kind": "table", "table": [[0, 1], [1, 0]],
//!       "automorphisms": [{ "name": "identity", "map": [0, 1] }] },
//!     { "label": "S3", "kind": "perm", "degree": 3,
//!       "generators": [[1, 0, 2], [1, 2, 0]] }
//!   ],
//!   "towers": [{ "name": "t", "levels": ["Z2", "Z2"], "maps": [[0, 1]] }]
//! }
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::Automorphism;
use crate::error::Error;
use crate::group::{FiniteGroup, DEFAULT_CAP};
use crate::tower::Tower;

/// The catalog shipped with the crate.
pub const BUNDLED_JSON: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("validation error in {label}: {source}")]
    Validation {
        label: String,
        #[source]
        source: Error,
    },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown group label {0}")]
    UnknownGroup(String),
    #[error("group {label} has no automorphism named {name}")]
    UnknownAutomorphism { label: String, name: String },
    #[error("unknown tower {0}")]
    UnknownTower(String),
    #[error("automorphism {name} of {label} has order {actual}, declared {declared}")]
    OrderMismatch {
        label: String,
        name: String,
        declared: usize,
        actual: usize,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub groups: Vec<GroupSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub towers: Vec<TowerSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: String,
    #[serde(flatten)]
    pub body: GroupBody,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub automorphisms: Vec<AutomorphismSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupBody {
    Table {
        table: Vec<Vec<usize>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismSpec {
    pub name: String,
    pub map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub name: String,
    pub levels: Vec<String>,
    pub maps: Vec<Vec<usize>>,
}

/// A validated group with its validated automorphism maps.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub group: FiniteGroup,
    pub automorphisms: Vec<AutomorphismSpec>,
}

impl CatalogEntry {
    pub fn label(&self) -> &str {
        self.group.label()
    }

    /// Looks up an automorphism by name; `identity` always resolves.
    pub fn automorphism(&self, name: &str) -> Result<Automorphism<'_>, CatalogError> {
        let validation = |source| CatalogError::Validation {
            label: self.label().to_string(),
            source,
        };
        match self.automorphisms.iter().find(|a| a.name == name) {
            Some(spec) => Automorphism::from_map(&self.group, spec.map.clone()).map_err(validation),
            None if name == "identity" => Ok(Automorphism::identity(&self.group)),
            None => Err(CatalogError::UnknownAutomorphism {
                label: self.label().to_string(),
                name: name.to_string(),
            }),
        }
    }

    pub fn automorphism_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.automorphisms.iter().map(|a| a.name.as_str()).collect();
        if !names.contains(&"identity") {
            names.insert(0, "identity");
        }
        names
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub towers: Vec<TowerSpec>,
}

impl Catalog {
    pub fn bundled() -> Self {
        parse_catalog_str(BUNDLED_JSON).expect("bundled catalog is valid")
    }

    pub fn entry(&self, label: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.label() == label)
            .ok_or_else(|| CatalogError::UnknownGroup(label.to_string()))
    }

    /// Entries sorted by label.
    pub fn sorted_entries(&self) -> Vec<&CatalogEntry> {
        let mut v: Vec<&CatalogEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.label().cmp(b.label()));
        v
    }

    pub fn tower(&self, name: &str) -> Result<Tower<'_>, CatalogError> {
        let spec = self
            .towers
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| CatalogError::UnknownTower(name.to_string()))?;
        self.build_tower(spec)
    }

    fn build_tower(&self, spec: &TowerSpec) -> Result<Tower<'_>, CatalogError> {
        let levels = spec
            .levels
            .iter()
            .map(|l| self.entry(l).map(|e| &e.group))
            .collect::<Result<Vec<_>, _>>()?;
        Tower::new(levels, spec.maps.clone()).map_err(|source| CatalogError::Validation {
            label: spec.name.clone(),
            source,
        })
    }
}

pub fn parse_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_catalog_str(&text)
}

pub fn parse_catalog_str(text: &str) -> Result<Catalog, CatalogError> {
    let doc: CatalogDoc = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    build_catalog(doc)
}

/// Validates every entry eagerly, towers included.
pub fn build_catalog(doc: CatalogDoc) -> Result<Catalog, CatalogError> {
    let mut labels = BTreeSet::new();
    let mut entries = Vec::with_capacity(doc.groups.len());
    for (i, spec) in doc.groups.into_iter().enumerate() {
        if !labels.insert(spec.label.clone()) {
            return Err(CatalogError::DuplicateLabel(spec.label));
        }
        let validation = |source| CatalogError::Validation {
            label: spec.label.clone(),
            source,
        };
        let group = match &spec.body {
            GroupBody::Table { table } => {
                if let Some(row) = table.iter().position(|r| r.len() != table.len()) {
                    return Err(CatalogError::Parse {
                        location: format!("groups[{i}].table[{row}]"),
                        message: format!(
                            "expected {} entries, found {}",
                            table.len(),
                            table[row].len()
                        ),
                    });
                }
                FiniteGroup::from_table(table, spec.label.clone()).map_err(validation)?
            }
            GroupBody::Perm { degree, generators } => {
                FiniteGroup::from_permutations(*degree, generators, DEFAULT_CAP, spec.label.clone())
                    .map_err(validation)?
            }
        };
        for a in &spec.automorphisms {
            let aut = Automorphism::from_map(&group, a.map.clone()).map_err(validation)?;
            if let Some(declared) = a.order {
                if declared != aut.order() {
                    return Err(CatalogError::OrderMismatch {
                        label: spec.label.clone(),
                        name: a.name.clone(),
                        declared,
                        actual: aut.order(),
                    });
                }
            }
        }
        entries.push(CatalogEntry {
            group,
            automorphisms: spec.automorphisms,
        });
    }
    let catalog = Catalog {
        entries,
        towers: doc.towers,
    };
    for t in &catalog.towers {
        catalog.build_tower(t)?;
    }
    Ok(catalog)
}

/// Programmatic source of the bundled catalog file.
pub fn bundled_document() -> CatalogDoc {
    let mut groups = Vec::new();
    for n in [2, 3, 4, 6, 7, 9, 27] {
        let g = cyclic_group(n);
        let mut auts = vec![
            identity_spec(&g),
            spec("inversion", &Automorphism::inversion(&g).expect("abelian")),
        ];
        let unit = match n {
            7 => Some(("double", 2)),
            9 => Some(("times4", 4)),
            27 => Some(("times10", 10)),
            _ => None,
        };
        if let Some((name, u)) = unit {
            let a = Automorphism::from_map(&g, (0..n).map(|x| x * u % n).collect())
                .expect("unit multiplication");
            auts.push(spec(name, &a));
        }
        groups.push(table_spec(&g, auts));
    }

    let s3 = perm_group("S3", 3, vec![vec![1, 0, 2], vec![1, 2, 0]]);
    let mut auts = vec![identity_spec(&s3)];
    auts.extend((1..s3.order()).map(|x| inner_spec(&s3, x)));
    groups.push(perm_spec(&s3, 3, vec![vec![1, 0, 2], vec![1, 2, 0]], auts));

    let s4 = perm_group("S4", 4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]);
    let three_cycle = s4.index_of_permutation(&[1, 2, 0, 3]).expect("in S4");
    let auts = vec![identity_spec(&s4), inner_spec(&s4, three_cycle)];
    groups.push(perm_spec(
        &s4,
        4,
        vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
        auts,
    ));

    // rotation (0 1 2 3), reflection (1 3)
    let d8_gens = vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]];
    let d8 = perm_group("D8", 4, d8_gens.clone());
    let auts = vec![identity_spec(&d8), inner_spec(&d8, 1)];
    groups.push(perm_spec(&d8, 4, d8_gens, auts));

    let q8 = quaternion_group();
    let auts = vec![identity_spec(&q8), inner_spec(&q8, 2)];
    groups.push(table_spec(&q8, auts));

    let heis = heisenberg_group();
    let auts = vec![identity_spec(&heis), inner_spec(&heis, 9)];
    groups.push(table_spec(&heis, auts));

    let f21_gens = vec![
        (0..7).map(|x| (x + 1) % 7).collect(),
        (0..7).map(|x| 2 * x % 7).collect(),
    ];
    let f21 = perm_group("F21", 7, f21_gens.clone());
    let auts = vec![identity_spec(&f21), inner_spec(&f21, 2)];
    groups.push(perm_spec(&f21, 7, f21_gens, auts));

    let w_gens = wreath_generators();
    let w = perm_group("Syl2S8", 8, w_gens.clone());
    groups.push(perm_spec(&w, 8, w_gens, vec![identity_spec(&w)]));

    let towers = vec![
        TowerSpec {
            name: "cyclic2".into(),
            levels: vec!["Z2".into(), "Z4".into()],
            maps: vec![(0..4).map(|x| x % 2).collect()],
        },
        TowerSpec {
            name: "cyclic3".into(),
            levels: vec!["Z3".into(), "Z9".into(), "Z27".into()],
            maps: vec![
                (0..9).map(|x| x % 3).collect(),
                (0..27).map(|x| x % 9).collect(),
            ],
        },
        TowerSpec {
            name: "wreath2".into(),
            levels: vec!["Z2".into(), "D8".into(), "Syl2S8".into()],
            maps: vec![
                // blocks {0, 2} and {1, 3}
                d8.elements()
                    .map(|x| usize::from(d8.permutation(x).expect("perm")[0] % 2 == 1))
                    .collect(),
                // blocks {2j, 2j + 1}
                w.elements()
                    .map(|x| {
                        let p = w.permutation(x).expect("perm");
                        let blocks: Vec<usize> = (0..4).map(|j| p[2 * j] as usize / 2).collect();
                        d8.index_of_permutation(&blocks)
                            .expect("block action lies in D8")
                    })
                    .collect(),
            ],
        },
    ];
    CatalogDoc { groups, towers }
}

fn cyclic_group(n: usize) -> FiniteGroup {
    let t: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| (x + y) % n).collect())
        .collect();
    FiniteGroup::from_table(&t, format!("Z{n}")).expect("cyclic table")
}

/// Units `1, -1, i, -i, j, -j, k, -k` in that index order.
fn quaternion_group() -> FiniteGroup {
    // unit products: (unit, sign flip) for 1, i, j, k
    const MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let t: Vec<Vec<usize>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, flip) = MUL[x / 2][y / 2];
                    let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ flip;
                    2 * u + usize::from(neg)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&t, "Q8").expect("quaternion table")
}

/// Upper unitriangular 3x3 matrices over F_3; `(a, b, c)` at index `9a + 3b + c`.
fn heisenberg_group() -> FiniteGroup {
    let split = |x: usize| (x / 9, x / 3 % 3, x % 3);
    let t: Vec<Vec<usize>> = (0..27)
        .map(|x| {
            (0..27)
                .map(|y| {
                    let ((a, b, c), (d, e, f)) = (split(x), split(y));
                    9 * ((a + d) % 3) + 3 * ((b + e) % 3) + (c + f + a * e) % 3
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&t, "Heis27").expect("heisenberg table")
}

/// `Z2 wr Z2 wr Z2` on eight points with blocks `{2j, 2j + 1}` acted on as D8.
fn wreath_generators() -> Vec<Vec<usize>> {
    let rotation: Vec<usize> = (0..8).map(|p| 2 * ((p / 2 + 1) % 4) + p % 2).collect();
    let reflection: Vec<usize> = (0..8)
        .map(|p| {
            let block = [0, 3, 2, 1][p / 2];
            2 * block + p % 2
        })
        .collect();
    let swap = vec![1, 0, 2, 3, 4, 5, 6, 7];
    vec![rotation, reflection, swap]
}

fn perm_group(label: &str, degree: usize, gens: Vec<Vec<usize>>) -> FiniteGroup {
    FiniteGroup::from_permutations(degree, &gens, DEFAULT_CAP, label).expect("bundled generators")
}

fn spec(name: &str, a: &Automorphism<'_>) -> AutomorphismSpec {
    AutomorphismSpec {
        name: name.to_string(),
        map: a.map().to_vec(),
        order: Some(a.order()),
    }
}

fn identity_spec(g: &FiniteGroup) -> AutomorphismSpec {
    spec("identity", &Automorphism::identity(g))
}

fn inner_spec(g: &FiniteGroup, x: usize) -> AutomorphismSpec {
    spec(
        &format!("inner{x}"),
        &Automorphism::inner(g, x).expect("inner"),
    )
}

fn table_spec(g: &FiniteGroup, automorphisms: Vec<AutomorphismSpec>) -> GroupSpec {
    GroupSpec {
        label: g.label().to_string(),
        body: GroupBody::Table {
            table: g.cayley_table(),
        },
        automorphisms,
    }
}

fn perm_spec(
    g: &FiniteGroup,
    degree: usize,
    generators: Vec<Vec<usize>>,
    automorphisms: Vec<AutomorphismSpec>,
) -> GroupSpec {
    GroupSpec {
        label: g.label().to_string(),
        body: GroupBody::Perm { degree, generators },
        automorphisms,
    }
}

/// Serializes a catalog document with one table row per line.
pub fn to_json(doc: &CatalogDoc) -> String {
    let value = serde_json::to_value(doc).expect("serializable");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("scalar array"));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_matches_generator() {
        assert_eq!(to_json(&bundled_document()), BUNDLED_JSON);
    }

    #[test]
    fn bundled_catalog_validates() {
        let c = Catalog::bundled();
        assert!(c.entries.len() >= 12);
        let orders: Vec<(String, usize)> = c
            .sorted_entries()
            .iter()
            .map(|e| (e.label().to_string(), e.group.order()))
            .collect();
        for (label, order) in [
            ("Z2", 2),
            ("Z27", 27),
            ("S3", 6),
            ("S4", 24),
            ("D8", 8),
            ("Q8", 8),
            ("Heis27", 27),
            ("F21", 21),
            ("Syl2S8", 128),
        ] {
            assert!(orders.contains(&(label.to_string(), order)), "{label}");
        }
        for t in ["cyclic2", "cyclic3", "wreath2"] {
            c.tower(t).unwrap();
        }
    }

    #[test]
    fn empty_catalog() {
        let c = parse_catalog_str(r#"{"groups": []}"#).unwrap();
        assert!(c.entries.is_empty());
    }

    #[test]
    fn non_square_table_is_a_parse_error() {
        let err = parse_catalog_str(
            r#"{"groups": [{"label": "x", "kind": "table", "table": [[0, 1], [1]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::Parse { .. }), "{err}");
        let err =
            parse_catalog_str(r#"{"groups": [{"label": "x", "kind": "tabel"}]}"#).unwrap_err();
        assert!(matches!(err, CatalogError::Parse { .. }));
    }

    #[test]
    fn validation_errors_carry_labels() {
        let err = parse_catalog_str(
            r#"{"groups": [{"label": "bad", "kind": "table", "table": [[0, 0], [0, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::Validation { ref label, .. } if label == "bad"));
        let err = parse_catalog_str(
            r#"{"groups": [{"label": "a", "kind": "table", "table": [[0]]}, {"label": "a", "kind": "table", "table": [[0]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::DuplicateLabel(_)));
        let err = parse_catalog_str(
            r#"{"groups": [{"label": "a", "kind": "table", "table": [[0]], "automorphisms": [{"name": "x", "map": [0], "order": 2}]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::OrderMismatch { .. }));
    }

    #[test]
    fn identity_automorphism_is_implicit() {
        let c = parse_catalog_str(
            r#"{"groups": [{"label": "a", "kind": "perm", "degree": 2, "generators": [[1, 0]]}]}"#,
        )
        .unwrap();
        let e = c.entry("a").unwrap();
        assert_eq!(e.automorphism("identity").unwrap().order(), 1);
        assert!(e.automorphism("nope").is_err());
        assert!(c.entry("b").is_err());
    }
}
