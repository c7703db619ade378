//! JSON serialization of subset models.
//!
//! The writer always emits the canonical form: pretty-printed, maps keyed
//! by world id and by printed formula or term, the universe listed in its
//! canonical order. Reading a canonical file and writing it again is
//! byte-identical.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{BetaAxiom, ConstantSpecification, LogicConfig, SchematicGrants, SchemeId};
use crate::syntax::{parse_formula, Dialect, FormulaUniverse};

use super::{ModelError, SubsetModel, WorldId};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

impl From<ModelError> for ModelFileError {
    fn from(e: ModelError) -> Self {
        ModelFileError::Invalid(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> ModelFileError {
    ModelFileError::Invalid(msg.into())
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    dialect: String,
    beta: Vec<String>,
    pe_mode: bool,
    cs: CsFile,
    worlds: Vec<u32>,
    normal: Vec<u32>,
    universe: Vec<String>,
    #[serde(rename = "V")]
    valuation: BTreeMap<String, BTreeMap<String, u8>>,
    #[serde(rename = "E")]
    evidence: BTreeMap<String, BTreeMap<String, Vec<u32>>>,
}

#[derive(Serialize, Deserialize, Default)]
struct CsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    total: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schematic: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    explicit: Option<Vec<ExplicitEntry>>,
}

#[derive(Serialize, Deserialize)]
struct ExplicitEntry {
    constant: u32,
    formula: String,
}

impl SubsetModel {
    pub fn to_json(&self) -> String {
        let cs = match self.cs.schematic() {
            SchematicGrants::Total => CsFile {
                total: Some(true),
                ..CsFile::default()
            },
            SchematicGrants::Listed(grants) => {
                let schematic: BTreeMap<String, Vec<String>> = grants
                    .iter()
                    .map(|(c, schemes)| {
                        (c.to_string(), schemes.iter().map(|s| s.to_string()).collect())
                    })
                    .collect();
                let explicit: Vec<ExplicitEntry> = self
                    .cs
                    .explicit()
                    .iter()
                    .flat_map(|(c, formulas)| {
                        formulas.iter().map(|f| ExplicitEntry {
                            constant: *c,
                            formula: f.to_string(),
                        })
                    })
                    .collect();
                CsFile {
                    total: None,
                    schematic: Some(schematic),
                    explicit: if explicit.is_empty() { None } else { Some(explicit) },
                }
            }
        };
        let valuation = self
            .worlds
            .iter()
            .map(|w| {
                let row: BTreeMap<String, u8> = self
                    .universe
                    .formulas()
                    .iter()
                    .enumerate()
                    .map(|(fi, f)| (f.to_string(), u8::from(self.valuation[w][fi])))
                    .collect();
                (w.to_string(), row)
            })
            .collect();
        let evidence = self
            .worlds
            .iter()
            .map(|w| {
                let row: BTreeMap<String, Vec<u32>> = self
                    .universe
                    .terms()
                    .iter()
                    .enumerate()
                    .map(|(ti, t)| {
                        (
                            t.to_string(),
                            self.evidence[w][ti].iter().map(|v| v.0).collect(),
                        )
                    })
                    .collect();
                (w.to_string(), row)
            })
            .collect();
        let file = ModelFile {
            dialect: self.config.dialect().to_string(),
            beta: self.config.beta().iter().map(|b| b.to_string()).collect(),
            pe_mode: self.config.pe_mode(),
            cs,
            worlds: self.worlds.iter().map(|w| w.0).collect(),
            normal: self.normal.iter().map(|w| w.0).collect(),
            universe: self
                .universe
                .formulas()
                .iter()
                .map(|f| f.to_string())
                .collect(),
            valuation,
            evidence,
        };
        let mut text = serde_json::to_string_pretty(&file).expect("model files serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<SubsetModel, ModelFileError> {
        let file: ModelFile = serde_json::from_str(text)?;
        let dialect = Dialect::from_str(&file.dialect)
            .map_err(|_| invalid(format!("unknown dialect `{}`", file.dialect)))?;
        let mut beta = Vec::new();
        for name in &file.beta {
            beta.push(
                BetaAxiom::from_str(name)
                    .map_err(|_| invalid(format!("unknown beta axiom `{name}`")))?,
            );
        }
        let config = LogicConfig::new(dialect, beta, file.pe_mode)
            .map_err(|e| invalid(e.to_string()))?;

        let cs = match file.cs.total {
            Some(true) => {
                if file.cs.schematic.is_some() || file.cs.explicit.is_some() {
                    return Err(invalid("a total cs lists no schematic or explicit parts"));
                }
                ConstantSpecification::total()
            }
            Some(false) => return Err(invalid("cs.total must be true when present")),
            None => {
                let mut grants = BTreeMap::new();
                for (key, names) in file.cs.schematic.unwrap_or_default() {
                    let c: u32 = key
                        .parse()
                        .map_err(|_| invalid(format!("bad constant index `{key}` in cs")))?;
                    let mut set = BTreeSet::new();
                    for name in names {
                        set.insert(
                            SchemeId::from_str(&name)
                                .map_err(|e| invalid(e.to_string()))?,
                        );
                    }
                    grants.insert(c, set);
                }
                let mut explicit = Vec::new();
                for entry in file.cs.explicit.unwrap_or_default() {
                    let f = parse_formula(&entry.formula, dialect)
                        .map_err(|e| invalid(format!("cs formula: {e}")))?;
                    explicit.push((entry.constant, f));
                }
                ConstantSpecification::new(SchematicGrants::Listed(grants), explicit, &config)
                    .map_err(|e| invalid(e.to_string()))?
            }
        };

        let mut seeds = Vec::new();
        for s in &file.universe {
            seeds.push(
                parse_formula(s, dialect).map_err(|e| invalid(format!("universe: {e}")))?,
            );
        }
        let universe = FormulaUniverse::closure(seeds, dialect)
            .map_err(|e| invalid(e.to_string()))?;
        let canonical: Vec<String> = universe.formulas().iter().map(|f| f.to_string()).collect();
        if canonical != file.universe {
            return Err(invalid(
                "universe must list the canonical closure in canonical order",
            ));
        }

        let worlds: Vec<WorldId> = file.worlds.iter().map(|i| WorldId(*i)).collect();
        let world_set: BTreeSet<WorldId> = worlds.iter().copied().collect();
        if world_set.len() != worlds.len() {
            return Err(invalid("duplicate world ids"));
        }
        let normal: BTreeSet<WorldId> = file.normal.iter().map(|i| WorldId(*i)).collect();

        let formula_of: HashMap<String, usize> = canonical
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let term_strings: Vec<String> =
            universe.terms().iter().map(|t| t.to_string()).collect();
        let term_of: HashMap<String, usize> = term_strings
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        if file.valuation.len() != worlds.len() {
            return Err(invalid("V must have exactly one row per world"));
        }
        let mut valuation = BTreeMap::new();
        for w in &worlds {
            let row_map = file
                .valuation
                .get(&w.to_string())
                .ok_or_else(|| invalid(format!("V is missing world {w}")))?;
            if row_map.len() != canonical.len() {
                return Err(invalid(format!(
                    "V row for world {w} must cover the whole universe"
                )));
            }
            let mut row = vec![false; canonical.len()];
            for (fs, bit) in row_map {
                let fi = *formula_of
                    .get(fs)
                    .ok_or_else(|| invalid(format!("V mentions unknown formula `{fs}`")))?;
                row[fi] = match bit {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(invalid(format!(
                            "V values are 0 or 1, got {other} for `{fs}`"
                        )))
                    }
                };
            }
            valuation.insert(*w, row);
        }

        if file.evidence.len() != worlds.len() {
            return Err(invalid("E must have exactly one row per world"));
        }
        let mut evidence = BTreeMap::new();
        for w in &worlds {
            let row_map = file
                .evidence
                .get(&w.to_string())
                .ok_or_else(|| invalid(format!("E is missing world {w}")))?;
            if row_map.len() != term_strings.len() {
                return Err(invalid(format!(
                    "E row for world {w} must cover every universe term"
                )));
            }
            let mut row = vec![BTreeSet::new(); term_strings.len()];
            for (ts, ids) in row_map {
                let ti = *term_of
                    .get(ts)
                    .ok_or_else(|| invalid(format!("E mentions unknown term `{ts}`")))?;
                let mut set = BTreeSet::new();
                for id in ids {
                    let v = WorldId(*id);
                    if !world_set.contains(&v) {
                        return Err(invalid(format!(
                            "E for `{ts}` at world {w} cites unknown world {v}"
                        )));
                    }
                    set.insert(v);
                }
                row[ti] = set;
            }
            evidence.insert(*w, row);
        }

        Ok(SubsetModel::new(
            config, cs, worlds, normal, universe, valuation, evidence,
        )?)
    }
}
