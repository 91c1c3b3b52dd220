//! The interpretation document format: a JSON schema describing a feature
//! space, analogy structure, atoms and roles, loadable into an
//! [`Interpretation`].
//!
//! Domain indices in documents are one-based, matching the subscripts used
//! in reports. The token `"ALL"` in `forbidden` denotes the full feature
//! universe, which is always forbidden and may therefore be omitted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analogy::{AnalogyStructure, Bijection};
use crate::error::ModelError;
use crate::features::{FeatureSet, FeatureSpace};
use crate::interp::{
    IndividualRef, Interpretation, InterpretationData, KappaMode, KappaSpec, Mode,
};

/// A forbidden combination: a list of feature names or the token `"ALL"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ForbiddenDoc {
    All(String),
    Set(Vec<String>),
}

/// One kappa table entry in tabular form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaEntryDoc {
    pub set: Vec<String>,
    pub image: Vec<String>,
}

/// A kappa table: tabular entries or per-feature images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "tables")]
pub enum KappaDoc {
    #[serde(rename = "tabular")]
    Tabular(Vec<KappaEntryDoc>),
    #[serde(rename = "additive")]
    Additive(BTreeMap<String, Vec<String>>),
}

/// An extra named individual with its feature set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraDoc {
    pub name: String,
    pub pi: Vec<String>,
}

/// An individual reference: a feature-set literal or `{"name": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndividualDoc {
    Named { name: String },
    Canonical(Vec<String>),
}

/// The interpretation document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationDoc {
    pub features: Vec<String>,
    pub domains: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<ForbiddenDoc>,
    /// Generator pairs of the analogy relation, one-based.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analogous: Vec<(usize, usize)>,
    /// Spanning bijections keyed `"s->t"` (one-based), feature to feature.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bijections: BTreeMap<String, BTreeMap<String, String>>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub natural_atoms: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub plain_atoms: BTreeMap<String, Vec<IndividualDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub roles: BTreeMap<String, Vec<(IndividualDoc, IndividualDoc)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kappa: BTreeMap<String, KappaDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<ExtraDoc>,
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        })
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            other => Err(serde::de::Error::custom(format!(
                "mode must be \"strong\" or \"weak\", got \"{other}\""
            ))),
        }
    }
}

fn parse_pair_key(key: &str) -> Result<(usize, usize), ModelError> {
    let mut it = key.splitn(2, "->");
    let parse = |part: Option<&str>| -> Result<usize, ModelError> {
        let raw = part
            .ok_or_else(|| ModelError::Invalid(format!("bad bijection key `{key}`")))?
            .trim();
        let n: usize = raw
            .parse()
            .map_err(|_| ModelError::Invalid(format!("bad bijection key `{key}`")))?;
        if n == 0 {
            return Err(ModelError::Invalid(format!(
                "bijection key `{key}` uses zero; domains are one-based"
            )));
        }
        Ok(n - 1)
    };
    Ok((parse(it.next())?, parse(it.next())?))
}

impl InterpretationDoc {
    /// Parses a document from JSON text.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Invalid(format!("document: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Builds the interpretation the document describes.
    pub fn build(&self) -> Result<Interpretation, ModelError> {
        let mut forbidden = Vec::new();
        for entry in &self.forbidden {
            match entry {
                ForbiddenDoc::All(tok) if tok == "ALL" => {
                    forbidden.push(self.features.clone());
                }
                ForbiddenDoc::All(tok) => {
                    return Err(ModelError::Invalid(format!(
                        "forbidden entry `{tok}` is not a list or \"ALL\""
                    )));
                }
                ForbiddenDoc::Set(names) => forbidden.push(names.clone()),
            }
        }
        let space = FeatureSpace::new(self.features.clone(), self.domains.clone(), forbidden)?;

        let mut generators = Vec::new();
        for &(s, t) in &self.analogous {
            if s == 0 || t == 0 {
                return Err(ModelError::Invalid(
                    "analogous pairs are one-based; 0 is not a domain".into(),
                ));
            }
            generators.push((s - 1, t - 1));
        }
        let mut given: BTreeMap<(usize, usize), Bijection> = BTreeMap::new();
        for (key, map) in &self.bijections {
            let pair = parse_pair_key(key)?;
            let mut bij = Bijection::new();
            for (from, to) in map {
                bij.insert(space.feature_index(from)?, space.feature_index(to)?);
            }
            given.insert(pair, bij);
        }
        let analogy = AnalogyStructure::new(&space, &generators, given)?;

        let set = |names: &[String]| space.set_from_names(names);
        let individual = |r: &IndividualDoc| -> Result<IndividualRef, ModelError> {
            Ok(match r {
                IndividualDoc::Named { name } => IndividualRef::Named(name.clone()),
                IndividualDoc::Canonical(names) => IndividualRef::Canonical(set(names)?),
            })
        };

        let mut natural_atoms = BTreeMap::new();
        for (name, names) in &self.natural_atoms {
            natural_atoms.insert(name.clone(), set(names)?);
        }
        let mut plain_atoms = BTreeMap::new();
        for (name, members) in &self.plain_atoms {
            let refs = members.iter().map(&individual).collect::<Result<_, _>>()?;
            plain_atoms.insert(name.clone(), refs);
        }
        let mut roles = BTreeMap::new();
        for (name, pairs) in &self.roles {
            let refs = pairs
                .iter()
                .map(|(a, b)| Ok((individual(a)?, individual(b)?)))
                .collect::<Result<_, ModelError>>()?;
            roles.insert(name.clone(), refs);
        }
        let mut kappa = BTreeMap::new();
        for (role, table) in &self.kappa {
            let spec = match table {
                KappaDoc::Tabular(entries) => {
                    let mut map = BTreeMap::new();
                    for e in entries {
                        map.insert(set(&e.set)?, set(&e.image)?);
                    }
                    KappaSpec::Tabular(map)
                }
                KappaDoc::Additive(per_feature) => {
                    let mut map = BTreeMap::new();
                    for (f, image) in per_feature {
                        map.insert(space.feature_index(f)?, set(image)?);
                    }
                    KappaSpec::Additive(map)
                }
            };
            kappa.insert(role.clone(), spec);
        }
        let extras = self
            .extras
            .iter()
            .map(|e| Ok((e.name.clone(), set(&e.pi)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;

        Interpretation::build(InterpretationData {
            space,
            analogy,
            mode: self.mode,
            extras,
            natural_atoms,
            plain_atoms,
            roles,
            kappa,
        })
    }

    /// Emits the canonical document of an interpretation. Forbidden sets are
    /// listed explicitly except the auto-inserted full universe.
    pub fn from_interpretation(interp: &Interpretation) -> Self {
        let sp = interp.space();
        let names = |set: FeatureSet| sp.names_of(set);
        let features = sp.feature_names().to_vec();
        let domains = sp.domains().iter().map(|&d| names(d)).collect();
        let forbidden = sp
            .forbidden()
            .iter()
            .filter(|&&x| !(x == sp.universe() && sp.full_universe_inserted()))
            .map(|&x| {
                if x == sp.universe() {
                    ForbiddenDoc::All("ALL".into())
                } else {
                    ForbiddenDoc::Set(names(x))
                }
            })
            .collect();

        let generators = interp.analogy().spanning_generators();
        let analogous = generators.iter().map(|&(s, t)| (s + 1, t + 1)).collect();
        let mut bijections = BTreeMap::new();
        for &(s, t) in &generators {
            let bij = interp.analogy().bijection(s, t).expect("spanning pair");
            let map: BTreeMap<String, String> = bij
                .iter()
                .map(|(&f, &g)| (sp.feature_name(f).to_string(), sp.feature_name(g).to_string()))
                .collect();
            bijections.insert(format!("{}->{}", s + 1, t + 1), map);
        }

        let natural_atoms = interp
            .natural_atoms()
            .iter()
            .map(|(n, &f)| (n.clone(), names(f)))
            .collect();

        let kappa = interp
            .kappa_tables()
            .iter()
            .map(|(role, table)| {
                let doc = match table.mode() {
                    KappaMode::Additive => KappaDoc::Additive(
                        table
                            .table()
                            .iter()
                            .filter(|(set, _)| set.len() == 1)
                            .map(|(&set, &image)| {
                                let f = set.iter().next().expect("singleton");
                                (sp.feature_name(f).to_string(), names(image))
                            })
                            .collect(),
                    ),
                    KappaMode::Tabular => KappaDoc::Tabular(
                        table
                            .table()
                            .iter()
                            .map(|(&set, &image)| KappaEntryDoc {
                                set: names(set),
                                image: names(image),
                            })
                            .collect(),
                    ),
                };
                (role.clone(), doc)
            })
            .collect();

        let label = |id: usize| -> IndividualDoc {
            match &interp.individuals()[id].name {
                Some(n) => IndividualDoc::Named { name: n.clone() },
                None => IndividualDoc::Canonical(names(interp.individuals()[id].pi)),
            }
        };
        let plain_atoms = interp
            .plain_atom_extensions()
            .iter()
            .map(|(n, ids)| (n.clone(), ids.iter().map(|&i| label(i)).collect()))
            .collect();
        let roles = interp
            .role_relations()
            .iter()
            .map(|(n, pairs)| {
                (n.clone(), pairs.iter().map(|&(a, b)| (label(a), label(b))).collect())
            })
            .collect();
        let extras = interp
            .individuals()
            .iter()
            .filter_map(|d| {
                d.name.as_ref().map(|n| ExtraDoc { name: n.clone(), pi: names(d.pi) })
            })
            .collect();

        InterpretationDoc {
            features,
            domains,
            forbidden,
            analogous,
            bijections,
            mode: interp.mode(),
            natural_atoms,
            plain_atoms,
            roles,
            kappa,
            extras,
        }
    }
}
