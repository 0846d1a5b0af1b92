//! Session files: a config plus named bundles, in JSON or TOML.
//!
//! ```json
//! {
//!   "config": { "genus": 0, "root_index": 2, "point_labels": ["0", "1", "inf"] },
//!   "bundles": {
//!     "E": [ { "d": -1, "weights": ["1/2", "1/2", "0/2"] } ],
//!     "F": [ { "d": 0, "res": [1, 0, 1] } ]
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::correspondence::{to_parabolic, to_stack};
use crate::error::{Error, Result};
use crate::geometry::{validate_config, ConfigRecord, OrbiConfig};
use crate::parabolic::{ParBundle, ParLine};
use crate::rational;
use crate::root_stack::{LineObject, StackBundle};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParLineRecord {
    pub d: i64,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub d: i64,
    pub res: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BundleRecord {
    Parabolic(Vec<ParLineRecord>),
    Stack(Vec<LineRecord>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    pub config: ConfigRecord,
    #[serde(default)]
    pub bundles: BTreeMap<String, BundleRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bundle {
    Parabolic(ParBundle),
    Stack(StackBundle),
}

impl Bundle {
    pub fn as_parabolic(&self, cfg: &OrbiConfig) -> Result<ParBundle> {
        match self {
            Bundle::Parabolic(e) => Ok(e.clone()),
            Bundle::Stack(f) => to_parabolic(cfg, f),
        }
    }

    pub fn as_stack(&self, cfg: &OrbiConfig) -> Result<StackBundle> {
        match self {
            Bundle::Parabolic(e) => to_stack(cfg, e),
            Bundle::Stack(f) => Ok(f.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    pub config: OrbiConfig,
    pub bundles: BTreeMap<String, Bundle>,
}

impl Session {
    pub fn from_file(file: &SessionFile) -> Result<Self> {
        let config = validate_config(&file.config)?;
        let bundles = file
            .bundles
            .iter()
            .map(|(name, rec)| {
                parse_bundle(&config, rec)
                    .map(|b| (name.clone(), b))
                    .map_err(|e| Error::Parse(format!("bundle `{name}`: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(Session { config, bundles })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_file(&read_structured(path)?)
    }

    pub fn bundle(&self, name: &str) -> Result<&Bundle> {
        self.bundles
            .get(name)
            .ok_or_else(|| Error::Domain(format!("no bundle named `{name}` in the session")))
    }
}

fn parse_bundle(cfg: &OrbiConfig, rec: &BundleRecord) -> Result<Bundle> {
    match rec {
        BundleRecord::Parabolic(lines) => {
            let lines = lines
                .iter()
                .map(|l| {
                    let weights = l.weights.iter().map(|w| parse_weight(cfg, w)).collect::<Result<_>>()?;
                    ParLine::new(cfg, l.d, weights)
                })
                .collect::<Result<_>>()?;
            Ok(Bundle::Parabolic(ParBundle::new(lines)))
        }
        BundleRecord::Stack(lines) => {
            let lines = lines
                .iter()
                .map(|l| {
                    let res =
                        l.res
                            .iter()
                            .map(|&x| {
                                u32::try_from(x).ok().filter(|&v| v < cfg.root_index()).ok_or(
                                    Error::ResidueOutOfRange {
                                        residue: x,
                                        root_index: cfg.root_index(),
                                    },
                                )
                            })
                            .collect::<Result<_>>()?;
                    LineObject::new(cfg, l.d, res)
                })
                .collect::<Result<_>>()?;
            Ok(Bundle::Stack(StackBundle::new(lines)))
        }
    }
}

/// Weights are written `a/b` with `b` dividing the root index.
fn parse_weight(cfg: &OrbiConfig, s: &str) -> Result<rational::Q> {
    let (_, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("weight `{s}` must be written as `a/b`")))?;
    let den: i64 = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad weight `{s}`")))?;
    if den <= 0 || cfg.r() % den != 0 {
        return Err(Error::BadDenominator {
            weight: s.to_string(),
            root_index: cfg.root_index(),
        });
    }
    rational::parse(s)
}

pub fn par_record(e: &ParBundle) -> BundleRecord {
    BundleRecord::Parabolic(
        e.summands()
            .iter()
            .map(|l| ParLineRecord {
                d: l.d,
                weights: l.weights.iter().map(|&w| rational::format_strict(w)).collect(),
            })
            .collect(),
    )
}

pub fn stack_record(f: &StackBundle) -> BundleRecord {
    BundleRecord::Stack(
        f.summands()
            .iter()
            .map(|l| LineRecord {
                d: l.d,
                res: l.res.iter().map(|&x| x as i64).collect(),
            })
            .collect(),
    )
}

/// Reads JSON, or TOML when the extension is `.toml`.
pub fn read_structured<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
