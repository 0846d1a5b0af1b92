//! The marked curve with its root index, and classical Riemann-Roch on it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

/// A smooth projective curve of genus `g` with `m` distinct marked points
/// and a root index `r`, together with the degree of the polarization.
///
/// Line bundles on the curve are represented by their degree alone, so
/// anything that needs degree to determine the bundle (morphism existence,
/// semistability) is restricted to genus 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbiConfig {
    genus: u32,
    root_index: u32,
    point_labels: Vec<String>,
    polarization_degree: u32,
}

/// Unvalidated config as it appears in a session file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub genus: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_points: Option<i64>,
    pub root_index: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization_degree: Option<i64>,
}

impl OrbiConfig {
    /// Config with default labels `P1..Pm` and polarization degree 1.
    pub fn new(genus: u32, num_points: usize, root_index: u32) -> Result<Self> {
        validate_config(&ConfigRecord {
            genus: genus as i64,
            num_points: Some(num_points as i64),
            root_index: root_index as i64,
            point_labels: None,
            polarization_degree: None,
        })
    }

    /// Rational projective line with `m` marked points.
    pub fn p1(num_points: usize, root_index: u32) -> Result<Self> {
        Self::new(0, num_points, root_index)
    }

    pub fn with_polarization_degree(mut self, h: u32) -> Result<Self> {
        if h < 1 {
            return Err(Error::InvalidConfig {
                field: "polarization_degree",
                reason: "polarization_degree must be ≥ 1".into(),
            });
        }
        self.polarization_degree = h;
        Ok(self)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn num_points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn root_index(&self) -> u32 {
        self.root_index
    }

    pub fn point_labels(&self) -> &[String] {
        &self.point_labels
    }

    pub fn polarization_degree(&self) -> u32 {
        self.polarization_degree
    }

    pub fn record(&self) -> ConfigRecord {
        ConfigRecord {
            genus: self.genus as i64,
            num_points: Some(self.num_points() as i64),
            root_index: self.root_index as i64,
            point_labels: Some(self.point_labels.clone()),
            polarization_degree: Some(self.polarization_degree as i64),
        }
    }

    pub(crate) fn require_genus_zero(&self) -> Result<()> {
        if self.genus == 0 {
            Ok(())
        } else {
            Err(Error::GenusRestriction(self.genus))
        }
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<()> {
        if got == self.num_points() {
            Ok(())
        } else {
            Err(Error::ConfigMismatch {
                expected: self.num_points(),
                got,
            })
        }
    }

    pub(crate) fn r(&self) -> i64 {
        self.root_index as i64
    }

    pub(crate) fn m(&self) -> i64 {
        self.num_points() as i64
    }
}

/// An element `l / r` of the index lattice `(1/r)Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightIndex {
    numerator: i64,
    denominator: u32,
}

impl WeightIndex {
    pub fn new(cfg: &OrbiConfig, numerator: i64) -> Self {
        WeightIndex {
            numerator,
            denominator: cfg.root_index,
        }
    }

    pub fn from_rational(cfg: &OrbiConfig, t: Q) -> Result<Self> {
        let scaled = t * Q::from_integer(cfg.r());
        if !scaled.is_integer() {
            return Err(Error::BadDenominator {
                weight: crate::rational::format(t),
                root_index: cfg.root_index,
            });
        }
        Ok(Self::new(cfg, scaled.to_integer()))
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn value(&self) -> Q {
        Q::new(self.numerator, self.denominator as i64)
    }
}

/// `χ(X, L)` for a line bundle of degree `d`: `d + 1 - g`.
pub fn chi_line_on_base(cfg: &OrbiConfig, d: i64) -> i64 {
    d + 1 - cfg.genus as i64
}

pub fn validate_config(raw: &ConfigRecord) -> Result<OrbiConfig> {
    if raw.genus < 0 {
        return Err(Error::InvalidConfig {
            field: "genus",
            reason: "genus must be ≥ 0".into(),
        });
    }
    if raw.root_index < 1 {
        return Err(Error::InvalidConfig {
            field: "root_index",
            reason: "root_index must be ≥ 1".into(),
        });
    }
    let h = raw.polarization_degree.unwrap_or(1);
    if h < 1 {
        return Err(Error::InvalidConfig {
            field: "polarization_degree",
            reason: "polarization_degree must be ≥ 1".into(),
        });
    }
    let labels = match (&raw.point_labels, raw.num_points) {
        (Some(labels), Some(m)) if m != labels.len() as i64 => {
            return Err(Error::InvalidConfig {
                field: "num_points",
                reason: format!("num_points is {m} but {} labels were given", labels.len()),
            })
        }
        (Some(labels), _) => labels.clone(),
        (None, Some(m)) if m < 0 => {
            return Err(Error::InvalidConfig {
                field: "num_points",
                reason: "num_points must be ≥ 0".into(),
            })
        }
        (None, Some(m)) => (1..=m).map(|i| format!("P{i}")).collect(),
        (None, None) => Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for label in &labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::InvalidConfig {
                field: "point_labels",
                reason: format!("duplicate point label `{label}`"),
            });
        }
    }
    Ok(OrbiConfig {
        genus: raw.genus as u32,
        root_index: raw.root_index as u32,
        point_labels: labels,
        polarization_degree: h as u32,
    })
}
