//! Declarative drawing rules for the diagnosis dataset.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::label::Diagnosis;
use crate::bodymap::{RegionId, REGION_COUNT};
use crate::error::{Error, Result};
use crate::primitives::{ClusterParams, LineParams, PrimitiveKind};
use crate::raster::{DashPattern, Rgba};

const DEFAULT_SCENARIO: &str = include_str!("../../scenarios/default.json");

/// Where a rule's primitives may be drawn: one region, or anywhere (`"any"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion", into = "RawRegion")]
pub enum RegionSelector {
    Any,
    Region(RegionId),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawRegion {
    Id(u8),
    Word(String),
}

impl TryFrom<RawRegion> for RegionSelector {
    type Error = String;
    fn try_from(raw: RawRegion) -> Result<Self, String> {
        match raw {
            RawRegion::Id(id) => Ok(RegionSelector::Region(id)),
            RawRegion::Word(w) if w == "any" => Ok(RegionSelector::Any),
            RawRegion::Word(w) => Err(format!("region must be an id or \"any\", got {w:?}")),
        }
    }
}

impl From<RegionSelector> for RawRegion {
    fn from(r: RegionSelector) -> Self {
        match r {
            RegionSelector::Any => RawRegion::Word("any".into()),
            RegionSelector::Region(id) => RawRegion::Id(id),
        }
    }
}

/// Draw `count` primitives of `kind` in `region` with `color`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRule {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub kind: PrimitiveKind,
    pub region: RegionSelector,
    pub color: Rgba,
    /// Inclusive `[min, max]` number of primitives per image.
    pub count: [u32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<ClusterParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dash: Option<DashPattern>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub diagnoses: BTreeMap<Diagnosis, Vec<ScenarioRule>>,
}

impl ScenarioSpec {
    /// The bundled scenario (see `scenarios/default.json`).
    pub fn default_scenario() -> Self {
        serde_json::from_str(DEFAULT_SCENARIO).expect("bundled scenario parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ScenarioSpec =
            serde_json::from_str(text).map_err(|e| Error::config(format!("scenario: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn rules(&self, diagnosis: Diagnosis) -> &[ScenarioRule] {
        self.diagnoses.get(&diagnosis).map_or(&[], Vec::as_slice)
    }

    /// Every diagnosis has at least one rule and every rule is well formed.
    pub fn validate(&self) -> Result<()> {
        for d in Diagnosis::ALL {
            let rules = self.rules(d);
            if rules.is_empty() {
                return Err(Error::config(format!(
                    "scenario has no rules for {}",
                    d.as_str()
                )));
            }
            for (i, rule) in rules.iter().enumerate() {
                rule.validate()
                    .map_err(|e| Error::config(format!("scenario {} rule {i}: {e}", d.as_str())))?;
            }
        }
        Ok(())
    }
}

impl ScenarioRule {
    fn validate(&self) -> Result<()> {
        if let RegionSelector::Region(r) = self.region {
            if r as usize >= REGION_COUNT {
                return Err(Error::config(format!(
                    "region {r} is not in 0..{REGION_COUNT}"
                )));
            }
        }
        if self.count[0] > self.count[1] {
            return Err(Error::config(format!(
                "count range [{}, {}] is empty",
                self.count[0], self.count[1]
            )));
        }
        self.line.as_ref().map(LineParams::validate).transpose()?;
        self.cluster
            .as_ref()
            .map(ClusterParams::validate)
            .transpose()?;
        self.dash.as_ref().map(DashPattern::validate).transpose()?;
        Ok(())
    }
}
