use serde::{Deserialize, Serialize};

use crate::bodymap::{RegionId, REGION_COUNT};
use crate::primitives::PrimitiveKind;

/// The three dataset families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// One primitive anywhere on the body map; 3 classes.
    Basic3,
    /// One primitive inside one region; 36 classes.
    Regions36,
    /// Scenario-driven drawings; 5 diagnosis classes.
    Diagnoses,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Basic3 => "basic3",
            Family::Regions36 => "regions36",
            Family::Diagnoses => "diagnoses",
        }
    }

    /// Every class label of the family in canonical order.
    pub fn labels(self) -> Vec<ClassLabel> {
        match self {
            Family::Basic3 => PrimitiveKind::ALL
                .map(|kind| ClassLabel::Basic3 { kind })
                .to_vec(),
            Family::Regions36 => PrimitiveKind::ALL
                .iter()
                .flat_map(|&kind| {
                    (0..REGION_COUNT as u8)
                        .map(move |region| ClassLabel::Regions36 { kind, region })
                })
                .collect(),
            Family::Diagnoses => Diagnosis::ALL
                .map(|diagnosis| ClassLabel::Diagnoses { diagnosis })
                .to_vec(),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basic3" => Ok(Family::Basic3),
            "regions36" => Ok(Family::Regions36),
            "diagnoses" => Ok(Family::Diagnoses),
            _ => Err(format!(
                "unknown dataset family {s:?} (basic3, regions36, diagnoses)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnosis {
    PelvicContusion,
    AtrophyHypertrophyForelimb,
    AtrophyHypertrophyHindlimb,
    LowBloodPressure,
    HighBloodPressure,
}

impl Diagnosis {
    pub const ALL: [Diagnosis; 5] = [
        Diagnosis::PelvicContusion,
        Diagnosis::AtrophyHypertrophyForelimb,
        Diagnosis::AtrophyHypertrophyHindlimb,
        Diagnosis::LowBloodPressure,
        Diagnosis::HighBloodPressure,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Diagnosis::PelvicContusion => "pelvic_contusion",
            Diagnosis::AtrophyHypertrophyForelimb => "atrophy_hypertrophy_forelimb",
            Diagnosis::AtrophyHypertrophyHindlimb => "atrophy_hypertrophy_hindlimb",
            Diagnosis::LowBloodPressure => "low_blood_pressure",
            Diagnosis::HighBloodPressure => "high_blood_pressure",
        }
    }
}

/// A class label, tagged by family in JSON:
/// `{"family":"regions36","kind":"line","region":3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassLabel {
    Basic3 {
        kind: PrimitiveKind,
    },
    Regions36 {
        kind: PrimitiveKind,
        region: RegionId,
    },
    Diagnoses {
        diagnosis: Diagnosis,
    },
}

impl ClassLabel {
    pub fn family(&self) -> Family {
        match self {
            ClassLabel::Basic3 { .. } => Family::Basic3,
            ClassLabel::Regions36 { .. } => Family::Regions36,
            ClassLabel::Diagnoses { .. } => Family::Diagnoses,
        }
    }

    /// Directory name used in the folder-per-class layout.
    pub fn class_dir(&self) -> String {
        match self {
            ClassLabel::Basic3 { kind } => kind.as_str().to_owned(),
            ClassLabel::Regions36 { kind, region } => format!("{kind}_r{region:02}"),
            ClassLabel::Diagnoses { diagnosis } => diagnosis.as_str().to_owned(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub const ALL: [Split; 2] = [Split::Train, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}
