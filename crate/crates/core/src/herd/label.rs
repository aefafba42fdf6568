use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Number of health classes: healthy plus twelve diseases.
pub const NUM_CLASSES: usize = 13;

/// Health status of a cow-day. The discriminant is the stable class index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiseaseLabel {
    Healthy = 0,
    Bloat = 1,
    #[serde(rename = "BRD")]
    Brd = 2,
    DisplacedAbomasum = 3,
    #[serde(rename = "FMD")]
    Fmd = 4,
    HardwareDisease = 5,
    JohnesDisease = 6,
    Ketosis = 7,
    Lameness = 8,
    Mastitis = 9,
    MilkFever = 10,
    Tuberculosis = 11,
    Acidosis = 12,
}

impl DiseaseLabel {
    pub const ALL: [DiseaseLabel; NUM_CLASSES] = [
        DiseaseLabel::Healthy,
        DiseaseLabel::Bloat,
        DiseaseLabel::Brd,
        DiseaseLabel::DisplacedAbomasum,
        DiseaseLabel::Fmd,
        DiseaseLabel::HardwareDisease,
        DiseaseLabel::JohnesDisease,
        DiseaseLabel::Ketosis,
        DiseaseLabel::Lameness,
        DiseaseLabel::Mastitis,
        DiseaseLabel::MilkFever,
        DiseaseLabel::Tuberculosis,
        DiseaseLabel::Acidosis,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// Canonical name used in CSV files, model files and alert logs.
    pub fn name(self) -> &'static str {
        match self {
            DiseaseLabel::Healthy => "Healthy",
            DiseaseLabel::Bloat => "Bloat",
            DiseaseLabel::Brd => "BRD",
            DiseaseLabel::DisplacedAbomasum => "DisplacedAbomasum",
            DiseaseLabel::Fmd => "FMD",
            DiseaseLabel::HardwareDisease => "HardwareDisease",
            DiseaseLabel::JohnesDisease => "JohnesDisease",
            DiseaseLabel::Ketosis => "Ketosis",
            DiseaseLabel::Lameness => "Lameness",
            DiseaseLabel::Mastitis => "Mastitis",
            DiseaseLabel::MilkFever => "MilkFever",
            DiseaseLabel::Tuberculosis => "Tuberculosis",
            DiseaseLabel::Acidosis => "Acidosis",
        }
    }
}

impl fmt::Display for DiseaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown disease label {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for DiseaseLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|label| label.name() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_name_are_bijective() {
        assert_eq!(DiseaseLabel::ALL.len(), NUM_CLASSES);
        for (i, label) in DiseaseLabel::ALL.iter().enumerate() {
            assert_eq!(label.index(), i);
            assert_eq!(DiseaseLabel::from_index(i), Some(*label));
            assert_eq!(label.name().parse::<DiseaseLabel>().unwrap(), *label);
        }
        assert_eq!(DiseaseLabel::from_index(NUM_CLASSES), None);
        assert_eq!(DiseaseLabel::Healthy.index(), 0);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert_eq!("Flu".parse::<DiseaseLabel>(), Err(UnknownLabel("Flu".into())));
        assert!("healthy".parse::<DiseaseLabel>().is_err());
    }

    #[test]
    fn serde_uses_canonical_names() {
        for label in DiseaseLabel::ALL {
            let json = serde_json::to_string(&label).unwrap();
            assert_eq!(json, format!("\"{}\"", label.name()));
            assert_eq!(serde_json::from_str::<DiseaseLabel>(&json).unwrap(), label);
        }
    }
}
