use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Center,
}

impl Side {
    pub fn suffix(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
            Side::Center => "C",
        }
    }

    pub fn mirrored(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Center => Side::Center,
        }
    }

    /// -1 for left, +1 for right, 0 for center.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
            Side::Center => 0.0,
        }
    }

    fn parse(s: &str) -> Option<Side> {
        match s {
            "L" => Some(Side::Left),
            "R" => Some(Side::Right),
            "C" => Some(Side::Center),
            _ => None,
        }
    }
}

/// The three paired cerebral trees, listed from the midline outward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TreeKind {
    Pca,
    Aca,
    Mca,
}

impl TreeKind {
    pub const OUTWARD: [TreeKind; 3] = [TreeKind::Pca, TreeKind::Aca, TreeKind::Mca];

    pub fn label(self, side: Side) -> ArteryLabel {
        match self {
            TreeKind::Pca => ArteryLabel::Pca(side),
            TreeKind::Aca => ArteryLabel::Aca(side),
            TreeKind::Mca => ArteryLabel::Mca(side),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TreeKind::Pca => "PCA",
            TreeKind::Aca => "ACA",
            TreeKind::Mca => "MCA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArteryLabel {
    Ba,
    Ic(Side),
    PComm(Side),
    AComm,
    Pca(Side),
    Mca(Side),
    Aca(Side),
    Unlabeled(Side, u32),
}

impl ArteryLabel {
    /// Every named (non-`Unlabeled`) label.
    pub const NAMED: [ArteryLabel; 12] = [
        ArteryLabel::Ba,
        ArteryLabel::Ic(Side::Left),
        ArteryLabel::Ic(Side::Right),
        ArteryLabel::PComm(Side::Left),
        ArteryLabel::PComm(Side::Right),
        ArteryLabel::AComm,
        ArteryLabel::Pca(Side::Left),
        ArteryLabel::Pca(Side::Right),
        ArteryLabel::Mca(Side::Left),
        ArteryLabel::Mca(Side::Right),
        ArteryLabel::Aca(Side::Left),
        ArteryLabel::Aca(Side::Right),
    ];

    pub fn side(self) -> Side {
        match self {
            ArteryLabel::Ba | ArteryLabel::AComm => Side::Center,
            ArteryLabel::Ic(s)
            | ArteryLabel::PComm(s)
            | ArteryLabel::Pca(s)
            | ArteryLabel::Mca(s)
            | ArteryLabel::Aca(s)
            | ArteryLabel::Unlabeled(s, _) => s,
        }
    }

    pub fn tree_kind(self) -> Option<TreeKind> {
        match self {
            ArteryLabel::Pca(_) => Some(TreeKind::Pca),
            ArteryLabel::Aca(_) => Some(TreeKind::Aca),
            ArteryLabel::Mca(_) => Some(TreeKind::Mca),
            _ => None,
        }
    }

    pub fn is_named(self) -> bool {
        !matches!(self, ArteryLabel::Unlabeled(..))
    }

    /// Same artery on the other side of the brain.
    pub fn mirrored(self) -> ArteryLabel {
        match self {
            ArteryLabel::Ic(s) => ArteryLabel::Ic(s.mirrored()),
            ArteryLabel::PComm(s) => ArteryLabel::PComm(s.mirrored()),
            ArteryLabel::Pca(s) => ArteryLabel::Pca(s.mirrored()),
            ArteryLabel::Mca(s) => ArteryLabel::Mca(s.mirrored()),
            ArteryLabel::Aca(s) => ArteryLabel::Aca(s.mirrored()),
            ArteryLabel::Unlabeled(s, i) => ArteryLabel::Unlabeled(s.mirrored(), i),
            other => other,
        }
    }
}

impl fmt::Display for ArteryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ArteryLabel::Ba => f.write_str("BA"),
            ArteryLabel::AComm => f.write_str("AComm"),
            ArteryLabel::Ic(s) => write!(f, "IC_{}", s.suffix()),
            ArteryLabel::PComm(s) => write!(f, "PComm_{}", s.suffix()),
            ArteryLabel::Pca(s) => write!(f, "PCA_{}", s.suffix()),
            ArteryLabel::Mca(s) => write!(f, "MCA_{}", s.suffix()),
            ArteryLabel::Aca(s) => write!(f, "ACA_{}", s.suffix()),
            ArteryLabel::Unlabeled(s, i) => write!(f, "Unlabeled({},{})", s.suffix(), i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown artery label {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for ArteryLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || LabelParseError(s.to_string());
        match s {
            "BA" => return Ok(ArteryLabel::Ba),
            "AComm" => return Ok(ArteryLabel::AComm),
            _ => {}
        }
        if let Some(inner) = s
            .strip_prefix("Unlabeled(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let (side, idx) = inner.split_once(',').ok_or_else(err)?;
            let side = Side::parse(side.trim()).ok_or_else(err)?;
            let idx = idx.trim().parse().map_err(|_| err())?;
            return Ok(ArteryLabel::Unlabeled(side, idx));
        }
        let (name, side) = s.rsplit_once('_').ok_or_else(err)?;
        let side = match Side::parse(side) {
            Some(Side::Center) | None => return Err(err()),
            Some(side) => side,
        };
        Ok(match name {
            "IC" => ArteryLabel::Ic(side),
            "PComm" => ArteryLabel::PComm(side),
            "PCA" => ArteryLabel::Pca(side),
            "MCA" => ArteryLabel::Mca(side),
            "ACA" => ArteryLabel::Aca(side),
            _ => return Err(err()),
        })
    }
}

impl Serialize for ArteryLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ArteryLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_round_trip() {
        let mut all = ArteryLabel::NAMED.to_vec();
        all.push(ArteryLabel::Unlabeled(Side::Center, 3));
        all.push(ArteryLabel::Unlabeled(Side::Left, 0));
        for l in all {
            assert_eq!(l.to_string().parse::<ArteryLabel>().unwrap(), l);
        }
        assert!("MCA_C".parse::<ArteryLabel>().is_err());
        assert!("XYZ_L".parse::<ArteryLabel>().is_err());
        assert!("Unlabeled(Q,1)".parse::<ArteryLabel>().is_err());
    }
}
