//! Categorical, flow and black-and-white edge colors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::flow::flow_color;
use crate::vessel::{ArteryLabel, Side, TreeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const WHITE: Rgb = Rgb(255, 255, 255);
    pub const BLACK: Rgb = Rgb(0, 0, 0);

    /// `h` in degrees, `s` and `v` in [0, 1].
    pub fn from_hsv(h: f64, s: f64, v: f64) -> Rgb {
        let h = h.rem_euclid(360.0) / 60.0;
        let c = v * s;
        let x = c * (1.0 - (h % 2.0 - 1.0).abs());
        let (r, g, b) = match h as u32 {
            0 => (c, x, 0.0),
            1 => (x, c, 0.0),
            2 => (0.0, c, x),
            3 => (0.0, x, c),
            4 => (x, 0.0, c),
            _ => (c, 0.0, x),
        };
        let m = v - c;
        let q = |f: f64| ((f + m) * 255.0).round().clamp(0.0, 255.0) as u8;
        Rgb(q(r), q(g), q(b))
    }

    /// (hue degrees, saturation, value).
    pub fn to_hsv(self) -> (f64, f64, f64) {
        let (r, g, b) = (
            self.0 as f64 / 255.0,
            self.1 as f64 / 255.0,
            self.2 as f64 / 255.0,
        );
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let d = max - min;
        let h = if d == 0.0 {
            0.0
        } else if max == r {
            60.0 * ((g - b) / d).rem_euclid(6.0)
        } else if max == g {
            60.0 * ((b - r) / d + 2.0)
        } else {
            60.0 * ((r - g) / d + 4.0)
        };
        let s = if max == 0.0 { 0.0 } else { d / max };
        (h, s, max)
    }

    pub fn hex(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s
            .strip_prefix('#')
            .filter(|h| h.len() == 6 && h.is_ascii())
            .ok_or_else(|| format!("expected #rrggbb, got {s:?}"))?;
        let byte =
            |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|e| format!("{s:?}: {e}"));
        Ok(Rgb(byte(0)?, byte(2)?, byte(4)?))
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorMode {
    #[default]
    Categorical,
    Flow,
    #[serde(rename = "bw")]
    BlackWhite,
}

impl fmt::Display for ColorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColorMode::Categorical => "categorical",
            ColorMode::Flow => "flow",
            ColorMode::BlackWhite => "bw",
        })
    }
}

impl FromStr for ColorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "categorical" => Ok(ColorMode::Categorical),
            "flow" => Ok(ColorMode::Flow),
            "bw" | "blackwhite" => Ok(ColorMode::BlackWhite),
            _ => Err(format!("unknown color mode {s:?} (categorical, flow, bw)")),
        }
    }
}

/// Palette: one hue per hemisphere, saturation by cerebral tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorScheme {
    pub mode: ColorMode,
    pub left_hue: f64,
    pub right_hue: f64,
    /// Saturation per tree, listed PCA, ACA, MCA.
    pub tree_saturation: [f64; 3],
    pub value: f64,
    /// Carotids share their side's hue, darker than any tree.
    pub ic_saturation: f64,
    pub ic_value: f64,
    pub pcomm: Rgb,
    pub acomm: Rgb,
    pub ba: Rgb,
    pub unlabeled: Rgb,
    pub foreground: Rgb,
}

impl Default for ColorScheme {
    fn default() -> Self {
        Self {
            mode: ColorMode::Categorical,
            left_hue: 215.0,
            right_hue: 28.0,
            tree_saturation: [0.4, 0.9, 0.65],
            value: 0.85,
            ic_saturation: 0.8,
            ic_value: 0.45,
            pcomm: Rgb(0xD0, 0x34, 0x2C),
            acomm: Rgb(0x9E, 0x9E, 0x9E),
            ba: Rgb(0x5E, 0x3C, 0x8F),
            unlabeled: Rgb(0xBD, 0xBD, 0xBD),
            foreground: Rgb(0x1A, 0x1A, 0x1A),
        }
    }
}

impl ColorScheme {
    pub fn with_mode(mode: ColorMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    fn hue(&self, side: Side) -> Option<f64> {
        match side {
            Side::Left => Some(self.left_hue),
            Side::Right => Some(self.right_hue),
            Side::Center => None,
        }
    }

    pub fn categorical(&self, label: ArteryLabel) -> Rgb {
        match label {
            ArteryLabel::Ba => self.ba,
            ArteryLabel::AComm => self.acomm,
            ArteryLabel::PComm(_) => self.pcomm,
            ArteryLabel::Unlabeled(..) => self.unlabeled,
            ArteryLabel::Ic(side) => match self.hue(side) {
                Some(h) => Rgb::from_hsv(h, self.ic_saturation, self.ic_value),
                None => self.unlabeled,
            },
            ArteryLabel::Pca(side) | ArteryLabel::Aca(side) | ArteryLabel::Mca(side) => {
                let kind = label.tree_kind().unwrap_or(TreeKind::Pca);
                match self.hue(side) {
                    Some(h) => Rgb::from_hsv(h, self.tree_saturation[kind as usize], self.value),
                    None => self.unlabeled,
                }
            }
        }
    }

    /// Full-flow end of the flow ramp for an edge.
    pub fn flow_base(&self, label: ArteryLabel) -> Rgb {
        match self.hue(label.side()) {
            Some(h) => Rgb::from_hsv(h, 0.9, self.value),
            None => self.ba,
        }
    }
}

/// Edge color under `scheme.mode`. In flow mode `flow` is the pair
/// (edge flow, scan maximum flow); a missing flow renders as zero.
pub fn color_for_edge(label: ArteryLabel, scheme: &ColorScheme, flow: Option<(f64, f64)>) -> Rgb {
    match scheme.mode {
        ColorMode::Categorical => scheme.categorical(label),
        ColorMode::BlackWhite => scheme.foreground,
        ColorMode::Flow => {
            let (f, max) = flow.unwrap_or((0.0, 1.0));
            flow_color(f, max, scheme.flow_base(label))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let c = Rgb(0xD0, 0x34, 0x2C);
        assert_eq!(c.to_string(), "#d0342c");
        assert_eq!("#d0342c".parse::<Rgb>().unwrap(), c);
        assert!("d0342c".parse::<Rgb>().is_err());
        assert!("#zz342c".parse::<Rgb>().is_err());
    }

    #[test]
    fn pcomm_is_accent_red() {
        let s = ColorScheme::default();
        assert_eq!(
            color_for_edge(ArteryLabel::PComm(Side::Left), &s, None),
            Rgb(0xD0, 0x34, 0x2C)
        );
    }

    #[test]
    fn same_side_trees_share_hue() {
        let s = ColorScheme::default();
        for side in [Side::Left, Side::Right] {
            let hsv = |k: TreeKind| s.categorical(k.label(side)).to_hsv();
            let (aca, mca, pca) = (hsv(TreeKind::Aca), hsv(TreeKind::Mca), hsv(TreeKind::Pca));
            assert!((aca.0 - pca.0).abs() < 2.0 && (aca.0 - mca.0).abs() < 2.0);
            assert!(aca.1 > mca.1 && mca.1 > pca.1);
        }
        let l = s.categorical(ArteryLabel::Mca(Side::Left)).to_hsv().0;
        let r = s.categorical(ArteryLabel::Mca(Side::Right)).to_hsv().0;
        assert!((l - r).abs() > 90.0);
    }

    #[test]
    fn bw_is_uniform() {
        let s = ColorScheme::with_mode(ColorMode::BlackWhite);
        let mut labels = ArteryLabel::NAMED.to_vec();
        labels.push(ArteryLabel::Unlabeled(Side::Left, 0));
        for l in labels {
            assert_eq!(color_for_edge(l, &s, Some((0.3, 1.0))), s.foreground);
        }
    }
}
