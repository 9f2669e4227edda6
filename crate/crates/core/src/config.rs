//! Resolved settings for a pipeline run.
//!
//! Settings are flat `key = value` pairs. Sources apply in increasing
//! priority: defaults, config file, `CEREBRO_*` environment variables,
//! explicit overrides. Unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::SynthParams;
use crate::flow::HeightMode;
use crate::layout::LayoutConfig;
use crate::render::ColorMode;
use crate::swc::AxisConvention;
use crate::vessel::ClassifyConfig;

pub const ENV_PREFIX: &str = "CEREBRO_";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{origin}: unknown setting `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: invalid value `{value}` for `{key}`")]
    InvalidValue {
        origin: String,
        key: String,
        value: String,
    },
    #[error("{origin}: expected `key = value`")]
    Syntax { origin: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub layout: LayoutConfig,
    pub classify: ClassifyConfig,
    pub axis_convention: AxisConvention,
    pub narrowing_threshold: f64,
    pub widening_threshold: f64,
    /// Allowed relative difference between left and right ring extents.
    pub ring_extent_tolerance: f64,
    pub flow_height: HeightMode,
    pub color_mode: ColorMode,
    pub synth: SynthParams,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            layout: LayoutConfig::default(),
            classify: ClassifyConfig::default(),
            axis_convention: AxisConvention::identity(),
            narrowing_threshold: 0.5,
            widening_threshold: 1.5,
            ring_extent_tolerance: 0.2,
            flow_height: HeightMode::Depth,
            color_mode: ColorMode::Categorical,
            synth: SynthParams::default(),
        }
    }
}

pub const KEYS: &[&str] = &[
    "layer_height",
    "cow_baseline_y",
    "band_gutter",
    "canvas_width",
    "stroke_min",
    "stroke_max",
    "carotid_band_height",
    "carotid_amplitude",
    "acomm_arc_rise",
    "pcomm_arc_drop",
    "bend_noise_fraction",
    "corpus_radius_range",
    "ic_min_drop_fraction",
    "axis_convention",
    "narrowing_threshold",
    "widening_threshold",
    "ring_extent_tolerance",
    "flow_height",
    "color_mode",
    "synth_min_depth",
    "synth_max_depth",
    "synth_branch_prob",
    "synth_taper",
    "synth_step",
    "synth_noise",
    "synth_asymmetry",
    "synth_ba_radius",
];

fn parse<T: FromStr>(origin: &str, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        origin: origin.to_string(),
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl Settings {
    /// Sets one key. `origin` names the source for diagnostics.
    pub fn set(&mut self, origin: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim();
        let v = value.trim();
        let l = &mut self.layout;
        let s = &mut self.synth;
        match key {
            "layer_height" => l.layer_height = parse(origin, key, v)?,
            "cow_baseline_y" => l.cow_baseline_y = parse(origin, key, v)?,
            "band_gutter" => l.band_gutter = parse(origin, key, v)?,
            "canvas_width" => l.canvas_width = parse(origin, key, v)?,
            "stroke_min" => l.stroke_min = parse(origin, key, v)?,
            "stroke_max" => l.stroke_max = parse(origin, key, v)?,
            "carotid_band_height" => l.carotid_band_height = parse(origin, key, v)?,
            "carotid_amplitude" => l.carotid_amplitude = parse(origin, key, v)?,
            "acomm_arc_rise" => l.acomm_arc_rise = parse(origin, key, v)?,
            "pcomm_arc_drop" => l.pcomm_arc_drop = parse(origin, key, v)?,
            "bend_noise_fraction" => l.bend_noise_fraction = parse(origin, key, v)?,
            "corpus_radius_range" => {
                l.corpus_radius_range = if v.is_empty() || v == "none" {
                    None
                } else {
                    let parts: Vec<&str> = v.split(',').collect();
                    if parts.len() != 2 {
                        return Err(ConfigError::InvalidValue {
                            origin: origin.into(),
                            key: key.into(),
                            value: v.into(),
                        });
                    }
                    Some([
                        parse(origin, key, parts[0].trim())?,
                        parse(origin, key, parts[1].trim())?,
                    ])
                }
            }
            "ic_min_drop_fraction" => self.classify.ic_min_drop_fraction = parse(origin, key, v)?,
            "axis_convention" => self.axis_convention = parse(origin, key, v)?,
            "narrowing_threshold" => self.narrowing_threshold = parse(origin, key, v)?,
            "widening_threshold" => self.widening_threshold = parse(origin, key, v)?,
            "ring_extent_tolerance" => self.ring_extent_tolerance = parse(origin, key, v)?,
            "flow_height" => self.flow_height = parse(origin, key, v)?,
            "color_mode" => self.color_mode = parse(origin, key, v)?,
            "synth_min_depth" => s.min_depth = parse(origin, key, v)?,
            "synth_max_depth" => s.max_depth = parse(origin, key, v)?,
            "synth_branch_prob" => s.branch_prob = parse(origin, key, v)?,
            "synth_taper" => s.taper = parse(origin, key, v)?,
            "synth_step" => s.step = parse(origin, key, v)?,
            "synth_noise" => s.noise = parse(origin, key, v)?,
            "synth_asymmetry" => s.asymmetry = parse(origin, key, v)?,
            "synth_ba_radius" => s.ba_radius = parse(origin, key, v)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin: origin.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies a flat config file. `#` starts a comment.
    pub fn apply_text(&mut self, name: &str, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax {
                origin: origin.clone(),
            })?;
            self.set(&origin, k, v)?;
        }
        Ok(())
    }

    /// Applies every `CEREBRO_<KEY>` variable; the key is matched case
    /// insensitively.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<(), ConfigError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut found: Vec<(String, String)> = vars
            .into_iter()
            .filter_map(|(k, v)| {
                k.as_ref()
                    .strip_prefix(ENV_PREFIX)
                    .map(|rest| (rest.to_ascii_lowercase(), v.as_ref().to_string()))
            })
            .collect();
        found.sort();
        for (k, v) in found {
            let origin = format!("{ENV_PREFIX}{}", k.to_ascii_uppercase());
            self.set(&origin, &k, &v)?;
        }
        Ok(())
    }

    /// Applies `key=value` override strings.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, pairs: &[S]) -> Result<(), ConfigError> {
        for p in pairs {
            let p = p.as_ref();
            let origin = format!("--set {p}");
            let (k, v) = p.split_once('=').ok_or(ConfigError::Syntax {
                origin: origin.clone(),
            })?;
            self.set(&origin, k, v)?;
        }
        Ok(())
    }
}

/// Writes every key with its current value, in [`KEYS`] order.
impl fmt::Display for Settings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.layout;
        let s = &self.synth;
        let range = match l.corpus_radius_range {
            Some([a, b]) => format!("{a},{b}"),
            None => "none".into(),
        };
        let values: [String; 27] = [
            l.layer_height.to_string(),
            l.cow_baseline_y.to_string(),
            l.band_gutter.to_string(),
            l.canvas_width.to_string(),
            l.stroke_min.to_string(),
            l.stroke_max.to_string(),
            l.carotid_band_height.to_string(),
            l.carotid_amplitude.to_string(),
            l.acomm_arc_rise.to_string(),
            l.pcomm_arc_drop.to_string(),
            l.bend_noise_fraction.to_string(),
            range,
            self.classify.ic_min_drop_fraction.to_string(),
            self.axis_convention.to_string(),
            self.narrowing_threshold.to_string(),
            self.widening_threshold.to_string(),
            self.ring_extent_tolerance.to_string(),
            self.flow_height.to_string(),
            self.color_mode.to_string(),
            s.min_depth.to_string(),
            s.max_depth.to_string(),
            s.branch_prob.to_string(),
            s.taper.to_string(),
            s.step.to_string(),
            s.noise.to_string(),
            s.asymmetry.to_string(),
            s.ba_radius.to_string(),
        ];
        for (k, v) in KEYS.iter().zip(values) {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        let mut s = Settings::default();
        s.set("t", "corpus_radius_range", "0.5, 3").unwrap();
        s.set("t", "axis_convention", "-z+y+x").unwrap();
        s.set("t", "color_mode", "bw").unwrap();
        let mut back = Settings::default();
        back.apply_text("dump", &s.to_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn priority_file_then_env_then_overrides() {
        let mut s = Settings::default();
        s.apply_text("f", "layer_height = 10\nstroke_max = 20 # comment\n")
            .unwrap();
        s.apply_env([("CEREBRO_LAYER_HEIGHT", "20"), ("HOME", "/x")])
            .unwrap();
        assert_eq!(s.layout.layer_height, 20.0);
        s.apply_overrides(&["layer_height=30"]).unwrap();
        assert_eq!(s.layout.layer_height, 30.0);
        assert_eq!(s.layout.stroke_max, 20.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut s = Settings::default();
        assert!(matches!(
            s.apply_text("f", "colour = red"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            s.apply_env([("CEREBRO_NOPE", "1")]),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            s.apply_text("f", "layer_height"),
            Err(ConfigError::Syntax { .. })
        ));
        assert!(matches!(
            s.apply_overrides(&["layer_height=abc"]),
            Err(ConfigError::InvalidValue { .. })
        ));
    }
}
