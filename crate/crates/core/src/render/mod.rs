//! SVG rendering, the JSON scene document and the color system.

mod color;
mod json;
mod svg;

pub use color::{color_for_edge, ColorMode, ColorScheme, Rgb};
pub use json::{export_scene_json, import_scene_json, SceneError, SCENE_VERSION};
pub use svg::{render_svg, scene_has_flow, SvgOptions};
