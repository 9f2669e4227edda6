//! `cerebro`: command-line front end for the layout engine.
//!
//! Exit codes: 0 ok, 1 input error, 2 classification failure, 3 scene schema
//! mismatch, 64 usage error. Payloads go to stdout (or `--out`),
//! diagnostics to stderr.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cerebro_core::analysis::{
    detect_width_outliers, generate_synthetic_scan, inject_stenosis, symmetry_metrics,
    validate_batch,
};
use cerebro_core::config::{ConfigError, Settings};
use cerebro_core::flow::compute_flow;
use cerebro_core::pipeline::{
    apply_flow, build_network, build_scene, load_forest, load_overrides, resolve_edge, Overrides,
    PipelineError,
};
use cerebro_core::render::{
    export_scene_json, import_scene_json, render_svg, scene_has_flow, ColorMode, ColorScheme,
    SceneError, SvgOptions,
};
use cerebro_core::swc::{parse_swc, serialize_swc};
use cerebro_core::vessel::VesselError;

const EXIT_INPUT: u8 = 1;
const EXIT_CLASSIFY: u8 = 2;
const EXIT_SCHEMA: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "cerebro",
    version,
    about = "Cerebral artery network layout engine"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat `key = value` settings file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Setting override, highest priority. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Lay out a scan and write the scene JSON.
    Layout {
        input: PathBuf,
        /// Label overrides (`e<id> = LABEL` or `s<segment> = LABEL` lines).
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a scene JSON to SVG.
    Render {
        scene: PathBuf,
        /// categorical, flow or bw; defaults to the `color_mode` setting.
        #[arg(long)]
        color: Option<ColorMode>,
        #[arg(long)]
        no_legend: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lay out a scan with simulated flow, optionally blocking arteries.
    Flow {
        input: PathBuf,
        /// Edge id (`e12`) or label (`MCA_R`, its root edge). Repeatable.
        #[arg(long)]
        block: Vec<String>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Narrow the central half of one artery and write the new SWC.
    Inject {
        input: PathBuf,
        /// Edge id (`e12`) or label (`MCA_R`, its root edge).
        #[arg(long)]
        edge: String,
        /// Fraction of the radius removed, in (0, 1).
        #[arg(long)]
        severity: f64,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Left/right symmetry and width outliers as JSON.
    Metrics {
        input: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every `*.swc` in a directory through the pipeline and check it.
    Validate {
        dir: PathBuf,
        /// Report JSON path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate synthetic scans.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds; more than one requires `--out-dir`.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Output SWC for a single scan; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for `scan_<seed>.swc` files and their `.labels` truth.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write the ground-truth labels next to each scan.
        #[arg(long)]
        truth: bool,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn config_failure(e: ConfigError) -> Failure {
    Failure::new(EXIT_USAGE, e.to_string())
}

fn vessel_failure(path: &Path, e: VesselError) -> Failure {
    let code = match e {
        VesselError::ClassificationFailed { .. }
        | VesselError::CannotClose(_)
        | VesselError::InvariantViolation(_) => EXIT_CLASSIFY,
        _ => EXIT_INPUT,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn pipeline_failure(path: &Path, e: PipelineError) -> Failure {
    let code = if e.is_classification_failure() {
        EXIT_CLASSIFY
    } else {
        EXIT_INPUT
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn resolve_settings(global: &GlobalArgs) -> Result<Settings, Failure> {
    let mut s = Settings::default();
    if let Some(path) = &global.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
        s.apply_text(&path.display().to_string(), &text)
            .map_err(config_failure)?;
    }
    s.apply_env(std::env::vars()).map_err(config_failure)?;
    s.apply_overrides(&global.set).map_err(config_failure)?;
    s.layout
        .validate()
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    Ok(s)
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn read_overrides(path: Option<&Path>) -> Result<Overrides, Failure> {
    let Some(path) = path else {
        return Ok(Overrides::new());
    };
    let text = String::from_utf8_lossy(&read(path)?).into_owned();
    load_overrides(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn scan_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn emit(out: Option<&Path>, payload: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, payload)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::new(EXIT_INPUT, format!("stdout: {e}")))
        }
    }
}

fn load_scan(
    input: &Path,
    settings: &Settings,
) -> Result<cerebro_core::swc::SegmentForest, Failure> {
    load_forest(&read(input)?, settings)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", input.display())))
}

fn run(cli: Cli) -> Outcome {
    let settings = resolve_settings(&cli.global)?;
    match cli.command {
        Command::Layout { input, labels, out } => {
            let forest = load_scan(&input, &settings)?;
            let overrides = read_overrides(labels.as_deref())?;
            let (_, scene) = build_scene(&forest, &scan_id(&input), &settings, &overrides)
                .map_err(|e| pipeline_failure(&input, e))?;
            emit(out.as_deref(), &export_scene_json(&scene))
        }
        Command::Render {
            scene,
            color,
            no_legend,
            out,
        } => {
            let text = String::from_utf8_lossy(&read(&scene)?).into_owned();
            let doc = import_scene_json(&text).map_err(|e| {
                let code = match e {
                    SceneError::VersionMismatch { .. } => EXIT_SCHEMA,
                    SceneError::Malformed(_) => EXIT_INPUT,
                };
                Failure::new(code, format!("{}: {e}", scene.display()))
            })?;
            let mode = color.unwrap_or(settings.color_mode);
            if mode == ColorMode::Flow && !scene_has_flow(&doc) {
                eprintln!(
                    "warning: {} has no flow values; using categorical colors",
                    scene.display()
                );
            }
            let scheme = ColorScheme::with_mode(mode);
            let options = SvgOptions {
                legend: !no_legend,
                ..SvgOptions::default()
            };
            emit(out.as_deref(), &render_svg(&doc, &scheme, &options))
        }
        Command::Flow {
            input,
            block,
            labels,
            out,
        } => {
            let forest = load_scan(&input, &settings)?;
            let overrides = read_overrides(labels.as_deref())?;
            let (net, mut scene) = build_scene(&forest, &scan_id(&input), &settings, &overrides)
                .map_err(|e| pipeline_failure(&input, e))?;
            let mut blocked = BTreeSet::new();
            for b in &block {
                blocked.insert(resolve_edge(&net, b).map_err(|e| vessel_failure(&input, e))?);
            }
            let flow = compute_flow(&net, &blocked, settings.flow_height)
                .map_err(|e| vessel_failure(&input, e))?;
            apply_flow(&mut scene, &flow, &ColorScheme::default());
            emit(out.as_deref(), &export_scene_json(&scene))
        }
        Command::Inject {
            input,
            edge,
            severity,
            labels,
            out,
        } => {
            if !(severity > 0.0 && severity < 1.0) {
                return Err(Failure::new(
                    EXIT_USAGE,
                    format!("--severity {severity} must lie in (0, 1)"),
                ));
            }
            let bytes = read(&input)?;
            let raw = parse_swc(&bytes)
                .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", input.display())))?;
            let forest = load_scan(&input, &settings)?;
            let overrides = read_overrides(labels.as_deref())?;
            // numeric ids need no labels; a label reference needs the full network
            let target = match edge.trim_start_matches('e').parse::<u32>() {
                Ok(n) => cerebro_core::vessel::EdgeId(n),
                Err(_) => {
                    let net = build_network(&forest, &settings, &overrides)
                        .map_err(|e| vessel_failure(&input, e))?;
                    resolve_edge(&net, &edge).map_err(|e| vessel_failure(&input, e))?
                }
            };
            let injected = inject_stenosis(&raw, target, severity)
                .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", input.display())))?;
            emit(out.as_deref(), &serialize_swc(&injected))
        }
        Command::Metrics { input, labels, out } => {
            let forest = load_scan(&input, &settings)?;
            let overrides = read_overrides(labels.as_deref())?;
            let net = build_network(&forest, &settings, &overrides)
                .map_err(|e| vessel_failure(&input, e))?;
            let doc = serde_json::json!({
                "scanId": scan_id(&input),
                "symmetry": symmetry_metrics(&net),
                "outliers": detect_width_outliers(&net, settings.narrowing_threshold, settings.widening_threshold),
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("metrics always serialize");
            text.push('\n');
            emit(out.as_deref(), &text)
        }
        Command::Validate { dir, out } => {
            let report = validate_batch(&dir, &settings)
                .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", dir.display())))?;
            eprint!("{}", report.summary());
            emit(out.as_deref(), &report.to_json())?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::new(
                    EXIT_INPUT,
                    format!(
                        "{} of {} scans failed",
                        report.total - report.passed,
                        report.total
                    ),
                ))
            }
        }
        Command::Gen {
            seed,
            count,
            out,
            out_dir,
            truth,
        } => {
            if count == 0 || (count > 1 && out_dir.is_none()) {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--count above 1 requires --out-dir",
                ));
            }
            if out.is_some() && out_dir.is_some() {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--out and --out-dir are exclusive",
                ));
            }
            if truth && out_dir.is_none() {
                return Err(Failure::new(EXIT_USAGE, "--truth requires --out-dir"));
            }
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", dir.display())))?;
                    for s in seed..seed + count {
                        let scan = generate_synthetic_scan(s, &settings.synth);
                        let base = dir.join(format!("scan_{s:03}"));
                        emit(
                            Some(&base.with_extension("swc")),
                            &serialize_swc(&scan.forest),
                        )?;
                        if truth {
                            emit(
                                Some(&base.with_extension("labels")),
                                &scan.truth.to_overrides_text(),
                            )?;
                        }
                    }
                    Ok(())
                }
                None => emit(
                    out.as_deref(),
                    &serialize_swc(&generate_synthetic_scan(seed, &settings.synth).forest),
                ),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
