//! Command-line front door: build dumps, render rasters, run scans,
//! execute verification suites.
//!
//! Every command takes an optional `--config` file of `key = value`
//! lines; explicit flags win over the file. Each output is accompanied
//! by a manifest that repeats the resolved configuration as plain keys
//! (so the manifest itself is a valid `--config` for an identical
//! re-run) plus derived counts and timings as comment lines, which keeps
//! re-runs byte-identical while timings stay informational.
//!
//! Exit codes, mapped by the binary from `execute`: 0 success, 1 at
//! least one property failure in a verify run, 2 configuration, parsing,
//! or validation errors.

use crate::construction::{Budgets, LevelSet, Window};
use crate::directions::{AngleRule, BlockOrder, DirectionSchedule};
use crate::geom::{Dir, Point};
use crate::porosity::{scan_directional, scan_isotropic, write_scan_csv};
use crate::raster::{rasterize, RasterMode};
use crate::verify::{run_suites, Suite};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "porous",
    version,
    about = "Build, render, scan, and verify planar capsule-union level sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Build a level set and write its dump plus a manifest.
    Build(BuildArgs),
    /// Render a dump as a binary PGM image.
    Raster(RasterArgs),
    /// Run a porosity scan at a point and emit CSV.
    Scan(ScanArgs),
    /// Run property suites against a dump.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// key = value file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// levels to build (1..=4)
    #[arg(long)]
    pub depth: Option<u32>,
    /// window center as "x,y"
    #[arg(long)]
    pub center: Option<String>,
    /// half-width of the exact query window
    #[arg(long)]
    pub half_width: Option<f64>,
    /// extra exact margin outside the core (default: half-width)
    #[arg(long)]
    pub pad: Option<f64>,
    /// direction schedule: "diagonal" or "front:JxL,JxL,..."
    #[arg(long)]
    pub schedule: Option<String>,
    /// per-family lattice line cap
    #[arg(long)]
    pub budget_lines: Option<u64>,
    /// total capsule cap
    #[arg(long)]
    pub budget_caps: Option<u64>,
    /// dump path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// manifest path (default: <out>.manifest)
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RasterArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// level-set dump to render
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// square image side in pixels
    #[arg(long)]
    pub resolution: Option<u32>,
    /// "membership" or "distance"
    #[arg(long)]
    pub mode: Option<String>,
    /// depth to query (default: the dump's full depth)
    #[arg(long)]
    pub level: Option<u32>,
    /// PGM path
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// scan point as "x,y"
    #[arg(long)]
    pub point: Option<String>,
    /// "iso" or "dir"
    #[arg(long)]
    pub mode: Option<String>,
    /// chord direction for dir mode: "x,y" or east|north|west|south
    #[arg(long)]
    pub direction: Option<String>,
    /// comma list of scales; entries like "2^-12", "0.001", or a dyadic
    /// range "2^-6..2^-18" (default: the full affordable dyadic ladder)
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub level: Option<u32>,
    /// CSV path (omit to print the CSV to stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// boundary | thick | holes | separation | columns | oracle | all
    #[arg(long)]
    pub suite: Option<String>,
    /// per-case sample count
    #[arg(long)]
    pub samples: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// verdict file (the verdict always also prints to stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Plain-text configuration: `key = value` per line, `#` comments.
struct KeyMap {
    source: String,
    map: BTreeMap<String, String>,
}

impl KeyMap {
    fn empty() -> KeyMap {
        KeyMap { source: "<none>".into(), map: BTreeMap::new() }
    }

    fn load(path: &Path) -> Result<KeyMap> {
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("{}:{}: expected 'key = value'", path.display(), i + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(KeyMap { source: path.display().to_string(), map })
    }

    fn check_keys(&self, command: &str, known: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if k != "command" && !known.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "{}: unknown key {k:?} for {command} (known: {})",
                    self.source,
                    known.join(", ")
                )));
            }
        }
        if let Some(c) = self.map.get("command") {
            if c != command {
                return Err(Error::Config(format!(
                    "{}: config is for command {c:?}, not {command:?}",
                    self.source
                )));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }
}

fn pick<T, F>(flag: Option<T>, cfg: Option<&str>, key: &str, parse: F) -> Result<Option<T>>
where
    F: FnOnce(&str) -> Result<T>,
{
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    match cfg {
        Some(s) => parse(s).map(Some).map_err(|e| Error::Config(format!("key {key}: {e}"))),
        None => Ok(None),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

fn parse_u32(s: &str) -> Result<u32> {
    s.parse::<u32>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse::<u64>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_point(s: &str) -> Result<Point> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad point {s:?}, want \"x,y\"")))?;
    Ok(Point::new(parse_f64(x.trim())?, parse_f64(y.trim())?))
}

fn parse_direction(s: &str) -> Result<Dir> {
    match s {
        "east" => return Ok(Dir::EAST),
        "north" => return Ok(Dir::NORTH),
        "west" => return Ok(Dir::WEST),
        "south" => return Ok(Dir::SOUTH),
        _ => {}
    }
    let p = parse_point(s)?;
    Dir::new(p.x, p.y)
}

/// One scale atom: "2^-12" stays an exact power of two, otherwise any
/// positive float literal.
fn parse_scale_atom(s: &str) -> Result<f64> {
    let v = if let Some(e) = s.strip_prefix("2^") {
        let e = e
            .parse::<i32>()
            .map_err(|err| Error::Parse(format!("bad exponent in {s:?}: {err}")))?;
        2.0f64.powi(e)
    } else {
        parse_f64(s)?
    };
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Parse(format!("scale {s:?} must be positive and finite")));
    }
    Ok(v)
}

/// Comma list of atoms; a "lo..hi" entry expands to every power of two
/// between its (power-of-two) endpoints, largest first.
fn parse_scales(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (parse_scale_atom(a)?, parse_scale_atom(b)?);
            let (hi, lo) = (a.max(b), a.min(b));
            let (eh, el) = (hi.log2(), lo.log2());
            if eh.fract() != 0.0 || el.fract() != 0.0 {
                return Err(Error::Parse(format!(
                    "range {item:?} needs power-of-two endpoints"
                )));
            }
            let mut e = eh as i32;
            while e >= el as i32 {
                out.push(2.0f64.powi(e));
                e -= 1;
            }
        } else {
            out.push(parse_scale_atom(item)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty scale list".into()));
    }
    Ok(out)
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing {what} (flag or config key)")))
}

fn load_config(path: &Option<PathBuf>) -> Result<KeyMap> {
    match path {
        Some(p) => KeyMap::load(p),
        None => Ok(KeyMap::empty()),
    }
}

fn load_dump(path: &Path) -> Result<LevelSet> {
    LevelSet::load(&std::fs::read_to_string(path)?)
}

fn write_manifest(
    path: &Path,
    command: &str,
    config: &[(&str, String)],
    derived: &[(&str, String)],
) -> Result<()> {
    let mut text = String::from("# porous manifest v1\n");
    let _ = writeln!(text, "command = {command}");
    for (k, v) in config {
        let _ = writeln!(text, "{k} = {v}");
    }
    for (k, v) in derived {
        let _ = writeln!(text, "# {k} = {v}");
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn manifest_path(explicit: &Option<PathBuf>, out: &Path) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let mut s = out.as_os_str().to_os_string();
        s.push(".manifest");
        PathBuf::from(s)
    })
}

fn cmd_build(a: BuildArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    cfg.check_keys(
        "build",
        &["depth", "center", "half_width", "pad", "schedule", "budget_lines", "budget_caps", "out"],
    )?;
    let depth = pick(a.depth, cfg.raw("depth"), "depth", parse_u32)?.unwrap_or(1);
    let center = pick(a.center, cfg.raw("center"), "center", |s| Ok(s.to_string()))?
        .unwrap_or_else(|| "0,0".into());
    let center = parse_point(&center)?;
    let half = pick(a.half_width, cfg.raw("half_width"), "half_width", parse_f64)?
        .unwrap_or(1.0 / 32.0);
    let pad = pick(a.pad, cfg.raw("pad"), "pad", parse_f64)?.unwrap_or(half);
    let schedule_text = pick(a.schedule, cfg.raw("schedule"), "schedule", |s| Ok(s.to_string()))?
        .unwrap_or_else(|| "diagonal".into());
    let order: BlockOrder = schedule_text.parse()?;
    let schedule = DirectionSchedule::new(AngleRule::Vdc2, order)?;
    let mut budgets = Budgets::default();
    if let Some(v) = pick(a.budget_lines, cfg.raw("budget_lines"), "budget_lines", parse_u64)? {
        budgets.max_lines_per_family = v;
    }
    if let Some(v) = pick(a.budget_caps, cfg.raw("budget_caps"), "budget_caps", parse_u64)? {
        budgets.max_capsules = v;
    }
    let out = require(a.out.or_else(|| cfg.raw("out").map(PathBuf::from)), "--out")?;

    let window = Window::new(center, half, pad)?;
    let t0 = Instant::now();
    let ls = LevelSet::build(window, schedule.clone(), budgets, depth)?;
    let build_ms = t0.elapsed().as_millis();
    let dump = ls.dump();
    std::fs::write(&out, &dump)?;

    let mut derived: Vec<(&str, String)> = Vec::new();
    let mut total = 0usize;
    let mut counts = String::new();
    for n in 1..=depth {
        let lvl = ls.level(n);
        total += lvl.caps.len();
        let _ = write!(counts, "{}{}:{}", if n > 1 { " " } else { "" }, lvl.ks.len(), lvl.caps.len());
    }
    derived.push(("levels_lines:capsules", counts));
    derived.push(("capsules_total", total.to_string()));
    derived.push(("dump_bytes", dump.len().to_string()));
    derived.push(("time_build_ms", build_ms.to_string()));
    write_manifest(
        &manifest_path(&a.manifest, &out),
        "build",
        &[
            ("depth", depth.to_string()),
            ("center", format!("{},{}", center.x, center.y)),
            ("half_width", half.to_string()),
            ("pad", pad.to_string()),
            ("schedule", schedule.block_order.to_string()),
            ("budget_lines", budgets.max_lines_per_family.to_string()),
            ("budget_caps", budgets.max_capsules.to_string()),
            ("out", out.display().to_string()),
        ],
        &derived,
    )?;
    println!("built depth {depth}: {total} capsules -> {}", out.display());
    Ok(true)
}

fn cmd_raster(a: RasterArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    cfg.check_keys("raster", &["input", "resolution", "mode", "level", "out"])?;
    let input = require(a.input.or_else(|| cfg.raw("input").map(PathBuf::from)), "--input")?;
    let resolution =
        pick(a.resolution, cfg.raw("resolution"), "resolution", parse_u32)?.unwrap_or(256);
    let mode_text = pick(a.mode, cfg.raw("mode"), "mode", |s| Ok(s.to_string()))?
        .unwrap_or_else(|| "membership".into());
    let mode: RasterMode = mode_text.parse()?;
    let out = require(a.out.or_else(|| cfg.raw("out").map(PathBuf::from)), "--out")?;

    let ls = load_dump(&input)?;
    let level = pick(a.level, cfg.raw("level"), "level", parse_u32)?.unwrap_or_else(|| ls.depth());
    let t0 = Instant::now();
    let raster = rasterize(&ls, level, resolution, mode)?;
    let bytes = raster.pgm_bytes();
    std::fs::write(&out, &bytes)?;
    write_manifest(
        &manifest_path(&a.manifest, &out),
        "raster",
        &[
            ("input", input.display().to_string()),
            ("resolution", resolution.to_string()),
            ("mode", mode_text.clone()),
            ("level", level.to_string()),
            ("out", out.display().to_string()),
        ],
        &[
            ("pgm_bytes", bytes.len().to_string()),
            ("time_raster_ms", t0.elapsed().as_millis().to_string()),
        ],
    )?;
    println!("rastered {mode_text} depth {level} at {resolution}px -> {}", out.display());
    Ok(true)
}

/// Largest dyadic ladder the window can host at this level: spacing(1)
/// down to spacing(level + 1), kept to scales the core fence allows at
/// the scan point.
fn default_scales(ls: &LevelSet, level: u32, p: Point) -> Vec<f64> {
    let room = ls.window.core().depth_inside(p);
    (6..=6 * (level + 1))
        .map(|e| 2.0f64.powi(-(e as i32)))
        .filter(|s| 2.0 * s <= room)
        .collect()
}

fn cmd_scan(a: ScanArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    cfg.check_keys("scan", &["input", "point", "mode", "direction", "scales", "level", "out"])?;
    let input = require(a.input.or_else(|| cfg.raw("input").map(PathBuf::from)), "--input")?;
    let point = parse_point(&require(
        a.point.or_else(|| cfg.raw("point").map(str::to_owned)),
        "--point",
    )?)?;
    let mode = pick(a.mode, cfg.raw("mode"), "mode", |s| Ok(s.to_string()))?
        .unwrap_or_else(|| "iso".into());
    let ls = load_dump(&input)?;
    let level = pick(a.level, cfg.raw("level"), "level", parse_u32)?.unwrap_or_else(|| ls.depth());
    let scales_text = a.scales.or_else(|| cfg.raw("scales").map(str::to_owned));
    let scales = match &scales_text {
        Some(s) => parse_scales(s)?,
        None => {
            let ladder = default_scales(&ls, level, point);
            if ladder.is_empty() {
                return Err(Error::Config(format!(
                    "no affordable default scales at ({}, {}); pass --scales",
                    point.x, point.y
                )));
            }
            ladder
        }
    };
    let direction_text = a.direction.or_else(|| cfg.raw("direction").map(str::to_owned));
    let records = match mode.as_str() {
        "iso" => scan_isotropic(&ls, level, point, &scales)?,
        "dir" => {
            let d = parse_direction(&require(direction_text.clone(), "--direction (dir mode)")?)?;
            scan_directional(&ls, level, point, d, &scales)?
        }
        other => {
            return Err(Error::Config(format!("unknown scan mode {other:?} (iso or dir)")));
        }
    };
    let mut csv = Vec::new();
    write_scan_csv(&mut csv, &records)?;
    let config_lines = [
        ("input", input.display().to_string()),
        ("point", format!("{},{}", point.x, point.y)),
        ("mode", mode.clone()),
        (
            "scales",
            scales_text.unwrap_or_else(|| {
                scales.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
            }),
        ),
        ("level", level.to_string()),
    ];
    match &a.out.or_else(|| cfg.raw("out").map(PathBuf::from)) {
        Some(out) => {
            std::fs::write(out, &csv)?;
            let mut lines: Vec<(&str, String)> = config_lines.to_vec();
            if let Some(d) = &direction_text {
                lines.push(("direction", d.clone()));
            }
            lines.push(("out", out.display().to_string()));
            write_manifest(
                &manifest_path(&a.manifest, out),
                "scan",
                &lines,
                &[("rows", records.len().to_string())],
            )?;
            println!("scanned {} scales at ({}, {}) -> {}", records.len(), point.x, point.y, out.display());
        }
        None => {
            print!("{}", String::from_utf8_lossy(&csv));
        }
    }
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    cfg.check_keys("verify", &["input", "suite", "samples", "seed", "out"])?;
    let input = require(a.input.or_else(|| cfg.raw("input").map(PathBuf::from)), "--input")?;
    let suite_text = pick(a.suite, cfg.raw("suite"), "suite", |s| Ok(s.to_string()))?
        .unwrap_or_else(|| "all".into());
    let suite: Suite = suite_text.parse()?;
    let samples = pick(a.samples, cfg.raw("samples"), "samples", parse_u32)?.unwrap_or(100);
    let seed = pick(a.seed, cfg.raw("seed"), "seed", parse_u64)?.unwrap_or(7);
    let ls = load_dump(&input)?;
    let t0 = Instant::now();
    let report = run_suites(&ls, suite, samples, seed)?;
    let text = report.render();
    print!("{text}");
    if let Some(out) = a.out.or_else(|| cfg.raw("out").map(PathBuf::from)) {
        std::fs::write(&out, &text)?;
        write_manifest(
            &manifest_path(&a.manifest, &out),
            "verify",
            &[
                ("input", input.display().to_string()),
                ("suite", suite_text),
                ("samples", samples.to_string()),
                ("seed", seed.to_string()),
                ("out", out.display().to_string()),
            ],
            &[("time_verify_ms", t0.elapsed().as_millis().to_string())],
        )?;
    }
    Ok(report.passed())
}

/// Dispatches a parsed command line. `Ok(false)` means a verify run had
/// property failures (exit 1); errors are configuration-grade (exit 2).
pub fn execute(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Build(a) => cmd_build(a),
        Cmd::Raster(a) => cmd_raster(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}
