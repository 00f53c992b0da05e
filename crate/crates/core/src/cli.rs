//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{bcdms_region, co1_region, OuterBounds};
use crate::error::Error;
use crate::gaussian::{
    b_star, capacity_region, g1_region, g2_region, g3_region_swept, g3p_region, g_region,
    in_capacity_regime_within,
};
use crate::geometry::{directed_gap_witness, subset_within, ConvexRegion};
use crate::model::{ChannelParams, Grids};

/// Coincidence / strict-inclusion tolerance in bits (grid-limited).
pub const DEFAULT_COMPARE_TOL: f64 = 5e-3;
/// Capacity-meets-bound tolerance in bits.
pub const DEFAULT_CAPACITY_TOL: f64 = 1e-3;
/// Gains are quoted to four decimals, so allow half a unit in the last one
/// when deciding whether `b` is inside `[1, b_star]`.
pub const DEFAULT_REGIME_TOL: f64 = 5e-5;

#[derive(Debug, Parser)]
#[command(
    name = "cograte",
    version,
    about = "Rate regions and outer bounds for the Gaussian cognitive Z-interference channel",
    after_help = "Tolerances: 1e-3 bits for capacity-meets-bound claims, 5e-3 bits for \
                  coincide / strict-inclusion claims (both grid-limited).\n\
                  COGRATE_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute region boundaries.
    Region(RegionArgs),
    /// Pairwise subset checks and directed gaps between regions.
    Compare(CompareArgs),
    /// Check whether the gain is in the capacity regime and measure the gap
    /// between G3' and the outer bound.
    CapacityCheck(CapacityArgs),
    /// Reproduce one of the preset figures.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Select {
    G,
    G1,
    G2,
    G3p,
    Capacity,
    Co1,
    Bcdms,
    Co2,
}

impl Select {
    pub fn name(self) -> &'static str {
        match self {
            Select::G => "g",
            Select::G1 => "g1",
            Select::G2 => "g2",
            Select::G3p => "g3p",
            Select::Capacity => "capacity",
            Select::Co1 => "co1",
            Select::Bcdms => "bcdms",
            Select::Co2 => "co2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Cognitive transmitter power.
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub p1: f64,
    /// Primary transmitter power.
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub p2: f64,
    /// Interference link gain.
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid points per scalar parameter.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Number of support directions over the quarter circle.
    #[arg(long, default_value_t = 721)]
    pub directions: usize,
    /// Grid points per covariance-split dimension (outer bounds).
    #[arg(long, default_value_t = 41)]
    pub cov_points: usize,
    /// Build G3' from a sweep over the dirty-paper coefficient instead of
    /// its closed-form optimum.
    #[arg(long)]
    pub lambda_sweep: bool,
    /// Seed for randomized steps; the Gaussian sweeps are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GridArgs {
    pub fn grids(&self) -> Grids {
        Grids {
            points: self.points,
            directions: self.directions,
            cov_points: self.cov_points,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Regions to compute.
    #[arg(long, value_delimiter = ',', required = true)]
    pub select: Vec<Select>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; with several regions in CSV format, one file per region
    /// named `<stem>_<region>.csv`. Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Regions to compare pairwise (at least two).
    #[arg(long, value_delimiter = ',', required = true)]
    pub select: Vec<Select>,
    /// Subset tolerance in bits.
    #[arg(long, default_value_t = DEFAULT_COMPARE_TOL)]
    pub tol: f64,
    /// JSON report path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Largest gap in bits for which G3' counts as meeting the outer bound.
    #[arg(long, default_value_t = DEFAULT_CAPACITY_TOL)]
    pub tol: f64,
    /// Slack on the regime endpoints for gains quoted to finite precision.
    #[arg(long, default_value_t = DEFAULT_REGIME_TOL)]
    pub regime_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    pub name: FigureName,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Replace the preset gains.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    pub b: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(..) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidChannel(_) | Error::ParamOutOfRange { .. } | Error::InvalidGrid(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Numerical(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    if let Ok(v) = std::env::var("COGRATE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                // fails only if a pool already exists, which is harmless
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("usage error: COGRATE_THREADS must be a positive integer, got {v:?}");
                return 2;
            }
        }
    }
    run(std::env::args_os())
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code. Results go to files or standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns what it would print.
pub fn execute(cmd: &Command) -> CliResult<String> {
    match cmd {
        Command::Region(a) => cmd_region(a),
        Command::Compare(a) => cmd_compare(a),
        Command::CapacityCheck(a) => cmd_capacity_check(a),
        Command::Figure(a) => cmd_figure(a),
    }
}

fn channel(a: &ChannelArgs) -> CliResult<ChannelParams> {
    Ok(ChannelParams::new(a.p1, a.p2, a.b)?)
}

fn grids(a: &GridArgs) -> CliResult<Grids> {
    let g = a.grids();
    g.validate()?;
    Ok(g)
}

/// Computes the selected regions in the given order; the outer bounds share
/// one computation.
pub fn compute_regions(
    ch: &ChannelParams,
    grids: &Grids,
    select: &[Select],
    lambda_sweep: bool,
) -> crate::Result<Vec<(Select, ConvexRegion)>> {
    let mut outer: Option<OuterBounds> = None;
    let mut out = Vec::with_capacity(select.len());
    for &s in select {
        let region = match s {
            Select::G => g_region(ch, grids)?,
            Select::G1 => g1_region(ch, grids)?,
            Select::G2 => g2_region(ch, grids)?,
            Select::G3p if lambda_sweep => g3_region_swept(ch, grids)?,
            Select::G3p => g3p_region(ch, grids)?,
            Select::Capacity => capacity_region(ch, grids)?,
            Select::Co1 => match &outer {
                Some(o) => o.co1.clone(),
                None => co1_region(ch, grids)?,
            },
            Select::Bcdms if outer.is_none() && !select.contains(&Select::Co2) => {
                bcdms_region(ch, grids)?
            }
            Select::Bcdms | Select::Co2 => {
                if outer.is_none() {
                    outer = Some(OuterBounds::compute(ch, grids)?);
                }
                let o = outer.as_ref().expect("just computed");
                if s == Select::Co2 {
                    o.co2.clone()
                } else {
                    o.bcdms.clone()
                }
            }
        };
        out.push((s, region));
    }
    Ok(out)
}

fn dedup_select(select: &[Select]) -> Vec<Select> {
    let mut seen = Vec::new();
    for &s in select {
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn cmd_region(a: &RegionArgs) -> CliResult<String> {
    let ch = channel(&a.channel)?;
    let g = grids(&a.grid)?;
    let select = dedup_select(&a.select);
    let regions = compute_regions(&ch, &g, &select, a.grid.lambda_sweep)?;
    let mut printed = String::new();
    match a.format {
        Format::Csv => {
            if regions.len() == 1 || a.out.is_none() {
                if regions.len() > 1 {
                    return Err(CliError::Usage(
                        "several regions in CSV format need --out".into(),
                    ));
                }
                emit(a.out.as_deref(), &to_csv(&regions[0].1), &mut printed)?;
            } else {
                let base = a.out.as_deref().expect("checked above");
                for (s, r) in &regions {
                    let path = suffixed(base, s.name(), "csv");
                    write_file(&path, &to_csv(r))?;
                    writeln!(printed, "{}", path.display()).unwrap();
                }
            }
        }
        Format::Json => {
            let json = regions_json(&ch, &g, &regions);
            emit(a.out.as_deref(), &json, &mut printed)?;
        }
        Format::Svg => {
            let curves: Vec<(String, &ConvexRegion)> =
                regions.iter().map(|(_, r)| (r.provenance.clone(), r)).collect();
            emit(a.out.as_deref(), &to_svg(&curves), &mut printed)?;
        }
    }
    Ok(printed)
}

fn emit(path: Option<&Path>, contents: &str, printed: &mut String) -> CliResult<()> {
    match path {
        Some(p) => {
            write_file(p, contents)?;
            writeln!(printed, "{}", p.display()).unwrap();
        }
        None => printed.push_str(contents),
    }
    Ok(())
}

fn suffixed(base: &Path, tag: &str, ext: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "region".into());
    base.with_file_name(format!("{stem}_{tag}.{ext}"))
}

#[derive(Serialize)]
struct Params {
    p1: f64,
    p2: f64,
    b: f64,
}

impl From<&ChannelParams> for Params {
    fn from(c: &ChannelParams) -> Self {
        Params {
            p1: c.p1,
            p2: c.p2,
            b: c.b,
        }
    }
}

#[derive(Serialize)]
struct RegionJson<'a> {
    name: &'static str,
    provenance: &'a str,
    boundary: Vec<[f64; 2]>,
}

fn regions_json(ch: &ChannelParams, grids: &Grids, regions: &[(Select, ConvexRegion)]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        params: Params,
        grids: &'a Grids,
        regions: Vec<RegionJson<'a>>,
    }
    let doc = Doc {
        params: ch.into(),
        grids,
        regions: regions
            .iter()
            .map(|(s, r)| RegionJson {
                name: s.name(),
                provenance: &r.provenance,
                boundary: r.boundary.iter().map(|p| [p.r1, p.r2]).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// One entry of the comparison report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub inner: &'static str,
    pub outer: &'static str,
    pub is_subset: bool,
    pub worst_direction_deg: f64,
    /// `max_d (h_outer(d) − h_inner(d))`.
    pub gap_bits: f64,
}

/// Every ordered pair of distinct regions.
pub fn compare_regions(regions: &[(Select, ConvexRegion)], tol: f64) -> crate::Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for (si, inner) in regions {
        for (so, outer) in regions {
            if si == so {
                continue;
            }
            let sub = subset_within(inner, outer, tol)?;
            let gap = directed_gap_witness(outer, inner)?;
            out.push(Comparison {
                inner: si.name(),
                outer: so.name(),
                is_subset: sub.is_subset,
                worst_direction_deg: sub.worst_direction_deg,
                gap_bits: gap.gap,
            });
        }
    }
    Ok(out)
}

fn cmd_compare(a: &CompareArgs) -> CliResult<String> {
    let ch = channel(&a.channel)?;
    let g = grids(&a.grid)?;
    let select = dedup_select(&a.select);
    if select.len() < 2 {
        return Err(CliError::Usage("compare needs at least two distinct regions".into()));
    }
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(CliError::Usage(format!("tolerance must be nonnegative, got {}", a.tol)));
    }
    let regions = compute_regions(&ch, &g, &select, a.grid.lambda_sweep)?;
    let comparisons = compare_regions(&regions, a.tol)?;

    #[derive(Serialize)]
    struct Report<'a> {
        params: Params,
        grids: &'a Grids,
        comparisons: Vec<Comparison>,
    }
    let mut json = serde_json::to_string_pretty(&Report {
        params: (&ch).into(),
        grids: &g,
        comparisons,
    })
    .expect("plain data serializes");
    json.push('\n');
    let mut printed = String::new();
    emit(a.out.as_deref(), &json, &mut printed)?;
    Ok(printed)
}

/// Outcome of the capacity-regime check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub b_star: f64,
    pub in_regime: bool,
    /// `max_d (h_co1(d) − h_G3'(d))`.
    pub gap_bits: f64,
    pub worst_direction_deg: f64,
    pub meets_bound: bool,
}

pub fn capacity_check(
    ch: &ChannelParams,
    grids: &Grids,
    tol: f64,
    regime_tol: f64,
    lambda_sweep: bool,
) -> crate::Result<CapacityReport> {
    let regions = compute_regions(ch, grids, &[Select::G3p, Select::Co1], lambda_sweep)?;
    let w = directed_gap_witness(&regions[1].1, &regions[0].1)?;
    Ok(CapacityReport {
        b_star: b_star(ch),
        in_regime: in_capacity_regime_within(ch, regime_tol),
        gap_bits: w.gap,
        worst_direction_deg: w.direction_deg,
        meets_bound: w.gap <= tol,
    })
}

fn cmd_capacity_check(a: &CapacityArgs) -> CliResult<String> {
    let ch = channel(&a.channel)?;
    let g = grids(&a.grid)?;
    let r = capacity_check(&ch, &g, a.tol, a.regime_tol, a.grid.lambda_sweep)?;
    let mut s = String::new();
    writeln!(s, "b_star = {:.9}", r.b_star).unwrap();
    writeln!(s, "in_regime = {}", r.in_regime).unwrap();
    writeln!(s, "gap_bits = {:.6e}", r.gap_bits).unwrap();
    writeln!(s, "worst_direction_deg = {:.3}", r.worst_direction_deg).unwrap();
    writeln!(s, "meets_bound = {} (tol {} bits)", r.meets_bound, a.tol).unwrap();
    Ok(s)
}

/// Settings of a preset figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub p1: f64,
    pub p2: f64,
    pub gains: Vec<f64>,
    pub select: Vec<Select>,
}

pub fn figure_preset(name: FigureName) -> FigurePreset {
    use Select::*;
    let (p2, gains, select) = match name {
        FigureName::Fig2 => (6.0, vec![1.0, 1.3628, 3.3628], vec![G3p, Co1]),
        FigureName::Fig3 => (6.0, vec![1.3628, 3.3628], vec![G, G1, G2, Co1]),
        FigureName::Fig4 => (6.0, vec![1.3628, 3.3628], vec![G1, G2, G3p, Co1]),
        FigureName::Fig5 => (0.0, vec![2.0], vec![Co1, Co2]),
    };
    FigurePreset {
        p1: 6.0,
        p2,
        gains,
        select,
    }
}

fn figure_tag(name: FigureName) -> &'static str {
    match name {
        FigureName::Fig2 => "fig2",
        FigureName::Fig3 => "fig3",
        FigureName::Fig4 => "fig4",
        FigureName::Fig5 => "fig5",
    }
}

fn cmd_figure(a: &FigureArgs) -> CliResult<String> {
    let mut preset = figure_preset(a.name);
    if let Some(b) = &a.b {
        if b.is_empty() {
            return Err(CliError::Usage("--b needs at least one gain".into()));
        }
        preset.gains = b.clone();
    }
    let g = grids(&a.grid)?;
    let tag = figure_tag(a.name);
    let mut printed = String::new();
    let mut curves: Vec<(String, ConvexRegion)> = Vec::new();
    for &b in &preset.gains {
        let ch = ChannelParams::new(preset.p1, preset.p2, b)?;
        for (s, r) in compute_regions(&ch, &g, &preset.select, a.grid.lambda_sweep)? {
            let path = a.out_dir.join(format!("{tag}_{}_b{b}.csv", s.name()));
            write_file(&path, &to_csv(&r))?;
            writeln!(printed, "{}", path.display()).unwrap();
            curves.push((format!("{} b={b}", s.name()), r));
        }
    }
    let svg_path = a.out_dir.join(format!("{tag}.svg"));
    let refs: Vec<(String, &ConvexRegion)> = curves.iter().map(|(l, r)| (l.clone(), r)).collect();
    write_file(&svg_path, &to_svg(&refs))?;
    writeln!(printed, "{}", svg_path.display()).unwrap();
    Ok(printed)
}

/// `x` with 9 significant digits; magnitudes below `1e-12` print as `0`.
pub fn sig9(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Boundary polyline as CSV: header `r1_bits,r2_bits`, LF line endings.
pub fn to_csv(r: &ConvexRegion) -> String {
    let mut s = String::from("r1_bits,r2_bits\n");
    for p in &r.boundary {
        writeln!(s, "{},{}", sig9(p.r1), sig9(p.r2)).unwrap();
    }
    s
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// 800×600 overlay of boundary polylines with 0.25-bit ticks and a legend.
pub fn to_svg(curves: &[(String, &ConvexRegion)]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 20.0;
    const B: f64 = 50.0;
    const TICK: f64 = 0.25;

    let (mut xmax, mut ymax) = (0.0f64, 0.0f64);
    for (_, r) in curves {
        for p in &r.boundary {
            xmax = xmax.max(p.r1);
            ymax = ymax.max(p.r2);
        }
    }
    let xmax = ((xmax / TICK).ceil() * TICK).max(TICK);
    let ymax = ((ymax / TICK).ceil() * TICK).max(TICK);
    let sx = |x: f64| L + x / xmax * (W - L - R);
    let sy = |y: f64| H - B - y / ymax * (H - T - B);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{L}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{L}" y1="{:.2}" x2="{L}" y2="{T}"/></g>"#,
        H - B,
        W - R,
        H - B,
        H - B
    )
    .unwrap();
    s.push_str(r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    s.push('\n');
    let nx = (xmax / TICK).round() as usize;
    for i in 0..=nx {
        let v = i as f64 * TICK;
        let x = sx(v);
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.2}</text>"#,
            H - B,
            H - B + 5.0,
            H - B + 18.0
        )
        .unwrap();
    }
    let ny = (ymax / TICK).round() as usize;
    for i in 0..=ny {
        let v = i as f64 * TICK;
        let y = sy(v);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{L}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            L - 5.0,
            L - 8.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">R1 (bits)</text><text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">R2 (bits)</text>"#,
        (L + W - R) / 2.0,
        H - 10.0,
        (T + H - B) / 2.0,
        (T + H - B) / 2.0
    )
    .unwrap();
    s.push_str("</g>\n");

    for (k, (_, r)) in curves.iter().enumerate() {
        let pts: Vec<String> = r
            .boundary
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.r1), sy(p.r2)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[k % PALETTE.len()],
            pts.join(" ")
        )
        .unwrap();
    }

    s.push_str(r#"<g font-family="sans-serif" font-size="11">"#);
    s.push('\n');
    for (k, (label, r)) in curves.iter().enumerate() {
        let y = T + 10.0 + 16.0 * k as f64;
        let x = W - R - 330.0;
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 20.0,
            PALETTE[k % PALETTE.len()],
            x + 25.0,
            y + 4.0,
            xml_escape(&format!("{label}: {}", r.provenance))
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}
