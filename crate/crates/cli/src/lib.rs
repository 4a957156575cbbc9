//! The `ranloop` command line: contract loops, re-check stored
//! contractions, run the persistence oracle and render frames.

pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use ranloop::homology::{
    long_lived_h1_count, maxmin_subsample, pairs_to_json, persistence_table, rips_persistence_h1,
    sample_ran,
};
use ranloop::io::{
    certify, homotopy_file_from_json, homotopy_to_json, track_from_json, StoredCertificate,
};
use ranloop::moves::{contract_pipeline, PipelineMode, PipelineOptions, Resolution, DEFAULT_BOUND};
use ranloop::space::{Space, SpacePoint};
use ranloop::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_AMBIGUOUS: i32 = 3;
pub const EXIT_MODE: i32 = 4;

const EXIT_HELP: &str = "\
Exit codes:
  0  success (contract, verify: certificate passes)
  1  certificate fails
  2  unreadable or invalid input, bad arguments, or simplex budget exceeded
  3  the loop cannot be split into strands (ambiguous branching)
  4  the contraction needs more points than the mode allows";

#[derive(Parser, Debug)]
#[command(name = "ranloop", version, about = "Loop contractions in spaces of finite subsets", after_help = EXIT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contract a loop file to a constant loop and certify the result.
    Contract(ContractArgs),
    /// Recompute the certificate of a homotopy file.
    Verify(VerifyArgs),
    /// Rips persistence of random configurations.
    Homology(HomologyArgs),
    /// Render a track or homotopy file as SVG frames.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Inclusion,
    SimplyConnected,
}

#[derive(Args, Debug)]
struct ContractArgs {
    /// Track file holding a loop.
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Largest number of points per input sample.
    #[arg(long)]
    cap: usize,
    /// Basepoint: a coordinate, or EDGE:T on a graph. Defaults to 0 or vertex 0.
    #[arg(long)]
    basepoint: Option<String>,
    /// Deformation rows and time columns.
    #[arg(long, num_args = 2, value_names = ["ROWS", "COLS"], default_values_t = [64, 128])]
    resolution: Vec<usize>,
    /// Continuity bound, in distance per unit grid step.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: f64,
    /// Strand matching radius (twice the largest step by default).
    #[arg(long)]
    radius: Option<f64>,
    /// Output homotopy file; the certificate goes next to it.
    #[arg(long)]
    out: PathBuf,
    /// Directory for one SVG frame per homotopy row.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Homotopy file.
    input: PathBuf,
    /// Continuity bound; the stored one by default.
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceKind {
    Circle,
    Interval,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long, value_enum, default_value = "circle")]
    space: SpaceKind,
    #[arg(long, default_value_t = 1.0)]
    circumference: f64,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// JSON space description, overriding --space.
    #[arg(long)]
    space_file: Option<PathBuf>,
    /// Largest configuration size.
    #[arg(long)]
    n: usize,
    /// Number of sampled configurations.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_scale: f64,
    #[arg(long, default_value_t = 5.0)]
    gap_ratio: f64,
    /// Keep this many samples, chosen farthest-first.
    #[arg(long)]
    subsample: Option<usize>,
    /// Write the pairs as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the distance matrix as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Track or homotopy file.
    input: PathBuf,
    /// Output directory for the frames.
    #[arg(long)]
    svg: PathBuf,
    /// Point to circle in every frame.
    #[arg(long)]
    basepoint: Option<String>,
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AmbiguousBranching(_) => EXIT_AMBIGUOUS,
        Error::ModeViolation { .. } => EXIT_MODE,
        _ => EXIT_SCHEMA,
    }
}

/// Where `contract` puts the certificate for output `out`.
pub fn certificate_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".certificate.json");
    out.with_file_name(name)
}

fn parse_point(space: &Space, text: &str) -> Result<SpacePoint, Error> {
    let bad = || Error::InvalidArgument(format!("cannot read point {text:?}"));
    let p = match text.split_once(':') {
        Some((e, t)) => SpacePoint::Edge {
            edge: e.trim().parse().map_err(|_| bad())?,
            t: t.trim().parse().map_err(|_| bad())?,
        },
        None => SpacePoint::Coord(text.trim().parse().map_err(|_| bad())?),
    };
    space.canonical(p)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn frames(dir: &Path, frames: &[String]) -> Result<(), Error> {
    svg::write_frames(dir, frames)
        .map(|_| ())
        .map_err(|e| Error::InvalidArgument(format!("cannot write frames: {e}")))
}

fn contract(a: &ContractArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let track = track_from_json(&read(&a.input)?)?;
    let mode = match a.mode {
        Mode::Inclusion => PipelineMode::Inclusion { n: a.cap },
        Mode::SimplyConnected => PipelineMode::SimplyConnected { n: a.cap },
    };
    let b = match &a.basepoint {
        Some(text) => parse_point(track.space(), text)?,
        None => track.space().origin(),
    };
    let opts = PipelineOptions {
        resolution: Resolution::new(a.resolution[0], a.resolution[1]),
        radius: a.radius,
        bound: a.bound,
        ..PipelineOptions::default()
    };
    let (h, cert) = contract_pipeline(&track, mode, b, &opts)?;
    write(&a.out, &homotopy_to_json(&h, a.bound))?;
    let cert_path = certificate_path(&a.out);
    write(&cert_path, &(serde_json::to_string_pretty(&cert).expect("serializable") + "\n"))?;
    if let Some(dir) = &a.svg {
        frames(dir, &svg::homotopy_frames(&h, Some(b)))?;
    }
    writeln!(out, "strands: {}", cert.strands).ok();
    writeln!(out, "rows x columns: {} x {}", h.rows(), h.t_grid().len()).ok();
    writeln!(out, "max cardinality: {} (cap {})", cert.max_cardinality, cert.declared_cap).ok();
    writeln!(out, "implied Lipschitz bound: {} (bound {})", cert.continuity.implied_lipschitz, a.bound).ok();
    writeln!(out, "final row distance from basepoint: {}", cert.target_drift).ok();
    for s in &cert.stages {
        writeln!(out, "  stage {:<28} steps {:>4}  max cardinality {}", s.name, s.steps, s.max_cardinality).ok();
    }
    writeln!(out, "certificate: {}", cert_path.display()).ok();
    writeln!(out, "{}", if cert.pass { "PASS" } else { "FAIL" }).ok();
    Ok(if cert.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn matches(stored: &StoredCertificate, fresh: &StoredCertificate) -> bool {
    stored.max_cardinality == fresh.max_cardinality
        && stored.pass == fresh.pass
        && same(stored.max_adjacent_gap, fresh.max_adjacent_gap)
        && same(stored.implied_lipschitz, fresh.implied_lipschitz)
        && same(stored.endpoint_drift, fresh.endpoint_drift)
        && same(stored.basepoint_drift, fresh.basepoint_drift)
        && same(stored.final_spread, fresh.final_spread)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let file = homotopy_file_from_json(&read(&a.input)?)?;
    let h = file.to_homotopy()?;
    let bound = a.bound.unwrap_or(file.certificate.bound);
    let fresh = certify(&h, bound);
    let stored_at_bound = certify(&h, file.certificate.bound);
    let consistent = matches(&file.certificate, &stored_at_bound);
    writeln!(out, "rows x columns: {} x {}", h.rows(), h.t_grid().len()).ok();
    writeln!(out, "max cardinality: {} (cap {})", fresh.max_cardinality, h.cap()).ok();
    writeln!(out, "max adjacent gap: {}", fresh.max_adjacent_gap).ok();
    writeln!(out, "implied Lipschitz bound: {} (bound {bound})", fresh.implied_lipschitz).ok();
    writeln!(out, "row endpoint drift: {}", fresh.endpoint_drift).ok();
    writeln!(out, "last row spread: {}", fresh.final_spread).ok();
    writeln!(out, "stored certificate matches cells: {consistent}").ok();
    let pass = fresh.pass && consistent;
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).ok();
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn homology(a: &HomologyArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let space = match &a.space_file {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Error::Schema(e.to_string()))?,
        None => match a.space {
            SpaceKind::Circle => Space::circle(a.circumference)?,
            SpaceKind::Interval => Space::interval(a.length)?,
        },
    };
    if a.gap_ratio.is_nan() || a.gap_ratio <= 1.0 {
        return Err(Error::InvalidArgument("gap ratio must exceed 1".into()));
    }
    let mut cloud = sample_ran(&space, a.n, a.m, a.seed)?;
    if let Some(k) = a.subsample {
        cloud = maxmin_subsample(&cloud, k, a.seed);
    }
    if let Some(p) = &a.csv {
        write(p, &cloud.to_csv())?;
    }
    let pairs = rips_persistence_h1(&cloud, a.max_scale)?;
    if let Some(p) = &a.json {
        write(p, &(pairs_to_json(&pairs) + "\n"))?;
    }
    let shown: Vec<_> = pairs.iter().copied().filter(|p| p.dimension == 1 && p.persistence() > 0.0).collect();
    writeln!(out, "space: {space}, n = {}, samples = {}, seed = {}, max scale = {}", a.n, cloud.len(), a.seed, a.max_scale).ok();
    writeln!(out, "degree-one intervals of positive length:").ok();
    write!(out, "{}", persistence_table(&shown)).ok();
    writeln!(out, "long-lived H1 classes: {}", long_lived_h1_count(&pairs, a.gap_ratio)).ok();
    Ok(EXIT_PASS)
}

fn convert(a: &ConvertArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let text = read(&a.input)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    let rendered = if value.get("cells").is_some() {
        let h = homotopy_file_from_json(&text)?.to_homotopy()?;
        let b = a.basepoint.as_deref().map(|t| parse_point(h.space(), t)).transpose()?;
        svg::homotopy_frames(&h, b)
    } else {
        let t = track_from_json(&text)?;
        let b = a.basepoint.as_deref().map(|p| parse_point(t.space(), p)).transpose()?;
        vec![svg::frame_svg(t.space(), t.times(), t.configs(), b, "track")]
    };
    frames(&a.svg, &rendered)?;
    writeln!(out, "wrote {} frame(s) to {}", rendered.len(), a.svg.display()).ok();
    Ok(EXIT_PASS)
}

/// Run the command line on `args` (program name first), writing reports
/// to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Contract(a) => contract(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Homology(a) => homology(a, out),
        Command::Convert(a) => convert(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
