//! Command-line pipeline: generate -> align -> preprocess -> pod/greedy ->
//! compare. Every failure maps to one exit code (2 usage, 3 data/contract,
//! 4 I/O) with a single-line diagnostic on stderr.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::align::{build_trace, Detector, SkipRule};
use crate::error::{Error, Result};
use crate::field::{Field, Grid, MaskKind, SnapshotSet, SubdomainMask};
use crate::gen::{
    burgers_1d, lagrange_sampling, rotating_wake_2d, traveling_pulse_2d, CylinderKinematics,
    PulseSpec, WakeSpec,
};
use crate::io::{read_bundle, read_decay_csv, update_trace, write_bundle, write_decay_csv};
use crate::maps::{pullback_set, MapFamily};
use crate::pod::{decay_report, nwidth_surrogate, pod, pod_greedy, DecayRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "podmap", version, about = "Snapshot preprocessing and POD decay analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum Case {
    Burgers,
    FsiPulse,
    RotatingWake,
}

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum Family {
    Translation,
    Mobius,
    Rotation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a snapshot bundle from one of the built-in cases.
    Generate {
        #[arg(long, value_enum)]
        case: Case,
        /// Reynolds-like parameter for a single bundle.
        #[arg(long)]
        re: Option<f64>,
        /// Parametric sweep `min,max,count`; writes one bundle per sample
        /// into numbered subdirectories of --out.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect per-snapshot map parameters and store the trace in the
    /// bundle manifest.
    Align {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum)]
        family: Family,
        /// Peak detector: skip snapshots whose peak sits below this
        /// fraction of the domain length.
        #[arg(long, default_value_t = 0.1)]
        skip_delta: f64,
        /// Disk mask `disk:cx,cy,r`; required for the rotation family
        /// unless the bundle already stores one.
        #[arg(long)]
        mask: Option<String>,
    },
    /// Pull every snapshot back through its stored trace entry.
    Preprocess {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compress a bundle and write its eigenvalue-decay report.
    Pod {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Greedy compression across parametrized bundles; the report
    /// concatenates the per-stage spectra.
    Greedy {
        /// Comma-separated bundle directories in sampling order.
        #[arg(long, value_delimiter = ',')]
        bundles: Vec<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Compare raw and preprocessed decay reports.
    Compare {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long)]
        pre: PathBuf,
    },
}

/// Run the CLI and return its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let line = e
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("usage error")
                .to_string();
            eprintln!("{line}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            eprintln!("{e}");
            match e {
                Error::Io { .. } => EXIT_IO,
                _ => EXIT_DATA,
            }
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult = std::result::Result<(), CliError>;

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Generate {
            case,
            re,
            params,
            out,
        } => generate(case, re, params, &out),
        Command::Align {
            bundle,
            family,
            skip_delta,
            mask,
        } => align(&bundle, family, skip_delta, mask),
        Command::Preprocess { bundle, out } => preprocess(&bundle, &out),
        Command::Pod {
            bundle,
            nmax,
            tol,
            report,
        } => pod_cmd(&bundle, nmax, tol, &report),
        Command::Greedy { bundles, report } => greedy_cmd(&bundles, &report),
        Command::Compare { raw, pre } => compare_cmd(&raw, &pre),
    }
}

/// Default Burgers case: a decaying pulse advected into quiescent fluid.
pub fn burgers_case(nu: f64) -> Result<SnapshotSet> {
    let grid = Grid::line(0.0, 1.0 / 1023.0, 1024)?;
    let initial = Field::scalar_from_fn(grid.clone(), |x, _| {
        0.8 * (-((x - 0.15) / 0.03).powi(2)).exp()
    })?;
    // 150 snapshots: the initial state plus one every 20 steps.
    burgers_1d(nu, &grid, 4e-4, 149.0 * 20.0 * 4e-4, &initial, 0.0, 20)
}

/// Default channel-pulse case: 110 snapshots on a 256 x 64 grid.
pub fn pulse_case(speed: f64) -> Result<SnapshotSet> {
    let spec = PulseSpec::new(1e3, 2.5e-3, 6.0, speed, 0.3)?;
    let grid = Grid::rect([0.0, 0.0], [6.0 / 255.0, 1.0 / 63.0], [256, 64])?;
    traveling_pulse_2d(&spec, &grid, 1e-4, 1.09e-2)
}

/// Default rotating-wake case on a disk mask of seven cylinder radii.
pub fn wake_case(re: Option<f64>, param: Option<f64>) -> Result<(SnapshotSet, SubdomainMask)> {
    let k = CylinderKinematics::desk_scale();
    let spec = match re {
        Some(re) => WakeSpec::for_reynolds(&k, re)?,
        None => WakeSpec::for_kinematics(&k),
    };
    let n = 129;
    let h = 16.0 / (n - 1) as f64;
    let grid = Grid::rect([-8.0, -8.0], [h, h], [n, n])?;
    let mask = SubdomainMask::disk(grid.clone(), [0.0, 0.0], 7.0 * k.radius)?;
    let wake = rotating_wake_2d(&k, &spec, &grid, &mask, 0.25, k.t_final, param)?;
    Ok((wake.set, mask))
}

fn generate_one(case: Case, re: Option<f64>, param: Option<f64>, dir: &Path) -> CliResult {
    match case {
        Case::Burgers => {
            let nu = match param {
                Some(mu) => 1.0 / mu,
                None => re.map(|r| 1.0 / r).unwrap_or(1e-3),
            };
            let set = burgers_case(nu)?;
            write_bundle(&set, None, None, dir)?;
        }
        Case::FsiPulse => {
            // Map the Reynolds-like parameter onto the transport speed so a
            // sweep produces genuinely different pulses.
            let speed = match param.or(re) {
                Some(mu) => 10.0 * mu / 3.0,
                None => 500.0,
            };
            let set = pulse_case(speed)?;
            write_bundle(&set, None, None, dir)?;
        }
        Case::RotatingWake => {
            let (set, mask) = wake_case(param.or(re), param)?;
            write_bundle(&set, None, Some(&mask), dir)?;
        }
    }
    Ok(())
}

fn generate(case: Case, re: Option<f64>, params: Option<String>, out: &Path) -> CliResult {
    match params {
        None => generate_one(case, re, None, out),
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            let parse = |s: &str| -> std::result::Result<f64, CliError> {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("--params: bad number {s:?}")))
            };
            if parts.len() != 3 {
                return Err(CliError::Usage(
                    "--params expects min,max,count".into(),
                ));
            }
            let (min, max) = (parse(parts[0])?, parse(parts[1])?);
            let n: usize = parts[2].trim().parse().map_err(|_| {
                CliError::Usage(format!("--params: bad count {:?}", parts[2]))
            })?;
            let samples = lagrange_sampling(min, max, n)?;
            for (i, mu) in samples.iter().enumerate() {
                generate_one(case, re, Some(*mu), &out.join(format!("param_{i:03}")))?;
            }
            Ok(())
        }
    }
}

fn parse_disk_mask(spec: &str) -> std::result::Result<([f64; 2], f64), CliError> {
    let body = spec
        .strip_prefix("disk:")
        .ok_or_else(|| CliError::Usage(format!("--mask expects disk:cx,cy,r, got {spec:?}")))?;
    let nums: Vec<f64> = body
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--mask: bad numbers in {spec:?}")))?;
    if nums.len() != 3 {
        return Err(CliError::Usage("--mask expects disk:cx,cy,r".into()));
    }
    Ok(([nums[0], nums[1]], nums[2]))
}

fn align(dir: &Path, family: Family, skip_delta: f64, mask_arg: Option<String>) -> CliResult {
    let bundle = read_bundle(dir)?;
    let grid = bundle.set.grid().clone();

    let mask = match &mask_arg {
        Some(spec) => {
            let (center, radius) = parse_disk_mask(spec)?;
            Some(SubdomainMask::disk(grid.clone(), center, radius)?)
        }
        None => bundle.mask.clone(),
    };

    let rule = SkipRule {
        delta: skip_delta,
        ..SkipRule::default()
    };
    let (map_family, detector) = match family {
        Family::Translation => (
            MapFamily::Translation { periodic: false },
            Detector::Peak,
        ),
        Family::Mobius => (
            MapFamily::Mobius {
                length: grid.extent(0),
            },
            Detector::Peak,
        ),
        Family::Rotation => {
            let disk = mask.as_ref().and_then(|m| match *m.kind() {
                MaskKind::Disk { center, radius } => Some((center, radius)),
                _ => None,
            });
            let (center, radius) = disk.ok_or_else(|| {
                CliError::Usage(
                    "rotation alignment needs a disk mask (--mask disk:cx,cy,r)".into(),
                )
            })?;
            (
                MapFamily::Rotation { center },
                Detector::WakeAngle {
                    center,
                    r_inner: 0.2 * radius,
                    r_outer: radius,
                },
            )
        }
    };

    let built = build_trace(&bundle.set, &detector, &map_family, &rule)?;
    for (i, msg) in &built.warnings {
        eprintln!("warning: snapshot {i} skipped: {msg}");
    }
    if mask_arg.is_some() {
        // A mask given on the command line becomes part of the bundle.
        write_bundle(&bundle.set, Some(&built.trace), mask.as_ref(), dir)?;
    } else {
        update_trace(dir, &built.trace)?;
    }
    Ok(())
}

fn preprocess(dir: &Path, out: &Path) -> CliResult {
    let bundle = read_bundle(dir)?;
    let trace = bundle.trace.as_ref().ok_or_else(|| {
        CliError::Lib(Error::Contract(
            "bundle carries no trace; run `align` first".into(),
        ))
    })?;
    let mask = effective_mask(&bundle.mask, bundle.set.grid());
    let pre = pullback_set(&bundle.set, trace, &mask)?;
    // The trace is consumed; the mask still describes the data.
    write_bundle(&pre, None, bundle.mask.as_ref(), out)?;
    Ok(())
}

fn effective_mask(stored: &Option<SubdomainMask>, grid: &Arc<Grid>) -> SubdomainMask {
    stored
        .clone()
        .unwrap_or_else(|| SubdomainMask::all(grid.clone()))
}

fn pod_cmd(dir: &Path, nmax: Option<usize>, tol: Option<f64>, report: &Path) -> CliResult {
    let bundle = read_bundle(dir)?;
    let mask = effective_mask(&bundle.mask, bundle.set.grid());
    let result = pod(&bundle.set, &mask, nmax, tol)?;
    write_decay_csv(&decay_report(&result), report)?;
    Ok(())
}

fn greedy_cmd(dirs: &[PathBuf], report: &Path) -> CliResult {
    if dirs.is_empty() {
        return Err(CliError::Usage("--bundles needs at least one directory".into()));
    }
    let mut sets = Vec::with_capacity(dirs.len());
    let mut mask = None;
    for d in dirs {
        let bundle = read_bundle(d)?;
        if mask.is_none() {
            mask = bundle.mask.clone();
        }
        sets.push(bundle.set);
    }
    let mask = effective_mask(&mask, sets[0].grid());
    let state = pod_greedy(&sets, &mask, None, None)?;

    // Concatenated per-stage spectra with a global running index.
    let mut rows = Vec::new();
    let mut index = 0;
    for stage in &state.stages {
        let total: f64 = stage.eigenvalues.iter().sum();
        let mut cum = 0.0;
        for (i, l) in stage.eigenvalues.iter().enumerate() {
            index += 1;
            let frac = if total > 0.0 { l / total } else { 0.0 };
            cum += frac;
            rows.push(DecayRecord {
                index,
                eigenvalue: *l,
                energy_fraction: frac,
                cumulative_energy: cum,
                nwidth_surrogate: nwidth_surrogate(&stage.eigenvalues, i + 1),
            });
        }
    }
    write_decay_csv(&rows, report)?;
    println!(
        "greedy: {} stages, {} modes",
        state.stages.len(),
        state.modes.len()
    );
    Ok(())
}

/// Smallest mode count whose n-width surrogate is at or below `target`.
fn modes_to_target(report: &[DecayRecord], target: f64) -> usize {
    report
        .iter()
        .find(|r| r.nwidth_surrogate <= target)
        .map(|r| r.index)
        .unwrap_or(report.len())
}

fn compare_cmd(raw_path: &Path, pre_path: &Path) -> CliResult {
    let raw = read_decay_csv(raw_path)?;
    let pre = read_decay_csv(pre_path)?;
    if raw.is_empty() || pre.is_empty() {
        return Err(CliError::Lib(Error::Format("empty decay report".into())));
    }
    for (r, p) in raw.iter().zip(&pre) {
        let ratio = if r.eigenvalue > 0.0 {
            p.eigenvalue / r.eigenvalue
        } else {
            f64::NAN
        };
        println!(
            "index {:>3}: raw {:.6e}  pre {:.6e}  ratio {:.3e}",
            r.index, r.eigenvalue, p.eigenvalue, ratio
        );
    }
    let target = 1e-3;
    let n_raw = modes_to_target(&raw, target);
    let n_pre = modes_to_target(&pre, target);
    println!(
        "modes to surrogate {target:.0e}: raw {n_raw}, preprocessed {n_pre}, reduction {}",
        n_raw as i64 - n_pre as i64
    );
    Ok(())
}
