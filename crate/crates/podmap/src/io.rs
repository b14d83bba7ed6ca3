//! Bundle persistence: a JSON manifest next to one raw little-endian f64
//! file per snapshot (`snap_NNNNNN.bin`), plus CSV decay reports. Writes are
//! byte-deterministic and reads are exact inverses.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Grid, Label, MaskKind, Snapshot, SnapshotSet, SubdomainMask};
use crate::maps::ParamTrace;
use crate::pod::DecayRecord;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GridSpec {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct LabelSpec {
    time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<f64>,
}

/// Persistable mask shapes. Custom node selections have no closed-form
/// description and are rejected at write time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MaskSpec {
    All,
    Disk { center: [f64; 2], radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl MaskSpec {
    fn from_mask(mask: &SubdomainMask) -> Result<MaskSpec> {
        match mask.kind() {
            MaskKind::All => Ok(MaskSpec::All),
            MaskKind::Disk { center, radius } => Ok(MaskSpec::Disk {
                center: *center,
                radius: *radius,
            }),
            MaskKind::Box { lo, hi } => Ok(MaskSpec::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            }),
            MaskKind::Custom => Err(Error::Format(
                "custom masks cannot be persisted in a bundle manifest".into(),
            )),
        }
    }

    pub fn to_mask(&self, grid: Arc<Grid>) -> Result<SubdomainMask> {
        match self {
            MaskSpec::All => Ok(SubdomainMask::all(grid)),
            MaskSpec::Disk { center, radius } => SubdomainMask::disk(grid, *center, *radius),
            MaskSpec::Box { lo, hi } => SubdomainMask::bounding_box(grid, lo.clone(), hi.clone()),
        }
    }
}

/// On-disk description of a snapshot bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub format_version: u32,
    grid: GridSpec,
    pub arity: usize,
    pub snapshot_count: usize,
    labels: Vec<LabelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<MaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<ParamTrace>,
}

/// A bundle loaded back into memory.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub set: SnapshotSet,
    pub trace: Option<ParamTrace>,
    pub mask: Option<SubdomainMask>,
}

fn snap_name(i: usize) -> String {
    format!("snap_{i:06}.bin")
}

/// Write a snapshot set (with optional trace and mask) into `dir`, creating
/// it if needed. Returns the manifest path. Output bytes are a pure function
/// of the input.
pub fn write_bundle(
    set: &SnapshotSet,
    trace: Option<&ParamTrace>,
    mask: Option<&SubdomainMask>,
    dir: &Path,
) -> Result<PathBuf> {
    if let Some(t) = trace {
        if t.len() != set.len() {
            return Err(Error::Contract(format!(
                "trace length {} does not match snapshot count {}",
                t.len(),
                set.len()
            )));
        }
    }
    if let Some(m) = mask {
        if **m.grid() != **set.grid() {
            return Err(Error::GridMismatch(
                "mask must live on the bundle grid".into(),
            ));
        }
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let grid = set.grid();
    let manifest = BundleManifest {
        format_version: FORMAT_VERSION,
        grid: GridSpec {
            origin: grid.origin().to_vec(),
            spacing: grid.spacing().to_vec(),
            counts: grid.counts().to_vec(),
        },
        arity: set.arity(),
        snapshot_count: set.len(),
        labels: set
            .iter()
            .map(|s| LabelSpec {
                time: s.label().time,
                param: s.label().param,
            })
            .collect(),
        mask: mask.map(MaskSpec::from_mask).transpose()?,
        trace: trace.cloned(),
    };

    for (i, s) in set.iter().enumerate() {
        let mut bytes = Vec::with_capacity(s.field().values().len() * 8);
        for v in s.field().values() {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let path = dir.join(snap_name(i));
        std::fs::write(&path, bytes).map_err(|e| Error::io(path.clone(), e))?;
    }

    let manifest_path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(&manifest_path, text).map_err(|e| Error::io(manifest_path.clone(), e))?;
    Ok(manifest_path)
}

/// Read a bundle back; exact inverse of [`write_bundle`].
pub fn read_bundle(dir: &Path) -> Result<Bundle> {
    let manifest_path = dir.join("manifest.json");
    let text =
        std::fs::read_to_string(&manifest_path).map_err(|e| Error::io(manifest_path.clone(), e))?;
    let manifest: BundleManifest = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("malformed manifest {}: {e}", manifest_path.display())))?;

    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported bundle format version {} (expected {})",
            manifest.format_version, FORMAT_VERSION
        )));
    }
    if manifest.labels.len() != manifest.snapshot_count {
        return Err(Error::Format(format!(
            "manifest lists {} labels for {} snapshots",
            manifest.labels.len(),
            manifest.snapshot_count
        )));
    }
    if let Some(t) = &manifest.trace {
        if t.len() != manifest.snapshot_count {
            return Err(Error::Format(format!(
                "manifest trace length {} does not match snapshot count {}",
                t.len(),
                manifest.snapshot_count
            )));
        }
        // Re-run construction-time validation on deserialized data.
        ParamTrace::new(
            t.family().clone(),
            t.params().to_vec(),
            t.skip_flags().to_vec(),
        )?;
    }

    let grid = match manifest.grid.counts.len() {
        1 => Grid::line(
            manifest.grid.origin[0],
            manifest.grid.spacing[0],
            manifest.grid.counts[0],
        )?,
        2 => Grid::rect(
            [manifest.grid.origin[0], manifest.grid.origin[1]],
            [manifest.grid.spacing[0], manifest.grid.spacing[1]],
            [manifest.grid.counts[0], manifest.grid.counts[1]],
        )?,
        d => {
            return Err(Error::Format(format!(
                "unsupported grid dimension {d} in manifest"
            )))
        }
    };

    let expected_bytes = grid.node_count() * manifest.arity * 8;
    let mut snaps = Vec::with_capacity(manifest.snapshot_count);
    for (i, label) in manifest.labels.iter().enumerate() {
        let path = dir.join(snap_name(i));
        let bytes = std::fs::read(&path).map_err(|e| Error::io(path.clone(), e))?;
        if bytes.len() != expected_bytes {
            return Err(Error::Format(format!(
                "{}: expected {expected_bytes} bytes, found {}",
                path.display(),
                bytes.len()
            )));
        }
        let values: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "{}: non-finite value in snapshot data",
                path.display()
            )));
        }
        let field = Field::from_values(grid.clone(), manifest.arity, values)?;
        snaps.push(Snapshot::new(
            field,
            Label {
                time: label.time,
                param: label.param,
            },
        )?);
    }

    let mask = manifest
        .mask
        .as_ref()
        .map(|m| m.to_mask(grid.clone()))
        .transpose()?;
    Ok(Bundle {
        set: SnapshotSet::new(snaps)?,
        trace: manifest.trace,
        mask,
    })
}

/// Read just the manifest of a bundle (no snapshot data).
pub fn read_manifest(dir: &Path) -> Result<BundleManifest> {
    let manifest_path = dir.join("manifest.json");
    let text =
        std::fs::read_to_string(&manifest_path).map_err(|e| Error::io(manifest_path.clone(), e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("malformed manifest {}: {e}", manifest_path.display())))
}

/// Replace the trace stored in a bundle's manifest in place.
pub fn update_trace(dir: &Path, trace: &ParamTrace) -> Result<()> {
    let mut manifest = read_manifest(dir)?;
    if trace.len() != manifest.snapshot_count {
        return Err(Error::Contract(format!(
            "trace length {} does not match snapshot count {}",
            trace.len(),
            manifest.snapshot_count
        )));
    }
    manifest.trace = Some(trace.clone());
    let manifest_path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(&manifest_path, text).map_err(|e| Error::io(manifest_path, e))
}

pub const DECAY_CSV_HEADER: &str =
    "index,eigenvalue,energy_fraction,cumulative_energy,nwidth_surrogate";

/// Write a decay report as CSV with 17-significant-digit values (enough for
/// exact f64 round trips) and LF line endings.
pub fn write_decay_csv(report: &[DecayRecord], path: &Path) -> Result<PathBuf> {
    if report.is_empty() {
        return Err(Error::Contract("decay report is empty".into()));
    }
    let mut out = String::from(DECAY_CSV_HEADER);
    out.push('\n');
    for r in report {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.index, r.eigenvalue, r.energy_fraction, r.cumulative_energy, r.nwidth_surrogate
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

/// Parse a decay CSV written by [`write_decay_csv`].
pub fn read_decay_csv(path: &Path) -> Result<Vec<DecayRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == DECAY_CSV_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "{}: bad decay CSV header {other:?}",
                path.display()
            )))
        }
    }
    let mut report = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Format(format!(
                "{}:{}: expected 5 columns, found {}",
                path.display(),
                lineno + 2,
                cols.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|e| {
                Error::Format(format!("{}:{}: bad number {s:?}: {e}", path.display(), lineno + 2))
            })
        };
        report.push(DecayRecord {
            index: cols[0].parse().map_err(|e| {
                Error::Format(format!(
                    "{}:{}: bad index {:?}: {e}",
                    path.display(),
                    lineno + 2,
                    cols[0]
                ))
            })?,
            eigenvalue: num(cols[1])?,
            energy_fraction: num(cols[2])?,
            cumulative_energy: num(cols[3])?,
            nwidth_surrogate: num(cols[4])?,
        });
    }
    Ok(report)
}
