//! Per-snapshot map-parameter detection and the preprocessing schedule.
//!
//! The stretch and translation families are driven by the abscissa of the
//! field peak; the rotation family by the direction the wake energy points
//! in. Snapshots whose feature sits at the inlet (or whose signal is
//! degenerate) are skip-flagged and pass through preprocessing unchanged.

use crate::error::{Error, Result};
use crate::field::{Snapshot, SnapshotSet};
use crate::maps::{MapFamily, ParamTrace};

/// Result of peak detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakDetection {
    /// x-coordinate of the maximizing node (ties broken by smallest x).
    pub abscissa: f64,
    /// Set when the field is constant, in which case the abscissa is the
    /// left domain end.
    pub degenerate: bool,
}

/// Locate the abscissa of the peak of a scalar snapshot.
///
/// 2D grids reduce along x by taking the per-column maximum over y first.
pub fn detect_peak_abscissa(s: &Snapshot) -> Result<PeakDetection> {
    if s.field().arity() != 1 {
        return Err(Error::Contract(
            "peak detection requires a scalar snapshot".into(),
        ));
    }
    let grid = s.grid();
    let nx = grid.counts()[0];
    let ny = if grid.dim() == 2 { grid.counts()[1] } else { 1 };

    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let mut min_v = f64::INFINITY;
    for i in 0..nx {
        let mut col = f64::NEG_INFINITY;
        for j in 0..ny {
            col = col.max(s.field().value(j * nx + i, 0));
        }
        min_v = min_v.min(col);
        if col > best_v {
            best_v = col;
            best_i = i;
        }
    }
    let degenerate = best_v == min_v;
    let abscissa = if degenerate {
        grid.origin()[0]
    } else {
        grid.origin()[0] + best_i as f64 * grid.spacing()[0]
    };
    Ok(PeakDetection {
        abscissa,
        degenerate,
    })
}

/// Direction of the wake: angle of the kinetic-energy-weighted mean position
/// over the annulus `r_inner <= |x - center| <= r_outer`, in `(-pi, pi]`.
pub fn detect_wake_angle(
    s: &Snapshot,
    center: [f64; 2],
    r_inner: f64,
    r_outer: f64,
) -> Result<f64> {
    if s.field().arity() != 2 || s.grid().dim() != 2 {
        return Err(Error::Contract(
            "wake-angle detection requires a vector snapshot on a 2D grid".into(),
        ));
    }
    if !(r_inner > 0.0 && r_inner < r_outer) {
        return Err(Error::InvalidParameter(format!(
            "annulus radii must satisfy 0 < r_inner < r_outer, got ({r_inner}, {r_outer})"
        )));
    }
    let grid = s.grid();
    let w = grid.weights();
    let mut mx = 0.0;
    let mut my = 0.0;
    let mut energy = 0.0;
    for node in 0..grid.node_count() {
        let [x, y] = grid.coord(node);
        let dx = x - center[0];
        let dy = y - center[1];
        let r = dx.hypot(dy);
        if r < r_inner || r > r_outer {
            continue;
        }
        let u = s.field().value(node, 0);
        let v = s.field().value(node, 1);
        let e = w[node] * (u * u + v * v);
        energy += e;
        mx += e * dx;
        my += e * dy;
    }
    if energy <= 0.0 {
        return Err(Error::Degenerate(
            "no kinetic energy in the detection annulus".into(),
        ));
    }
    Ok(my.atan2(mx))
}

/// Detector choice for [`build_trace`].
#[derive(Debug, Clone, PartialEq)]
pub enum Detector {
    /// Peak abscissa of a scalar field (stretch/translation families).
    Peak,
    /// Energy-centroid angle over an annulus (rotation family).
    WakeAngle {
        center: [f64; 2],
        r_inner: f64,
        r_outer: f64,
    },
}

/// Schedule rule deciding which snapshots are preprocessed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkipRule {
    /// Peak detector: skip when the peak sits below `delta * L` from the
    /// left domain end.
    pub delta: f64,
    /// Angle detector: skip when the annulus kinetic energy is below this
    /// absolute floor.
    pub energy_floor: f64,
}

impl Default for SkipRule {
    fn default() -> Self {
        SkipRule {
            delta: 0.1,
            energy_floor: 1e-12,
        }
    }
}

/// Trace construction output: the trace plus per-snapshot warnings for
/// entries that were skip-flagged because the detector degenerated.
#[derive(Debug, Clone)]
pub struct TraceBuild {
    pub trace: ParamTrace,
    pub warnings: Vec<(usize, String)>,
}

/// Run the detector over a snapshot set and assemble the per-snapshot map
/// parameters for `family`, skip-flagging snapshots per the rule.
///
/// Detector failures never abort: the snapshot is skip-flagged with the
/// identity parameter and a warning is recorded.
pub fn build_trace(
    set: &SnapshotSet,
    detector: &Detector,
    family: &MapFamily,
    rule: &SkipRule,
) -> Result<TraceBuild> {
    let grid = set.grid();
    let length = grid.extent(0);
    let x0 = grid.origin()[0];
    let id = family.identity_param();

    let mut params = Vec::with_capacity(set.len());
    let mut skip = Vec::with_capacity(set.len());
    let mut warnings = Vec::new();

    for (i, s) in set.iter().enumerate() {
        match detector {
            Detector::Peak => {
                let det = detect_peak_abscissa(s)?;
                let rel = det.abscissa - x0;
                if det.degenerate || rel < rule.delta * length {
                    if det.degenerate {
                        warnings.push((i, "constant field, peak undefined".into()));
                    }
                    params.push(id);
                    skip.push(true);
                    continue;
                }
                let param = match family {
                    MapFamily::Mobius { length: l } => {
                        // Keep the parameter strictly inside the map domain;
                        // a peak on the outlet node clamps one cell in.
                        rel.min(l - grid.spacing()[0])
                    }
                    MapFamily::Translation { .. } => rel - length / 2.0,
                    MapFamily::Rotation { .. } => {
                        return Err(Error::Contract(
                            "the peak detector cannot drive the rotation family".into(),
                        ))
                    }
                };
                params.push(param);
                skip.push(false);
            }
            Detector::WakeAngle {
                center,
                r_inner,
                r_outer,
            } => {
                if !matches!(family, MapFamily::Rotation { .. }) {
                    return Err(Error::Contract(
                        "the wake-angle detector drives only the rotation family".into(),
                    ));
                }
                match annulus_energy_and_angle(s, *center, *r_inner, *r_outer)? {
                    Some((energy, angle)) if energy >= rule.energy_floor => {
                        params.push(angle);
                        skip.push(false);
                    }
                    other => {
                        if other.is_none() {
                            warnings.push((i, "no energy in the detection annulus".into()));
                        } else {
                            warnings.push((i, "annulus energy below the skip floor".into()));
                        }
                        params.push(id);
                        skip.push(true);
                    }
                }
            }
        }
    }

    Ok(TraceBuild {
        trace: ParamTrace::new(family.clone(), params, skip)?,
        warnings,
    })
}

fn annulus_energy_and_angle(
    s: &Snapshot,
    center: [f64; 2],
    r_inner: f64,
    r_outer: f64,
) -> Result<Option<(f64, f64)>> {
    match detect_wake_angle(s, center, r_inner, r_outer) {
        Ok(angle) => {
            // Recompute the energy for the skip rule.
            let grid = s.grid();
            let mut energy = 0.0;
            for node in 0..grid.node_count() {
                let [x, y] = grid.coord(node);
                let r = (x - center[0]).hypot(y - center[1]);
                if r < r_inner || r > r_outer {
                    continue;
                }
                let u = s.field().value(node, 0);
                let v = s.field().value(node, 1);
                energy += grid.weights()[node] * (u * u + v * v);
            }
            Ok(Some((energy, angle)))
        }
        Err(Error::Degenerate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
