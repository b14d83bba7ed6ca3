//! Parametrized invertible self-maps of the domain and the pullback
//! operation that composes a snapshot with an inverse map.
//!
//! Three families are supported: rotations about a fixed center, a rational
//! stretch of an interval that fixes both endpoints while moving an interior
//! point to the middle, and (optionally periodic) translations. Each map has
//! a closed-form inverse of the same kind.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Grid, MaskKind, Snapshot, SnapshotSet, SubdomainMask};

/// Tolerance for snapping an interpolation coordinate onto a grid node.
/// Preimages that land within this fraction of a cell from a node take the
/// node value exactly, so grid-aligned maps are permutations of the samples.
const NODE_SNAP: f64 = 1e-9;

/// Inverse rotation about `center`: rotate `p` by `+theta`.
pub fn rotation_inverse(theta: f64, center: [f64; 2], p: [f64; 2]) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    let x = p[0] - center[0];
    let y = p[1] - center[1];
    [center[0] + c * x - s * y, center[1] + s * x + c * y]
}

/// Inverse of the peak-recentering stretch on `[0, length]`.
///
/// Fixes 0 and `length`, maps the midpoint to `gamma`, and is strictly
/// increasing. Requires `0 < gamma < length` so the denominator stays
/// positive on the whole interval.
pub fn mobius_inverse(gamma: f64, length: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < length) {
        return Err(Error::InvalidParameter(format!(
            "stretch parameter must lie strictly inside (0, {length}), got {gamma}"
        )));
    }
    let half = length / 2.0;
    // The fixed points and the midpoint image are analytic identities;
    // return them directly so they hold exactly in floating point.
    if x == 0.0 || x == length {
        return Ok(x);
    }
    if x == half {
        return Ok(gamma);
    }
    Ok(half * x * gamma / (x * (gamma - half) + half * (length - gamma)))
}

/// Inverse translation: `x + shift`, wrapped into `[0, length)` when
/// periodic.
pub fn translation_inverse(shift: f64, x: f64, length: f64, periodic: bool) -> f64 {
    let y = x + shift;
    if periodic {
        y.rem_euclid(length)
    } else {
        y
    }
}

/// A smooth invertible self-map of the domain carrying its scalar parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum TransportMap {
    Rotation { center: [f64; 2], theta: f64 },
    Mobius { length: f64, gamma: f64 },
    Translation { shift: [f64; 2], periodic: bool },
}

impl TransportMap {
    /// The inverse map, of the same kind.
    pub fn inverse(&self) -> TransportMap {
        match *self {
            TransportMap::Rotation { center, theta } => TransportMap::Rotation {
                center,
                theta: -theta,
            },
            // The stretch family is closed under inversion: the map sending
            // the midpoint to gamma inverts to the one sending it to
            // length - gamma.
            TransportMap::Mobius { length, gamma } => TransportMap::Mobius {
                length,
                gamma: length - gamma,
            },
            TransportMap::Translation { shift, periodic } => TransportMap::Translation {
                shift: [-shift[0], -shift[1]],
                periodic,
            },
        }
    }

    /// True for the exact identity parameters (theta = 0, gamma = length/2,
    /// shift = 0); pullback of an identity map is bit-exact.
    pub fn is_identity(&self) -> bool {
        match *self {
            TransportMap::Rotation { theta, .. } => theta == 0.0,
            TransportMap::Mobius { length, gamma } => gamma == length / 2.0,
            TransportMap::Translation { shift, .. } => shift == [0.0, 0.0],
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TransportMap::Rotation { theta, .. } => {
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter("rotation angle must be finite".into()));
                }
            }
            TransportMap::Mobius { length, gamma } => {
                if !(gamma > 0.0 && gamma < length) {
                    return Err(Error::InvalidParameter(format!(
                        "stretch parameter must lie strictly inside (0, {length}), got {gamma}"
                    )));
                }
            }
            TransportMap::Translation { shift, .. } => {
                if !shift[0].is_finite() || !shift[1].is_finite() {
                    return Err(Error::InvalidParameter("translation shift must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Preimage of a grid point under the map (the point the pullback
    /// samples the input field at).
    fn inverse_point(&self, p: [f64; 2], grid: &Grid) -> Result<[f64; 2]> {
        Ok(match *self {
            TransportMap::Rotation { center, theta } => rotation_inverse(theta, center, p),
            TransportMap::Mobius { length, gamma } => {
                let x0 = grid.origin()[0];
                let x = mobius_inverse(gamma, length, p[0] - x0)?;
                [x0 + x, p[1]]
            }
            TransportMap::Translation { shift, periodic } => {
                let mut q = [p[0] + shift[0], p[1] + shift[1]];
                if periodic {
                    for a in 0..grid.dim() {
                        let o = grid.origin()[a];
                        q[a] = o + (q[a] - o).rem_euclid(grid.period(a));
                    }
                }
                q
            }
        })
    }
}

/// Linear/bilinear sample of a field at an arbitrary point.
///
/// Returns `None` when the point falls outside the (non-periodic) domain.
/// Coordinates within `NODE_SNAP` of a node snap onto it, so values at node
/// preimages are reproduced exactly.
fn sample(field: &Field, p: [f64; 2], periodic: bool, out: &mut [f64]) -> bool {
    let grid = field.grid();
    let dim = grid.dim();
    let mut idx0 = [0usize; 2];
    let mut idx1 = [0usize; 2];
    let mut frac = [0.0f64; 2];
    for a in 0..dim {
        let n = grid.counts()[a];
        let s = (p[a] - grid.origin()[a]) / grid.spacing()[a];
        if periodic {
            let s = s.rem_euclid(n as f64);
            let i = s.floor();
            let mut t = s - i;
            let mut i0 = i as usize % n;
            if t < NODE_SNAP {
                t = 0.0;
            } else if t > 1.0 - NODE_SNAP {
                i0 = (i0 + 1) % n;
                t = 0.0;
            }
            idx0[a] = i0;
            idx1[a] = (i0 + 1) % n;
            frac[a] = t;
        } else {
            let top = (n - 1) as f64;
            if s < -NODE_SNAP || s > top + NODE_SNAP {
                return false;
            }
            let s = s.clamp(0.0, top);
            let mut i0 = s.floor() as usize;
            let mut t = s - i0 as f64;
            if t < NODE_SNAP {
                t = 0.0;
            } else if t > 1.0 - NODE_SNAP {
                i0 += 1;
                t = 0.0;
            }
            if i0 >= n - 1 {
                i0 = n - 1;
                t = 0.0;
                idx0[a] = i0;
                idx1[a] = i0;
            } else {
                idx0[a] = i0;
                idx1[a] = i0 + 1;
            }
            frac[a] = t;
        }
    }

    let arity = field.arity();
    match dim {
        1 => {
            let (i0, i1, t) = (idx0[0], idx1[0], frac[0]);
            for c in 0..arity {
                let v0 = field.value(i0, c);
                let v1 = field.value(i1, c);
                out[c] = if t == 0.0 { v0 } else { v0 + t * (v1 - v0) };
            }
        }
        _ => {
            let nx = grid.counts()[0];
            let (tx, ty) = (frac[0], frac[1]);
            for c in 0..arity {
                let v00 = field.value(idx0[1] * nx + idx0[0], c);
                let v10 = field.value(idx0[1] * nx + idx1[0], c);
                let v01 = field.value(idx1[1] * nx + idx0[0], c);
                let v11 = field.value(idx1[1] * nx + idx1[0], c);
                let lo = v00 + tx * (v10 - v00);
                let hi = v01 + tx * (v11 - v01);
                out[c] = if ty == 0.0 { lo } else { lo + ty * (hi - lo) };
            }
        }
    }
    true
}

/// Compose a snapshot with the inverse map: the output value at node `x` is
/// the input interpolated at the preimage of `x`.
///
/// For the rotation family the mask must be a disk centered at the rotation
/// center (the disk maps onto itself), and vector components are rotated
/// along with positions so the field transforms covariantly. Preimages
/// outside the mask or the domain fill with zero. The label is preserved.
pub fn pullback(s: &Snapshot, map: &TransportMap, mask: &SubdomainMask) -> Result<Snapshot> {
    map.validate()?;
    if **s.grid() != **mask.grid() {
        return Err(Error::GridMismatch(
            "snapshot and mask must share one grid".into(),
        ));
    }
    if map.is_identity() {
        return Ok(s.clone());
    }

    let grid = s.grid().clone();
    let arity = s.field().arity();

    // Component rotation for covariant vector transport; the disk-mask
    // contract for rotations is checked here.
    let mut comp_rot: Option<(f64, f64)> = None;
    let mut disk: Option<([f64; 2], f64)> = None;
    if let TransportMap::Rotation { center, theta } = *map {
        match *mask.kind() {
            MaskKind::Disk { center: mc, radius }
                if (mc[0] - center[0]).abs() <= 1e-12 && (mc[1] - center[1]).abs() <= 1e-12 =>
            {
                disk = Some((mc, radius));
            }
            _ => {
                return Err(Error::Contract(
                    "rotation pullback requires a disk mask centered at the rotation center"
                        .into(),
                ));
            }
        }
        if arity == 2 {
            let (sin, cos) = (-theta).sin_cos();
            comp_rot = Some((sin, cos));
        }
    }
    let periodic = matches!(map, TransportMap::Translation { periodic: true, .. });

    let mut values = vec![0.0; grid.node_count() * arity];
    let mut buf = [0.0f64; 2];
    for node in 0..grid.node_count() {
        if !mask.contains(node) {
            continue;
        }
        let p = map.inverse_point(grid.coord(node), &grid)?;
        if let Some((c, r)) = disk {
            if (p[0] - c[0]).hypot(p[1] - c[1]) > r + NODE_SNAP * grid.spacing()[0] {
                continue;
            }
        }
        if !sample(s.field(), p, periodic, &mut buf[..arity]) {
            continue;
        }
        let base = node * arity;
        match comp_rot {
            Some((sin, cos)) => {
                values[base] = cos * buf[0] - sin * buf[1];
                values[base + 1] = sin * buf[0] + cos * buf[1];
            }
            None => {
                for c in 0..arity {
                    values[base + c] = buf[c];
                }
            }
        }
    }
    let field = Field::from_values(grid, arity, values)?;
    Snapshot::new(field, s.label())
}

/// One family of maps shared by a whole snapshot set; per-snapshot scalar
/// parameters live in the [`ParamTrace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapFamily {
    Translation { periodic: bool },
    Mobius { length: f64 },
    Rotation { center: [f64; 2] },
}

impl MapFamily {
    /// The parameter for which the family's map is the identity.
    pub fn identity_param(&self) -> f64 {
        match *self {
            MapFamily::Translation { .. } => 0.0,
            MapFamily::Mobius { length } => length / 2.0,
            MapFamily::Rotation { .. } => 0.0,
        }
    }

    /// Instantiate the map at a parameter value.
    pub fn map(&self, param: f64) -> TransportMap {
        match *self {
            MapFamily::Translation { periodic } => TransportMap::Translation {
                shift: [param, 0.0],
                periodic,
            },
            MapFamily::Mobius { length } => TransportMap::Mobius {
                length,
                gamma: param,
            },
            MapFamily::Rotation { center } => TransportMap::Rotation {
                center,
                theta: param,
            },
        }
    }
}

/// Per-snapshot map parameters aligned with a snapshot set, plus skip flags
/// marking snapshots left unpreprocessed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamTrace {
    family: MapFamily,
    params: Vec<f64>,
    skip: Vec<bool>,
}

impl ParamTrace {
    /// Build a trace; skipped entries must carry the identity parameter.
    pub fn new(family: MapFamily, params: Vec<f64>, skip: Vec<bool>) -> Result<ParamTrace> {
        if params.len() != skip.len() {
            return Err(Error::Contract(
                "trace parameters and skip flags must have equal length".into(),
            ));
        }
        let id = family.identity_param();
        if params
            .iter()
            .zip(&skip)
            .any(|(p, s)| *s && *p != id)
        {
            return Err(Error::Contract(
                "skipped trace entries must carry the identity parameter".into(),
            ));
        }
        Ok(ParamTrace {
            family,
            params,
            skip,
        })
    }

    /// Trace of identity maps (every snapshot skipped).
    pub fn all_identity(family: MapFamily, len: usize) -> ParamTrace {
        let id = family.identity_param();
        ParamTrace {
            family,
            params: vec![id; len],
            skip: vec![true; len],
        }
    }

    pub fn family(&self) -> &MapFamily {
        &self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn skip_flags(&self) -> &[bool] {
        &self.skip
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn is_skipped(&self, i: usize) -> bool {
        self.skip[i]
    }

    /// The map for snapshot `i`, or `None` when it is skip-flagged.
    pub fn map_for(&self, i: usize) -> Option<TransportMap> {
        if self.skip[i] {
            None
        } else {
            Some(self.family.map(self.params[i]))
        }
    }
}

/// Pullback of every snapshot in a set by its trace entry. Skip-flagged
/// snapshots pass through unchanged; output order equals input order.
pub fn pullback_set(
    set: &SnapshotSet,
    trace: &ParamTrace,
    mask: &SubdomainMask,
) -> Result<SnapshotSet> {
    if trace.len() != set.len() {
        return Err(Error::Contract(format!(
            "trace length {} does not match snapshot count {}",
            trace.len(),
            set.len()
        )));
    }
    let mut out = Vec::with_capacity(set.len());
    for (i, s) in set.iter().enumerate() {
        match trace.map_for(i) {
            None => out.push(s.clone()),
            Some(map) => out.push(pullback(s, &map, mask)?),
        }
    }
    SnapshotSet::new(out)
}
