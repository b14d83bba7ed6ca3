//! Discrete fields on uniform structured grids with weighted inner products.
//!
//! Everything downstream (transport maps, POD, generators) operates on the
//! types defined here. All types are immutable after construction and can be
//! shared read-only across threads.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform Cartesian sampling of a 1D interval or a 2D rectangle.
///
/// Nodes are ordered y-outer, x-inner: node `(i, j)` lives at flat index
/// `j * nx + i`. Quadrature weights are trapezoidal by default, so the
/// discrete inner product approximates the L2 product on the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    counts: Vec<usize>,
    weights: Vec<f64>,
}

fn trapezoid_axis_weights(spacing: f64, count: usize) -> Vec<f64> {
    let mut w = vec![spacing; count];
    w[0] = spacing / 2.0;
    w[count - 1] = spacing / 2.0;
    w
}

impl Grid {
    /// 1D grid of `count` nodes starting at `origin` with uniform `spacing`.
    pub fn line(origin: f64, spacing: f64, count: usize) -> Result<Arc<Grid>> {
        Self::validate_axis(spacing, count)?;
        Ok(Arc::new(Grid {
            origin: vec![origin],
            spacing: vec![spacing],
            counts: vec![count],
            weights: trapezoid_axis_weights(spacing, count),
        }))
    }

    /// 2D grid of `counts = [nx, ny]` nodes.
    pub fn rect(origin: [f64; 2], spacing: [f64; 2], counts: [usize; 2]) -> Result<Arc<Grid>> {
        Self::validate_axis(spacing[0], counts[0])?;
        Self::validate_axis(spacing[1], counts[1])?;
        let wx = trapezoid_axis_weights(spacing[0], counts[0]);
        let wy = trapezoid_axis_weights(spacing[1], counts[1]);
        let mut weights = Vec::with_capacity(counts[0] * counts[1]);
        for j in 0..counts[1] {
            for i in 0..counts[0] {
                weights.push(wx[i] * wy[j]);
            }
        }
        Ok(Arc::new(Grid {
            origin: origin.to_vec(),
            spacing: spacing.to_vec(),
            counts: counts.to_vec(),
            weights,
        }))
    }

    fn validate_axis(spacing: f64, count: usize) -> Result<()> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive and finite, got {spacing}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 nodes per axis, got {count}"
            )));
        }
        Ok(())
    }

    /// Replace the quadrature weights (all must be positive and finite).
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Arc<Grid>> {
        if weights.len() != self.node_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                self.node_count(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "quadrature weights must be positive and finite".into(),
            ));
        }
        Ok(Arc::new(Grid {
            weights,
            ..self.clone()
        }))
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node_count(&self) -> usize {
        self.counts.iter().product()
    }

    /// Extent of one axis, `(count - 1) * spacing`.
    pub fn extent(&self, axis: usize) -> f64 {
        (self.counts[axis] - 1) as f64 * self.spacing[axis]
    }

    /// Period of one axis when the grid samples one period of a periodic
    /// domain: `count * spacing` (the node after the last one wraps to the
    /// first).
    pub fn period(&self, axis: usize) -> f64 {
        self.counts[axis] as f64 * self.spacing[axis]
    }

    /// Coordinates of a flat node index; `[x, 0.0]` on 1D grids.
    pub fn coord(&self, node: usize) -> [f64; 2] {
        match self.dim() {
            1 => [self.origin[0] + node as f64 * self.spacing[0], 0.0],
            _ => {
                let nx = self.counts[0];
                let i = node % nx;
                let j = node / nx;
                [
                    self.origin[0] + i as f64 * self.spacing[0],
                    self.origin[1] + j as f64 * self.spacing[1],
                ]
            }
        }
    }

    /// Total domain measure (length or area).
    pub fn measure(&self) -> f64 {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }
}

/// A scalar (`arity == 1`) or planar vector (`arity == 2`) field sampled on
/// a [`Grid`]. Components are interleaved per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid>,
    arity: usize,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Arc<Grid>, arity: usize) -> Result<Field> {
        Self::check_arity(arity)?;
        let n = grid.node_count() * arity;
        Ok(Field {
            grid,
            arity,
            values: vec![0.0; n],
        })
    }

    pub fn from_values(grid: Arc<Grid>, arity: usize, values: Vec<f64>) -> Result<Field> {
        Self::check_arity(arity)?;
        if values.len() != grid.node_count() * arity {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                grid.node_count() * arity,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "field values must be finite".into(),
            ));
        }
        Ok(Field {
            grid,
            arity,
            values,
        })
    }

    /// Sample a scalar function of position.
    pub fn scalar_from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        let values: Vec<f64> = (0..grid.node_count())
            .map(|n| {
                let [x, y] = grid.coord(n);
                f(x, y)
            })
            .collect();
        Field::from_values(grid, 1, values)
    }

    /// Sample a planar vector function of position.
    pub fn vector_from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> [f64; 2]) -> Result<Field> {
        let mut values = Vec::with_capacity(grid.node_count() * 2);
        for n in 0..grid.node_count() {
            let [x, y] = grid.coord(n);
            let v = f(x, y);
            values.push(v[0]);
            values.push(v[1]);
        }
        Field::from_values(grid, 2, values)
    }

    fn check_arity(arity: usize) -> Result<()> {
        if arity == 1 || arity == 2 {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: 1,
                got: arity,
            })
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value of component `comp` at flat node index `node`.
    pub fn value(&self, node: usize, comp: usize) -> f64 {
        self.values[node * self.arity + comp]
    }
}

/// Generating label of a snapshot: time plus an optional physical parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub time: f64,
    pub param: Option<f64>,
}

/// One field tagged with its generating label.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    field: Field,
    label: Label,
}

impl Snapshot {
    pub fn new(field: Field, label: Label) -> Result<Snapshot> {
        if !(label.time >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "snapshot time must be >= 0, got {}",
                label.time
            )));
        }
        Ok(Snapshot { field, label })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.field.grid()
    }
}

/// Ordered collection of snapshots sharing one grid and one arity.
#[derive(Debug, Clone)]
pub struct SnapshotSet {
    snapshots: Vec<Snapshot>,
}

impl SnapshotSet {
    /// Build a set, checking the shared-grid/shared-arity invariant and that
    /// time is strictly increasing within each parameter value.
    pub fn new(snapshots: Vec<Snapshot>) -> Result<SnapshotSet> {
        if snapshots.is_empty() {
            return Err(Error::Contract("snapshot set may not be empty".into()));
        }
        let grid = snapshots[0].grid().clone();
        let arity = snapshots[0].field().arity();
        for s in &snapshots[1..] {
            if **s.grid() != *grid {
                return Err(Error::GridMismatch(
                    "all snapshots in a set must share one grid".into(),
                ));
            }
            if s.field().arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: s.field().arity(),
                });
            }
        }
        let mut last: Vec<(Option<f64>, f64)> = Vec::new();
        for s in &snapshots {
            let l = s.label();
            match last.iter_mut().find(|(p, _)| *p == l.param) {
                Some((_, t)) => {
                    if l.time <= *t {
                        return Err(Error::Contract(format!(
                            "snapshot times must be strictly increasing per parameter \
                             (got {} after {})",
                            l.time, t
                        )));
                    }
                    *t = l.time;
                }
                None => last.push((l.param, l.time)),
            }
        }
        Ok(SnapshotSet { snapshots })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.snapshots[0].grid()
    }

    pub fn arity(&self) -> usize {
        self.snapshots[0].field().arity()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn get(&self, i: usize) -> &Snapshot {
        &self.snapshots[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Snapshot> {
        self.snapshots.iter()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }
}

/// Shape of a subdomain mask, kept for persistence and contract checks.
#[derive(Debug, Clone, PartialEq)]
pub enum MaskKind {
    All,
    Disk { center: [f64; 2], radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Arbitrary node selection; cannot be persisted in a bundle manifest.
    Custom,
}

/// Per-node subdomain selector used to restrict inner products to a part of
/// the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdomainMask {
    grid: Arc<Grid>,
    inside: Vec<bool>,
    kind: MaskKind,
}

impl SubdomainMask {
    /// Mask selecting every node.
    pub fn all(grid: Arc<Grid>) -> SubdomainMask {
        let n = grid.node_count();
        SubdomainMask {
            grid,
            inside: vec![true; n],
            kind: MaskKind::All,
        }
    }

    /// Disk mask: nodes with distance <= radius from `center` (2D grids).
    pub fn disk(grid: Arc<Grid>, center: [f64; 2], radius: f64) -> Result<SubdomainMask> {
        if grid.dim() != 2 {
            return Err(Error::Contract("disk masks require a 2D grid".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        let inside = (0..grid.node_count())
            .map(|n| {
                let [x, y] = grid.coord(n);
                (x - center[0]).hypot(y - center[1]) <= radius
            })
            .collect();
        Ok(SubdomainMask {
            grid,
            inside,
            kind: MaskKind::Disk { center, radius },
        })
    }

    /// Axis-aligned box mask (closed bounds per axis).
    pub fn bounding_box(grid: Arc<Grid>, lo: Vec<f64>, hi: Vec<f64>) -> Result<SubdomainMask> {
        if lo.len() != grid.dim() || hi.len() != grid.dim() {
            return Err(Error::InvalidParameter(
                "box bounds must match grid dimension".into(),
            ));
        }
        let inside = (0..grid.node_count())
            .map(|n| {
                let c = grid.coord(n);
                (0..grid.dim()).all(|a| c[a] >= lo[a] && c[a] <= hi[a])
            })
            .collect();
        Ok(SubdomainMask {
            grid,
            inside,
            kind: MaskKind::Box { lo, hi },
        })
    }

    /// Mask selecting the complement of `self`.
    pub fn complement(&self) -> SubdomainMask {
        SubdomainMask {
            grid: self.grid.clone(),
            inside: self.inside.iter().map(|b| !b).collect(),
            kind: MaskKind::Custom,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn kind(&self) -> &MaskKind {
        &self.kind
    }

    pub fn inside(&self) -> &[bool] {
        &self.inside
    }

    pub fn contains(&self, node: usize) -> bool {
        self.inside[node]
    }

    /// Sum of quadrature weights over the selected nodes.
    pub fn weighted_measure(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.inside)
            .filter(|(_, b)| **b)
            .map(|(w, _)| w)
            .sum()
    }
}

fn check_pair(a: &Field, b: &Field, mask: &SubdomainMask) -> Result<()> {
    if **a.grid() != **b.grid() || **a.grid() != **mask.grid() {
        return Err(Error::GridMismatch(
            "fields and mask must share one grid".into(),
        ));
    }
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    Ok(())
}

/// Mask-weighted discrete L2 inner product. Vector arity sums components.
pub fn inner_product(a: &Field, b: &Field, mask: &SubdomainMask) -> Result<f64> {
    check_pair(a, b, mask)?;
    let arity = a.arity();
    let av = a.values();
    let bv = b.values();
    let w = a.grid().weights();
    let mut acc = 0.0;
    for node in 0..a.grid().node_count() {
        if !mask.contains(node) {
            continue;
        }
        let base = node * arity;
        let mut dot = 0.0;
        for c in 0..arity {
            dot += av[base + c] * bv[base + c];
        }
        acc += w[node] * dot;
    }
    Ok(acc)
}

/// Mask-weighted norm, `sqrt((a, a))`.
pub fn norm(a: &Field, mask: &SubdomainMask) -> Result<f64> {
    Ok(inner_product(a, a, mask)?.sqrt())
}

/// Zero a snapshot outside the mask; the label is preserved.
pub fn restrict(s: &Snapshot, mask: &SubdomainMask) -> Result<Snapshot> {
    if **s.grid() != **mask.grid() {
        return Err(Error::GridMismatch(
            "snapshot and mask must share one grid".into(),
        ));
    }
    let arity = s.field().arity();
    let mut values = s.field().values().to_vec();
    for node in 0..s.grid().node_count() {
        if !mask.contains(node) {
            for c in 0..arity {
                values[node * arity + c] = 0.0;
            }
        }
    }
    let field = Field::from_values(s.grid().clone(), arity, values)?;
    Snapshot::new(field, s.label())
}

/// Pointwise `y + alpha * x`.
pub fn axpy(alpha: f64, x: &Field, y: &Field) -> Result<Field> {
    if **x.grid() != **y.grid() {
        return Err(Error::GridMismatch("axpy operands must share a grid".into()));
    }
    if x.arity() != y.arity() {
        return Err(Error::ArityMismatch {
            expected: y.arity(),
            got: x.arity(),
        });
    }
    let values = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(xv, yv)| yv + alpha * xv)
        .collect();
    Field::from_values(y.grid().clone(), y.arity(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand::Rng as _;

    fn unit_grid_1d(n: usize) -> Arc<Grid> {
        Grid::line(0.0, 1.0 / (n - 1) as f64, n).unwrap()
    }

    #[test]
    fn trapezoid_weights_1d() {
        let n = 11;
        let h = 0.1;
        let g = Grid::line(0.0, h, n).unwrap();
        assert_eq!(g.weights()[0], h / 2.0);
        assert_eq!(g.weights()[n - 1], h / 2.0);
        for w in &g.weights()[1..n - 1] {
            assert_eq!(*w, h);
        }
    }

    #[test]
    fn weights_sum_to_measure() {
        let g = Grid::rect([0.0, -1.0], [0.25, 0.5], [9, 5]).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - g.measure()).abs() <= 1e-12 * g.measure());
    }

    #[test]
    fn grid_rejects_bad_axes() {
        assert!(Grid::line(0.0, 0.0, 10).is_err());
        assert!(Grid::line(0.0, -0.1, 10).is_err());
        assert!(Grid::line(0.0, 0.1, 1).is_err());
    }

    #[test]
    fn constant_field_unit_inner_product() {
        let g = unit_grid_1d(33);
        let ones = Field::scalar_from_fn(g.clone(), |_, _| 1.0).unwrap();
        let mask = SubdomainMask::all(g);
        let ip = inner_product(&ones, &ones, &mask).unwrap();
        assert!((ip - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pointwise_orthogonal_fields() {
        let g = Grid::rect([0.0, 0.0], [0.1, 0.1], [8, 8]).unwrap();
        // Disjoint supports in the two components.
        let a = Field::vector_from_fn(g.clone(), |x, _| [x, 0.0]).unwrap();
        let b = Field::vector_from_fn(g.clone(), |_, y| [0.0, y]).unwrap();
        let mask = SubdomainMask::all(g);
        assert_eq!(inner_product(&a, &b, &mask).unwrap(), 0.0);
    }

    #[test]
    fn inner_product_matches_loop_oracle() {
        let g = unit_grid_1d(33);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let av: Vec<f64> = (0..33).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bv: Vec<f64> = (0..33).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = Field::from_values(g.clone(), 1, av.clone()).unwrap();
        let b = Field::from_values(g.clone(), 1, bv.clone()).unwrap();
        let mask = SubdomainMask::all(g.clone());

        let mut oracle = 0.0;
        for i in 0..33 {
            oracle += g.weights()[i] * av[i] * bv[i];
        }
        let ip = inner_product(&a, &b, &mask).unwrap();
        assert!((ip - oracle).abs() <= 1e-13);
    }

    #[test]
    fn inner_product_rejects_mismatches() {
        let g1 = unit_grid_1d(8);
        let g2 = unit_grid_1d(9);
        let a = Field::zeros(g1.clone(), 1).unwrap();
        let b = Field::zeros(g2.clone(), 1).unwrap();
        let mask = SubdomainMask::all(g1.clone());
        assert!(matches!(
            inner_product(&a, &b, &mask),
            Err(Error::GridMismatch(_))
        ));
        let c = Field::zeros(g1, 2).unwrap();
        assert!(matches!(
            inner_product(&a, &c, &mask),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn norm_basics() {
        let g = unit_grid_1d(17);
        let mask = SubdomainMask::all(g.clone());
        let zero = Field::zeros(g.clone(), 1).unwrap();
        assert_eq!(norm(&zero, &mask).unwrap(), 0.0);

        let c = Field::scalar_from_fn(g.clone(), |_, _| -3.0).unwrap();
        assert!((norm(&c, &mask).unwrap() - 3.0).abs() <= 1e-12);

        let f = Field::scalar_from_fn(g, |x, _| x * x - 0.3).unwrap();
        let doubled = axpy(1.0, &f, &f).unwrap();
        assert!((norm(&doubled, &mask).unwrap() - 2.0 * norm(&f, &mask).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn restrict_all_mask_is_identity() {
        let g = unit_grid_1d(16);
        let f = Field::scalar_from_fn(g.clone(), |x, _| x.sin()).unwrap();
        let s = Snapshot::new(f, Label { time: 0.5, param: None }).unwrap();
        let r = restrict(&s, &SubdomainMask::all(g)).unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn restrict_disk_mask_norm_is_disk_measure() {
        let g = Grid::rect([-1.0, -1.0], [0.05, 0.05], [41, 41]).unwrap();
        let mask = SubdomainMask::disk(g.clone(), [0.0, 0.0], 0.6).unwrap();
        let ones = Field::scalar_from_fn(g.clone(), |_, _| 1.0).unwrap();
        let s = Snapshot::new(ones, Label { time: 0.0, param: None }).unwrap();
        let r = restrict(&s, &mask).unwrap();
        let all = SubdomainMask::all(g);
        let n2 = inner_product(r.field(), r.field(), &all).unwrap();
        assert!((n2 - mask.weighted_measure()).abs() <= 1e-12 * mask.weighted_measure());
    }

    #[test]
    fn restrict_empty_mask_zeroes() {
        let g = unit_grid_1d(8);
        let f = Field::scalar_from_fn(g.clone(), |x, _| 1.0 + x).unwrap();
        let s = Snapshot::new(f, Label { time: 0.0, param: None }).unwrap();
        let empty = SubdomainMask::all(g.clone()).complement();
        let r = restrict(&s, &empty).unwrap();
        assert_eq!(norm(r.field(), &SubdomainMask::all(g)).unwrap(), 0.0);
    }

    #[test]
    fn axpy_cases() {
        let g = unit_grid_1d(12);
        let x = Field::scalar_from_fn(g.clone(), |x, _| x).unwrap();
        let y = Field::scalar_from_fn(g.clone(), |x, _| 1.0 - x).unwrap();
        assert_eq!(axpy(0.0, &x, &y).unwrap(), y);
        let zero = axpy(-1.0, &x, &x).unwrap();
        assert!(zero.values().iter().all(|v| *v == 0.0));

        // Elementwise oracle on a random triple.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alpha: f64 = rng.gen_range(-2.0..2.0);
        let xv: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let yv: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let xf = Field::from_values(g.clone(), 1, xv.clone()).unwrap();
        let yf = Field::from_values(g, 1, yv.clone()).unwrap();
        let out = axpy(alpha, &xf, &yf).unwrap();
        for i in 0..12 {
            assert_eq!(out.values()[i], yv[i] + alpha * xv[i]);
        }
    }

    #[test]
    fn snapshot_set_rejects_nonincreasing_time() {
        let g = unit_grid_1d(4);
        let f = Field::zeros(g, 1).unwrap();
        let s0 = Snapshot::new(f.clone(), Label { time: 1.0, param: None }).unwrap();
        let s1 = Snapshot::new(f, Label { time: 1.0, param: None }).unwrap();
        assert!(SnapshotSet::new(vec![s0, s1]).is_err());
    }

    proptest! {
        #[test]
        fn cauchy_schwarz(seed in 0u64..200) {
            let g = unit_grid_1d(25);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let av: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let bv: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = Field::from_values(g.clone(), 1, av).unwrap();
            let b = Field::from_values(g.clone(), 1, bv).unwrap();
            let mask = SubdomainMask::all(g);
            let ip = inner_product(&a, &b, &mask).unwrap().abs();
            let bound = norm(&a, &mask).unwrap() * norm(&b, &mask).unwrap();
            prop_assert!(ip <= bound + 1e-12);
        }

        #[test]
        fn mask_additivity(seed in 0u64..100) {
            let g = Grid::rect([-1.0, -1.0], [0.1, 0.1], [21, 21]).unwrap();
            let n = g.node_count();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let av: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let bv: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = Field::from_values(g.clone(), 1, av).unwrap();
            let b = Field::from_values(g.clone(), 1, bv).unwrap();
            let disk = SubdomainMask::disk(g.clone(), [0.0, 0.0], 0.7).unwrap();
            let rest = disk.complement();
            let all = SubdomainMask::all(g);
            let whole = inner_product(&a, &b, &all).unwrap();
            let split = inner_product(&a, &b, &disk).unwrap()
                + inner_product(&a, &b, &rest).unwrap();
            prop_assert!((whole - split).abs() <= 1e-12 * whole.abs().max(1.0));
        }
    }
}
