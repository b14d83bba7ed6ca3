//! POD by the method of snapshots, eigenvalue-decay reporting, and the
//! greedy parametric compression built on snapshot orthogonalization.
//!
//! The decay of the POD eigenvalues is the computable stand-in for the
//! Kolmogorov n-width of the snapshot family: the slower the tail decays,
//! the larger the linear space needed to approximate the family.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::{axpy, inner_product, norm, Field, Snapshot, SnapshotSet, SubdomainMask};

/// Eigenvalues below this fraction of the leading one are treated as
/// numerical rank deficiency: clamped to zero and excluded from mode
/// construction (the mode formula divides by sqrt(lambda)).
pub const RANK_FLOOR: f64 = 1e-12;

/// Result of a POD compression.
#[derive(Debug, Clone)]
pub struct PodResult {
    /// All eigenvalues of the snapshot Gram matrix, descending; values
    /// below the numerical floor are clamped to exactly zero.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal modes for the retained eigenvalues (truncated at the
    /// requested count / energy tolerance).
    pub modes: Vec<Field>,
    /// `lambda_i / sum(lambda)` per eigenvalue.
    pub energy_fractions: Vec<f64>,
    /// Running sums of the energy fractions.
    pub cumulative_energy: Vec<f64>,
    /// Set when every snapshot was numerically zero (empty mode set).
    pub degenerate: bool,
}

/// One row of a decay report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRecord {
    /// 1-based mode index.
    pub index: usize,
    pub eigenvalue: f64,
    pub energy_fraction: f64,
    pub cumulative_energy: f64,
    /// n-width surrogate at n = index: relative projection error of the
    /// best `index`-dimensional POD space on the training set.
    pub nwidth_surrogate: f64,
}

/// `sqrt(sum_{i > n} lambda_i / sum_i lambda_i)`; 1.0 for an empty basis and
/// 0.0 at (or beyond) full rank.
pub fn nwidth_surrogate(eigenvalues: &[f64], n: usize) -> f64 {
    let total: f64 = eigenvalues.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    if n >= eigenvalues.len() {
        return 0.0;
    }
    let tail: f64 = eigenvalues[n..].iter().sum();
    (tail / total).max(0.0).sqrt()
}

/// Assemble the Gram matrix of a snapshot set under the masked inner
/// product. Exactly symmetric: the upper triangle is computed and mirrored.
fn gram_matrix(set: &SnapshotSet, mask: &SubdomainMask) -> Result<DMatrix<f64>> {
    let k = set.len();
    let mut c = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = inner_product(set.get(i).field(), set.get(j).field(), mask)?;
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    Ok(c)
}

fn pod_with_floor(
    set: &SnapshotSet,
    mask: &SubdomainMask,
    n_max: Option<usize>,
    tol: Option<f64>,
    abs_floor: Option<f64>,
) -> Result<PodResult> {
    if let Some(n) = n_max {
        if n < 1 {
            return Err(Error::Contract("n_max must be >= 1".into()));
        }
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Contract(format!(
                "energy tolerance must lie in (0, 1), got {t}"
            )));
        }
    }

    let k = set.len();
    let gram = gram_matrix(set, mask)?;
    let eig = gram.clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let lambda_max = eig.eigenvalues[order[0]].max(0.0);

    if lambda_max <= 0.0 {
        return Ok(PodResult {
            eigenvalues: vec![0.0; k],
            modes: Vec::new(),
            energy_fractions: vec![0.0; k],
            cumulative_energy: vec![0.0; k],
            degenerate: true,
        });
    }

    let floor = abs_floor.unwrap_or(RANK_FLOOR * lambda_max);
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&i| {
            let l = eig.eigenvalues[i];
            if l < floor {
                0.0
            } else {
                l
            }
        })
        .collect();

    let total: f64 = eigenvalues.iter().sum();
    let energy_fractions: Vec<f64> = eigenvalues.iter().map(|l| l / total).collect();
    let mut cumulative_energy = Vec::with_capacity(k);
    let mut acc = 0.0;
    for f in &energy_fractions {
        acc += f;
        cumulative_energy.push(acc);
    }

    let rank = eigenvalues.iter().filter(|l| **l > 0.0).count();
    let mut keep = rank;
    if let Some(n) = n_max {
        keep = keep.min(n);
    }
    if let Some(t) = tol {
        // Smallest n whose tail energy surrogate is within the tolerance.
        let mut n_tol = rank;
        for n in 1..=rank {
            if nwidth_surrogate(&eigenvalues, n) <= t {
                n_tol = n;
                break;
            }
        }
        keep = keep.min(n_tol);
    }

    // Modes by the method of snapshots: Phi_i = sum_j v_ij s_j / sqrt(l_i).
    let grid = set.grid().clone();
    let arity = set.arity();
    let mut modes = Vec::with_capacity(keep);
    for m in 0..keep {
        let col = eig.eigenvectors.column(order[m]);
        let scale = 1.0 / eigenvalues[m].sqrt();
        let mut acc = Field::zeros(grid.clone(), arity)?;
        for (j, s) in set.iter().enumerate() {
            acc = axpy(scale * col[j], s.field(), &acc)?;
        }
        // The eigenvector-based assembly leaves small orthonormality
        // residuals when the spectrum is steep; polish with one
        // Gram-Schmidt pass and an explicit renormalization.
        for prev in &modes {
            let ip = inner_product(&acc, prev, mask)?;
            acc = axpy(-ip, prev, &acc)?;
        }
        let n = norm(&acc, mask)?;
        if n > 0.0 {
            let values = acc.values().iter().map(|v| v / n).collect();
            acc = Field::from_values(grid.clone(), arity, values)?;
        }
        modes.push(acc);
    }

    Ok(PodResult {
        eigenvalues,
        modes,
        energy_fractions,
        cumulative_energy,
        degenerate: false,
    })
}

/// POD of a snapshot set under the masked inner product.
///
/// The Gram matrix is un-normalized, so the eigenvalue sum equals the sum of
/// squared snapshot norms (trace identity). Truncation keeps at most `n_max`
/// modes and stops early once the energy tolerance is met.
pub fn pod(
    set: &SnapshotSet,
    mask: &SubdomainMask,
    n_max: Option<usize>,
    tol: Option<f64>,
) -> Result<PodResult> {
    pod_with_floor(set, mask, n_max, tol, None)
}

/// Tabulate the eigenvalue decay with the n-width surrogate per mode count.
pub fn decay_report(result: &PodResult) -> Vec<DecayRecord> {
    result
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, l)| DecayRecord {
            index: i + 1,
            eigenvalue: *l,
            energy_fraction: result.energy_fractions[i],
            cumulative_energy: result.cumulative_energy[i],
            nwidth_surrogate: nwidth_surrogate(&result.eigenvalues, i + 1),
        })
        .collect()
}

/// Remove the component of a snapshot inside the span of an orthonormal
/// basis: `s - sum_i (s, Phi_i) Phi_i`.
pub fn orthogonalize(s: &Snapshot, basis: &[Field], mask: &SubdomainMask) -> Result<Snapshot> {
    let mut residual = s.field().clone();
    for phi in basis {
        let coeff = inner_product(&residual, phi, mask)?;
        residual = axpy(-coeff, phi, &residual)?;
    }
    Snapshot::new(residual, s.label())
}

/// One stage of the greedy compression.
#[derive(Debug, Clone)]
pub struct GreedyStage {
    /// Parameter of the snapshot set compressed in this stage.
    pub param: Option<f64>,
    /// Stage-local eigenvalues (of the residual snapshots for stages >= 2).
    pub eigenvalues: Vec<f64>,
    /// Number of modes this stage appended to the basis.
    pub modes_added: usize,
}

/// Accumulated basis produced by [`pod_greedy`].
#[derive(Debug, Clone)]
pub struct GreedyState {
    /// Orthonormal basis across all stages.
    pub modes: Vec<Field>,
    /// Source parameter of each mode.
    pub mode_params: Vec<Option<f64>>,
    /// Per-stage eigenvalue records in sampling order.
    pub stages: Vec<GreedyStage>,
}

/// Greedy compression over parametrized snapshot sets in sampling order.
///
/// Stage 1 is a plain POD on the first set; each later stage orthogonalizes
/// every snapshot of its set against the accumulated basis, runs a POD on
/// the residuals, and appends the resulting modes. `n_max`/`tol` bound each
/// stage. The rank floor is anchored at the first stage's leading eigenvalue
/// so sets already contained in the basis span contribute no modes.
pub fn pod_greedy(
    sets: &[SnapshotSet],
    mask: &SubdomainMask,
    n_max: Option<usize>,
    tol: Option<f64>,
) -> Result<GreedyState> {
    if sets.is_empty() {
        return Err(Error::Contract("greedy needs at least one snapshot set".into()));
    }
    let grid = sets[0].grid();
    let arity = sets[0].arity();
    for s in &sets[1..] {
        if **s.grid() != **grid {
            return Err(Error::GridMismatch("greedy sets must share one grid".into()));
        }
        if s.arity() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: s.arity(),
            });
        }
    }

    let mut state = GreedyState {
        modes: Vec::new(),
        mode_params: Vec::new(),
        stages: Vec::new(),
    };
    let mut abs_floor: Option<f64> = None;

    for set in sets {
        let param = set.get(0).label().param;
        let result = if state.modes.is_empty() {
            let r = pod_with_floor(set, mask, n_max, tol, None)?;
            if let Some(l1) = r.eigenvalues.first() {
                if *l1 > 0.0 {
                    abs_floor = Some(RANK_FLOOR * l1);
                }
            }
            r
        } else {
            // Two orthogonalization passes keep the cross-stage basis
            // orthonormal at the 1e-10 level even for nearly dependent sets.
            let residuals: Result<Vec<Snapshot>> = set
                .iter()
                .map(|s| {
                    let once = orthogonalize(s, &state.modes, mask)?;
                    orthogonalize(&once, &state.modes, mask)
                })
                .collect();
            let residual_set = SnapshotSet::new(residuals?)?;
            pod_with_floor(&residual_set, mask, n_max, tol, abs_floor)?
        };

        let added = result.modes.len();
        state.mode_params.extend(std::iter::repeat(param).take(added));
        state.modes.extend(result.modes);
        state.stages.push(GreedyStage {
            param,
            eigenvalues: result.eigenvalues,
            modes_added: added,
        });
    }
    Ok(state)
}

/// Per-snapshot and aggregate relative projection errors onto a basis.
#[derive(Debug, Clone)]
pub struct ProjectionErrors {
    /// `|s - P s| / |s|` per snapshot (0 for zero-norm snapshots).
    pub per_snapshot: Vec<f64>,
    /// `sqrt(sum |s - P s|^2 / sum |s|^2)`.
    pub aggregate: f64,
}

/// Relative error of projecting every snapshot onto the span of `basis`.
pub fn projection_error(
    set: &SnapshotSet,
    basis: &[Field],
    mask: &SubdomainMask,
) -> Result<ProjectionErrors> {
    let mut per_snapshot = Vec::with_capacity(set.len());
    let mut err_sq = 0.0;
    let mut norm_sq = 0.0;
    for s in set.iter() {
        let n = norm(s.field(), mask)?;
        let residual = orthogonalize(s, basis, mask)?;
        let e = norm(residual.field(), mask)?;
        per_snapshot.push(if n > 0.0 { e / n } else { 0.0 });
        err_sq += e * e;
        norm_sq += n * n;
    }
    let aggregate = if norm_sq > 0.0 {
        (err_sq / norm_sq).sqrt()
    } else {
        0.0
    };
    Ok(ProjectionErrors {
        per_snapshot,
        aggregate,
    })
}
