//! Greedy compression across a parametrized family: each parameter's
//! snapshots are orthogonalized against the accumulated basis before a
//! stage-local POD, so later stages only add what is genuinely new.

use std::sync::Arc;

use podmap::field::{Field, Grid, Label, Snapshot, SnapshotSet, SubdomainMask};
use podmap::gen::lagrange_sampling;
use podmap::pod::{pod_greedy, projection_error};

fn main() -> podmap::Result<()> {
    let grid = Grid::line(0.0, 1.0 / 255.0, 256)?;
    let mask = SubdomainMask::all(grid.clone());
    let params = lagrange_sampling(47.0, 150.0, 4)?;

    // One decaying-pulse trajectory per parameter; the parameter sets the
    // pulse width.
    let sets: Vec<SnapshotSet> = params
        .iter()
        .map(|mu| {
            let w = 2.0 / mu;
            let snaps = (0..8)
                .map(|i| {
                    let c = 0.2 + 0.06 * i as f64;
                    let f = Field::scalar_from_fn(Arc::clone(&grid), move |x, _| {
                        (-((x - c) / w).powi(2)).exp()
                    })?;
                    Snapshot::new(f, Label { time: i as f64, param: Some(*mu) })
                })
                .collect::<podmap::Result<Vec<_>>>()?;
            SnapshotSet::new(snaps)
        })
        .collect::<podmap::Result<Vec<_>>>()?;

    let greedy = pod_greedy(&sets, &mask, None, Some(1e-8))?;
    println!("{} modes total", greedy.modes.len());
    for stage in &greedy.stages {
        println!(
            "parameter {:>8.3}: {} modes added, leading eigenvalue {:.3e}",
            stage.param.unwrap(),
            stage.modes_added,
            stage.eigenvalues.first().copied().unwrap_or(0.0)
        );
    }

    for (set, mu) in sets.iter().zip(&params) {
        let err = projection_error(set, &greedy.modes, &mask)?;
        println!("training error at {:>8.3}: {:.3e}", mu, err.aggregate);
    }
    Ok(())
}
