//! A pulse translated across a periodic domain has slowly decaying POD
//! eigenvalues even though every snapshot is the same shape. Aligning the
//! snapshots with the inverse translations collapses the set to rank 1.

use std::sync::Arc;

use podmap::field::{Field, Grid, Label, Snapshot, SnapshotSet, SubdomainMask};
use podmap::maps::{pullback_set, MapFamily, ParamTrace};
use podmap::pod::pod;

fn main() -> podmap::Result<()> {
    let n = 1024;
    let h = 1.0 / n as f64;
    let grid = Grid::line(0.0, h, n)?;
    let period = grid.period(0);

    let pulse = |x: f64| (-((x - 0.5) / 0.05).powi(2)).exp();
    let shifts: Vec<f64> = (0..100).map(|j| j as f64 * 10.0 * h).collect();
    let snaps = shifts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let f = Field::scalar_from_fn(Arc::clone(&grid), move |x, _| {
                pulse((x - s).rem_euclid(period))
            })?;
            Snapshot::new(f, Label { time: i as f64, param: None })
        })
        .collect::<podmap::Result<Vec<_>>>()?;
    let set = SnapshotSet::new(snaps)?;
    let mask = SubdomainMask::all(grid);

    let raw = pod(&set, &mask, None, None)?;
    println!("raw spectrum (first 12):");
    for (i, l) in raw.eigenvalues.iter().take(12).enumerate() {
        println!("  lambda_{:<2} = {:.3e}", i + 1, l);
    }

    let family = MapFamily::Translation { periodic: true };
    let trace = ParamTrace::new(family, shifts, vec![false; set.len()])?;
    let aligned = pullback_set(&set, &trace, &mask)?;
    let pre = pod(&aligned, &mask, None, None)?;
    println!("aligned spectrum (first 3):");
    for (i, l) in pre.eigenvalues.iter().take(3).enumerate() {
        println!("  lambda_{:<2} = {:.3e}", i + 1, l);
    }
    println!(
        "raw lambda_10/lambda_1 = {:.3e}, aligned lambda_2/lambda_1 = {:.3e}",
        raw.eigenvalues[9] / raw.eigenvalues[0],
        pre.eigenvalues[1] / pre.eigenvalues[0],
    );
    Ok(())
}
