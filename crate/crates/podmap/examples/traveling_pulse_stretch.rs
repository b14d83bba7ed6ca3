//! A pressure pulse grows at the inlet and then travels down a channel.
//! The peak-recentering stretch fixes both channel ends, so aligned
//! snapshots keep their boundary values; the skip rule leaves the growth
//! phase untouched.

use podmap::align::{build_trace, Detector, SkipRule};
use podmap::cli::pulse_case;
use podmap::field::SubdomainMask;
use podmap::maps::{pullback_set, MapFamily};
use podmap::pod::{nwidth_surrogate, pod};

fn modes_to(eigenvalues: &[f64], target: f64) -> usize {
    (1..=eigenvalues.len())
        .find(|n| nwidth_surrogate(eigenvalues, *n) <= target)
        .unwrap_or(eigenvalues.len())
}

fn main() -> podmap::Result<()> {
    let set = pulse_case(500.0)?;
    let grid = set.grid().clone();
    println!("{} snapshots on a {:?} grid", set.len(), grid.counts());
    let mask = SubdomainMask::all(grid.clone());

    let family = MapFamily::Mobius {
        length: grid.extent(0),
    };
    let built = build_trace(&set, &Detector::Peak, &family, &SkipRule::default())?;
    let skipped = built.trace.skip_flags().iter().filter(|s| **s).count();
    println!("skip rule left {skipped} early snapshots unpreprocessed");

    let aligned = pullback_set(&set, &built.trace, &mask)?;
    let raw = pod(&set, &mask, None, None)?;
    let pre = pod(&aligned, &mask, None, None)?;

    let target = 1e-3;
    let n_raw = modes_to(&raw.eigenvalues, target);
    let n_pre = modes_to(&pre.eigenvalues, target);
    println!(
        "modes to n-width surrogate {target:.0e}: raw {n_raw}, aligned {n_pre} ({} fewer)",
        n_raw - n_pre
    );
    Ok(())
}
