//! Persist a snapshot set as a bundle (JSON manifest + raw little-endian
//! binaries), read it back bit-exactly, and write a decay report CSV.

use podmap::cli::burgers_case;
use podmap::field::SubdomainMask;
use podmap::io::{read_bundle, read_decay_csv, write_bundle, write_decay_csv};
use podmap::pod::{decay_report, pod};

fn main() -> podmap::Result<()> {
    let dir = std::env::temp_dir().join("podmap_bundle_example");
    let set = burgers_case(1e-3)?;

    let manifest = write_bundle(&set, None, None, &dir)?;
    println!("wrote {} snapshots to {}", set.len(), manifest.display());

    let bundle = read_bundle(&dir)?;
    let exact = bundle
        .set
        .iter()
        .zip(set.iter())
        .all(|(a, b)| a.field().values() == b.field().values());
    println!("round trip bit-exact: {exact}");

    let mask = SubdomainMask::all(set.grid().clone());
    let result = pod(&set, &mask, Some(20), None)?;
    let csv = dir.join("decay.csv");
    write_decay_csv(&decay_report(&result), &csv)?;
    let parsed = read_decay_csv(&csv)?;
    println!(
        "decay report: {} rows, first eigenvalue {:.6e}, parse-back exact: {}",
        parsed.len(),
        parsed[0].eigenvalue,
        parsed[0].eigenvalue == result.eigenvalues[0]
    );
    Ok(())
}
