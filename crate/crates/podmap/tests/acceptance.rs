//! End-to-end acceptance gate. Each test covers one criterion and prints a
//! single pass/fail line.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;

use podmap::align::{build_trace, detect_peak_abscissa, Detector, SkipRule};
use podmap::field::{
    inner_product, norm, Field, Grid, Label, Snapshot, SnapshotSet, SubdomainMask,
};
use podmap::gen::{lagrange_sampling, rotating_wake_2d, CylinderKinematics, WakeSpec};
use podmap::maps::{mobius_inverse, pullback, pullback_set, MapFamily, ParamTrace, TransportMap};
use podmap::pod::{nwidth_surrogate, pod, pod_greedy, projection_error};

fn criterion(n: usize, name: &str, f: impl FnOnce() -> Result<String, String>) {
    match f() {
        Ok(detail) => println!("criterion {n} ({name}): PASS [{detail}]"),
        Err(detail) => {
            println!("criterion {n} ({name}): FAIL [{detail}]");
            panic!("criterion {n} ({name}) failed: {detail}");
        }
    }
}

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    check(
        elapsed <= budget,
        format!("runtime {elapsed:?} exceeds budget {budget:?}"),
    )
}

fn modes_to(eigenvalues: &[f64], target: f64) -> usize {
    (1..=eigenvalues.len())
        .find(|n| nwidth_surrogate(eigenvalues, *n) <= target)
        .unwrap_or(eigenvalues.len())
}

#[test]
fn criterion_1_pure_transport_collapse() {
    criterion(1, "pure transport collapse", || {
        let start = Instant::now();
        let n = 1024;
        let h = 1.0 / n as f64;
        let grid = Grid::line(0.0, h, n).map_err(|e| e.to_string())?;
        let period = grid.period(0);
        let pulse = |x: f64| (-((x - 0.5) / 0.05).powi(2)).exp();
        let shifts: Vec<f64> = (0..100).map(|j| j as f64 * 10.0 * h).collect();
        let snaps = shifts
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let f = Field::scalar_from_fn(Arc::clone(&grid), move |x, _| {
                    pulse((x - s).rem_euclid(period))
                })
                .unwrap();
                Snapshot::new(f, Label { time: i as f64, param: None }).unwrap()
            })
            .collect();
        let set = SnapshotSet::new(snaps).map_err(|e| e.to_string())?;
        let mask = SubdomainMask::all(grid);

        let raw = pod(&set, &mask, None, None).map_err(|e| e.to_string())?;
        let raw_ratio = raw.eigenvalues[9] / raw.eigenvalues[0];
        check(raw_ratio >= 1e-6, format!("raw l10/l1 = {raw_ratio:.3e} < 1e-6"))?;

        let trace = ParamTrace::new(
            MapFamily::Translation { periodic: true },
            shifts,
            vec![false; set.len()],
        )
        .map_err(|e| e.to_string())?;
        let aligned = pullback_set(&set, &trace, &mask).map_err(|e| e.to_string())?;
        let pre = pod(&aligned, &mask, None, None).map_err(|e| e.to_string())?;
        let pre_ratio = pre.eigenvalues[1] / pre.eigenvalues[0];
        check(
            pre_ratio <= 1e-20,
            format!("aligned l2/l1 = {pre_ratio:.3e} > 1e-20"),
        )?;
        within(start, Duration::from_secs(5))?;
        Ok(format!(
            "raw l10/l1 = {raw_ratio:.2e}, aligned l2/l1 = {pre_ratio:.2e}, {:?}",
            start.elapsed()
        ))
    });
}

#[test]
fn criterion_2_burgers_translation() {
    criterion(2, "Burgers translation alignment", || {
        let start = Instant::now();
        let set = podmap::cli::burgers_case(1e-3).map_err(|e| e.to_string())?;
        check(
            set.len() == 150 && set.grid().node_count() == 1024,
            format!("{} snapshots on {} nodes", set.len(), set.grid().node_count()),
        )?;
        let mask = SubdomainMask::all(set.grid().clone());
        let family = MapFamily::Translation { periodic: false };
        let built = build_trace(&set, &Detector::Peak, &family, &SkipRule::default())
            .map_err(|e| e.to_string())?;
        let aligned = pullback_set(&set, &built.trace, &mask).map_err(|e| e.to_string())?;
        let raw = pod(&set, &mask, None, None).map_err(|e| e.to_string())?;
        let pre = pod(&aligned, &mask, None, None).map_err(|e| e.to_string())?;
        let ratio = pre.eigenvalues[9] / raw.eigenvalues[9];
        check(ratio <= 1e-2, format!("l10 pre/raw = {ratio:.3e} > 1e-2"))?;
        within(start, Duration::from_secs(30))?;
        Ok(format!("l10 pre/raw = {ratio:.2e}, {:?}", start.elapsed()))
    });
}

#[test]
fn criterion_3_pulse_stretch() {
    criterion(3, "pulse stretch alignment", || {
        let start = Instant::now();
        let set = podmap::cli::pulse_case(500.0).map_err(|e| e.to_string())?;
        check(
            set.len() == 110 && set.grid().counts() == [256, 64],
            format!("{} snapshots on {:?}", set.len(), set.grid().counts()),
        )?;
        let grid = set.grid().clone();
        let mask = SubdomainMask::all(grid.clone());
        let family = MapFamily::Mobius { length: grid.extent(0) };
        let built = build_trace(&set, &Detector::Peak, &family, &SkipRule::default())
            .map_err(|e| e.to_string())?;
        let skipped = built.trace.skip_flags().iter().filter(|s| **s).count();
        check(
            skipped > 0,
            "skip rule never fired during the growth phase".into(),
        )?;
        let aligned = pullback_set(&set, &built.trace, &mask).map_err(|e| e.to_string())?;
        let raw = pod(&set, &mask, None, None).map_err(|e| e.to_string())?;
        let pre = pod(&aligned, &mask, None, None).map_err(|e| e.to_string())?;
        let n_raw = modes_to(&raw.eigenvalues, 1e-3);
        let n_pre = modes_to(&pre.eigenvalues, 1e-3);
        check(
            n_raw >= n_pre + 5,
            format!("mode drop {} < 5 (raw {n_raw}, pre {n_pre})", n_raw as i64 - n_pre as i64),
        )?;
        within(start, Duration::from_secs(60))?;
        Ok(format!(
            "modes to 1e-3: raw {n_raw}, pre {n_pre} ({skipped} skipped), {:?}",
            start.elapsed()
        ))
    });
}

#[test]
fn criterion_4_rotating_wake() {
    criterion(4, "rotating wake alignment over parameters", || {
        let start = Instant::now();
        let k = CylinderKinematics::desk_scale();
        let n = 129;
        let h = 16.0 / (n - 1) as f64;
        let grid = Grid::rect([-8.0, -8.0], [h, h], [n, n]).map_err(|e| e.to_string())?;
        let mask = SubdomainMask::disk(grid.clone(), [0.0, 0.0], 7.0 * k.radius)
            .map_err(|e| e.to_string())?;
        let params = lagrange_sampling(47.0, 150.0, 3).map_err(|e| e.to_string())?;
        let mut detail = String::new();
        for mu in &params {
            let spec = WakeSpec::for_reynolds(&k, *mu).map_err(|e| e.to_string())?;
            let wake = rotating_wake_2d(&k, &spec, &grid, &mask, 0.25, k.t_final, Some(*mu))
                .map_err(|e| e.to_string())?;
            let family = MapFamily::Rotation { center: [0.0, 0.0] };
            let detector = Detector::WakeAngle {
                center: [0.0, 0.0],
                r_inner: 1.4,
                r_outer: 7.0,
            };
            let built = build_trace(&wake.set, &detector, &family, &SkipRule::default())
                .map_err(|e| e.to_string())?;
            let aligned =
                pullback_set(&wake.set, &built.trace, &mask).map_err(|e| e.to_string())?;
            let raw = pod(&wake.set, &mask, None, None).map_err(|e| e.to_string())?;
            let pre = pod(&aligned, &mask, None, None).map_err(|e| e.to_string())?;
            let ratio = pre.eigenvalues[9] / raw.eigenvalues[9];
            check(
                ratio <= 1e-2,
                format!("mu = {mu:.2}: l10 pre/raw = {ratio:.3e} > 1e-2"),
            )?;
            detail.push_str(&format!("mu {mu:.0}: {ratio:.1e}; "));
        }
        within(start, Duration::from_secs(120))?;
        Ok(format!("{detail}{:?}", start.elapsed()))
    });
}

/// Cyclic Jacobi eigensolver, written independently of the library's POD
/// path, used as the dense oracle.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sgn / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

#[test]
fn criterion_5_pod_oracle_equivalence() {
    criterion(5, "POD matches dense eigen oracle", || {
        let n_nodes = 500;
        let k = 20;
        let grid = Grid::line(0.0, 1.0 / (n_nodes - 1) as f64, n_nodes).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let snaps: Vec<Snapshot> = (0..k)
            .map(|i| {
                let values: Vec<f64> = (0..n_nodes).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Snapshot::new(
                    Field::from_values(grid.clone(), 1, values).unwrap(),
                    Label { time: i as f64, param: None },
                )
                .unwrap()
            })
            .collect();
        let set = SnapshotSet::new(snaps).map_err(|e| e.to_string())?;
        let mask = SubdomainMask::all(grid.clone());

        // Explicit Gram assembly with plain loops over weights and values.
        let w = grid.weights();
        let mut gram = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                let a = set.get(i).field().values();
                let b = set.get(j).field().values();
                gram[i][j] = (0..n_nodes).map(|m| w[m] * a[m] * b[m]).sum();
            }
        }
        let oracle = jacobi_eigenvalues(gram);

        let result = pod(&set, &mask, None, None).map_err(|e| e.to_string())?;
        let lmax = oracle[0];
        let mut worst = 0.0f64;
        for (a, b) in result.eigenvalues.iter().zip(&oracle) {
            worst = worst.max((a - b).abs() / lmax);
        }
        check(worst <= 1e-10, format!("eigenvalue mismatch {worst:.3e} > 1e-10"))?;

        // Trace identity: eigenvalue sum equals total snapshot energy.
        let total: f64 = result.eigenvalues.iter().sum();
        let energy: f64 = set
            .iter()
            .map(|s| {
                let v = s.field().values();
                (0..n_nodes).map(|m| w[m] * v[m] * v[m]).sum::<f64>()
            })
            .sum();
        let rel = (total - energy).abs() / energy;
        check(rel <= 1e-8, format!("trace identity off by {rel:.3e}"))?;
        Ok(format!("eigenvalue error {worst:.1e}, trace error {rel:.1e}"))
    });
}

#[test]
fn criterion_6_greedy_properties() {
    criterion(6, "greedy compression properties", || {
        let grid = Grid::line(0.0, 1.0 / 299.0, 300).map_err(|e| e.to_string())?;
        let mask = SubdomainMask::all(grid.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sets: Vec<SnapshotSet> = (0..3)
            .map(|p| {
                let snaps = (0..8)
                    .map(|i| {
                        let c = 0.15 + 0.2 * p as f64 + 0.03 * i as f64;
                        let wjit: f64 = rng.gen_range(0.0..0.01);
                        Snapshot::new(
                            Field::scalar_from_fn(grid.clone(), move |x, _| {
                                (-((x - c) / (0.06 + wjit)).powi(2)).exp()
                            })
                            .unwrap(),
                            Label { time: i as f64, param: Some(p as f64) },
                        )
                        .unwrap()
                    })
                    .collect();
                SnapshotSet::new(snaps).unwrap()
            })
            .collect();

        let greedy = pod_greedy(&sets, &mask, None, None).map_err(|e| e.to_string())?;
        let mut ortho = 0.0f64;
        for i in 0..greedy.modes.len() {
            for j in i..greedy.modes.len() {
                let ip = inner_product(&greedy.modes[i], &greedy.modes[j], &mask)
                    .map_err(|e| e.to_string())?;
                let expect = if i == j { 1.0 } else { 0.0 };
                ortho = ortho.max((ip - expect).abs());
            }
        }
        check(ortho <= 1e-10, format!("orthonormality error {ortho:.3e} > 1e-10"))?;

        // Aggregate training error over all sets, non-increasing per stage.
        let mut prev = f64::INFINITY;
        let mut upto = 0;
        for stage in &greedy.stages {
            upto += stage.modes_added;
            let basis = &greedy.modes[..upto];
            let mut err_sq = 0.0;
            let mut norm_sq = 0.0;
            for set in &sets {
                for s in set.iter() {
                    let e = projection_error(
                        &SnapshotSet::new(vec![s.clone()]).unwrap(),
                        basis,
                        &mask,
                    )
                    .map_err(|e| e.to_string())?;
                    let n = norm(s.field(), &mask).map_err(|e| e.to_string())?;
                    err_sq += (e.aggregate * n).powi(2);
                    norm_sq += n * n;
                }
            }
            let agg = (err_sq / norm_sq).sqrt();
            check(
                agg <= prev + 1e-12,
                format!("stage error grew: {agg:.3e} > {prev:.3e}"),
            )?;
            prev = agg;
        }

        // One parameter set: greedy reduces to a plain POD.
        let single = pod_greedy(&sets[..1], &mask, None, None).map_err(|e| e.to_string())?;
        let plain = pod(&sets[0], &mask, None, None).map_err(|e| e.to_string())?;
        check(
            single.modes.len() == plain.modes.len(),
            format!("{} greedy modes vs {} plain", single.modes.len(), plain.modes.len()),
        )?;
        let lmax = plain.eigenvalues[0];
        let mut dev = 0.0f64;
        for (a, b) in single.stages[0].eigenvalues.iter().zip(&plain.eigenvalues) {
            dev = dev.max((a - b).abs() / lmax);
        }
        for (g, p) in single.modes.iter().zip(&plain.modes) {
            let ip = inner_product(g, p, &mask).map_err(|e| e.to_string())?;
            dev = dev.max((ip.abs() - 1.0).abs());
        }
        check(dev <= 1e-12, format!("single-parameter deviation {dev:.3e} > 1e-12"))?;
        Ok(format!(
            "orthonormality {ortho:.1e}, single-parameter deviation {dev:.1e}"
        ))
    });
}

#[test]
fn criterion_7_map_properties() {
    criterion(7, "transport map property suite", || {
        let length = 6.0;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let gamma = rng.gen_range(0.05 * length..0.95 * length);
            let at = |x: f64| mobius_inverse(gamma, length, x).unwrap();
            check(at(0.0) == 0.0, format!("endpoint 0 moved at gamma {gamma}"))?;
            check(at(length) == length, format!("endpoint L moved at gamma {gamma}"))?;
            check(
                at(length / 2.0) == gamma,
                format!("midpoint image != gamma at {gamma}"),
            )?;
            let x1 = rng.gen_range(0.0..length);
            let x2 = rng.gen_range(x1..length) + 1e-9;
            check(
                at(x1) < at(x2.min(length)),
                format!("monotonicity broken at gamma {gamma}: {x1} vs {x2}"),
            )?;
        }

        // Rotation round trip: sup error drops >= 3.5x when h halves.
        let theta = 0.8;
        let sup_error = |n: usize| -> f64 {
            let h = 2.0 / (n - 1) as f64;
            let grid = Grid::rect([-1.0, -1.0], [h, h], [n, n]).unwrap();
            let mask = SubdomainMask::disk(grid.clone(), [0.0, 0.0], 0.95).unwrap();
            let f = Field::scalar_from_fn(grid.clone(), |x, y| {
                (-((x * x + y * y) / 0.15)).exp() * (2.5 * x).sin() * (1.5 * y).cos()
            })
            .unwrap();
            let s = Snapshot::new(f, Label { time: 0.0, param: None }).unwrap();
            let m = TransportMap::Rotation { center: [0.0, 0.0], theta };
            let there = pullback(&s, &m, &mask).unwrap();
            let back = pullback(&there, &m.inverse(), &mask).unwrap();
            let mut sup = 0.0f64;
            for node in 0..grid.node_count() {
                let [x, y] = grid.coord(node);
                if x.hypot(y) <= 0.7 {
                    sup = sup.max((back.field().value(node, 0) - s.field().value(node, 0)).abs());
                }
            }
            sup
        };
        let (coarse, fine) = (sup_error(65), sup_error(129));
        let gain = coarse / fine;
        check(gain >= 3.5, format!("refinement gain {gain:.2} < 3.5"))?;

        // Identity parameters leave the bits untouched.
        let grid = Grid::rect([0.0, 0.0], [0.05, 0.05], [41, 41]).map_err(|e| e.to_string())?;
        let mask_all = SubdomainMask::all(grid.clone());
        let disk = SubdomainMask::disk(grid.clone(), [1.0, 1.0], 0.9).map_err(|e| e.to_string())?;
        let f = Field::scalar_from_fn(grid.clone(), |x, y| (x * 1.7).sin() + 0.3 * y)
            .map_err(|e| e.to_string())?;
        let s = Snapshot::new(f, Label { time: 0.0, param: None }).map_err(|e| e.to_string())?;
        for (map, mask) in [
            (TransportMap::Translation { shift: [0.0, 0.0], periodic: false }, &mask_all),
            (TransportMap::Mobius { length: 2.0, gamma: 1.0 }, &mask_all),
            (TransportMap::Rotation { center: [1.0, 1.0], theta: 0.0 }, &disk),
        ] {
            let out = pullback(&s, &map, mask).map_err(|e| e.to_string())?;
            let same = out
                .field()
                .values()
                .iter()
                .zip(s.field().values())
                .all(|(a, b)| a.to_bits() == b.to_bits());
            check(same, format!("identity pullback not bit-exact for {map:?}"))?;
        }
        Ok(format!("refinement gain {gain:.2}"))
    });
}

#[test]
fn criterion_8_detectors() {
    criterion(8, "detector suite", || {
        // Peak equivariance under integer shifts, exact.
        let n = 200;
        let h = 0.005;
        let grid = Grid::line(0.0, h, n).map_err(|e| e.to_string())?;
        let base: Vec<f64> = (0..n)
            .map(|i| (-(((i as f64 * h) - 0.31) / 0.04).powi(2)).exp())
            .collect();
        let peak_node = |values: Vec<f64>| -> f64 {
            let f = Field::from_values(grid.clone(), 1, values).unwrap();
            let s = Snapshot::new(f, Label { time: 0.0, param: None }).unwrap();
            detect_peak_abscissa(&s).unwrap().abscissa
        };
        let p0 = peak_node(base.clone());
        for shift in [1usize, 7, 40, 90] {
            let mut shifted = vec![0.0; n];
            for i in 0..n - shift {
                shifted[i + shift] = base[i];
            }
            let p = peak_node(shifted);
            let expected = grid.coord(62 + shift)[0];
            check(
                p == expected,
                format!("shift {shift}: peak {p} != node coordinate {expected}"),
            )?;
        }
        check(p0 == grid.coord(62)[0], format!("base peak {p0} not at node 62"))?;

        // Wake angle vs generator ground truth across the whole ramp.
        let k = CylinderKinematics::desk_scale();
        let spec = WakeSpec::for_kinematics(&k);
        let nw = 129;
        let hw = 16.0 / (nw - 1) as f64;
        let wgrid = Grid::rect([-8.0, -8.0], [hw, hw], [nw, nw]).map_err(|e| e.to_string())?;
        let mask = SubdomainMask::disk(wgrid.clone(), [0.0, 0.0], 7.0).map_err(|e| e.to_string())?;
        let wake = rotating_wake_2d(&k, &spec, &wgrid, &mask, 0.25, k.t_final, None)
            .map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for (s, expect) in wake.set.iter().zip(&wake.theta) {
            let got = podmap::align::detect_wake_angle(s, [0.0, 0.0], 1.4, 7.0)
                .map_err(|e| e.to_string())?;
            let tau = std::f64::consts::TAU;
            let d = (got - expect).rem_euclid(tau);
            worst = worst.max(d.min(tau - d));
        }
        check(worst <= 0.02, format!("wake angle error {worst:.4} rad > 0.02"))?;
        Ok(format!("peak shifts exact, wake angle error {worst:.1e} rad"))
    });
}

#[test]
fn criterion_9_io_and_cli_pipeline() {
    criterion(9, "bundle I/O and CLI pipeline", || {
        use podmap::io::{read_bundle, read_decay_csv, write_bundle, write_decay_csv};
        use podmap::pod::decay_report;

        // Bit-exact bundle round trip on awkward values.
        let grid = Grid::rect([0.0, 0.0], [0.1, 0.1], [8, 8]).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let snaps: Vec<Snapshot> = (0..5)
            .map(|i| {
                let values: Vec<f64> = (0..128).map(|_| rng.gen_range(-1e3..1e3)).collect();
                Snapshot::new(
                    Field::from_values(grid.clone(), 2, values).unwrap(),
                    Label { time: 0.1 * i as f64, param: Some(1.0 / 3.0) },
                )
                .unwrap()
            })
            .collect();
        let set = SnapshotSet::new(snaps).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let bdir = dir.path().join("bundle");
        write_bundle(&set, None, None, &bdir).map_err(|e| e.to_string())?;
        let loaded = read_bundle(&bdir).map_err(|e| e.to_string())?;
        for (a, b) in loaded.set.iter().zip(set.iter()) {
            let same = a
                .field()
                .values()
                .iter()
                .zip(b.field().values())
                .all(|(x, y)| x.to_bits() == y.to_bits());
            check(same && a.label() == b.label(), "bundle round trip not bit-exact".into())?;
        }

        // Decay CSV parse-back is exact.
        let mask = SubdomainMask::all(grid);
        let result = pod(&set, &mask, None, None).map_err(|e| e.to_string())?;
        let report = decay_report(&result);
        let csv = dir.path().join("decay.csv");
        write_decay_csv(&report, &csv).map_err(|e| e.to_string())?;
        let parsed = read_decay_csv(&csv).map_err(|e| e.to_string())?;
        check(parsed == report, "decay CSV parse-back not exact".into())?;

        // Full CLI pipeline on the pulse case, every step exit 0.
        let root = dir.path();
        let raw_dir = root.join("raw");
        let pre_dir = root.join("pre");
        let raw_csv = root.join("raw.csv");
        let pre_csv = root.join("pre.csv");
        let steps: Vec<Vec<String>> = vec![
            vec![
                "podmap".into(),
                "generate".into(),
                "--case".into(),
                "fsi-pulse".into(),
                "--out".into(),
                raw_dir.display().to_string(),
            ],
            vec![
                "podmap".into(),
                "pod".into(),
                "--bundle".into(),
                raw_dir.display().to_string(),
                "--report".into(),
                raw_csv.display().to_string(),
            ],
            vec![
                "podmap".into(),
                "align".into(),
                "--bundle".into(),
                raw_dir.display().to_string(),
                "--family".into(),
                "mobius".into(),
            ],
            vec![
                "podmap".into(),
                "preprocess".into(),
                "--bundle".into(),
                raw_dir.display().to_string(),
                "--out".into(),
                pre_dir.display().to_string(),
            ],
            vec![
                "podmap".into(),
                "pod".into(),
                "--bundle".into(),
                pre_dir.display().to_string(),
                "--report".into(),
                pre_csv.display().to_string(),
            ],
            vec![
                "podmap".into(),
                "compare".into(),
                "--raw".into(),
                raw_csv.display().to_string(),
                "--pre".into(),
                pre_csv.display().to_string(),
            ],
        ];
        for argv in steps {
            let code = podmap::cli::run(argv.clone());
            check(code == 0, format!("step {:?} exited {code}", argv[1]))?;
        }
        Ok("round trip bit-exact, CSV exact, pipeline exit 0".into())
    });
}
