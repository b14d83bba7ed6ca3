//! Desk-scale snapshot sources covering the three transport regimes the
//! preprocessing targets: a 1D viscous Burgers front (translation), a
//! growth-then-transport pressure pulse (stretch), and a rotating wake
//! driven by cylinder kinematics (rotation), plus the cylinder kinematic
//! formulas and the geometric parameter sampling.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Grid, Label, Snapshot, SnapshotSet, SubdomainMask};

/// Cylinder spin-up schedule and flow scales.
///
/// The cylinder is at rest until `t1`, accelerates at constant rate `beta`
/// until `t2`, then spins at constant angular velocity until `t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderKinematics {
    /// Initial angular velocity (rad/s, zero in all cases considered).
    pub omega0: f64,
    /// Angular acceleration during the ramp (rad/s^2).
    pub beta: f64,
    /// Ramp start (s).
    pub t1: f64,
    /// Ramp end (s).
    pub t2: f64,
    /// End of the simulation window (s).
    pub t_final: f64,
    /// Cylinder radius (length units).
    pub radius: f64,
    /// Free-stream speed (length/s).
    pub u_inf: f64,
}

impl CylinderKinematics {
    pub fn new(
        beta: f64,
        t1: f64,
        t2: f64,
        t_final: f64,
        radius: f64,
        u_inf: f64,
    ) -> Result<CylinderKinematics> {
        if !(0.0 <= t1 && t1 <= t2 && t2 <= t_final) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= t1 <= t2 <= t_final, got ({t1}, {t2}, {t_final})"
            )));
        }
        if !(beta >= 0.0) || !(radius > 0.0) || !(u_inf > 0.0) {
            return Err(Error::InvalidParameter(
                "beta must be >= 0, radius and u_inf positive".into(),
            ));
        }
        Ok(CylinderKinematics {
            omega0: 0.0,
            beta,
            t1,
            t2,
            t_final,
            radius,
            u_inf,
        })
    }

    /// Desk-scale defaults: short ramp, order-one rotation of the wake.
    pub fn desk_scale() -> CylinderKinematics {
        CylinderKinematics::new(0.25, 1.0, 3.0, 6.0, 1.0, 1.0).unwrap()
    }
}

/// Piecewise angular velocity of the cylinder: zero before `t1`, linear ramp
/// on `[t1, t2]`, constant plateau afterwards.
pub fn angular_velocity(t: f64, k: &CylinderKinematics) -> Result<f64> {
    if !(0.0 <= t && t <= k.t_final) {
        return Err(Error::Contract(format!(
            "time {t} outside the kinematic window [0, {}]",
            k.t_final
        )));
    }
    Ok(if t <= k.t1 {
        k.omega0
    } else if t <= k.t2 {
        k.omega0 + k.beta * (t - k.t1)
    } else {
        k.omega0 + k.beta * (k.t2 - k.t1)
    })
}

/// Dimensionless rotation rate `D * omega / (2 * U_inf)` with `D = 2r`.
pub fn rotation_rate(k: &CylinderKinematics, omega: f64) -> f64 {
    (2.0 * k.radius) * omega / (2.0 * k.u_inf)
}

/// Speed of a point on the cylinder surface, `omega * r`.
pub fn tangential_speed(omega: f64, radius: f64) -> f64 {
    omega * radius
}

/// Integrated wake angle `kappa * integral of angular_velocity`, in closed
/// form.
pub fn wake_angle_at(t: f64, k: &CylinderKinematics, kappa: f64) -> Result<f64> {
    angular_velocity(t, k)?; // window check
    let ramp = k.t2 - k.t1;
    Ok(kappa
        * if t <= k.t1 {
            0.0
        } else if t <= k.t2 {
            k.beta * (t - k.t1).powi(2) / 2.0
        } else {
            k.beta * ramp * ramp / 2.0 + k.beta * ramp * (t - k.t2)
        })
}

/// Geometric (log-uniform) parameter sampling between two bounds.
pub fn lagrange_sampling(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && min < max) {
        return Err(Error::Contract(format!(
            "need 0 < min < max, got ({min}, {max})"
        )));
    }
    if n < 2 {
        return Err(Error::Contract(format!("need at least 2 samples, got {n}")));
    }
    let ratio = (max / min).ln();
    Ok((0..n)
        .map(|i| min * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// Viscous Burgers solve on a 1D grid: explicit upwind advection, implicit
/// diffusion (tridiagonal solve), Dirichlet inflow at the left end and free
/// outflow at the right end.
///
/// A snapshot is recorded at the initial time and then after every
/// `output_stride` steps. The time step must satisfy both
/// `dt <= spacing / max|u|` and `dt <= spacing^2 / (2 nu)`, checked at every
/// step.
pub fn burgers_1d(
    nu: f64,
    grid: &Arc<Grid>,
    dt: f64,
    t_final: f64,
    initial: &Field,
    inflow: f64,
    output_stride: usize,
) -> Result<SnapshotSet> {
    if grid.dim() != 1 {
        return Err(Error::Contract("the Burgers solver works on 1D grids".into()));
    }
    if **initial.grid() != **grid || initial.arity() != 1 {
        return Err(Error::GridMismatch(
            "initial condition must be a scalar field on the solver grid".into(),
        ));
    }
    if !(nu >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "viscosity must be >= 0, got {nu}"
        )));
    }
    if !(dt > 0.0) || output_stride == 0 {
        return Err(Error::InvalidParameter(
            "need dt > 0 and a positive output stride".into(),
        ));
    }

    let n = grid.node_count();
    let h = grid.spacing()[0];
    let steps = (t_final / dt).round() as usize;
    let mut u: Vec<f64> = initial.values().to_vec();
    u[0] = inflow;

    let mut snaps = Vec::new();
    let push = |u: &[f64], t: f64, snaps: &mut Vec<Snapshot>| -> Result<()> {
        let f = Field::from_values(grid.clone(), 1, u.to_vec())?;
        snaps.push(Snapshot::new(f, Label { time: t, param: None })?);
        Ok(())
    };
    push(&u, 0.0, &mut snaps)?;

    let r = nu * dt / (h * h);
    // Thomas factorization workspaces for (I - r * second difference).
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut ustar = vec![0.0; n];

    for step in 1..=steps {
        let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let adv_bound = if umax > 0.0 { h / umax } else { f64::INFINITY };
        let diff_bound = if nu > 0.0 { h * h / (2.0 * nu) } else { f64::INFINITY };
        let bound = adv_bound.min(diff_bound);
        if dt > bound {
            return Err(Error::StepSize(format!(
                "dt = {dt} exceeds min(spacing/max|u|, spacing^2/(2 nu)) = {bound}"
            )));
        }

        // Explicit upwind advection in conservative form (Engquist-Osher
        // flux split), so fronts travel at the correct speed.
        let fplus = |v: f64| if v > 0.0 { v * v / 2.0 } else { 0.0 };
        let fminus = |v: f64| if v < 0.0 { v * v / 2.0 } else { 0.0 };
        ustar[0] = inflow;
        for i in 1..n {
            let right = if i + 1 < n { u[i + 1] } else { u[n - 1] };
            let f_right = fplus(u[i]) + fminus(right);
            let f_left = fplus(u[i - 1]) + fminus(u[i]);
            ustar[i] = u[i] - dt * (f_right - f_left) / h;
        }

        if nu > 0.0 {
            // Implicit diffusion: Dirichlet at the inflow, zero-gradient at
            // the outflow (ghost node mirrors the last interior node).
            cp[0] = 0.0;
            dp[0] = inflow;
            for i in 1..n - 1 {
                let denom = 1.0 + 2.0 * r + r * cp[i - 1];
                cp[i] = -r / denom;
                dp[i] = (ustar[i] + r * dp[i - 1]) / denom;
            }
            let denom = 1.0 + r + r * cp[n - 2];
            dp[n - 1] = (ustar[n - 1] + r * dp[n - 2]) / denom;
            u[n - 1] = dp[n - 1];
            for i in (0..n - 1).rev() {
                u[i] = dp[i] - cp[i] * u[i + 1];
            }
        } else {
            u.copy_from_slice(&ustar);
        }
        u[0] = inflow;

        if step % output_stride == 0 {
            push(&u, step as f64 * dt, &mut snaps)?;
        }
    }
    SnapshotSet::new(snaps)
}

/// Inlet pressure pulse driving the traveling-pulse surrogate:
/// `A * (1 - cos(2 pi t / t_in))` on `[0, t_in]`, zero afterwards.
pub fn inlet_pulse(t: f64, spec: &PulseSpec) -> f64 {
    if (0.0..=spec.t_in).contains(&t) {
        spec.amplitude * (1.0 - (2.0 * std::f64::consts::PI * t / spec.t_in).cos())
    } else {
        0.0
    }
}

/// Parameters of the growth-then-transport pressure pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Inlet pulse amplitude scale.
    pub amplitude: f64,
    /// Duration of the inlet pulse (growth phase).
    pub t_in: f64,
    /// Domain length along x.
    pub length: f64,
    /// Transport speed of the peak after the growth phase.
    pub speed: f64,
    /// Gaussian width of the pulse.
    pub width: f64,
}

impl PulseSpec {
    pub fn new(amplitude: f64, t_in: f64, length: f64, speed: f64, width: f64) -> Result<PulseSpec> {
        if !(t_in > 0.0 && length > 0.0 && speed > 0.0 && width > 0.0) {
            return Err(Error::InvalidParameter(
                "pulse spec values must be positive".into(),
            ));
        }
        Ok(PulseSpec {
            amplitude,
            t_in,
            length,
            speed,
            width,
        })
    }

    /// Defaults sized like the reference channel problem: a millisecond
    /// inlet pulse feeding a length-6 channel.
    pub fn channel_default() -> PulseSpec {
        PulseSpec::new(1e3, 2.5e-3, 6.0, 500.0, 0.5).unwrap()
    }

    /// Peak abscissa at time `t`: pinned at the inlet during the growth
    /// phase, then transported at constant speed (kept inside the domain).
    pub fn peak_position(&self, t: f64) -> f64 {
        if t <= self.t_in {
            0.0
        } else {
            (self.speed * (t - self.t_in)).min(0.95 * self.length)
        }
    }

    /// Pulse amplitude at time `t`: the accumulated inlet pulse, constant
    /// after the growth phase.
    pub fn amplitude_at(&self, t: f64) -> f64 {
        let tc = t.clamp(0.0, self.t_in);
        let two_pi = 2.0 * std::f64::consts::PI;
        self.amplitude * (tc - self.t_in / two_pi * (two_pi * tc / self.t_in).sin())
    }
}

/// Analytic traveling-pulse snapshots on a 2D grid: a Gaussian ridge in x
/// times a smooth transverse profile, growing at the inlet during the pulse
/// and then transported downstream. The field is zero at `t = 0`.
pub fn traveling_pulse_2d(
    spec: &PulseSpec,
    grid: &Arc<Grid>,
    dt: f64,
    t_final: f64,
) -> Result<SnapshotSet> {
    if grid.dim() != 2 {
        return Err(Error::Contract("the traveling pulse needs a 2D grid".into()));
    }
    if !(t_final > spec.t_in) {
        return Err(Error::Contract(
            "t_final must exceed the growth phase t_in".into(),
        ));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter("need dt > 0".into()));
    }
    let height = grid.extent(1);
    let y0 = grid.origin()[1];
    let steps = (t_final / dt).round() as usize;
    let mut snaps = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as f64 * dt;
        let a = spec.amplitude_at(t);
        let xi = spec.peak_position(t);
        let w2 = spec.width * spec.width;
        let f = Field::scalar_from_fn(grid.clone(), move |x, y| {
            let transverse = (std::f64::consts::PI * (y - y0) / height).sin();
            a * (-(x - xi).powi(2) / w2).exp() * transverse
        })?;
        snaps.push(Snapshot::new(f, Label { time: t, param: None })?);
    }
    SnapshotSet::new(snaps)
}

/// Shape of the synthetic wake pattern rotated by the cylinder kinematics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WakeSpec {
    /// Streamfunction amplitude.
    pub amplitude: f64,
    /// Streamwise wavelength of the vortex row.
    pub wavelength: f64,
    /// Distance of the wake envelope center downstream of the cylinder.
    pub envelope_dist: f64,
    /// Gaussian radius of the wake envelope.
    pub envelope_sigma: f64,
    /// Vortex shedding frequency (Hz).
    pub shedding_freq: f64,
    /// Wake-deflection gain: the wake angle is this times the integrated
    /// cylinder rotation.
    pub deflection_gain: f64,
}

impl WakeSpec {
    /// Defaults scaled from the kinematics: Strouhal-0.2 shedding, envelope
    /// a few radii downstream.
    pub fn for_kinematics(k: &CylinderKinematics) -> WakeSpec {
        WakeSpec {
            amplitude: 1.0,
            wavelength: 2.5 * k.radius,
            envelope_dist: 3.5 * k.radius,
            envelope_sigma: 1.2 * k.radius,
            shedding_freq: 0.2 * k.u_inf / (2.0 * k.radius),
            deflection_gain: 1.0,
        }
    }

    /// Map a Reynolds-like parameter onto the shedding frequency with the
    /// Roshko fit `St = 0.198 (1 - 19.7 / Re)`.
    pub fn for_reynolds(k: &CylinderKinematics, re: f64) -> Result<WakeSpec> {
        if !(re > 19.7) {
            return Err(Error::InvalidParameter(format!(
                "Reynolds parameter must exceed 19.7 for the Strouhal fit, got {re}"
            )));
        }
        let st = 0.198 * (1.0 - 19.7 / re);
        Ok(WakeSpec {
            shedding_freq: st * k.u_inf / (2.0 * k.radius),
            ..WakeSpec::for_kinematics(k)
        })
    }
}

/// Wake snapshots plus the exact wake-angle trace they were built with.
#[derive(Debug, Clone)]
pub struct WakeSet {
    pub set: SnapshotSet,
    /// Ground-truth wake angle per snapshot.
    pub theta: Vec<f64>,
}

/// Divergence-free vortex-row velocity at a point, from the streamfunction
/// `amp * env(x, y) * sin(k (x - bx) - omega t)` with a Gaussian envelope
/// centered `envelope_dist` downstream of `center`.
fn wake_velocity(spec: &WakeSpec, center: [f64; 2], x: f64, y: f64, t: f64) -> [f64; 2] {
    let bx = center[0] + spec.envelope_dist;
    let by = center[1];
    let sigma2 = spec.envelope_sigma * spec.envelope_sigma;
    let dx = x - bx;
    let dy = y - by;
    let env = spec.amplitude * (-(dx * dx + dy * dy) / (2.0 * sigma2)).exp();
    let k = 2.0 * std::f64::consts::PI / spec.wavelength;
    let omega = 2.0 * std::f64::consts::PI * spec.shedding_freq;
    let phase = k * dx - omega * t;
    let (sp, cp) = phase.sin_cos();
    // u = d(psi)/dy, v = -d(psi)/dx
    let u = -(dy / sigma2) * env * sp;
    let v = (dx / sigma2) * env * sp - env * k * cp;
    [u, v]
}

/// Vector wake snapshots: a fixed vortex-row pattern advected at the
/// shedding frequency, rigidly rotated about the disk-mask center by the
/// integrated cylinder rotation, with vectors rotated covariantly. Nodes
/// outside the mask are zero. Returns the exact angle trace alongside the
/// snapshots.
pub fn rotating_wake_2d(
    k: &CylinderKinematics,
    spec: &WakeSpec,
    grid: &Arc<Grid>,
    mask: &SubdomainMask,
    dt: f64,
    t_final: f64,
    param: Option<f64>,
) -> Result<WakeSet> {
    if grid.dim() != 2 {
        return Err(Error::Contract("the rotating wake needs a 2D grid".into()));
    }
    if **mask.grid() != **grid {
        return Err(Error::GridMismatch("mask must live on the wake grid".into()));
    }
    let center = match *mask.kind() {
        crate::field::MaskKind::Disk { center, radius } => {
            // Disk must sit strictly inside the grid.
            let x0 = grid.origin()[0];
            let y0 = grid.origin()[1];
            if center[0] - radius < x0
                || center[1] - radius < y0
                || center[0] + radius > x0 + grid.extent(0)
                || center[1] + radius > y0 + grid.extent(1)
            {
                return Err(Error::Contract(
                    "the disk mask must lie strictly inside the grid".into(),
                ));
            }
            center
        }
        _ => {
            return Err(Error::Contract(
                "the rotating wake requires a disk mask".into(),
            ))
        }
    };
    if !(dt > 0.0) || !(t_final <= k.t_final) {
        return Err(Error::InvalidParameter(
            "need dt > 0 and t_final within the kinematic window".into(),
        ));
    }

    let steps = (t_final / dt).round() as usize;
    let mut snaps = Vec::with_capacity(steps + 1);
    let mut theta_trace = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as f64 * dt;
        let theta = wake_angle_at(t, k, spec.deflection_gain)?;
        theta_trace.push(theta);
        let (st, ct) = theta.sin_cos();

        let mut values = vec![0.0; grid.node_count() * 2];
        for node in 0..grid.node_count() {
            if !mask.contains(node) {
                continue;
            }
            let [x, y] = grid.coord(node);
            // Evaluate the frozen pattern at the back-rotated point and
            // rotate the velocity vector forward.
            let rx = x - center[0];
            let ry = y - center[1];
            let px = center[0] + ct * rx + st * ry;
            let py = center[1] - st * rx + ct * ry;
            let [u, v] = wake_velocity(spec, center, px, py, t);
            values[node * 2] = ct * u - st * v;
            values[node * 2 + 1] = st * u + ct * v;
        }
        let f = Field::from_values(grid.clone(), 2, values)?;
        snaps.push(Snapshot::new(f, Label { time: t, param })?);
    }
    Ok(WakeSet {
        set: SnapshotSet::new(snaps)?,
        theta: theta_trace,
    })
}
