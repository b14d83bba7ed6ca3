//! Offline preprocessing pipeline for reduced-order modeling of
//! transport-dominated problems.
//!
//! Traveling or rotating features make POD eigenvalues decay slowly, so
//! linear compression needs many modes. This crate aligns snapshots by
//! composing them with inverse transport maps (translations, a Möbius
//! stretch, rotations) before compression, which restores fast eigenvalue
//! decay. It provides:
//!
//! - structured-grid fields, weighted inner products, subdomain masks
//!   ([`field`]);
//! - invertible transport maps and the pullback operation ([`maps`]);
//! - peak and wake-angle detectors that compute per-snapshot map parameters
//!   ([`align`]);
//! - POD by the method of snapshots, eigenvalue-decay reports, and a greedy
//!   parametric variant ([`pod`]);
//! - synthetic snapshot generators covering the three transport regimes
//!   ([`gen`]);
//! - bundle persistence, CSV reports, and the `podmap` CLI ([`io`],
//!   [`cli`]).
//!
//! The `examples/` directory walks through each capability end to end.

pub mod align;
pub mod cli;
pub mod error;
pub mod field;
pub mod gen;
pub mod io;
pub mod maps;
pub mod pod;

pub use error::{Error, Result};
pub use field::{Field, Grid, Label, MaskKind, Snapshot, SnapshotSet, SubdomainMask};
pub use maps::{MapFamily, ParamTrace, TransportMap};
pub use pod::{DecayRecord, GreedyState, PodResult};
