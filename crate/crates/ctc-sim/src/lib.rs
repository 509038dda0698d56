//! Density-matrix simulation of causality-respecting (CR) quantum systems
//! interacting with closed timelike curves (CTCs) under the Deutsch
//! self-consistency condition.
//!
//! The library is organized in four layers:
//!
//! - [`qmath`] — finite-dimensional complex linear algebra: tensor products,
//!   partial traces, Hermitian spectral decompositions, entropies, distances,
//!   and Haar sampling.
//! - [`deutsch`] — the Deutsch-model core: the consistency map, its
//!   fixed-point set, maximum-entropy selection, the nonlinear CR output, and
//!   the ε-close relaxation.
//! - [`protocols`] — swap-based interaction circuits and the named protocols:
//!   popping up, elimination, cloning, deleting, CR-CTC state creation, the
//!   no-entanglement verdict, and teleportation to a CTC.
//! - [`runner`] — JSON scenario parsing, experiment dispatch, and CSV
//!   emission for reproducible sweeps.
//!
//! The `examples/` directory holds one runnable program per capability; the
//! `ctc-sim` binary drives scenario files from the command line.

pub mod deutsch;
pub mod error;
pub mod protocols;
pub mod qmath;
pub mod runner;

pub use error::{Error, Result};
