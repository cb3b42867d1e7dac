//! Equipower mode-vector-modulation (MVM) constellations in generalized
//! Jones/Stokes space.
//!
//! The crate is organized bottom-up:
//!
//! - [`jones`]: unit Jones vectors, the Gell-Mann basis, Stokes embedding,
//!   pair geometry and the four distance metrics.
//! - [`specfun`]: scaled modified Bessel `I0`, first-order Marcum Q and erfc.
//! - [`errprob`]: exact and asymptotic pairwise error probabilities, symbol
//!   and bit union bounds, SNR inversion.
//! - [`shaping`]: Coulomb and union-bound potentials, projected gradient
//!   descent, deterministic generators (hypercube, SIC-POVM, orthogonal).
//! - [`mapping`]: bit-to-symbol labeling by simulated annealing.
//! - [`channel`]: Monte-Carlo simulation of the ASE-limited channel with ML
//!   detection.
//!
//! Heavy loops (pair sums, SNR sweeps, trial blocks) go through [`par`],
//! which runs on rayon when the `parallel` feature is on and falls back to
//! sequential iteration otherwise. Reductions are always done in a fixed
//! order so results do not depend on the worker count.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod constellation;
pub mod error;
pub mod errprob;
pub mod jones;
pub mod mapping;
pub mod par;
pub mod shaping;
pub mod specfun;

pub use constellation::Constellation;
pub use error::{Error, Result};
pub use jones::{JonesVector, PairGeometry, StokesVector};
pub use num_complex::Complex64;
