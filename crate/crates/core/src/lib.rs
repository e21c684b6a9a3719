//! Optimal ambiguous discrimination of internal quantum states using only the
//! bunching and antibunching statistics of identical particles.
//!
//! Every particle carries one qubit of internal state (spin, polarization) and
//! enters its own input arm of a balanced N-port beam splitter. The beam
//! splitter acts on the spatial mode only, so the distribution of output
//! occupation patterns depends on the internal state through the exchange
//! symmetry of bosons or fermions. Comparing those pattern statistics with the
//! Helstrom bound shows when a pure path measurement is already optimal.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, density matrices, partial trace,
//!   trace norm and the symmetric-subspace projector.
//! - [`states`]: closed-form constructors for the aligned, anti-aligned and
//!   maximally mixed states, plus sphere-quadrature oracles.
//! - [`multiport`]: exact second-quantized propagation of bosons/fermions
//!   through a DFT multiport and an independent first-quantized oracle.
//! - [`discrimination`]: Helstrom bound, Bayes (MAP) decision rule over
//!   spatial patterns, and beam-splitter reports.
//! - [`applications`]: entanglement detection, symmetric purification, the
//!   classical exclusion model and the N-particle scan.
//!
//! Basis convention: the computational qubit basis with tensor factor 0 as
//! the leftmost (most significant) ket throughout.

#![forbid(unsafe_code)]

pub mod applications;
pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod multiport;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, DensityMatrix, C64};
pub use multiport::Statistics;
