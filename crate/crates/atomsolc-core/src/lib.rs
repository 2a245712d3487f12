//! Simulator for a two-level atom coupled to a single cavity mode whose
//! coupling constant flips sign after each of `N` equal time segments
//! ("periodic poling" of the interaction, the atomic analogue of a folded
//! Šolc filter).
//!
//! The crate evaluates the photoemission probability of the atom after the
//! full interaction three independent ways — a strict sequential product of
//! per-segment 2×2 unitaries, closed forms built on the Chebyshev identity
//! for powers of unimodular matrices, and a Runge–Kutta integration of the
//! Bloch equation — and layers analysis tools on top: quasi-phase-matching
//! loci, filter-like passband spectra, Fourier spectra of the poled coupling,
//! and Mandel-Q photon-statistics maps for the micromaser regime.
//!
//! Everything is expressed in the dimensionless pair (η, δ): η is the Rabi
//! pulse area accumulated over one segment and δ the detuning–segment-time
//! product. See [`params`] for the conversions from physical quantities.
//!
//! The sequential matrix product ([`transfer::emission_direct`]) is the
//! reference implementation; closed forms and tabulated polynomials are
//! validated against it, not the other way around.

pub mod analysis;
pub mod bloch;
pub mod error;
pub mod params;
pub mod sweep;
pub mod transfer;

pub use error::Error;
pub use params::{PhysicalParams, PolarParams, ReducedParams, State2};
