//! Sensing subspace codes.
//!
//! A sensor array with integer positions `d_1..d_M` (in half-wavelength units)
//! observing a single far-field source on a grid of `N` directions induces a
//! code of `N` lines in `C^M`, one per steering vector. This crate builds such
//! codes from Bose-Chowla Golomb rulers, uniform linear arrays or user-supplied
//! rulers, evaluates their minimum subspace distance and the associated bounds,
//! and estimates the error probability of the minimum-distance decoder by
//! seeded Monte Carlo simulation.
//!
//! Modules, bottom-up:
//!
//! - [`gf`]: exact arithmetic in `GF(p^n)` used by the Bose-Chowla construction.
//! - [`rulers`]: array geometries and their difference multisets.
//! - [`codebook`]: codewords, beampatterns, distances and analytical bounds.
//! - [`channel`]: the noisy observation model and the matched-filter decoder.
//! - [`sim`]: Monte Carlo error-rate estimation and parameter sweeps.

pub mod channel;
pub mod codebook;
pub mod error;
pub mod gf;
pub mod rulers;
pub mod sim;

pub use error::{Error, Result};
