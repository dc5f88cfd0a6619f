//! Gaussian model of conditional squeezing of an atomic alignment
//! measured by quantum non-demolition polarimetry.
//!
//! An off-resonant probe couples the rank-2 (alignment) components of an
//! atomic ground state to the Stokes parameters of the light. Detecting a
//! Stokes quadrature after the interaction conditions the atomic state,
//! squeezing the alignment below the coherent-state level. This crate
//! computes everything needed to predict that, end to end:
//!
//! * [`half`], [`wigner`], [`spin`]: half-integer bookkeeping, 3j/6j
//!   symbols, and irreducible tensor operators on a spin-F manifold,
//!   including the product-decomposition commutator identity.
//! * [`polarizability`]: vector and tensor polarizabilities and
//!   absorption cross-sections per excited hyperfine level, with the
//!   alkali sum rule.
//! * [`couplings`]: the experiment-level coupling strengths kappa_v and
//!   kappa_t, spontaneous-emission noise parameters, detuning sweeps, and
//!   zero-crossing finders.
//! * [`gaussian`]: a small covariance-matrix engine (symplectic checks,
//!   linear channels, homodyne conditioning) over modes with vacuum
//!   variance 1, including opposite-oriented modes with a flipped
//!   commutator sign.
//! * [`scenarios`]: the measurement geometries (vectorial and tensorial
//!   single pass, double pass, two oppositely oriented cells, one or two
//!   pulses) with the spontaneous-emission dressing and Larmor-phase
//!   rotation.
//! * [`kernel`]: the exact spatiotemporal Bessel kernels of the single
//!   pass, their collective second moments, and an independent
//!   finite-difference oracle used to cross-check the composed double
//!   pass.
//! * [`config`], [`report`], [`cli`]: TOML configuration with engineering
//!   units, machine-readable records, and the `qnd-align` binary's
//!   subcommands (`run`, `sweep`, `kernel-check`, `validate`).
//!
//! Conventions: vacuum variance 1 (so [x, p] = 2i), frequencies in MHz,
//! detunings signed relative to the lowest excited hyperfine level.
//! The runnable examples under `examples/` walk through each capability.

pub mod cli;
pub mod config;
pub mod couplings;
pub mod gaussian;
pub mod half;
pub mod kernel;
pub mod polarizability;
pub mod report;
pub mod scenarios;
pub mod spin;
pub mod wigner;
