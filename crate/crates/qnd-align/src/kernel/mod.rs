//! Exact spatiotemporal solutions of the single-pass alignment
//! interaction and their reduction to collective-mode second moments,
//! cross-checked by an independent finite-difference integration.
//!
//! In the retarded dimensionless frame the outputs are Bessel-kernel
//! integrals of the inputs: the collective atomic quadrature keeps weight
//! J0(2k sqrt(1-z')) of the cell at z' and picks up weight
//! J1(2k sqrt(1-t))/sqrt(1-t) of the light slice at t (and symmetrically
//! for the light outputs under z <-> t, atoms <-> fields). Squared-kernel
//! integrals give every second moment; two closed forms fix the anchors:
//!
//!   integral of self^2 = J0(2k)^2 + J1(2k)^2,
//!   integral of cross^2 = 1 - J0(2k)^2 - J1(2k)^2,
//!
//! so every collective output variance is exactly 1 and all cross
//! covariances vanish: a single pass moves no conditioning information
//! into any collective light mode; only composed geometries do.

pub mod bessel;
mod pde;
pub mod quad;

pub use bessel::{bessel_j, j0, j1, j1_over_x};
pub use pde::{pde_oracle, GridSolution, PassSetup};
pub use quad::gauss_legendre;

use quad::integrate;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error(
        "quadrature did not converge: {max_points} points leave residual {residual:.3e}"
    )]
    QuadratureNonConvergence { max_points: usize, residual: f64 },
    #[error("kappa_t = {0} outside the validated range [0, 0.6]")]
    KappaOutOfRange(f64),
    #[error("grid {nz} x {nt} below the minimum 64 x 64")]
    GridTooCoarse { nz: usize, nt: usize },
    #[error(
        "step check failed for kappa_t = {kappa_t} on a {nz} x {nt} grid: \
         the kernel oscillation scale needs kappa_t^2 <= min(nz, nt)/8"
    )]
    Unstable { kappa_t: f64, nz: usize, nt: usize },
}

/// The single-pass kernels. Self kernels weight same-species inputs in the
/// collective outputs; cross kernels weight the conjugate species. At
/// kappa_t = 0 the self kernels are identically 1 and the cross kernels
/// reduce to the constant first-order coefficient kappa_t.
#[derive(Debug, Clone, Copy)]
pub struct KernelSolution {
    pub kappa_t: f64,
}

impl KernelSolution {
    pub fn new(kappa_t: f64) -> Self {
        KernelSolution { kappa_t }
    }

    /// Weight of x_in(z') in the collective x_out (equals the weight of
    /// p_in(z') in p_out and the light self weights under t <-> z).
    pub fn atom_self_kernel(&self, zprime: f64) -> f64 {
        j0(2.0 * self.kappa_t * (1.0 - zprime).sqrt())
    }

    /// Weight of s_y_in(t) in the collective x_out; p_out carries the
    /// negative of it on s_x_in. Analytic at t = 1 (value kappa_t there).
    pub fn field_cross_kernel(&self, t: f64) -> f64 {
        2.0 * self.kappa_t * j1_over_x(2.0 * self.kappa_t * (1.0 - t).sqrt())
    }

    /// Weight of s_x_in(t') in s_x_out; same function as the atomic self
    /// kernel by the z <-> t symmetry.
    pub fn field_self_kernel(&self, tprime: f64) -> f64 {
        self.atom_self_kernel(tprime)
    }

    /// Weight of p_in(z) in s_x_out (s_y_out carries the negative on x_in).
    pub fn atom_cross_kernel(&self, z: f64) -> f64 {
        self.field_cross_kernel(z)
    }
}

/// Second moments of the collective single-pass outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    pub var_x: f64,
    pub var_p: f64,
    pub var_sx: f64,
    pub var_sy: f64,
    pub cov_x_sy: f64,
    pub cov_p_sx: f64,
    /// Commutator pairing [x_out, p_out] in vacuum units (1 if preserved).
    pub pairing_x_p: f64,
    /// Total first-moment weight of the light in x_out,
    /// (1 - J0(2k))/k = k - k^3/4 + ..., vs the truncated map's k.
    pub light_weight: f64,
    /// Total first-moment weight of the atoms in x_out, J1(2k)/k.
    pub self_weight: f64,
}

/// Integrates the squared kernels over the unit square, refining the
/// quadrature until two consecutive rules agree to 1e-10.
pub fn collective_output_variance(kappa_t: f64) -> Result<CollectiveMoments, KernelError> {
    if !kappa_t.is_finite() {
        return Err(KernelError::QuadratureNonConvergence { max_points: 0, residual: f64::NAN });
    }
    let mut prev: Option<CollectiveMoments> = None;
    let mut n = 32;
    let max_points = 512;
    let mut residual = f64::INFINITY;
    while n <= max_points {
        let m = moments_at(kappa_t, n);
        if let Some(p) = prev {
            residual = (m.var_x - p.var_x)
                .abs()
                .max((m.cov_x_sy - p.cov_x_sy).abs())
                .max((m.pairing_x_p - p.pairing_x_p).abs())
                .max((m.light_weight - p.light_weight).abs());
            if residual < 1e-10 {
                return Ok(m);
            }
        }
        prev = Some(m);
        n *= 2;
    }
    Err(KernelError::QuadratureNonConvergence { max_points, residual })
}

fn moments_at(kappa_t: f64, n: usize) -> CollectiveMoments {
    let ks = KernelSolution::new(kappa_t);
    let self2 = integrate(n, |u| ks.atom_self_kernel(u).powi(2));
    let cross2 = integrate(n, |u| ks.field_cross_kernel(u).powi(2));
    // the two cross terms carry opposite signs and cancel identically;
    // integrate both to let the quadrature witness it
    let cov_x_sy = integrate(n, |u| ks.atom_self_kernel(u) * (-ks.field_cross_kernel(u)))
        + integrate(n, |u| ks.field_cross_kernel(u) * ks.field_self_kernel(u));
    let cov_p_sx = integrate(n, |u| ks.atom_self_kernel(u) * ks.atom_cross_kernel(u))
        + integrate(n, |u| (-ks.field_cross_kernel(u)) * ks.field_self_kernel(u));
    let var = self2 + cross2;
    CollectiveMoments {
        var_x: var,
        var_p: var,
        var_sx: var,
        var_sy: var,
        cov_x_sy,
        cov_p_sx,
        pairing_x_p: self2 + cross2,
        light_weight: integrate(n, |u| ks.field_cross_kernel(u)),
        self_weight: integrate(n, |u| ks.atom_self_kernel(u)),
    }
}

/// Directly quadratures the nested double integral behind the atomic self
/// kernel and compares it with the collapsed J0 form; returns the largest
/// discrepancy over a z' grid.
pub fn self_kernel_collapse_residual(kappa_t: f64) -> f64 {
    let ks = KernelSolution::new(kappa_t);
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let zprime = i as f64 / 20.0;
        let span = 1.0 - zprime;
        // weight = 1 - k * int_0^span J1(2k sqrt(u))/sqrt(u) du
        let inner = span * integrate(64, |v| {
            let u = span * v;
            2.0 * kappa_t * j1_over_x(2.0 * kappa_t * u.sqrt())
        });
        let direct = 1.0 - kappa_t * inner;
        worst = worst.max((direct - ks.atom_self_kernel(zprime)).abs());
    }
    worst
}

/// Conditional variance of the conserved alignment quadrature after the
/// composed double pass, conditioned on the collective measured light
/// mode; computed from the finite-difference second moments on a 256^2
/// grid (validated against frozen regression values).
pub fn exact_double_pass_conditional_variance(kappa_t: f64) -> Result<f64, KernelError> {
    if !(0.0..=0.6).contains(&kappa_t) {
        return Err(KernelError::KappaOutOfRange(kappa_t));
    }
    let g = pde_oracle(kappa_t, 256, 256, PassSetup::Double)?;
    Ok(g.conditional_variance_x_given_sy())
}
