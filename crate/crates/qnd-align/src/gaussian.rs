//! Labeled-mode Gaussian states: covariance propagation through affine
//! channels with vacuum-noise injection, signed symplectic bookkeeping and
//! homodyne conditioning.
//!
//! Conventions: vacuum variance 1, [x, p] = 2i, so the symplectic form is
//! block-diagonal with sign * [[0, 2], [-2, 0]] per mode. A sign of -1
//! marks an oppositely oriented ensemble whose normalized commutator is
//! negated. The covariance algebra itself is sign-blind; only the form is
//! not.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("duplicate mode label '{0}'")]
    DuplicateLabel(String),
    #[error("unknown mode '{0}'")]
    UnknownMode(String),
    #[error("dimension mismatch: expected {expected} quadratures, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("measured quadrature has non-positive variance")]
    ZeroVarianceMeasurement,
    #[error("symplectic sign must be +1 or -1, got {0}")]
    InvalidSign(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrature {
    X,
    P,
}

/// One bosonic mode: a name and the sign of its symplectic block.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLabel {
    pub name: String,
    pub symplectic_sign: f64,
}

impl ModeLabel {
    pub fn new(name: &str) -> Self {
        ModeLabel { name: name.into(), symplectic_sign: 1.0 }
    }

    /// A mode carrying the negated commutator (opposite orientation).
    pub fn flipped(name: &str) -> Self {
        ModeLabel { name: name.into(), symplectic_sign: -1.0 }
    }
}

/// The signed symplectic form of an ordered mode list.
pub fn symplectic_form(labels: &[ModeLabel]) -> DMatrix<f64> {
    let n = 2 * labels.len();
    let mut omega = DMatrix::zeros(n, n);
    for (k, label) in labels.iter().enumerate() {
        omega[(2 * k, 2 * k + 1)] = 2.0 * label.symplectic_sign;
        omega[(2 * k + 1, 2 * k)] = -2.0 * label.symplectic_sign;
    }
    omega
}

/// An affine Gaussian channel: quadratures map through `matrix`, then the
/// `noise` covariance is added. Noise injections (damping by sqrt(1-eps)
/// plus an independent vacuum of weight eps) are stored as their covariance
/// contribution so that channels stay exactly composable.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearChannel {
    pub matrix: DMatrix<f64>,
    pub noise: DMatrix<f64>,
}

impl LinearChannel {
    pub fn identity(n_modes: usize) -> Self {
        let n = 2 * n_modes;
        LinearChannel { matrix: DMatrix::identity(n, n), noise: DMatrix::zeros(n, n) }
    }

    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        LinearChannel { matrix, noise: DMatrix::zeros(n, n) }
    }

    /// `second` applied after `self`.
    pub fn then(&self, second: &LinearChannel) -> Result<LinearChannel, EngineError> {
        if second.matrix.ncols() != self.matrix.nrows() {
            return Err(EngineError::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: second.matrix.ncols(),
            });
        }
        let matrix = &second.matrix * &self.matrix;
        let noise = &second.matrix * &self.noise * second.matrix.transpose() + &second.noise;
        Ok(LinearChannel { matrix, noise })
    }
}

/// Max-norm of M Omega M^T - Omega for the channel's linear part; zero for
/// maps that preserve every commutator, Theta(kappa^2) for first-order
/// truncations.
pub fn check_symplectic(channel: &LinearChannel, labels: &[ModeLabel]) -> Result<f64, EngineError> {
    check_symplectic_between(channel, labels, labels)
}

/// Like `check_symplectic`, but for maps whose output algebra differs from
/// the input one (a momentum-reversing geometry lands on the flipped form):
/// max-norm of M Omega_in M^T - Omega_out.
pub fn check_symplectic_between(
    channel: &LinearChannel,
    in_labels: &[ModeLabel],
    out_labels: &[ModeLabel],
) -> Result<f64, EngineError> {
    let omega_in = symplectic_form(in_labels);
    let omega_out = symplectic_form(out_labels);
    if channel.matrix.ncols() != omega_in.nrows() {
        return Err(EngineError::DimensionMismatch {
            expected: omega_in.nrows(),
            got: channel.matrix.ncols(),
        });
    }
    if channel.matrix.nrows() != omega_out.nrows() {
        return Err(EngineError::DimensionMismatch {
            expected: omega_out.nrows(),
            got: channel.matrix.nrows(),
        });
    }
    let residual = &channel.matrix * &omega_in * channel.matrix.transpose() - omega_out;
    Ok(residual.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Rotation by theta in the (x, p) plane of the named modes:
/// x -> x cos(theta) + p sin(theta), p -> p cos(theta) - x sin(theta).
pub fn rotation_channel(
    labels: &[ModeLabel],
    modes: &[&str],
    theta: f64,
) -> Result<LinearChannel, EngineError> {
    let n = 2 * labels.len();
    let mut m = DMatrix::identity(n, n);
    for name in modes {
        let k = labels
            .iter()
            .position(|l| l.name == *name)
            .ok_or_else(|| EngineError::UnknownMode((*name).into()))?;
        let (c, s) = (theta.cos(), theta.sin());
        m[(2 * k, 2 * k)] = c;
        m[(2 * k, 2 * k + 1)] = s;
        m[(2 * k + 1, 2 * k)] = -s;
        m[(2 * k + 1, 2 * k + 1)] = c;
    }
    Ok(LinearChannel::from_matrix(m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    labels: Vec<ModeLabel>,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianState {
    /// Mean zero, covariance identity.
    pub fn vacuum(labels: Vec<ModeLabel>) -> Result<Self, EngineError> {
        for (i, l) in labels.iter().enumerate() {
            if l.symplectic_sign != 1.0 && l.symplectic_sign != -1.0 {
                return Err(EngineError::InvalidSign(l.symplectic_sign));
            }
            if labels[..i].iter().any(|m| m.name == l.name) {
                return Err(EngineError::DuplicateLabel(l.name.clone()));
            }
        }
        let n = 2 * labels.len();
        Ok(GaussianState {
            labels,
            mean: DVector::zeros(n),
            cov: DMatrix::identity(n, n),
        })
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn mode_index(&self, name: &str) -> Result<usize, EngineError> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| EngineError::UnknownMode(name.into()))
    }

    pub fn quad_index(&self, name: &str, quad: Quadrature) -> Result<usize, EngineError> {
        let k = self.mode_index(name)?;
        Ok(2 * k + matches!(quad, Quadrature::P) as usize)
    }

    pub fn variance(&self, name: &str, quad: Quadrature) -> Result<f64, EngineError> {
        let i = self.quad_index(name, quad)?;
        Ok(self.cov[(i, i)])
    }

    pub fn covariance(
        &self,
        a: &str,
        qa: Quadrature,
        b: &str,
        qb: Quadrature,
    ) -> Result<f64, EngineError> {
        let i = self.quad_index(a, qa)?;
        let j = self.quad_index(b, qb)?;
        Ok(self.cov[(i, j)])
    }

    pub fn apply_channel(&self, channel: &LinearChannel) -> Result<GaussianState, EngineError> {
        if channel.matrix.ncols() != self.dim() {
            return Err(EngineError::DimensionMismatch {
                expected: self.dim(),
                got: channel.matrix.ncols(),
            });
        }
        let mean = &channel.matrix * &self.mean;
        let cov = &channel.matrix * &self.cov * channel.matrix.transpose() + &channel.noise;
        Ok(GaussianState { labels: self.labels.clone(), mean, cov: symmetrize(cov) })
    }

    /// Schur-complement conditioning on a homodyne record of one quadrature.
    /// The covariance update is outcome-independent; the mean shifts by the
    /// regression of each quadrature on the measured one. The measured mode
    /// is removed from the returned state.
    pub fn condition_on_homodyne(
        &self,
        name: &str,
        quad: Quadrature,
        outcome: f64,
    ) -> Result<GaussianState, EngineError> {
        let k = self.mode_index(name)?;
        let m = 2 * k + matches!(quad, Quadrature::P) as usize;
        let v = self.cov[(m, m)];
        if v <= 0.0 {
            return Err(EngineError::ZeroVarianceMeasurement);
        }
        let c = self.cov.column(m).clone_owned();
        let mean = &self.mean + &c * ((outcome - self.mean[m]) / v);
        let cov = &self.cov - &c * c.transpose() / v;
        let drop = [2 * k, 2 * k + 1];
        let labels: Vec<ModeLabel> =
            self.labels.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, l)| l.clone()).collect();
        Ok(GaussianState {
            labels,
            mean: mean.remove_rows_at(&drop),
            cov: symmetrize(cov.remove_columns_at(&drop).remove_rows_at(&drop)),
        })
    }

    /// V[target | measured] without touching the state.
    pub fn conditional_variance(
        &self,
        target: &str,
        target_quad: Quadrature,
        measured: &str,
        measured_quad: Quadrature,
    ) -> Result<f64, EngineError> {
        let t = self.quad_index(target, target_quad)?;
        let m = self.quad_index(measured, measured_quad)?;
        let v = self.cov[(m, m)];
        if v <= 0.0 {
            return Err(EngineError::ZeroVarianceMeasurement);
        }
        Ok(self.cov[(t, t)] - self.cov[(t, m)].powi(2) / v)
    }

    fn combination_vector(
        &self,
        terms: &[(&str, Quadrature, f64)],
    ) -> Result<DVector<f64>, EngineError> {
        let mut v = DVector::zeros(self.dim());
        for (name, quad, coeff) in terms {
            let i = self.quad_index(name, *quad)?;
            v[i] += coeff;
        }
        Ok(v)
    }

    /// Variance of a real linear combination of quadratures.
    pub fn linear_combination_variance(
        &self,
        terms: &[(&str, Quadrature, f64)],
    ) -> Result<f64, EngineError> {
        let v = self.combination_vector(terms)?;
        Ok((v.transpose() * &self.cov * &v)[(0, 0)])
    }

    /// V[target combination | measured combination].
    pub fn conditional_variance_of_combination(
        &self,
        target: &[(&str, Quadrature, f64)],
        measured: &[(&str, Quadrature, f64)],
    ) -> Result<f64, EngineError> {
        let a = self.combination_vector(target)?;
        let b = self.combination_vector(measured)?;
        let var_b = (b.transpose() * &self.cov * &b)[(0, 0)];
        if var_b <= 0.0 {
            return Err(EngineError::ZeroVarianceMeasurement);
        }
        let var_a = (a.transpose() * &self.cov * &a)[(0, 0)];
        let cov_ab = (a.transpose() * &self.cov * &b)[(0, 0)];
        Ok(var_a - cov_ab * cov_ab / var_b)
    }

    /// Delta_EPR = Var(x_a + x_b) + Var(p_a + p_b); below 4 witnesses
    /// entanglement in this normalization.
    pub fn epr_variance(&self, mode_a: &str, mode_b: &str) -> Result<f64, EngineError> {
        let xx = self.linear_combination_variance(&[
            (mode_a, Quadrature::X, 1.0),
            (mode_b, Quadrature::X, 1.0),
        ])?;
        let pp = self.linear_combination_variance(&[
            (mode_a, Quadrature::P, 1.0),
            (mode_b, Quadrature::P, 1.0),
        ])?;
        Ok(xx + pp)
    }

    pub fn symplectic_form(&self) -> DMatrix<f64> {
        symplectic_form(&self.labels)
    }

    /// How far cov + i Omega is from positive semidefinite: zero for
    /// physical states, the most negative eigenvalue's magnitude otherwise.
    pub fn physicality_residual(&self) -> f64 {
        let n = self.dim();
        let omega = self.symplectic_form();
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = Complex64::new(self.cov[(i, j)], 0.5 * omega[(i, j)]);
            }
        }
        let eig = h.symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        (-min).max(0.0)
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let mt = m.transpose();
    (m + mt) * 0.5
}
