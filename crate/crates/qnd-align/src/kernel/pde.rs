//! Finite-difference oracle: marches the position-resolved linear
//! equations across the (z, t) unit square in the retarded frame and
//! returns the collective output weights.
//!
//! Each unit-variance input operator (atom cell x_j, p_j; light slice
//! s_x(t_k), s_y(t_k)) is one basis column; the dynamics being linear, the
//! columns propagate independently, and every second moment of the outputs
//! is a dot product of weight rows. Deterministic by construction; no
//! stochastic sampling.
//!
//! Scheme: per light slice, a predictor-corrector sweep along z with the
//! light field evaluated at cell midpoints by a running trapezoid; second
//! order in both steps.

use super::KernelError;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassSetup {
    /// One forward pass (light enters at z = 0).
    Single,
    /// Two passes: forward, then backward with the retro-optics sign flip
    /// on s_y and the opposite light-equation signs.
    Double,
}

/// Collective output weights over the input basis, ordered
/// x_0..x_{nz-1}, p_0.., s_x(t_0).., s_y(t_0)...
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub kappa_t: f64,
    pub nz: usize,
    pub nt: usize,
    xbar: Vec<f64>,
    pbar: Vec<f64>,
    sxbar: Vec<f64>,
    sybar: Vec<f64>,
}

impl GridSolution {
    pub fn var_x(&self) -> f64 {
        dot(&self.xbar, &self.xbar)
    }

    pub fn var_p(&self) -> f64 {
        dot(&self.pbar, &self.pbar)
    }

    pub fn var_sx(&self) -> f64 {
        dot(&self.sxbar, &self.sxbar)
    }

    pub fn var_sy(&self) -> f64 {
        dot(&self.sybar, &self.sybar)
    }

    pub fn cov_x_sy(&self) -> f64 {
        dot(&self.xbar, &self.sybar)
    }

    pub fn cov_p_sx(&self) -> f64 {
        dot(&self.pbar, &self.sxbar)
    }

    /// Commutator pairing [x_out, p_out] in vacuum units: 1 when preserved.
    pub fn pairing_x_p(&self) -> f64 {
        pairing(&self.xbar, &self.pbar, self.nz, self.nt)
    }

    /// Schur complement V[x_out | s_y_out] for the collective modes.
    pub fn conditional_variance_x_given_sy(&self) -> f64 {
        let c = self.cov_x_sy();
        self.var_x() - c * c / self.var_sy()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// (a_x . b_p - a_p . b_x) + (a_sx . b_sy - a_sy . b_sx)
fn pairing(a: &[f64], b: &[f64], nz: usize, nt: usize) -> f64 {
    let seg = |v: &[f64], lo: usize, n: usize| -> Vec<f64> { v[lo..lo + n].to_vec() };
    let (ax, ap) = (seg(a, 0, nz), seg(a, nz, nz));
    let (asx, asy) = (seg(a, 2 * nz, nt), seg(a, 2 * nz + nt, nt));
    let (bx, bp) = (seg(b, 0, nz), seg(b, nz, nz));
    let (bsx, bsy) = (seg(b, 2 * nz, nt), seg(b, 2 * nz + nt, nt));
    (dot(&ax, &bp) - dot(&ap, &bx)) + (dot(&asx, &bsy) - dot(&asy, &bsx))
}

struct Column {
    x: Vec<f64>,
    p: Vec<f64>,
    sx: Vec<f64>,
    sy: Vec<f64>,
}

/// Marches one pass. `jtype` picks the light-equation signs
/// (forward pass: ds_x = +k p dz, ds_y = -k x dz), `reverse` the z
/// traversal direction. On return the light vectors hold outgoing slices.
fn propagate_pass(kappa: f64, col: &mut Column, jtype: bool, reverse: bool) {
    let nz = col.x.len();
    let nt = col.sx.len();
    let (dz, dt) = (1.0 / nz as f64, 1.0 / nt as f64);
    let (gx, gy) = if jtype { (1.0, -1.0) } else { (-1.0, 1.0) };
    let mut xn = vec![0.0; nz];
    let mut pn = vec![0.0; nz];
    for k in 0..nt {
        let sx0 = col.sx[k];
        let sy0 = col.sy[k];
        for pass in 0..2 {
            let mut cx = 0.0;
            let mut cp = 0.0;
            for i in 0..nz {
                let j = if reverse { nz - 1 - i } else { i };
                let (xm, pm) = if pass == 0 {
                    (col.x[j], col.p[j])
                } else {
                    ((col.x[j] + xn[j]) / 2.0, (col.p[j] + pn[j]) / 2.0)
                };
                let sx_mid = sx0 + gx * kappa * dz * (cp + pm / 2.0);
                let sy_mid = sy0 + gy * kappa * dz * (cx + xm / 2.0);
                xn[j] = col.x[j] + kappa * dt * sy_mid;
                pn[j] = col.p[j] - kappa * dt * sx_mid;
                cx += xm;
                cp += pm;
            }
        }
        let mut sum_xm = 0.0;
        let mut sum_pm = 0.0;
        for j in 0..nz {
            sum_xm += (col.x[j] + xn[j]) / 2.0;
            sum_pm += (col.p[j] + pn[j]) / 2.0;
        }
        col.sx[k] = sx0 + gx * kappa * dz * sum_pm;
        col.sy[k] = sy0 + gy * kappa * dz * sum_xm;
        col.x.copy_from_slice(&xn);
        col.p.copy_from_slice(&pn);
    }
}

pub fn pde_oracle(
    kappa_t: f64,
    nz: usize,
    nt: usize,
    setup: PassSetup,
) -> Result<GridSolution, KernelError> {
    if nz < 64 || nt < 64 {
        return Err(KernelError::GridTooCoarse { nz, nt });
    }
    // the kernels oscillate on the z-scale 1/(2 kappa)^2; demand resolution
    let min_grid = nz.min(nt);
    if kappa_t * kappa_t > min_grid as f64 / 8.0 {
        return Err(KernelError::Unstable { kappa_t, nz, nt });
    }
    let (dz, dt) = (1.0 / nz as f64, 1.0 / nt as f64);
    let ncols = 2 * nz + 2 * nt;
    let rows: Vec<(f64, f64, f64, f64)> = (0..ncols)
        .into_par_iter()
        .map(|c| {
            let mut col = Column {
                x: vec![0.0; nz],
                p: vec![0.0; nz],
                sx: vec![0.0; nt],
                sy: vec![0.0; nt],
            };
            if c < nz {
                col.x[c] = 1.0 / dz.sqrt();
            } else if c < 2 * nz {
                col.p[c - nz] = 1.0 / dz.sqrt();
            } else if c < 2 * nz + nt {
                col.sx[c - 2 * nz] = 1.0 / dt.sqrt();
            } else {
                col.sy[c - 2 * nz - nt] = 1.0 / dt.sqrt();
            }
            propagate_pass(kappa_t, &mut col, true, false);
            if setup == PassSetup::Double {
                for v in col.sy.iter_mut() {
                    *v = -*v;
                }
                propagate_pass(kappa_t, &mut col, false, true);
            }
            (
                dz * col.x.iter().sum::<f64>(),
                dz * col.p.iter().sum::<f64>(),
                dt * col.sx.iter().sum::<f64>(),
                dt * col.sy.iter().sum::<f64>(),
            )
        })
        .collect();
    let mut g = GridSolution {
        kappa_t,
        nz,
        nt,
        xbar: Vec::with_capacity(ncols),
        pbar: Vec::with_capacity(ncols),
        sxbar: Vec::with_capacity(ncols),
        sybar: Vec::with_capacity(ncols),
    };
    for (a, b, c, d) in rows {
        g.xbar.push(a);
        g.pbar.push(b);
        g.sxbar.push(c);
        g.sybar.push(d);
    }
    let max_abs = [&g.xbar, &g.pbar, &g.sxbar, &g.sybar]
        .iter()
        .flat_map(|v| v.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if !max_abs.is_finite() || max_abs > 1e3 {
        return Err(KernelError::Unstable { kappa_t, nz, nt });
    }
    Ok(g)
}
