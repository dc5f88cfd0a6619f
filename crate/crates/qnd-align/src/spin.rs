//! Spin matrices and irreducible tensor operators on a single hyperfine
//! manifold, plus the commutator identity that anchors every sign downstream.
//!
//! Basis ordering: m descending, so index 0 is m = +F. Tensor operators are
//! built from the Wigner-Eckart theorem with the normalization fixed by
//! T^1_0 = F_z/sqrt(2) at F = 1; matrix elements are
//! <F m'|T^k_q|F m> = (-1)^(F-m') <F m'; F -m | k q>.

use crate::half::{phase_from_twice, HalfInt};
use crate::wigner::{clebsch_gordan, wigner6j};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("spin space needs f >= 1/2, got f = {0}")]
    SpinTooSmall(HalfInt),
    #[error("tensor rank k = {k} out of range 0..=2F for f = {f}")]
    RankOutOfRange { f: HalfInt, k: u32 },
    #[error("component q = {q} out of range for rank k = {k}")]
    ComponentOutOfRange { k: u32, q: i32 },
}

/// All operator algebra for one ground manifold of total spin F.
#[derive(Debug, Clone)]
pub struct SpinSpace {
    pub f: HalfInt,
    pub dimension: usize,
    pub fx: CMatrix,
    pub fy: CMatrix,
    pub fz: CMatrix,
    tensor_ops: BTreeMap<(u32, i32), CMatrix>,
}

/// Builds the spin matrices and the full set of tensor operators
/// T^k_q for 0 <= k <= 2F, |q| <= k.
pub fn build_spin_space(f: HalfInt) -> Result<SpinSpace, AlgebraError> {
    if f.twice() < 1 {
        return Err(AlgebraError::SpinTooSmall(f));
    }
    let dim = f.multiplicity();
    let ms: Vec<HalfInt> = f.projections_descending().collect();

    let mut fz = CMatrix::zeros(dim, dim);
    let mut fp = CMatrix::zeros(dim, dim);
    for (i, &m) in ms.iter().enumerate() {
        fz[(i, i)] = Complex64::new(m.value(), 0.0);
        if i > 0 {
            // F+ |m> = sqrt(F(F+1) - m(m+1)) |m+1>; m+1 sits at index i-1.
            let fval = f.value();
            let mval = m.value();
            let c = (fval * (fval + 1.0) - mval * (mval + 1.0)).sqrt();
            fp[(i - 1, i)] = Complex64::new(c, 0.0);
        }
    }
    let fm = fp.adjoint();
    let fx = (&fp + &fm).scale(0.5);
    let fy = (&fp - &fm) * Complex64::new(0.0, -0.5);

    let mut tensor_ops = BTreeMap::new();
    let kmax = f.twice() as u32; // 2F is integral
    for k in 0..=kmax {
        for q in -(k as i32)..=(k as i32) {
            tensor_ops.insert((k, q), tensor_matrix(f, &ms, k, q));
        }
    }

    Ok(SpinSpace { f, dimension: dim, fx, fy, fz, tensor_ops })
}

fn tensor_matrix(f: HalfInt, ms: &[HalfInt], k: u32, q: i32) -> CMatrix {
    let dim = ms.len();
    let kh = HalfInt::from_int(k as i32);
    let qh = HalfInt::from_int(q);
    let mut t = CMatrix::zeros(dim, dim);
    for (r, &mp) in ms.iter().enumerate() {
        for (c, &m) in ms.iter().enumerate() {
            let phase = phase_from_twice(f.twice() - m.twice());
            let cg = clebsch_gordan(f, mp, f, -m, kh, qh);
            t[(r, c)] = Complex64::new(phase * cg, 0.0);
        }
    }
    t
}

impl SpinSpace {
    /// T^k_q, or an error if (k, q) is outside the rank range of this space.
    pub fn tensor_op(&self, k: u32, q: i32) -> Result<&CMatrix, AlgebraError> {
        if k > self.f.twice() as u32 {
            return Err(AlgebraError::RankOutOfRange { f: self.f, k });
        }
        self.tensor_ops
            .get(&(k, q))
            .ok_or(AlgebraError::ComponentOutOfRange { k, q })
    }

    pub fn tensor_ops(&self) -> impl Iterator<Item = (&(u32, i32), &CMatrix)> {
        self.tensor_ops.iter()
    }
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm residual between the matrix commutator [T^k1_q1, T^k2_q2] and its
/// expansion over T^K_Q with 6-j and Clebsch-Gordan coefficients:
///
/// [T1, T2] = sum_{K,Q} (-1)^(K+2F) sqrt((2k1+1)(2k2+1)) {k1 k2 K; F F F}
///            <k1 q1; k2 q2 | K Q> (1 - (-1)^(k1+k2+K)) T^K_Q
///
/// The phase convention is fixed by requiring this to reproduce the direct
/// matrix commutators at F = 1 (it does, to machine precision).
pub fn verify_commutator_identity(
    space: &SpinSpace,
    k1: u32,
    q1: i32,
    k2: u32,
    q2: i32,
) -> Result<f64, AlgebraError> {
    let t1 = space.tensor_op(k1, q1)?;
    let t2 = space.tensor_op(k2, q2)?;
    let lhs = commutator(t1, t2);

    let f = space.f;
    let fh = f;
    let k1h = HalfInt::from_int(k1 as i32);
    let k2h = HalfInt::from_int(k2 as i32);
    let q = q1 + q2;
    let kmax_space = f.twice() as u32;

    let mut rhs = CMatrix::zeros(space.dimension, space.dimension);
    let kk_max = (k1 + k2).min(kmax_space);
    for kk in 0..=kk_max {
        if q.unsigned_abs() > kk {
            continue;
        }
        let parity = 1.0 - phase_from_twice(2 * (k1 + k2 + kk) as i32);
        if parity == 0.0 {
            continue;
        }
        let kkh = HalfInt::from_int(kk as i32);
        let sixj = wigner6j(k1h, k2h, kkh, fh, fh, fh);
        if sixj == 0.0 {
            continue;
        }
        let cg = clebsch_gordan(
            k1h,
            HalfInt::from_int(q1),
            k2h,
            HalfInt::from_int(q2),
            kkh,
            HalfInt::from_int(q),
        );
        let phase = phase_from_twice(2 * kk as i32 + 2 * f.twice());
        let scale = phase
            * ((2.0 * k1 as f64 + 1.0) * (2.0 * k2 as f64 + 1.0)).sqrt()
            * sixj
            * cg
            * parity;
        rhs += space.tensor_op(kk, q)?.scale(scale);
    }

    Ok(max_abs(&(lhs - rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn space(f_twice: i32) -> SpinSpace {
        build_spin_space(HalfInt::from_twice(f_twice)).unwrap()
    }

    #[test]
    fn rejects_f_zero() {
        assert_eq!(
            build_spin_space(HalfInt::ZERO).unwrap_err(),
            AlgebraError::SpinTooSmall(HalfInt::ZERO)
        );
    }

    #[test]
    fn su2_algebra_holds() {
        for ft in [1, 2, 3, 4] {
            let s = space(ft);
            let comm = commutator(&s.fx, &s.fy) - &s.fz * Complex64::i();
            assert!(max_abs(&comm) < 1e-12, "F = {ft}/2: [fx,fy] != i fz");
            let f = ft as f64 / 2.0;
            let casimir = &s.fx * &s.fx + &s.fy * &s.fy + &s.fz * &s.fz;
            let expect = CMatrix::identity(s.dimension, s.dimension).scale(f * (f + 1.0));
            assert!(max_abs(&(casimir - expect)) < 1e-12);
            assert!(max_abs(&(&s.fx - s.fx.adjoint())) < 1e-14);
            assert!(max_abs(&(&s.fy - s.fy.adjoint())) < 1e-14);
        }
    }

    #[test]
    fn f1_tensor_ops_match_closed_forms() {
        let s = space(2);
        let sqrt2 = 2f64.sqrt();
        let sqrt6 = 6f64.sqrt();

        let t10 = s.tensor_op(1, 0).unwrap();
        assert!(max_abs(&(t10 - s.fz.scale(1.0 / sqrt2))) < 1e-14);

        // T^1_{+/-1} = -/+ F_{+/-}/2
        let fp = &s.fx + &s.fy * Complex64::i();
        let fm = &s.fx - &s.fy * Complex64::i();
        assert!(max_abs(&(s.tensor_op(1, 1).unwrap() + fp.scale(0.5))) < 1e-14);
        assert!(max_abs(&(s.tensor_op(1, -1).unwrap() - fm.scale(0.5))) < 1e-14);

        // T^2_0 = (3 F_z^2 - F(F+1)) / sqrt(6) with F = 1
        let t20 = s.tensor_op(2, 0).unwrap();
        let expect = (&s.fz * &s.fz).scale(3.0) - CMatrix::identity(3, 3).scale(2.0);
        assert!(max_abs(&(t20 - expect.scale(1.0 / sqrt6))) < 1e-14);

        // T^2_{+/-1} = -/+ (F_z F_{+/-} + F_{+/-} F_z)/2
        let t21 = s.tensor_op(2, 1).unwrap();
        let e21 = (&s.fz * &fp + &fp * &s.fz).scale(-0.5);
        assert!(max_abs(&(t21 - e21)) < 1e-14);

        // T^2_{+/-2} = F_{+/-}^2 / 2; at F=1 that is |m=1><m=-1|
        let t22 = s.tensor_op(2, 2).unwrap();
        assert!(max_abs(&(t22 - (&fp * &fp).scale(0.5))) < 1e-14);
        assert_abs_diff_eq!(t22[(0, 2)].re, 1.0, epsilon = 1e-14);

        // [T^2_2, T^2_-2] = F_z at F = 1
        let lhs = commutator(t22, s.tensor_op(2, -2).unwrap());
        assert!(max_abs(&(lhs - &s.fz)) < 1e-14);
    }

    #[test]
    fn adjoint_and_orthonormality() {
        for ft in [2, 4] {
            let s = space(ft);
            for (&(k, q), t) in s.tensor_ops() {
                let conj = s.tensor_op(k, -q).unwrap().adjoint().scale(phase_from_twice(2 * q));
                assert!(max_abs(&(t - conj)) < 1e-13, "adjoint fails at k={k} q={q}");
            }
            let ops: Vec<_> = s.tensor_ops().collect();
            for (ka, a) in &ops {
                for (kb, b) in &ops {
                    let tr = (a.adjoint() * *b).trace();
                    let expect = if ka == kb { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(tr.re, expect, epsilon = 1e-12);
                    assert_abs_diff_eq!(tr.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn alignment_pair_commutator_at_f1() {
        // [(T^2_2+T^2_-2)/sqrt(2), (T^2_2-T^2_-2)/(i sqrt(2))] = i F_z
        let s = space(2);
        let t2p = s.tensor_op(2, 2).unwrap();
        let t2m = s.tensor_op(2, -2).unwrap();
        let sqrt2 = Complex64::new(2f64.sqrt(), 0.0);
        let xa = (t2p + t2m) / sqrt2;
        let pa = (t2p - t2m) / (Complex64::i() * sqrt2);
        let comm = commutator(&xa, &pa);
        assert!(max_abs(&(comm - &s.fz * Complex64::i())) < 1e-14);
    }

    #[test]
    fn commutator_identity_small_scan() {
        let s = space(2);
        for k1 in 1..=2u32 {
            for q1 in -(k1 as i32)..=(k1 as i32) {
                for k2 in 1..=2u32 {
                    for q2 in -(k2 as i32)..=(k2 as i32) {
                        let r = verify_commutator_identity(&s, k1, q1, k2, q2).unwrap();
                        assert!(r < 1e-12, "residual {r} at ({k1},{q1}),({k2},{q2})");
                    }
                }
            }
        }
    }
}
