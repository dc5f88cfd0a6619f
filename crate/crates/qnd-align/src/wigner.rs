//! Wigner 3-j and 6-j symbols and Clebsch-Gordan coefficients via the Racah
//! sum formulas, in the Condon-Shortley phase convention.
//!
//! Invalid couplings (triangle or projection violations) evaluate to 0.0, so
//! every symbol is a total function of its half-integer arguments. Accuracy
//! is ~1e-14 absolute for angular momenta up to j ~ 10; an exact big-rational
//! oracle in the test suite pins this down.

use crate::half::{phase_from_twice, HalfInt};
use std::sync::OnceLock;

const FACT_LEN: usize = 171;

fn factorials() -> &'static [f64; FACT_LEN] {
    static TABLE: OnceLock<[f64; FACT_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACT_LEN];
        for n in 1..FACT_LEN {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// n! for n given as a non-negative integer; caller guarantees n < 171.
fn fact(n: i32) -> f64 {
    factorials()[n as usize]
}

/// Factorial of a half-integer pair sum that is guaranteed integral,
/// taking the argument as twice its value.
fn fact_twice(t: i32) -> f64 {
    debug_assert!(t % 2 == 0 && t >= 0);
    fact(t / 2)
}

fn triangle_coefficient(a: HalfInt, b: HalfInt, c: HalfInt) -> f64 {
    let num = fact_twice(a.twice() + b.twice() - c.twice())
        * fact_twice(a.twice() - b.twice() + c.twice())
        * fact_twice(-a.twice() + b.twice() + c.twice());
    num / fact_twice(a.twice() + b.twice() + c.twice() + 2)
}

/// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3).
///
/// Returns 0.0 for any selection-rule failure: triangle violation,
/// m1+m2+m3 != 0, or a projection outside/incompatible with its magnitude.
pub fn wigner3j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> f64 {
    if !HalfInt::triangle(j1, j2, j3) {
        return 0.0;
    }
    if !j1.admits_projection(m1) || !j2.admits_projection(m2) || !j3.admits_projection(m3) {
        return 0.0;
    }
    if m1.twice() + m2.twice() + m3.twice() != 0 {
        return 0.0;
    }

    let prefactor = (triangle_coefficient(j1, j2, j3)
        * fact_twice(j1.twice() + m1.twice())
        * fact_twice(j1.twice() - m1.twice())
        * fact_twice(j2.twice() + m2.twice())
        * fact_twice(j2.twice() - m2.twice())
        * fact_twice(j3.twice() + m3.twice())
        * fact_twice(j3.twice() - m3.twice()))
    .sqrt();

    // Racah sum over t (integer); bounds from the six factorial arguments.
    let t_min_twice = 0
        .max(j2.twice() - j3.twice() - m1.twice())
        .max(j1.twice() - j3.twice() + m2.twice());
    let t_max_twice = (j1.twice() + j2.twice() - j3.twice())
        .min(j1.twice() - m1.twice())
        .min(j2.twice() + m2.twice());

    let mut sum = 0.0;
    let mut t = t_min_twice;
    while t <= t_max_twice {
        let denom = fact_twice(t)
            * fact_twice(j3.twice() - j2.twice() + m1.twice() + t)
            * fact_twice(j3.twice() - j1.twice() - m2.twice() + t)
            * fact_twice(j1.twice() + j2.twice() - j3.twice() - t)
            * fact_twice(j1.twice() - m1.twice() - t)
            * fact_twice(j2.twice() + m2.twice() - t);
        sum += phase_from_twice(t) / denom;
        t += 2;
    }

    phase_from_twice(j1.twice() - j2.twice() - m3.twice()) * prefactor * sum
}

/// Wigner 6-j symbol {j1 j2 j3; j4 j5 j6}.
///
/// Returns 0.0 when any of the four triads violates the triangle rules.
pub fn wigner6j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    for &(a, b, c) in &triads {
        if !HalfInt::triangle(a, b, c) {
            return 0.0;
        }
    }

    let prefactor: f64 = triads
        .iter()
        .map(|&(a, b, c)| triangle_coefficient(a, b, c))
        .product::<f64>()
        .sqrt();

    // Racah 6-j sum; arguments as twice-values, t integral.
    let s1 = j1.twice() + j2.twice() + j3.twice();
    let s2 = j1.twice() + j5.twice() + j6.twice();
    let s3 = j4.twice() + j2.twice() + j6.twice();
    let s4 = j4.twice() + j5.twice() + j3.twice();
    let q1 = j1.twice() + j2.twice() + j4.twice() + j5.twice();
    let q2 = j2.twice() + j3.twice() + j5.twice() + j6.twice();
    let q3 = j1.twice() + j3.twice() + j4.twice() + j6.twice();

    let t_min = s1.max(s2).max(s3).max(s4);
    let t_max = q1.min(q2).min(q3);

    let mut sum = 0.0;
    let mut t = t_min;
    while t <= t_max {
        let num = phase_from_twice(t) * fact_twice(t + 2);
        let denom = fact_twice(t - s1)
            * fact_twice(t - s2)
            * fact_twice(t - s3)
            * fact_twice(t - s4)
            * fact_twice(q1 - t)
            * fact_twice(q2 - t)
            * fact_twice(q3 - t);
        sum += num / denom;
        t += 2;
    }

    prefactor * sum
}

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley).
///
/// Returns 0.0 for forbidden couplings.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m1.twice() + m2.twice() != m.twice() {
        return 0.0;
    }
    let phase_twice = j1.twice() - j2.twice() + m.twice();
    if phase_twice % 2 != 0 {
        return 0.0;
    }
    let dim = f64::from(j.twice() + 1);
    phase_from_twice(phase_twice) * dim.sqrt() * wigner3j(j1, j2, j, m1, m2, -m)
}
