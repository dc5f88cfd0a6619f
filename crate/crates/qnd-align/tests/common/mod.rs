//! Exact big-rational Racah evaluation of the coupling coefficients, used as
//! an oracle for the f64 implementations. Everything here is slow and only
//! cares about being unarguably correct.

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

fn fact(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative {n}");
    (1..=n).map(BigInt::from).product()
}

fn half(twice: i64) -> i64 {
    assert!(twice % 2 == 0, "non-integral factorial argument {twice}/2");
    twice / 2
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn triangle_ok(ta: i64, tb: i64, tc: i64) -> bool {
    ta + tb >= tc && (ta - tb).abs() <= tc && (ta + tb + tc) % 2 == 0 && ta >= 0 && tb >= 0 && tc >= 0
}

/// (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)! as an exact rational.
fn delta(ta: i64, tb: i64, tc: i64) -> BigRational {
    ratio(
        fact(half(ta + tb - tc)) * fact(half(ta - tb + tc)) * fact(half(-ta + tb + tc)),
        fact(half(ta + tb + tc) + 1),
    )
}

/// Exact Clebsch-Gordan <j1 m1 j2 m2 | j m> as (sign, square). Sign 0 means
/// the coefficient is exactly zero. Arguments are twice the quantum numbers.
pub fn cg_exact(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> (i32, BigRational) {
    let zero = (0, BigRational::zero());
    if tm1 + tm2 != tm
        || !triangle_ok(tj1, tj2, tj)
        || tm1.abs() > tj1
        || tm2.abs() > tj2
        || tm.abs() > tj
        || (tj1 + tm1) % 2 != 0
        || (tj2 + tm2) % 2 != 0
        || (tj + tm) % 2 != 0
    {
        return zero;
    }

    let kmin = 0.max(half(tj2 - tj - tm1).max(half(tj1 + tm2 - tj)));
    let kmax = half(tj1 + tj2 - tj).min(half(tj1 - tm1)).min(half(tj2 + tm2));
    let mut s = BigRational::zero();
    for k in kmin..=kmax {
        let den = fact(k)
            * fact(half(tj1 + tj2 - tj) - k)
            * fact(half(tj1 - tm1) - k)
            * fact(half(tj2 + tm2) - k)
            * fact(half(tj - tj2 + tm1) + k)
            * fact(half(tj - tj1 - tm2) + k);
        let num = if k % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        s += ratio(num, den);
    }
    if s.is_zero() {
        return zero;
    }

    let prod = fact(half(tj1 + tm1))
        * fact(half(tj1 - tm1))
        * fact(half(tj2 + tm2))
        * fact(half(tj2 - tm2))
        * fact(half(tj + tm))
        * fact(half(tj - tm));
    let square = ratio(BigInt::from(tj + 1), BigInt::from(1))
        * delta(tj1, tj2, tj)
        * ratio(prod, BigInt::from(1))
        * &s
        * &s;
    (if s.is_positive() { 1 } else { -1 }, square)
}

/// Exact Wigner 3j as (sign, square), via the CG relation
/// (j1 j2 j3; m1 m2 m3) = (-1)^(j1-j2-m3) <j1 m1 j2 m2 | j3 -m3> / sqrt(2 j3 + 1).
pub fn three_j_exact(
    tj1: i64,
    tm1: i64,
    tj2: i64,
    tm2: i64,
    tj3: i64,
    tm3: i64,
) -> (i32, BigRational) {
    let (sign, sq) = cg_exact(tj1, tm1, tj2, tm2, tj3, -tm3);
    if sign == 0 {
        return (0, BigRational::zero());
    }
    let phase_exp = half(tj1 - tj2 - tm3);
    let phase = if phase_exp.rem_euclid(2) == 0 { 1 } else { -1 };
    (sign * phase, sq / ratio(BigInt::from(tj3 + 1), BigInt::from(1)))
}

/// Exact Wigner 6j {a b c; d e f} as (sign, square).
pub fn six_j_exact(ta: i64, tb: i64, tc: i64, td: i64, te: i64, tf: i64) -> (i32, BigRational) {
    let zero = (0, BigRational::zero());
    if !triangle_ok(ta, tb, tc)
        || !triangle_ok(ta, te, tf)
        || !triangle_ok(td, tb, tf)
        || !triangle_ok(td, te, tc)
    {
        return zero;
    }

    let t1 = half(ta + tb + tc);
    let t2 = half(ta + te + tf);
    let t3 = half(td + tb + tf);
    let t4 = half(td + te + tc);
    let u1 = half(ta + tb + td + te);
    let u2 = half(tb + tc + te + tf);
    let u3 = half(ta + tc + td + tf);
    let tmin = t1.max(t2).max(t3).max(t4);
    let tmax = u1.min(u2).min(u3);

    let mut s = BigRational::zero();
    for t in tmin..=tmax {
        let den = fact(t - t1)
            * fact(t - t2)
            * fact(t - t3)
            * fact(t - t4)
            * fact(u1 - t)
            * fact(u2 - t)
            * fact(u3 - t);
        let num = if t % 2 == 0 { fact(t + 1) } else { -fact(t + 1) };
        s += ratio(num, den);
    }
    if s.is_zero() {
        return zero;
    }

    let square = delta(ta, tb, tc) * delta(ta, te, tf) * delta(td, tb, tf) * delta(td, te, tc)
        * &s
        * &s;
    (if s.is_positive() { 1 } else { -1 }, square)
}

/// Asserts an f64 value against an exact (sign, square) pair.
pub fn assert_against_exact(actual: f64, exact: (i32, BigRational), context: &str) {
    let (sign, square) = exact;
    if sign == 0 {
        assert!(actual.abs() < 1e-14, "{context}: expected 0, got {actual:e}");
        return;
    }
    let expected = sign as f64 * square.to_f64().expect("representable square").sqrt();
    let tol = 1e-14f64.max(expected.abs() * 1e-13);
    assert!(
        (actual - expected).abs() < tol,
        "{context}: expected {expected:.17e}, got {actual:.17e}"
    );
}
