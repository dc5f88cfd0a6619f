//! Half-integer angular-momentum labels, stored exactly as twice their value.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// An integer or half-odd-integer, stored as `2j` so that triangle and
/// parity logic stays exact. Covers F, F', J, J', I, k, q, m.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True when `m` is a valid magnetic number for this magnitude:
    /// |m| <= j and m ≡ j (mod 1).
    pub fn admits_projection(self, m: HalfInt) -> bool {
        m.twice.abs() <= self.twice && (self.twice - m.twice) % 2 == 0
    }

    /// Iterator over m = -j..=j in integer steps, descending from +j.
    pub fn projections_descending(self) -> impl Iterator<Item = HalfInt> {
        let j = self.twice;
        (0..=2 * j.max(0))
            .step_by(2)
            .map(move |d| HalfInt::from_twice(j - d))
            .take_while(move |m| m.twice >= -j)
    }

    /// Number of magnetic sublevels 2j+1 (0 for negative magnitudes).
    pub fn multiplicity(self) -> usize {
        if self.twice < 0 {
            0
        } else {
            (self.twice + 1) as usize
        }
    }

    /// Triangle rule |a-b| <= c <= a+b with integral perimeter.
    pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
        let (ta, tb, tc) = (a.twice, b.twice, c.twice);
        ta >= 0
            && tb >= 0
            && tc >= 0
            && tc >= (ta - tb).abs()
            && tc <= ta + tb
            && (ta + tb + tc) % 2 == 0
    }
}

/// (-1)^e for an exponent given as twice its value; the exponent must be an
/// integer (even `twice_exponent`), which every phase in this crate is.
pub fn phase_from_twice(twice_exponent: i32) -> f64 {
    debug_assert!(twice_exponent % 2 == 0, "non-integer phase exponent");
    if (twice_exponent / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseHalfIntError(String);

impl fmt::Display for ParseHalfIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid half-integer '{}': expected e.g. 1, 3/2, -1/2", self.0)
    }
}

impl std::error::Error for ParseHalfIntError {}

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(ParseHalfIntError(s.to_string()));
            }
            let n: i32 = num.trim().parse().map_err(|_| ParseHalfIntError(s.to_string()))?;
            Ok(HalfInt::from_twice(n))
        } else {
            let n: i32 = s.parse().map_err(|_| ParseHalfIntError(s.to_string()))?;
            Ok(HalfInt::from_int(n))
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct HalfIntVisitor;

impl Visitor<'_> for HalfIntVisitor {
    type Value = HalfInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a half-integer like \"3/2\", \"1\", or 1.5")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<HalfInt, E> {
        v.parse().map_err(|e: ParseHalfIntError| E::custom(e))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<HalfInt, E> {
        i32::try_from(v)
            .map(HalfInt::from_int)
            .map_err(|_| E::custom("half-integer out of range"))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<HalfInt, E> {
        self.visit_i64(i64::try_from(v).map_err(|_| E::custom("half-integer out of range"))?)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<HalfInt, E> {
        let twice = 2.0 * v;
        if twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
            return Err(E::custom(format!("{v} is not a half-integer")));
        }
        Ok(HalfInt::from_twice(twice as i32))
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(HalfIntVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-2", "3/2", "-1/2", "5/2"] {
            let h: HalfInt = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert!("2/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }

    #[test]
    fn projections_descend() {
        let f: HalfInt = "3/2".parse().unwrap();
        let ms: Vec<i32> = f.projections_descending().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![3, 1, -1, -3]);
        assert_eq!(f.multiplicity(), 4);
    }

    #[test]
    fn triangle_rule() {
        let h = |t| HalfInt::from_twice(t);
        assert!(HalfInt::triangle(h(2), h(2), h(4)));
        assert!(!HalfInt::triangle(h(2), h(2), h(5))); // non-integral perimeter
        assert!(!HalfInt::triangle(h(2), h(2), h(6)));
        assert!(HalfInt::triangle(h(1), h(3), h(2)));
    }

    #[test]
    fn phases() {
        assert_eq!(phase_from_twice(0), 1.0);
        assert_eq!(phase_from_twice(2), -1.0);
        assert_eq!(phase_from_twice(-2), -1.0);
        assert_eq!(phase_from_twice(4), 1.0);
    }
}
