//! Exact rational scalars and plane vectors.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` exactly.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() && ip_digits.is_empty() {
            return None;
        }
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mut digits = String::from(ip_digits);
        digits.push_str(fp);
        if digits.is_empty() {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// `"num/den"` with a positive denominator, always reduced.
pub fn format_q(x: &Q) -> String {
    alloc::format!("{}/{}", x.numer(), x.denom())
}

/// Least nonnegative residue of `x` modulo a positive `m`.
pub fn rem_euclid(x: &Q, m: &Q) -> Q {
    let k = (x / m).floor();
    x - k * m
}

/// `gcd` of two integers (nonnegative).
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Exact plane vector with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Q,
    pub y: Q,
}

pub type RationalVec = Vec2;

impl Vec2 {
    pub fn new(x: Q, y: Q) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2 { x: qi(x), y: qi(y) }
    }

    pub fn zero() -> Self {
        Vec2 { x: Q::zero(), y: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, o: &Vec2) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn scale(&self, k: &Q) -> Vec2 {
        Vec2 { x: &self.x * k, y: &self.y * k }
    }

    /// Counterclockwise quarter turn.
    pub fn rot90(&self) -> Vec2 {
        Vec2 { x: -&self.y, y: self.x.clone() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<'a> Add<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl<'a> Sub<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2 { x: -self.x, y: -self.y }
    }
}

impl<'a> Neg for &'a Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2 { x: -&self.x, y: -&self.y }
    }
}

impl<'a> Mul<&'a Q> for &'a Vec2 {
    type Output = Vec2;
    fn mul(self, k: &Q) -> Vec2 {
        self.scale(k)
    }
}

/// True when `x` is strictly positive.
pub fn pos(x: &Q) -> bool {
    x.is_positive()
}

/// True when `x` is strictly negative.
pub fn neg(x: &Q) -> bool {
    x.is_negative()
}

pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6"), Some(q(1, 2)));
        assert_eq!(parse_q("-7"), Some(qi(-7)));
        assert_eq!(parse_q("0.2"), Some(q(1, 5)));
        assert_eq!(parse_q("-.5"), Some(q(-1, 2)));
        assert_eq!(parse_q("1.25"), Some(q(5, 4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
        assert_eq!(parse_q("."), None);
    }

    #[test]
    fn format_reduces() {
        assert_eq!(format_q(&Q::new(BigInt::from(4), BigInt::from(-6))), "-2/3");
        assert_eq!(format_q(&qi(3)), "3/1");
    }

    #[test]
    fn residues() {
        assert_eq!(rem_euclid(&q(-1, 3), &qi(1)), q(2, 3));
        assert_eq!(rem_euclid(&q(7, 2), &qi(2)), q(3, 2));
        assert_eq!(rem_euclid(&qi(4), &qi(2)), qi(0));
    }
}
