use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::scalar::{QuarticScalar, Rational};

/// A point or displacement in the plane with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2 {
    pub x: QuarticScalar,
    pub y: QuarticScalar,
}

impl Vec2 {
    pub fn new(x: QuarticScalar, y: QuarticScalar) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(x.into(), y.into())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, other: &Vec2) -> QuarticScalar {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(&self, other: &Vec2) -> QuarticScalar {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_squared(&self) -> QuarticScalar {
        self.dot(self)
    }

    pub fn scale(&self, k: &QuarticScalar) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn scale_rational(&self, k: &Rational) -> Vec2 {
        Vec2::new(self.x.scale(k), self.y.scale(k))
    }

    pub fn mul_int(&self, k: i64) -> Vec2 {
        Vec2::new(self.x.mul_int(k), self.y.mul_int(k))
    }

    pub fn div_int(&self, k: i64) -> Vec2 {
        Vec2::new(self.x.div_int(k), self.y.div_int(k))
    }

    /// Integer combination `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &Vec2, b: i64) -> Vec2 {
        &self.mul_int(a) + &other.mul_int(b)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl<'a> Add<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl<'a> Sub<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        &self + &rhs
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        &self - &rhs
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Vec2 {
    /// Exact unit vector at angle `15°·k`.
    pub fn unit_15(k: i64) -> Vec2 {
        let k = k.rem_euclid(24);
        Vec2::new(cos_15(k), cos_15(k - 6))
    }
}

/// cos(15°·k), exact.
fn cos_15(k: i64) -> QuarticScalar {
    let k = k.rem_euclid(24);
    // fold into [0, 12] using cos(-θ) = cos θ, then [0, 6] via cos(180° - θ) = -cos θ
    let k = if k > 12 { 24 - k } else { k };
    let (k, negate) = if k > 6 { (12 - k, true) } else { (k, false) };
    let v = match k {
        0 => QuarticScalar::one(),
        1 => QuarticScalar::from_ints(0, 1, 0, 1).div_int(4),
        2 => QuarticScalar::sqrt3().div_int(2),
        3 => QuarticScalar::sqrt2().div_int(2),
        4 => QuarticScalar::frac(1, 2),
        5 => QuarticScalar::from_ints(0, -1, 0, 1).div_int(4),
        _ => QuarticScalar::zero(),
    };
    if negate {
        -v
    } else {
        v
    }
}
