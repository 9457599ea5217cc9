//! Exact arithmetic in the biquadratic field Q(√2, √3).
//!
//! Every vertex of a unit-edge tiling by regular 3-, 4-, 6-, 8- and 12-gons
//! has coordinates in this field, since all edge directions are multiples of
//! 15° and cos 15° = (√6 + √2)/4.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Precision (in bits) of the first interval enclosure used by [`QuarticScalar::sign`].
const INITIAL_PRECISION: u64 = 64;

/// An element `a + b√2 + c√3 + d√6` with rational `a, b, c, d`.
///
/// Stored over a common denominator: `(n₀ + n₁√2 + n₂√3 + n₃√6) / den` with
/// `den > 0` and `gcd(n₀, n₁, n₂, n₃, den) = 1`, so structural equality is
/// field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuarticScalar {
    num: [BigInt; 4],
    den: BigInt,
}

/// The four basis elements, indexed in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    One = 0,
    Sqrt2 = 1,
    Sqrt3 = 2,
    Sqrt6 = 3,
}

impl QuarticScalar {
    pub fn zero() -> Self {
        Self {
            num: Default::default(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self {
            num: [BigInt::from(n), BigInt::zero(), BigInt::zero(), BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::new(
            r.clone(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    /// `n / d` as a scalar. Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(n.into(), d.into()))
    }

    pub fn sqrt2() -> Self {
        Self::basis(Basis::Sqrt2)
    }

    pub fn sqrt3() -> Self {
        Self::basis(Basis::Sqrt3)
    }

    pub fn sqrt6() -> Self {
        Self::basis(Basis::Sqrt6)
    }

    pub fn basis(b: Basis) -> Self {
        let mut s = Self::zero();
        s.num[b as usize] = BigInt::one();
        s
    }

    /// Builds `a + b√2 + c√3 + d√6`.
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        let coeffs = [a, b, c, d];
        let mut den = BigInt::one();
        for q in &coeffs {
            den = den.lcm(q.denom());
        }
        let num = coeffs
            .map(|q| q.numer() * (&den / q.denom()));
        Self::from_parts(num, den)
    }

    /// Integer-coefficient constructor, handy for literals.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_parts(
            [a.into(), b.into(), c.into(), d.into()],
            BigInt::one(),
        )
    }

    fn from_parts(mut num: [BigInt; 4], mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for n in &mut num {
                *n = -std::mem::take(n);
            }
        }
        let mut g = den.clone();
        for n in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            for n in &mut num {
                *n = &*n / &g;
            }
            den = den / &g;
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        Self { num, den }
    }

    /// Coefficient of the given basis element.
    pub fn coeff(&self, b: Basis) -> Rational {
        Rational::new(self.num[b as usize].clone(), self.den.clone())
    }

    /// `[a, b, c, d]` such that the value is `a + b√2 + c√3 + d√6`.
    pub fn coeffs(&self) -> [Rational; 4] {
        [
            self.coeff(Basis::One),
            self.coeff(Basis::Sqrt2),
            self.coeff(Basis::Sqrt3),
            self.coeff(Basis::Sqrt6),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// True when the value is rational (no irrational part).
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_parts(
            self.num.clone().map(|n| n * r.numer()),
            &self.den * r.denom(),
        )
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        Self::from_parts(self.num.clone(), &self.den * BigInt::from(k))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self::from_parts(self.num.clone().map(|n| n * &k), self.den.clone())
    }

    /// Image under the field automorphism sending √2 ↦ s2·√2, √3 ↦ s3·√3.
    fn conjugate(&self, neg_sqrt2: bool, neg_sqrt3: bool) -> Self {
        let mut num = self.num.clone();
        if neg_sqrt2 {
            num[1] = -std::mem::take(&mut num[1]);
        }
        if neg_sqrt3 {
            num[2] = -std::mem::take(&mut num[2]);
        }
        if neg_sqrt2 != neg_sqrt3 {
            num[3] = -std::mem::take(&mut num[3]);
        }
        Self {
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse, rationalised through the Galois conjugates.
    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // q = p·σ₂(p) lies in Q(√3); q·σ₃(q) is the (rational) norm.
        let s2 = self.conjugate(true, false);
        let q = self * &s2;
        let q3 = q.conjugate(false, true);
        let norm = &q * &q3;
        debug_assert!(norm.is_rational());
        let norm = norm.coeff(Basis::One);
        let numerator = &s2 * &q3;
        Ok(numerator.scale(&norm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self * &other.inverse()?)
    }

    /// Exact sign: −1, 0 or +1.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return sign_of(&self.num[0]);
        }
        let mut bits = INITIAL_PRECISION;
        loop {
            let (lo, hi) = self.scaled_enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn signum_ordering(&self) -> Ordering {
        self.sign().cmp(&0)
    }

    /// Integers `(lo, hi)` with `lo ≤ 2^bits · den · value ≤ hi`.
    fn scaled_enclosure(&self, bits: u64) -> (BigInt, BigInt) {
        let roots = root_floors(bits);
        let mut lo = &self.num[0] << bits;
        let mut hi = lo.clone();
        for (k, r) in roots.iter().enumerate() {
            let c = &self.num[k + 1];
            if c.is_zero() {
                continue;
            }
            // r ≤ 2^bits·√m < r + 1
            let a = c * r;
            if c.is_positive() {
                hi += &a + c;
                lo += a;
            } else {
                lo += &a + c;
                hi += a;
            }
        }
        (lo, hi)
    }

    /// A rational `r` with `|r − self| ≤ eps`. Panics unless `eps > 0`.
    pub fn approximate(&self, eps: &Rational) -> Rational {
        assert!(eps.is_positive(), "approximation tolerance must be positive");
        if self.is_rational() {
            return self.coeff(Basis::One);
        }
        let mut bits = INITIAL_PRECISION;
        loop {
            let (lo, hi) = self.scaled_enclosure(bits);
            let scale = &self.den << bits;
            let width = Rational::new(&hi - &lo, scale.clone());
            if &width <= eps {
                // midpoint of the enclosure is within width/2 of the value
                return Rational::new(lo + hi, scale * 2);
            }
            bits *= 2;
        }
    }

    /// Enclosing interval `[lo, hi]` of rationals with width at most `eps`.
    pub fn enclosure(&self, eps: &Rational) -> (Rational, Rational) {
        if self.is_rational() {
            let r = self.coeff(Basis::One);
            return (r.clone(), r);
        }
        let mut bits = INITIAL_PRECISION;
        loop {
            let (lo, hi) = self.scaled_enclosure(bits);
            let scale = &self.den << bits;
            let lo = Rational::new(lo, scale.clone());
            let hi = Rational::new(hi, scale);
            if &(&hi - &lo) <= eps {
                return (lo, hi);
            }
            bits *= 2;
        }
    }

    /// Nearest `f64`; for reporting and coarse enumeration bounds only.
    pub fn to_f64(&self) -> f64 {
        let eps = Rational::new(BigInt::one(), BigInt::one() << 80u32);
        self.approximate(&eps).to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

fn sign_of(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `[⌊2^bits·√2⌋, ⌊2^bits·√3⌋, ⌊2^bits·√6⌋]`, cached for the common precisions.
fn root_floors(bits: u64) -> std::borrow::Cow<'static, [BigInt; 3]> {
    static P64: OnceLock<[BigInt; 3]> = OnceLock::new();
    static P128: OnceLock<[BigInt; 3]> = OnceLock::new();
    let compute = |bits: u64| {
        [2u32, 3, 6].map(|m| (BigInt::from(m) << (2 * bits)).sqrt())
    };
    match bits {
        64 => std::borrow::Cow::Borrowed(P64.get_or_init(|| compute(64))),
        128 => std::borrow::Cow::Borrowed(P128.get_or_init(|| compute(128))),
        _ => std::borrow::Cow::Owned(compute(bits)),
    }
}

impl Default for QuarticScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QuarticScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<Rational> for QuarticScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(&r)
    }
}

impl PartialOrd for QuarticScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuarticScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum_ordering()
    }
}

impl<'a> Add<&'a QuarticScalar> for &'a QuarticScalar {
    type Output = QuarticScalar;
    fn add(self, rhs: &QuarticScalar) -> QuarticScalar {
        if self.den == rhs.den {
            let num = std::array::from_fn(|k| &self.num[k] + &rhs.num[k]);
            return QuarticScalar::from_parts(num, self.den.clone());
        }
        let num = std::array::from_fn(|k| &self.num[k] * &rhs.den + &rhs.num[k] * &self.den);
        QuarticScalar::from_parts(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a QuarticScalar> for &'a QuarticScalar {
    type Output = QuarticScalar;
    fn sub(self, rhs: &QuarticScalar) -> QuarticScalar {
        if self.den == rhs.den {
            let num = std::array::from_fn(|k| &self.num[k] - &rhs.num[k]);
            return QuarticScalar::from_parts(num, self.den.clone());
        }
        let num = std::array::from_fn(|k| &self.num[k] * &rhs.den - &rhs.num[k] * &self.den);
        QuarticScalar::from_parts(num, &self.den * &rhs.den)
    }
}

impl<'a> Mul<&'a QuarticScalar> for &'a QuarticScalar {
    type Output = QuarticScalar;
    fn mul(self, rhs: &QuarticScalar) -> QuarticScalar {
        let [a, b, c, d] = &self.num;
        let [e, f, g, h] = &rhs.num;
        // √2·√3 = √6, √2·√6 = 2√3, √3·√6 = 3√2
        let one = a * e + ((b * f) << 1u32) + (c * g) * 3 + (d * h) * 6;
        let r2 = a * f + b * e + (c * h + d * g) * 3;
        let r3 = a * g + c * e + ((b * h + d * f) << 1u32);
        let r6 = a * h + d * e + b * g + c * f;
        QuarticScalar::from_parts([one, r2, r3, r6], &self.den * &rhs.den)
    }
}

impl Neg for &QuarticScalar {
    type Output = QuarticScalar;
    fn neg(self) -> QuarticScalar {
        QuarticScalar {
            num: self.num.clone().map(|n| -n),
            den: self.den.clone(),
        }
    }
}

impl Neg for QuarticScalar {
    type Output = QuarticScalar;
    fn neg(self) -> QuarticScalar {
        QuarticScalar {
            num: self.num.map(|n| -n),
            den: self.den,
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<QuarticScalar> for QuarticScalar {
            type Output = QuarticScalar;
            fn $method(self, rhs: QuarticScalar) -> QuarticScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QuarticScalar> for QuarticScalar {
            type Output = QuarticScalar;
            fn $method(self, rhs: &QuarticScalar) -> QuarticScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<QuarticScalar> for &'a QuarticScalar {
            type Output = QuarticScalar;
            fn $method(self, rhs: QuarticScalar) -> QuarticScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&QuarticScalar> for QuarticScalar {
    fn add_assign(&mut self, rhs: &QuarticScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QuarticScalar> for QuarticScalar {
    fn sub_assign(&mut self, rhs: &QuarticScalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for QuarticScalar {
    /// Human-readable form such as `(3 + √3)/4` or `-1/2√2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const NAMES: [&str; 4] = ["", "√2", "√3", "√6"];
        let mut body = String::new();
        let mut terms = 0;
        for (k, n) in self.num.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let mag = n.abs();
            let coeff = if k > 0 && mag.is_one() {
                String::new()
            } else {
                mag.to_string()
            };
            if terms == 0 {
                if n.is_negative() {
                    body.push('-');
                }
            } else {
                body.push_str(if n.is_negative() { " - " } else { " + " });
            }
            body.push_str(&coeff);
            body.push_str(NAMES[k]);
            terms += 1;
        }
        if self.den.is_one() {
            write!(f, "{body}")
        } else if terms > 1 {
            write!(f, "({body})/{}", self.den)
        } else {
            write!(f, "{body}/{}", self.den)
        }
    }
}

impl fmt::Debug for QuarticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
