use super::real::{BigComplex, BigReal};
use super::{common_denominator, rat_int, ExactError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Splits `d = d0 * f^2` with `d0` squarefree.
pub fn quad_normalize(d: i64) -> Result<(i64, u64), ExactError> {
    if d == 0 {
        return Err(ExactError::InvalidInput("radicand must be nonzero".into()));
    }
    let sign = d.signum();
    let mut rest = d.unsigned_abs();
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            f *= p;
        }
        p += 1;
    }
    Ok((sign * rest as i64, f))
}

/// The field `Q` or a quadratic field `Q(sqrt(d0))` with `d0` squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadField {
    Rational,
    Quadratic { d0: i64 },
}

impl QuadField {
    /// `Q(sqrt(d0))`; `d0` must be squarefree and different from 0 and 1.
    pub fn new(d0: i64) -> Result<Self, ExactError> {
        let (s, f) = quad_normalize(d0)?;
        if f != 1 {
            return Err(ExactError::InvalidInput(format!("{d0} is not squarefree")));
        }
        if s == 1 {
            return Err(ExactError::InvalidInput("d0 = 1 gives Q, use Rational".into()));
        }
        Ok(QuadField::Quadratic { d0: s })
    }

    /// Field generated by a square root of any nonzero integer (perfect squares give `Q`).
    pub fn from_radicand(d: i64) -> Result<Self, ExactError> {
        let (d0, _) = quad_normalize(d)?;
        if d0 == 1 {
            Ok(QuadField::Rational)
        } else {
            QuadField::new(d0)
        }
    }

    /// Field with the given discriminant; 0 or 1 mean `Q`.
    pub fn from_disc(disc: i64) -> Result<Self, ExactError> {
        if disc == 0 || disc == 1 {
            Ok(QuadField::Rational)
        } else {
            Self::from_radicand(disc)
        }
    }

    /// Squarefree radicand; 1 for `Q`.
    pub fn d0(&self) -> i64 {
        match self {
            QuadField::Rational => 1,
            QuadField::Quadratic { d0 } => *d0,
        }
    }

    /// Field discriminant; 1 for `Q`.
    pub fn disc(&self) -> i64 {
        match self {
            QuadField::Rational => 1,
            QuadField::Quadratic { d0 } => {
                if d0.rem_euclid(4) == 1 {
                    *d0
                } else {
                    4 * d0
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            QuadField::Rational => 1,
            QuadField::Quadratic { .. } => 2,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, QuadField::Rational)
    }

    /// Whether the ring of integers has basis `{1, (1 + sqrt(d0)) / 2}`.
    pub(crate) fn half_basis(&self) -> bool {
        matches!(self, QuadField::Quadratic { d0 } if d0.rem_euclid(4) == 1)
    }

    /// Minimal polynomial `x^2 - t x + n` of the integral generator `omega`.
    pub(crate) fn omega_minpoly(&self) -> (i64, i64) {
        let d0 = self.d0();
        if self.half_basis() {
            (1, (1 - d0) / 4)
        } else {
            (0, -d0)
        }
    }

    /// Smallest field containing both; errors if that would have degree 4.
    pub fn join(&self, other: &QuadField) -> Result<QuadField, ExactError> {
        match (self, other) {
            (QuadField::Rational, f) | (f, QuadField::Rational) => Ok(*f),
            (a, b) if a == b => Ok(*a),
            (a, b) => Err(ExactError::FieldMismatch(a.d0(), b.d0())),
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadField::Rational => write!(f, "Q"),
            QuadField::Quadratic { d0 } => write!(f, "Q(sqrt({d0}))"),
        }
    }
}

/// Element `a + b*sqrt(d0)` of a quadratic field (or of `Q`, with `b = 0`).
///
/// Arithmetic between elements of two different quadratic fields panics;
/// elements of `Q` mix freely with either.
#[derive(Clone, Debug)]
pub struct AlgNum {
    pub field: QuadField,
    pub a: Rat,
    pub b: Rat,
}

impl AlgNum {
    pub fn new(field: QuadField, a: Rat, b: Rat) -> Self {
        let b = if field.is_rational() { Rat::zero() } else { b };
        AlgNum { field, a, b }
    }

    pub fn rational(a: Rat) -> Self {
        AlgNum { field: QuadField::Rational, a, b: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(Rat::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(d0)` in `field`.
    pub fn sqrt_d0(field: QuadField) -> Self {
        AlgNum { field, a: Rat::zero(), b: Rat::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Same value regarded as an element of `field` (which must contain it).
    pub fn in_field(&self, field: QuadField) -> Self {
        let f = self.field.join(&field).expect("incompatible fields");
        assert!(self.is_rational() || f == field, "element not in target field");
        AlgNum { field, a: self.a.clone(), b: if field.is_rational() { Rat::zero() } else { self.b.clone() } }
    }

    /// Galois conjugate `a - b sqrt(d0)`.
    pub fn conj(&self) -> Self {
        AlgNum { field: self.field, a: self.a.clone(), b: -self.b.clone() }
    }

    /// Complex conjugate: the Galois conjugate in an imaginary field, the identity in a real one.
    pub fn complex_conj(&self) -> Self {
        if self.field.d0() < 0 {
            self.conj()
        } else {
            self.clone()
        }
    }

    /// `a^2 - d0 b^2`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.field.d0()) * &self.b * &self.b
    }

    /// `2a`.
    pub fn trace(&self) -> Rat {
        rat_int(2) * &self.a
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let c = self.conj();
        Ok(AlgNum { field: self.field, a: c.a / &n, b: c.b / n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = AlgNum::one().in_field(self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        AlgNum { field: self.field, a: &self.a * c, b: &self.b * c }
    }

    /// Coordinates in the integral basis: `self = (a0 + b0*omega) / den` with `den > 0`.
    pub(crate) fn integral_coords(&self) -> (BigInt, BigInt, BigInt) {
        let (ca, cb) = if self.field.half_basis() {
            // sqrt(d0) = 2 omega - 1
            (&self.a - &self.b, rat_int(2) * &self.b)
        } else {
            (self.a.clone(), self.b.clone())
        };
        let den = common_denominator([&ca, &cb]);
        let a0 = (&ca * Rat::from_integer(den.clone())).to_integer();
        let b0 = (&cb * Rat::from_integer(den.clone())).to_integer();
        (a0, b0, den)
    }

    /// Whether both coordinates in the integral basis are integers.
    pub fn is_algebraic_integer(&self) -> bool {
        self.integral_coords().2.is_one()
    }

    /// Complex embedding sending `sqrt(d0)` to the positive (or upper half-plane) root.
    pub fn embed(&self, prec: usize) -> BigComplex {
        let a = BigReal::from_rat(&self.a, prec);
        if self.b.is_zero() {
            return BigComplex::from_real(a);
        }
        let d0 = self.field.d0();
        let r = BigReal::from_i64(d0.abs(), prec).sqrt();
        let bb = BigReal::from_rat(&self.b, prec) * r;
        if d0 < 0 {
            BigComplex::new(a, bb)
        } else {
            BigComplex::from_real(a + bb)
        }
    }

    /// Larger of the absolute numerator/denominator sizes of both coordinates, in bits.
    pub fn height_bits(&self) -> u64 {
        [self.a.numer(), self.a.denom(), self.b.numer(), self.b.denom()]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }

    fn joined(&self, other: &AlgNum) -> QuadField {
        self.field.join(&other.field).expect("arithmetic across different quadratic fields")
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &AlgNum) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.field == o.field)
    }
}

impl Eq for AlgNum {}

impl std::hash::Hash for AlgNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*sqrt({})", self.b, self.field.d0())
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.field.d0())
        }
    }
}

impl<'a> Add<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn add(self, o: &AlgNum) -> AlgNum {
        AlgNum { field: self.joined(o), a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn sub(self, o: &AlgNum) -> AlgNum {
        AlgNum { field: self.joined(o), a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn mul(self, o: &AlgNum) -> AlgNum {
        let field = self.joined(o);
        if self.b.is_zero() {
            return AlgNum { field, a: &self.a * &o.a, b: &self.a * &o.b };
        }
        if o.b.is_zero() {
            return AlgNum { field, a: &self.a * &o.a, b: &self.b * &o.a };
        }
        let d0 = rat_int(field.d0());
        AlgNum {
            field,
            a: &self.a * &o.a + d0 * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl<'a> Div<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn div(self, o: &AlgNum) -> AlgNum {
        self * &o.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: &AlgNum) -> AlgNum {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<AlgNum> for &'a AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum { field: self.field, a: -self.a, b: -self.b }
    }
}

impl<'a> Neg for &'a AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -(self.clone())
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        AlgNum::from_int(n)
    }
}

impl From<Rat> for AlgNum {
    fn from(r: Rat) -> Self {
        AlgNum::rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    #[test]
    fn normalize_radicands() {
        assert_eq!(quad_normalize(-8424).unwrap(), (-26, 18));
        assert_eq!(quad_normalize(5).unwrap(), (5, 1));
        assert_eq!(quad_normalize(12).unwrap(), (3, 2));
        assert_eq!(quad_normalize(-104).unwrap(), (-26, 2));
        assert!(quad_normalize(0).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(QuadField::new(-26).unwrap().disc(), -104);
        assert_eq!(QuadField::new(-3).unwrap().disc(), -3);
        assert_eq!(QuadField::new(5).unwrap().disc(), 5);
        assert!(QuadField::new(12).is_err());
        assert_eq!(QuadField::from_disc(-104).unwrap(), QuadField::Quadratic { d0: -26 });
        assert_eq!(QuadField::from_disc(0).unwrap(), QuadField::Rational);
    }

    #[test]
    fn norm_and_trace_match_conjugate_products() {
        let f = QuadField::new(-26).unwrap();
        let x = AlgNum::new(f, rat(2, 5), rat(-3, 7));
        let p = &x * &x.conj();
        assert!(p.b.is_zero());
        assert_eq!(p.a, x.norm());
        assert_eq!((&x + &x.conj()).a, x.trace());
        assert_eq!(&x * &x.inv().unwrap(), AlgNum::one().in_field(f));
    }

    #[test]
    fn integral_coordinates() {
        let f = QuadField::new(-3).unwrap();
        // (1 + sqrt(-3)) / 2 is omega itself
        let w = AlgNum::new(f, rat(1, 2), rat(1, 2));
        assert_eq!(w.integral_coords(), (BigInt::from(0), BigInt::from(1), BigInt::from(1)));
        assert!(w.is_algebraic_integer());
        let g = QuadField::new(-26).unwrap();
        assert!(!AlgNum::new(g, rat(1, 2), rat(1, 2)).is_algebraic_integer());
    }
}
