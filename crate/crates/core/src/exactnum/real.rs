//! Arbitrary-precision real and complex numbers backed by `astro-float`.
//!
//! Every value carries its binary precision; binary operations work at the
//! larger of the two operand precisions. Transcendental functions share a
//! per-thread constant cache.

use super::Rat;
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Guard digits added on top of the requested working precision.
pub const GUARD_DIGITS: u32 = 15;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision in decimal digits; the binary precision includes guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Precision {
    pub digits: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision { digits }
    }

    /// Binary precision for `digits + GUARD_DIGITS + extra` decimal digits, rounded up to whole words.
    pub fn bits_with(&self, extra: u32) -> usize {
        bits_for_digits(self.digits + GUARD_DIGITS + extra)
    }

    pub fn bits(&self) -> usize {
        self.bits_with(0)
    }

    /// `10^-k` as an `f64`-scale exponent helper: returns `k * ln 10`.
    pub fn ln_tolerance(k: f64) -> f64 {
        k * std::f64::consts::LN_10
    }
}

/// Number of bits (multiple of 64) carrying `d` decimal digits.
pub fn bits_for_digits(d: u32) -> usize {
    let b = (d as f64 * LOG2_10).ceil() as usize;
    b.div_ceil(64) * 64
}

/// Arbitrary-precision real number.
#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        debug_assert!(!v.is_nan(), "NaN in BigReal: {:?}", v.err());
        BigReal { v, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("precision change");
        BigReal { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::new(prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(i, prec), prec)
    }

    pub fn from_u64(i: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(i, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let (sign, words) = n.to_u64_digits();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (words.len() * 64) as i32;
        let mut v = BigFloat::from_words(&words, s, e);
        v.set_precision(prec, RM).expect("precision change");
        Self::wrap(v, prec)
    }

    pub fn from_rat(r: &Rat, prec: usize) -> Self {
        let n = Self::from_bigint(r.numer(), prec);
        if r.denom() == &BigInt::from(1) {
            return n;
        }
        n / Self::from_bigint(r.denom(), prec)
    }

    /// Parses a decimal literal.
    pub fn parse(s: &str, prec: usize) -> Self {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        Self::wrap(v, prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.atan(self.prec, RM, cc)), self.prec)
    }

    /// Angle of the point `(x, y)`, in `(-pi, pi]`.
    pub fn atan2(y: &BigReal, x: &BigReal) -> Self {
        let prec = y.prec.max(x.prec);
        if x.is_zero() {
            let hp = Self::pi(prec) / Self::from_i64(2, prec);
            return if y.is_negative() { -hp } else if y.is_zero() { Self::zero(prec) } else { hp };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Self::pi(prec)
        } else {
            base + Self::pi(prec)
        }
    }

    /// Integer power by repeated squaring (negative exponents via reciprocal).
    pub fn powi(&self, e: i64) -> Self {
        let mut r = Self::one(self.prec);
        let mut b = self.clone();
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        if e < 0 {
            Self::one(self.prec) / r
        } else {
            r
        }
    }

    /// `self^y` for positive `self`.
    pub fn pow(&self, y: &BigReal) -> Self {
        (self.ln() * y).exp()
    }

    /// Rough `log10 |self|` (exact to about 1e-15 relative); `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, _, _, e, _) = self.v.as_raw_parts().expect("finite value");
        let top = *m.last().unwrap() as f64 / 18446744073709551616.0;
        top.log10() + e as f64 * LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (m, _, s, e, _) = self.v.as_raw_parts().expect("finite value");
        let top = *m.last().unwrap() as f64 / 18446744073709551616.0;
        let mag = if e > 1023 {
            f64::INFINITY
        } else if e < -1073 {
            0.0
        } else {
            top * 2f64.powi(e)
        };
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let (m, _, s, e, _) = self.v.as_raw_parts().expect("finite value");
        let mut mag = BigInt::from_slice(
            BigSign::Plus,
            &m.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        );
        let shift = e as i64 - 64 * m.len() as i64;
        if shift >= 0 {
            mag <<= shift as usize;
        } else {
            let sh = (-shift) as usize;
            mag = ((mag >> (sh - 1)) + 1u32) >> 1usize;
        }
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal rendering with roughly `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let p = bits_for_digits(digits.max(1) + 2);
        let v = self.with_prec(p.min(self.prec.max(64)));
        with_consts(|cc| v.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    pub fn cmp_abs(&self, o: &BigReal) -> Ordering {
        match self.v.abs_cmp(&o.v) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    pub fn max(self, o: BigReal) -> BigReal {
        if self >= o {
            self
        } else {
            o
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = (self.prec as f64 * LOG10_2) as u32;
        write!(f, "{}", self.to_decimal(d))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl<'a, 'b> $tr<&'b BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: &'b BigReal) -> BigReal {
                let p = self.prec.max(o.prec);
                BigReal::wrap(self.v.$m(&o.v, p, RM), p)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                (&self).$m(&o)
            }
        }
        impl<'b> $tr<&'b BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &'b BigReal) -> BigReal {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$m(&o)
            }
        }
    };
}
real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl<'a> Neg for &'a BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex { re, im: BigReal::zero(p) }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_real(BigReal::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Self::from_real(BigReal::one(prec))
    }

    pub fn i(prec: usize) -> Self {
        BigComplex { re: BigReal::zero(prec), im: BigReal::one(prec) }
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        BigComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> BigReal {
        BigReal::atan2(&self.im, &self.re)
    }

    pub fn scale(&self, c: &BigReal) -> Self {
        BigComplex { re: &self.re * c, im: &self.im * c }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        BigComplex { re: &m * self.im.cos(), im: m * self.im.sin() }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigComplex { re: self.norm_sqr().ln() / BigReal::from_i64(2, self.prec()), im: self.arg() }
    }

    pub fn powi(&self, e: i64) -> Self {
        let mut r = Self::one(self.prec());
        let mut b = self.clone();
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        if e < 0 {
            r.inv()
        } else {
            r
        }
    }

    /// Maximum of the component magnitudes, as `log10`.
    pub fn log10_abs(&self) -> f64 {
        self.re.log10_abs().max(self.im.log10_abs())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl<'a, 'b> Add<&'b BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &'b BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a, 'b> Sub<&'b BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &'b BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a, 'b> Mul<&'b BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &'b BigComplex) -> BigComplex {
        BigComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a, 'b> Div<&'b BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &'b BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / n;
        BigComplex { re, im }
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'b> $tr<&'b BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &'b BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                self.$m(&o)
            }
        }
    };
}
complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

/// Deterministic pairwise summation; the grouping depends only on the length.
pub fn tree_sum(mut xs: Vec<BigComplex>, prec: usize) -> BigComplex {
    if xs.is_empty() {
        return BigComplex::zero(prec);
    }
    while xs.len() > 1 {
        let mut next = Vec::with_capacity(xs.len().div_ceil(2));
        let mut it = xs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        xs = next;
    }
    xs.pop().unwrap()
}

impl ToPrimitive for BigReal {
    fn to_i64(&self) -> Option<i64> {
        self.round_to_bigint().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.round_to_bigint().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(BigReal::to_f64(self))
    }
}
