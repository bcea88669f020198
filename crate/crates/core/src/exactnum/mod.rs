//! Exact arithmetic: rationals, quadratic number fields, prime ideals above
//! rational primes, valuations and residue-field reduction.
//!
//! The arbitrary-precision real/complex carrier used by the numeric modules
//! lives in [`real`].

mod ideal;
mod quad;
pub mod real;
mod special;

pub use ideal::{factor_rational_prime, residue_of_int, residue_reduce, valuation, PrimeIdeal, PrimeKind, Residue};
pub use quad::{quad_normalize, AlgNum, QuadField};
pub use real::{tree_sum, BigComplex, BigReal, Precision};
pub use special::{bessel_k_upto, gamma_complex, ln_gamma_complex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number with arbitrary-size numerator and positive denominator.
pub type Rat = BigRational;

/// Sentinel returned by [`valuation`] for the zero element.
pub const VAL_INFINITY: i64 = i64::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element is not integral at the prime (valuation {0})")]
    NotIntegral(i64),
    #[error("field mismatch: Q(sqrt({0})) vs Q(sqrt({1}))")]
    FieldMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
}

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `l`-adic valuation of a nonzero integer; `VAL_INFINITY` for zero.
pub fn vl_int(x: &BigInt, l: u64) -> i64 {
    if x.is_zero() {
        return VAL_INFINITY;
    }
    let lb = BigInt::from(l);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&lb);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// `l`-adic valuation of a rational; `VAL_INFINITY` for zero.
pub fn vl_rat(x: &Rat, l: u64) -> i64 {
    if x.is_zero() {
        return VAL_INFINITY;
    }
    vl_int(x.numer(), l) - vl_int(x.denom(), l)
}

/// Reduces a rational with denominator prime to `l` into `Z/lZ`.
pub fn rat_mod(x: &Rat, l: u64) -> Option<u64> {
    let lb = BigInt::from(l);
    let d = x.denom().mod_floor(&lb);
    if d.is_zero() {
        return None;
    }
    let n = x.numer().mod_floor(&lb).to_u64()?;
    let dinv = inv_mod(d.to_u64()?, l)?;
    Some(mul_mod(n, dinv, l))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m` when it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime factorization of `n` as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Kronecker symbol `(a / n)` for `n >= 0`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut res = 1i32;
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if (r == 3 || r == 5) && twos % 2 == 1 {
            res = -res;
        }
    }
    // Jacobi symbol (a / n) for odd n.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// Least common multiple of the denominators of a list of rationals.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut d = BigInt::one();
    for x in xs {
        d = d.lcm(x.denom());
    }
    d
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    b.push(Rat::one());
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut s = Rat::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            s += Rat::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / Rat::from_integer(BigInt::from(m + 1)));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_table() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 1), 1);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-104, 13), 0);
        assert_eq!(kronecker(-104, 5), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in -50i64..50 {
                let e = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let want = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn valuations_of_integers() {
        assert_eq!(vl_int(&BigInt::from(8424), 2), 3);
        assert_eq!(vl_rat(&rat(1, 13), 13), -1);
        assert_eq!(vl_int(&BigInt::from(0), 5), VAL_INFINITY);
        assert_eq!(rat_mod(&rat(14, 1), 13), Some(1));
        assert_eq!(rat_mod(&rat(1, 2), 5), Some(3));
        assert_eq!(rat_mod(&rat(1, 5), 5), None);
    }

    #[test]
    fn primality_and_factoring() {
        let ps = primes_up_to(1000);
        for n in 0..1000u64 {
            assert_eq!(is_prime(n), ps.contains(&n));
        }
        assert_eq!(factorize(8424), vec![(2, 3), (3, 4), (13, 1)]);
        assert_eq!(prime_divisors(210), vec![2, 3, 5, 7]);
    }
}
