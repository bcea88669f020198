//! Dirichlet characters, q-expansion data for newforms and Eisenstein series,
//! the level-one generators `Delta * E_{k-12}`, and the conjugate form.

use crate::exactnum::{
    bernoulli_numbers, factorize, kronecker, primes_up_to, quad_normalize, rat_int, AlgNum, BigReal, QuadField, Rat,
};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("missing Hecke eigenvalue at prime {0}")]
    MissingPrime(u64),
    #[error("coefficient field has degree > 2: {0}")]
    FieldTooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Dirichlet character stored by its full table of values on residues coprime to the modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletChar {
    pub modulus: u64,
    pub values: BTreeMap<u64, AlgNum>,
    pub parity: Parity,
}

impl DirichletChar {
    /// Builds a character from values on the units mod `modulus`; checks multiplicativity.
    pub fn from_table(modulus: u64, values: BTreeMap<u64, AlgNum>) -> Result<Self, FormsError> {
        if modulus == 0 {
            return Err(FormsError::InvalidInput("modulus must be positive".into()));
        }
        for r in 0..modulus {
            let unit = r.gcd(&modulus) == 1;
            if unit != values.contains_key(&r) && !(modulus == 1 && r == 0) {
                return Err(FormsError::InvalidInput(format!("value table mismatch at residue {r}")));
            }
        }
        if modulus == 1 && !values.contains_key(&0) {
            return Err(FormsError::InvalidInput("trivial character needs value at 0".into()));
        }
        let chi = DirichletChar { modulus, values, parity: Parity::Even };
        for (a, va) in &chi.values {
            for (b, vb) in &chi.values {
                if chi.eval((a * b) as i64) != va * vb {
                    return Err(FormsError::InvalidInput(format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        let m1 = chi.eval(-1);
        let parity = if m1.is_one() {
            Parity::Even
        } else if m1 == AlgNum::from_int(-1) {
            Parity::Odd
        } else {
            return Err(FormsError::InvalidInput("chi(-1) must be +1 or -1".into()));
        };
        Ok(DirichletChar { parity, ..chi })
    }

    pub fn trivial() -> Self {
        let mut values = BTreeMap::new();
        values.insert(0, AlgNum::one());
        DirichletChar { modulus: 1, values, parity: Parity::Even }
    }

    /// Trivial character modulo `n` (principal character).
    pub fn principal(n: u64) -> Self {
        if n == 1 {
            return Self::trivial();
        }
        let values = (0..n).filter(|r| r.gcd(&n) == 1).map(|r| (r, AlgNum::one())).collect();
        DirichletChar { modulus: n, values, parity: Parity::Even }
    }

    /// `chi(n)`, zero when `gcd(n, modulus) > 1`.
    pub fn eval(&self, n: i64) -> AlgNum {
        let r = n.rem_euclid(self.modulus as i64) as u64;
        self.values.get(&r).cloned().unwrap_or_else(AlgNum::zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|v| v.is_one())
    }

    /// Pointwise inverse (equal to the complex conjugate for roots of unity).
    pub fn inverse(&self) -> Self {
        let values = self.values.iter().map(|(r, v)| (*r, v.inv().expect("unit value"))).collect();
        DirichletChar { modulus: self.modulus, values, parity: self.parity }
    }

    /// Product character modulo `lcm` of the two moduli.
    pub fn product(&self, other: &DirichletChar) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let values = (0..m)
            .filter(|r| r.gcd(&m) == 1 || m == 1)
            .map(|r| (r, &self.eval(r as i64) * &other.eval(r as i64)))
            .collect();
        let parity = if self.parity == other.parity { Parity::Even } else { Parity::Odd };
        DirichletChar { modulus: m, values, parity }
    }

    /// Field generated by the character values.
    pub fn value_field(&self) -> QuadField {
        self.values
            .values()
            .fold(QuadField::Rational, |f, v| if v.is_rational() { f } else { v.field })
    }
}

/// Whether `d` is a fundamental discriminant (1 counts, giving the trivial character).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => quad_normalize(d).map(|(_, f)| f == 1).unwrap_or(false),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && quad_normalize(m).map(|(_, f)| f == 1).unwrap_or(false)
        }
        _ => false,
    }
}

/// The quadratic character `a -> (D / a)` of conductor `|D|`.
pub fn char_from_kronecker(d: i64) -> Result<DirichletChar, FormsError> {
    if !is_fundamental_discriminant(d) {
        return Err(FormsError::InvalidInput(format!("{d} is not a fundamental discriminant")));
    }
    if d == 1 {
        return Ok(DirichletChar::trivial());
    }
    let m = d.unsigned_abs();
    let values = (0..m)
        .filter(|r| r.gcd(&m) == 1)
        .map(|r| (r, AlgNum::from_int(kronecker(d, r) as i64)))
        .collect();
    let parity = if d < 0 { Parity::Odd } else { Parity::Even };
    Ok(DirichletChar { modulus: m, values, parity })
}

/// q-expansion of a normalized form: `coeffs[n] = a(n)` for `1 <= n <= n_max` (`coeffs[0]` unused).
#[derive(Clone, Debug, PartialEq)]
pub struct NewformData {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub chi: DirichletChar,
    pub field: QuadField,
    pub coeffs: Vec<AlgNum>,
    pub is_eigenform: bool,
}

impl NewformData {
    /// Builds a form from `a(1..=n_max)`, determining the coefficient field.
    pub fn new(
        label: impl Into<String>,
        level: u64,
        weight: u32,
        chi: DirichletChar,
        an: Vec<AlgNum>,
        is_eigenform: bool,
    ) -> Result<Self, FormsError> {
        let mut field = chi.value_field();
        for a in &an {
            if !a.is_rational() {
                field = field
                    .join(&a.field)
                    .map_err(|e| FormsError::FieldTooLarge(e.to_string()))?;
            }
        }
        let mut coeffs = Vec::with_capacity(an.len() + 1);
        coeffs.push(AlgNum::zero());
        coeffs.extend(an);
        Ok(NewformData { label: label.into(), level, weight, chi, field, coeffs, is_eigenform })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `a(n)`; panics when `n` exceeds the stored range.
    pub fn a(&self, n: usize) -> &AlgNum {
        assert!(n >= 1 && n <= self.n_max(), "coefficient a({n}) not available (n_max = {})", self.n_max());
        &self.coeffs[n]
    }

    /// Truncated copy with `a(1..=n)`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(n + 1);
        out
    }

    /// Checks `a(m n) = a(m) a(n)` for coprime `m, n` with `m n <= n_max`; returns the first failure.
    pub fn multiplicativity_failure(&self) -> Option<(usize, usize)> {
        let n_max = self.n_max();
        for n in 2..=n_max {
            let fac = factorize(n as u64);
            if fac.len() < 2 {
                continue;
            }
            let (p, e) = fac[0];
            let m1 = p.pow(e) as usize;
            let m2 = n / m1;
            if self.coeffs[n] != &self.coeffs[m1] * &self.coeffs[m2] {
                return Some((m1, m2));
            }
        }
        None
    }

    /// Checks the prime-power recursion `a(p^{r+1}) = a(p)a(p^r) - chi(p)p^{k-1}a(p^{r-1})`.
    pub fn hecke_recursion_failure(&self) -> Option<usize> {
        let n_max = self.n_max() as u64;
        for p in primes_up_to(n_max) {
            let c = self.chi.eval(p as i64).scale(&Rat::from_integer(BigInt::from(p).pow(self.weight - 1)));
            let mut prev = AlgNum::one();
            let mut cur = self.coeffs[p as usize].clone();
            let mut q = p;
            while q * p <= n_max {
                let next = &(&self.coeffs[p as usize] * &cur) - &(&c * &prev);
                if next != self.coeffs[(q * p) as usize] {
                    return Some((q * p) as usize);
                }
                prev = cur;
                cur = next;
                q *= p;
            }
        }
        None
    }

    /// Numeric Ramanujan-Petersson check `|iota a(p)| <= 2 p^{(k-1)/2}` in every complex embedding.
    pub fn deligne_failure(&self, digits: u32) -> Option<u64> {
        let prec = crate::exactnum::real::bits_for_digits(digits);
        for p in primes_up_to(self.n_max() as u64) {
            if self.level % p == 0 {
                continue;
            }
            let a = &self.coeffs[p as usize];
            let bound = BigReal::from_u64(p, prec).powi(self.weight as i64 - 1).sqrt() * BigReal::from_i64(2, prec);
            for x in [a.clone(), a.conj()] {
                if x.embed(prec).abs() > bound {
                    return Some(p);
                }
            }
        }
        None
    }
}

/// Eisenstein series `E_k(chi) = constant + sum_n (sum_{d|n} chi(d) d^{k-1}) q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EisensteinData {
    pub form: NewformData,
    pub constant_term: AlgNum,
}

/// Generalized Bernoulli number `B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f)`.
pub fn generalized_bernoulli(k: u32, chi: &DirichletChar) -> AlgNum {
    let f = chi.modulus;
    let b = bernoulli_numbers(k as usize);
    let mut total = AlgNum::zero();
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c.is_zero() {
            continue;
        }
        // B_k(x) = sum_j C(k, j) B_j x^{k-j}
        let x = Rat::new(BigInt::from(a), BigInt::from(f));
        let mut poly = Rat::zero();
        let mut binom = BigInt::one();
        for j in 0..=k as usize {
            poly += Rat::from_integer(binom.clone()) * &b[j] * x.pow((k as usize - j) as i32);
            binom = binom * BigInt::from(k as usize - j) / BigInt::from(j + 1);
        }
        total = &total + &c.scale(&poly);
    }
    total.scale(&Rat::from_integer(BigInt::from(f).pow(k - 1)))
}

/// `sum_{d | n} chi(d) d^{k-1}` for all `n <= n_max`.
fn divisor_sums(k: u32, chi: &DirichletChar, n_max: usize) -> Vec<AlgNum> {
    let mut out = vec![AlgNum::zero(); n_max + 1];
    for d in 1..=n_max {
        let c = chi.eval(d as i64);
        if c.is_zero() {
            continue;
        }
        let term = c.scale(&Rat::from_integer(BigInt::from(d).pow(k - 1)));
        let mut m = d;
        while m <= n_max {
            out[m] = &out[m] + &term;
            m += d;
        }
    }
    out
}

/// Eisenstein series of weight `k` and character `chi` (at infinity), constant `L(1-k, chi)/2`.
pub fn eisenstein_qexp(k: u32, chi: &DirichletChar, n_max: usize) -> Result<EisensteinData, FormsError> {
    if k < 1 {
        return Err(FormsError::InvalidInput("weight must be positive".into()));
    }
    let odd = chi.parity == Parity::Odd;
    if odd != (k % 2 == 1) {
        return Err(FormsError::InvalidInput(format!("character parity does not match weight {k}")));
    }
    let sums = divisor_sums(k, chi, n_max);
    // L(1-k, chi) = -B_{k,chi}/k
    let constant_term = generalized_bernoulli(k, chi).scale(&Rat::new(BigInt::from(-1), BigInt::from(2 * k)));
    let label = format!("E{k}[{}]", chi.modulus);
    let form = NewformData::new(label, chi.modulus, k, chi.clone(), sums[1..].to_vec(), true)?;
    Ok(EisensteinData { form, constant_term })
}

#[cfg(test)]
fn series_mul_naive(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Packs magnitudes of the selected sign into fixed-width 32-bit-limb slots.
fn kronecker_pack(a: &[BigInt], n: usize, slot: usize, sign: Sign) -> BigUint {
    let mut limbs = vec![0u32; slot * (n + 1)];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.sign() == sign {
            for (j, d) in x.magnitude().to_u32_digits().into_iter().enumerate() {
                limbs[i * slot + j] = d;
            }
        }
    }
    BigUint::new(limbs)
}

fn kronecker_unpack(v: &BigUint, n: usize, slot: usize) -> Vec<BigUint> {
    let d = v.to_u32_digits();
    (0..=n)
        .map(|i| {
            let lo = (i * slot).min(d.len());
            let hi = ((i + 1) * slot).min(d.len());
            BigUint::new(d[lo..hi].to_vec())
        })
        .collect()
}

/// Truncated product of integer power series by Kronecker substitution.
pub fn series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let bits = |v: &[BigInt]| v.iter().take(n + 1).map(|x| x.bits()).max().unwrap_or(0);
    let need = bits(a) + bits(b) + 64 - (n as u64 + 1).leading_zeros() as u64 + 1;
    if bits(a) == 0 || bits(b) == 0 {
        return vec![BigInt::zero(); n + 1];
    }
    let slot = need.div_ceil(32) as usize;
    let parts = |s| kronecker_pack(a, n, slot, s);
    let (ap, am) = (parts(Sign::Plus), parts(Sign::Minus));
    let (bp, bm) = (kronecker_pack(b, n, slot, Sign::Plus), kronecker_pack(b, n, slot, Sign::Minus));
    let pos = [&ap * &bp, &am * &bm];
    let neg = [&ap * &bm, &am * &bp];
    let mut out = vec![BigInt::zero(); n + 1];
    for prod in &pos {
        for (o, c) in out.iter_mut().zip(kronecker_unpack(prod, n, slot)) {
            *o += BigInt::from(c);
        }
    }
    for prod in &neg {
        for (o, c) in out.iter_mut().zip(kronecker_unpack(prod, n, slot)) {
            *o -= BigInt::from(c);
        }
    }
    out
}

/// `prod_{n>=1} (1 - q^n)^24` to order `n` via Jacobi's cube identity.
fn eta24(n: usize) -> Vec<BigInt> {
    let mut cube = vec![BigInt::zero(); n + 1];
    let mut k = 0usize;
    while k * (k + 1) / 2 <= n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        cube[k * (k + 1) / 2] = BigInt::from(sign * (2 * k as i64 + 1));
        k += 1;
    }
    let p6 = series_mul(&cube, &cube, n);
    let p12 = series_mul(&p6, &p6, n);
    series_mul(&p12, &p12, n)
}

/// Level-one Eisenstein series normalized with constant term 1 (or 1 for weight 0).
fn level_one_eisenstein(j: u32, n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n + 1];
    out[0] = Rat::one();
    if j == 0 {
        return out;
    }
    let b = bernoulli_numbers(j as usize);
    let c = Rat::from_integer(BigInt::from(-2 * j as i64)) / &b[j as usize];
    let sums = divisor_sums(j, &DirichletChar::trivial(), n);
    for m in 1..=n {
        out[m] = &c * &sums[m].a;
    }
    out
}

/// The normalized cusp form `Delta * E_{k-12}` spanning the one-dimensional space of weight `k` at level 1.
pub fn delta_family_qexp(k: u32, n_max: usize) -> Result<NewformData, FormsError> {
    if ![12, 16, 18, 20, 22, 26].contains(&k) {
        return Err(FormsError::InvalidInput(format!("weight {k} does not give a one-dimensional cusp space")));
    }
    let e = eta24(n_max);
    let eis = level_one_eisenstein(k - 12, n_max);
    // Delta = q * eta24; clear the Eisenstein denominators and multiply exactly
    let den = eis.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = eis.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
    let prod = series_mul(&e, &scaled, n_max);
    let an = (1..=n_max).map(|n| AlgNum::rational(Rat::new(prod[n - 1].clone(), den.clone()))).collect();
    NewformData::new(format!("1.{k}.a.a"), 1, k, DirichletChar::trivial(), an, true)
}

/// The form `h^rho` with conjugated coefficients and inverse character.
pub fn conjugate_form(h: &NewformData) -> NewformData {
    NewformData {
        label: format!("{}^rho", h.label),
        coeffs: h.coeffs.iter().map(AlgNum::complex_conj).collect(),
        chi: h.chi.inverse(),
        ..h.clone()
    }
}

/// Recomputes `a(1..=n_target)` from the prime eigenvalues `a(p)` stored in `h`.
///
/// For `p | N` the recursion has `chi(p) = 0`, so `a(p^r) = a(p)^r`.
pub fn hecke_extend(h: &NewformData, n_target: usize) -> Result<NewformData, FormsError> {
    for p in primes_up_to(n_target as u64) {
        if p as usize > h.n_max() {
            return Err(FormsError::MissingPrime(p));
        }
    }
    let k = h.weight;
    let mut a = vec![AlgNum::zero(); n_target + 1];
    if n_target >= 1 {
        a[1] = AlgNum::one();
    }
    let mut smallest = vec![0u64; n_target + 1];
    for p in primes_up_to(n_target as u64) {
        let mut m = p as usize;
        while m <= n_target {
            if smallest[m] == 0 {
                smallest[m] = p;
            }
            m += p as usize;
        }
    }
    for n in 2..=n_target {
        let p = smallest[n];
        let mut q = 1usize;
        let mut m = n;
        while m % p as usize == 0 {
            m /= p as usize;
            q *= p as usize;
        }
        if m > 1 {
            a[n] = &a[q] * &a[m];
        } else if q == p as usize {
            a[n] = h.coeffs[p as usize].clone();
        } else {
            let c = h.chi.eval(p as i64).scale(&Rat::from_integer(BigInt::from(p).pow(k - 1)));
            a[n] = &(&a[p as usize] * &a[q / p as usize]) - &(&c * &a[q / (p * p) as usize]);
        }
    }
    let mut out = h.clone();
    out.coeffs = a;
    Ok(out)
}

/// Index `[SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    let mut mu = n;
    for (p, _) in factorize(n) {
        mu = mu / p * (p + 1);
    }
    mu
}

/// Integer value of a rational coefficient (panics when not integral).
pub fn to_bigint(x: &AlgNum) -> BigInt {
    assert!(x.is_rational() && x.a.is_integer(), "coefficient {x} is not a rational integer");
    x.a.to_integer()
}

/// The integer `n` as a field element.
pub fn int(n: i64) -> AlgNum {
    AlgNum::rational(rat_int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn chi3() -> DirichletChar {
        char_from_kronecker(-3).unwrap()
    }

    #[test]
    fn kronecker_product_matches_schoolbook() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [0usize, 1, 5, 40] {
            let a: Vec<BigInt> = (0..=n).map(|_| BigInt::from(rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000))).collect();
            let mut b: Vec<BigInt> = (0..=n).map(|_| BigInt::from(rng.gen_range(-50i64..50))).collect();
            b[0] = BigInt::from(1u64) << 200;
            assert_eq!(series_mul(&a, &b, n), series_mul_naive(&a, &b, n));
        }
    }

    #[test]
    fn delta_matches_schoolbook_expansion() {
        let n = 60;
        let e = eta24(n);
        let mut cube = vec![BigInt::zero(); n + 1];
        for m in 0..=n {
            let t = m * (m + 1) / 2;
            if t > n {
                break;
            }
            cube[t] = BigInt::from(if m % 2 == 0 { 1 } else { -1 } * (2 * m as i64 + 1));
        }
        let p6 = series_mul_naive(&cube, &cube, n);
        let p12 = series_mul_naive(&p6, &p6, n);
        assert_eq!(e, series_mul_naive(&p12, &p12, n));
    }

    #[test]
    fn kronecker_characters() {
        let c = chi3();
        assert_eq!(c.eval(2), int(-1));
        assert_eq!(c.eval(1), int(1));
        assert_eq!(c.eval(3), int(0));
        assert_eq!(c.parity, Parity::Odd);
        let c4 = char_from_kronecker(-4).unwrap();
        assert_eq!(c4.eval(3), int(-1));
        assert_eq!(c4.parity, Parity::Odd);
        assert!(char_from_kronecker(1).unwrap().is_trivial());
        assert!(char_from_kronecker(-12).is_err());
        assert!(char_from_kronecker(12).is_ok());
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[12], rat(-691, 2730));
        assert_eq!(b[11], rat(0, 1));
        // B_{1, chi_{-3}} = -1/3
        assert_eq!(generalized_bernoulli(1, &chi3()), AlgNum::rational(rat(-1, 3)));
    }

    #[test]
    fn weight_13_eisenstein_series() {
        let e = eisenstein_qexp(13, &chi3(), 6).unwrap();
        assert_eq!(e.constant_term, AlgNum::rational(rat(55601, 3)));
        let want = [1i64, -4095, 1, 16773121];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(e.form.a(n + 1), &int(*w));
        }
        assert_eq!(e.form.a(6), &(e.form.a(2) * e.form.a(3)));
        assert!(eisenstein_qexp(12, &chi3(), 4).is_err());
        let triv = eisenstein_qexp(12, &DirichletChar::trivial(), 1).unwrap();
        assert_eq!(triv.form.a(1), &int(1));
        assert_eq!(triv.constant_term, AlgNum::rational(rat(691, 65520)));
    }

    #[test]
    fn delta_family() {
        let d = delta_family_qexp(12, 30).unwrap();
        assert_eq!(d.a(1), &int(1));
        assert_eq!(d.a(2), &int(-24));
        assert_eq!(d.a(3), &int(252));
        assert_eq!(d.a(4), &(&(d.a(2) * d.a(2)) - &int(2048)));
        assert_eq!(d.multiplicativity_failure(), None);
        assert_eq!(d.hecke_recursion_failure(), None);
        let h = delta_family_qexp(26, 60).unwrap();
        assert_eq!(h.a(2), &int(-48));
        assert_eq!(h.a(3), &int(-195804));
        assert_eq!(h.multiplicativity_failure(), None);
        assert_eq!(h.hecke_recursion_failure(), None);
        assert_eq!(h.deligne_failure(30), None);
        assert!(delta_family_qexp(14, 5).is_err());
    }

    #[test]
    fn extension_reproduces_coefficients() {
        let d = delta_family_qexp(12, 50).unwrap();
        assert_eq!(hecke_extend(&d, 50).unwrap(), d);
        assert_eq!(hecke_extend(&d.truncated(40), 50), Err(FormsError::MissingPrime(41)));
    }

    #[test]
    fn conjugation() {
        let f = QuadField::new(-26).unwrap();
        let a2 = AlgNum::new(f, rat(0, 1), rat(18, 1));
        let h = NewformData::new("x", 3, 13, DirichletChar::principal(3), vec![int(1), a2.clone()], true).unwrap();
        let c = conjugate_form(&h);
        assert_eq!(c.a(2), &(-a2));
        let d = delta_family_qexp(12, 10).unwrap();
        assert_eq!(conjugate_form(&d).coeffs, d.coeffs);
    }

    #[test]
    fn index_of_gamma0() {
        assert_eq!(gamma0_index(1), 1);
        assert_eq!(gamma0_index(3), 4);
        assert_eq!(gamma0_index(12), 24);
    }
}
