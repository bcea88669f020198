//! The Rankin-Selberg object attached to a pair of eigenforms: Dirichlet
//! coefficients, local Euler factors, the archimedean factor, the critical
//! set and the twist ranges covered by the congruence theorems.

use crate::exactnum::{
    gamma_complex, prime_divisors, Rat, AlgNum, BigComplex, BigReal, ExactError, QuadField,
};
use crate::forms::{DirichletChar, NewformData};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankinError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{label} has {have} coefficients but {need} are required")]
    InsufficientCoefficients { label: String, have: usize, need: usize },
    #[error("pole of the archimedean factor at {0}")]
    Pole(String),
    #[error("unsupported local shape at p = {p}: {reason}")]
    Unsupported { p: u64, reason: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Dirichlet series of `L(s, h x h')` with the imprimitive Dirichlet-L correction.
#[derive(Clone, Debug)]
pub struct RankinSeries {
    /// Form of the smaller weight `k`.
    pub h: NewformData,
    /// Form of the larger weight `k'`.
    pub h2: NewformData,
    /// `b[n]` for `1 <= n <= n_max`; `b[0]` is unused.
    pub b: Vec<AlgNum>,
    /// `lcm(N, N')`.
    pub m_level: u64,
    /// `chi chi'` modulo `M`.
    pub char_prod: DirichletChar,
    /// `(k, k')` with `k < k'`.
    pub gamma: (u32, u32),
    /// Conductor used for the functional-equation scaling.
    pub conductor: u64,
    pub field: QuadField,
}

impl RankinSeries {
    pub fn n_max(&self) -> usize {
        self.b.len().saturating_sub(1)
    }

    /// Weight `w = k + k' - 1` of the functional equation `s <-> w - s`.
    pub fn fe_weight(&self) -> i64 {
        (self.gamma.0 + self.gamma.1) as i64 - 1
    }

    /// Series of the conjugate pair `h^rho x h'^rho`.
    pub fn conjugate(&self) -> RankinSeries {
        let mut out = self.clone();
        out.h = crate::forms::conjugate_form(&self.h);
        out.h2 = crate::forms::conjugate_form(&self.h2);
        out.b = self.b.iter().map(AlgNum::complex_conj).collect();
        out.char_prod = self.char_prod.inverse();
        out
    }

    pub fn with_conductor(mut self, q: u64) -> Self {
        self.conductor = q;
        self
    }

    pub fn labels(&self) -> (String, String) {
        (self.h.label.clone(), self.h2.label.clone())
    }
}

/// Orders a pair by weight; equal weights are rejected.
pub fn order_by_weight<'a>(
    h: &'a NewformData,
    h2: &'a NewformData,
) -> Result<(&'a NewformData, &'a NewformData), RankinError> {
    match h.weight.cmp(&h2.weight) {
        std::cmp::Ordering::Less => Ok((h, h2)),
        std::cmp::Ordering::Greater => Ok((h2, h)),
        std::cmp::Ordering::Equal => Err(RankinError::InvalidInput(format!(
            "weights must differ, both are {}",
            h.weight
        ))),
    }
}

/// Default conductor guess `(N N' / gcd(N, N'))^2`.
pub fn conductor_guess(n: u64, n2: u64) -> u64 {
    let l = n.lcm(&n2);
    l * l
}

/// Builds `b_n` for `n <= n_max` from the coefficient products and the
/// Dirichlet-L factor `L^{(M)}(2s + 2 - k - k', chi chi')`.
pub fn rs_coefficients(h: &NewformData, h2: &NewformData, n_max: usize) -> Result<RankinSeries, RankinError> {
    let (lo, hi) = order_by_weight(h, h2)?;
    for f in [lo, hi] {
        if f.n_max() < n_max {
            return Err(RankinError::InsufficientCoefficients { label: f.label.clone(), have: f.n_max(), need: n_max });
        }
    }
    let field = lo.field.join(&hi.field)?;
    let m_level = lo.level.lcm(&hi.level);
    let char_prod = lo.chi.product(&hi.chi);
    let shift = lo.weight + hi.weight - 2;
    let mut raw = vec![AlgNum::zero(); n_max + 1];
    for n in 1..=n_max {
        raw[n] = lo.a(n) * hi.a(n);
    }
    let mut b = vec![AlgNum::zero(); n_max + 1];
    let mut m = 1usize;
    while m * m <= n_max {
        if (m as u64).gcd(&m_level) == 1 {
            let c = char_prod.eval(m as i64).scale(&Rat::from_integer(BigInt::from(m).pow(shift)));
            if !c.is_zero() {
                let sq = m * m;
                for n in 1..=n_max / sq {
                    if !raw[n].is_zero() {
                        b[sq * n] = &b[sq * n] + &(&c * &raw[n]);
                    }
                }
            }
        }
        m += 1;
    }
    Ok(RankinSeries {
        h: lo.truncated(n_max),
        h2: hi.truncated(n_max),
        b,
        m_level,
        char_prod,
        gamma: (lo.weight, hi.weight),
        conductor: conductor_guess(lo.level, hi.level),
        field,
    })
}

/// Inverse local factor as a polynomial in `t = p^{-s}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactorGlobal {
    pub p: u64,
    /// Coefficients of `1, t, t^2, ...`.
    pub poly: Vec<AlgNum>,
}

impl LocalFactorGlobal {
    /// Power-series coefficients of `1 / poly(t)` up to `t^r_max`.
    pub fn inverse_series(&self, r_max: usize) -> Vec<AlgNum> {
        let mut out = vec![AlgNum::zero(); r_max + 1];
        out[0] = AlgNum::one();
        for r in 1..=r_max {
            let mut s = AlgNum::zero();
            for j in 1..self.poly.len().min(r + 1) {
                s = &s - &(&self.poly[j] * &out[r - j]);
            }
            out[r] = s;
        }
        out
    }

    /// Value of the local factor `1 / poly(p^{-s})` at an integer `s`, exactly.
    pub fn value_at(&self, s: i64) -> Result<AlgNum, RankinError> {
        let t = AlgNum::rational(pow_rat(self.p, -s));
        let mut acc = AlgNum::zero();
        for c in self.poly.iter().rev() {
            acc = &(&acc * &t) + c;
        }
        Ok(acc.inv()?)
    }
}

/// `p^e` as an exact rational for any integer `e`.
pub fn pow_rat(p: u64, e: i64) -> Rat {
    let n = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(n)
    } else {
        Rat::new(BigInt::from(1), n)
    }
}

fn coeff_ap(f: &NewformData, p: u64) -> Result<AlgNum, RankinError> {
    if (p as usize) > f.n_max() {
        return Err(RankinError::InsufficientCoefficients { label: f.label.clone(), have: f.n_max(), need: p as usize });
    }
    Ok(f.a(p as usize).clone())
}

/// `chi(p) p^{k-1}`.
pub fn hecke_det(f: &NewformData, p: u64) -> AlgNum {
    f.chi.eval(p as i64).scale(&pow_rat(p, f.weight as i64 - 1))
}

/// Inverse Euler factor of `L(s, h x h')` at `p`.
///
/// For `p` prime to both levels this is `prod_{i,j} (1 - alpha_i beta_j t)`
/// written through `a_p` and `chi(p) p^{k-1}`; for `p` exactly dividing one
/// level only it is `(1 - a_p beta_1 t)(1 - a_p beta_2 t)` with the other
/// form's Satake roots `beta_j`.
pub fn euler_factor(h: &NewformData, h2: &NewformData, p: u64) -> Result<LocalFactorGlobal, RankinError> {
    let (n1, n2) = (h.level, h2.level);
    let in1 = n1 % p == 0;
    let in2 = n2 % p == 0;
    let poly = match (in1, in2) {
        (false, false) => {
            let (a, b) = (coeff_ap(h, p)?, coeff_ap(h2, p)?);
            let (da, db) = (hecke_det(h, p), hecke_det(h2, p));
            let ab = &a * &b;
            let dd = &da * &db;
            let two = AlgNum::from_int(2);
            let c2 = &(&(&(&a * &a) * &db) + &(&(&b * &b) * &da)) - &(&two * &dd);
            vec![AlgNum::one(), -ab.clone(), c2, -(&ab * &dd), &dd * &dd]
        }
        (true, true) => {
            return Err(RankinError::Unsupported {
                p,
                reason: "p divides both levels; the levels must be square-free and relatively prime".into(),
            })
        }
        (r1, _) => {
            let (ram, unr) = if r1 { (h, h2) } else { (h2, h) };
            if ram.level % (p * p) == 0 {
                return Err(RankinError::Unsupported {
                    p,
                    reason: format!("p^2 divides the level {}; the levels must be square-free and relatively prime", ram.level),
                });
            }
            return Ok(mixed_local_poly(p, &coeff_ap(ram, p)?, &coeff_ap(unr, p)?, &hecke_det(unr, p)));
        }
    };
    Ok(LocalFactorGlobal { p, poly })
}

/// Inverse Euler factor `1 - a b t + a^2 d t^2` at a prime dividing exactly one level,
/// with `a` the Steinberg-side eigenvalue and `b`, `d` the trace and determinant of the
/// unramified side's Hecke polynomial.
pub fn mixed_local_poly(p: u64, a_ram: &AlgNum, b_unr: &AlgNum, det_unr: &AlgNum) -> LocalFactorGlobal {
    LocalFactorGlobal { p, poly: vec![AlgNum::one(), -(a_ram * b_unr), &(a_ram * a_ram) * det_unr] }
}

/// Dirichlet coefficients up to `n_max` rebuilt from the Euler factors alone.
pub fn euler_product_coefficients(h: &NewformData, h2: &NewformData, n_max: usize) -> Result<Vec<AlgNum>, RankinError> {
    let mut out = vec![AlgNum::zero(); n_max + 1];
    if n_max == 0 {
        return Ok(out);
    }
    out[1] = AlgNum::one();
    for p in crate::exactnum::primes_up_to(n_max as u64) {
        let mut r_max = 0usize;
        let mut pp = p as usize;
        while pp <= n_max {
            r_max += 1;
            pp = pp.saturating_mul(p as usize);
        }
        let local = euler_factor(h, h2, p)?.inverse_series(r_max);
        let mut next = out.clone();
        for n in 1..=n_max {
            if out[n].is_zero() || n % (p as usize) == 0 {
                continue;
            }
            let mut q = p as usize;
            for c in local.iter().skip(1) {
                if n * q > n_max {
                    break;
                }
                next[n * q] = &out[n] * c;
                q *= p as usize;
            }
        }
        out = next;
    }
    Ok(out)
}

fn is_pole(z: &BigComplex) -> bool {
    if !z.im.is_zero() {
        return false;
    }
    let r = z.re.round_to_bigint();
    r <= BigInt::from(0) && (&z.re - &BigReal::from_bigint(&r, z.prec())).is_zero()
}

/// `L_inf(s) = (2 pi)^{-2s} Gamma(s) Gamma(s + 1 - k)`.
pub fn archimedean_factor(s: &BigComplex, k: u32) -> Result<BigComplex, RankinError> {
    let p = s.prec();
    let shifted = s - &BigComplex::from_real(BigReal::from_i64(k as i64 - 1, p));
    if is_pole(s) || is_pole(&shifted) {
        return Err(RankinError::Pole(format!("s = {:?}", s.to_f64_pair())));
    }
    let g1 = gamma_complex(s).ok_or_else(|| RankinError::Pole("Gamma(s)".into()))?;
    let g2 = gamma_complex(&shifted).ok_or_else(|| RankinError::Pole("Gamma(s + 1 - k)".into()))?;
    let two_pi = BigReal::pi(p) * BigReal::from_i64(2, p);
    let scale = (&s.scale(&(-(two_pi.ln() * BigReal::from_i64(2, p))))).exp();
    Ok(&(&g1 * &g2) * &scale)
}

/// `L_inf(s)` at an integer `s >= k`, using exact factorials.
pub fn archimedean_factor_int(s: i64, k: u32, prec: usize) -> Result<BigReal, RankinError> {
    if s < k as i64 {
        return Err(RankinError::Pole(format!("integer s = {s} below k = {k}")));
    }
    let fact = |n: i64| (1..n).fold(BigInt::from(1), |a, j| a * BigInt::from(j));
    let g = fact(s) * fact(s + 1 - k as i64);
    let two_pi = BigReal::pi(prec) * BigReal::from_i64(2, prec);
    Ok(BigReal::from_bigint(&g, prec) / two_pi.powi(2 * s))
}

/// Rational part `1 / (m (m + 1 - k))` of `L_inf(m) / L_inf(m + 1)`; the remaining factor is `(2 pi)^2`.
pub fn gamma_ratio(m: i64, k: u32) -> Result<Rat, RankinError> {
    if m < k as i64 {
        return Err(RankinError::Pole(format!("m = {m} needs m >= k = {k} for finite Gamma factors")));
    }
    let d = m * (m + 1 - k as i64);
    Ok(Rat::new(BigInt::from(1), BigInt::from(d)))
}

/// Critical integers `k <= m <= k' - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalSet {
    pub lo: i64,
    pub hi: i64,
    pub note: Option<String>,
}

impl CriticalSet {
    pub fn points(&self) -> Vec<i64> {
        (self.lo..=self.hi).collect()
    }
    pub fn contains(&self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn critical_set(k: u32, k2: u32) -> CriticalSet {
    let (lo, hi) = (k as i64, k2 as i64 - 1);
    let note = if k2 <= k {
        Some(format!("no critical points: k' = {k2} must exceed k = {k}"))
    } else if k2 - k < 2 {
        Some("single critical point: successive ratios need k' - k >= 2".into())
    } else {
        None
    };
    CriticalSet { lo, hi, note }
}

/// Classical arguments `(k' - m - 3, k' - m - 2)` of the automorphic points `s = -2, -1` for twist `m`.
pub fn translate_argument(m: i64, _k: u32, k2: u32) -> (i64, i64) {
    let shift = k2 as i64 - m - 1;
    (shift - 2, shift - 1)
}

/// Twist ranges and the ratio pairs they cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremRanges {
    /// Twists on the right of the unitary axis.
    pub twists: Vec<i64>,
    pub pairs: Vec<(i64, i64)>,
    /// Twists on the left of the unitary axis; congruences there need the unit hypothesis.
    pub left_twists: Vec<i64>,
    pub left_pairs: Vec<(i64, i64)>,
    pub left_caveat: String,
}

pub const LEFT_OF_AXIS_CAVEAT: &str =
    "left of the unitary axis: congruence needs the normalized ratios of the reversed operator to be l-adic units";

/// Right-of-axis twists `-1 <= m <= (k'-k)/2 - 2` and left-of-axis twists `(k'-k)/2 - 1 <= m <= k'-k-3`.
pub fn theorem_ranges(k: u32, k2: u32) -> Result<TheoremRanges, RankinError> {
    if k2 < k + 2 {
        return Err(RankinError::InvalidInput(format!("need k' - k >= 2, got k = {k}, k' = {k2}")));
    }
    let half = (k2 - k) as i64 / 2;
    let twists: Vec<i64> = (-1..=half - 2).collect();
    let left_twists: Vec<i64> = ((half - 1).max(-1)..=(k2 - k) as i64 - 3).collect();
    let pairs = twists.iter().map(|&m| translate_argument(m, k, k2)).collect();
    let left_pairs = left_twists.iter().map(|&m| translate_argument(m, k, k2)).collect();
    Ok(TheoremRanges { twists, pairs, left_twists, left_pairs, left_caveat: LEFT_OF_AXIS_CAVEAT.into() })
}

/// Orientation where the congruent forms carry the lower weight: twists
/// `(k - k')/2 + 1 < m <= k - k' + 1` covering `(k' + m - 3, k' + m - 2)`,
/// with `k` the weight of the fixed form and `k'` that of the congruent pair.
pub fn lower_weight_ranges(k_fixed: u32, k_vary: u32) -> Result<Vec<(i64, (i64, i64))>, RankinError> {
    if k_fixed < k_vary + 2 {
        return Err(RankinError::InvalidInput(format!("need k - k' >= 2, got k = {k_fixed}, k' = {k_vary}")));
    }
    let d = (k_fixed - k_vary) as i64;
    let lo = (d + 2).div_euclid(2) + 1;
    let kv = k_vary as i64;
    Ok((lo..=d + 1).map(|m| (m, (kv + m - 3, kv + m - 2))).collect())
}

/// Primes dividing `M = lcm(N, N')`.
pub fn bad_primes(rs: &RankinSeries) -> Vec<u64> {
    prime_divisors(rs.m_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_family_qexp;

    #[test]
    fn ranges_for_weights_13_26() {
        let t = theorem_ranges(13, 26).unwrap();
        assert_eq!(t.twists, vec![-1, 0, 1, 2, 3, 4]);
        assert_eq!(t.pairs[0], (24, 25));
        assert_eq!(*t.pairs.last().unwrap(), (19, 20));
        let c = critical_set(13, 26);
        assert_eq!(c.len(), 13);
        for (a, b) in t.pairs.iter().chain(&t.left_pairs) {
            assert!(c.contains(*a) && c.contains(*b));
        }
        assert_eq!(theorem_ranges(10, 12).unwrap().twists, vec![-1]);
        assert_eq!(theorem_ranges(10, 12).unwrap().pairs, vec![(10, 11)]);
        assert_eq!(theorem_ranges(10, 13).unwrap().twists, vec![-1]);
        assert_eq!(critical_set(4, 8).points(), vec![4, 5, 6, 7]);
        assert!(critical_set(4, 5).note.is_some());
        assert_eq!(critical_set(4, 5).points(), vec![4]);
    }

    #[test]
    fn lower_weight_orientation() {
        let r = lower_weight_ranges(26, 13).unwrap();
        assert_eq!(r.first().unwrap(), &(8, (18, 19)));
        assert_eq!(r.last().unwrap(), &(14, (24, 25)));
    }

    #[test]
    fn argument_shift() {
        assert_eq!(translate_argument(-1, 13, 26), (24, 25));
        assert_eq!(translate_argument(0, 13, 26), (23, 24));
    }

    #[test]
    fn gamma_ratio_exact() {
        assert_eq!(gamma_ratio(25, 13).unwrap(), Rat::new(1.into(), 325.into()));
        assert!(gamma_ratio(12, 13).is_err());
        let p = 256;
        for m in 13..25 {
            let a = archimedean_factor_int(m, 13, p).unwrap();
            let b = archimedean_factor_int(m + 1, 13, p).unwrap();
            let two_pi = BigReal::pi(p) * BigReal::from_i64(2, p);
            let want = BigReal::from_rat(&gamma_ratio(m, 13).unwrap(), p) * two_pi.powi(2);
            assert!(((a / b) - want).log10_abs() < -60.0);
        }
    }

    #[test]
    fn archimedean_poles_and_values() {
        let p = 256;
        let s = BigComplex::from_real(BigReal::from_i64(12, p));
        assert!(matches!(archimedean_factor(&s, 13), Err(RankinError::Pole(_))));
        let s = BigComplex::from_real(BigReal::from_i64(15, p));
        let v = archimedean_factor(&s, 13).unwrap();
        let w = archimedean_factor_int(15, 13, p).unwrap();
        assert!((&v.re - &w).log10_abs() - w.log10_abs() < -60.0);
    }

    #[test]
    fn euler_product_level_one() {
        let d12 = delta_family_qexp(12, 200).unwrap();
        let d16 = delta_family_qexp(16, 200).unwrap();
        let rs = rs_coefficients(&d12, &d16, 200).unwrap();
        assert!(rs.b[1].is_one());
        let f = euler_factor(&d12, &d16, 2).unwrap();
        assert_eq!(f.poly[1], -(d12.a(2) * d16.a(2)));
        let t4 = AlgNum::rational(pow_rat(2, 2 * 11 + 2 * 15));
        assert_eq!(f.poly[4], t4);
        assert_eq!(euler_product_coefficients(&d12, &d16, 200).unwrap(), rs.b);
    }
}
