//! Coefficientwise congruences between eigenforms modulo a prime ideal,
//! the Eisenstein-congruence screen, and the excluded prime sets.

use crate::exactnum::{factorize, prime_divisors, primes_up_to, residue_reduce, valuation, ExactError, PrimeIdeal};
use crate::forms::{eisenstein_qexp, gamma0_index, NewformData};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CongruenceError {
    #[error("forms are not comparable: {0}")]
    Incompatible(String),
    #[error("coefficient a({n}) of {label} is not integral at the prime (valuation {valuation})")]
    NotIntegral { label: String, n: usize, valuation: i64 },
    #[error("{label} has {have} coefficients but {need} are required")]
    InsufficientCoefficients { label: String, have: usize, need: usize },
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub forms: (String, String),
    pub prime: PrimeIdeal,
    pub bound_used: usize,
    pub congruent: bool,
    pub first_failure: Option<usize>,
    pub eisenstein_alarm: Option<String>,
}

/// `ceil(k * mu / 12)` with `mu` the index of `Gamma_0(N)` in `SL_2(Z)`.
pub fn sturm_bound(k: u32, level: u64) -> usize {
    let num = k as u64 * gamma0_index(level);
    num.div_ceil(12) as usize
}

fn check_integral(h: &NewformData, n: usize, p: &PrimeIdeal) -> Result<(), CongruenceError> {
    let v = valuation(h.a(n), p);
    if v < 0 {
        return Err(CongruenceError::NotIntegral { label: h.label.clone(), n, valuation: v });
    }
    Ok(())
}

/// Compares `a(n, h1)` and `a(n, h2)` modulo `P` for `n <= max(sturm_bound, n_extra)`.
pub fn check_congruent(
    h1: &NewformData,
    h2: &NewformData,
    p: &PrimeIdeal,
    n_extra: usize,
) -> Result<CongruenceReport, CongruenceError> {
    if h1.weight != h2.weight || h1.level != h2.level {
        return Err(CongruenceError::Incompatible(format!(
            "weights/levels differ: ({}, {}) vs ({}, {})",
            h1.weight, h1.level, h2.weight, h2.level
        )));
    }
    if h1.chi != h2.chi {
        return Err(CongruenceError::Incompatible("characters differ".into()));
    }
    let bound = sturm_bound(h1.weight, h1.level).max(n_extra);
    for h in [h1, h2] {
        if h.n_max() < bound {
            return Err(CongruenceError::InsufficientCoefficients { label: h.label.clone(), have: h.n_max(), need: bound });
        }
    }
    let mut first_failure = None;
    for n in 1..=bound {
        check_integral(h1, n, p)?;
        check_integral(h2, n, p)?;
        let d = h1.a(n) - h2.a(n);
        if valuation(&d, p) < 1 {
            first_failure = Some(n);
            break;
        }
    }
    Ok(CongruenceReport {
        forms: (h1.label.clone(), h2.label.clone()),
        prime: p.clone(),
        bound_used: bound,
        congruent: first_failure.is_none(),
        first_failure,
        eisenstein_alarm: None,
    })
}

/// Screens `h` against the Eisenstein series of the same weight and character.
///
/// The comparison is Sturm's criterion applied to `h - E`: the constant term
/// of `E` must vanish modulo `P` and `a(n, h) = a(n, E)` modulo `P` for
/// `1 <= n <= sturm_bound`. Returns the Eisenstein label when the congruence holds.
pub fn eisenstein_screen(h: &NewformData, p: &PrimeIdeal) -> Option<String> {
    let bound = sturm_bound(h.weight, h.level).min(h.n_max());
    let e = eisenstein_qexp(h.weight, &h.chi, bound).ok()?;
    match residue_reduce(&e.constant_term, p) {
        Ok(r) if r.is_zero() => {}
        _ => return None,
    }
    for n in 1..=bound {
        let d = h.a(n) - e.form.a(n);
        if valuation(&d, p) < 1 || valuation(h.a(n), p) < 0 {
            return None;
        }
    }
    Some(e.form.label)
}

/// The two excluded prime sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedPrimes {
    /// Primes `p <= max(k, k')`.
    pub s_weight: Vec<u64>,
    /// Primes dividing `N N'`.
    pub s_level: Vec<u64>,
}

impl ExcludedPrimes {
    pub fn contains(&self, l: u64) -> bool {
        self.s_weight.contains(&l) || self.s_level.contains(&l)
    }
}

pub fn excluded_primes(k: u32, k2: u32, n: u64, n2: u64) -> ExcludedPrimes {
    ExcludedPrimes {
        s_weight: primes_up_to(k.max(k2) as u64),
        s_level: prime_divisors(n * n2),
    }
}

/// Whether `n` is square-free.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

impl From<ExactError> for CongruenceError {
    fn from(e: ExactError) -> Self {
        CongruenceError::Incompatible(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::AlgNum;
    use crate::forms::delta_family_qexp;

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_bound(13, 3), 5);
        assert_eq!(sturm_bound(26, 1), 3);
        assert_eq!(sturm_bound(12, 1), 1);
        for k in 1..40 {
            for n in 1..30u64 {
                assert!(sturm_bound(k + 1, n) >= sturm_bound(k, n));
                assert!(sturm_bound(k, n * 2) >= sturm_bound(k, n));
            }
        }
    }

    #[test]
    fn ramanujan_congruence() {
        let d = delta_family_qexp(12, 20).unwrap();
        assert_eq!(eisenstein_screen(&d, &PrimeIdeal::rational(691).unwrap()), Some("E12[1]".into()));
        assert_eq!(eisenstein_screen(&d, &PrimeIdeal::rational(5).unwrap()), None);
        assert_eq!(eisenstein_screen(&d, &PrimeIdeal::rational(11).unwrap()), None);
    }

    #[test]
    fn perturbed_delta() {
        let d = delta_family_qexp(12, 20).unwrap();
        let mut e = d.clone();
        e.coeffs[2] = &e.coeffs[2] + &AlgNum::from_int(1);
        let p5 = PrimeIdeal::rational(5).unwrap();
        let r = check_congruent(&d, &e, &p5, 10).unwrap();
        assert!(!r.congruent);
        assert_eq!(r.first_failure, Some(2));
        let r = check_congruent(&d, &d, &p5, 10).unwrap();
        assert!(r.congruent);
        assert_eq!(r.bound_used, 10);
    }

    #[test]
    fn excluded_sets() {
        let e = excluded_primes(13, 26, 3, 1);
        assert_eq!(e.s_weight, vec![2, 3, 5, 7, 11, 13, 17, 19, 23]);
        assert_eq!(e.s_level, vec![3]);
        let e = excluded_primes(2, 2, 1, 1);
        assert_eq!(e.s_weight, vec![2]);
        assert!(e.s_level.is_empty());
        assert_eq!(excluded_primes(4, 8, 6, 35).s_level, vec![2, 3, 5, 7]);
    }
}
