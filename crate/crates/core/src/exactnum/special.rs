//! Special functions at arbitrary precision: the complex Gamma function and
//! the modified Bessel functions `K_n` of integer order.

use super::real::{BigComplex, BigReal};
use super::{bernoulli_numbers, Rat};
use num_bigint::BigInt;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const LN10: f64 = std::f64::consts::LN_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

fn digits_of(bits: usize) -> f64 {
    bits as f64 * LOG10_2
}

/// Exact Bernoulli numbers, extended on demand and shared across threads.
fn bernoulli_cached(n: usize) -> Vec<Rat> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let m = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut g = m.lock().expect("bernoulli cache poisoned");
    if g.len() <= n {
        *g = bernoulli_numbers(n.max(2 * g.len()).max(64));
    }
    g[..=n].to_vec()
}

thread_local! {
    /// Stirling coefficients `B_{2j} / (2j (2j-1))` keyed by binary precision.
    static STIRLING: RefCell<HashMap<usize, Vec<BigReal>>> = RefCell::new(HashMap::new());
}

fn stirling_coeffs(bits: usize, count: usize) -> Vec<BigReal> {
    STIRLING.with(|s| {
        let mut s = s.borrow_mut();
        let have = s.get(&bits).map(|v| v.len()).unwrap_or(0);
        if have < count {
            let b = bernoulli_cached(2 * count);
            let v = (1..=count)
                .map(|j| {
                    let d = BigInt::from((2 * j) as u64 * (2 * j - 1) as u64);
                    BigReal::from_rat(&(&b[2 * j] / Rat::from_integer(d)), bits)
                })
                .collect();
            s.insert(bits, v);
        }
        s[&bits][..count].to_vec()
    })
}

fn complex_sin(z: &BigComplex) -> BigComplex {
    let p = z.prec();
    let ey = z.im.exp();
    let emy = BigReal::one(p) / &ey;
    let two = BigReal::from_i64(2, p);
    let cosh = (&ey + &emy) / &two;
    let sinh = (&ey - &emy) / &two;
    BigComplex::new(z.re.sin() * cosh, z.re.cos() * sinh)
}

/// `ln Gamma(w)` by Stirling's series; requires `|w|` large relative to the precision.
fn stirling(w: &BigComplex) -> BigComplex {
    let p = w.prec();
    let d = digits_of(p);
    let half = BigReal::from_rat(&Rat::new(1.into(), 2.into()), p);
    let ln2pi = (BigReal::pi(p) * BigReal::from_i64(2, p)).ln();
    let lw = w.ln();
    let mut acc = &(&(w - &BigComplex::from_real(half.clone())) * &lw) - w;
    acc.re = &acc.re + &(&ln2pi * &half);
    let winv = w.inv();
    let winv2 = &winv * &winv;
    let max_terms = (std::f64::consts::PI * w.abs().to_f64()).floor().max(1.0) as usize;
    let coeffs = stirling_coeffs(p, max_terms);
    let mut pw = winv;
    for c in coeffs.iter() {
        let term = pw.scale(c);
        let small = term.log10_abs() < -d - 2.0;
        acc = &acc + &term;
        if small {
            break;
        }
        pw = &pw * &winv2;
    }
    acc
}

fn is_nonpositive_integer(z: &BigComplex) -> bool {
    if !z.im.is_zero() {
        return false;
    }
    let r = z.re.round_to_bigint();
    r <= BigInt::from(0) && (&z.re - &BigReal::from_bigint(&r, z.prec())).is_zero()
}

/// `Gamma(z)` for complex `z`; `None` at the poles `z = 0, -1, -2, ...`.
pub fn gamma_complex(z: &BigComplex) -> Option<BigComplex> {
    if is_nonpositive_integer(z) {
        return None;
    }
    let p = z.prec();
    let half = BigReal::from_rat(&Rat::new(1.into(), 2.into()), p);
    if z.re < half {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let one = BigComplex::one(p);
        let g = gamma_complex(&(&one - z))?;
        let pi = BigReal::pi(p);
        let s = complex_sin(&z.scale(&pi));
        return Some((&s * &g).inv().scale(&pi));
    }
    let radius = digits_of(p) * LN10 / (2.0 * std::f64::consts::PI) + 2.0;
    let mut w = z.clone();
    let mut prod = BigComplex::one(p);
    while w.abs().to_f64() < radius {
        prod = &prod * &w;
        w = &w + &BigComplex::one(p);
    }
    Some(&stirling(&w).exp() / &prod)
}

/// Principal-branch-free `ln Gamma(z)` for `Re z > 0`, continuous along vertical lines.
pub fn ln_gamma_complex(z: &BigComplex) -> Option<BigComplex> {
    if is_nonpositive_integer(z) || z.re.is_negative() || z.re.is_zero() {
        return None;
    }
    let p = z.prec();
    let radius = digits_of(p) * LN10 / (2.0 * std::f64::consts::PI) + 2.0;
    let mut w = z.clone();
    let mut shift = BigComplex::zero(p);
    while w.abs().to_f64() < radius {
        shift = &shift + &w.ln();
        w = &w + &BigComplex::one(p);
    }
    Some(&stirling(&w) - &shift)
}

/// Strip half-width and step for the trapezoidal rule on `exp(-u (cosh t - 1))`.
fn trapezoid_plan(u: f64, target_ln: f64) -> (f64, f64) {
    let mut best = (0.1, 0.0);
    for i in 1..=30 {
        let a = i as f64 * (std::f64::consts::FRAC_PI_2 * 0.98) / 30.0;
        let h = 2.0 * std::f64::consts::PI * a / (target_ln + u * (1.0 - a.cos()) + 10.0);
        if h > best.1 {
            best = (a, h);
        }
    }
    best
}

/// `(K_0(u), K_1(u))` via the integral `K_nu(u) = int_0^inf exp(-u cosh t) cosh(nu t) dt`.
fn bessel_k01_integral(u: &BigReal) -> (BigReal, BigReal) {
    let p = u.prec();
    let target_ln = digits_of(p) * LN10;
    let uf = u.to_f64();
    let (_, h) = trapezoid_plan(uf, target_ln);
    // truncate where exp(-u (cosh t - 1)) cosh t falls below the target
    let mut t_max = 0.0f64;
    while uf * (t_max.cosh() - 1.0) - t_max < target_ln + 10.0 {
        t_max += 0.05;
    }
    let n_nodes = (t_max / h).ceil() as usize;
    let hb = BigReal::from_f64(h, p);
    let step = hb.exp();
    let step_inv = BigReal::one(p) / &step;
    let two = BigReal::from_i64(2, p);
    let one = BigReal::one(p);
    let mut e_pos = one.clone();
    let mut e_neg = one.clone();
    let mut s0 = BigReal::from_rat(&Rat::new(1.into(), 2.into()), p);
    let mut s1 = s0.clone();
    for _ in 1..=n_nodes {
        e_pos = &e_pos * &step;
        e_neg = &e_neg * &step_inv;
        let cosh = (&e_pos + &e_neg) / &two;
        let f = (-(u * &(&cosh - &one))).exp();
        s1 = &s1 + &(&f * &cosh);
        s0 = &s0 + &f;
    }
    let scale = &hb * &(-u).exp();
    (s0 * &scale, s1 * scale)
}

/// `(K_0(u), K_1(u))` by the Hankel asymptotic series; valid when `e^{-2u}` is below the target.
fn bessel_k01_asymptotic(u: &BigReal) -> (BigReal, BigReal) {
    let p = u.prec();
    let d = digits_of(p);
    let inv8u = BigReal::one(p) / (u * &BigReal::from_i64(8, p));
    let mut out = Vec::with_capacity(2);
    for nu in [0i64, 1] {
        let mu = 4 * nu * nu;
        let mut term = BigReal::one(p);
        let mut acc = BigReal::one(p);
        let mut k = 1i64;
        loop {
            let f = mu - (2 * k - 1) * (2 * k - 1);
            term = &(&term * &BigReal::from_i64(f, p)) * &inv8u;
            term = &term / &BigReal::from_i64(k, p);
            if term.is_zero() || term.log10_abs() < -d - 2.0 {
                break;
            }
            acc = &acc + &term;
            k += 1;
        }
        out.push(acc);
    }
    let pref = (BigReal::pi(p) / (u * &BigReal::from_i64(2, p))).sqrt() * (-u).exp();
    let k1 = &out[1] * &pref;
    let k0 = &out[0] * &pref;
    (k0, k1)
}

/// `K_0(u), ..., K_nmax(u)` for `u > 0` at the precision of `u`.
pub fn bessel_k_upto(u: &BigReal, nmax: usize) -> Vec<BigReal> {
    assert!(!u.is_negative() && !u.is_zero(), "Bessel K needs u > 0");
    let p = u.prec();
    let target_ln = digits_of(p) * LN10;
    let (k0, k1) = if 2.0 * u.to_f64() > target_ln + 10.0 {
        bessel_k01_asymptotic(u)
    } else {
        bessel_k01_integral(u)
    };
    let mut ks = vec![k0, k1];
    let uinv = BigReal::one(p) / u;
    for n in 1..nmax {
        let next = &ks[n - 1] + &(&(&uinv * &BigReal::from_i64(2 * n as i64, p)) * &ks[n]);
        ks.push(next);
    }
    ks.truncate(nmax + 1);
    ks
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 448;

    fn rel(a: &BigReal, b: &BigReal) -> f64 {
        ((a - b) / b.clone()).log10_abs()
    }

    #[test]
    fn gamma_at_integers_and_half() {
        let g = gamma_complex(&BigComplex::from_real(BigReal::from_i64(13, P))).unwrap();
        let f = BigReal::from_bigint(&BigInt::from(479001600u64), P);
        assert!(rel(&g.re, &f) < -120.0);
        let g = gamma_complex(&BigComplex::from_real(BigReal::from_rat(&Rat::new(1.into(), 2.into()), P))).unwrap();
        assert!(rel(&g.re, &BigReal::pi(P).sqrt()) < -120.0);
        let g = gamma_complex(&BigComplex::from_real(BigReal::from_rat(&Rat::new((-1).into(), 2.into()), P))).unwrap();
        let want = -(BigReal::pi(P).sqrt() * BigReal::from_i64(2, P));
        assert!(rel(&g.re, &want) < -120.0);
        assert!(gamma_complex(&BigComplex::from_real(BigReal::from_i64(-3, P))).is_none());
    }

    #[test]
    fn gamma_recurrence_off_axis() {
        let z = BigComplex::new(BigReal::from_f64(2.25, P), BigReal::from_f64(7.5, P));
        let g = gamma_complex(&z).unwrap();
        let g1 = gamma_complex(&(&z + &BigComplex::one(P))).unwrap();
        let diff = &g1 - &(&g * &z);
        assert!(diff.log10_abs() - g1.log10_abs() < -120.0);
        let lg = ln_gamma_complex(&z).unwrap().exp();
        assert!((&lg - &g).log10_abs() - g.log10_abs() < -120.0);
    }

    #[test]
    fn bessel_methods_agree() {
        // both evaluation routes near the switch-over point
        let p = 320;
        let u = BigReal::from_f64(112.5, p);
        let a = bessel_k01_integral(&u);
        let b = bessel_k01_asymptotic(&u);
        assert!(rel(&a.0, &b.0) < -85.0, "{}", rel(&a.0, &b.0));
        assert!(rel(&a.1, &b.1) < -85.0);
    }

    #[test]
    fn bessel_reference_values() {
        // reference values from an independent arbitrary-precision library
        let u = BigReal::from_i64(1, P);
        let ks = bessel_k_upto(&u, 3);
        let k0 = BigReal::parse("0.4210244382407083333356273792126090361362197482266604723", P);
        assert!(rel(&ks[0], &k0) < -53.0);
        let k1 = BigReal::parse("0.601907230197234574737540001535617339261586889968106456", P);
        assert!(rel(&ks[1], &k1) < -53.0);
    }
}

