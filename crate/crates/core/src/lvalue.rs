//! Numerical evaluation of the completed Rankin-Selberg L-function
//! `Lambda(s) = (2 pi)^{-2s} Gamma(s) Gamma(s + 1 - k) L(s)` at integers.
//!
//! Direct summation is used where the Dirichlet series converges absolutely
//! and the available coefficients certify the tail. Elsewhere a smoothed
//! approximate functional equation is used:
//!
//! `Q^{s/2} Lambda(s) = Q^{s/2} sum b_n n^{-s} G_s(n / (A sqrt Q))
//!     + eps Q^{(w-s)/2} sum conj(b_n) n^{s-w} G_{w-s}(n A / sqrt Q)`
//!
//! with `G_s(x) = (1/2 pi i) int_{(c)} L_inf(s+z) x^{-z} dz / z`. The root
//! number `eps` is solved from two values of `A` and validated by unitarity,
//! a second probe point and a third value of `A`.

use crate::exactnum::{bessel_k_upto, ln_gamma_complex, tree_sum, BigComplex, BigReal, Precision, Rat};
use crate::rankin::{archimedean_factor_int, RankinError, RankinSeries};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::{LN_10, LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Extra decimal digits carried on top of the requested precision.
const WORK_DIGITS: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LValueError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{have} coefficients available but about 10^{need_log10:.1} are needed for {what}")]
    InsufficientCoefficients { have: usize, need_log10: f64, what: String },
    #[error("kernel contour error: {0}")]
    Contour(String),
    #[error("root number fails validation: {0}")]
    Normalization(String),
    #[error(transparent)]
    Rankin(#[from] RankinError),
}

/// How `G_s(x)` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KernelMethod {
    /// Closed form through `K_nu` Bessel functions; needs an integer `s >= k`.
    Bessel,
    /// Trapezoidal rule on the vertical contour `Re z = c`.
    Quadrature,
}

/// Parameters of the smoothing kernel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AfeKernelSpec {
    pub k: u32,
    pub k2: u32,
    /// Abscissa `c` of the contour.
    pub shift: f64,
    /// Trapezoid step `h`.
    pub step: f64,
    /// Half-length `T` of the truncated contour (set per evaluation when zero).
    pub trunc: f64,
    pub precision: Precision,
    pub method: KernelMethod,
}

impl AfeKernelSpec {
    pub fn new(k: u32, k2: u32, precision: Precision, method: KernelMethod) -> Self {
        let shift = 3.0;
        // strip of analyticity of half-width shift - 1/2 around the contour
        let d = shift - 0.5;
        let target = (precision.digits + WORK_DIGITS) as f64 * LN_10 + 10.0;
        AfeKernelSpec { k, k2, shift, step: 2.0 * PI * d / target, trunc: 0.0, precision, method }
    }

    /// Rightmost pole of `Gamma(s+z) Gamma(s+z+1-k) / z` in `z`.
    fn rightmost_pole(&self, s: i64) -> f64 {
        0f64.max(self.k as f64 - 1.0 - s as f64)
    }

    fn check_contour(&self, s: i64) -> Result<(), LValueError> {
        let p = self.rightmost_pole(s);
        if self.shift <= p + 0.5 {
            return Err(LValueError::Contour(format!(
                "contour Re z = {} is not to the right of the pole at {p} for s = {s}",
                self.shift
            )));
        }
        Ok(())
    }
}

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// `ln L_inf(s)` in double precision for integer `s >= k`.
fn ln_gamma_factor(s: i64, k: u32) -> f64 {
    -2.0 * s as f64 * (2.0 * PI).ln() + ln_factorial(s - 1) + ln_factorial(s - k as i64)
}

/// `u^mu K_nu` expansion coefficients: `G_s = C_s sum_j c_j u^{2s-k-j} K_{k+j}(u)` with `u = 4 pi sqrt x`.
fn bessel_coeffs(s: i64, k: u32) -> Vec<BigInt> {
    let m = s - k as i64;
    let mut c = vec![BigInt::one()];
    for j in 0..m {
        let next = c[j as usize].clone() * BigInt::from(2 * (m - j));
        c.push(next);
    }
    c
}

/// Closed-form kernel from `K_0(u), ..., K_{s}(u)`.
fn kernel_from_bessel(s: i64, k: u32, u: &BigReal, ks: &[BigReal], upow: &[BigReal]) -> BigReal {
    let p = u.prec();
    let mu = 2 * s - k as i64;
    let mut acc = BigReal::zero(p);
    for (j, c) in bessel_coeffs(s, k).iter().enumerate() {
        let term = &BigReal::from_bigint(c, p) * &(&upow[(mu - j as i64) as usize] * &ks[k as usize + j]);
        acc = &acc + &term;
    }
    // C_s = 2^{k+1-4s} pi^{-2s}
    let pi = BigReal::pi(p);
    let c = BigReal::from_i64(2, p).powi(k as i64 + 1 - 4 * s) / pi.powi(2 * s);
    &acc * &c
}

fn kernel_bessel(x: &BigReal, s: i64, k: u32) -> BigReal {
    let p = x.prec();
    let u = &(BigReal::pi(p) * BigReal::from_i64(4, p)) * &x.sqrt();
    let ks = bessel_k_upto(&u, s as usize);
    let upow = powers(&u, (2 * s - k as i64) as usize);
    kernel_from_bessel(s, k, &u, &ks, &upow)
}

fn powers(u: &BigReal, n: usize) -> Vec<BigReal> {
    let mut out = vec![BigReal::one(u.prec())];
    for i in 0..n {
        let next = &out[i] * u;
        out.push(next);
    }
    out
}

/// `L_inf(z)` for complex `z` with positive real parts of both Gamma arguments.
fn gamma_factor_complex(z: &BigComplex, k: u32) -> Option<BigComplex> {
    let p = z.prec();
    let shifted = z - &BigComplex::from_real(BigReal::from_i64(k as i64 - 1, p));
    let l1 = ln_gamma_complex(z)?;
    let l2 = ln_gamma_complex(&shifted)?;
    let ln2pi = (BigReal::pi(p) * BigReal::from_i64(2, p)).ln();
    let e = &(&l1 + &l2) - &z.scale(&(ln2pi * BigReal::from_i64(2, p)));
    Some(e.exp())
}

fn kernel_quadrature(x: &BigReal, s: i64, spec: &AfeKernelSpec) -> Result<BigReal, LValueError> {
    spec.check_contour(s)?;
    let p = x.prec();
    let c = BigReal::from_f64(spec.shift, p);
    let lnx = x.ln();
    let integrand = |t: &BigReal| -> Result<BigComplex, LValueError> {
        let z = BigComplex::new(c.clone(), t.clone());
        let sz = &BigComplex::from_real(BigReal::from_i64(s, p)) + &z;
        let g = gamma_factor_complex(&sz, spec.k)
            .ok_or_else(|| LValueError::Contour(format!("Gamma factor undefined at s + z, t = {}", t.to_f64())))?;
        let xz = (-z.scale(&lnx)).exp();
        Ok(&(&g * &xz) / &z)
    };
    let f0 = integrand(&BigReal::zero(p))?;
    let scale = f0.abs().log10_abs();
    let target = scale - (spec.precision.digits + WORK_DIGITS) as f64 - 3.0;
    let trunc = if spec.trunc > 0.0 {
        spec.trunc
    } else {
        let mut t = 8.0;
        loop {
            let v = integrand(&BigReal::from_f64(t, p))?.abs().log10_abs();
            // tail beyond t is at most a few times the integrand at t
            if v + 2.0 < target {
                break t;
            }
            t *= 1.25;
            if t > 1e5 {
                return Err(LValueError::Contour("integrand does not decay".into()));
            }
        }
    };
    let n = (trunc / spec.step).ceil() as usize;
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(f0.scale(&BigReal::from_f64(0.5, p)));
    let h = BigReal::from_f64(spec.step, p);
    for j in 1..=n {
        terms.push(integrand(&(&h * &BigReal::from_u64(j as u64, p)))?);
    }
    let total = tree_sum(terms, p);
    // (1 / 2 pi) int_R = (1 / pi) Re int_0^inf by conjugate symmetry
    Ok(&total.re * &(BigReal::from_f64(spec.step, p) / BigReal::pi(p)))
}

/// `G_s(x)` at the precision of `x`.
pub fn afe_kernel(x: &BigReal, s: i64, spec: &AfeKernelSpec) -> Result<BigReal, LValueError> {
    if x.is_negative() || x.is_zero() {
        return Err(LValueError::Precondition("kernel argument must be positive".into()));
    }
    match spec.method {
        KernelMethod::Bessel => {
            if s < spec.k as i64 {
                return Err(LValueError::Precondition(format!(
                    "closed-form kernel needs an integer s >= k = {}, got {s}",
                    spec.k
                )));
            }
            Ok(kernel_bessel(x, s, spec.k))
        }
        KernelMethod::Quadrature => kernel_quadrature(x, s, spec),
    }
}

/// Upper bound for `ln G_t(x)` using `K_nu(u) <= sqrt(pi / 2u) exp(-u + nu^2 / 2u)`.
fn ln_kernel_bound(t: i64, k: u32, x: f64) -> f64 {
    let u = 4.0 * PI * x.sqrt();
    let mu = 2 * t - k as i64;
    let mut ln_c = 0.0;
    let mut terms = Vec::new();
    for j in 0..=(t - k as i64) {
        if j > 0 {
            ln_c += (2.0 * (t - k as i64 - j + 1) as f64).ln();
        }
        let nu = (k as i64 + j) as f64;
        terms.push(ln_c + (mu - j) as f64 * u.ln() + 0.5 * (PI / (2.0 * u)).ln() - u + nu * nu / (2.0 * u));
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + terms.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    lse + (k as i64 + 1 - 4 * t) as f64 * LN_2 - 2.0 * t as f64 * PI.ln()
}

/// Number of terms so that every smoothed sum has tail below `10^{-digits} L_inf`.
fn afe_terms(k: u32, w: i64, q: f64, ratios: &[f64], digits: u32) -> usize {
    let mut need = 1usize;
    let half_coeff = (w - 1) as f64 / 2.0;
    for &r in ratios {
        for t in k as i64..=w - k as i64 {
            // b_n <= d_4(n) n^{(w-1)/2} <= 8 n^{3/2} n^{(w-1)/2}
            let lnx_scale = (t as f64 - w as f64 / 2.0).max(0.0) * q.ln();
            let target = ln_gamma_factor(t, k).min(ln_gamma_factor(w - t, k)) - digits as f64 * LN_10 - lnx_scale;
            let f = |n: f64| 8f64.ln() + (1.5 + half_coeff - t as f64) * n.ln() + ln_kernel_bound(t, k, n * r / q.sqrt());
            let mut n = 1.0;
            loop {
                let (a, b) = (f(n), f(n + 1.0));
                if b < a {
                    let ratio = (b - a).exp();
                    if a - (1.0 - ratio).ln() < target {
                        break;
                    }
                }
                n += 1.0;
            }
            need = need.max(n as usize);
        }
    }
    need
}

/// `n^{-t} G_t(x_n)` for every grid point and integer `t` in the critical strip.
struct KernelTable {
    t_lo: i64,
    /// `values[g][n - 1][t - t_lo]`.
    values: Vec<Vec<Vec<BigReal>>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct TableKey {
    k: u32,
    w: i64,
    q: u64,
    ratios: Vec<Rat>,
    bits: usize,
    n_terms: usize,
}

fn kernel_table(key: &TableKey) -> Arc<KernelTable> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<KernelTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("kernel cache poisoned").get(key) {
        return t.clone();
    }
    let table = Arc::new(build_table(key));
    cache.lock().expect("kernel cache poisoned").insert(key.clone(), table.clone());
    table
}

fn build_table(key: &TableKey) -> KernelTable {
    let p = key.bits;
    let (t_lo, t_hi) = (key.k as i64, key.w - key.k as i64);
    let sqrt_q = BigReal::from_u64(key.q, p).sqrt();
    let four_pi = BigReal::pi(p) * BigReal::from_i64(4, p);
    let values = key
        .ratios
        .iter()
        .map(|r| {
            let r = BigReal::from_rat(r, p) / &sqrt_q;
            (1..=key.n_terms)
                .into_par_iter()
                .map(|n| {
                    let x = &r * &BigReal::from_u64(n as u64, p);
                    let u = &four_pi * &x.sqrt();
                    let ks = bessel_k_upto(&u, t_hi as usize);
                    let upow = powers(&u, (2 * t_hi - key.k as i64) as usize);
                    let inv_n = BigReal::one(p) / BigReal::from_u64(n as u64, p);
                    let mut npow = inv_n.powi(t_lo);
                    let mut row = Vec::with_capacity((t_hi - t_lo + 1) as usize);
                    for t in t_lo..=t_hi {
                        row.push(&kernel_from_bessel(t, key.k, &u, &ks, &upow) * &npow);
                        npow = &npow * &inv_n;
                    }
                    row
                })
                .collect()
        })
        .collect();
    KernelTable { t_lo, values }
}

/// Root number with its validation data.
#[derive(Clone, Debug, Serialize)]
pub struct RootNumber {
    #[serde(serialize_with = "ser_complex")]
    pub eps: BigComplex,
    /// Relative disagreement of the two probe solutions.
    #[serde(serialize_with = "ser_real")]
    pub residual: BigReal,
    /// `| |eps| - 1 |`.
    #[serde(serialize_with = "ser_real")]
    pub unitarity_defect: BigReal,
    pub probes: (i64, i64),
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Afe,
}

/// Completed value `Lambda(s)` with its error estimate.
#[derive(Clone, Debug, Serialize)]
pub struct LValue {
    pub s: i64,
    #[serde(serialize_with = "ser_complex")]
    pub value: BigComplex,
    #[serde(serialize_with = "ser_real")]
    pub err_bound: BigReal,
    pub method: Method,
}

/// Finite-part value from direct summation.
#[derive(Clone, Debug)]
pub struct DirectValue {
    pub finite: BigComplex,
    pub completed: BigComplex,
    /// `log10` of the certified tail bound on the finite part.
    pub tail_log10: f64,
    pub terms: usize,
}

pub fn ser_real<S: serde::Serializer>(x: &BigReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_decimal(30))
}

pub fn ser_complex<S: serde::Serializer>(z: &BigComplex, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("complex", 2)?;
    st.serialize_field("re", &z.re.to_decimal(60))?;
    st.serialize_field("im", &z.im.to_decimal(60))?;
    st.end()
}

/// `theta(N)` with `d(n) <= n^theta(N)` for all `n >= N >= 16`.
fn divisor_exponent(ln_n: f64) -> f64 {
    1.5379 * LN_2 / ln_n.ln()
}

/// `log10` of a bound on `sum_{n > N} |b_n| n^{-s}`, or `None` when the bound is not summable.
fn direct_tail_log10(ln_n: f64, s: i64, w: i64) -> Option<f64> {
    let half = (w - 1) as f64 / 2.0;
    let mut best: Option<f64> = None;
    // d_4(n) <= d(n)^3 <= 8 n^{3/2}
    let a = 1.5 + half - s as f64;
    if a < -1.0 {
        best = Some((8f64.ln() + (a + 1.0) * ln_n - (-a - 1.0).ln()) / LN_10);
    }
    // d(n) <= n^{1.5379 ln 2 / ln ln n} for n >= 3
    if ln_n >= 16f64.ln() {
        let a = 3.0 * divisor_exponent(ln_n) + half - s as f64;
        if a < -1.0 {
            let v = ((a + 1.0) * ln_n - (-a - 1.0).ln()) / LN_10;
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    best
}

/// Smallest `log10 N` whose tail bound is below `10^{-digits}`.
fn direct_need_log10(s: i64, w: i64, digits: u32) -> f64 {
    let mut x = 0.5;
    while x < 400.0 {
        if let Some(t) = direct_tail_log10(x * LN_10, s, w) {
            if t < -(digits as f64) {
                return x;
            }
        }
        x += 0.01;
    }
    f64::INFINITY
}

/// Dirichlet-series value at `s` with `2s > k + k'`, tail certified below `10^{-digits}`.
pub fn direct_l(rs: &RankinSeries, s: i64, digits: u32) -> Result<DirectValue, LValueError> {
    let (k, k2) = rs.gamma;
    if 2 * s <= (k + k2) as i64 {
        return Err(LValueError::Precondition(format!(
            "direct summation needs Re(s) > (k + k')/2 = {}, got s = {s}",
            (k + k2) as f64 / 2.0
        )));
    }
    let w = rs.fe_weight();
    let need = direct_need_log10(s, w, digits);
    let have = rs.n_max();
    if need > (have as f64).log10() {
        return Err(LValueError::InsufficientCoefficients {
            have,
            need_log10: need,
            what: format!("direct summation at s = {s} to 10^-{digits}"),
        });
    }
    let terms = (10f64.powf(need).ceil() as usize).clamp(1, have);
    let prec = Precision::new(digits).bits_with(WORK_DIGITS);
    let tail_log10 = direct_tail_log10((terms as f64).ln(), s, w).unwrap_or(f64::INFINITY);
    let parts: Vec<BigComplex> = (1..=terms)
        .into_par_iter()
        .map(|n| {
            let ns = BigReal::from_bigint(&BigInt::from(n).pow(s as u32), prec);
            rs.b[n].embed(prec).scale(&(BigReal::one(prec) / ns))
        })
        .collect();
    let finite = tree_sum(parts, prec);
    let gamma = archimedean_factor_int(s, k, prec)?;
    let completed = finite.scale(&gamma);
    Ok(DirectValue { finite, completed, tail_log10, terms })
}

/// Smoothed-sum engine for one Rankin-Selberg series.
pub struct LEngine {
    pub precision: Precision,
    bits: usize,
    k: u32,
    w: i64,
    q: u64,
    n_terms: usize,
    b: Vec<BigComplex>,
    b_dual: Vec<BigComplex>,
    table: Arc<KernelTable>,
    pub root_number: RootNumber,
}

/// Grid ratios: `1` and `11/10` for the two probes, `10/11` for the dual probe.
fn probe_values() -> (Rat, Rat) {
    (Rat::one(), Rat::new(BigInt::from(11), BigInt::from(10)))
}

impl LEngine {
    /// Builds the kernel tables and solves for the root number.
    pub fn new(rs: &RankinSeries, precision: Precision) -> Result<Self, LValueError> {
        let (k, k2) = rs.gamma;
        if k2 < k + 2 {
            return Err(LValueError::Precondition(format!("need k' - k >= 2, got ({k}, {k2})")));
        }
        if rs.conductor == 0 {
            return Err(LValueError::Precondition("conductor must be positive".into()));
        }
        let w = rs.fe_weight();
        let (a1, a2) = probe_values();
        let ratios = vec![a1.clone(), a1.clone() / &a2, a2.clone()];
        let ratios_f: Vec<f64> = ratios.iter().map(|r| r.to_f64().unwrap_or(1.0)).collect();
        let n_terms = afe_terms(k, w, rs.conductor as f64, &ratios_f, precision.digits + 5);
        if n_terms > rs.n_max() {
            return Err(LValueError::InsufficientCoefficients {
                have: rs.n_max(),
                need_log10: (n_terms as f64).log10(),
                what: format!("the smoothed sums at {} digits", precision.digits),
            });
        }
        let bits = precision.bits_with(WORK_DIGITS);
        let key = TableKey { k, w, q: rs.conductor, ratios, bits, n_terms };
        let table = kernel_table(&key);
        let b: Vec<BigComplex> = (1..=n_terms).map(|n| rs.b[n].embed(bits)).collect();
        let b_dual = b.iter().map(BigComplex::conj).collect();
        let mut engine = LEngine {
            precision,
            bits,
            k,
            w,
            q: rs.conductor,
            n_terms,
            b,
            b_dual,
            table,
            root_number: RootNumber {
                eps: BigComplex::one(bits),
                residual: BigReal::zero(bits),
                unitarity_defect: BigReal::zero(bits),
                probes: (0, 0),
            },
        };
        engine.root_number = engine.solve_root_number()?;
        Ok(engine)
    }

    pub fn terms(&self) -> usize {
        self.n_terms
    }

    /// Integers `s` with both kernels available: `k <= s <= w - k`.
    pub fn range(&self) -> (i64, i64) {
        (self.k as i64, self.w - self.k as i64)
    }

    fn sum(&self, coeffs: &[BigComplex], grid: usize, t: i64) -> BigComplex {
        let col = (t - self.table.t_lo) as usize;
        let parts: Vec<BigComplex> =
            coeffs.iter().zip(&self.table.values[grid]).map(|(c, row)| c.scale(&row[col])).collect();
        tree_sum(parts, self.bits)
    }

    /// `Q^{w/2 - s}`.
    fn level_power(&self, s: i64) -> BigReal {
        BigReal::from_u64(self.q, self.bits).sqrt().powi(self.w - 2 * s)
    }

    /// Direct-side and dual-side sums `(I, J)` so that `Lambda(s) = I + eps J`.
    /// Grids: 0 is `A = 1`, 1 is `n / (A sqrt Q)` with `A = 11/10`, 2 is `n A / sqrt Q`.
    fn sides(&self, s: i64, probe: usize) -> (BigComplex, BigComplex) {
        let (gi, gj) = match probe {
            0 => (0, 0),
            1 => (1, 2),
            _ => (2, 1),
        };
        let i = self.sum(&self.b, gi, s);
        let j = self.sum(&self.b_dual, gj, self.w - s).scale(&self.level_power(s));
        (i, j)
    }

    fn solve_at(&self, s: i64) -> BigComplex {
        let (i1, j1) = self.sides(s, 0);
        let (i2, j2) = self.sides(s, 1);
        &(&i2 - &i1) / &(&j1 - &j2)
    }

    fn solve_root_number(&self) -> Result<RootNumber, LValueError> {
        let (lo, hi) = self.range();
        let probes = (hi, (lo + hi) / 2 + 1);
        let e1 = self.solve_at(probes.0);
        let e2 = self.solve_at(probes.1);
        let residual = (&e1 - &e2).abs() / e1.abs();
        let unitarity_defect = (e1.abs() - BigReal::one(self.bits)).abs();
        let rn = RootNumber { eps: e1, residual, unitarity_defect, probes };
        let tol = -(self.precision.digits as f64) / 3.0;
        if rn.unitarity_defect.log10_abs() > tol {
            return Err(LValueError::Normalization(format!(
                "| |eps| - 1 | = {} exceeds 10^{tol:.1}",
                rn.unitarity_defect.to_decimal(6)
            )));
        }
        if rn.residual.log10_abs() > tol {
            return Err(LValueError::Normalization(format!(
                "probe solutions differ by {} (relative)",
                rn.residual.to_decimal(6)
            )));
        }
        Ok(rn)
    }

    fn gamma_scale(&self, s: i64) -> BigReal {
        archimedean_factor_int(s, self.k, self.bits).expect("s >= k inside the engine range")
    }

    fn check_range(&self, s: i64) -> Result<(), LValueError> {
        let (lo, hi) = self.range();
        if s < lo || s > hi {
            return Err(LValueError::Precondition(format!("s = {s} outside the smoothed range [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// Smoothed value with the first probe, error estimated against the second.
    pub fn afe_value(&self, s: i64) -> Result<LValue, LValueError> {
        self.check_range(s)?;
        let eps = &self.root_number.eps;
        let (i1, j1) = self.sides(s, 0);
        let (i2, j2) = self.sides(s, 1);
        let v1 = &i1 + &(eps * &j1);
        let v2 = &i2 + &(eps * &j2);
        let trunc = self.gamma_scale(s) * BigReal::from_i64(10, self.bits).powi(-(self.precision.digits as i64 + 5));
        let err_bound = (&v1 - &v2).abs().max(trunc);
        Ok(LValue { s, value: v1, err_bound, method: Method::Afe })
    }

    /// Relative residual of `Lambda(s) = eps Q^{w/2-s} Lambda~(w-s)` with the dual side
    /// evaluated at the third grid ratio and dual root number `1/eps`.
    pub fn fe_residual(&self, s: i64) -> Result<BigReal, LValueError> {
        self.check_range(s)?;
        let eps = &self.root_number.eps;
        let (i1, j1) = self.sides(s, 0);
        let lhs = &i1 + &(eps * &j1);
        // Lambda~(w - s) at A = 11/10: direct side on grid 1, dual side on grid 2
        let dual_direct = self.sum(&self.b_dual, 1, self.w - s);
        let dual_dual = self.sum(&self.b, 2, s).scale(&self.level_power(self.w - s));
        let dual = &dual_direct + &(&eps.inv() * &dual_dual);
        let rhs = (eps * &dual).scale(&self.level_power(s));
        let scale = lhs.abs().max(self.gamma_scale(s));
        Ok((&lhs - &rhs).abs() / scale)
    }
}

/// Root number of `rs` at precision `P`.
pub fn solve_root_number(rs: &RankinSeries, precision: Precision) -> Result<RootNumber, LValueError> {
    Ok(LEngine::new(rs, precision)?.root_number)
}

/// Completed value at `s`: direct summation when the tail is certified, smoothed sums otherwise.
pub fn l_at(rs: &RankinSeries, s: i64, precision: Precision) -> Result<LValue, LValueError> {
    let (k, k2) = rs.gamma;
    if 2 * s > (k + k2) as i64 {
        match direct_l(rs, s, precision.digits) {
            Ok(d) => {
                let prec = precision.bits_with(WORK_DIGITS);
                let gamma = archimedean_factor_int(s, k, prec)?;
                let err = &gamma * &pow10(d.tail_log10, prec);
                return Ok(LValue { s, value: d.completed, err_bound: err, method: Method::Direct });
            }
            Err(LValueError::InsufficientCoefficients { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let engine = LEngine::new(rs, precision)?;
    engine.afe_value(s)
}

/// `10^e` for a fractional exponent.
fn pow10(e: f64, prec: usize) -> BigReal {
    (BigReal::from_i64(10, prec).ln() * BigReal::from_f64(e, prec)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_family_qexp;
    use crate::ingest::load_newform;
    use crate::rankin::{archimedean_factor, rs_coefficients};

    fn cm_pair(n: usize) -> RankinSeries {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let h = load_newform(dir.join("3.13.b.a.json")).unwrap().truncated(n);
        let g = delta_family_qexp(26, n).unwrap();
        rs_coefficients(&h, &g, n).unwrap()
    }

    #[test]
    fn closed_form_kernel_tends_to_gamma_factor() {
        let p = Precision::new(30).bits();
        let x = BigReal::from_f64(1e-30, p);
        for t in [13i64, 19, 25] {
            let g = kernel_bessel(&x, t, 13);
            let exact = archimedean_factor_int(t, 13, p).unwrap();
            assert!(((&g - &exact) / exact).log10_abs() < -25.0, "t = {t}");
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let spec = AfeKernelSpec::new(13, 26, Precision::new(25), KernelMethod::Quadrature);
        let p = spec.precision.bits_with(WORK_DIGITS);
        for (t, x) in [(13i64, 0.3), (19, 1.0), (25, 3.0)] {
            let x = BigReal::from_f64(x, p);
            let a = afe_kernel(&x, t, &spec).unwrap();
            let b = kernel_bessel(&x, t, 13);
            let e = ((&a - &b) / b).log10_abs();
            assert!(e < -25.0, "t = {t}: 10^{e}");
        }
    }

    #[test]
    fn kernel_decreases_along_doubling_arguments() {
        let spec = AfeKernelSpec::new(13, 26, Precision::new(30), KernelMethod::Bessel);
        let p = spec.precision.bits();
        let mut prev = None;
        for e in 0..8 {
            let x = BigReal::from_i64(1 << e, p);
            let g = afe_kernel(&x, 20, &spec).unwrap();
            assert!(!g.is_negative());
            if let Some(q) = prev {
                assert!(g < q);
            }
            prev = Some(g);
        }
    }

    #[test]
    fn kernel_rejects_bad_inputs() {
        let spec = AfeKernelSpec::new(13, 26, Precision::new(20), KernelMethod::Bessel);
        let p = spec.precision.bits();
        assert!(afe_kernel(&BigReal::zero(p), 20, &spec).is_err());
        assert!(afe_kernel(&BigReal::one(p), 5, &spec).is_err());
        let mut q = AfeKernelSpec::new(13, 26, Precision::new(20), KernelMethod::Quadrature);
        q.shift = 0.2;
        assert!(matches!(afe_kernel(&BigReal::one(p), 13, &q), Err(LValueError::Contour(_))));
    }

    #[test]
    fn integer_and_complex_gamma_factors_agree() {
        let p = Precision::new(30).bits();
        let a = archimedean_factor_int(20, 13, p).unwrap();
        let b = archimedean_factor(&BigComplex::from_real(BigReal::from_i64(20, p)), 13).unwrap();
        assert!(((&a - &b.re) / a).log10_abs() < -28.0);
        let c = gamma_factor_complex(&BigComplex::from_real(BigReal::from_i64(20, p)), 13).unwrap();
        assert!(((&c.re - &b.re) / b.re.clone()).log10_abs() < -28.0);
    }

    #[test]
    fn direct_summation_preconditions() {
        let rs = cm_pair(400);
        assert!(matches!(direct_l(&rs, 19, 10), Err(LValueError::Precondition(_))));
        assert!(matches!(direct_l(&rs, 20, 10), Err(LValueError::InsufficientCoefficients { .. })));
        let d = direct_l(&rs, 25, 8).unwrap();
        assert!(d.tail_log10 < -8.0);
    }

    #[test]
    fn degenerate_series_gives_gamma_factor() {
        let mut rs = cm_pair(400);
        for b in rs.b.iter_mut().skip(2) {
            *b = crate::exactnum::AlgNum::zero();
        }
        let d = direct_l(&rs, 25, 10).unwrap();
        let g = archimedean_factor_int(25, 13, d.completed.prec()).unwrap();
        assert!(((&d.completed.re - &g) / g).log10_abs() < -30.0);
    }

    #[test]
    fn smoothed_sums_match_direct_and_root_number_is_sign() {
        let rs = cm_pair(1500);
        let engine = LEngine::new(&rs, Precision::new(25)).unwrap();
        let eps = &engine.root_number.eps;
        assert!((eps.re.to_f64() + 1.0).abs() < 1e-8 && eps.im.to_f64().abs() < 1e-8);
        let afe = engine.afe_value(25).unwrap();
        let direct = direct_l(&rs, 25, 10).unwrap();
        let rel = ((&afe.value - &direct.completed).abs() / direct.completed.abs()).log10_abs();
        assert!(rel < -10.0, "relative difference 10^{rel}");
        for s in [13, 19, 22] {
            assert!(engine.fe_residual(s).unwrap().log10_abs() < -8.0);
        }
        // central value vanishes for root number -1
        assert!((engine.afe_value(19).unwrap().value.abs() / engine.gamma_scale(19)).log10_abs() < -15.0);
    }

    #[test]
    fn wrong_conductor_fails_unitarity() {
        let rs = cm_pair(1500).with_conductor(36);
        assert!(matches!(LEngine::new(&rs, Precision::new(25)), Err(LValueError::Normalization(_))));
    }
}
