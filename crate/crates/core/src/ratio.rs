//! Ratios of successive completed critical values: exact reconstruction in
//! the coefficient field, reduction modulo a prime ideal, pairwise congruence
//! verdicts and the full verification report.

use crate::congruence::{check_congruent, eisenstein_screen, excluded_primes, is_squarefree, CongruenceError, CongruenceReport, ExcludedPrimes};
use crate::exactnum::{factor_rational_prime, valuation, AlgNum, BigComplex, BigReal, ExactError, PrimeIdeal, Precision, QuadField, Rat};
use crate::forms::NewformData;
use crate::lvalue::{ser_complex, ser_real, LEngine, LValue, LValueError, RootNumber};
use crate::rankin::{
    archimedean_factor_int, critical_set, gamma_ratio, lower_weight_ranges, rs_coefficients, theorem_ranges, RankinError,
    RankinSeries, TheoremRanges,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatioError {
    #[error("no relation with height below 10^{cap_log10:.0} reproduces the value (best residual 10^{best_log10:.1})")]
    ReconstructionFailed { cap_log10: f64, best_log10: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    LValue(#[from] LValueError),
    #[error(transparent)]
    Rankin(#[from] RankinError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

type Vector = Vec<BigInt>;

#[cfg(test)]
fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vector]) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = b.len();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Rat> = b[i].iter().map(|x| Rat::from_integer(x.clone())).collect();
        for j in 0..i {
            let num: Rat = b[i].iter().zip(&star[j]).map(|(x, y)| Rat::from_integer(x.clone()) * y).sum();
            mu[i][j] = if norms[j] == Rat::zero() { Rat::zero() } else { num / &norms[j] };
            for (vi, sj) in v.iter_mut().zip(&star[j]) {
                *vi -= &mu[i][j] * sj;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        star.push(v);
    }
    (mu, norms)
}

/// LLL reduction with `delta = 3/4` in exact rational arithmetic.
pub fn lll_reduce(mut b: Vec<Vector>) -> Vec<Vector> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = Rat::new(3.into(), 4.into());
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = Rat::from_integer(q);
                for l in 0..j {
                    let t = &qr * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, norms) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Exact element recovered from a numeric value.
#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub value: AlgNum,
    #[serde(serialize_with = "ser_real")]
    pub residual: BigReal,
    /// Bits of the largest of the relation coefficients `(p, q, r)`.
    pub height_bits: u64,
}

fn scaled(x: &BigReal, scale: &BigReal) -> BigInt {
    (x * scale).round_to_bigint()
}

/// Recovers `x = (p + q sqrt(d0)) / r` with `|p|, |q|, |r| <= height_cap` by lattice
/// reduction on `digits` decimal digits of `x`. The relation must hold to
/// `10^{-digits/2}`; `digits` must be at least `(deg + 1) log10(height_cap)`.
pub fn reconstruct_algebraic(
    x: &BigComplex,
    field: QuadField,
    height_cap: &BigInt,
    digits: u32,
) -> Result<Reconstruction, RatioError> {
    let deg = field.degree() as usize;
    let cap_log10 = height_cap.to_string().len() as f64 - 1.0;
    if (digits as f64) < (deg as f64 + 1.0) * cap_log10 {
        return Err(RatioError::Precondition(format!(
            "{digits} digits cannot separate relations of height 10^{cap_log10}: need {}",
            (deg as f64 + 1.0) * cap_log10
        )));
    }
    let p = x.prec().max(Precision::new(digits).bits());
    let scale = BigReal::from_i64(10, p).powi(digits as i64);
    let root = field_root(field, p);
    // coordinates: integer part, then scaled real and imaginary residuals of p + q sqrt(d0) - r x
    let mut columns: Vec<(BigComplex, usize)> = vec![(BigComplex::one(p), 0)];
    if deg == 2 {
        columns.push((root.clone(), 1));
    }
    columns.push((-x.with_prec(p), deg));
    let width = deg + 1;
    let basis: Vec<Vector> = columns
        .iter()
        .map(|(z, idx)| {
            let mut v = vec![BigInt::zero(); width + 2];
            v[*idx] = BigInt::from(1);
            v[width] = scaled(&z.re, &scale);
            v[width + 1] = scaled(&z.im, &scale);
            v
        })
        .collect();
    let reduced = lll_reduce(basis);
    let threshold = -(digits as f64) / 2.0;
    let mut best: Option<Reconstruction> = None;
    let mut best_log10 = f64::INFINITY;
    for v in &reduced {
        let r = &v[deg];
        if r.is_zero() || v[..width].iter().any(|c| c.abs() > *height_cap) {
            continue;
        }
        let q = if deg == 2 { v[1].clone() } else { BigInt::zero() };
        let value = AlgNum::new(field, Rat::new(v[0].clone(), r.clone()), Rat::new(q, r.clone()));
        let value = if field.is_rational() { AlgNum::rational(value.a) } else { value };
        let residual = (&value.embed(p) - x).abs();
        let lg = residual.log10_abs();
        if lg < best_log10 {
            best_log10 = lg;
            let height_bits = v[..width].iter().map(|c| c.bits()).max().unwrap_or(0);
            best = Some(Reconstruction { value, residual, height_bits });
        }
    }
    match best {
        Some(r) if best_log10 <= threshold => Ok(r),
        _ => Err(RatioError::ReconstructionFailed { cap_log10, best_log10 }),
    }
}

fn field_root(field: QuadField, p: usize) -> BigComplex {
    let d0 = field.d0();
    let r = BigReal::from_u64(d0.unsigned_abs(), p).sqrt();
    if d0 < 0 {
        BigComplex::new(BigReal::zero(p), r)
    } else {
        BigComplex::from_real(r)
    }
}

/// Outcome of one ratio computation.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "state", content = "reason", rename_all = "lowercase")]
pub enum RatioState {
    Exact,
    Indeterminate(String),
}

/// `Lambda(m) / Lambda(m + 1)` with its exact reconstruction.
#[derive(Clone, Debug, Serialize)]
pub struct RatioVerdict {
    pub label: String,
    pub m_classical: (i64, i64),
    #[serde(serialize_with = "ser_complex")]
    pub ratio_numeric: BigComplex,
    /// `L(m) / L(m+1)` of the finite parts, equal to the completed ratio times `m (m+1-k) / (2 pi)^2`.
    #[serde(serialize_with = "ser_complex")]
    pub finite_ratio_numeric: BigComplex,
    pub ratio_exact: Option<AlgNum>,
    pub reconstruction_residual: Option<String>,
    pub height_bits: Option<u64>,
    pub v_l: Option<i64>,
    pub state: RatioState,
}

impl RatioVerdict {
    pub fn is_exact(&self) -> bool {
        matches!(self.state, RatioState::Exact)
    }
}

/// Relative size `|Lambda(s)| / L_inf(s)`, i.e. `|L(s)|` of the finite part.
fn finite_size(v: &LValue, k: u32) -> Result<BigReal, RankinError> {
    Ok(v.value.abs() / archimedean_factor_int(v.s, k, v.value.prec())?)
}

/// Builds the verdict for the pair `(m, m+1)` from completed values.
pub fn ratio_from_values(
    label: &str,
    lm: &LValue,
    lm1: &LValue,
    k: u32,
    field: QuadField,
    height_cap: &BigInt,
    precision: Precision,
    prime: Option<&PrimeIdeal>,
) -> Result<RatioVerdict, RatioError> {
    let m = lm.s;
    if lm1.s != m + 1 {
        return Err(RatioError::Precondition(format!("values at {} and {} are not successive", m, lm1.s)));
    }
    let p = lm.value.prec();
    let ratio_numeric = if lm1.value.is_zero() { BigComplex::zero(p) } else { &lm.value / &lm1.value };
    let g = gamma_ratio(m, k)?;
    let two_pi = BigReal::pi(p) * BigReal::from_i64(2, p);
    let finite_ratio_numeric = ratio_numeric.scale(&(BigReal::from_rat(&g.recip(), p) / (&two_pi * &two_pi)));
    let tol = -(precision.digits as f64) / 2.0;
    let mut out = RatioVerdict {
        label: label.to_string(),
        m_classical: (m, m + 1),
        ratio_numeric,
        finite_ratio_numeric,
        ratio_exact: None,
        reconstruction_residual: None,
        height_bits: None,
        v_l: None,
        state: RatioState::Exact,
    };
    if finite_size(lm1, k)?.log10_abs() < tol {
        out.state = RatioState::Indeterminate(format!("L({}) vanishes to working precision", m + 1));
        return Ok(out);
    }
    let exact = if finite_size(lm, k)?.log10_abs() < tol {
        // a vanishing numerator is an exact zero
        out.reconstruction_residual = Some(out.ratio_numeric.abs().to_decimal(6));
        out.height_bits = Some(0);
        AlgNum::zero()
    } else {
        match reconstruct_algebraic(&out.ratio_numeric, field, height_cap, precision.digits) {
            Ok(r) => {
                out.reconstruction_residual = Some(r.residual.to_decimal(6));
                out.height_bits = Some(r.height_bits);
                r.value
            }
            Err(e) => {
                out.state = RatioState::Indeterminate(e.to_string());
                return Ok(out);
            }
        }
    };
    out.v_l = prime.map(|pr| valuation(&exact, pr));
    out.ratio_exact = Some(exact);
    Ok(out)
}

/// Single ratio at `(m, m+1)` for a series, evaluated with a fresh engine.
pub fn ratio_at(
    rs: &RankinSeries,
    m: i64,
    precision: Precision,
    height_cap: &BigInt,
    prime: Option<&PrimeIdeal>,
) -> Result<RatioVerdict, RatioError> {
    let crit = critical_set(rs.gamma.0, rs.gamma.1);
    if !crit.contains(m) || !crit.contains(m + 1) {
        return Err(RatioError::Precondition(format!("({m}, {}) is not a pair of critical integers", m + 1)));
    }
    let engine = LEngine::new(rs, precision)?;
    let a = engine.afe_value(m)?;
    let b = engine.afe_value(m + 1)?;
    let (l1, l2) = rs.labels();
    ratio_from_values(&format!("{l1} x {l2}"), &a, &b, rs.gamma.0, rs.field, height_cap, precision, prime)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Congruent,
    NotCongruent,
    Indeterminate,
}

/// Pairwise comparison modulo a prime ideal.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `v_P(ratio_1 - ratio_2)` when both ratios are exact.
    pub valuation_of_difference: Option<i64>,
    pub reason: Option<String>,
}

/// Congruent iff `v_P(r_1 - r_2) >= 1`, i.e. the difference lies in `P`.
///
/// Ratios that are not `P`-integral still get a verdict from the difference;
/// the non-integrality is recorded in `reason`. Missing reconstructions give
/// Indeterminate.
pub fn compare_ratios(v1: &RatioVerdict, v2: &RatioVerdict, p: &PrimeIdeal) -> Result<Comparison, RatioError> {
    let (Some(r1), Some(r2)) = (&v1.ratio_exact, &v2.ratio_exact) else {
        let reason = [v1, v2]
            .iter()
            .find_map(|v| match &v.state {
                RatioState::Indeterminate(r) => Some(format!("{} at {:?}: {r}", v.label, v.m_classical)),
                RatioState::Exact => None,
            })
            .unwrap_or_else(|| "a ratio has no exact reconstruction".into());
        return Ok(Comparison { verdict: Verdict::Indeterminate, valuation_of_difference: None, reason: Some(reason) });
    };
    let field = r1.field.join(&r2.field)?.join(&p.field)?;
    if field != p.field && !field.is_rational() {
        return Err(RatioError::Precondition(format!("prime ideal lives in {} but the ratios need {field}", p.field)));
    }
    let mut reason = None;
    for (r, v) in [(r1, v1), (r2, v2)] {
        let val = valuation(r, p);
        if val < 0 {
            reason = Some(format!("ratio at {:?} for {} is not integral at {p} (valuation {val})", v.m_classical, v.label));
        }
    }
    let d = valuation(&(r1 - r2), p);
    let verdict = if d >= 1 { Verdict::Congruent } else { Verdict::NotCongruent };
    Ok(Comparison { verdict, valuation_of_difference: Some(d), reason })
}

/// Which theorem range a pair belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    RightOfAxis,
    LeftOfAxis,
    LowerWeightOrientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    /// All hypotheses hold; the verdict is a test of the congruence theorems.
    Covered,
    /// Some hypothesis fails; the verdict is reported without theorem backing.
    Informational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub pair: (i64, i64),
    pub twist: i64,
    pub region: Region,
    pub first: RatioVerdict,
    pub second: RatioVerdict,
    pub comparison: Comparison,
    pub coverage: Coverage,
    pub notes: Vec<String>,
}

/// Hypotheses of the congruence theorems as evaluated on the inputs.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisChecklist {
    /// `l` exceeds both weights.
    pub l_exceeds_weights: bool,
    /// `l` does not divide `N N'`.
    pub l_coprime_to_levels: bool,
    /// No Eisenstein congruence was detected for the congruent pair.
    pub irreducibility_screen_clear: bool,
    /// Levels are square-free and coprime.
    pub levels_squarefree_coprime: bool,
    /// The pair is congruent modulo the prime.
    pub pair_congruent: bool,
    pub notes: Vec<String>,
}

impl HypothesisChecklist {
    pub fn all_hold(&self) -> bool {
        self.l_exceeds_weights
            && self.l_coprime_to_levels
            && self.irreducibility_screen_clear
            && self.levels_squarefree_coprime
            && self.pair_congruent
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesSummary {
    pub label: String,
    pub conductor: u64,
    pub root_number: RootNumber,
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub fixed_form: String,
    pub pair: (String, String),
    pub weights: (u32, u32),
    pub levels: (u64, u64),
    pub field: String,
    pub prime: PrimeIdeal,
    pub precision: u32,
    pub congruence: CongruenceReport,
    pub eisenstein_alarms: BTreeMap<String, Option<String>>,
    pub excluded_primes: ExcludedPrimes,
    pub hypotheses: HypothesisChecklist,
    pub ranges: TheoremRanges,
    pub series: Vec<SeriesSummary>,
    pub verdicts: Vec<PairVerdict>,
}

/// Options for [`full_report`].
#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub precision: Precision,
    pub height_cap: BigInt,
    pub n_extra: usize,
    /// Restrict to pairs whose first argument is listed.
    pub m_list: Option<Vec<i64>>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { precision: Precision::new(120), height_cap: BigInt::from(10).pow(40), n_extra: 50, m_list: None }
    }
}

impl Report {
    /// 0 when every covered verdict is Congruent, 2 on a covered NotCongruent, 3 on a covered Indeterminate.
    pub fn exit_code(&self) -> i32 {
        let covered = || self.verdicts.iter().filter(|v| v.coverage == Coverage::Covered);
        if covered().any(|v| v.comparison.verdict == Verdict::NotCongruent) {
            2
        } else if covered().any(|v| v.comparison.verdict == Verdict::Indeterminate) {
            3
        } else {
            0
        }
    }

    pub fn verdict_for(&self, pair: (i64, i64), region: Region) -> Option<&PairVerdict> {
        self.verdicts.iter().find(|v| v.pair == pair && v.region == region)
    }

    /// Plain-text table.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "fixed form {}; pair {} / {}; prime {}", self.fixed_form, self.pair.0, self.pair.1, self.prime);
        let _ = writeln!(
            s,
            "coefficient congruence: {} (checked n <= {})",
            if self.congruence.congruent { "holds" } else { "fails" },
            self.congruence.bound_used
        );
        for (label, alarm) in &self.eisenstein_alarms {
            if let Some(e) = alarm {
                let _ = writeln!(s, "Eisenstein alarm: {label} is congruent to {e}");
            }
        }
        let h = &self.hypotheses;
        let _ = writeln!(
            s,
            "hypotheses: l > weights {}, l coprime to levels {}, irreducibility screen {}, square-free coprime levels {}",
            h.l_exceeds_weights, h.l_coprime_to_levels, h.irreducibility_screen_clear, h.levels_squarefree_coprime
        );
        for n in &h.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        let _ = writeln!(s, "{:<10} {:<26} {:<15} {:<6} {:<14}", "pair", "region", "verdict", "v(d)", "coverage");
        for v in &self.verdicts {
            let vd = v.comparison.valuation_of_difference.map_or("-".into(), |d| if d >= i64::MAX / 4 { "inf".into() } else { d.to_string() });
            let _ = writeln!(
                s,
                "{:<10} {:<26} {:<15} {:<6} {:<14}",
                format!("({},{})", v.pair.0, v.pair.1),
                format!("{:?}", v.region),
                format!("{:?}", v.comparison.verdict),
                vd,
                format!("{:?}", v.coverage)
            );
        }
        let _ = writeln!(s, "exit code {}", self.exit_code());
        s
    }
}

/// Chooses the prime above `l` in `field` modulo which `h1` and `h2` are congruent,
/// falling back to the first prime above `l`.
pub fn choose_prime(l: u64, field: QuadField, h1: &NewformData, h2: &NewformData, n_extra: usize) -> Result<PrimeIdeal, RatioError> {
    let primes = factor_rational_prime(l, field)?;
    for p in &primes {
        if let Ok(r) = check_congruent(h1, h2, p, n_extra) {
            if r.congruent {
                return Ok(p.clone());
            }
        }
    }
    Ok(primes[0].clone())
}

/// Runs the whole pipeline for a fixed form `h` and a candidate congruent pair `(h1, h2)`.
pub fn full_report(
    h: &NewformData,
    h1: &NewformData,
    h2: &NewformData,
    l: u64,
    opts: &ReportOptions,
) -> Result<Report, RatioError> {
    if h1.weight != h2.weight || h1.level != h2.level {
        return Err(RatioError::Precondition("the congruent pair must share weight and level".into()));
    }
    let (kp, kh) = (h1.weight, h.weight);
    if kp.abs_diff(kh) < 2 {
        return Err(RatioError::Precondition(format!("weights {kp} and {kh} must differ by at least 2")));
    }
    let field = h.field.join(&h1.field)?.join(&h2.field)?;
    let prime = choose_prime(l, field, h1, h2, opts.n_extra)?;
    let congruence = check_congruent(h1, h2, &prime, opts.n_extra)?;
    let mut alarms = BTreeMap::new();
    for f in [h1, h2, h] {
        let p = if f.field == field || f.field.is_rational() { prime.clone() } else { continue };
        alarms.insert(f.label.clone(), eisenstein_screen(f, &p));
    }
    let excluded = excluded_primes(kp, kh, h1.level, h.level);
    let mut notes = Vec::new();
    let l_exceeds = !excluded.s_weight.contains(&l);
    if !l_exceeds {
        notes.push(format!("l = {l} does not exceed the weights ({kp}, {kh})"));
    }
    let l_coprime = !excluded.s_level.contains(&l);
    if !l_coprime {
        notes.push(format!("l = {l} divides the product of the levels"));
    }
    let screen_clear = [h1, h2].iter().all(|f| alarms.get(&f.label).map_or(true, |a| a.is_none()));
    if !screen_clear {
        notes.push("the congruent pair is congruent to an Eisenstein series: residual representation is reducible".into());
    }
    let sq = is_squarefree(h.level) && is_squarefree(h1.level) && h.level.gcd(&h1.level) == 1;
    if !sq {
        notes.push("levels are not square-free and coprime".into());
    }
    if !congruence.congruent {
        notes.push(format!("coefficients differ modulo the prime at n = {:?}", congruence.first_failure));
    }
    let hypotheses = HypothesisChecklist {
        l_exceeds_weights: l_exceeds,
        l_coprime_to_levels: l_coprime,
        irreducibility_screen_clear: screen_clear,
        levels_squarefree_coprime: sq,
        pair_congruent: congruence.congruent,
        notes,
    };

    let n = h.n_max().min(h1.n_max()).min(h2.n_max());
    let series = [rs_coefficients(h1, h, n)?, rs_coefficients(h2, h, n)?];
    let (k, k2) = series[0].gamma;
    let ranges = theorem_ranges(k, k2)?;
    let mut wanted: Vec<(i64, i64, Region)> = ranges
        .twists
        .iter()
        .zip(&ranges.pairs)
        .map(|(t, p)| (*t, p.0, Region::RightOfAxis))
        .chain(ranges.left_twists.iter().zip(&ranges.left_pairs).map(|(t, p)| (*t, p.0, Region::LeftOfAxis)))
        .collect();
    if kh > kp {
        // the congruent forms carry the lower weight
        for (t, p) in lower_weight_ranges(kh, kp)? {
            wanted.push((t, p.0, Region::LowerWeightOrientation));
        }
    }
    if let Some(list) = &opts.m_list {
        wanted.retain(|(_, m, _)| list.contains(m));
    }
    let crit = critical_set(k, k2);
    wanted.retain(|(_, m, _)| crit.contains(*m) && crit.contains(m + 1));

    let mut summaries = Vec::new();
    let mut ratios: Vec<BTreeMap<i64, RatioVerdict>> = Vec::new();
    for rs in &series {
        let engine = LEngine::new(rs, opts.precision)?;
        let mut needed: Vec<i64> = wanted.iter().flat_map(|(_, m, _)| [*m, m + 1]).collect();
        needed.sort_unstable();
        needed.dedup();
        let values: BTreeMap<i64, LValue> =
            needed.iter().map(|&s| engine.afe_value(s).map(|v| (s, v))).collect::<Result<_, _>>()?;
        let label = format!("{} x {}", rs.h.label, rs.h2.label);
        let mut per_m = BTreeMap::new();
        for (_, m, _) in &wanted {
            if per_m.contains_key(m) {
                continue;
            }
            let v = ratio_from_values(&label, &values[m], &values[&(m + 1)], k, field, &opts.height_cap, opts.precision, Some(&prime))?;
            per_m.insert(*m, v);
        }
        summaries.push(SeriesSummary { label, conductor: rs.conductor, root_number: engine.root_number.clone(), terms: engine.terms() });
        ratios.push(per_m);
    }

    let mut verdicts = Vec::new();
    for (twist, m, region) in wanted {
        let first = ratios[0][&m].clone();
        let second = ratios[1][&m].clone();
        let comparison = compare_ratios(&first, &second, &prime)?;
        let mut notes = Vec::new();
        let mut coverage = if hypotheses.all_hold() { Coverage::Covered } else { Coverage::Informational };
        if region == Region::LeftOfAxis {
            notes.push(ranges.left_caveat.clone());
            let units = [&first, &second].iter().all(|v| v.v_l == Some(0));
            if !units {
                coverage = Coverage::Informational;
                notes.push("unit hypothesis not certified: a ratio is not a unit at the prime".into());
            }
        }
        if coverage == Coverage::Informational && !hypotheses.all_hold() {
            notes.push("theorem hypotheses fail; verdict is informational".into());
        }
        verdicts.push(PairVerdict { pair: (m, m + 1), twist, region, first, second, comparison, coverage, notes });
    }

    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        fixed_form: h.label.clone(),
        pair: (h1.label.clone(), h2.label.clone()),
        weights: (kp, kh),
        levels: (h1.level, h.level),
        field: field.to_string(),
        prime,
        precision: opts.precision.digits,
        congruence,
        eisenstein_alarms: alarms,
        excluded_primes: excluded,
        hypotheses,
        ranges,
        series: summaries,
        verdicts,
    })
}
