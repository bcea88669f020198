//! Shared drivers for the integration tests and the acceptance target.
//!
//! Every suite returns `Ok(summary)` or `Err(first failure)` so the acceptance
//! runner can print one line per criterion while ordinary tests just unwrap.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rscong::coset::{double_coset_index, reduce_unipotent, Mat4, OrbitOracle, PadicMat};
use rscong::exactnum::{factor_rational_prime, rat, valuation, AlgNum, BigReal, Precision, PrimeIdeal, QuadField, Rat};
use rscong::forms::{char_from_kronecker, delta_family_qexp, DirichletChar, NewformData};
use rscong::ingest::load_newform;
use rscong::localint::{
    local_constant, local_constant_from_roots, local_euler_factor, l_ratio, LocalError, LocalRep,
};
use rscong::rankin::{
    critical_set, euler_factor, euler_product_coefficients, gamma_ratio, pow_rat, rs_coefficients, theorem_ranges,
};
use rscong::ratio::reconstruct_algebraic;
use std::path::PathBuf;

pub type Outcome = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// The two weight-13 level-3 newforms, truncated to `n` coefficients.
pub fn level_three_pair(n: usize) -> (NewformData, NewformData) {
    let load = |l: &str| load_newform(fixture_dir().join(format!("{l}.json"))).expect("fixture loads").truncated(n);
    (load("3.13.b.a"), load("3.13.b.b"))
}

pub fn weight_26(n: usize) -> NewformData {
    delta_family_qexp(26, n).expect("weight 26 form")
}

pub fn field_m26() -> QuadField {
    QuadField::new(-26).unwrap()
}

/// The ramified prime above 13 in `Q(sqrt(-26))`.
pub fn ramified_13() -> PrimeIdeal {
    let ps = factor_rational_prime(13, field_m26()).unwrap();
    assert_eq!(ps.len(), 1, "13 does not split in Q(sqrt(-26))");
    ps.into_iter().next().unwrap()
}

fn small_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

/// Random element of `field` with small numerators and denominators.
pub fn random_alg(r: &mut ChaCha8Rng, field: QuadField, num: i64, den: i64) -> AlgNum {
    if field.is_rational() {
        AlgNum::rational(small_rat(r, num, den))
    } else {
        AlgNum::new(field, small_rat(r, num, den), small_rat(r, num, den))
    }
}

fn nonzero_alg(r: &mut ChaCha8Rng, field: QuadField) -> AlgNum {
    loop {
        let x = random_alg(r, field, 9, 4);
        if !x.is_zero() {
            return x;
        }
    }
}

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// `prod_i (1 - p^-3 X_i) / (1 - p^-2 X_i)` with `X_i = a beta_i p^{4-k'}`, written out
/// directly from the roots. `None` when a denominator vanishes.
fn root_product_oracle(p: u64, a: &AlgNum, betas: [&AlgNum; 2], k2: u32) -> Option<AlgNum> {
    let mut acc = AlgNum::one();
    for b in betas {
        let x = (a * b).scale(&pow_rat(p, 4 - k2 as i64));
        let num = &AlgNum::one() - &x.scale(&pow_rat(p, -3));
        let den = &AlgNum::one() - &x.scale(&pow_rat(p, -2));
        if den.is_zero() {
            return None;
        }
        acc = &acc * &(&num / &den);
    }
    Some(acc)
}

/// Hecke roots drawn in `Q(sqrt(-26))`; local constant against the geometric factors,
/// the root product written out here and the local Euler factor.
pub fn local_constant_roots_family(seed: u64, cases: usize) -> Outcome {
    let f = field_m26();
    let mut r = rng(seed);
    let mut done = 0;
    let mut skipped = 0;
    while done < cases {
        let p = SMALL_PRIMES[r.gen_range(0..SMALL_PRIMES.len())];
        let k2 = r.gen_range(6..=30u32);
        let k = r.gen_range(2..=k2 - 2);
        let a = nonzero_alg(&mut r, f);
        let (b1, b2) = (nonzero_alg(&mut r, f), nonzero_alg(&mut r, f));
        let st = LocalRep::steinberg(p, a.clone(), 1).map_err(|e| e.to_string())?;
        // trace a(p, h'^rho) p^{-1/2}, determinant chi'^{-1}(p) p^{k'-2} = conj(beta_1 beta_2) / p
        let trace = (&b1 + &b2).complex_conj();
        let det = (&b1 * &b2).complex_conj().scale(&rat(1, p as i64));
        let ps = LocalRep::unramified(p, trace, det, 0).map_err(|e| e.to_string())?;
        let Some(oracle) = root_product_oracle(p, &a, [&b1, &b2], k2) else {
            skipped += 1;
            continue;
        };
        let c = match local_constant(&st, &ps, k, k2) {
            Ok(c) => c.value,
            Err(LocalError::ConvergenceViolation { .. }) => return Err(format!("p={p}: spurious convergence failure")),
            Err(e) => return Err(e.to_string()),
        };
        let via_roots = local_constant_from_roots(&st, [&b1, &b2], k2).map_err(|e| e.to_string())?;
        let via_factor = l_ratio(&local_euler_factor(&st, &ps).map_err(|e| e.to_string())?, k2).map_err(|e| e.to_string())?;
        if c != oracle || c != via_roots || c != via_factor {
            return Err(format!(
                "p={p} k'={k2} a={a} betas=({b1}, {b2}): local {c}, roots {via_roots}, oracle {oracle}, factor {via_factor}"
            ));
        }
        done += 1;
    }
    Ok(format!("{done} root cases exact ({skipped} singular draws skipped)"))
}

/// `(trace, det)` drawn directly; local constant against `L_p(k'-2)/L_p(k'-1)` expanded here.
pub fn local_constant_trace_det_family(seed: u64, cases: usize) -> Outcome {
    let f = field_m26();
    let mut r = rng(seed);
    let mut done = 0;
    while done < cases {
        let p = SMALL_PRIMES[r.gen_range(0..SMALL_PRIMES.len())];
        let k2 = r.gen_range(6..=30u32);
        let k = r.gen_range(2..=k2 - 2);
        let a = nonzero_alg(&mut r, f);
        let trace = random_alg(&mut r, f, 20, 6);
        let det = nonzero_alg(&mut r, f);
        let st = LocalRep::steinberg(p, a.clone(), 1).map_err(|e| e.to_string())?;
        let ps = LocalRep::unramified(p, trace.clone(), det.clone(), 0).map_err(|e| e.to_string())?;
        // `trace` stores a(p, h'^rho) with p^{-1/2} kept apart, so b = conj(trace) and d = conj(det) p;
        // L_p(s)^{-1} = 1 - a b p^-s + a^2 d p^-2s
        let b = trace.complex_conj();
        let d = det.complex_conj().scale(&rat(p as i64, 1));
        let inv_l = |s: i64| {
            let t = pow_rat(p, -s);
            &(&AlgNum::one() - &(&a * &b).scale(&t)) + &(&(&a * &a) * &d).scale(&(&t * &t))
        };
        let (lo, hi) = (inv_l(k2 as i64 - 2), inv_l(k2 as i64 - 1));
        if lo.is_zero() || hi.is_zero() {
            continue;
        }
        let oracle = &hi / &lo;
        let c = local_constant(&st, &ps, k, k2).map_err(|e| format!("p={p}: {e}"))?;
        if c.value != oracle {
            return Err(format!("p={p} k'={k2} a={a} trace={trace} det={det}: local {} vs {oracle}", c.value));
        }
        done += 1;
    }
    Ok(format!("{done} trace/det cases exact"))
}

fn stub_form(label: &str, level: u64, weight: u32, chi: DirichletChar, p: u64, ap: AlgNum) -> NewformData {
    let mut an = vec![AlgNum::zero(); p as usize];
    an[0] = AlgNum::one();
    an[p as usize - 1] = ap;
    NewformData::new(label, level, weight, chi, an, true).expect("stub form")
}

/// Forms carrying only `a(1)` and `a(p)`: the Steinberg side has level `p`, the unramified
/// side level 1 with a quadratic character; the local constant must equal the ratio of the
/// Euler factor values built by `rankin::euler_factor`.
pub fn local_constant_euler_family(seed: u64, cases: usize) -> Outcome {
    let f = field_m26();
    let mut r = rng(seed);
    let discs = [1i64, -4, 5, -3, 8, -8, 12];
    let mut done = 0;
    while done < cases {
        let p = SMALL_PRIMES[r.gen_range(0..SMALL_PRIMES.len())];
        let disc = discs[r.gen_range(0..discs.len())];
        let chi = if disc == 1 { DirichletChar::trivial() } else { char_from_kronecker(disc).map_err(|e| e.to_string())? };
        let chi_p = chi.eval(p as i64);
        if chi_p.is_zero() {
            continue;
        }
        let k2 = r.gen_range(6..=30u32);
        let k = r.gen_range(2..=k2 - 2);
        let a = nonzero_alg(&mut r, f);
        let b = random_alg(&mut r, f, 40, 3);
        let h = stub_form("steinberg", p, k, DirichletChar::trivial(), p, a.clone());
        let h2 = stub_form("unramified", 1, k2, chi, p, b.clone());
        let factor = euler_factor(&h, &h2, p).map_err(|e| e.to_string())?;
        let (Ok(lo), Ok(hi)) = (factor.value_at(k2 as i64 - 2), factor.value_at(k2 as i64 - 1)) else {
            continue;
        };
        let st = LocalRep::steinberg(p, a.clone(), 1).map_err(|e| e.to_string())?;
        let ps = LocalRep::unramified_from_hecke(p, &b, &chi_p, k2).map_err(|e| e.to_string())?;
        let c = local_constant(&st, &ps, k, k2).map_err(|e| format!("p={p}: {e}"))?;
        let expected = &lo / &hi;
        if c.value != expected {
            return Err(format!("p={p} k'={k2} a={a} b={b} chi(p)={chi_p}: local {} vs Euler {expected}", c.value));
        }
        done += 1;
    }
    Ok(format!("{done} Euler-factor cases exact"))
}

/// The fixture case at `p = 3`: Steinberg side 3.13.b.a, unramified side the weight-26 form.
pub fn local_constant_fixture_case() -> Outcome {
    let (h13, _) = level_three_pair(10);
    let h26 = weight_26(10);
    let a3 = h13.a(3).clone();
    if a3 != AlgNum::from_int(729) {
        return Err(format!("a(3) of 3.13.b.a is {a3}, expected 729"));
    }
    let st = LocalRep::steinberg(3, a3, 1).map_err(|e| e.to_string())?;
    let ps = LocalRep::unramified_from_hecke(3, h26.a(3), &AlgNum::one(), 26).map_err(|e| e.to_string())?;
    let c = local_constant(&st, &ps, 13, 26).map_err(|e| e.to_string())?;
    let factor = euler_factor(&h13, &h26, 3).map_err(|e| e.to_string())?;
    let expected = &factor.value_at(24).map_err(|e| e.to_string())? / &factor.value_at(25).map_err(|e| e.to_string())?;
    if c.value != expected {
        return Err(format!("fixture p=3: local {} vs Euler {expected}", c.value));
    }
    Ok(format!("fixture p=3 exact ({})", c.value))
}

/// Lower-left entries: `x, y` units or multiples of `p`, `z, w` in `p Z_p` (zero allowed),
/// with unit denominators so they stay in `Z_p`.
fn random_unipotent(r: &mut ChaCha8Rng, p: u64, level: u32) -> PadicMat {
    let pi = p as i64;
    let mut entry = |min_v: u32| -> Rat {
        if r.gen_bool(0.1) {
            return Rat::zero();
        }
        let v = r.gen_range(min_v..=level + 2);
        let mut unit = r.gen_range(1..50i64);
        while unit % pi == 0 {
            unit += 1;
        }
        let mut den = r.gen_range(1..8i64);
        while den % pi == 0 {
            den += 1;
        }
        let sign = if r.gen_bool(0.5) { 1 } else { -1 };
        rat(sign * unit, den) * Rat::from_integer(BigInt::from(p).pow(v))
    };
    let (x, y, z, w) = (entry(0), entry(0), entry(1), entry(1));
    PadicMat::new(p, Mat4::lower_unipotent(x, y, z, w))
}

/// Sampled unipotents: class from the reduction must match the orbit oracle mod `p^level`
/// and the minors classifier, and the witness must re-multiply to the input.
pub fn coset_suite(seed: u64, per_prime: usize) -> Outcome {
    let mut r = rng(seed);
    let mut total = 0;
    let mut hist = std::collections::BTreeMap::new();
    for p in [2u64, 3] {
        let oracles: Vec<OrbitOracle> = (1..=2).map(|n| OrbitOracle::new(p, n)).collect();
        for o in &oracles {
            if !o.representatives_distinct() {
                return Err(format!("orbit oracle p={p} n={}: representatives collide", o.n));
            }
        }
        let splits = [(1u32, 0u32), (0, 1), (1, 1), (2, 0), (0, 2)];
        for _ in 0..per_prime {
            let (n1, n2) = splits[r.gen_range(0..splits.len())];
            let level = n1 + n2;
            let u = random_unipotent(&mut r, p, level);
            let class = reduce_unipotent(&u, n1, n2).map_err(|e| format!("p={p} u={u}: {e}"))?;
            class.verify(&u).map_err(|e| format!("p={p} u={u}: witness {e}"))?;
            let by_orbit = oracles[level as usize - 1].classify(&u);
            let by_minors = double_coset_index(&u, level).map_err(|e| e.to_string())?;
            if by_orbit != Some(class.j) || by_minors != class.j {
                return Err(format!(
                    "p={p} level={level} u={u}: reduction j={}, orbit {:?}, minors {by_minors}",
                    class.j, by_orbit
                ));
            }
            *hist.entry((p, level, class.j)).or_insert(0usize) += 1;
            total += 1;
        }
    }
    Ok(format!("{total} unipotents, classes (p, level, j) -> count {hist:?}"))
}

/// `Lambda(m)/Lambda(m+1)` normalizer: `gamma_ratio(m, k) m (m + 1 - k) = 1` for every admissible pair.
pub fn gamma_ratio_suite() -> Outcome {
    let mut n = 0;
    for k in 1..=40u32 {
        for m in k as i64..k as i64 + 60 {
            let g = gamma_ratio(m, k).map_err(|e| e.to_string())?;
            if g * Rat::from_integer(BigInt::from(m * (m + 1 - k as i64))) != Rat::one() {
                return Err(format!("gamma_ratio({m}, {k})"));
            }
            n += 1;
        }
        if gamma_ratio(k as i64 - 1, k).is_ok() {
            return Err(format!("gamma_ratio({}, {k}) accepted a pole", k - 1));
        }
    }
    Ok(format!("{n} exact identities"))
}

/// Every pair produced by `theorem_ranges` consists of successive critical integers.
pub fn ranges_suite() -> Outcome {
    let mut n = 0;
    for k in 1..=60u32 {
        for k2 in k + 2..=k + 60 {
            let t = theorem_ranges(k, k2).map_err(|e| e.to_string())?;
            let crit = critical_set(k, k2);
            for &(a, b) in t.pairs.iter().chain(&t.left_pairs) {
                if b != a + 1 || !crit.contains(a) || !crit.contains(b) {
                    return Err(format!("(k, k') = ({k}, {k2}): pair ({a}, {b}) leaves [{}, {}]", crit.lo, crit.hi));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs inside the critical sets"))
}

/// Dirichlet coefficients against the Euler product, exactly, for both fixture pairs.
pub fn euler_product_suite(n: usize) -> Outcome {
    let (ha, hb) = level_three_pair(n);
    let h26 = weight_26(n);
    for h in [&ha, &hb] {
        let rs = rs_coefficients(h, &h26, n).map_err(|e| e.to_string())?;
        let ep = euler_product_coefficients(h, &h26, n).map_err(|e| e.to_string())?;
        for i in 1..=n {
            if rs.b[i] != ep[i] {
                return Err(format!("{}: b({i}) = {} but Euler product gives {}", h.label, rs.b[i], ep[i]));
            }
        }
    }
    Ok(format!("coefficients agree to n = {n} for both pairs"))
}

/// Embeds random quadratic elements and recovers them by lattice reduction.
pub fn reconstruction_suite(seed: u64, cases: usize, digits: u32) -> Outcome {
    let mut r = rng(seed);
    let fields = [QuadField::Rational, field_m26(), QuadField::new(5).unwrap(), QuadField::new(-3).unwrap(), QuadField::new(2).unwrap()];
    let cap_digits = digits / 3;
    let cap = BigInt::from(10).pow(cap_digits);
    let bits = Precision::new(digits).bits();
    let tol = BigReal::from_i64(10, bits).powi(-(digits as i64) / 2);
    // generated heights stay well below the cap so the true relation is the short vector
    let gen = 10i64.pow((cap_digits / 3).min(12));
    let mut worst = f64::NEG_INFINITY;
    for i in 0..cases {
        let field = fields[i % fields.len()];
        let den = BigInt::from(r.gen_range(1..=gen));
        let a = BigInt::from(r.gen_range(-gen..=gen));
        let b = if field.is_rational() { BigInt::zero() } else { BigInt::from(r.gen_range(-gen..=gen)) };
        let x = if field.is_rational() {
            AlgNum::rational(Rat::new(a, den))
        } else {
            AlgNum::new(field, Rat::new(a, den.clone()), Rat::new(b, den))
        };
        let got = reconstruct_algebraic(&x.embed(bits), field, &cap, digits).map_err(|e| format!("{x} in {field}: {e}"))?;
        if got.value != x {
            return Err(format!("{x} in {field} came back as {}", got.value));
        }
        if got.residual.abs().cmp_abs(&tol) == std::cmp::Ordering::Greater {
            return Err(format!("{x}: residual {} above 10^-{}", got.residual.to_decimal(6), digits / 2));
        }
        worst = worst.max(got.residual.log10_abs());
    }
    Ok(format!("{cases} round trips, worst residual 10^{worst:.1}"))
}

/// `a(p)` of the weight-13 CM form from `Z[omega]`: `pi^12 + conj(pi)^12` for `p = N(pi)`,
/// zero for inert `p`, `(-3)^6` at the ramified prime.
pub fn cm_coefficient(p: u64) -> BigInt {
    if p == 3 {
        return BigInt::from(729);
    }
    if p % 3 == 2 {
        return BigInt::zero();
    }
    // p = a^2 - a b + b^2 with pi = a + b omega, omega^2 = -1 - omega
    let s = (p as f64).sqrt() as i64 + 2;
    for a in -s..=s {
        for b in -s..=s {
            if a * a - a * b + b * b == p as i64 {
                let mul = |x: (BigInt, BigInt), y: (BigInt, BigInt)| {
                    let bb = &x.1 * &y.1;
                    (&x.0 * &y.0 - &bb, &x.0 * &y.1 + &x.1 * &y.0 - &bb)
                };
                let mut acc = (BigInt::one(), BigInt::zero());
                for _ in 0..12 {
                    acc = mul(acc, (BigInt::from(a), BigInt::from(b)));
                }
                // trace of c + d omega is 2c - d
                return BigInt::from(2) * &acc.0 - &acc.1;
            }
        }
    }
    unreachable!("p = 1 mod 3 is a norm from Z[omega]")
}

/// `v(a(n, h') - a(n, h''))` at the ramified prime above 13 for `n <= bound`, computed here.
pub fn coefficient_congruence(bound: usize) -> Outcome {
    let (ha, hb) = level_three_pair(bound);
    let p = ramified_13();
    for n in 1..=bound {
        let d = ha.a(n) - hb.a(n);
        // P^2 = (13) so v_P(d) = 2 v_13(N(d)) / 2 = v_13(N(d)) for the ramified prime
        let norm = d.norm();
        let v_norm = if norm.is_zero() { i64::MAX } else { rscong::exactnum::vl_rat(&norm, 13) };
        if v_norm < 1 || valuation(&d, &p) < 1 {
            return Err(format!("n = {n}: a(n) differ by {d} (v_13(N) = {v_norm})"));
        }
    }
    Ok(format!("a(n, h') = a(n, h'') mod P for n <= {bound}"))
}
