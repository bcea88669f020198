//! Exact local computation at a prime `p` dividing exactly one level: local
//! representation data, the geometric-series factors produced by the unipotent
//! integral, and the local constant `c'_p` of the intertwining operator.
//!
//! Half-integral powers of `p` are carried as a symbolic exponent on `sqrt(p)`;
//! a value leaves that representation only when the exponent is even.

use crate::coset::{double_coset_index, kostant_reps, IdentityReport, Mat4, PadicMat};
use crate::exactnum::{rat, vl_rat, AlgNum, ExactError, Rat};
use crate::rankin::{mixed_local_poly, pow_rat, LocalFactorGlobal, RankinError};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error("geometric series diverges: 1 - p^-2 X vanishes at p = {p}")]
    ConvergenceViolation { p: u64 },
    #[error("unsupported local data: {0}")]
    Unsupported(String),
    #[error("odd power {0}/2 of p cannot be expressed in the coefficient field")]
    OddHalfPower(i64),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Rankin(#[from] RankinError),
}

/// `c * p^{half_exp / 2}` with `c` in the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct SqrtPVal {
    pub p: u64,
    pub c: AlgNum,
    pub half_exp: i64,
}

impl SqrtPVal {
    pub fn new(p: u64, c: AlgNum, half_exp: i64) -> Self {
        SqrtPVal { p, c, half_exp }
    }

    pub fn mul(&self, o: &SqrtPVal) -> SqrtPVal {
        SqrtPVal { p: self.p, c: &self.c * &o.c, half_exp: self.half_exp + o.half_exp }
    }

    pub fn complex_conj(&self) -> SqrtPVal {
        SqrtPVal { p: self.p, c: self.c.complex_conj(), half_exp: self.half_exp }
    }

    /// Total degree in `sqrt(p)`.
    pub fn sqrt_p_degree(&self) -> i64 {
        self.half_exp
    }

    /// The value as a field element; fails on an odd `sqrt(p)` degree.
    pub fn to_field(&self) -> Result<AlgNum, LocalError> {
        if self.half_exp % 2 != 0 {
            return Err(LocalError::OddHalfPower(self.half_exp));
        }
        Ok(self.c.scale(&pow_rat(self.p, self.half_exp / 2)))
    }
}

/// Local component at `p`.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalRep {
    /// Unramified twist of Steinberg; `chi_p_at_p = a(p, h)`.
    SteinbergTwist { p: u64, chi_p_at_p: AlgNum },
    /// Unramified principal series with `chi'_1(p) + chi'_2(p) = trace`
    /// (`a(p, h'^rho) p^{-1/2}`) and `chi'_1(p) chi'_2(p) = det` (`p^{k'-2} chi'^{-1}(p)`).
    UnramifiedPs { p: u64, trace: SqrtPVal, det: AlgNum },
}

impl LocalRep {
    /// Steinberg-type component; requires conductor exponent `n_p = 1`.
    pub fn steinberg(p: u64, a_p: AlgNum, n_p: u32) -> Result<Self, LocalError> {
        if n_p != 1 {
            return Err(LocalError::Unsupported(format!("Steinberg component needs n_p = 1, got {n_p}")));
        }
        Ok(LocalRep::SteinbergTwist { p, chi_p_at_p: a_p })
    }

    /// Unramified component from `a(p, h'^rho)` and `chi'_1 chi'_2 (p)`; requires `n_p = 0`.
    pub fn unramified(p: u64, a_rho: AlgNum, det: AlgNum, n_p: u32) -> Result<Self, LocalError> {
        if n_p != 0 {
            return Err(LocalError::Unsupported(format!("unramified component needs n_p = 0, got {n_p}")));
        }
        Ok(LocalRep::UnramifiedPs { p, trace: SqrtPVal::new(p, a_rho, -1), det })
    }

    /// Unramified component from the Hecke data `a(p, h')` and `chi'(p)` of a weight `k'` form.
    pub fn unramified_from_hecke(p: u64, a_p: &AlgNum, chi_at_p: &AlgNum, k2: u32) -> Result<Self, LocalError> {
        let det = chi_at_p.inv()?.scale(&pow_rat(p, k2 as i64 - 2));
        Self::unramified(p, a_p.complex_conj(), det, 0)
    }

    pub fn p(&self) -> u64 {
        match self {
            LocalRep::SteinbergTwist { p, .. } | LocalRep::UnramifiedPs { p, .. } => *p,
        }
    }
}

/// Values that normalize the new vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum NewVectorData {
    /// Iwahori-fixed new vector: value 1 at the identity and `-1/p` at the Weyl element.
    Steinberg { at_identity: String, at_w: String },
    /// Spherical vector: `f(t u k) = |t_1 / t_2|^{1/2} chi'_1(t_1) chi'_2(t_2) f(1)`.
    Spherical { modulus_exponents: [String; 2], character_slots: [u8; 2] },
}

pub fn new_vector_data(rep: &LocalRep) -> NewVectorData {
    match rep {
        LocalRep::SteinbergTwist { p, .. } => NewVectorData::Steinberg {
            at_identity: Rat::one().to_string(),
            at_w: (-rat(1, *p as i64)).to_string(),
        },
        LocalRep::UnramifiedPs { .. } => NewVectorData::Spherical {
            modulus_exponents: [rat(1, 2).to_string(), rat(-1, 2).to_string()],
            character_slots: [1, 2],
        },
    }
}

/// One factor `1 + sum_{M >= 1} ((p-1)/p) (p^-2 X)^M` in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomFactor {
    pub p: u64,
    pub x: SqrtPVal,
    pub value: AlgNum,
}

/// `1 - c X` as a field element.
fn one_minus(c: &Rat, x: &AlgNum) -> AlgNum {
    &AlgNum::one() - &x.scale(c)
}

/// Closed form `(1 - p^-3 X) / (1 - p^-2 X)` of the geometric series.
pub fn geometric_factor(x: &SqrtPVal) -> Result<GeomFactor, LocalError> {
    let p = x.p;
    let xv = x.to_field()?;
    let den = one_minus(&pow_rat(p, -2), &xv);
    if den.is_zero() {
        return Err(LocalError::ConvergenceViolation { p });
    }
    let value = &one_minus(&pow_rat(p, -3), &xv) / &den;
    Ok(GeomFactor { p, x: x.clone(), value })
}

/// The printed closed form `(1 - p^-1 X) / (1 - p^-2 X)`, kept for comparison with the summed series.
pub fn printed_geometric_form(x: &SqrtPVal) -> Result<AlgNum, LocalError> {
    let p = x.p;
    let xv = x.to_field()?;
    let den = one_minus(&pow_rat(p, -2), &xv);
    if den.is_zero() {
        return Err(LocalError::ConvergenceViolation { p });
    }
    Ok(&one_minus(&pow_rat(p, -1), &xv) / &den)
}

/// Partial sum `1 + sum_{M=1}^{terms} ((p-1)/p) (p^-2 X)^M`, term by term.
pub fn geometric_series_partial(x: &SqrtPVal, terms: u32) -> Result<AlgNum, LocalError> {
    let p = x.p;
    let y = x.to_field()?.scale(&pow_rat(p, -2));
    let w = rat(p as i64 - 1, p as i64);
    let mut acc = AlgNum::one();
    let mut yy = AlgNum::one();
    for _ in 0..terms {
        yy = &yy * &y;
        acc = &acc + &yy.scale(&w);
    }
    Ok(acc)
}

/// Geometric-series variable `X_i = chi_p(p) beta_i p^{4-k'}` for a Hecke root `beta_i` of the unramified side.
pub fn series_variable(st: &LocalRep, beta: &AlgNum, k2: u32) -> Result<SqrtPVal, LocalError> {
    let LocalRep::SteinbergTwist { p, chi_p_at_p } = st else {
        return Err(LocalError::Unsupported("first argument must be the Steinberg component".into()));
    };
    Ok(SqrtPVal::new(*p, chi_p_at_p * beta, 2 * (4 - k2 as i64)))
}

/// Which side carries the Steinberg component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Steinberg at `p | N`, the case evaluated in full.
    SteinbergAtN,
    /// Steinberg at `p | N'`, obtained by swapping the arguments; an extrapolation.
    MirroredExtrapolation,
}

/// Exact `c'_p` with its numerator and denominator polynomials evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalConstant {
    pub p: u64,
    pub value: AlgNum,
    pub numerator: AlgNum,
    pub denominator: AlgNum,
    pub orientation: Orientation,
}

/// `(b, d)` = trace and determinant of the Hecke polynomial of the unramified side.
fn hecke_symmetric_functions(ps: &LocalRep) -> Result<(u64, AlgNum, AlgNum), LocalError> {
    let LocalRep::UnramifiedPs { p, trace, det } = ps else {
        return Err(LocalError::Unsupported("second argument must be the unramified component".into()));
    };
    let sqrt_p = SqrtPVal::new(*p, AlgNum::one(), 1);
    let b = trace.mul(&sqrt_p).complex_conj().to_field()?;
    let d = det.complex_conj().scale(&Rat::from_integer((*p).into()));
    Ok((*p, b, d))
}

/// `c'_p = prod_i (1 - p^-3 X_i) / (1 - p^-2 X_i)` expanded through the symmetric
/// functions `s_1 = X_1 + X_2`, `s_2 = X_1 X_2`, so no Hecke root is needed.
pub fn local_constant(st: &LocalRep, ps: &LocalRep, k: u32, k2: u32) -> Result<LocalConstant, LocalError> {
    let LocalRep::SteinbergTwist { p, chi_p_at_p: a } = st else {
        return Err(LocalError::Unsupported("first argument must be the Steinberg component".into()));
    };
    let (p2, b, d) = hecke_symmetric_functions(ps)?;
    if *p != p2 {
        return Err(LocalError::Unsupported(format!("components at different primes {p} and {p2}")));
    }
    if k2 < k {
        return Err(LocalError::Unsupported(format!("weights must satisfy k <= k', got ({k}, {k2})")));
    }
    let p = *p;
    let e = 4 - k2 as i64;
    let s1 = (a * &b).scale(&pow_rat(p, e));
    let s2 = (&(a * a) * &d).scale(&pow_rat(p, 2 * e));
    let numerator = &(&AlgNum::one() - &s1.scale(&pow_rat(p, -3))) + &s2.scale(&pow_rat(p, -6));
    let denominator = &(&AlgNum::one() - &s1.scale(&pow_rat(p, -2))) + &s2.scale(&pow_rat(p, -4));
    if denominator.is_zero() {
        return Err(LocalError::ConvergenceViolation { p });
    }
    let value = &numerator / &denominator;
    Ok(LocalConstant { p, value, numerator, denominator, orientation: Orientation::SteinbergAtN })
}

/// Mirrored orientation (Steinberg on the `N'` side): same formula, flagged as an extrapolation.
pub fn local_constant_mirrored(st: &LocalRep, ps: &LocalRep, k: u32, k2: u32) -> Result<LocalConstant, LocalError> {
    let mut c = local_constant(st, ps, k, k2)?;
    c.orientation = Orientation::MirroredExtrapolation;
    Ok(c)
}

/// Product of the two geometric factors for explicit Hecke roots `beta_1, beta_2`.
pub fn local_constant_from_roots(st: &LocalRep, betas: [&AlgNum; 2], k2: u32) -> Result<AlgNum, LocalError> {
    let f1 = geometric_factor(&series_variable(st, betas[0], k2)?)?;
    let f2 = geometric_factor(&series_variable(st, betas[1], k2)?)?;
    Ok(&f1.value * &f2.value)
}

/// Local Euler factor `1 - a b t + a^2 d t^2` assembled from the local data.
pub fn local_euler_factor(st: &LocalRep, ps: &LocalRep) -> Result<LocalFactorGlobal, LocalError> {
    let LocalRep::SteinbergTwist { chi_p_at_p: a, .. } = st else {
        return Err(LocalError::Unsupported("first argument must be the Steinberg component".into()));
    };
    let (p, b, d) = hecke_symmetric_functions(ps)?;
    Ok(mixed_local_poly(p, a, &b, &d))
}

/// `L_p(k'-2) / L_p(k'-1)` from a local Euler factor.
pub fn l_ratio(factor: &LocalFactorGlobal, k2: u32) -> Result<AlgNum, LocalError> {
    let num = factor.value_at(k2 as i64 - 2)?;
    let den = factor.value_at(k2 as i64 - 1)?;
    Ok(&num / &den)
}

/// Result of the support and membership audit of the unipotent integral.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub checks: IdentityReport,
    pub samples: usize,
    /// Both sub-branches of the `w_0`-twisted `x_2` integral avoid the support.
    pub w0_twisted_branch_zero: bool,
    /// Double-coset index carrying the support of the section.
    pub support_index: u32,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.checks.all_hold() && self.w0_twisted_branch_zero
    }
}

fn rows(p: u64, r: [[Rat; 4]; 4]) -> PadicMat {
    PadicMat::new(p, Mat4(r))
}

/// Upper block unipotent with upper-right block `(x1 x2; x3 x4)`.
fn upper(p: u64, x1: &Rat, x2: &Rat, x3: &Rat, x4: &Rat) -> PadicMat {
    let mut m = Mat4::<Rat>::identity();
    m.0[0][2] = x1.clone();
    m.0[0][3] = x2.clone();
    m.0[1][2] = x3.clone();
    m.0[1][3] = x4.clone();
    PadicMat::new(p, m)
}

fn r(n: i64) -> Rat {
    rat(n, 1)
}

/// Sample values `u p^v` for `v` in `-3..=3` and a few units `u`.
fn samples(p: u64) -> Vec<Rat> {
    let pi = p as i64;
    let units = [r(1), r(-1), r(pi + 1), rat(pi + 1, 2 * pi + 1)];
    let mut out = Vec::new();
    for v in -3..=3 {
        for u in &units {
            out.push(u * pow_rat(p, v));
        }
    }
    out
}

/// Checks every membership claim and factorization of the unipotent integral at sampled
/// points, with `n_p = 1`, `n'_p = 0` (level 1), and confirms that the vanishing branches
/// land outside the supporting double coset (the one containing `w_0^{-1}`).
pub fn vanishing_checks() -> VanishingReport {
    let level = 1;
    let mut rep = IdentityReport { checks: Vec::new() };
    let mut count = 0;
    let mut twisted_zero = true;
    let mut support_index = 0;
    for p in [2u64, 3, 5] {
        let w0 = kostant_reps(p)[5].clone();
        let w0i = w0.inverse().expect("permutation");
        let support = double_coset_index(&w0i, level).expect("invertible");
        support_index = support;
        let z = Rat::zero();
        let one = r(1);
        for x in samples(p) {
            count += 1;
            let v = vl_rat(&x, p);
            let xi = Rat::one() / &x;
            let tag = |s: &str| format!("p={p} x={x} v={v}: {s}");

            // eliminate x3
            if v >= 0 {
                let e = PadicMat::new(p, Mat4::elementary(1, 2, x.clone()));
                rep.push(&tag("x3 >= 0: elementary matrix in K"), e.in_mirahoric(level), "");
            } else {
                let (x1, x2, x4) = (r(2), rat(1, 3), r(5));
                let lhs = w0i.mul(&upper(p, &x1, &x2, &x, &x4));
                let l = PadicMat::new(p, Mat4::lower_unipotent(x1.clone(), x2.clone(), z.clone(), x4.clone()));
                let b = rows(p, [
                    [z.clone(), z.clone(), one.clone(), z.clone()],
                    [z.clone(), z.clone(), z.clone(), one.clone()],
                    [one.clone(), z.clone(), z.clone(), z.clone()],
                    [z.clone(), one.clone(), x.clone(), z.clone()],
                ]);
                rep.push(&tag("x3 < 0: w0^-1 u = lower * b"), lhs == l.mul(&b), "");
                let u = PadicMat::new(p, Mat4::elementary(0, 3, xi.clone()));
                let t = PadicMat::new(p, Mat4::diag([xi.clone(), one.clone(), one.clone(), x.clone()]));
                let s = PadicMat::new(p, Mat4::perm_rows([0, 3, 2, 1]));
                let m3 = rows(p, [
                    [z.clone(), -one.clone(), z.clone(), z.clone()],
                    [z.clone(), xi.clone(), one.clone(), z.clone()],
                    [one.clone(), z.clone(), z.clone(), z.clone()],
                    [z.clone(), z.clone(), z.clone(), one.clone()],
                ]);
                rep.push(&tag("x3 < 0: b = u(x3) t(x3) s m"), b == u.mul(&t).mul(&s).mul(&m3), "");
                rep.push(&tag("x3 < 0: m in K"), m3.in_mirahoric(level), "");
                rep.push(&tag("x3 < 0: u(x3), t(x3) in P"), u.in_parabolic() && t.in_parabolic(), "");
                let l0 = w0i.mul(&upper(p, &x1, &x2, &z, &x4)).mul(&w0);
                rep.push(&tag("x3 < 0: lower = w0^-1 u' w0"), l0 == l, "");
                let ws = w0.mul(&s);
                let k = PadicMat::new(p, Mat4::perm_rows([2, 1, 0, 3]));
                rep.push(&tag("x3 < 0: w0 s in K"), ws == k && k.in_mirahoric(level), "");
            }

            // x2 integral twisted by w0
            let ux2 = upper(p, &z, &x, &z, &z);
            let g = w0i.mul(&ux2).mul(&w0);
            let idx = double_coset_index(&g, level).expect("invertible");
            if v >= 0 {
                let e = PadicMat::new(p, Mat4::elementary(2, 1, x.clone()));
                rep.push(&tag("twisted x2 >= 0: conjugate is elementary"), g == e, "");
                rep.push(&tag("twisted x2 >= 0: elementary in K"), e.in_mirahoric(level), "");
            } else {
                let printed = rows(p, [
                    [z.clone(), z.clone(), one.clone(), z.clone()],
                    [z.clone(), z.clone(), z.clone(), one.clone()],
                    [one.clone(), z.clone(), z.clone(), x.clone()],
                    [z.clone(), one.clone(), z.clone(), z.clone()],
                ]);
                rep.push(&tag("twisted x2 < 0: w0^-1 u form"), w0i.mul(&ux2) == printed, "");
                let m2 = rows(p, [
                    [one.clone(), z.clone(), z.clone(), z.clone()],
                    [z.clone(), z.clone(), -one.clone(), z.clone()],
                    [z.clone(), one.clone(), xi.clone(), z.clone()],
                    [z.clone(), z.clone(), z.clone(), one.clone()],
                ]);
                rep.push(&tag("twisted x2 < 0: m in K"), m2.in_mirahoric(level), "");
                let left = g.mul(&m2.inverse().expect("unit determinant"));
                rep.push(&tag("twisted x2 < 0: g m^-1 in P"), left.in_parabolic(), format!("g m^-1 = {left}"));
            }
            if idx == support {
                twisted_zero = false;
            }
            rep.push(&tag("twisted x2: outside the support"), idx != support, format!("index {idx}, support {support}"));

            // x2 integral without the twist
            let h = w0i.mul(&ux2);
            let hidx = double_coset_index(&h, level).expect("invertible");
            if v >= 0 {
                rep.push(&tag("x2 >= 0: u in K"), ux2.in_mirahoric(level), "");
                rep.push(&tag("x2 >= 0: inside the support"), hidx == support, format!("index {hidx}"));
            } else {
                let u = PadicMat::new(p, Mat4::elementary(1, 2, xi.clone()));
                let t = PadicMat::new(p, Mat4::diag([one.clone(), xi.clone(), x.clone(), one.clone()]));
                let s = PadicMat::new(p, Mat4::perm_rows([1, 0, 3, 2]));
                let m5 = rows(p, [
                    [-one.clone(), z.clone(), z.clone(), z.clone()],
                    [z.clone(), z.clone(), one.clone(), z.clone()],
                    [z.clone(), one.clone(), z.clone(), z.clone()],
                    [xi.clone(), z.clone(), z.clone(), one.clone()],
                ]);
                rep.push(&tag("x2 < 0: w0^-1 u = u t s m"), h == u.mul(&t).mul(&s).mul(&m5), "");
                rep.push(&tag("x2 < 0: u t s in P"), u.mul(&t).mul(&s).in_parabolic(), "");
                rep.push(&tag("x2 < 0: m in K"), m5.in_mirahoric(level), "");
                rep.push(&tag("x2 < 0: outside the support"), hidx != support, format!("index {hidx}"));
            }
        }
        rep.push(&format!("p={p}: w0^-1 carries the support"), support == 0, format!("index {support}"));
    }
    VanishingReport { checks: rep, samples: count, w0_twisted_branch_zero: twisted_zero, support_index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QuadField;

    fn q(n: i64, d: i64) -> AlgNum {
        AlgNum::rational(rat(n, d))
    }

    #[test]
    fn zero_variable_gives_one() {
        let g = geometric_factor(&SqrtPVal::new(7, AlgNum::zero(), 0)).unwrap();
        assert!(g.value.is_one());
    }

    #[test]
    fn summed_series_closed_form() {
        let x = SqrtPVal::new(5, q(1, 1), 0);
        assert_eq!(geometric_factor(&x).unwrap().value, q(31, 30));
        assert_eq!(printed_geometric_form(&x).unwrap(), q(5, 6));
        // partial sums approach the closed form geometrically
        let exact = geometric_factor(&x).unwrap().value;
        let partial = geometric_series_partial(&x, 40).unwrap();
        let gap = (&exact - &partial).a;
        assert!(gap > Rat::zero() && gap < rat(1, 10i64.pow(15)));
    }

    #[test]
    fn divergence_is_reported() {
        let x = SqrtPVal::new(3, q(9, 1), 0);
        assert_eq!(geometric_factor(&x), Err(LocalError::ConvergenceViolation { p: 3 }));
    }

    #[test]
    fn odd_half_power_rejected() {
        let x = SqrtPVal::new(3, q(1, 1), 1);
        assert_eq!(x.to_field(), Err(LocalError::OddHalfPower(1)));
        assert_eq!(x.mul(&x).to_field().unwrap(), q(3, 1));
    }

    #[test]
    fn new_vectors() {
        let st = LocalRep::steinberg(5, q(1, 1), 1).unwrap();
        assert_eq!(
            new_vector_data(&st),
            NewVectorData::Steinberg { at_identity: "1".into(), at_w: "-1/5".into() }
        );
        assert!(LocalRep::steinberg(5, q(1, 1), 0).is_err());
        assert!(LocalRep::unramified(5, q(1, 1), q(1, 1), 1).is_err());
    }

    #[test]
    fn degenerate_steinberg_gives_one() {
        let st = LocalRep::steinberg(3, AlgNum::zero(), 1).unwrap();
        let ps = LocalRep::unramified(3, q(7, 1), q(11, 1), 0).unwrap();
        assert!(local_constant(&st, &ps, 12, 24).unwrap().value.is_one());
    }

    #[test]
    fn three_routes_agree_in_quadratic_field() {
        let f = QuadField::new(-26).unwrap();
        let p = 7;
        let k2 = 14;
        let st = LocalRep::steinberg(p, AlgNum::new(f, rat(3, 1), rat(1, 2)), 1).unwrap();
        let b1 = AlgNum::new(f, rat(5, 1), rat(-2, 1));
        let b2 = AlgNum::new(f, rat(-1, 3), rat(4, 1));
        let trace = (&b1 + &b2).complex_conj().scale(&rat(1, 1));
        let det = (&b1 * &b2).complex_conj().scale(&rat(1, p as i64));
        let ps = LocalRep::unramified(p, trace, det, 0).unwrap();
        let c = local_constant(&st, &ps, 10, k2).unwrap();
        assert_eq!(c.value, local_constant_from_roots(&st, [&b1, &b2], k2).unwrap());
        assert_eq!(c.value, l_ratio(&local_euler_factor(&st, &ps).unwrap(), k2).unwrap());
    }

    #[test]
    fn vanishing_audit_passes() {
        let r = vanishing_checks();
        for f in r.checks.failures() {
            panic!("{}: {}", f.name, f.detail);
        }
        assert!(r.passed());
        assert_eq!(r.support_index, 0);
    }
}
