//! Double cosets `P(Q_p) \ GL_4(Q_p) / K_p^n` for the (2,2) parabolic `P` and
//! the mirahoric subgroup `K_p^n` (last row congruent to `(0,0,0,1)` mod `p^n`).
//!
//! Elements of `Q_p` are exact rationals with a fixed prime; every membership
//! predicate is decided from entry valuations. Reductions return a witness
//! factorization that is re-verified by exact multiplication.

use crate::exactnum::{inv_mod, rat_mod, vl_rat, Rat, VAL_INFINITY};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosetError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("level index {i} outside 0..={level}")]
    OutOfRange { i: u32, level: u32 },
    #[error("singular matrix")]
    Singular,
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
}

/// Ring operations needed for 4x4 matrix products.
pub trait Entry: Clone + PartialEq {
    fn zero_el() -> Self;
    fn one_el() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_el(&self) -> bool;
}

impl Entry for Rat {
    fn zero_el() -> Self {
        Zero::zero()
    }
    fn one_el() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero_el(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Number of formal variables available to [`Laurent`].
pub const NVARS: usize = 20;

/// Laurent polynomial with rational coefficients in up to [`NVARS`] variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent(BTreeMap<[i8; NVARS], Rat>);

impl Laurent {
    pub fn constant(c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(&c) {
            m.insert([0; NVARS], c);
        }
        Laurent(m)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(n)))
    }

    /// The monomial `x_i^e`.
    pub fn var_pow(i: usize, e: i8) -> Self {
        let mut k = [0; NVARS];
        k[i] = e;
        Laurent(BTreeMap::from([(k, Rat::one())]))
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    /// Inverse of a single monomial; `None` otherwise.
    pub fn monomial_inv(&self) -> Option<Self> {
        if self.0.len() != 1 {
            return None;
        }
        let (k, c) = self.0.iter().next()?;
        let mut ki = *k;
        for e in ki.iter_mut() {
            *e = -*e;
        }
        Some(Laurent(BTreeMap::from([(ki, Rat::one() / c)])))
    }

    /// Evaluates at rational points (zero variables must not appear with negative exponent).
    pub fn eval(&self, at: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in &self.0 {
            let mut t = c.clone();
            for (i, &e) in k.iter().enumerate() {
                if e != 0 {
                    t *= pow_i(&at[i], e as i64);
                }
            }
            acc += t;
        }
        acc
    }
}

fn pow_i(x: &Rat, e: i64) -> Rat {
    let mut r = Rat::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        Rat::one() / r
    } else {
        r
    }
}

impl Entry for Laurent {
    fn zero_el() -> Self {
        Laurent::default()
    }
    fn one_el() -> Self {
        Laurent::int(1)
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(Rat::zero);
            *e += c;
            if Zero::is_zero(e) {
                m.remove(k);
            }
        }
        Laurent(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<[i8; NVARS], Rat> = BTreeMap::new();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                let mut k = *k1;
                for i in 0..NVARS {
                    k[i] += k2[i];
                }
                let e = m.entry(k).or_insert_with(Rat::zero);
                *e += c1 * c2;
                if Zero::is_zero(e) {
                    m.remove(&k);
                }
            }
        }
        Laurent(m)
    }
    fn neg(&self) -> Self {
        Laurent(self.0.iter().map(|(k, c)| (*k, -c.clone())).collect())
    }
    fn is_zero_el(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dense 4x4 matrix; indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Entry> Mat4<T> {
    pub fn identity() -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one_el() } else { T::zero_el() })))
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat4::from_fn(|i, j| (0..4).fold(T::zero_el(), |acc, l| acc.add(&self.0[i][l].mul(&o.0[l][j]))))
    }

    /// Identity plus `c` at `(i, j)`.
    pub fn elementary(i: usize, j: usize, c: T) -> Self {
        let mut m = Self::identity();
        m.0[i][j] = m.0[i][j].add(&c);
        m
    }

    pub fn diag(d: [T; 4]) -> Self {
        let mut m = Self::identity();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    /// Permutation matrix with a one at `(i, sigma[i])` in each row.
    pub fn perm_rows(sigma: [usize; 4]) -> Self {
        Mat4::from_fn(|i, j| if sigma[i] == j { T::one_el() } else { T::zero_el() })
    }

    /// Lower-left block unipotent with `(x, y; z, w)` in rows 3-4, columns 1-2.
    pub fn lower_unipotent(x: T, y: T, z: T, w: T) -> Self {
        let mut m = Self::identity();
        m.0[2][0] = x;
        m.0[2][1] = y;
        m.0[3][0] = z;
        m.0[3][1] = w;
        m
    }

    fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.0[i][j].is_zero_el()))
    }

    /// Inverse of `1 + N` with `N` strictly triangular, via `1 - N + N^2 - N^3`.
    fn unipotent_inverse(&self) -> Option<Self> {
        let one = Self::identity();
        let nil = Mat4::from_fn(|i, j| self.0[i][j].add(&one.0[i][j].neg()));
        let strictly_upper = (0..4).all(|i| (0..=i).all(|j| nil.0[i][j].is_zero_el()));
        let strictly_lower = (0..4).all(|i| (i..4).all(|j| nil.0[i][j].is_zero_el()));
        if !strictly_upper && !strictly_lower {
            return None;
        }
        let mut term = one.clone();
        let mut acc = one;
        for k in 1..4 {
            term = term.mul(&nil);
            let sign_term = if k % 2 == 1 { Mat4::from_fn(|i, j| term.0[i][j].neg()) } else { term.clone() };
            acc = Mat4::from_fn(|i, j| acc.0[i][j].add(&sign_term.0[i][j]));
        }
        Some(acc)
    }
}

impl Mat4<Laurent> {
    /// Inverse of a unitriangular or monomial-diagonal symbolic matrix.
    pub fn structured_inverse(&self) -> Option<Self> {
        if self.is_diagonal() {
            let d: Option<Vec<Laurent>> = (0..4).map(|i| self.0[i][i].monomial_inv()).collect();
            let d = d?;
            return Some(Mat4::diag([d[0].clone(), d[1].clone(), d[2].clone(), d[3].clone()]));
        }
        self.unipotent_inverse()
    }

    /// Substitutes rational values for the variables.
    pub fn eval(&self, at: &[Rat]) -> Mat4<Rat> {
        Mat4::from_fn(|i, j| self.0[i][j].eval(at))
    }
}

impl Mat4<Rat> {
    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Mat4::from_fn(|i, j| Rat::from_integer(BigInt::from(rows[i][j])))
    }

    pub fn det(&self) -> Rat {
        let mut a = self.0.clone();
        let mut det = Rat::one();
        for c in 0..4 {
            let Some(p) = (c..4).find(|&r| !Zero::is_zero(&a[r][c])) else { return Rat::zero() };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..4 {
                let f = &a[r][c] / &a[c][c];
                for k in c..4 {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, CosetError> {
        let mut a = self.0.clone();
        let mut inv = Mat4::<Rat>::identity().0;
        for c in 0..4 {
            let p = (c..4).find(|&r| !Zero::is_zero(&a[r][c])).ok_or(CosetError::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let d = Rat::one() / &a[c][c];
            for k in 0..4 {
                a[c][k] *= &d;
                inv[c][k] *= &d;
            }
            for r in 0..4 {
                if r != c && !Zero::is_zero(&a[r][c]) {
                    let f = a[r][c].clone();
                    for k in 0..4 {
                        let t1 = &f * &a[c][k];
                        a[r][k] -= t1;
                        let t2 = &f * &inv[c][k];
                        inv[r][k] -= t2;
                    }
                }
            }
        }
        Ok(Mat4(inv))
    }
}

/// Element of `GL_4(Q_p)` (or `M_4(Q_p)`) with a distinguished prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicMat {
    pub p: u64,
    pub m: Mat4<Rat>,
}

/// Membership in `K_p(n) = { g in GL_2(Z_p) : g = (* *; 0 1) mod p^n }`.
pub fn in_gl2_level(g: &[[Rat; 2]; 2], p: u64, n: u32) -> bool {
    let integral = g.iter().flatten().all(|x| vl_rat(x, p) >= 0);
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    if !integral || vl_rat(&det, p) != 0 {
        return false;
    }
    n == 0 || (vl_rat(&g[1][0], p) >= n as i64 && vl_rat(&(&g[1][1] - Rat::one()), p) >= n as i64)
}

impl PadicMat {
    pub fn new(p: u64, m: Mat4<Rat>) -> Self {
        PadicMat { p, m }
    }

    pub fn identity(p: u64) -> Self {
        PadicMat { p, m: Mat4::identity() }
    }

    pub fn mul(&self, o: &PadicMat) -> PadicMat {
        PadicMat { p: self.p, m: self.m.mul(&o.m) }
    }

    pub fn inverse(&self) -> Result<PadicMat, CosetError> {
        Ok(PadicMat { p: self.p, m: self.m.inverse()? })
    }

    pub fn det(&self) -> Rat {
        self.m.det()
    }

    pub fn v(&self, i: usize, j: usize) -> i64 {
        vl_rat(&self.m.0[i][j], self.p)
    }

    pub fn in_gl4_zp(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.v(i, j) >= 0)) && vl_rat(&self.det(), self.p) == 0
    }

    /// Iwahori subgroup: integral, unit determinant, entries below the diagonal in `pZ_p`.
    pub fn in_iwahori(&self) -> bool {
        self.in_gl4_zp() && (0..4).all(|i| (0..i).all(|j| self.v(i, j) >= 1))
    }

    /// Mirahoric `K_p^n`: last row congruent to `(0, 0, 0, 1)` mod `p^n`.
    pub fn in_mirahoric(&self, n: u32) -> bool {
        if !self.in_gl4_zp() {
            return false;
        }
        let n = n as i64;
        n == 0 || ((0..3).all(|j| self.v(3, j) >= n) && vl_rat(&(&self.m.0[3][3] - Rat::one()), self.p) >= n)
    }

    /// `P(Q_p)`: invertible with vanishing lower-left 2x2 block.
    pub fn in_parabolic(&self) -> bool {
        [(2, 0), (2, 1), (3, 0), (3, 1)].iter().all(|&(i, j)| Zero::is_zero(&self.m.0[i][j])) && !Zero::is_zero(&self.det())
    }

    /// `U_P^-(Z_p)`: identity diagonal blocks, zero upper-right block, integral lower-left block.
    pub fn in_unipotent_minus_zp(&self) -> bool {
        let id = Mat4::<Rat>::identity();
        for i in 0..4 {
            for j in 0..4 {
                let lower_left = i >= 2 && j < 2;
                if lower_left {
                    if self.v(i, j) < 0 {
                        return false;
                    }
                } else if self.m.0[i][j] != id.0[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// Levi projection `kappa_P`: the diagonal 2x2 blocks of an element of `P`.
    pub fn levi_blocks(&self) -> Option<([[Rat; 2]; 2], [[Rat; 2]; 2])> {
        if !self.in_parabolic() {
            return None;
        }
        let b = |o: usize| std::array::from_fn(|i| std::array::from_fn(|j| self.m.0[o + i][o + j].clone()));
        Some((b(0), b(2)))
    }

    /// Lower-left block `(x, y; z, w)` of a block-unipotent element.
    pub fn lower_entries(&self) -> [Rat; 4] {
        [self.m.0[2][0].clone(), self.m.0[2][1].clone(), self.m.0[3][0].clone(), self.m.0[3][1].clone()]
    }
}

impl fmt::Display for PadicMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.m.0.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Serialize for PadicMat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.m.0.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// `xi_p^{(j)}`: identity with `p^j` at position (4,2).
pub fn xi(p: u64, j: u32) -> PadicMat {
    let pj = Rat::from_integer(BigInt::from(p).pow(j));
    PadicMat::new(p, Mat4::elementary(3, 1, pj))
}

/// Kostant representatives `w_1, ..., w_6` of `W_{M_P} \ W_4`, in the listed order.
pub fn kostant_reps(p: u64) -> Vec<PadicMat> {
    [[0, 1, 2, 3], [0, 2, 1, 3], [1, 2, 0, 3], [0, 3, 1, 2], [1, 3, 0, 2], [2, 3, 0, 1]]
        .into_iter()
        .map(|s| PadicMat::new(p, Mat4::perm_rows(s)))
        .collect()
}

/// Column images of a permutation matrix: `w e_j = e_{sigma(j)}`.
fn perm_of(w: &PadicMat) -> Option<[usize; 4]> {
    let mut sigma = [0; 4];
    for (j, s) in sigma.iter_mut().enumerate() {
        let rows: Vec<usize> = (0..4).filter(|&i| !Zero::is_zero(&w.m.0[i][j])).collect();
        if rows.len() != 1 || !w.m.0[rows[0]][j].is_one() {
            return None;
        }
        *s = rows[0];
    }
    Some(sigma)
}

/// Kostant condition `w^{-1} alpha > 0` for the Levi simple roots `e_1 - e_2` and `e_3 - e_4`.
pub fn kostant_condition(w: &PadicMat) -> bool {
    let Some(sigma) = perm_of(w) else { return false };
    let mut inv = [0; 4];
    for (j, &s) in sigma.iter().enumerate() {
        inv[s] = j;
    }
    // w^{-1}(e_i - e_{i+1}) = e_{inv(i)} - e_{inv(i+1)}
    inv[0] < inv[1] && inv[2] < inv[3]
}

/// Right coset `W_{M_P} w`: the unordered pairs of positions holding `{1,2}` and `{3,4}`.
pub fn levi_coset_key(w: &PadicMat) -> Option<[usize; 2]> {
    let sigma = perm_of(w)?;
    let mut inv = [0; 4];
    for (j, &s) in sigma.iter().enumerate() {
        inv[s] = j;
    }
    let mut a = [inv[0], inv[1]];
    a.sort();
    Some(a)
}

/// Result of reducing a unipotent element to a canonical representative.
#[derive(Clone, Debug, Serialize)]
pub struct CosetClass {
    pub j: u32,
    pub level: u32,
    pub representative: PadicMat,
    /// `u = left * representative * right` with `left` in `P(Q_p)`.
    pub left: PadicMat,
    /// Element of `K_p^{level}`.
    pub right: PadicMat,
    pub steps: Vec<String>,
}

impl CosetClass {
    /// Re-checks the witness: membership of both factors and the exact product.
    pub fn verify(&self, u: &PadicMat) -> Result<(), CosetError> {
        if !self.left.in_parabolic() {
            return Err(CosetError::IdentityFailed(format!("left factor {} is not in P", self.left)));
        }
        if !self.right.in_mirahoric(self.level) {
            return Err(CosetError::IdentityFailed(format!("right factor {} is not in K^{}", self.right, self.level)));
        }
        let prod = self.left.mul(&self.representative).mul(&self.right);
        if prod != *u {
            return Err(CosetError::IdentityFailed(format!("witness product {prod} differs from {u}")));
        }
        Ok(())
    }
}

fn p_pow(p: u64, e: i64) -> Rat {
    let n = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(n)
    } else {
        Rat::new(BigInt::one(), n)
    }
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Running factorization `u = left * cur * right`.
struct Factorization {
    left: PadicMat,
    cur: PadicMat,
    right: PadicMat,
    steps: Vec<String>,
}

impl Factorization {
    /// Replaces `cur` by `a * cur' * b` after checking the identity exactly.
    fn rewrite(&mut self, a: PadicMat, cur: PadicMat, b: PadicMat, note: String) -> Result<(), CosetError> {
        if a.mul(&cur).mul(&b) != self.cur {
            return Err(CosetError::IdentityFailed(format!("step '{note}' does not reproduce {}", self.cur)));
        }
        self.left = self.left.mul(&a);
        self.right = b.mul(&self.right);
        self.cur = cur;
        self.steps.push(note);
        Ok(())
    }
}

/// Reduces `u` in `U_P^-(Z_p)` with `v_p(z), v_p(w) > 0` to some `xi_p^{(j)}`, `0 < j <= level`,
/// following the three factorization steps: clear `z`, clear `y`, clear `x`.
pub fn reduce_unipotent(u: &PadicMat, n1: u32, n2: u32) -> Result<CosetClass, CosetError> {
    let p = u.p;
    let level = n1 + n2;
    if !u.in_unipotent_minus_zp() {
        return Err(CosetError::Precondition("u is not in U_P^-(Z_p)".into()));
    }
    let [_, _, z, w] = u.lower_entries();
    for (name, val) in [("z", &z), ("w", &w)] {
        let v = vl_rat(val, p);
        if v <= 0 {
            return Err(CosetError::Precondition(format!("v_p({name}) = {v} must be positive")));
        }
    }
    let mut f = Factorization { left: PadicMat::identity(p), cur: u.clone(), right: PadicMat::identity(p), steps: Vec::new() };
    let id = || PadicMat::identity(p);
    let pm = |m: Mat4<Rat>| PadicMat::new(p, m);

    if Zero::is_zero(&z) && Zero::is_zero(&w) {
        let rep = xi(p, level);
        let right = rep.inverse()?.mul(u);
        f.rewrite(id(), rep, right, "u lies in K; use xi^(level)".into())?;
        return finish(u, f, level, level);
    }
    if vl_rat(&z, p) < vl_rat(&w, p) {
        let s = pm(Mat4::perm_rows([1, 0, 2, 3]));
        let conj = s.mul(&f.cur).mul(&s);
        f.rewrite(s.clone(), conj, s, "conjugate by the (1 2) swap so that v(z) >= v(w)".into())?;
    }
    let [x, y, z, w] = f.cur.lower_entries();
    if !Zero::is_zero(&z) {
        let e = vl_rat(&z, p) - vl_rat(&w, p);
        let pe = p_pow(p, e);
        let zinv_w = &w / &z;
        let x1 = (&x * &zinv_w - &y) * &pe;
        // diag(A1, 1) with A1 = (z^{-1} w p^e, 0; -p^e, 1)
        let mut a1m = Mat4::<Rat>::identity();
        a1m.0[0][0] = &zinv_w * &pe;
        a1m.0[1][0] = -pe.clone();
        let next = pm(Mat4::lower_unipotent(x1, y.clone(), rat(0), w.clone()));
        let k2 = pm(Mat4::elementary(1, 0, pe.clone()));
        let k3 = pm(Mat4::diag([&z / &w / &pe, rat(1), rat(1), rat(1)]));
        f.rewrite(pm(a1m), next, k2.mul(&k3), format!("clear z (v(z) - v(w) = {e})"))?;
    }
    let [x, y, _, w] = f.cur.lower_entries();
    if !Zero::is_zero(&y) {
        let vy = vl_rat(&y, p);
        let py = p_pow(p, vy);
        let mut a2 = Mat4::<Rat>::identity();
        a2.0[1][1] = &py / &y;
        let w2 = &w / &y * &py;
        let next = pm(Mat4::lower_unipotent(x.clone(), rat(0), rat(0), w2));
        let k2 = pm(Mat4::elementary(2, 1, py.clone()));
        let k3 = pm(Mat4::diag([rat(1), &y / &py, rat(1), rat(1)]));
        f.rewrite(pm(a2), next, k2.mul(&k3), format!("clear y (v(y) = {vy})"))?;
    }
    let [x, _, _, w] = f.cur.lower_entries();
    if !Zero::is_zero(&x) {
        let next = pm(Mat4::lower_unipotent(rat(0), rat(0), rat(0), w.clone()));
        f.rewrite(id(), next, pm(Mat4::elementary(2, 0, x.clone())), "clear x".into())?;
    }
    let [_, _, _, c] = f.cur.lower_entries();
    let j0 = vl_rat(&c, p);
    let j = if j0 >= level as i64 { level } else { j0 as u32 };
    let rep = xi(p, j);
    if j == level {
        let right = rep.inverse()?.mul(&f.cur);
        f.rewrite(id(), rep, right, format!("v(w) = {j0} >= level; xi^(level)^(-1) xi(w) lies in K"))?;
    } else {
        let eps = &c / p_pow(p, j as i64);
        let d = pm(Mat4::diag([rat(1), Rat::one() / &eps, rat(1), rat(1)]));
        let dinv = pm(Mat4::diag([rat(1), eps, rat(1), rat(1)]));
        f.rewrite(d, rep, dinv, format!("scale the unit part of w; j = {j}"))?;
    }
    finish(u, f, j, level)
}

fn finish(u: &PadicMat, f: Factorization, j: u32, level: u32) -> Result<CosetClass, CosetError> {
    let class = CosetClass { j, level, representative: f.cur, left: f.left, right: f.right, steps: f.steps };
    class.verify(u)?;
    Ok(class)
}

/// Index `j` of the double coset `P(Q_p) g K_p^{level} = P(Q_p) xi^{(j)} K_p^{level}` for any invertible `g`.
///
/// The coset `P g` is the row space `W` of the last two rows; the invariant is the
/// order of `e_4` in `Z_p^4 / (W cap Z_p^4)`, capped at `level`. It equals the gap
/// between the minimal valuations of the 2x2 minors in columns 1-3 and in all columns.
pub fn double_coset_index(g: &PadicMat, level: u32) -> Result<u32, CosetError> {
    if Zero::is_zero(&g.det()) {
        return Err(CosetError::Singular);
    }
    let r = [&g.m.0[2], &g.m.0[3]];
    let minor = |a: usize, b: usize| &r[0][a] * &r[1][b] - &r[0][b] * &r[1][a];
    let mut all = VAL_INFINITY;
    let mut front = VAL_INFINITY;
    for a in 0..4 {
        for b in a + 1..4 {
            let v = vl_rat(&minor(a, b), g.p);
            all = all.min(v);
            if b < 3 {
                front = front.min(v);
            }
        }
    }
    if front == VAL_INFINITY {
        return Ok(level);
    }
    Ok((front - all).min(level as i64) as u32)
}

/// Level structure `K_p(n)` of `GL_2(Z_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gl2Level {
    pub n: u32,
}

/// `K_p^{M_P}(xi^{(i)}) = K_p(level - i) x K_p(i)`.
pub fn levi_projection_level(i: u32, n1: u32, n2: u32) -> Result<(Gl2Level, Gl2Level), CosetError> {
    let level = n1 + n2;
    if i > level {
        return Err(CosetError::OutOfRange { i, level });
    }
    Ok((Gl2Level { n: level - i }, Gl2Level { n: i }))
}

/// One global representative `xi_f^{(i)}` with its Levi level pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRep {
    /// `(p, i_p)` for each prime dividing `N N'`.
    pub exponents: Vec<(u64, u32)>,
    /// `N_i = prod p^{i_p}`.
    pub n_lower: u64,
    /// `N^{(i)} = N N' / N_i`.
    pub n_upper: u64,
    /// Levi level `K_1(N^{(i)}) x K_1(N_i)`.
    pub levels: (u64, u64),
    /// `i = (v_p(N))_p`, giving `K_1(N') x K_1(N)`.
    pub is_xi_n: bool,
    /// `i = (v_p(N'))_p`, giving `K_1(N) x K_1(N')`.
    pub is_xi_n_prime: bool,
}

impl GlobalRep {
    pub fn label(&self) -> String {
        if self.exponents.is_empty() {
            return "xi_f(trivial)".into();
        }
        let parts: Vec<String> = self.exponents.iter().map(|(p, i)| format!("{p}^{i}")).collect();
        format!("xi_f({})", parts.join(","))
    }
}

/// All tuples `i = (i_p)_{p | N N'}` with `0 <= i_p <= v_p(N) + v_p(N')`.
pub fn global_representatives(n: u64, n2: u64) -> Result<Vec<GlobalRep>, CosetError> {
    if n == 0 || n2 == 0 {
        return Err(CosetError::Precondition("levels must be positive".into()));
    }
    let prod = n * n2;
    let primes = crate::exactnum::prime_divisors(prod);
    let vp = |x: u64, p: u64| {
        let mut x = x;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut out = vec![Vec::<(u64, u32)>::new()];
    for &p in &primes {
        let top = vp(prod, p);
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=top).map(move |i| {
                    let mut t = t.clone();
                    t.push((p, i));
                    t
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|exponents| {
            let n_lower: u64 = exponents.iter().map(|&(p, i)| p.pow(i)).product();
            let n_upper = prod / n_lower;
            let is_xi_n = exponents.iter().all(|&(p, i)| i == vp(n, p));
            let is_xi_n_prime = exponents.iter().all(|&(p, i)| i == vp(n2, p));
            GlobalRep { exponents, n_lower, n_upper, levels: (n_upper, n_lower), is_xi_n, is_xi_n_prime }
        })
        .collect())
}

/// Outcome of checking one printed identity or membership claim.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Report over every printed matrix identity of the double-coset computation and
/// of the local unipotent-integral manipulations.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    pub(crate) fn push(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.checks.push(IdentityCheck { name: name.into(), holds, detail: detail.into() });
    }
}

type Sym = Mat4<Laurent>;

fn v(i: usize) -> Laurent {
    Laurent::var(i)
}

fn vinv(i: usize) -> Laurent {
    Laurent::var_pow(i, -1)
}

fn sym_eq(a: &Sym, b: &Sym) -> bool {
    a == b
}

/// `A^{-1} B^{-1} X B A`.
fn conj_by(a: &Sym, b: &Sym, x: &Sym) -> Sym {
    let ai = a.structured_inverse().expect("diagonal");
    let bi = b.structured_inverse().expect("unipotent");
    ai.mul(&bi).mul(x).mul(b).mul(a)
}

/// Symbolic lower block unipotent in variables `a, b, c, d` (0 marks a zero entry).
fn sym_lower(x: Laurent, y: Laurent, z: Laurent, w: Laurent) -> Sym {
    Mat4::lower_unipotent(x, y, z, w)
}

fn lz() -> Laurent {
    Laurent::default()
}

fn sym_rows(rows: [[Laurent; 4]; 4]) -> Sym {
    Mat4(rows)
}

/// Verifies the printed double-coset identities and the six block identities used to
/// eliminate variables in the local computation. Variables: `a, b, c, d = x_0..x_3`,
/// `k_{ij} = x_{4 + 4(i-1) + (j-1)}` is not needed beyond sampled checks.
pub fn w6_identities_check() -> IdentityReport {
    let mut rep = IdentityReport { checks: Vec::new() };
    let p = 2u64;
    let w = kostant_reps(p);

    // w_4 = w_6 k and w_5 = w_6 k' with k, k' permutations in K^n for every n
    let k4 = PadicMat::new(p, Mat4::from_ints([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]]));
    let k5 = PadicMat::new(p, Mat4::from_ints([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]));
    rep.push("w4 = w6 k", w[5].mul(&k4) == w[3], "product of permutation matrices");
    rep.push("w5 = w6 k'", w[5].mul(&k5) == w[4], "product of permutation matrices");
    rep.push("k, k' in K^n", (0..4).all(|n| k4.in_mirahoric(n) && k5.in_mirahoric(n)), "levels 0..3");

    // w_6 = q xi^(0) k1 k2
    let q = PadicMat::new(p, Mat4::from_ints([[1, 0, 0, 0], [0, -1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]));
    let k1 = PadicMat::new(p, Mat4::from_ints([[1, 0, 0, 0], [0, 1, 0, -1], [0, 0, 1, 0], [0, 0, 0, 1]]));
    let k2 = PadicMat::new(p, Mat4::from_ints([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]));
    rep.push("w6 = q xi^(0) k1 k2", q.mul(&xi(p, 0)).mul(&k1).mul(&k2) == w[5], "four-factor decomposition");
    rep.push(
        "four-factor memberships",
        q.in_parabolic() && (0..4).all(|n| k1.in_mirahoric(n) && k2.in_mirahoric(n)),
        "q in P, k1 and k2 in K^n",
    );

    // u_i = w_i^{-1} u w_i in variables x1..x4
    let u = sym_lower(v(0), v(1), v(2), v(3));
    let expected: [Sym; 6] = [
        u.clone(),
        sym_rows([
            [Laurent::int(1), lz(), lz(), lz()],
            [v(0), Laurent::int(1), v(1), lz()],
            [lz(), lz(), Laurent::int(1), lz()],
            [v(2), lz(), v(3), Laurent::int(1)],
        ]),
        sym_rows([
            [Laurent::int(1), v(0), v(1), lz()],
            [lz(), Laurent::int(1), lz(), lz()],
            [lz(), lz(), Laurent::int(1), lz()],
            [lz(), v(2), v(3), Laurent::int(1)],
        ]),
        sym_rows([
            [Laurent::int(1), lz(), lz(), lz()],
            [v(0), Laurent::int(1), lz(), v(1)],
            [v(2), lz(), Laurent::int(1), v(3)],
            [lz(), lz(), lz(), Laurent::int(1)],
        ]),
        sym_rows([
            [Laurent::int(1), v(0), lz(), v(1)],
            [lz(), Laurent::int(1), lz(), lz()],
            [lz(), v(2), Laurent::int(1), v(3)],
            [lz(), lz(), lz(), Laurent::int(1)],
        ]),
        sym_rows([
            [Laurent::int(1), lz(), v(0), v(1)],
            [lz(), Laurent::int(1), v(2), v(3)],
            [lz(), lz(), Laurent::int(1), lz()],
            [lz(), lz(), lz(), Laurent::int(1)],
        ]),
    ];
    for (i, wi) in w.iter().enumerate() {
        let ws: Sym = Mat4::from_fn(|a, b| Laurent::constant(wi.m.0[a][b].clone()));
        let wt: Sym = Mat4::from_fn(|a, b| ws.0[b][a].clone());
        let got = wt.mul(&u).mul(&ws);
        rep.push(&format!("u_{} = w_{}^-1 u w_{}", i + 1, i + 1, i + 1), sym_eq(&got, &expected[i]), "symbolic in x1..x4");
    }

    // w_6 k w_6^{-1} permutes the entries of k into blocks
    let ksym: Sym = Mat4::from_fn(|i, j| v(4 + 4 * i + j));
    let w6s: Sym = Mat4::from_fn(|a, b| Laurent::constant(w[5].m.0[a][b].clone()));
    let w6t: Sym = Mat4::from_fn(|a, b| w6s.0[b][a].clone());
    let kk = |i: usize, j: usize| v(4 + 4 * (i - 1) + (j - 1));
    let printed = sym_rows([
        [kk(3, 3), kk(3, 4), kk(3, 1), kk(3, 2)],
        [kk(4, 3), kk(4, 4), kk(4, 1), kk(4, 2)],
        [kk(1, 3), kk(1, 4), kk(1, 1), kk(1, 2)],
        [kk(2, 3), kk(2, 4), kk(2, 1), kk(2, 2)],
    ]);
    rep.push("w6 k w6^-1 block form", sym_eq(&w6s.mul(&ksym).mul(&w6t), &printed), "symbolic in the 16 entries of k");

    // xi^(i) k xi^(i)^{-1} with q = p^i as variable 4 + 16
    let qv = 20 - 1;
    let xs: Sym = Mat4::elementary(3, 1, v(qv));
    let xsi = xs.structured_inverse().expect("unipotent");
    let neg = |x: Laurent| x.neg();
    let pr = |a: Laurent, b: Laurent| a.mul(&b);
    let sum = |a: Laurent, b: Laurent| a.add(&b);
    let printed_xi = sym_rows([
        [kk(1, 1), sum(neg(pr(kk(1, 4), v(qv))), kk(1, 2)), kk(1, 3), kk(1, 4)],
        [kk(2, 1), sum(neg(pr(kk(2, 4), v(qv))), kk(2, 2)), kk(2, 3), kk(2, 4)],
        [kk(3, 1), sum(neg(pr(kk(3, 4), v(qv))), kk(3, 2)), kk(3, 3), kk(3, 4)],
        [
            sum(pr(kk(2, 1), v(qv)), kk(4, 1)),
            sum(sum(neg(pr(sum(pr(kk(2, 4), v(qv)), kk(4, 4)), v(qv))), pr(kk(2, 2), v(qv))), kk(4, 2)),
            sum(pr(kk(2, 3), v(qv)), kk(4, 3)),
            sum(pr(kk(2, 4), v(qv)), kk(4, 4)),
        ],
    ]);
    rep.push("xi k xi^-1 entry formula", sym_eq(&xs.mul(&ksym).mul(&xsi), &printed_xi), "symbolic in k and p^i");

    // final reduction step: (b at (3,1), c at (4,2)) = xi(c) * (1 + b E_31)
    let lhs = sym_lower(v(1), lz(), lz(), v(2));
    let rhs = sym_lower(lz(), lz(), lz(), v(2)).mul(&sym_lower(v(1), lz(), lz(), lz()));
    rep.push("clear-x factorization", sym_eq(&lhs, &rhs), "symbolic in b, c");

    // clear-z factorization with e = p^{v(z)-v(w)} as a variable
    let (x, y, z, ww, e) = (v(0), v(1), v(2), v(3), v(4));
    let zi = vinv(2);
    let wi = vinv(3);
    let ei = vinv(4);
    let f1 = sym_rows([
        [pr(pr(zi.clone(), ww.clone()), e.clone()), lz(), lz(), lz()],
        [neg(e.clone()), Laurent::int(1), lz(), lz()],
        [pr(sum(pr(pr(x.clone(), zi.clone()), ww.clone()), neg(y.clone())), e.clone()), y.clone(), Laurent::int(1), lz()],
        [lz(), ww.clone(), lz(), Laurent::int(1)],
    ]);
    let f2: Sym = Mat4::elementary(1, 0, e.clone());
    let f3: Sym = Mat4::diag([pr(pr(wi, z.clone()), ei), Laurent::int(1), Laurent::int(1), Laurent::int(1)]);
    let target = sym_lower(x.clone(), y.clone(), z, ww.clone());
    rep.push("clear-z factorization", sym_eq(&f1.mul(&f2).mul(&f3), &target), "symbolic in x, y, z, w, p^e");

    // clear-y factorization with the (4,2) entry w y^{-1} p^{v(y)}; the variable e stands for p^{v(y)}
    let yi = vinv(1);
    let g1 = sym_rows([
        [Laurent::int(1), lz(), lz(), lz()],
        [lz(), pr(yi.clone(), e.clone()), lz(), lz()],
        [x.clone(), lz(), Laurent::int(1), lz()],
        [lz(), pr(pr(ww.clone(), yi), e.clone()), lz(), Laurent::int(1)],
    ]);
    let g2: Sym = Mat4::elementary(2, 1, e.clone());
    let g3: Sym = Mat4::diag([Laurent::int(1), pr(vinv(4), y.clone()), Laurent::int(1), Laurent::int(1)]);
    let target = sym_lower(x, y, lz(), ww);
    rep.push("clear-y factorization", sym_eq(&g1.mul(&g2).mul(&g3), &target), "symbolic, with p^{v(y)} in the (4,2) entry");

    block_identities(&mut rep);
    rep
}

/// The six block identities used to eliminate `x_3`, `x_4`, `x_1`, symbolic in `a, b, c, d`.
fn block_identities(rep: &mut IdentityReport) {
    let (a, b, c, d) = (v(0), v(1), v(2), v(3));
    let one = || Laurent::int(1);
    let pr = |x: &Laurent, y: &Laurent| x.mul(y);
    let neg = |x: &Laurent| x.neg();

    let dc: Sym = Mat4::diag([vinv(2), one(), one(), c.clone()]);
    let uc: Sym = Mat4::elementary(0, 3, vinv(2));
    let lhs1 = conj_by(&dc, &uc, &sym_lower(a.clone(), b.clone(), lz(), d.clone()));
    let r1 = sym_rows([
        [one(), neg(&d), lz(), lz()],
        [lz(), one(), lz(), lz()],
        [pr(&a, &vinv(2)), b.clone(), one(), a.clone()],
        [lz(), pr(&d, &vinv(2)), lz(), one()],
    ]);
    rep.push("block identity 1 (eliminate c)", sym_eq(&lhs1, &r1), "symbolic in a, b, c, d");
    let r1a = sym_rows([
        [one(), neg(&d), lz(), lz()],
        [lz(), one(), lz(), lz()],
        [lz(), lz(), one(), a.clone()],
        [lz(), lz(), lz(), one()],
    ]);
    let r1b = sym_lower(pr(&a, &vinv(2)), b.add(&neg(&pr(&pr(&a, &d), &vinv(2)))), lz(), pr(&d, &vinv(2)));
    rep.push("block identity 2 (split off U_P)", sym_eq(&r1, &r1a.mul(&r1b)), "symbolic in a, b, c, d");

    let dd: Sym = Mat4::diag([one(), vinv(3), one(), d.clone()]);
    let ud: Sym = Mat4::elementary(1, 3, vinv(3));
    let lhs3 = conj_by(&dd, &ud, &sym_lower(a.clone(), b.clone(), c.clone(), lz()));
    let r3 = sym_rows([
        [one(), lz(), lz(), lz()],
        [neg(&c), one(), lz(), lz()],
        [a.clone(), pr(&b, &vinv(3)), one(), b.clone()],
        [pr(&c, &vinv(3)), lz(), lz(), one()],
    ]);
    rep.push("block identity 3 (eliminate d)", sym_eq(&lhs3, &r3), "symbolic in a, b, c, d");
    let r3a = sym_rows([
        [one(), lz(), lz(), lz()],
        [neg(&c), one(), lz(), lz()],
        [lz(), lz(), one(), b.clone()],
        [lz(), lz(), lz(), one()],
    ]);
    let r3b = sym_lower(a.add(&neg(&pr(&pr(&b, &c), &vinv(3)))), pr(&b, &vinv(3)), pr(&c, &vinv(3)), lz());
    rep.push("block identity 4 (split off U_P)", sym_eq(&r3, &r3a.mul(&r3b)), "symbolic in a, b, c, d");

    let da: Sym = Mat4::diag([vinv(0), one(), a.clone(), one()]);
    let ua: Sym = Mat4::elementary(0, 2, vinv(0));
    let lhs5 = conj_by(&da, &ua, &sym_lower(lz(), b.clone(), c.clone(), d.clone()));
    let r5 = sym_rows([
        [one(), neg(&b), lz(), lz()],
        [lz(), one(), lz(), lz()],
        [lz(), pr(&b, &vinv(0)), one(), lz()],
        [pr(&c, &vinv(0)), d.clone(), c.clone(), one()],
    ]);
    rep.push("block identity 5 (eliminate a)", sym_eq(&lhs5, &r5), "symbolic in a, b, c, d");
    let r5a = sym_rows([
        [one(), neg(&b), lz(), lz()],
        [lz(), one(), lz(), lz()],
        [lz(), lz(), one(), lz()],
        [lz(), lz(), c.clone(), one()],
    ]);
    let r5b = sym_lower(lz(), pr(&b, &vinv(0)), pr(&c, &vinv(0)), neg(&pr(&pr(&b, &c), &vinv(0))).add(&d));
    rep.push("block identity 6 (split off U_P)", sym_eq(&r5, &r5a.mul(&r5b)), "symbolic in a, b, c, d");
}

/// Conjugating the lower-left block by a diagonal Levi element: returns the exact
/// measure scale of the box `{X : v(X_ij) >= e_ij}` under `X -> m_2 X m_1^{-1}`
/// together with `delta(m) = |det m_1|^2 |det m_2|^{-2}`, both as powers of `p`.
pub fn levi_conjugation_scale(m1_vals: [i64; 2], m2_vals: [i64; 2], box_exps: [[i64; 2]; 2]) -> (i64, i64) {
    // volume of {X : v(a_i X_ij / d_j) >= e_ij} = prod p^{-(e_ij - v(a_i) + v(d_j))}
    let mut log_vol_image = 0;
    let mut log_vol_box = 0;
    for i in 0..2 {
        for j in 0..2 {
            log_vol_image -= box_exps[i][j] - m2_vals[i] + m1_vals[j];
            log_vol_box -= box_exps[i][j];
        }
    }
    // |x| = p^{-v(x)}: log_p |det m_1|^2 |det m_2|^{-2}
    let log_delta = -2 * (m1_vals[0] + m1_vals[1]) + 2 * (m2_vals[0] + m2_vals[1]);
    (log_vol_image - log_vol_box, log_delta)
}

/// Orbits of the mirahoric group mod `p^n` on free rank-2 row summands of `(Z/p^n)^4`.
///
/// `P \ GL_4` is identified with the row span of the last two rows; two elements of
/// `GL_4(Z_p)` share a double coset iff their reductions mod `p^n` have summands in one
/// orbit. Orbits are enumerated by breadth-first search from every `xi^{(j)}`.
pub struct OrbitOracle {
    pub p: u64,
    pub n: u32,
    modulus: u64,
    orbit_of: HashMap<Vec<[u64; 4]>, u32>,
    pub orbit_sizes: Vec<usize>,
}

impl OrbitOracle {
    pub fn new(p: u64, n: u32) -> Self {
        let modulus = p.pow(n);
        let mut gens: Vec<[[u64; 4]; 4]> = Vec::new();
        let id = |_: ()| {
            let mut m = [[0u64; 4]; 4];
            for (i, r) in m.iter_mut().enumerate() {
                r[i] = 1 % modulus;
            }
            m
        };
        for i in 0..3 {
            for j in 0..4 {
                if i != j {
                    let mut m = id(());
                    m[i][j] = 1 % modulus;
                    gens.push(m);
                }
            }
            for u in 2..modulus {
                if inv_mod(u, modulus).is_some() {
                    let mut m = id(());
                    m[i][i] = u;
                    gens.push(m);
                }
            }
        }
        let mut oracle = OrbitOracle { p, n, modulus, orbit_of: HashMap::new(), orbit_sizes: Vec::new() };
        for j in 0..=n {
            let start = oracle.summand(&[[0, 0, 1, 0], [0, p.pow(j) % modulus, 0, 1]]);
            if oracle.orbit_of.contains_key(&start) {
                oracle.orbit_sizes.push(0);
                continue;
            }
            let mut queue = VecDeque::from([start.clone()]);
            oracle.orbit_of.insert(start, j);
            let mut size = 1;
            while let Some(s) = queue.pop_front() {
                for g in &gens {
                    let t = oracle.act(&s, g);
                    if !oracle.orbit_of.contains_key(&t) {
                        oracle.orbit_of.insert(t.clone(), j);
                        queue.push_back(t);
                        size += 1;
                    }
                }
            }
            oracle.orbit_sizes.push(size);
        }
        oracle
    }

    fn summand(&self, rows: &[[u64; 4]; 2]) -> Vec<[u64; 4]> {
        let m = self.modulus;
        let mut out = Vec::with_capacity((m * m) as usize);
        for a in 0..m {
            for b in 0..m {
                out.push(std::array::from_fn(|k| (a * rows[0][k] + b * rows[1][k]) % m));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn act(&self, s: &[[u64; 4]], g: &[[u64; 4]; 4]) -> Vec<[u64; 4]> {
        let m = self.modulus;
        let mut out: Vec<[u64; 4]> =
            s.iter().map(|v| std::array::from_fn(|j| (0..4).map(|k| v[k] * g[k][j]).sum::<u64>() % m)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Orbit label (the `j` of the `xi^{(j)}` it contains) of an element of `GL_4(Z_p)`.
    pub fn classify(&self, g: &PadicMat) -> Option<u32> {
        let red = |x: &Rat| rat_mod(x, self.modulus);
        let mut rows = [[0u64; 4]; 2];
        for (r, src) in [2usize, 3].iter().enumerate() {
            for k in 0..4 {
                rows[r][k] = red(&g.m.0[*src][k])?;
            }
        }
        self.orbit_of.get(&self.summand(&rows)).copied()
    }

    /// Whether the `xi^{(j)}`, `0 <= j <= n`, give pairwise distinct orbits.
    pub fn representatives_distinct(&self) -> bool {
        self.orbit_sizes.iter().all(|&s| s > 0)
    }

    pub fn num_labelled(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

/// Sign-aware absolute valuation helper used in reports.
pub fn describe_valuation(x: &Rat, p: u64) -> String {
    let v = vl_rat(x, p);
    if v == VAL_INFINITY {
        "inf".into()
    } else if x.is_negative() {
        format!("{v} (negative)")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat as q;

    fn lower(p: u64, x: Rat, y: Rat, z: Rat, w: Rat) -> PadicMat {
        PadicMat::new(p, Mat4::lower_unipotent(x, y, z, w))
    }

    #[test]
    fn kostant_representatives() {
        let w = kostant_reps(5);
        assert_eq!(w.len(), 6);
        assert_eq!(w[0], PadicMat::identity(5));
        assert!(w.iter().all(kostant_condition));
        let swap12 = PadicMat::new(5, Mat4::perm_rows([1, 0, 2, 3]));
        assert!(!kostant_condition(&swap12));
        let mut keys: Vec<_> = w.iter().map(|x| levi_coset_key(x).unwrap()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn printed_identities_hold() {
        let rep = w6_identities_check();
        for c in &rep.checks {
            assert!(c.holds, "{} failed: {}", c.name, c.detail);
        }
    }

    #[test]
    fn trivial_reductions() {
        let p = 3;
        for j in 1..=3 {
            let u = lower(p, q(0, 1), q(0, 1), q(0, 1), Rat::from_integer(BigInt::from(p.pow(j))));
            assert_eq!(reduce_unipotent(&u, 1, 2).unwrap().j, j);
        }
        let id = PadicMat::identity(p);
        let c = reduce_unipotent(&id, 1, 2).unwrap();
        assert_eq!(c.j, 3);
        c.verify(&id).unwrap();
    }

    #[test]
    fn mixed_reduction_example() {
        let u = lower(5, q(1, 1), q(5, 1), q(25, 1), q(5, 1));
        let c = reduce_unipotent(&u, 1, 2).unwrap();
        assert_eq!(c.j, 1);
        assert_eq!(double_coset_index(&u, 3).unwrap(), 1);
    }

    #[test]
    fn precondition_reports_valuation() {
        let u = lower(3, q(0, 1), q(0, 1), q(1, 1), q(3, 1));
        match reduce_unipotent(&u, 0, 1) {
            Err(CosetError::Precondition(msg)) => assert!(msg.contains("v_p(z)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classifier_on_representatives() {
        let p = 2;
        for j in 0..=3 {
            assert_eq!(double_coset_index(&xi(p, j), 3).unwrap(), j);
        }
        let w = kostant_reps(p);
        for wi in &w[3..] {
            assert_eq!(double_coset_index(wi, 2).unwrap(), 0);
        }
        for wi in &w[..3] {
            assert_eq!(double_coset_index(wi, 2).unwrap(), 2);
        }
    }

    #[test]
    fn oracle_orbits_are_distinct() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let o = OrbitOracle::new(p, n);
            assert!(o.representatives_distinct(), "p={p} n={n}");
            // every free rank-2 summand is reached: |Gr(2,4)(F_p)| p^{4(n-1)}
            let gr = (p.pow(4) - 1) * (p.pow(4) - p) / ((p * p - 1) * (p * p - p));
            assert_eq!(o.num_labelled() as u64, gr * p.pow(4 * (n - 1)));
        }
    }

    #[test]
    fn levi_levels() {
        assert_eq!(levi_projection_level(1, 1, 1).unwrap(), (Gl2Level { n: 1 }, Gl2Level { n: 1 }));
        assert_eq!(levi_projection_level(0, 2, 1).unwrap(), (Gl2Level { n: 3 }, Gl2Level { n: 0 }));
        assert_eq!(levi_projection_level(3, 2, 1).unwrap(), (Gl2Level { n: 0 }, Gl2Level { n: 3 }));
        assert!(levi_projection_level(4, 2, 1).is_err());
    }

    #[test]
    fn global_reps() {
        let r = global_representatives(1, 3).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].levels, (3, 1));
        assert!(r[0].is_xi_n);
        assert_eq!(r[1].levels, (1, 3));
        assert!(r[1].is_xi_n_prime);
        let t = global_representatives(1, 1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].label(), "xi_f(trivial)");
        assert_eq!(global_representatives(12, 5).unwrap().len(), 3 * 2 * 2);
    }

    #[test]
    fn levi_conjugation_scales_by_delta() {
        let (scale, delta) = levi_conjugation_scale([0, 1], [2, -1], [[0, 1], [2, 0]]);
        assert_eq!(scale, delta);
        let (scale, delta) = levi_conjugation_scale([0, 0], [1, 1], [[0, 0], [0, 0]]);
        assert_eq!((scale, delta), (4, 4));
    }
}
