//! Generates q-expansion fixtures for the cuspidal Hecke eigenforms in
//! `M_k(Gamma_0(3), chi_{-3})` for odd `k`.
//!
//! The space is spanned by `E1^{k-3b} F^b` with `E1 = 1 + 6 sum (sum_{d|n} chi(d)) q^n`
//! of weight 1 and `F = sum (sum_{d|n} chi(n/d) d^2) q^n` of weight 3. The
//! Hecke operator `T_2` is computed on this basis, its characteristic
//! polynomial is split into linear and quadratic factors, and each cuspidal
//! eigenvector is expanded to the requested length.

use clap::Parser;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rscong::exactnum::{quad_normalize, AlgNum, QuadField, Rat};
use rscong::forms::{char_from_kronecker, series_mul, DirichletChar, NewformData};
use rscong::ingest::{save_fixture, FormRecord};
use std::path::PathBuf;

#[derive(Parser)]
#[command(about = "Generate level-3 newform fixtures")]
struct Args {
    /// Odd weight.
    #[arg(long, default_value_t = 13)]
    weight: u32,
    /// Number of coefficients to emit.
    #[arg(long, default_value_t = 6000)]
    n_max: usize,
    /// Output directory.
    #[arg(long, default_value = "crates/core/fixtures")]
    out: PathBuf,
}

fn weight_one_and_three(chi: &DirichletChar, n: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let c = |m: usize| chi.eval(m as i64).a.to_integer();
    let mut e1 = vec![BigInt::zero(); n + 1];
    let mut f = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let cd = c(d);
        let d2 = BigInt::from(d * d);
        for (j, m) in (d..=n).step_by(d).enumerate() {
            e1[m] += &cd;
            f[m] += c(j + 1) * &d2;
        }
    }
    for x in e1.iter_mut().skip(1) {
        *x *= 6;
    }
    e1[0] = BigInt::one();
    (e1, f)
}

fn power_series_pow(a: &[BigInt], e: u32, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = BigInt::one();
    for _ in 0..e {
        out = series_mul(&out, a, n);
    }
    out
}

/// Solves `m x = rhs` exactly for a full-column-rank system; checks consistency.
fn solve(m: &[Vec<AlgNum>], rhs: &[AlgNum]) -> Option<Vec<AlgNum>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<AlgNum>> = m.iter().zip(rhs).map(|(r, b)| {
        let mut r = r.clone();
        r.push(b.clone());
        r
    }).collect();
    let mut piv_row = 0;
    for col in 0..cols {
        let p = (piv_row..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv_row, p);
        let inv = a[piv_row][col].inv().ok()?;
        for x in a[piv_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != piv_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=cols {
                    a[r][c] = &a[r][c] - &(&f * &a[piv_row][c]);
                }
            }
        }
        piv_row += 1;
    }
    if a[piv_row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| a[c][cols].clone()).collect())
}

/// One nonzero vector in the kernel of `m - lambda I`.
fn eigenvector(m: &[Vec<AlgNum>], lambda: &AlgNum) -> Option<Vec<AlgNum>> {
    let n = m.len();
    let mut a: Vec<Vec<AlgNum>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { &m[i][j] - lambda } else { m[i][j].clone() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].inv().ok()?;
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    a[r][c] = &a[r][c] - &(&f * &a[row][c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![AlgNum::zero(); n];
    v[free] = AlgNum::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    Some(v)
}

/// Characteristic polynomial (monic, coefficients from constant term up) by Faddeev-LeVerrier.
fn charpoly(m: &[Vec<AlgNum>]) -> Vec<Rat> {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk: Vec<Vec<AlgNum>> = vec![vec![AlgNum::zero(); n]; n];
    for k in 1..=n {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        let mut prev = mk.clone();
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] = &row[i] + &AlgNum::rational(coeffs[n - k + 1].clone());
        }
        mk = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(AlgNum::zero(), |acc, l| &acc + &(&m[i][l] * &prev[l][j])))
                    .collect()
            })
            .collect();
        let tr = (0..n).fold(AlgNum::zero(), |acc, i| &acc + &mk[i][i]);
        coeffs[n - k] = -(tr.a / Rat::from_integer(BigInt::from(k)));
    }
    coeffs
}

fn eval_poly(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

/// Divides `p` by `x - r`.
fn deflate(p: &[Rat], r: &Rat) -> Vec<Rat> {
    let n = p.len() - 1;
    let mut q = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let k = args.weight;
    if k % 2 == 0 {
        return Err("weight must be odd for the quadratic character mod 3".into());
    }
    let n = args.n_max;
    let chi = char_from_kronecker(-3)?;
    let dim = (k / 3 + 1) as usize;
    let rows = 4 * dim + 4;
    let len = n.max(2 * rows + 2);
    let (e1, f) = weight_one_and_three(&chi, len);
    let basis: Vec<Vec<BigInt>> = (0..dim as u32)
        .map(|b| series_mul(&power_series_pow(&e1, k - 3 * b, len), &power_series_pow(&f, b, len), len))
        .collect();
    eprintln!("basis of dimension {dim} expanded to {len} terms");

    let chi2 = chi.eval(2).a.to_integer() * BigInt::from(2).pow(k - 1);
    let coord = |n: usize, j: usize| AlgNum::from_bigint(basis[j][n].clone());
    let system: Vec<Vec<AlgNum>> = (0..=rows).map(|r| (0..dim).map(|j| coord(r, j)).collect()).collect();
    // columns of T_2 in basis coordinates
    let mut t2 = vec![vec![AlgNum::zero(); dim]; dim];
    for j in 0..dim {
        let image: Vec<AlgNum> = (0..=rows)
            .map(|r| {
                let mut v = basis[j][2 * r].clone();
                if r % 2 == 0 {
                    v += &chi2 * &basis[j][r / 2];
                }
                AlgNum::from_bigint(v)
            })
            .collect();
        let c = solve(&system, &image).ok_or("T_2 image not in the span of the basis")?;
        for i in 0..dim {
            t2[i][j] = c[i].clone();
        }
    }

    let mut poly = charpoly(&t2);
    let bound = 1 + 2i64.pow(k - 1);
    let mut roots: Vec<AlgNum> = Vec::new();
    for r in -bound..=bound {
        let x = Rat::from_integer(BigInt::from(r));
        while poly.len() > 1 && eval_poly(&poly, &x).is_zero() {
            poly = deflate(&poly, &x);
            roots.push(AlgNum::rational(x.clone()));
        }
    }
    match poly.len() - 1 {
        0 => {}
        2 => {
            // x^2 + p x + q with root (-p + sqrt(p^2 - 4q)) / 2
            let (q, p) = (&poly[0], &poly[1]);
            let disc = p * p - Rat::from_integer(BigInt::from(4)) * q;
            if !disc.is_integer() {
                return Err("non-integral discriminant".into());
            }
            let d = disc.to_integer().to_i64().ok_or("discriminant too large")?;
            let (d0, f0) = quad_normalize(d)?;
            let field = QuadField::new(d0)?;
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            let root = AlgNum::new(field, -p * &half, Rat::from_integer(BigInt::from(f0)) * &half);
            roots.push(root);
        }
        deg => return Err(format!("irreducible factor of degree {deg} is outside the quadratic scope").into()),
    }

    let mut forms: Vec<NewformData> = Vec::new();
    for lambda in &roots {
        let v = eigenvector(&t2, lambda).ok_or("eigenvector not found")?;
        let at = |m: usize| (0..dim).fold(AlgNum::zero(), |acc, j| &acc + &(&v[j] * &coord(m, j)));
        if !at(0).is_zero() {
            continue;
        }
        let a1 = at(1).inv()?;
        let an: Vec<AlgNum> = (1..=n).map(|m| &at(m) * &a1).collect();
        let form = NewformData::new("pending", 3, k, chi.clone(), an, true)?;
        // an Eisenstein series vanishing at infinity violates the Ramanujan bound at p = 2
        if form.deligne_failure(30).is_some() {
            continue;
        }
        if let Some(bad) = form.multiplicativity_failure() {
            return Err(format!("multiplicativity fails at {bad:?}").into());
        }
        if let Some(bad) = form.hecke_recursion_failure() {
            return Err(format!("Hecke recursion fails at {bad}").into());
        }
        if let Some(n) = form.coeffs.iter().skip(1).position(|c| !c.is_algebraic_integer()) {
            return Err(format!("a({}) is not integral", n + 1).into());
        }
        forms.push(form);
    }
    forms.sort_by_key(|f| f.field.degree());
    std::fs::create_dir_all(&args.out)?;
    for (i, mut form) in forms.into_iter().enumerate() {
        form.label = format!("3.{k}.b.{}", (b'a' + i as u8) as char);
        let path = args.out.join(format!("{}.json", form.label));
        let rec = FormRecord::from_newform(&form);
        save_fixture(&rec, &path)?;
        eprintln!("{} over {} a(2) = {} -> {}", form.label, form.field, form.a(2), path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_and_deflation() {
        let m = vec![
            vec![AlgNum::from_int(2), AlgNum::from_int(1)],
            vec![AlgNum::from_int(0), AlgNum::from_int(3)],
        ];
        let p = charpoly(&m);
        assert_eq!(p, vec![Rat::from_integer(6.into()), Rat::from_integer((-5).into()), Rat::one()]);
        let q = deflate(&p, &Rat::from_integer(2.into()));
        assert_eq!(q, vec![Rat::from_integer((-3).into()), Rat::one()]);
        let v = eigenvector(&m, &AlgNum::from_int(3)).unwrap();
        assert_eq!(v, vec![AlgNum::one(), AlgNum::one()]);
    }
}

