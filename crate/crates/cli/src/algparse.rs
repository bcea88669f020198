//! Parsing of command-line numbers: rationals and quadratic algebraic numbers.

use num_integer::Integer;
use num_traits::Zero;
use rscong::exactnum::{AlgNum, QuadField, Rat};
use serde::Serialize;
use std::str::FromStr;

/// Parses `n`, `n/d` or a decimal-free signed rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim().replace(' ', "");
    let t = t.strip_prefix('+').unwrap_or(&t);
    Rat::from_str(t).map_err(|_| format!("not a rational number: '{s}'"))
}

/// Parses `r`, `r*sqrt(d)`, `sqrt(d)` or `r +/- r*sqrt(d)` (either order), with `r` rational.
pub fn parse_alg(s: &str) -> Result<AlgNum, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty number".into());
    }
    // split into signed terms at top-level + and - (not inside parentheses or after '/')
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    let bytes = t.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'/' | b'*' | b'(') => {
                terms.push(&t[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);
    let mut a = Rat::zero();
    let mut b = Rat::zero();
    let mut field: Option<QuadField> = None;
    for term in terms {
        if let Some(pos) = term.find("sqrt(") {
            let close = term[pos..].find(')').ok_or_else(|| format!("unbalanced sqrt in '{s}'"))? + pos;
            let d: i64 = term[pos + 5..close].parse().map_err(|_| format!("bad radicand in '{s}'"))?;
            let f = QuadField::from_radicand(d).map_err(|e| e.to_string())?;
            let (coef_str, rest) = (&term[..pos], &term[close + 1..]);
            if !rest.is_empty() {
                return Err(format!("unexpected '{rest}' after sqrt in '{s}'"));
            }
            let coef = match coef_str.trim_end_matches('*') {
                "" | "+" => Rat::from_integer(1.into()),
                "-" => Rat::from_integer((-1).into()),
                c => parse_rat(c)?,
            };
            // sqrt(d) = m sqrt(d0) with d = m^2 d0
            let d0 = f.d0();
            let m2 = Rat::new(d.into(), d0.into());
            let m = integer_sqrt(&m2).ok_or_else(|| format!("radicand {d} is not a square times {d0}"))?;
            if let Some(prev) = field {
                if prev != f {
                    return Err(format!("two different square roots in '{s}'"));
                }
            }
            field = Some(f);
            b += coef * m;
        } else {
            a += parse_rat(term)?;
        }
    }
    Ok(match field {
        Some(f) if !f.is_rational() => AlgNum::new(f, a, b),
        _ => AlgNum::rational(a + b),
    })
}

fn integer_sqrt(x: &Rat) -> Option<Rat> {
    if !x.is_integer() {
        return None;
    }
    let n = x.to_integer();
    let r = n.sqrt();
    (&r * &r == n).then(|| Rat::from_integer(r))
}

/// `(a + b sqrt(d0)) / denominator` with integer `a`, `b`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactTriple {
    pub a: String,
    pub b: String,
    pub denominator: String,
    pub d0: i64,
    pub text: String,
}

pub fn triple(x: &AlgNum) -> ExactTriple {
    let den = x.a.denom().lcm(x.b.denom());
    let a = (&x.a * Rat::from_integer(den.clone())).to_integer();
    let b = (&x.b * Rat::from_integer(den.clone())).to_integer();
    ExactTriple { a: a.to_string(), b: b.to_string(), denominator: den.to_string(), d0: x.field.d0(), text: x.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rscong::exactnum::rat;

    #[test]
    fn rationals_and_surds() {
        assert_eq!(parse_alg("3/4").unwrap(), AlgNum::rational(rat(3, 4)));
        let f = QuadField::from_radicand(-26).unwrap();
        assert_eq!(parse_alg("1 - 2*sqrt(-26)").unwrap(), AlgNum::new(f, rat(1, 1), rat(-2, 1)));
        assert_eq!(parse_alg("sqrt(-104)").unwrap(), AlgNum::new(f, rat(0, 1), rat(2, 1)));
        assert_eq!(parse_alg("-1/3*sqrt(-26)+5").unwrap(), AlgNum::new(f, rat(5, 1), rat(-1, 3)));
        assert!(parse_alg("sqrt(2)+sqrt(3)").is_err());
        assert!(parse_alg("x").is_err());
    }

    #[test]
    fn triple_has_common_denominator() {
        let t = triple(&parse_alg("1/2 + 1/3*sqrt(-26)").unwrap());
        assert_eq!((t.a.as_str(), t.b.as_str(), t.denominator.as_str()), ("3", "2", "6"));
    }
}
