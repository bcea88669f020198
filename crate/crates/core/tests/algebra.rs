mod common;

use proptest::prelude::*;
use rscong::congruence::eisenstein_screen;
use rscong::exactnum::{factor_rational_prime, rat, valuation, AlgNum, PrimeIdeal, QuadField};
use rscong::forms::delta_family_qexp;
use rscong::rankin::{critical_set, theorem_ranges};

fn elem(a: (i64, i64), b: (i64, i64)) -> AlgNum {
    AlgNum::new(QuadField::new(-26).unwrap(), rat(a.0, a.1), rat(b.0, b.1))
}

fn coord() -> impl Strategy<Value = (i64, i64)> {
    (-500i64..500, 1i64..60)
}

fn primes_above(l: u64) -> Vec<PrimeIdeal> {
    factor_rational_prime(l, QuadField::new(-26).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(a in coord(), b in coord(), c in coord(), d in coord(), e in coord(), f in coord()) {
        let (x, y, z) = (elem(a, b), elem(c, d), elem(e, f));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn valuations_are_ultrametric(a in coord(), b in coord(), c in coord(), d in coord(), l in prop::sample::select(vec![2u64, 3, 5, 13, 7])) {
        let (x, y) = (elem(a, b), elem(c, d));
        prop_assume!(!x.is_zero() && !y.is_zero());
        for p in primes_above(l) {
            let (vx, vy) = (valuation(&x, &p), valuation(&y, &p));
            prop_assert_eq!(valuation(&(&x * &y), &p), vx + vy);
            let s = &x + &y;
            if !s.is_zero() {
                prop_assert!(valuation(&s, &p) >= vx.min(vy));
            }
        }
    }

    #[test]
    fn ranges_stay_critical(k in 1u32..200, gap in 2u32..200) {
        let t = theorem_ranges(k, k + gap).unwrap();
        let crit = critical_set(k, k + gap);
        for &(a, b) in t.pairs.iter().chain(&t.left_pairs) {
            prop_assert!(crit.contains(a) && crit.contains(b) && b == a + 1);
        }
    }
}

#[test]
fn gamma_ratio_identity() {
    common::gamma_ratio_suite().unwrap();
}

#[test]
fn theorem_ranges_exhaustive() {
    common::ranges_suite().unwrap();
}

#[test]
fn reconstruction_round_trips() {
    common::reconstruction_suite(5, 100, 60).unwrap();
}

#[test]
fn ramanujan_congruence_detected() {
    let delta = delta_family_qexp(12, 50).unwrap();
    assert!(eisenstein_screen(&delta, &PrimeIdeal::rational(691).unwrap()).is_some());
    assert!(eisenstein_screen(&delta, &PrimeIdeal::rational(5).unwrap()).is_none());
}
