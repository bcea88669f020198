mod common;

use rscong::congruence::{check_congruent, eisenstein_screen, sturm_bound};
use rscong::exactnum::{primes_up_to, AlgNum};
use rscong::forms::{char_from_kronecker, eisenstein_qexp};

const N: usize = 6000;

#[test]
fn rational_form_has_complex_multiplication() {
    let (ha, _) = common::level_three_pair(N);
    for p in primes_up_to(N as u64) {
        assert_eq!(ha.a(p as usize), &AlgNum::from_bigint(common::cm_coefficient(p)), "a({p})");
    }
}

#[test]
fn fixtures_are_hecke_eigenforms() {
    let (ha, hb) = common::level_three_pair(N);
    for h in [&ha, &hb] {
        assert_eq!(h.multiplicativity_failure(), None, "{}", h.label);
        assert_eq!(h.hecke_recursion_failure(), None, "{}", h.label);
        assert_eq!(h.deligne_failure(30), None, "{}", h.label);
    }
    assert!(ha.field.is_rational());
    assert_eq!(hb.field, common::field_m26());
}

#[test]
fn pair_is_congruent_at_the_ramified_prime() {
    common::coefficient_congruence(N).unwrap();
    let (ha, hb) = common::level_three_pair(N);
    let rep = check_congruent(&ha, &hb, &common::ramified_13(), 50).unwrap();
    assert!(rep.congruent);
    assert_eq!(rep.bound_used, 50.max(sturm_bound(13, 3)));
}

#[test]
fn both_forms_are_eisenstein_congruent() {
    let (ha, hb) = common::level_three_pair(200);
    let p = common::ramified_13();
    for h in [&ha, &hb] {
        assert_eq!(eisenstein_screen(h, &p).as_deref(), Some("E13[3]"), "{}", h.label);
    }
    let e = eisenstein_qexp(13, &char_from_kronecker(-3).unwrap(), 4).unwrap();
    assert_eq!(e.constant_term, AlgNum::rational(rscong::exactnum::rat(55601, 3)));
    assert_eq!(e.form.a(4), &AlgNum::from_int(16773121));
}

#[test]
fn euler_product_matches_dirichlet_coefficients() {
    common::euler_product_suite(1000).unwrap();
}
