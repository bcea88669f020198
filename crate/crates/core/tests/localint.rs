mod common;

use rscong::exactnum::{rat, AlgNum};
use rscong::localint::{geometric_factor, geometric_series_partial, printed_geometric_form, SqrtPVal};

#[test]
fn local_constant_equals_euler_factor_ratio() {
    common::local_constant_euler_family(101, 200).unwrap();
}

#[test]
fn local_constant_equals_root_product() {
    common::local_constant_roots_family(102, 200).unwrap();
}

#[test]
fn local_constant_from_trace_and_det() {
    common::local_constant_trace_det_family(103, 200).unwrap();
}

#[test]
fn fixture_prime_three() {
    common::local_constant_fixture_case().unwrap();
}

/// The summed series differs from the printed closed form; partial sums converge to the former.
#[test]
fn geometric_factor_is_the_summed_series() {
    let x = SqrtPVal::new(5, AlgNum::one(), 0);
    let summed = geometric_factor(&x).unwrap().value;
    assert_eq!(summed, AlgNum::rational(rat(31, 30)));
    assert_eq!(printed_geometric_form(&x).unwrap(), AlgNum::rational(rat(5, 6)));
    let partial = geometric_series_partial(&x, 40).unwrap();
    let gap = (&summed - &partial).a;
    assert!(gap > rat(0, 1) && gap < rat(1, 10i64.pow(18)));
}
