use std::collections::BTreeSet;

use num_rational::BigRational;
use pinfloer::torus_triangles::{
    bigon_differential, brute_force_classes, enumerate_bigons, enumerate_triangles, pair_reports, pair_sum,
    AnnulusConfig, GenusOneTriple, TriangleError,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x0074_7269), failure_persistence: None, ..ProptestConfig::default() }
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Closed form for the standard triple: lift `j` of `γ` is `x − y = j − ½`,
/// so the triangle is right isosceles with legs `|j − ½|`. It contains
/// `|j|(|j|+1)/2` or `j(j−1)/2` translates of `z` and `|j|+1` or `j−1`
/// translates of `p` on its `δ` edge.
fn oracle(j: i64) -> (u64, u8) {
    if j >= 1 {
        ((j * (j - 1) / 2) as u64, ((j - 1) % 2) as u8)
    } else {
        let m = -j;
        ((m * (m + 1) / 2) as u64, ((m + 1) % 2) as u8)
    }
}

#[test]
fn standard_classes_match_closed_form() {
    let t = GenusOneTriple::standard();
    let classes = enumerate_triangles(&t, 6).unwrap();
    assert_eq!(classes.len(), 12);
    for k in 1..=6usize {
        let lifts: BTreeSet<i64> = classes.iter().filter(|c| c.k == k).map(|c| c.gamma_lift).collect();
        assert_eq!(lifts, BTreeSet::from([k as i64, 1 - k as i64]), "pair {k}");
    }
    for c in &classes {
        let (n_z, parity) = oracle(c.gamma_lift);
        assert_eq!((c.n_z, c.delta_p_parity), (n_z, parity), "lift {}", c.gamma_lift);
        assert_eq!(c.n_z, (c.k * (c.k - 1) / 2) as u64);
        assert_eq!(c.rotation_partner, 1 - c.gamma_lift);
        assert_eq!(c.untwisted_sign, 1);
    }
}

#[test]
fn pairs_cancel_when_twisted() {
    let t = GenusOneTriple::standard();
    let classes = enumerate_triangles(&t, 8).unwrap();
    for r in pair_reports(&classes, 8) {
        assert_eq!(r.n_z, vec![r.expected_n_z; 2]);
        assert!(r.rotation_pairs_ok);
        assert_eq!(r.twisted_sum, 0);
        assert_eq!(r.untwisted_sum.abs(), 2);
        assert_eq!(r.twisted_sum, pair_sum(&classes, r.k, true));
    }
}

#[test]
fn brute_force_finds_nothing_new() {
    let t = GenusOneTriple::standard();
    let classes = enumerate_triangles(&t, 6).unwrap();
    let bound = 10; // n_z of pair 5
    let expected: BTreeSet<i64> = classes.iter().filter(|c| c.n_z <= bound).map(|c| c.gamma_lift).collect();
    let found: BTreeSet<i64> = brute_force_classes(&t, 7, bound).unwrap().into_iter().collect();
    assert_eq!(found, expected);
}

#[test]
fn bad_inputs() {
    let t = GenusOneTriple::standard();
    assert_eq!(enumerate_triangles(&t, 0), Err(TriangleError::BadBound));
    let mut on_beta = t.clone();
    on_beta.z = (frac(1, 2), frac(0, 1));
    assert!(enumerate_triangles(&on_beta, 2).is_err());
}

#[test]
fn bigon_pair_cancels() {
    for c in [AnnulusConfig::standard(), AnnulusConfig::standard().reversed()] {
        let b = enumerate_bigons(&c).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].sign + b[1].sign, 0);
        assert_ne!(b[0].left_of_alpha, b[1].left_of_alpha);
        assert_eq!(bigon_differential(&b), [0, 0]);
    }
}

proptest! {
    #![proptest_config(config(64))]

    /// The twist point can sit anywhere on `δ` away from the other curves;
    /// the rotation about `z` is only a symmetry for the standard `z`.
    #[test]
    fn moved_twist_point(py in -31i64..32) {
        let mut t = GenusOneTriple::standard();
        t.p = (frac(0, 1), frac(py, 32));
        prop_assume!(t.validate().is_ok());
        let classes = enumerate_triangles(&t, 5).unwrap();
        for r in pair_reports(&classes, 5) {
            prop_assert_eq!(&r.n_z, &vec![r.expected_n_z; 2]);
            prop_assert!(r.rotation_pairs_ok);
            prop_assert_eq!(r.twisted_sum, 0);
        }
    }
}
