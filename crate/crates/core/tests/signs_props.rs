mod common;

use std::collections::BTreeSet;

use pinfloer::grid::{grid_from_permutations, tilde_homology};
use pinfloer::signs::{
    build_constraints, construct_sign_assignment_with, enumerate_rectangles, spin_sign_assignment,
    verify_against, verify_sign_assignment, ConstraintKind, FreeVariableRule, SignAssignment,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_grid, signs, FIXED_SUITE};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x7369_676e), failure_persistence: None, ..ProptestConfig::default() }
}

#[test]
fn constructed_assignments_verify() {
    for n in 2..=6 {
        let report = verify_sign_assignment(signs(n)).unwrap();
        assert!(report.equations_checked > 0);
        assert!(report.is_valid(), "n = {n}: {} violations", report.violations.len());
    }
}

#[test]
fn closed_form_assignments_verify() {
    for n in 2..=7 {
        let report = verify_sign_assignment(&spin_sign_assignment(n).unwrap()).unwrap();
        assert!(report.is_valid(), "n = {n}: {} violations", report.violations.len());
    }
}

#[test]
fn annulus_polarity() {
    for n in 2..=4 {
        let system = build_constraints(n).unwrap();
        assert!(system.count(ConstraintKind::HorizontalAnnulus) > 0);
        assert!(system.count(ConstraintKind::VerticalAnnulus) > 0);
        for e in &system.equations {
            match e.kind {
                ConstraintKind::HorizontalAnnulus => assert!(!e.rhs),
                ConstraintKind::VerticalAnnulus => assert!(e.rhs),
                ConstraintKind::Square => assert!(e.rhs),
            }
        }
        let report = verify_sign_assignment(&SignAssignment::all_positive(n)).unwrap();
        assert!(report.violations.iter().any(|v| v.kind == ConstraintKind::VerticalAnnulus));
        assert!(report.violations.iter().all(|v| v.kind != ConstraintKind::HorizontalAnnulus));
    }
}

#[test]
fn rectangle_enumeration_count() {
    for n in 2..=6 {
        let all = enumerate_rectangles(n).unwrap();
        let distinct: BTreeSet<_> = all.iter().map(|r| format!("{r:?}")).collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all.len(), 2 * (n * (n - 1)).pow(2));
    }
    assert!(enumerate_rectangles(1).is_err());
}

#[test]
fn flips_of_constrained_unknowns_are_detected() {
    let system = build_constraints(3).unwrap();
    let s = signs(3);
    let constrained: BTreeSet<u32> = system.equations.iter().flat_map(|e| e.vars.iter().copied()).collect();
    for var in 0..s.num_unknowns() {
        let mut t = s.clone();
        t.flip(var);
        let caught = !verify_against(&system, &t).is_valid();
        assert_eq!(caught, constrained.contains(&(var as u32)), "unknown {var}");
    }
    // a few unknowns appear in no equation at all
    assert!(constrained.len() < s.num_unknowns());
}

#[test]
fn text_roundtrip() {
    for n in 2..=4 {
        let s = construct_sign_assignment_with(n, FreeVariableRule::Seeded(n as u64)).unwrap();
        assert_eq!(SignAssignment::from_text(&s.to_text()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn gauges_give_isomorphic_homology(n in 2usize..=5, seed in any::<u64>(), grid_seed in any::<u64>()) {
        let gauge = construct_sign_assignment_with(n, FreeVariableRule::Seeded(seed)).unwrap();
        prop_assert!(verify_sign_assignment(&gauge).unwrap().is_valid());
        let spin = spin_sign_assignment(n).unwrap();
        let (o, x) = random_grid(&mut ChaCha8Rng::seed_from_u64(grid_seed), n);
        let g = grid_from_permutations(&o, &x).unwrap();
        let base = tilde_homology(&g, signs(n)).unwrap();
        prop_assert_eq!(&tilde_homology(&g, &gauge).unwrap(), &base);
        prop_assert_eq!(&tilde_homology(&g, &spin).unwrap(), &base);
    }
}

#[test]
fn gauges_agree_on_fixed_suite() {
    for (o, x) in FIXED_SUITE {
        let g = grid_from_permutations(o, x).unwrap();
        let n = o.len();
        let base = tilde_homology(&g, signs(n)).unwrap();
        for seed in [1, 2] {
            let gauge = construct_sign_assignment_with(n, FreeVariableRule::Seeded(seed)).unwrap();
            assert_eq!(tilde_homology(&g, &gauge).unwrap(), base, "{o:?} {x:?} seed {seed}");
        }
    }
}
