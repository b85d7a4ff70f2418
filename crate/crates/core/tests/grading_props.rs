mod common;

use num_traits::{Signed, Zero};
use pinfloer::grading::{
    betti_numbers, canonical_coupled_orientation, canonical_coupled_orientation_with_basis, gr_hf, tau_iso,
    GeneratorLocalData, SurfaceHomologyData, SymplecticSpace,
};
use pinfloer::linalg::{self, q, Q};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::permutations;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x6772_6164), failure_persistence: None, ..ProptestConfig::default() }
}

fn omega(x: &[i64], y: &[i64]) -> i64 {
    (0..x.len() / 2).map(|i| x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]).sum()
}

/// Applies a random product of integer symplectic transvections
/// `x ↦ x + k·ω(v, x)·v` to each vector.
fn scramble(rng: &mut ChaCha8Rng, g: usize, vs: &mut [Vec<i64>]) {
    for _ in 0..2 * g + 1 {
        let v: Vec<i64> = (0..2 * g).map(|_| rng.gen_range(-1..=1)).collect();
        let k = if rng.gen() { 1 } else { -1 };
        for x in vs.iter_mut() {
            let c = k * omega(&v, x);
            for (xi, vi) in x.iter_mut().zip(&v) {
                *xi += c * vi;
            }
        }
    }
}

/// A random pair of integral Lagrangians in the standard genus-`g` space.
fn lagrangian_pair(rng: &mut ChaCha8Rng, g: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let standard = |offset: usize| -> Vec<Vec<i64>> {
        (0..g).map(|i| (0..2 * g).map(|j| i64::from(j == 2 * i + offset)).collect()).collect()
    };
    let mut alpha = standard(0);
    let mut beta = standard(rng.gen_range(0..=1));
    scramble(rng, g, &mut alpha);
    scramble(rng, g, &mut beta);
    (alpha, beta)
}

fn data(g: usize, alpha: &[Vec<i64>], beta: &[Vec<i64>]) -> SurfaceHomologyData {
    SurfaceHomologyData::new(SymplecticSpace::standard(g), alpha, beta).unwrap()
}

fn random_generator(rng: &mut ChaCha8Rng, g: usize) -> GeneratorLocalData {
    let mut sigma: Vec<usize> = (0..g).collect();
    sigma.shuffle(rng);
    GeneratorLocalData { sigma, signs: (0..g).map(|_| if rng.gen() { 1 } else { -1 }).collect() }
}

/// `I + PᵀP` for a small random integer `P`.
fn positive_definite(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Q>> {
    let p: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| q(i64::from(i == j) + (0..n).map(|k| p[k][i] * p[k][j]).sum::<i64>())).collect())
        .collect()
}

/// Sum of `(−1)^{gr_HF}` over the generators of a diagram whose curves meet
/// minimally, `|ω(α_i, β_j)|` times with sign `sgn ω(α_i, β_j)`.
fn euler_sum(d: &SurfaceHomologyData, alpha: &[Vec<i64>], beta: &[Vec<i64>]) -> i64 {
    let g = alpha.len();
    let mut total = 0;
    for sigma in permutations(g) {
        let w: Vec<i64> = (0..g).map(|i| omega(&alpha[i], &beta[sigma[i] as usize])).collect();
        if w.contains(&0) {
            continue;
        }
        let x = GeneratorLocalData {
            sigma: sigma.iter().map(|&s| s as usize).collect(),
            signs: w.iter().map(|v| v.signum()).collect(),
        };
        let count: i64 = w.iter().map(|v| v.abs()).product();
        total += if gr_hf(d, &x).unwrap() == 0 { count } else { -count };
    }
    total
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn tau_is_an_isomorphism(g in 1usize..=4, seed in any::<u64>()) {
        let rng = &mut ChaCha8Rng::seed_from_u64(seed);
        let (alpha, beta) = lagrangian_pair(rng, g);
        let d = data(g, &alpha, &beta);
        let tau = tau_iso(d.space(), d.alpha(), d.beta()).unwrap();
        prop_assert_eq!(tau.rank(), g);
        for v in d.alpha().basis() {
            prop_assert!(d.beta().contains(&tau.apply(v).unwrap()));
        }
        for k in linalg::intersection(d.alpha().basis(), d.beta().basis()) {
            prop_assert_eq!(tau.apply(&k).unwrap(), k);
        }
        let (b1, h2) = betti_numbers(&d);
        prop_assert_eq!(b1, h2);
    }

    #[test]
    fn grading_ignores_inner_product(g in 1usize..=4, seed in any::<u64>()) {
        let rng = &mut ChaCha8Rng::seed_from_u64(seed);
        let (alpha, beta) = lagrangian_pair(rng, g);
        let d = data(g, &alpha, &beta);
        let d2 = d.with_inner_product(positive_definite(rng, 2 * g)).unwrap();
        let base = canonical_coupled_orientation(&d).unwrap();
        prop_assert_eq!(base.relative_sign(&canonical_coupled_orientation(&d2).unwrap()).unwrap(), 1);
        for _ in 0..4 {
            let x = random_generator(rng, g);
            prop_assert_eq!(gr_hf(&d, &x).unwrap(), gr_hf(&d2, &x).unwrap());
        }
    }

    #[test]
    fn orientation_ignores_alpha_basis(g in 1usize..=4, seed in any::<u64>()) {
        let rng = &mut ChaCha8Rng::seed_from_u64(seed);
        let (alpha, beta) = lagrangian_pair(rng, g);
        let d = data(g, &alpha, &beta);
        // random invertible change of basis, orientation reversing or not
        let mut basis: Vec<Vec<Q>> = d.alpha().basis().to_vec();
        for _ in 0..3 * g {
            let i = rng.gen_range(0..g);
            let j = rng.gen_range(0..g);
            match rng.gen_range(0..3) {
                0 if i != j => {
                    let c = q(rng.gen_range(-2..=2));
                    let vj = basis[j].clone();
                    linalg::axpy(&mut basis[i], &c, &vj);
                }
                1 => basis.swap(i, j),
                _ => basis[i] = linalg::scaled(&basis[i], &q(-rng.gen_range(1..=3))),
            }
        }
        let base = canonical_coupled_orientation(&d).unwrap();
        let other = canonical_coupled_orientation_with_basis(&d, &basis).unwrap();
        prop_assert_eq!(base.relative_sign(&other).unwrap(), 1);
    }

    #[test]
    fn grading_ignores_curve_labels(g in 1usize..=4, seed in any::<u64>()) {
        let rng = &mut ChaCha8Rng::seed_from_u64(seed);
        let (alpha, beta) = lagrangian_pair(rng, g);
        let d = data(g, &alpha, &beta);
        let x = random_generator(rng, g);

        // relabel: new α_i is old α_{pa[i]}, new β_j is old β_{pb[j]}
        let mut pa: Vec<usize> = (0..g).collect();
        let mut pb: Vec<usize> = (0..g).collect();
        pa.shuffle(rng);
        pb.shuffle(rng);
        let ra: Vec<bool> = (0..g).map(|_| rng.gen()).collect();
        let rb: Vec<bool> = (0..g).map(|_| rng.gen()).collect();
        let flip = |v: &Vec<i64>, r: bool| -> Vec<i64> { v.iter().map(|c| if r { -c } else { *c }).collect() };
        let alpha2: Vec<Vec<i64>> = (0..g).map(|i| flip(&alpha[pa[i]], ra[i])).collect();
        let beta2: Vec<Vec<i64>> = (0..g).map(|j| flip(&beta[pb[j]], rb[j])).collect();
        let mut pb_inv = vec![0; g];
        for (j, &old) in pb.iter().enumerate() {
            pb_inv[old] = j;
        }
        // reversing either curve through a point flips its local sign
        let sigma: Vec<usize> = (0..g).map(|i| pb_inv[x.sigma[pa[i]]]).collect();
        let signs: Vec<i64> = (0..g)
            .map(|i| {
                let s = x.signs[pa[i]];
                if ra[i] != rb[sigma[i]] { -s } else { s }
            })
            .collect();
        let d2 = data(g, &alpha2, &beta2);
        let x2 = GeneratorLocalData { sigma, signs };
        prop_assert_eq!(gr_hf(&d, &x).unwrap(), gr_hf(&d2, &x2).unwrap());
    }

    #[test]
    fn euler_sum_ignores_orientations(g in 1usize..=3, seed in any::<u64>()) {
        let rng = &mut ChaCha8Rng::seed_from_u64(seed);
        let (alpha, beta) = lagrangian_pair(rng, g);
        let d = data(g, &alpha, &beta);
        prop_assume!(betti_numbers(&d).0 == 0);
        let chi = euler_sum(&d, &alpha, &beta);

        let flip = |vs: &[Vec<i64>], mask: &[bool]| -> Vec<Vec<i64>> {
            vs.iter().zip(mask).map(|(v, &r)| v.iter().map(|c| if r { -c } else { *c }).collect()).collect()
        };
        let ra: Vec<bool> = (0..g).map(|_| rng.gen()).collect();
        let rb: Vec<bool> = (0..g).map(|_| rng.gen()).collect();
        let (alpha2, beta2) = (flip(&alpha, &ra), flip(&beta, &rb));
        prop_assert_eq!(euler_sum(&data(g, &alpha2, &beta2), &alpha2, &beta2), chi);

        // and it counts H_1: |det ω(α_i, β_j)|
        let m: Vec<Vec<Q>> =
            alpha.iter().map(|a| beta.iter().map(|b| q(omega(a, b))).collect()).collect();
        let det = linalg::det(&m);
        prop_assert!(!det.is_zero());
        prop_assert_eq!(q(chi), det.abs());
    }
}

#[test]
fn genus_one_examples() {
    let s3 = data(1, &[vec![1, 0]], &[vec![0, 1]]);
    assert_eq!(betti_numbers(&s3), (0, 0));
    assert_eq!(gr_hf(&s3, &GeneratorLocalData { sigma: vec![0], signs: vec![1] }).unwrap(), 0);

    let s1s2 = data(1, &[vec![1, 0]], &[vec![1, 0]]);
    assert_eq!(betti_numbers(&s1s2), (1, 1));
    let gr = |s| gr_hf(&s1s2, &GeneratorLocalData { sigma: vec![0], signs: vec![s] }).unwrap();
    assert_eq!((gr(1), gr(-1)), (1, 0));

    // lens space L(3, 1): three generators, all even
    let l31 = data(1, &[vec![1, 0]], &[vec![1, 3]]);
    assert_eq!(euler_sum(&l31, &[vec![1, 0]], &[vec![1, 3]]), 3);
}
