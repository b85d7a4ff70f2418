//! Oracles shared by the integration tests. None of them reuse the
//! library's rectangle enumeration, gradings or Smith normal form.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use pinfloer::clifford::{pin_from_vectors, PinElement, Scalar, Vector};
use pinfloer::grid::GridComplex;
use pinfloer::signs::{construct_sign_assignment, SignAssignment};
use rand::seq::SliceRandom;
use rand::Rng;

/// `(Maslov, twice Alexander)`.
pub type Key = (i64, i64);

pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u8);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Sign assignments by size, built once per test binary.
pub fn signs(n: usize) -> &'static SignAssignment {
    static CACHE: [OnceLock<SignAssignment>; 7] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[n].get_or_init(|| construct_sign_assignment(n).expect("sign assignment"))
}

/// Random grid `(O, X)` of size `n`: `X = O ∘ d` for a derangement `d`.
pub fn random_grid<R: Rng>(rng: &mut R, n: usize) -> (Vec<u8>, Vec<u8>) {
    let mut o: Vec<u8> = (0..n as u8).collect();
    o.shuffle(rng);
    loop {
        let mut d: Vec<usize> = (0..n).collect();
        d.shuffle(rng);
        if d.iter().enumerate().all(|(i, &j)| i != j) {
            let x = d.iter().map(|&j| o[j]).collect();
            return (o, x);
        }
    }
}

pub fn component_count(o: &[u8], x: &[u8]) -> usize {
    let n = o.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            // X in column c, then along its row to the O there
            let row = x[c];
            c = o.iter().position(|&r| r == row).unwrap();
        }
    }
    count
}

/// `2 · J(P, Q)`: pairs with one point strictly north-east of the other.
/// Points are given in quarter units so states and markings mix freely.
fn twice_j(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    p.iter()
        .flat_map(|a| q.iter().map(move |b| (a, b)))
        .filter(|(a, b)| (a.0 - b.0).signum() * (a.1 - b.1).signum() > 0)
        .count() as i64
}

fn maslov(markings: &[u8], x: &[u8]) -> i64 {
    let xs: Vec<(i64, i64)> = x.iter().enumerate().map(|(c, &r)| (4 * c as i64, 4 * r as i64)).collect();
    let ms: Vec<(i64, i64)> = markings.iter().enumerate().map(|(c, &r)| (4 * c as i64 + 2, 4 * r as i64 + 2)).collect();
    (twice_j(&xs, &xs) - 2 * twice_j(&xs, &ms) + twice_j(&ms, &ms)) / 2 + 1
}

pub fn oracle_grading(o: &[u8], x: &[u8], state: &[u8]) -> Key {
    let n = o.len() as i64;
    let l = component_count(o, x) as i64;
    let mo = maslov(o, state);
    (mo, mo - maslov(x, state) - (n - l))
}

/// Whether `v` lies strictly inside the cyclic interval from `a` to `b`.
fn strictly_between(a: usize, b: usize, v: usize, n: usize) -> bool {
    let len = (b + n - a) % n;
    let off = (v + n - a) % n;
    off > 0 && off < len
}

/// Cells `[a, b)` in cyclic order.
fn cyclic_range(a: usize, b: usize, n: usize) -> impl Iterator<Item = usize> {
    let len = (b + n - a) % n;
    (0..len).map(move |k| (a + k) % n)
}

/// Empty marking-free rectangles out of `state`, as target states.
pub fn oracle_rectangles(o: &[u8], x: &[u8], state: &[u8]) -> Vec<Vec<u8>> {
    let n = state.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (ri, rj) = (state[i] as usize, state[j] as usize);
            let occupied = (0..n).any(|c| strictly_between(i, j, c, n) && strictly_between(ri, rj, state[c] as usize, n));
            if occupied {
                continue;
            }
            let marked = cyclic_range(i, j, n).any(|c| {
                let inside = |r: u8| cyclic_range(ri, rj, n).any(|rr| rr == r as usize);
                inside(o[c]) || inside(x[c])
            });
            if marked {
                continue;
            }
            let mut y = state.to_vec();
            y.swap(i, j);
            out.push(y);
        }
    }
    out
}

/// Rank over F_2 of rows given as bit vectors.
fn rank_f2(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for bit in 0..width {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (a, c) in row.iter_mut().zip(&pivot) {
                    *a ^= c;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Unsigned tilde homology over F_2: dimension per bigrading.
pub fn mod2_oracle(o: &[u8], x: &[u8]) -> BTreeMap<Key, usize> {
    let states = permutations(o.len());
    let keys: Vec<Key> = states.iter().map(|s| oracle_grading(o, x, s)).collect();
    let mut blocks: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        blocks.entry(*k).or_default().push(i);
    }
    let position: BTreeMap<&[u8], usize> = states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    // rank of the differential leaving each block
    let mut out_rank: BTreeMap<Key, usize> = BTreeMap::new();
    for (k, members) in &blocks {
        let target = (k.0 - 1, k.1);
        let Some(cols) = blocks.get(&target) else {
            out_rank.insert(*k, 0);
            continue;
        };
        let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(c, &s)| (s, c)).collect();
        let words = cols.len().div_ceil(64);
        let rows: Vec<Vec<u64>> = members
            .iter()
            .map(|&s| {
                let mut row = vec![0u64; words];
                for y in oracle_rectangles(o, x, &states[s]) {
                    let t = position[y.as_slice()];
                    let c = *col_of.get(&t).expect("rectangles drop Maslov by one");
                    row[c / 64] ^= 1 << (c % 64);
                }
                row
            })
            .collect();
        out_rank.insert(*k, rank_f2(rows));
    }
    blocks
        .iter()
        .map(|(k, members)| {
            let incoming = out_rank.get(&(k.0 + 1, k.1)).copied().unwrap_or(0);
            (*k, members.len() - out_rank[k] - incoming)
        })
        .filter(|(_, d)| *d > 0)
        .collect()
}

/// Rank of a rational matrix by fraction-based elimination.
pub fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot[c];
                for (a, b) in m[r].iter_mut().zip(&pivot) {
                    *a -= &f * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank per bigrading of a tilde complex, by rank-nullity over Q.
pub fn rational_oracle(c: &GridComplex) -> BTreeMap<Key, usize> {
    let mut blocks: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for x in 0..c.num_generators() {
        let b = c.grading(x);
        blocks.entry((b.maslov, b.alexander_twice)).or_default().push(x);
    }
    let mut out_rank = BTreeMap::new();
    for (k, members) in &blocks {
        let cols = blocks.get(&(k.0 - 1, k.1)).cloned().unwrap_or_default();
        let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let m: Vec<Vec<BigRational>> = members
            .iter()
            .map(|&x| {
                let mut row = vec![BigRational::zero(); cols.len()];
                for t in c.terms(x) {
                    row[col_of[&(t.target as usize)]] += BigRational::from_integer(BigInt::from(t.sign));
                }
                row
            })
            .collect();
        out_rank.insert(*k, if cols.is_empty() { 0 } else { rational_rank(m) });
    }
    blocks
        .iter()
        .map(|(k, members)| {
            let incoming = out_rank.get(&(k.0 + 1, k.1)).copied().unwrap_or(0);
            (*k, members.len() - out_rank[k] - incoming)
        })
        .filter(|(_, d)| *d > 0)
        .collect()
}

/// `Σ_x (−1)^{M(x)} t^{A(x)}` keyed by `2A`.
pub fn euler_characteristic(o: &[u8], x: &[u8]) -> BTreeMap<i64, i64> {
    let mut chi = BTreeMap::new();
    for s in permutations(o.len()) {
        let (m, a2) = oracle_grading(o, x, &s);
        *chi.entry(a2).or_insert(0) += if m.rem_euclid(2) == 0 { 1 } else { -1 };
    }
    chi.retain(|_, v| *v != 0);
    chi
}

/// Exact quotient by `(1 − t^{−1})^k` (keys are `2A`), if it divides.
pub fn divide_by_one_minus_inverse_t(p: &BTreeMap<i64, i64>, k: usize) -> Option<BTreeMap<i64, i64>> {
    let mut cur = p.clone();
    for _ in 0..k {
        let (Some(&lo), Some(&hi)) = (cur.keys().next(), cur.keys().next_back()) else { return Some(cur) };
        if cur.keys().any(|e| (e - hi) % 2 != 0) {
            return None;
        }
        // q[e] = p[e] + q[e + 2] from the top down; the term carried below
        // `lo` is the remainder
        let mut q = BTreeMap::new();
        let mut carry = 0;
        for e in (lo..=hi).rev().step_by(2) {
            carry += cur.get(&e).copied().unwrap_or(0);
            q.insert(e, carry);
        }
        if carry != 0 {
            return None;
        }
        q.retain(|_, v| *v != 0);
        cur = q;
    }
    Some(cur)
}

/// Determinant of an integer matrix (Bareiss).
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Textbook dense Smith normal form: repeatedly move the smallest entry to
/// the corner, clear its row and column by division, and restart whenever
/// a remainder or a non-divisible entry appears.
pub fn textbook_invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return finish(out) };
            a.swap(t, bi);
            for r in a.iter_mut() {
                r.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = &a[t][j] / &a[t][t];
                for i in t..rows {
                    let v = &q * &a[i][t];
                    a[i][j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest; otherwise fold a row in
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    finish(out)
}

fn finish(out: Vec<BigInt>) -> Vec<BigInt> {
    out.into_iter().filter(|v| !v.is_zero()).collect()
}

/// Small diagrams used wherever a fixed suite is needed: unknots, unlinks,
/// Hopf links, the trefoil and a few more.
pub const FIXED_SUITE: [(&[u8], &[u8]); 10] = [
    (&[1, 0], &[0, 1]),
    (&[1, 2, 0], &[0, 1, 2]),
    (&[2, 0, 1], &[0, 1, 2]),
    (&[1, 0, 3, 2], &[0, 1, 2, 3]),
    (&[2, 3, 0, 1], &[0, 1, 2, 3]),
    (&[1, 2, 3, 0], &[0, 1, 2, 3]),
    (&[2, 3, 4, 0, 1], &[0, 1, 2, 3, 4]),
    (&[1, 2, 3, 4, 0], &[0, 1, 2, 3, 4]),
    (&[3, 4, 0, 1, 2], &[0, 1, 2, 3, 4]),
    (&[1, 0, 3, 4, 2], &[0, 1, 2, 3, 4]),
];

/// A rational unit vector by inverse stereographic projection of an integer
/// point, or occasionally `(e_i − e_j)/√2`.
pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vector {
    if n >= 2 && rng.gen_ratio(1, 4) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::inv_sqrt2();
        v[j] = -Scalar::inv_sqrt2();
        return v;
    }
    let u: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
    let s: i64 = u.iter().map(|x| x * x).sum();
    let mut v: Vector = u.iter().map(|&x| Scalar::from_ratio(2 * x, s + 1)).collect();
    v.push(Scalar::from_ratio(s - 1, s + 1));
    // move the distinguished coordinate and the sign around
    let k = rng.gen_range(0..n);
    v.swap(k, n - 1);
    if rng.gen() {
        v[k] = -&v[k];
    }
    v
}

pub fn vectors<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Vector> {
    (0..k).map(|_| unit_vector(rng, n)).collect()
}

pub fn random_pin<R: Rng>(rng: &mut R, n: usize) -> PinElement {
    let k = rng.gen_range(0..=3);
    pin_from_vectors(n, &vectors(rng, n, k)).unwrap()
}

/// Either a relative of `p` (negated, padded with `v v`, or with a vector
/// flipped) or an independent element.
pub fn partner<R: Rng>(rng: &mut R, n: usize, p: &PinElement) -> PinElement {
    let mut vs = p.provenance().to_vec();
    match rng.gen_range(0..4) {
        0 if !vs.is_empty() => {
            let i = rng.gen_range(0..vs.len());
            vs[i] = vs[i].iter().map(|c| -c).collect();
        }
        1 => {
            let v = unit_vector(rng, n);
            let i = rng.gen_range(0..=vs.len());
            vs.insert(i, v.clone());
            vs.insert(i, v);
        }
        2 => return p.negate(),
        _ => return random_pin(rng, n),
    }
    pin_from_vectors(n, &vs).unwrap()
}
