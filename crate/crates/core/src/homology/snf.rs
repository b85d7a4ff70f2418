use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseIntMatrix;

/// `M = U · D · V` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ⋯`, all `d_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub d: SparseIntMatrix,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.nrows().min(self.d.ncols());
        (0..k).map(|i| self.d.get(i, i)).filter(|x| !x.is_zero()).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form with both transformation matrices, on a dense copy.
///
/// Intended for certification and small inputs; homology computations use
/// [`invariant_factors`], which keeps the matrix sparse and skips `U`, `V`.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithDecomposition {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.to_dense();
    // invariant: m = u · a · v
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row_multiple(&mut a, &mut u, i, t, &-q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col_multiple(&mut a, &mut v, j, t, &-q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest entry of row/column t onto the diagonal
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                swap_rows(&mut a, &mut u, t, best.0);
                swap_cols(&mut a, &mut v, t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => add_row_multiple(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for row in u.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
        t += 1;
    }
    SmithDecomposition { u, d: SparseIntMatrix::from_dense_shape(&a, rows, cols), v }
}

impl SparseIntMatrix {
    fn from_dense_shape(a: &[Vec<BigInt>], rows: usize, cols: usize) -> Self {
        let triples = a
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
        SparseIntMatrix::from_triples(rows, cols, triples).expect("dense shape is consistent")
    }
}

fn swap_rows(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in u.iter_mut() {
        row.swap(i, j);
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    v.swap(i, j);
}

/// row_target += c · row_source, with `U ← U · E⁻¹`.
fn add_row_multiple(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], target: usize, source: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(&src) {
        *x += c * s;
    }
    for row in u.iter_mut() {
        let t = c * &row[target];
        row[source] -= t;
    }
}

/// col_target += c · col_source, with `V ← E⁻¹ · V`.
fn add_col_multiple(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], target: usize, source: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let t = c * &row[source];
        row[target] += t;
    }
    let tgt = v[target].clone();
    for (x, t) in v[source].iter_mut().zip(&tgt) {
        *x -= c * t;
    }
}

/// Invariant factors (nonzero Smith diagonal, as a divisibility chain) of a
/// sparse integer matrix. Pivots are chosen by least absolute value, ties
/// broken by the Markowitz fill-in estimate.
pub fn invariant_factors(m: &SparseIntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.nrows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.ncols()];
    for (r, c, v) in m.entries() {
        rows[r].insert(c, v.clone());
        cols[c].insert(r);
    }
    let mut diagonal = Vec::new();

    loop {
        let mut best: Option<(usize, usize)> = None;
        let mut best_key: Option<(BigInt, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                let key = (v.abs(), (row.len() - 1) * (cols[c].len() - 1));
                if best_key.as_ref().is_none_or(|k| key < *k) {
                    best_key = Some(key);
                    best = Some((r, c));
                }
            }
            if best_key.as_ref().is_some_and(|k| k.0.is_one() && k.1 == 0) {
                break;
            }
        }
        let Some((pr, pc)) = best else { break };
        let pivot = rows[pr][&pc].clone();

        // clear the pivot column with row operations
        let mut clean = true;
        let others: Vec<usize> = cols[pc].iter().copied().filter(|&r| r != pr).collect();
        let pivot_row: Vec<(usize, BigInt)> = rows[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        for r in others {
            let q = rows[r][&pc].div_floor(&pivot);
            for (c, v) in &pivot_row {
                let entry = rows[r].entry(*c).or_insert_with(BigInt::zero);
                *entry -= &q * v;
                if entry.is_zero() {
                    rows[r].remove(c);
                    cols[*c].remove(&r);
                } else {
                    cols[*c].insert(r);
                }
            }
            if rows[r].contains_key(&pc) {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // the pivot column is now a single entry; column operations touch
        // only the pivot row
        let row_entries: Vec<usize> = rows[pr].keys().copied().filter(|&c| c != pc).collect();
        for c in row_entries {
            let rem = rows[pr][&c].mod_floor(&pivot);
            if rem.is_zero() {
                rows[pr].remove(&c);
                cols[c].remove(&pr);
            } else {
                rows[pr].insert(c, rem);
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        rows[pr].clear();
        cols[pc].clear();
        diagonal.push(pivot.abs());
    }
    divisibility_chain(diagonal)
}

/// Rewrites a diagonal into the equivalent divisibility chain via
/// `(a, b) ↦ (gcd, lcm)`.
pub(crate) fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let k = d.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}
