//! Small dense linear algebra over the rationals.
//!
//! Matrices are `Vec` of rows; vectors are plain `Vec<Q>`. Everything is
//! exact, sizes are tiny (a few dozen at most), so no effort is spent on
//! fill-in or pivot growth.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `xᵀ M y`.
pub fn bilinear(m: &[Vec<Q>], x: &[Q], y: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, row) in m.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        acc += &x[i] * dot(row, y);
    }
    acc
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn axpy(y: &mut [Q], a: &Q, x: &[Q]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scaled(v: &[Q], a: &Q) -> Vec<Q> {
    v.iter().map(|x| x * a).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the span of `vectors`.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : M x = 0}` for `M` with `cols` columns.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut r = m.to_vec();
    let pivots = rref(&mut r);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vec(cols);
        v[free] = Q::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Coordinates of `v` in the (independent) `basis`, or `None` if `v` is
/// outside its span.
pub fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let k = basis.len();
    let n = v.len();
    // augmented system with columns = basis vectors
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = zero_vec(k);
    for (row, &pc) in pivots.iter().enumerate() {
        out[pc] = m[row][k].clone();
    }
    Some(out)
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersection(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let Some(n) = a.first().or(b.first()).map(Vec::len) else { return Vec::new() };
    // x·a - y·b = 0, columns: a's vectors then b's vectors
    let cols = a.len() + b.len();
    let m: Vec<Vec<Q>> = (0..n)
        .map(|i| a.iter().map(|v| v[i].clone()).chain(b.iter().map(|v| -v[i].clone())).collect())
        .collect();
    let mut out: Vec<Vec<Q>> = Vec::new();
    for sol in nullspace(&m, cols) {
        let mut w = zero_vec(n);
        for (c, v) in a.iter().enumerate() {
            axpy(&mut w, &sol[c], v);
        }
        out.push(w);
    }
    independent_subset(&out)
}

/// A maximal independent subset, in order.
pub fn independent_subset(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut kept: Vec<Vec<Q>> = Vec::new();
    for v in vectors {
        let mut trial = kept.clone();
        trial.push(v.clone());
        if rank(&trial) == trial.len() {
            kept = trial;
        }
    }
    kept
}

/// Gram–Schmidt orthogonalization (no normalization) with respect to the
/// inner product `g`.
pub fn orthogonalize(g: &[Vec<Q>], vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = bilinear(g, &w, u) / bilinear(g, u, u);
            axpy(&mut w, &-c, u);
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

/// Basis of the `g`-orthogonal complement of `sub` inside `span`.
pub fn complement_within(g: &[Vec<Q>], span: &[Vec<Q>], sub: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let base = orthogonalize(g, sub);
    let mut all = base.clone();
    all.extend(span.iter().cloned());
    let ortho = orthogonalize(g, &all);
    ortho[base.len()..].to_vec()
}

/// Whether a symmetric matrix is positive definite (all pivots of the
/// symmetric elimination positive).
pub fn is_positive_definite(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    let mut a = m.to_vec();
    for c in 0..n {
        if !a[c][c].is_positive() {
            return false;
        }
        let inv = a[c][c].recip();
        for i in c + 1..n {
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    true
}

/// Sign (`±1`) of the change of basis between two bases of the same
/// subspace; `None` if they do not span the same space or are dependent.
pub fn relative_orientation(from: &[Vec<Q>], to: &[Vec<Q>]) -> Option<i32> {
    if from.len() != to.len() || rank(from) != from.len() {
        return None;
    }
    let mut change = Vec::with_capacity(to.len());
    for v in to {
        change.push(coordinates(from, v)?);
    }
    let d = det(&change);
    if d.is_zero() {
        None
    } else if d.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 1]])), q(1));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), q(-1));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_and_intersection() {
        let ns = nullspace(&m(&[&[1, 1, 0]]), 3);
        assert_eq!(ns.len(), 2);
        let i = intersection(&m(&[&[1, 0, 0], &[0, 1, 0]]), &m(&[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(i.len(), 1);
        assert_eq!(rank(&[i[0].clone(), vec![q(0), q(1), q(0)]]), 1);
    }

    #[test]
    fn orientation_sign() {
        let a = m(&[&[1, 0], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(relative_orientation(&a, &b), Some(-1));
        assert_eq!(relative_orientation(&a, &a), Some(1));
        assert_eq!(relative_orientation(&a, &m(&[&[1, 1], &[2, 2]])), None);
    }

    #[test]
    fn positive_definite() {
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
    }
}
