//! Sign assignments from the spin extension of the symmetric group.
//!
//! Each grid state `x` (a permutation of columns) gets a lift `s(x)` in
//! Pin(n), built as a product of transposition lifts `(e_i − e_j)/√2`
//! along a breadth-first spanning tree of the transposition Cayley graph.
//! A rectangle from `x` to `y = x·(i j)` compares `s(x)·(e_i − e_j)/√2`
//! with `s(y)`. The resulting `±1` is corrected by `−1` when the
//! rectangle's column interval wraps around the torus, and once more for
//! each point of `x` lying strictly below-left of a corner of the
//! rectangle (counted over all four corners).
//!
//! Clifford elements are kept with integer coefficients by using the
//! unnormalized vectors `e_i − e_j` (which square to 2).

use std::collections::VecDeque;

use super::constraints::RectangleIndex;
use super::rectangle::DirectedRectangle;
use crate::perm;

/// Dense Clifford element with integer coefficients, indexed by blade mask.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntMultivector(Vec<i64>);

impl IntMultivector {
    fn one(n: usize) -> Self {
        let mut v = vec![0; 1 << n];
        v[0] = 1;
        IntMultivector(v)
    }

    /// `self · (e_i − e_j)`.
    fn mul_difference(&self, i: usize, j: usize) -> Self {
        let mut out = vec![0i64; self.0.len()];
        for (blade, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, coeff) in [(i, c), (j, -c)] {
                // e_blade · e_k: sign from generators of the blade above k
                let above = (blade >> (k + 1)).count_ones();
                let s = if above % 2 == 1 { -coeff } else { coeff };
                out[blade ^ (1 << k)] += s;
            }
        }
        IntMultivector(out)
    }

    /// Returns `Some(λ)` with `self = λ·other` for a rational λ of known
    /// sign, comparing via the first nonzero coefficient.
    fn sign_relative_to(&self, other: &Self) -> i32 {
        let k = other.0.iter().position(|&c| c != 0).expect("lift is nonzero");
        let (a, b) = (self.0[k], other.0[k]);
        debug_assert!(a != 0);
        // proportionality check
        debug_assert!(self.0.iter().zip(&other.0).all(|(&x, &y)| x as i128 * b as i128 == y as i128 * a as i128));
        if (a > 0) == (b > 0) {
            1
        } else {
            -1
        }
    }
}

/// Computes the sign of every (state, rectangle) unknown of the index.
pub(crate) fn spin_signs(index: &RectangleIndex) -> Vec<bool> {
    let n = index.n();
    let states = index.states();
    let mut lifts: Vec<Option<IntMultivector>> = vec![None; states.len()];
    lifts[0] = Some(IntMultivector::one(n));
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let lift = lifts[x].clone().expect("queued states have lifts");
        for i in 0..n {
            for j in i + 1..n {
                let mut y = states[x].clone();
                y.swap(i, j);
                let yr = perm::rank(&y);
                if lifts[yr].is_none() {
                    lifts[yr] = Some(lift.mul_difference(i, j));
                    queue.push_back(yr);
                }
            }
        }
    }
    let mut negative = vec![false; index.num_vars()];
    for (x, state) in states.iter().enumerate() {
        let lift = lifts[x].as_ref().expect("Cayley graph is connected");
        for i in 0..n {
            for j in i + 1..n {
                let mut y = state.clone();
                y.swap(i, j);
                let y_lift = lifts[perm::rank(&y)].as_ref().expect("connected");
                let sigma = lift.mul_difference(i, j).sign_relative_to(y_lift);
                for (a, c) in [(i, j), (j, i)] {
                    let r = DirectedRectangle::from_state(state, a, c);
                    let flip = (r.col_end < r.col_start) ^ corner_parity(state, &r);
                    let sign = if flip { -sigma } else { sigma };
                    negative[index.var(x, a, c)] = sign < 0;
                }
            }
        }
    }
    negative
}


/// Parity of the total count of points of `state` lying strictly below and
/// to the left of each of the four corners of `r`.
fn corner_parity(state: &[u8], r: &DirectedRectangle) -> bool {
    let mut total = 0;
    for col in [r.col_start, r.col_end] {
        for row in [r.row_start, r.row_end] {
            total += state[..col].iter().filter(|&&y| (y as usize) < row).count();
        }
    }
    total % 2 == 1
}
