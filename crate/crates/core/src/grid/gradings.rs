//! Maslov and Alexander gradings of grid states.
//!
//! With `I(P, Q)` the number of pairs `p ∈ P, q ∈ Q` with `p` strictly
//! south-west of `q` and `J(P, Q) = (I(P, Q) + I(Q, P)) / 2`,
//!
//! ```text
//! M_O(x) = J(x, x) − 2 J(x, O) + J(O, O) + 1
//! A(x)   = (M_O(x) − M_X(x)) / 2 − (n − ℓ) / 2
//! ```
//!
//! where `ℓ` is the number of link components. Markings sit at cell
//! centres, so all points are handled in doubled coordinates.

use super::GridDiagram;
use crate::homology::Bigrading;

type Point = (i64, i64);

fn state_points(x: &[u8]) -> Vec<Point> {
    x.iter().enumerate().map(|(c, &r)| (2 * c as i64, 2 * r as i64)).collect()
}

fn marking_points(m: &[u8]) -> Vec<Point> {
    m.iter().enumerate().map(|(c, &r)| (2 * c as i64 + 1, 2 * r as i64 + 1)).collect()
}

/// `I(P, Q) + I(Q, P) = 2 J(P, Q)`.
fn symmetric_count(p: &[Point], q: &[Point]) -> i64 {
    let mut count = 0;
    for a in p {
        for b in q {
            if (a.0 < b.0 && a.1 < b.1) || (b.0 < a.0 && b.1 < a.1) {
                count += 1;
            }
        }
    }
    count
}

/// Maslov grading of `x` with respect to the markings `m` (one per column).
pub fn maslov_with(m: &[u8], x: &[u8]) -> i64 {
    let xs = state_points(x);
    let ms = marking_points(m);
    let twice = symmetric_count(&xs, &xs) - 2 * symmetric_count(&xs, &ms) + symmetric_count(&ms, &ms);
    debug_assert!(twice % 2 == 0);
    twice / 2 + 1
}

/// The Maslov grading `M_O`.
pub fn maslov(g: &GridDiagram, x: &[u8]) -> i64 {
    maslov_with(g.o(), x)
}

/// Twice the Alexander grading.
pub fn alexander_twice(g: &GridDiagram, x: &[u8]) -> i64 {
    maslov_with(g.o(), x) - maslov_with(g.x(), x) - (g.n() - g.num_components()) as i64
}

pub fn gradings(g: &GridDiagram, x: &[u8]) -> Bigrading {
    Bigrading::new(maslov(g, x), alexander_twice(g, x))
}
