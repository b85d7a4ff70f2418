use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::rectangle::DirectedRectangle;
use super::SignError;
use crate::perm;

/// Size limit for the (state, rectangle) indexing used by the constraint
/// builder: the footprint of a composite is packed two bits per cell.
pub const MAX_CONSTRAINT_SIZE: usize = 8;

/// Indexing of the sign unknowns: one per grid state `x` and ordered pair of
/// distinct columns `(a, c)`, naming the rectangle from `x` with lower-left
/// corner on column `a` and upper-right corner on column `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleIndex {
    n: usize,
    states: Vec<Vec<u8>>,
}

impl RectangleIndex {
    pub fn new(n: usize) -> Self {
        RectangleIndex { n, states: perm::all_permutations(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn pairs_per_state(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.states.len() * self.pairs_per_state()
    }

    pub fn pair_index(&self, a: usize, c: usize) -> usize {
        debug_assert!(a != c);
        a * (self.n - 1) + if c < a { c } else { c - 1 }
    }

    pub fn pair_from_index(&self, k: usize) -> (usize, usize) {
        let a = k / (self.n - 1);
        let r = k % (self.n - 1);
        (a, if r < a { r } else { r + 1 })
    }

    pub fn var(&self, state_rank: usize, a: usize, c: usize) -> usize {
        state_rank * self.pairs_per_state() + self.pair_index(a, c)
    }

    pub fn decode(&self, var: usize) -> (usize, usize, usize) {
        let p = self.pairs_per_state();
        let (a, c) = self.pair_from_index(var % p);
        (var / p, a, c)
    }

    pub fn rectangle(&self, var: usize) -> (&[u8], DirectedRectangle) {
        let (s, a, c) = self.decode(var);
        let state = &self.states[s];
        (state, DirectedRectangle::from_state(state, a, c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConstraintKind {
    /// Two decompositions of one composite: `S(r1)S(r2) = −S(r1')S(r2')`.
    Square,
    /// Height-one, full-width annulus: `S(r1)S(r2) = +1`.
    HorizontalAnnulus,
    /// Width-one, full-height annulus: `S(r1)S(r2) = −1`.
    VerticalAnnulus,
}

/// `Σ s(v) = rhs` over F_2, where `S(v) = (−1)^{s(v)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub vars: Vec<u32>,
    pub rhs: bool,
    pub kind: ConstraintKind,
}

impl Equation {
    pub fn is_satisfied(&self, negative: &[bool]) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ negative[v as usize]) == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub index: RectangleIndex,
    pub equations: Vec<Equation>,
}

impl ConstraintSystem {
    pub fn num_vars(&self) -> usize {
        self.index.num_vars()
    }

    pub fn without_annuli(&self) -> ConstraintSystem {
        ConstraintSystem {
            index: self.index.clone(),
            equations: self.equations.iter().filter(|e| e.kind == ConstraintKind::Square).cloned().collect(),
        }
    }

    pub fn count(&self, kind: ConstraintKind) -> usize {
        self.equations.iter().filter(|e| e.kind == kind).count()
    }
}

fn footprint(r: &DirectedRectangle) -> u128 {
    let n = r.n;
    let mut f = 0u128;
    for (col, row) in r.cells() {
        f += 1u128 << (2 * (col * n + row));
    }
    f
}

fn thin_annulus_kind(r1: &DirectedRectangle, r2: &DirectedRectangle) -> Option<ConstraintKind> {
    let n = r1.n;
    if r1.height() == 1 && r2.height() == 1 && r1.row_start == r2.row_start && r1.width() + r2.width() == n {
        Some(ConstraintKind::HorizontalAnnulus)
    } else if r1.width() == 1 && r2.width() == 1 && r1.col_start == r2.col_start && r1.height() + r2.height() == n {
        Some(ConstraintKind::VerticalAnnulus)
    } else {
        None
    }
}

/// One composite of two rectangles, `x → y → z`.
struct Composite {
    first: u32,
    second: u32,
    annulus: Option<ConstraintKind>,
}

/// Enumerates every composable ordered pair of rectangles, groups the
/// composites by (start state, end state, footprint with multiplicities),
/// and emits the square and thin-annulus parity equations.
pub fn build_constraints(n: usize) -> Result<ConstraintSystem, SignError> {
    if n < 2 {
        return Err(SignError::GridTooSmall(n));
    }
    if n > MAX_CONSTRAINT_SIZE {
        return Err(SignError::GridTooLarge { n, max: MAX_CONSTRAINT_SIZE });
    }
    let index = RectangleIndex::new(n);
    let per_state: Vec<Result<Vec<Equation>, SignError>> = (0..index.states.len())
        .into_par_iter()
        .map(|x| constraints_from_state(&index, x))
        .collect();
    let mut equations = Vec::new();
    let mut seen = HashSet::new();
    for eqs in per_state {
        for e in eqs? {
            // annulus equations are found from both base states
            if seen.insert((e.vars.clone(), e.kind)) {
                equations.push(e);
            }
        }
    }
    Ok(ConstraintSystem { index, equations })
}

fn constraints_from_state(index: &RectangleIndex, x: usize) -> Result<Vec<Equation>, SignError> {
    let n = index.n;
    let xs = &index.states[x];
    let mut groups: BTreeMap<(usize, u128), Vec<Composite>> = BTreeMap::new();
    let mut y_state = xs.clone();
    let mut z_state = xs.clone();
    for a in 0..n {
        for c in (0..n).filter(|&c| c != a) {
            let r1 = DirectedRectangle::from_state(xs, a, c);
            let f1 = footprint(&r1);
            y_state.copy_from_slice(xs);
            y_state.swap(a, c);
            let y = perm::rank(&y_state);
            for a2 in 0..n {
                for c2 in (0..n).filter(|&c2| c2 != a2) {
                    let r2 = DirectedRectangle::from_state(&y_state, a2, c2);
                    z_state.copy_from_slice(&y_state);
                    z_state.swap(a2, c2);
                    let z = perm::rank(&z_state);
                    let annulus = if z == x { thin_annulus_kind(&r1, &r2) } else { None };
                    groups.entry((z, f1 + footprint(&r2))).or_default().push(Composite {
                        first: index.var(x, a, c) as u32,
                        second: index.var(y, a2, c2) as u32,
                        annulus,
                    });
                }
            }
        }
    }
    let mut out = Vec::new();
    for ((z, _), comps) in groups {
        if z == x {
            for comp in comps {
                if let Some(kind) = comp.annulus {
                    let mut vars = vec![comp.first, comp.second];
                    vars.sort_unstable();
                    out.push(Equation { vars, rhs: kind == ConstraintKind::VerticalAnnulus, kind });
                }
            }
            continue;
        }
        if comps.len() == 1 {
            // no alternative decomposition: unconstrained
            continue;
        }
        if comps.len() != 2 {
            return Err(SignError::UnexpectedComposite { state: x, decompositions: comps.len() });
        }
        let mut vars = vec![comps[0].first, comps[0].second, comps[1].first, comps[1].second];
        vars.sort_unstable();
        // a repeated variable cancels over F_2
        let mut reduced: Vec<u32> = Vec::with_capacity(4);
        for v in vars {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        out.push(Equation { vars: reduced, rhs: true, kind: ConstraintKind::Square });
    }
    Ok(out)
}
