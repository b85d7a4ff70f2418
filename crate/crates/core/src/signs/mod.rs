//! Sign assignments on grid rectangles.
//!
//! Unknowns are indexed by a grid state together with a rectangle leaving
//! it (see [`RectangleIndex`]). An assignment must satisfy
//!
//! * the square rule: the two decompositions of a composite domain carry
//!   opposite sign products;
//! * the horizontal annulus rule: a height-one annulus (along an alpha
//!   circle, i.e. a grid row) has sign product `+1`;
//! * the vertical annulus rule: a width-one annulus (along a beta circle, a
//!   grid column) has sign product `−1`.
//!
//! Rows are identified with alpha curves and columns with beta curves
//! throughout the crate.

mod constraints;
mod gf2;
mod rectangle;
mod spin;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use constraints::{build_constraints, ConstraintKind, ConstraintSystem, Equation, RectangleIndex, MAX_CONSTRAINT_SIZE};
pub use rectangle::{Direction, DirectedRectangle};

use gf2::{EchelonSystem, Insert};

use crate::perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignError {
    #[error("grid size {0} is below 2")]
    GridTooSmall(usize),
    #[error("grid size {n} exceeds the supported maximum {max}")]
    GridTooLarge { n: usize, max: usize },
    #[error("constraint system is inconsistent; certificate: {certificate}")]
    Inconsistent { certificate: String },
    #[error("composite from state {state} has {decompositions} decompositions (expected 2)")]
    UnexpectedComposite { state: usize, decompositions: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// How non-pivot unknowns are fixed after elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeVariableRule {
    /// Every free unknown is `+1`.
    Zeros,
    /// Free unknowns drawn from a ChaCha8 stream with this seed.
    Seeded(u64),
}

/// A `±1` label for every (state, rectangle) unknown of an `n × n` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    index: RectangleIndex,
    negative: Vec<bool>,
}

impl SignAssignment {
    /// The assignment with every sign `+1` (not a valid sign assignment).
    pub fn all_positive(n: usize) -> Self {
        let index = RectangleIndex::new(n);
        let negative = vec![false; index.num_vars()];
        SignAssignment { index, negative }
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn index(&self) -> &RectangleIndex {
        &self.index
    }

    pub fn num_unknowns(&self) -> usize {
        self.negative.len()
    }

    /// Sign of the rectangle leaving `state` (given by its lexicographic
    /// rank) with lower-left corner on column `a`, upper-right on column `c`.
    pub fn sign(&self, state_rank: usize, a: usize, c: usize) -> i32 {
        if self.negative[self.index.var(state_rank, a, c)] {
            -1
        } else {
            1
        }
    }

    pub fn sign_for_state(&self, state: &[u8], a: usize, c: usize) -> i32 {
        self.sign(perm::rank(state), a, c)
    }

    pub fn flip(&mut self, var: usize) {
        self.negative[var] = !self.negative[var];
    }

    pub fn raw(&self) -> &[bool] {
        &self.negative
    }

    /// Text form: a header `n=<size>`, then one line per unknown:
    /// `x_1 … x_n : a c b d dir sign`, all indices 1-based.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        let _ = writeln!(out, "# pinfloer signs v1");
        let _ = writeln!(out, "n={n}");
        for var in 0..self.negative.len() {
            let (state, r) = self.index.rectangle(var);
            for v in state {
                let _ = write!(out, "{} ", v + 1);
            }
            let _ = writeln!(
                out,
                ": {} {} {} {} {} {}",
                r.col_start + 1,
                r.col_end + 1,
                r.row_start + 1,
                r.row_end + 1,
                r.direction.bit(),
                if self.negative[var] { -1 } else { 1 }
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SignError> {
        let err = |line: usize, message: &str| SignError::Parse { line, message: message.to_string() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(hl + 1, "expected `n=<size>`"))?;
        if n < 2 {
            return Err(SignError::GridTooSmall(n));
        }
        if n > MAX_CONSTRAINT_SIZE {
            return Err(SignError::GridTooLarge { n, max: MAX_CONSTRAINT_SIZE });
        }
        let index = RectangleIndex::new(n);
        let mut negative = vec![false; index.num_vars()];
        let mut seen = vec![false; index.num_vars()];
        for (ln, line) in lines {
            let ln = ln + 1;
            let (state_part, rect_part) = line.split_once(':').ok_or_else(|| err(ln, "missing `:`"))?;
            let state: Vec<u8> = state_part
                .split_whitespace()
                .map(|t| t.parse::<u8>().ok().filter(|&v| v >= 1).map(|v| v - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| err(ln, "bad state entry"))?;
            if state.len() != n || !perm::is_permutation(&state) {
                return Err(err(ln, "state is not a permutation of the grid size"));
            }
            let nums: Vec<i64> = rect_part
                .split_whitespace()
                .map(|t| t.parse().ok())
                .collect::<Option<_>>()
                .ok_or_else(|| err(ln, "bad rectangle entry"))?;
            let [a, c, b, d, dir, sign] = nums[..] else {
                return Err(err(ln, "expected `a c b d dir sign`"));
            };
            let idx = |v: i64| if v >= 1 && v as usize <= n { Some(v as usize - 1) } else { None };
            let (Some(a), Some(c), Some(b), Some(d)) = (idx(a), idx(c), idx(b), idx(d)) else {
                return Err(err(ln, "rectangle index out of range"));
            };
            if dir != 0 || a == c || state[a] as usize != b || state[c] as usize != d {
                return Err(err(ln, "rectangle does not leave the given state"));
            }
            let var = index.var(perm::rank(&state), a, c);
            if seen[var] {
                return Err(err(ln, "duplicate rectangle"));
            }
            seen[var] = true;
            negative[var] = match sign {
                1 => false,
                -1 => true,
                _ => return Err(err(ln, "sign must be 1 or -1")),
            };
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            let (state, r) = index.rectangle(missing);
            return Err(err(0, &format!("no sign for state {:?}, rectangle {:?}", state, r)));
        }
        Ok(SignAssignment { index, negative })
    }
}

/// Every directed rectangle of the `n × n` grid torus.
pub fn enumerate_rectangles(n: usize) -> Result<Vec<DirectedRectangle>, SignError> {
    if n < 2 {
        return Err(SignError::GridTooSmall(n));
    }
    Ok(rectangle::all_rectangles(n))
}

fn describe(index: &RectangleIndex, e: &Equation) -> String {
    let mut s = format!("{:?}:", e.kind);
    for &v in &e.vars {
        let (state, r) = index.rectangle(v as usize);
        let _ = write!(s, " [{:?} cols {}->{} rows {}->{}]", state, r.col_start, r.col_end, r.row_start, r.row_end);
    }
    let _ = write!(s, " = {}", e.rhs as u8);
    s
}

/// Number of eliminations between re-solves in [`solve_system`].
const BATCH: usize = 4096;

/// Solves the parity system, adding equations lazily: after each batch of
/// independent equations the current solution is checked against every
/// equation and only violated ones are eliminated next. A violated equation
/// is never in the span of the current system, so every round makes
/// progress, and the loop ends with a solution of the full system.
pub fn solve_system(system: &ConstraintSystem, rule: FreeVariableRule) -> Result<Vec<bool>, SignError> {
    let vars = system.num_vars();
    let free: Vec<bool> = match rule {
        FreeVariableRule::Zeros => vec![false; vars],
        FreeVariableRule::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..vars).map(|_| rng.gen()).collect()
        }
    };
    let mut echelon = EchelonSystem::new(vars);
    let mut values = echelon.solve(|v| free[v]);
    loop {
        let violated: Vec<&Equation> =
            system.equations.iter().filter(|e| !e.is_satisfied(&values)).collect();
        if violated.is_empty() {
            return Ok(values);
        }
        let mut added = 0;
        for e in violated {
            match echelon.insert(&e.vars, e.rhs) {
                Insert::Independent => added += 1,
                Insert::Redundant => {}
                Insert::Inconsistent => {
                    return Err(SignError::Inconsistent { certificate: describe(&system.index, e) });
                }
            }
            if added >= BATCH {
                break;
            }
        }
        values = echelon.solve(|v| free[v]);
    }
}

/// Rank of the full parity system (eliminates every equation).
pub fn system_rank(system: &ConstraintSystem) -> Result<usize, SignError> {
    let mut echelon = EchelonSystem::new(system.num_vars());
    for e in &system.equations {
        if let Insert::Inconsistent = echelon.insert(&e.vars, e.rhs) {
            return Err(SignError::Inconsistent { certificate: describe(&system.index, e) });
        }
    }
    Ok(echelon.rank())
}

/// Builds a sign assignment for the `n × n` grid by elimination over F_2.
pub fn construct_sign_assignment(n: usize) -> Result<SignAssignment, SignError> {
    construct_sign_assignment_with(n, FreeVariableRule::Zeros)
}

pub fn construct_sign_assignment_with(n: usize, rule: FreeVariableRule) -> Result<SignAssignment, SignError> {
    let system = build_constraints(n)?;
    let negative = solve_system(&system, rule)?;
    Ok(SignAssignment { index: system.index, negative })
}

/// Sign assignment from transposition lifts in Pin(n).
pub fn spin_sign_assignment(n: usize) -> Result<SignAssignment, SignError> {
    if n < 2 {
        return Err(SignError::GridTooSmall(n));
    }
    if n > MAX_CONSTRAINT_SIZE {
        return Err(SignError::GridTooLarge { n, max: MAX_CONSTRAINT_SIZE });
    }
    let index = RectangleIndex::new(n);
    let negative = spin::spin_signs(&index);
    Ok(SignAssignment { index, negative })
}

/// Largest grid size for which [`sign_assignment_for`] solves the parity
/// system by elimination; larger grids use the closed form.
pub const ELIMINATION_MAX: usize = 6;

/// The crate's default sign assignment for an `n × n` grid.
pub fn sign_assignment_for(n: usize) -> Result<SignAssignment, SignError> {
    if n <= ELIMINATION_MAX {
        construct_sign_assignment(n)
    } else {
        spin_sign_assignment(n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ConstraintKind,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub equations_checked: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every square and annulus constraint.
pub fn verify_sign_assignment(s: &SignAssignment) -> Result<VerificationReport, SignError> {
    let system = build_constraints(s.n())?;
    Ok(verify_against(&system, s))
}

pub fn verify_against(system: &ConstraintSystem, s: &SignAssignment) -> VerificationReport {
    let violations = system
        .equations
        .iter()
        .filter(|e| !e.is_satisfied(&s.negative))
        .map(|e| Violation { kind: e.kind, description: describe(&system.index, e) })
        .collect();
    VerificationReport { n: s.n(), equations_checked: system.equations.len(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_counts() {
        assert_eq!(enumerate_rectangles(2).unwrap().len(), 8);
        assert_eq!(enumerate_rectangles(3).unwrap().len(), 72);
        assert_eq!(enumerate_rectangles(1), Err(SignError::GridTooSmall(1)));
    }

    #[test]
    fn reverse_closure() {
        let all = enumerate_rectangles(3).unwrap();
        let set: std::collections::HashSet<_> = all.iter().copied().collect();
        assert_eq!(set.len(), all.len());
        for r in &all {
            assert!(set.contains(&r.reversed()));
            let init = r.initial_corners();
            let term = r.terminal_corners();
            assert!(init.iter().all(|p| !term.contains(p)));
        }
    }

    #[test]
    fn small_systems_are_consistent() {
        for n in 2..=3 {
            let s = construct_sign_assignment(n).unwrap();
            assert!(verify_sign_assignment(&s).unwrap().is_valid());
        }
    }

    #[test]
    fn all_positive_fails_vertical_rule() {
        let report = verify_sign_assignment(&SignAssignment::all_positive(3)).unwrap();
        assert!(report.violations.iter().any(|v| v.kind == ConstraintKind::VerticalAnnulus));
        assert!(report.violations.iter().all(|v| v.kind != ConstraintKind::HorizontalAnnulus));
    }

    #[test]
    fn single_flip_is_detected() {
        let mut s = construct_sign_assignment(3).unwrap();
        for var in [0, 7, 35] {
            let mut t = s.clone();
            t.flip(var);
            assert!(!verify_sign_assignment(&t).unwrap().is_valid());
        }
        s.flip(0);
        s.flip(0);
        assert!(verify_sign_assignment(&s).unwrap().is_valid());
    }

    #[test]
    fn dropping_annuli_enlarges_solutions() {
        for n in 2..=3 {
            let full = build_constraints(n).unwrap();
            let squares = full.without_annuli();
            let full_rank = system_rank(&full).unwrap();
            let square_rank = system_rank(&squares).unwrap();
            assert!(square_rank < full_rank);
        }
    }

    #[test]
    fn text_roundtrip() {
        let s = construct_sign_assignment_with(3, FreeVariableRule::Seeded(9)).unwrap();
        let back = SignAssignment::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(SignAssignment::from_text("n=2\n1 2 : 1 2 1 2 0 5\n").is_err());
        assert!(SignAssignment::from_text("size 2").is_err());
        assert!(SignAssignment::from_text("n=2\n1 2 : 1 2 1 2 0 1\n").is_err());
    }

    #[test]
    fn closed_form_is_valid() {
        for n in 2..=5 {
            let s = spin_sign_assignment(n).unwrap();
            assert!(verify_sign_assignment(&s).unwrap().is_valid(), "n = {n}");
        }
    }

}

