//! Grid diagrams, their states and bigradings, the signed grid chain
//! complexes, and grid moves.
//!
//! Coordinates: columns and rows are numbered `0..n` from the left and from
//! the bottom. Lattice point `(c, r)` is the lower-left corner of cell
//! `(c, r)`. Column `i` carries an `O` in cell `(i, O(i))` and an `X` in
//! cell `(i, X(i))`. Grid rows play the role of alpha curves and columns of
//! beta curves; `O` markings are the `w` basepoints and `X` the `z`.
//! A grid state is a permutation `x`, with `x[c]` the row of its point on
//! vertical circle `c`.

mod complex;
mod gradings;
mod moves;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::homology::HomologyError;
use crate::perm;
use crate::signs::SignError;

pub use complex::{
    tilde_homology, Flavor, GridComplex, SquareCertificate, Term, VERIFY_MAX,
};
pub use gradings::{alexander_twice, gradings, maslov, maslov_with};
pub use moves::{apply_move, Corner, GridMove};

/// Default size cap for grid computations.
pub const DEFAULT_MAX_SIZE: usize = 8;
/// Absolute size cap; diagrams beyond it are rejected outright.
pub const HARD_MAX_SIZE: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("O and X have different sizes ({o} vs {x})")]
    SizeMismatch { o: usize, x: usize },
    #[error("{which} is not a permutation of 1..{n}")]
    NotAPermutation { which: &'static str, n: usize },
    #[error("O and X share the cell in column {}", column + 1)]
    Overlap { column: usize },
    #[error("grid size {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("grid size must be at least 2")]
    TooSmall,
    #[error("grid file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("sign assignment has size {found}, grid has size {expected}")]
    SignSizeMismatch { expected: usize, found: usize },
    #[error("sign assignment fails verification ({violations} violated constraints)")]
    InvalidSigns { violations: usize },
    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Which kind of marking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Marking {
    O,
    X,
}

/// An `n × n` grid diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    o: Vec<u8>,
    x: Vec<u8>,
    components: Vec<Vec<usize>>,
}

/// Validates `O` and `X` (0-based rows per column) and traces components.
pub fn grid_from_permutations(o: &[u8], x: &[u8]) -> Result<GridDiagram, GridError> {
    if o.len() != x.len() {
        return Err(GridError::SizeMismatch { o: o.len(), x: x.len() });
    }
    let n = o.len();
    if n < 2 {
        return Err(GridError::TooSmall);
    }
    if n > HARD_MAX_SIZE {
        return Err(GridError::TooLarge { n, max: HARD_MAX_SIZE });
    }
    if !perm::is_permutation(o) {
        return Err(GridError::NotAPermutation { which: "O", n });
    }
    if !perm::is_permutation(x) {
        return Err(GridError::NotAPermutation { which: "X", n });
    }
    if let Some(column) = (0..n).find(|&i| o[i] == x[i]) {
        return Err(GridError::Overlap { column });
    }
    let components = trace_components(o, x);
    Ok(GridDiagram { o: o.to_vec(), x: x.to_vec(), components })
}

/// Components as cycles of columns: from the `X` in column `i`, follow its
/// row to that row's `O`, then that `O`'s column.
fn trace_components(o: &[u8], x: &[u8]) -> Vec<Vec<usize>> {
    let o_inv = perm::inverse(o);
    let n = o.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = o_inv[x[i] as usize] as usize;
        }
        out.push(cycle);
    }
    out
}

impl GridDiagram {
    pub fn n(&self) -> usize {
        self.o.len()
    }

    /// Row of the `O` in each column.
    pub fn o(&self) -> &[u8] {
        &self.o
    }

    /// Row of the `X` in each column.
    pub fn x(&self) -> &[u8] {
        &self.x
    }

    /// Link components, each as the list of columns it passes through.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Marking in cell `(col, row)`, if any.
    pub fn marking_at(&self, col: usize, row: usize) -> Option<Marking> {
        if self.o[col] as usize == row {
            Some(Marking::O)
        } else if self.x[col] as usize == row {
            Some(Marking::X)
        } else {
            None
        }
    }

    /// Checks the size against a configurable cap (at most [`HARD_MAX_SIZE`]).
    pub fn check_size(&self, max: usize) -> Result<(), GridError> {
        let max = max.min(HARD_MAX_SIZE);
        if self.n() > max {
            return Err(GridError::TooLarge { n: self.n(), max });
        }
        Ok(())
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # pinfloer grid v1
    /// n = 2
    /// O: 2 1
    /// X: 1 2
    /// ```
    ///
    /// Entries are 1-based rows; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut n: Option<usize> = None;
        let mut o: Option<Vec<u8>> = None;
        let mut x: Option<Vec<u8>> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GridError::Parse { line: line_no, message };
            if let Some(rest) = line.strip_prefix('n') {
                let rest = rest.trim_start().strip_prefix('=').ok_or_else(|| err("expected `n = <size>`".into()))?;
                let v: usize = rest.trim().parse().map_err(|_| err(format!("bad size `{}`", rest.trim())))?;
                if v > HARD_MAX_SIZE {
                    return Err(GridError::TooLarge { n: v, max: HARD_MAX_SIZE });
                }
                n = Some(v);
            } else if let Some((key, rest)) = line.split_once(':') {
                let values = parse_row(rest).map_err(err)?;
                match key.trim() {
                    "O" => o = Some(values),
                    "X" => x = Some(values),
                    other => return Err(err(format!("unknown key `{other}`"))),
                }
            } else {
                return Err(err(format!("unrecognized line `{line}`")));
            }
        }
        let missing = |what: &str| GridError::Parse { line: last_line, message: format!("missing {what}") };
        let n = n.ok_or_else(|| missing("`n = <size>`"))?;
        let o = o.ok_or_else(|| missing("`O:` line"))?;
        let x = x.ok_or_else(|| missing("`X:` line"))?;
        for (name, v) in [("O", &o), ("X", &x)] {
            if v.len() != n {
                return Err(GridError::Parse {
                    line: last_line,
                    message: format!("{name} has {} entries, expected {n}", v.len()),
                });
            }
        }
        grid_from_permutations(&o, &x)
    }

    /// Inverse of [`GridDiagram::parse`].
    pub fn to_text(&self) -> String {
        let row = |v: &[u8]| v.iter().map(|r| (r + 1).to_string()).collect::<Vec<_>>().join(" ");
        format!("# pinfloer grid v1\nn = {}\nO: {}\nX: {}\n", self.n(), row(&self.o), row(&self.x))
    }
}

fn parse_row(s: &str) -> Result<Vec<u8>, String> {
    s.split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(v) if (1..=HARD_MAX_SIZE).contains(&v) => Ok((v - 1) as u8),
            _ => Err(format!("bad entry `{t}`")),
        })
        .collect()
}

impl fmt::Display for GridDiagram {
    /// Picture with row `n − 1` on top.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        for row in (0..n).rev() {
            let line: String = (0..n)
                .map(|col| match self.marking_at(col, row) {
                    Some(Marking::O) => 'O',
                    Some(Marking::X) => 'X',
                    None => '.',
                })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
