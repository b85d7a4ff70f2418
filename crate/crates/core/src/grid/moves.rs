//! Commutation, stabilization and destabilization of grid diagrams.

use serde::Serialize;

use super::{grid_from_permutations, GridDiagram, GridError, Marking};

/// A corner of a 2×2 block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    /// `(column offset, row offset)` within the block.
    fn offset(self) -> (usize, usize) {
        match self {
            Corner::SW => (0, 0),
            Corner::SE => (1, 0),
            Corner::NW => (0, 1),
            Corner::NE => (1, 1),
        }
    }

    fn opposite(self) -> Corner {
        match self {
            Corner::SW => Corner::NE,
            Corner::NE => Corner::SW,
            Corner::NW => Corner::SE,
            Corner::SE => Corner::NW,
        }
    }

    fn from_offset(dc: usize, dr: usize) -> Corner {
        match (dc, dr) {
            (0, 0) => Corner::SW,
            (1, 0) => Corner::SE,
            (0, 1) => Corner::NW,
            _ => Corner::NE,
        }
    }

    pub fn parse(s: &str) -> Option<Corner> {
        match s.to_ascii_uppercase().as_str() {
            "NW" => Some(Corner::NW),
            "NE" => Some(Corner::NE),
            "SW" => Some(Corner::SW),
            "SE" => Some(Corner::SE),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GridMove {
    /// Swap columns `i` and `i + 1`.
    CommuteColumns { index: usize },
    /// Swap rows `i` and `i + 1`.
    CommuteRows { index: usize },
    /// Move the leftmost column to the right edge (a translation of the
    /// grid torus).
    RotateColumns,
    /// Move the bottom row to the top.
    RotateRows,
    /// Replace the marking in cell `(column, row)` by a 2×2 block whose
    /// `empty` corner is unmarked, whose opposite corner carries the other
    /// kind of marking, and whose remaining diagonal carries two copies of
    /// the original marking. The new column and row are inserted after
    /// `column` and `row`.
    Stabilize { column: usize, row: usize, empty: Corner },
    /// Inverse of stabilization: collapse the 2×2 block with lower-left cell
    /// `(column, row)`.
    Destabilize { column: usize, row: usize },
}

fn not_applicable(msg: String) -> GridError {
    GridError::MoveNotApplicable(msg)
}

/// Whether two segments (given by endpoint pairs) strictly interleave;
/// commutation needs them disjoint, nested, or meeting at an endpoint.
fn interleaved(p: (u8, u8), q: (u8, u8)) -> bool {
    if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
        return false;
    }
    let (a0, a1) = (p.0.min(p.1), p.0.max(p.1));
    let inside = |v: u8| a0 < v && v < a1;
    inside(q.0) != inside(q.1)
}

pub fn apply_move(g: &GridDiagram, m: GridMove) -> Result<GridDiagram, GridError> {
    let n = g.n();
    match m {
        GridMove::CommuteColumns { index: i } => {
            if i + 1 >= n {
                return Err(not_applicable(format!("columns {} and {} do not exist", i + 1, i + 2)));
            }
            if interleaved((g.o[i], g.x[i]), (g.o[i + 1], g.x[i + 1])) {
                return Err(not_applicable(format!("columns {} and {} interleave", i + 1, i + 2)));
            }
            let mut o = g.o.clone();
            let mut x = g.x.clone();
            o.swap(i, i + 1);
            x.swap(i, i + 1);
            grid_from_permutations(&o, &x)
        }
        GridMove::CommuteRows { index: i } => {
            if i + 1 >= n {
                return Err(not_applicable(format!("rows {} and {} do not exist", i + 1, i + 2)));
            }
            let col_of = |p: &[u8], r: usize| p.iter().position(|&v| v as usize == r).expect("permutation") as u8;
            let seg = |r| (col_of(&g.o, r), col_of(&g.x, r));
            if interleaved(seg(i), seg(i + 1)) {
                return Err(not_applicable(format!("rows {} and {} interleave", i + 1, i + 2)));
            }
            let swap = |v: u8| match v as usize {
                r if r == i => (i + 1) as u8,
                r if r == i + 1 => i as u8,
                _ => v,
            };
            let o: Vec<u8> = g.o.iter().map(|&v| swap(v)).collect();
            let x: Vec<u8> = g.x.iter().map(|&v| swap(v)).collect();
            grid_from_permutations(&o, &x)
        }
        GridMove::RotateColumns => {
            let mut o = g.o.clone();
            let mut x = g.x.clone();
            o.rotate_left(1);
            x.rotate_left(1);
            grid_from_permutations(&o, &x)
        }
        GridMove::RotateRows => {
            let down = |v: &u8| ((*v as usize + n - 1) % n) as u8;
            let o: Vec<u8> = g.o.iter().map(down).collect();
            let x: Vec<u8> = g.x.iter().map(down).collect();
            grid_from_permutations(&o, &x)
        }
        GridMove::Stabilize { column, row, empty } => stabilize(g, column, row, empty),
        GridMove::Destabilize { column, row } => destabilize(g, column, row),
    }
}

fn stabilize(g: &GridDiagram, column: usize, row: usize, empty: Corner) -> Result<GridDiagram, GridError> {
    let n = g.n();
    if column >= n || row >= n {
        return Err(not_applicable(format!("cell ({}, {}) is off the grid", column + 1, row + 1)));
    }
    let kind = g
        .marking_at(column, row)
        .ok_or_else(|| not_applicable(format!("cell ({}, {}) carries no marking", column + 1, row + 1)))?;
    let (tc, tr) = empty.offset();
    let (oc, or) = empty.opposite().offset();
    // shift the old grid: columns/rows after the insertion point move up
    let shift = |v: usize, at: usize| if v > at { v + 1 } else { v };
    let mut o = vec![0u8; n + 1];
    let mut x = vec![0u8; n + 1];
    let put = |col: usize, r: usize, k: Marking, o: &mut Vec<u8>, x: &mut Vec<u8>| match k {
        Marking::O => o[col] = r as u8,
        Marking::X => x[col] = r as u8,
    };
    for c in (0..n).filter(|&c| c != column) {
        let nc = shift(c, column);
        for (k, r) in [(Marking::O, g.o[c] as usize), (Marking::X, g.x[c] as usize)] {
            // the old row's partner marking goes to the block row holding the
            // empty corner
            let nr = if r == row { row + tr } else { shift(r, row) };
            put(nc, nr, k, &mut o, &mut x);
        }
    }
    let other = match kind {
        Marking::O => Marking::X,
        Marking::X => Marking::O,
    };
    // the old column's partner marking goes to the block column holding the
    // empty corner
    let partner_row = match kind {
        Marking::O => g.x[column] as usize,
        Marking::X => g.o[column] as usize,
    };
    put(column + tc, shift(partner_row, row), other, &mut o, &mut x);
    // block: opposite corner gets `other`, the remaining diagonal gets `kind`
    put(column + oc, row + or, other, &mut o, &mut x);
    put(column + tc, row + or, kind, &mut o, &mut x);
    put(column + oc, row + tr, kind, &mut o, &mut x);
    grid_from_permutations(&o, &x)
}

fn destabilize(g: &GridDiagram, column: usize, row: usize) -> Result<GridDiagram, GridError> {
    let n = g.n();
    if n < 3 {
        return Err(not_applicable("a 2×2 grid cannot be destabilized".into()));
    }
    if column + 1 >= n || row + 1 >= n {
        return Err(not_applicable(format!("no 2×2 block at ({}, {})", column + 1, row + 1)));
    }
    let cell = |dc: usize, dr: usize| g.marking_at(column + dc, row + dr);
    let offsets = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let empties: Vec<(usize, usize)> = offsets.iter().copied().filter(|&(dc, dr)| cell(dc, dr).is_none()).collect();
    let [(tc, tr)] = empties[..] else {
        return Err(not_applicable("block must have exactly one unmarked cell".into()));
    };
    let empty = Corner::from_offset(tc, tr);
    let (oc, or) = empty.opposite().offset();
    let other = cell(oc, or).expect("three marked cells");
    let kind = cell(tc, or).expect("three marked cells");
    if cell(oc, tr) != Some(kind) || kind == other {
        return Err(not_applicable("block is not a stabilization pattern".into()));
    }
    // drop the column and row through the opposite corner; the empty cell
    // receives the doubled marking
    let drop_col = column + oc;
    let drop_row = row + or;
    let keep_col = column + tc;
    let down = |v: usize| if v > drop_row { v - 1 } else { v };
    let mut o = Vec::with_capacity(n - 1);
    let mut x = Vec::with_capacity(n - 1);
    for c in (0..n).filter(|&c| c != drop_col) {
        let (mut ro, mut rx) = (g.o[c] as usize, g.x[c] as usize);
        if c == keep_col {
            match kind {
                Marking::O => ro = row + tr,
                Marking::X => rx = row + tr,
            }
        } else if ro == drop_row || rx == drop_row {
            unreachable!("only block columns meet the dropped row");
        }
        o.push(down(ro) as u8);
        x.push(down(rx) as u8);
    }
    grid_from_permutations(&o, &x)
}
