use serde::Serialize;

/// Which diagonal pair of corners is initial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    /// Initial corners `(a, b)`, `(c, d)`: lower-left and upper-right.
    Forward,
    /// Initial corners `(a, d)`, `(c, b)`: upper-left and lower-right.
    Backward,
}

impl Direction {
    pub fn bit(self) -> u8 {
        match self {
            Direction::Forward => 0,
            Direction::Backward => 1,
        }
    }

    pub fn from_bit(b: u8) -> Option<Self> {
        match b {
            0 => Some(Direction::Forward),
            1 => Some(Direction::Backward),
            _ => None,
        }
    }
}

/// A rectangle on the `n × n` grid torus with its corner roles.
///
/// Lattice points are `(column, row)` with both coordinates mod `n`; the
/// footprint covers the cells of columns `a, a+1, …, c−1` and rows
/// `b, …, d−1`, read cyclically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DirectedRectangle {
    pub n: usize,
    pub col_start: usize,
    pub col_end: usize,
    pub row_start: usize,
    pub row_end: usize,
    pub direction: Direction,
}

impl DirectedRectangle {
    pub fn new(
        n: usize,
        col_start: usize,
        col_end: usize,
        row_start: usize,
        row_end: usize,
        direction: Direction,
    ) -> Option<Self> {
        if col_start >= n || col_end >= n || row_start >= n || row_end >= n {
            return None;
        }
        if col_start == col_end || row_start == row_end {
            return None;
        }
        Some(DirectedRectangle { n, col_start, col_end, row_start, row_end, direction })
    }

    pub fn width(&self) -> usize {
        (self.col_end + self.n - self.col_start) % self.n
    }

    pub fn height(&self) -> usize {
        (self.row_end + self.n - self.row_start) % self.n
    }

    pub fn reversed(&self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        DirectedRectangle { direction, ..*self }
    }

    pub fn initial_corners(&self) -> [(usize, usize); 2] {
        let (a, b, c, d) = (self.col_start, self.row_start, self.col_end, self.row_end);
        match self.direction {
            Direction::Forward => [(a, b), (c, d)],
            Direction::Backward => [(a, d), (c, b)],
        }
    }

    pub fn terminal_corners(&self) -> [(usize, usize); 2] {
        self.reversed().initial_corners()
    }

    pub fn contains_cell(&self, col: usize, row: usize) -> bool {
        let dc = (col + self.n - self.col_start) % self.n;
        let dr = (row + self.n - self.row_start) % self.n;
        dc < self.width() && dr < self.height()
    }

    /// Whether the lattice point lies strictly inside the footprint.
    pub fn contains_point_in_interior(&self, col: usize, row: usize) -> bool {
        let dc = (col + self.n - self.col_start) % self.n;
        let dr = (row + self.n - self.row_start) % self.n;
        dc > 0 && dc < self.width() && dr > 0 && dr < self.height()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h, n) = (self.width(), self.height(), self.n);
        (0..w).flat_map(move |i| (0..h).map(move |j| ((self.col_start + i) % n, (self.row_start + j) % n)))
    }

    /// The forward rectangle leaving `state` whose lower-left corner is the
    /// state's point on column `a` and upper-right corner its point on `c`.
    pub fn from_state(state: &[u8], a: usize, c: usize) -> Self {
        DirectedRectangle {
            n: state.len(),
            col_start: a,
            col_end: c,
            row_start: state[a] as usize,
            row_end: state[c] as usize,
            direction: Direction::Forward,
        }
    }
}

/// Every directed rectangle of the `n × n` torus: ordered column pair ×
/// ordered row pair × direction, `2·[n(n−1)]²` in total.
pub(crate) fn all_rectangles(n: usize) -> Vec<DirectedRectangle> {
    let mut out = Vec::with_capacity(2 * (n * n.saturating_sub(1)).pow(2));
    for a in 0..n {
        for c in (0..n).filter(|&c| c != a) {
            for b in 0..n {
                for d in (0..n).filter(|&d| d != b) {
                    for direction in [Direction::Forward, Direction::Backward] {
                        out.push(DirectedRectangle { n, col_start: a, col_end: c, row_start: b, row_end: d, direction });
                    }
                }
            }
        }
    }
    out
}
