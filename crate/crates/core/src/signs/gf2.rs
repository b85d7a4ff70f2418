//! Dense Gaussian elimination over F_2 on bit-packed rows.

/// One linear equation `Σ x_v = rhs` over F_2.
pub(crate) struct EchelonSystem {
    words: usize,
    /// `pivots[v]`: row whose lowest set bit is `v`, with its right-hand side.
    pivots: Vec<Option<(Box<[u64]>, bool)>>,
    rank: usize,
}

pub(crate) enum Insert {
    Independent,
    Redundant,
    Inconsistent,
}

impl EchelonSystem {
    pub fn new(vars: usize) -> Self {
        EchelonSystem { words: vars.div_ceil(64).max(1), pivots: (0..vars).map(|_| None).collect(), rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn insert(&mut self, vars: &[u32], rhs: bool) -> Insert {
        let mut row = vec![0u64; self.words].into_boxed_slice();
        for &v in vars {
            row[v as usize / 64] ^= 1 << (v % 64);
        }
        let mut rhs = rhs;
        let mut w = 0;
        while w < self.words {
            if row[w] == 0 {
                w += 1;
                continue;
            }
            let v = w * 64 + row[w].trailing_zeros() as usize;
            match &self.pivots[v] {
                Some((prow, prhs)) => {
                    for k in w..self.words {
                        row[k] ^= prow[k];
                    }
                    rhs ^= *prhs;
                }
                None => {
                    self.pivots[v] = Some((row, rhs));
                    self.rank += 1;
                    return Insert::Independent;
                }
            }
        }
        if rhs {
            Insert::Inconsistent
        } else {
            Insert::Redundant
        }
    }

    /// Back substitution; `free(v)` supplies the value of each non-pivot
    /// variable.
    pub fn solve(&self, free: impl Fn(usize) -> bool) -> Vec<bool> {
        let n = self.pivots.len();
        let mut packed = vec![0u64; self.words];
        let mut values = vec![false; n];
        for v in (0..n).rev() {
            let val = match &self.pivots[v] {
                None => free(v),
                Some((row, rhs)) => {
                    let w0 = v / 64;
                    let mut acc = 0u32;
                    for k in w0..self.words {
                        acc ^= (row[k] & packed[k]).count_ones();
                    }
                    // the pivot bit itself is still unset in `packed`
                    *rhs ^ (acc % 2 == 1)
                }
            };
            if val {
                values[v] = true;
                packed[v / 64] |= 1 << (v % 64);
            }
        }
        values
    }
}
