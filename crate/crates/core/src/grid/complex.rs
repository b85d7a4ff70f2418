//! Signed grid chain complexes and their `∂² = 0` certification.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::gradings::gradings;
use super::{GridDiagram, GridError};
use crate::homology::{homology_of_complex, Bigrading, ChainComplex, HomologySummary, SparseIntMatrix};
use crate::perm;
use crate::signs::{verify_sign_assignment, SignAssignment};

/// Largest size at which [`GridComplex::build`] re-verifies the sign
/// assignment exhaustively; beyond it the `∂² = 0` certificate is the check.
pub const VERIFY_MAX: usize = 7;

/// Which rectangles the differential counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Rectangles avoiding every marking; coefficients in Z.
    Tilde,
    /// Rectangles avoiding `X`; each `O_i` inside contributes `U_i`.
    Minus,
    /// `X` markings ignored altogether, `O_i` counted by `U_i`. Thin annuli
    /// are then allowed in `∂²`, which exposes their cancellation.
    Unblocked,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Tilde => "tilde",
            Flavor::Minus => "minus",
            Flavor::Unblocked => "unblocked",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tilde" => Ok(Flavor::Tilde),
            "minus" => Ok(Flavor::Minus),
            "unblocked" => Ok(Flavor::Unblocked),
            other => Err(format!("unknown flavor `{other}` (expected tilde, minus or unblocked)")),
        }
    }
}

/// One rectangle in `∂x`: `sign · U^{u_mask} · y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    /// Lexicographic rank of the target state.
    pub target: u32,
    pub sign: i8,
    /// Columns of the lower-left and upper-right corners.
    pub from_column: u8,
    pub to_column: u8,
    /// Bit `i` set when the `O` in column `i` lies in the rectangle.
    pub u_mask: u16,
}

/// The complex: every grid state with its bigrading and outgoing terms.
#[derive(Clone, Debug)]
pub struct GridComplex {
    n: usize,
    flavor: Flavor,
    states: Vec<Vec<u8>>,
    gradings: Vec<Bigrading>,
    terms: Vec<Vec<Term>>,
}

/// Result of a successful `∂² = 0` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCertificate {
    pub flavor: Flavor,
    pub generators: usize,
    /// Composites `x → y → z` with `z ≠ x`, all cancelling in pairs.
    pub square_terms: usize,
    /// Thin-annulus composites along rows (sign product `+1`).
    pub horizontal_annuli: usize,
    /// Thin-annulus composites along columns (sign product `−1`).
    pub vertical_annuli: usize,
    /// Number of `(x, U_i)` for which the horizontal and vertical annulus
    /// through `O_i` cancel.
    pub annulus_pairs: usize,
}

impl GridComplex {
    /// Builds the complex after checking the sign assignment (exhaustively
    /// for `n ≤ VERIFY_MAX`).
    pub fn build(g: &GridDiagram, s: &SignAssignment, flavor: Flavor) -> Result<Self, GridError> {
        if s.n() == g.n() && g.n() <= VERIFY_MAX {
            let report = verify_sign_assignment(s)?;
            if !report.is_valid() {
                return Err(GridError::InvalidSigns { violations: report.violations.len() });
            }
        }
        Self::build_trusted(g, s, flavor)
    }

    /// Builds the complex without re-verifying `s`.
    pub fn build_trusted(g: &GridDiagram, s: &SignAssignment, flavor: Flavor) -> Result<Self, GridError> {
        let n = g.n();
        if s.n() != n {
            return Err(GridError::SignSizeMismatch { expected: n, found: s.n() });
        }
        let states = perm::all_permutations(n);
        let gradings: Vec<Bigrading> = states.par_iter().map(|x| gradings(g, x)).collect();
        let terms: Vec<Vec<Term>> = states
            .par_iter()
            .enumerate()
            .map(|(rank, x)| outgoing_terms(g, s, flavor, rank, x))
            .collect();
        Ok(GridComplex { n, flavor, states, gradings, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn num_generators(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn grading(&self, x: usize) -> Bigrading {
        self.gradings[x]
    }

    pub fn terms(&self, x: usize) -> &[Term] {
        &self.terms[x]
    }

    /// Checks `∂² = 0` symbolically in `Z[U_1, …, U_n]`, that every term
    /// has the grading shift of a differential, and that thin annuli pair
    /// up as horizontal `+U_i` against vertical `−U_i`.
    pub fn certify(&self) -> Result<SquareCertificate, GridError> {
        self.check_gradings()?;
        let per_state: Vec<Result<(usize, usize, usize, usize), GridError>> =
            (0..self.states.len()).into_par_iter().map(|x| self.certify_state(x)).collect();
        let mut cert = SquareCertificate {
            flavor: self.flavor,
            generators: self.states.len(),
            square_terms: 0,
            horizontal_annuli: 0,
            vertical_annuli: 0,
            annulus_pairs: 0,
        };
        for r in per_state {
            let (sq, h, v, p) = r?;
            cert.square_terms += sq;
            cert.horizontal_annuli += h;
            cert.vertical_annuli += v;
            cert.annulus_pairs += p;
        }
        Ok(cert)
    }

    fn check_gradings(&self) -> Result<(), GridError> {
        for (x, terms) in self.terms.iter().enumerate() {
            let gx = self.gradings[x];
            for t in terms {
                let gy = self.gradings[t.target as usize];
                let k = t.u_mask.count_ones() as i64;
                let maslov_ok = gy.maslov - 2 * k == gx.maslov - 1;
                let alexander_ok = self.flavor == Flavor::Unblocked || gy.alexander_twice - 2 * k == gx.alexander_twice;
                if !maslov_ok || !alexander_ok {
                    return Err(GridError::NotAComplex(format!(
                        "term {:?} -> {:?} shifts gradings {} -> {} with U-degree {k}",
                        self.states[x], self.states[t.target as usize], gx, gy
                    )));
                }
            }
        }
        Ok(())
    }

    fn certify_state(&self, x: usize) -> Result<(usize, usize, usize, usize), GridError> {
        // key: (z, union of U-masks, intersection of U-masks) encodes the
        // exponent vector of the product monomial
        let mut total: HashMap<(u32, u16, u16), i64> = HashMap::new();
        let mut squares = 0;
        let mut horizontal: BTreeMap<u16, i64> = BTreeMap::new();
        let mut vertical: BTreeMap<u16, i64> = BTreeMap::new();
        for t1 in &self.terms[x] {
            for t2 in &self.terms[t1.target as usize] {
                let sign = t1.sign as i64 * t2.sign as i64;
                *total.entry((t2.target, t1.u_mask | t2.u_mask, t1.u_mask & t2.u_mask)).or_default() += sign;
                if t2.target as usize != x {
                    squares += 1;
                    continue;
                }
                // back to x through the same two columns: a thin annulus
                let mask = t1.u_mask | t2.u_mask;
                if t2.from_column == t1.to_column {
                    if sign != 1 {
                        return Err(self.annulus_error(x, "horizontal", sign));
                    }
                    *horizontal.entry(mask).or_default() += 1;
                } else {
                    if sign != -1 {
                        return Err(self.annulus_error(x, "vertical", sign));
                    }
                    *vertical.entry(mask).or_default() += 1;
                }
            }
        }
        if let Some(((z, or, and), c)) = total.iter().find(|(_, &c)| c != 0) {
            return Err(GridError::NotAComplex(format!(
                "coefficient {c} of U-monomial (mask {or:#b}, squared {and:#b}) on {:?} in ∂²{:?}",
                self.states[*z as usize], self.states[x]
            )));
        }
        if horizontal != vertical {
            return Err(GridError::NotAComplex(format!(
                "annuli from {:?} do not pair up: horizontal {horizontal:?}, vertical {vertical:?}",
                self.states[x]
            )));
        }
        let h: i64 = horizontal.values().sum();
        let v: i64 = vertical.values().sum();
        Ok((squares, h as usize, v as usize, h as usize))
    }

    fn annulus_error(&self, x: usize, kind: &str, sign: i64) -> GridError {
        GridError::NotAComplex(format!("{kind} annulus at {:?} has sign product {sign}", self.states[x]))
    }

    /// Generators grouped by twice the Alexander grading.
    pub fn alexander_blocks(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (x, g) in self.gradings.iter().enumerate() {
            out.entry(g.alexander_twice).or_default().push(x);
        }
        out
    }

    /// The integer chain complex of one Alexander block (tilde flavor),
    /// graded by Maslov.
    pub fn block_complex(&self, members: &[usize]) -> Result<ChainComplex, GridError> {
        assert_eq!(self.flavor, Flavor::Tilde, "block complexes are taken in the tilde flavor");
        if members.is_empty() {
            return Ok(ChainComplex::new(0, vec![], vec![])?);
        }
        let lo = members.iter().map(|&x| self.gradings[x].maslov).min().expect("nonempty");
        let hi = members.iter().map(|&x| self.gradings[x].maslov).max().expect("nonempty");
        let levels = (hi - lo + 1) as usize;
        let mut position = HashMap::new();
        let mut dims = vec![0usize; levels];
        for &x in members {
            let k = (self.gradings[x].maslov - lo) as usize;
            position.insert(x, dims[k]);
            dims[k] += 1;
        }
        let mut boundaries: Vec<SparseIntMatrix> = (0..levels.saturating_sub(1))
            .map(|k| SparseIntMatrix::zeros(dims[k], dims[k + 1]))
            .collect();
        for &x in members {
            let k = (self.gradings[x].maslov - lo) as usize;
            for t in &self.terms[x] {
                let y = t.target as usize;
                let row = *position.get(&y).ok_or_else(|| {
                    GridError::NotAComplex("tilde term leaves its Alexander block".into())
                })?;
                boundaries[k - 1].add_to(row, position[&x], BigInt::from(t.sign));
            }
        }
        Ok(ChainComplex::new(lo, dims, boundaries)?)
    }
}

/// Every rectangle term leaving state `x`.
fn outgoing_terms(g: &GridDiagram, s: &SignAssignment, flavor: Flavor, rank: usize, x: &[u8]) -> Vec<Term> {
    let n = g.n();
    let mut out = Vec::new();
    let mut y = x.to_vec();
    for a in 0..n {
        for c in (0..n).filter(|&c| c != a) {
            let width = (c + n - a) % n;
            let row0 = x[a] as usize;
            let height = (x[c] as usize + n - row0) % n;
            let rel = |row: u8| (row as usize + n - row0) % n;
            let mut ok = true;
            let mut u_mask = 0u16;
            for k in 0..width {
                let col = (a + k) % n;
                if k > 0 && (1..height).contains(&rel(x[col])) {
                    ok = false;
                    break;
                }
                let has_o = rel(g.o()[col]) < height;
                let has_x = rel(g.x()[col]) < height;
                match flavor {
                    Flavor::Tilde if has_o || has_x => ok = false,
                    Flavor::Minus if has_x => ok = false,
                    _ => {}
                }
                if !ok {
                    break;
                }
                if has_o {
                    u_mask |= 1 << col;
                }
            }
            if !ok {
                continue;
            }
            y.copy_from_slice(x);
            y.swap(a, c);
            out.push(Term {
                target: perm::rank(&y) as u32,
                sign: s.sign(rank, a, c) as i8,
                from_column: a as u8,
                to_column: c as u8,
                u_mask,
            });
        }
    }
    out
}

/// Bigraded homology of the tilde complex, one Smith normal form per
/// (Alexander, Maslov) block.
pub fn tilde_homology(g: &GridDiagram, s: &SignAssignment) -> Result<HomologySummary, GridError> {
    let c = GridComplex::build(g, s, Flavor::Tilde)?;
    c.certify()?;
    tilde_homology_of(&c)
}

pub(crate) fn tilde_homology_of(c: &GridComplex) -> Result<HomologySummary, GridError> {
    let blocks: Vec<(i64, Vec<usize>)> = c.alexander_blocks().into_iter().collect();
    type BlockResult = Result<(i64, BTreeMap<i64, crate::homology::HomologyGroup>), GridError>;
    let results: Vec<BlockResult> = blocks
        .par_iter()
        .map(|(a, members)| Ok((*a, homology_of_complex(&c.block_complex(members)?))))
        .collect();
    let mut summary = HomologySummary::default();
    for r in results {
        let (a, groups) = r?;
        for (m, grp) in groups {
            summary.insert(Bigrading::new(m, a), grp);
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::grid_from_permutations;
    use crate::signs::construct_sign_assignment;

    #[test]
    fn unknot_tilde() {
        let g = grid_from_permutations(&[1, 0], &[0, 1]).unwrap();
        let s = construct_sign_assignment(2).unwrap();
        let c = GridComplex::build(&g, &s, Flavor::Tilde).unwrap();
        assert!(c.terms(0).is_empty() && c.terms(1).is_empty());
        let h = tilde_homology(&g, &s).unwrap();
        assert_eq!(h.total_free_rank(), 2);
        assert!(!h.has_torsion());
    }

    #[test]
    fn unknot_minus_terms() {
        let g = grid_from_permutations(&[1, 0], &[0, 1]).unwrap();
        let s = construct_sign_assignment(2).unwrap();
        let c = GridComplex::build(&g, &s, Flavor::Minus).unwrap();
        // each nonzero entry is ±U_0 ∓ U_1 between the two states
        for x in 0..2 {
            let ts = c.terms(x);
            if ts.is_empty() {
                continue;
            }
            assert_eq!(ts.len(), 2);
            assert_eq!(ts[0].target, ts[1].target);
            assert_eq!(ts[0].u_mask ^ ts[1].u_mask, 0b11);
            assert_eq!(ts[0].sign + ts[1].sign, 0);
        }
        c.certify().unwrap();
    }

    #[test]
    fn unblocked_annuli_pair_up() {
        let g = grid_from_permutations(&[2, 0, 1], &[0, 1, 2]).unwrap();
        let s = construct_sign_assignment(3).unwrap();
        let cert = GridComplex::build(&g, &s, Flavor::Unblocked).unwrap().certify().unwrap();
        // n horizontal and n vertical annuli from every state
        assert_eq!(cert.horizontal_annuli, 6 * 3);
        assert_eq!(cert.vertical_annuli, 6 * 3);
        let minus = GridComplex::build(&g, &s, Flavor::Minus).unwrap().certify().unwrap();
        assert_eq!(minus.horizontal_annuli + minus.vertical_annuli, 0);
    }

    #[test]
    fn flipped_sign_is_caught() {
        let g = grid_from_permutations(&[2, 0, 1], &[0, 1, 2]).unwrap();
        let mut s = construct_sign_assignment(3).unwrap();
        s.flip(0);
        assert!(matches!(GridComplex::build(&g, &s, Flavor::Tilde), Err(GridError::InvalidSigns { .. })));
    }

    #[test]
    fn flavor_parsing() {
        assert_eq!("minus".parse::<Flavor>().unwrap(), Flavor::Minus);
        assert!("hat".parse::<Flavor>().is_err());
    }
}
