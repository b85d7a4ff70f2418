//! Real Clifford algebra `Cl(n)` with `e_i² = +1`, the groups Pin(n) and
//! Spin(n) realized inside it, and the coupled Spin group Spin(n; m).
//!
//! The splitting Pin(1) → O(1) used for one-dimensional Pin structures is
//! fixed globally as `−1 ↦ e_1` (see [`PIN1_SPLITTING`]). Only the positive
//! Pin group is implemented; in Pin⁻(1) the generator squares to −1 and the
//! group is cyclic of order four, which is not modelled here.

mod coupled;
mod pin;
mod scalar;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

pub use coupled::{
    coupled_from_lift, coupled_from_orthogonal, coupled_mul, coupled_stabilize, CoupledSpinElement,
};
pub use pin::{pin_from_vectors, pin_to_orthogonal, twisted_adjoint_matrix, PinElement, Vector};
pub use scalar::Scalar;

/// Image of −1 ∈ O(1) under the fixed splitting O(1) → Pin(1), as a blade
/// index: the basis vector `e_1`.
pub const PIN1_SPLITTING: usize = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector {index} has length {got}, expected {expected}")]
    WrongLength { index: usize, expected: usize, got: usize },
    #[error("vector {index} does not have squared norm 1")]
    NonUnitVector { index: usize },
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("supplied lift does not cover the supplied orthogonal matrix")]
    LiftMismatch,
    #[error("pair parities ({left}, {right}) have odd total")]
    OddTotalParity { left: u8, right: u8 },
    #[error("dimension {0} unsupported (must be between 1 and 63)")]
    UnsupportedDimension(usize),
}

/// A basis blade `e_{i_1} ⋯ e_{i_k}` with `i_1 < ⋯ < i_k`, encoded as a bit
/// mask (bit `i` set ⇔ `e_{i+1}` present).
pub type Blade = u64;

/// Sign picked up when reordering `e_A · e_B` into canonical order.
fn blade_sign(a: Blade, b: Blade) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

/// An element of the real Clifford algebra on `dimension` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    dimension: usize,
    coefficients: BTreeMap<Blade, Scalar>,
}

impl CliffordElement {
    pub fn zero(dimension: usize) -> Self {
        CliffordElement { dimension, coefficients: BTreeMap::new() }
    }

    pub fn one(dimension: usize) -> Self {
        Self::scalar(dimension, Scalar::one())
    }

    pub fn scalar(dimension: usize, s: Scalar) -> Self {
        Self::blade(dimension, 0, s)
    }

    pub fn blade(dimension: usize, blade: Blade, s: Scalar) -> Self {
        assert!(dimension < 64, "Clifford dimension must be below 64");
        assert!(blade >> dimension == 0, "blade outside dimension");
        let mut coefficients = BTreeMap::new();
        if !s.is_zero() {
            coefficients.insert(blade, s);
        }
        CliffordElement { dimension, coefficients }
    }

    /// The generator `e_{i+1}` (zero-based `i`).
    pub fn generator(dimension: usize, i: usize) -> Self {
        Self::blade(dimension, 1 << i, Scalar::one())
    }

    pub fn from_vector(v: &[Scalar]) -> Self {
        let mut out = Self::zero(v.len());
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.coefficients.insert(1 << i, c.clone());
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn coefficient(&self, blade: Blade) -> Scalar {
        self.coefficients.get(&blade).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.coefficients.iter().map(|(b, s)| (*b, s))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// First nonzero coefficient in blade order, used for canonical sign
    /// normalization.
    pub fn leading_coefficient(&self) -> Option<(Blade, &Scalar)> {
        self.coefficients.iter().next().map(|(b, s)| (*b, s))
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            dimension: self.dimension,
            coefficients: self.coefficients.iter().map(|(b, s)| (*b, -s)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.dimension);
        if s.is_zero() {
            return out;
        }
        for (b, c) in &self.coefficients {
            out.coefficients.insert(*b, c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, CliffordError> {
        check_dims(self.dimension, other.dimension)?;
        let mut out = self.clone();
        for (b, c) in &other.coefficients {
            out.accumulate(*b, c.clone());
        }
        Ok(out)
    }

    fn accumulate(&mut self, blade: Blade, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.coefficients.entry(blade) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    e.insert(v);
                }
            }
        }
    }

    /// Grade involution: negates odd blades.
    pub fn grade_involution(&self) -> Self {
        CliffordElement {
            dimension: self.dimension,
            coefficients: self
                .coefficients
                .iter()
                .map(|(b, s)| if b.count_ones() % 2 == 1 { (*b, -s) } else { (*b, s.clone()) })
                .collect(),
        }
    }

    /// Vector part (grade-one coefficients), if the element is a pure vector.
    pub fn as_vector(&self) -> Option<Vector> {
        if self.coefficients.keys().any(|b| b.count_ones() != 1) {
            return None;
        }
        Some((0..self.dimension).map(|i| self.coefficient(1 << i)).collect())
    }

    /// Embeds into a larger algebra, shifting generator `e_i` to `e_{i+offset}`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        assert!(offset + self.dimension <= total && total < 64);
        CliffordElement {
            dimension: total,
            coefficients: self.coefficients.iter().map(|(b, s)| (b << offset, s.clone())).collect(),
        }
    }
}

fn check_dims(left: usize, right: usize) -> Result<(), CliffordError> {
    if left != right {
        Err(CliffordError::DimensionMismatch { left, right })
    } else {
        Ok(())
    }
}

/// Product in the Clifford algebra with `e_i² = 1`, `e_i e_j = −e_j e_i`.
pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement, CliffordError> {
    check_dims(a.dimension, b.dimension)?;
    let mut out = CliffordElement::zero(a.dimension);
    for (ba, ca) in &a.coefficients {
        for (bb, cb) in &b.coefficients {
            let c = ca * cb;
            let c = if blade_sign(*ba, *bb) { -c } else { c };
            out.accumulate(ba ^ bb, c);
        }
    }
    Ok(out)
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl{}[{}]", self.dimension, self)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.coefficients {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *b == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})")?;
                for i in 0..64 {
                    if b >> i & 1 == 1 {
                        write!(f, "e{}", i + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Square matrix with Q(√2) entries satisfying `MᵀM = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalMatrix {
    rows: Vec<Vec<Scalar>>,
}

impl OrthogonalMatrix {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self, CliffordError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CliffordError::NotOrthogonal);
        }
        let m = OrthogonalMatrix { rows };
        if m.transpose_mul_self() != identity_rows(n) {
            return Err(CliffordError::NotOrthogonal);
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(rows: Vec<Vec<Scalar>>) -> Self {
        OrthogonalMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        OrthogonalMatrix { rows: identity_rows(n) }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        OrthogonalMatrix { rows: mat_mul(&self.rows, &other.rows) }
    }

    fn transpose_mul_self(&self) -> Vec<Vec<Scalar>> {
        let n = self.rows.len();
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for (i, row_out) in out.iter_mut().enumerate() {
            for (j, cell) in row_out.iter_mut().enumerate() {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    acc += &(&self.rows[k][i] * &self.rows[k][j]);
                }
                *cell = acc;
            }
        }
        out
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.dimension();
        let m = other.dimension();
        let mut rows = vec![vec![Scalar::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = self.rows[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                rows[n + i][n + j] = other.rows[i][j].clone();
            }
        }
        OrthogonalMatrix { rows }
    }

    /// Exact determinant, computed by elimination over Q(√2).
    pub fn determinant(&self) -> Scalar {
        determinant(self.rows.clone())
    }
}

pub(crate) fn identity_rows(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub(crate) fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    let t = &a[i][l] * &b[l][j];
                    out[i][j] += &t;
                }
            }
        }
    }
    out
}

fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inverse().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    det
}

/// The finite subgroup of Pin(n) generated by `±1, e_1, …, e_n`, as a
/// sorted, duplicate-free list of Clifford elements. It has `2^{n+1}`
/// elements.
pub fn signed_basis_subgroup(n: usize) -> Vec<CliffordElement> {
    let gens: Vec<CliffordElement> = std::iter::once(CliffordElement::one(n).neg())
        .chain((0..n).map(|i| CliffordElement::generator(n, i)))
        .collect();
    let mut seen: BTreeSet<(Blade, bool)> = BTreeSet::new();
    let mut frontier = vec![CliffordElement::one(n)];
    seen.insert((0, false));
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = clifford_mul(&x, g).expect("same dimension");
            let (blade, c) = y.leading_coefficient().expect("signed blades are nonzero");
            let key = (blade, c.signum() < 0);
            if seen.insert(key) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter()
        .map(|(b, neg)| CliffordElement::blade(n, b, if neg { -Scalar::one() } else { Scalar::one() }))
        .collect()
}
