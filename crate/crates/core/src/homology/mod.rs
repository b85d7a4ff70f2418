//! Exact integer linear algebra: sparse matrices, Smith normal form and the
//! homology of finite chain complexes over Z.

mod matrix;
mod snf;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use matrix::SparseIntMatrix;
pub use snf::{invariant_factors, smith_normal_form, SmithDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("cannot compose {left:?} with {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("boundary into degree {degree} has shape {found:?}, expected {expected:?}")]
    BadBoundaryShape { degree: i64, expected: (usize, usize), found: (usize, usize) },
    #[error("∂∘∂ ≠ 0 from degree {degree}: entry ({row}, {col}) = {value}")]
    NotAComplex { degree: i64, row: usize, col: usize, value: BigInt },
}

/// A finitely generated abelian group `Z^free ⊕ ⨁ Z/t_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Torsion coefficients, each ≥ 2 and dividing the next.
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    strs.serialize(s)
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension of `H ⊗ F_2`.
    pub fn mod2_tensor_dim(&self) -> usize {
        self.free_rank + self.even_torsion_count()
    }

    /// Number of torsion summands of even order (= dim Tor(H, F_2)).
    pub fn even_torsion_count(&self) -> usize {
        let two = BigInt::from(2);
        self.torsion.iter().filter(|t| (*t % &two).is_zero()).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A bounded chain complex of free abelian groups `C_lo, …, C_hi`.
///
/// `boundaries[k]` is the differential `C_{lo+k+1} → C_{lo+k}` with shape
/// `dims[k] × dims[k+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    pub fn new(min_degree: i64, dims: Vec<usize>, boundaries: Vec<SparseIntMatrix>) -> Result<Self, HomologyError> {
        let c = ChainComplex { min_degree, dims, boundaries };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), HomologyError> {
        let expected_len = self.dims.len().saturating_sub(1);
        for k in 0..expected_len {
            let found = self.boundaries.get(k).map_or((0, 0), |b| (b.nrows(), b.ncols()));
            let expected = (self.dims[k], self.dims[k + 1]);
            if found != expected {
                return Err(HomologyError::BadBoundaryShape { degree: self.min_degree + k as i64, expected, found });
            }
        }
        if self.boundaries.len() != expected_len {
            return Err(HomologyError::BadBoundaryShape {
                degree: self.min_degree + expected_len as i64,
                expected: (0, 0),
                found: (self.boundaries.len(), 0),
            });
        }
        for k in 1..self.boundaries.len() {
            let sq = self.boundaries[k - 1].mul(&self.boundaries[k])?;
            let witness = sq.entries().next().map(|(row, col, value)| (row, col, value.clone()));
            if let Some((row, col, value)) = witness {
                return Err(HomologyError::NotAComplex { degree: self.min_degree + k as i64 + 1, row, col, value });
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dims.len()).map(move |k| self.min_degree + k as i64)
    }
}

/// Homology of a chain complex, degree by degree.
pub fn homology_of_complex(complex: &ChainComplex) -> BTreeMap<i64, HomologyGroup> {
    // invariant factors of every boundary, computed independently
    let factors: Vec<Vec<BigInt>> = complex.boundaries.par_iter().map(invariant_factors).collect();
    let ranks: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut out = BTreeMap::new();
    for (k, &dim) in complex.dims.iter().enumerate() {
        let out_rank = if k > 0 { ranks[k - 1] } else { 0 };
        let in_rank = ranks.get(k).copied().unwrap_or(0);
        let torsion = factors
            .get(k)
            .map(|f| f.iter().filter(|x| !x.is_one()).cloned().collect())
            .unwrap_or_default();
        out.insert(
            complex.min_degree + k as i64,
            HomologyGroup { free_rank: dim - out_rank - in_rank, torsion },
        );
    }
    out
}

/// (Maslov, Alexander) bigrading. The Alexander grading is a half-integer,
/// stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bigrading {
    pub maslov: i64,
    pub alexander_twice: i64,
}

impl Bigrading {
    pub fn new(maslov: i64, alexander_twice: i64) -> Self {
        Bigrading { maslov, alexander_twice }
    }

    pub fn alexander(&self) -> f64 {
        self.alexander_twice as f64 / 2.0
    }

    pub fn shifted(&self, maslov: i64, alexander_twice: i64) -> Self {
        Bigrading { maslov: self.maslov + maslov, alexander_twice: self.alexander_twice + alexander_twice }
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alexander_twice % 2 == 0 {
            write!(f, "(M={}, A={})", self.maslov, self.alexander_twice / 2)
        } else {
            write!(f, "(M={}, A={}/2)", self.maslov, self.alexander_twice)
        }
    }
}

/// JSON number for a doubled half-integer: an integer when even.
pub(crate) fn half_integer_json(twice: i64) -> serde_json::Value {
    if twice % 2 == 0 {
        serde_json::Value::from(twice / 2)
    } else {
        serde_json::Value::from(twice as f64 / 2.0)
    }
}

/// Homology of a bigraded complex: one group per bigrading, zero groups
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologySummary {
    pub groups: BTreeMap<Bigrading, HomologyGroup>,
}

impl HomologySummary {
    pub fn total_free_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }

    pub fn get(&self, b: Bigrading) -> HomologyGroup {
        self.groups.get(&b).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, b: Bigrading, g: HomologyGroup) {
        if !g.is_zero() {
            self.groups.insert(b, g);
        }
    }

    /// Poincaré polynomial data: free rank per bigrading.
    pub fn free_ranks(&self) -> BTreeMap<Bigrading, usize> {
        self.groups.iter().filter(|(_, g)| g.free_rank > 0).map(|(b, g)| (*b, g.free_rank)).collect()
    }
}

impl Serialize for HomologySummary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            maslov: i64,
            alexander: serde_json::Value,
            free_rank: usize,
            #[serde(serialize_with = "serialize_bigints")]
            torsion: &'a [BigInt],
        }
        let groups: Vec<Entry<'_>> = self
            .groups
            .iter()
            .map(|(b, g)| Entry {
                maslov: b.maslov,
                alexander: half_integer_json(b.alexander_twice),
                free_rank: g.free_rank,
                torsion: &g.torsion,
            })
            .collect();
        let mut st = s.serialize_struct("HomologySummary", 3)?;
        st.serialize_field("total_free_rank", &self.total_free_rank())?;
        st.serialize_field("has_torsion", &self.has_torsion())?;
        st.serialize_field("groups", &groups)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn zero_differentials() {
        let c = ChainComplex::new(0, vec![2, 3], vec![SparseIntMatrix::zeros(2, 3)]).unwrap();
        let h = homology_of_complex(&c);
        assert_eq!(h[&0].free_rank, 2);
        assert_eq!(h[&1].free_rank, 3);
    }

    #[test]
    fn multiplication_by_two() {
        let d = SparseIntMatrix::from_triples(1, 1, [(0, 0, 2)]).unwrap();
        let c = ChainComplex::new(0, vec![1, 1], vec![d]).unwrap();
        let h = homology_of_complex(&c);
        assert_eq!(h[&0], HomologyGroup { free_rank: 0, torsion: vec![big(2)] });
        assert!(h[&1].is_zero());
    }

    #[test]
    fn rejects_nonzero_square_with_witness() {
        let d1 = SparseIntMatrix::from_triples(1, 1, [(0, 0, 1)]).unwrap();
        let d2 = SparseIntMatrix::from_triples(1, 1, [(0, 0, 3)]).unwrap();
        let err = ChainComplex::new(0, vec![1, 1, 1], vec![d1, d2]).unwrap_err();
        assert_eq!(err, HomologyError::NotAComplex { degree: 2, row: 0, col: 0, value: big(3) });
    }

    #[test]
    fn rejects_bad_shapes_and_duplicates() {
        assert!(ChainComplex::new(0, vec![1, 2], vec![SparseIntMatrix::zeros(2, 1)]).is_err());
        assert_eq!(
            SparseIntMatrix::from_triples(2, 2, [(0, 0, 1), (0, 0, 1)]).unwrap_err(),
            HomologyError::DuplicateEntry { row: 0, col: 0 }
        );
    }

    #[test]
    fn group_display() {
        let g = HomologyGroup { free_rank: 2, torsion: vec![big(2), big(4)] };
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/4");
        assert_eq!(g.mod2_tensor_dim(), 4);
        assert_eq!(HomologyGroup::default().to_string(), "0");
    }
}
