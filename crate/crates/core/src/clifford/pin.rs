use num_traits::{One, Zero};

use super::{
    check_dims, clifford_mul, identity_rows, mat_mul, CliffordElement, CliffordError, OrthogonalMatrix,
    Scalar,
};

/// A vector of `R^n` with Q(√2) coordinates.
pub type Vector = Vec<Scalar>;

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        acc += &(x * y);
    }
    acc
}

/// An element `v_1 ⋯ v_k` of Pin(n), remembered together with the unit
/// vectors that produced it.
///
/// Equality compares the Clifford value and parity only; two factorizations
/// of the same element are equal.
#[derive(Clone, Debug)]
pub struct PinElement {
    value: CliffordElement,
    provenance: Vec<Vector>,
}

impl PartialEq for PinElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.parity() == other.parity()
    }
}

impl Eq for PinElement {}

impl PinElement {
    pub fn identity(n: usize) -> Self {
        PinElement { value: CliffordElement::one(n), provenance: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.value.dimension()
    }

    pub fn value(&self) -> &CliffordElement {
        &self.value
    }

    /// Number of vector factors mod 2; Spin(n) is the even part.
    pub fn parity(&self) -> u8 {
        (self.provenance.len() % 2) as u8
    }

    pub fn is_spin(&self) -> bool {
        self.parity() == 0
    }

    pub fn provenance(&self) -> &[Vector] {
        &self.provenance
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CliffordError> {
        let value = clifford_mul(&self.value, &other.value)?;
        let mut provenance = self.provenance.clone();
        provenance.extend(other.provenance.iter().cloned());
        Ok(PinElement { value, provenance })
    }

    /// Inverse `v_k ⋯ v_1` (each unit vector is its own inverse).
    pub fn inverse(&self) -> Self {
        let provenance: Vec<Vector> = self.provenance.iter().rev().cloned().collect();
        let n = self.dimension();
        let value = provenance.iter().fold(CliffordElement::one(n), |acc, v| {
            clifford_mul(&acc, &CliffordElement::from_vector(v)).expect("same dimension")
        });
        PinElement { value, provenance }
    }

    /// `−p`, realized by negating the first factor (or, for the identity,
    /// by the factorization `−1 = e_1 · (−e_1)`).
    pub fn negate(&self) -> Self {
        let n = self.dimension();
        let mut provenance = self.provenance.clone();
        if let Some(first) = provenance.first_mut() {
            for c in first.iter_mut() {
                *c = -&*c;
            }
        } else {
            let mut e1 = vec![Scalar::zero(); n];
            e1[0] = Scalar::one();
            let minus_e1: Vector = e1.iter().map(|c| -c).collect();
            provenance = vec![e1, minus_e1];
        }
        PinElement { value: self.value.neg(), provenance }
    }

    /// Embeds into Pin(total) acting on coordinates `offset..offset+n`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        let n = self.dimension();
        let provenance = self
            .provenance
            .iter()
            .map(|v| {
                let mut w = vec![Scalar::zero(); total];
                w[offset..offset + n].clone_from_slice(v);
                w
            })
            .collect();
        PinElement { value: self.value.embed(total, offset), provenance }
    }
}

/// Builds `v_1 ⋯ v_k` from unit vectors in `R^n`.
pub fn pin_from_vectors(n: usize, vectors: &[Vector]) -> Result<PinElement, CliffordError> {
    if n == 0 || n >= 64 {
        return Err(CliffordError::UnsupportedDimension(n));
    }
    let mut value = CliffordElement::one(n);
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(CliffordError::WrongLength { index, expected: n, got: v.len() });
        }
        if !dot(v, v).is_one() {
            return Err(CliffordError::NonUnitVector { index });
        }
        value = clifford_mul(&value, &CliffordElement::from_vector(v))?;
    }
    Ok(PinElement { value, provenance: vectors.to_vec() })
}

fn reflection(v: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = v.len();
    let two = Scalar::from_int(2);
    let mut m = identity_rows(n);
    for i in 0..n {
        for j in 0..n {
            let t = &two * &(&v[i] * &v[j]);
            m[i][j] = &m[i][j] - &t;
        }
    }
    m
}

/// The covering map Pin(n) → O(n): the composition of reflections across
/// `v_i^⊥`, applied in provenance order (`ρ(v_1) ∘ ⋯ ∘ ρ(v_k)`).
pub fn pin_to_orthogonal(p: &PinElement) -> OrthogonalMatrix {
    let n = p.dimension();
    let rows = p.provenance.iter().fold(identity_rows(n), |acc, v| mat_mul(&acc, &reflection(v)));
    OrthogonalMatrix::new_unchecked(rows)
}

/// The same covering map computed inside the algebra: column `j` is the
/// twisted adjoint action `α(p) e_j p⁻¹`.
pub fn twisted_adjoint_matrix(p: &PinElement) -> Result<OrthogonalMatrix, CliffordError> {
    let n = p.dimension();
    let left = p.value.grade_involution();
    let right = p.inverse().value;
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    for j in 0..n {
        let ej = CliffordElement::generator(n, j);
        let image = clifford_mul(&clifford_mul(&left, &ej)?, &right)?;
        let col = image.as_vector().ok_or(CliffordError::NotOrthogonal)?;
        for (i, c) in col.into_iter().enumerate() {
            rows[i][j] = c;
        }
    }
    check_dims(n, rows.len())?;
    OrthogonalMatrix::new(rows)
}
