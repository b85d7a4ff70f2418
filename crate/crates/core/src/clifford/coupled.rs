use super::{pin_to_orthogonal, CliffordError, OrthogonalMatrix, PinElement};

/// A class `[(p, q)]` in the coupled Spin group Spin(n; m): pairs of Pin
/// elements with even total parity, modulo `(p, q) ∼ (−p, −q)`.
///
/// The stored representative is normalized so that the first nonzero
/// coefficient of `p` (in blade order) is positive; equality is therefore a
/// plain comparison of values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledSpinElement {
    left: PinElement,
    right: PinElement,
}

impl CoupledSpinElement {
    pub fn new(left: PinElement, right: PinElement) -> Result<Self, CliffordError> {
        if !(left.parity() + right.parity()).is_multiple_of(2) {
            return Err(CliffordError::OddTotalParity { left: left.parity(), right: right.parity() });
        }
        Ok(Self::normalized(left, right))
    }

    fn normalized(left: PinElement, right: PinElement) -> Self {
        let negative = left
            .value()
            .leading_coefficient()
            .map(|(_, c)| c.signum() < 0)
            .unwrap_or(false);
        if negative {
            CoupledSpinElement { left: left.negate(), right: right.negate() }
        } else {
            CoupledSpinElement { left, right }
        }
    }

    pub fn unit(n: usize, m: usize) -> Self {
        CoupledSpinElement { left: PinElement::identity(n), right: PinElement::identity(m) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left.dimension(), self.right.dimension())
    }

    pub fn left(&self) -> &PinElement {
        &self.left
    }

    pub fn right(&self) -> &PinElement {
        &self.right
    }

    /// The other representative `(−p, −q)` of the same class.
    pub fn alternate_representative(&self) -> (PinElement, PinElement) {
        (self.left.negate(), self.right.negate())
    }

    /// Image in SO(n; m) ⊂ O(n) × O(m).
    pub fn project(&self) -> (OrthogonalMatrix, OrthogonalMatrix) {
        (pin_to_orthogonal(&self.left), pin_to_orthogonal(&self.right))
    }
}

/// Slotwise product under the block embeddings `R^n ⊕ R^{n'}`,
/// `R^m ⊕ R^{m'}`; the class does not depend on representatives.
pub fn coupled_mul(x: &CoupledSpinElement, y: &CoupledSpinElement) -> CoupledSpinElement {
    let (n, m) = x.dims();
    let (n2, m2) = y.dims();
    let left = x.left.embed(n + n2, 0).mul(&y.left.embed(n + n2, n)).expect("embedded dims agree");
    let right = x.right.embed(m + m2, 0).mul(&y.right.embed(m + m2, m)).expect("embedded dims agree");
    CoupledSpinElement::normalized(left, right)
}

/// `[(p, p)]` for a lift `p` of an orthogonal matrix.
pub fn coupled_from_lift(lift: &PinElement) -> CoupledSpinElement {
    CoupledSpinElement::normalized(lift.clone(), lift.clone())
}

/// Canonical coupled Spin element of `A ∈ O(n)`, given a Pin lift of `A`.
pub fn coupled_from_orthogonal(
    matrix: &OrthogonalMatrix,
    lift: &PinElement,
) -> Result<CoupledSpinElement, CliffordError> {
    OrthogonalMatrix::new(matrix.rows().to_vec())?;
    if &pin_to_orthogonal(lift) != matrix {
        return Err(CliffordError::LiftMismatch);
    }
    Ok(coupled_from_lift(lift))
}

/// Stabilization Spin(n; m) → Spin(n+k; m+k) by the identity of size `k`.
pub fn coupled_stabilize(x: &CoupledSpinElement, k: usize) -> CoupledSpinElement {
    coupled_mul(x, &coupled_from_lift(&PinElement::identity(k)))
}

#[cfg(test)]
mod tests {
    use super::super::{pin_from_vectors, Scalar, Vector};
    use super::*;
    use num_traits::{One, Zero};

    fn unit(n: usize, i: usize) -> Vector {
        (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()
    }

    fn pin(n: usize, vs: &[Vector]) -> PinElement {
        pin_from_vectors(n, vs).unwrap()
    }

    #[test]
    fn odd_total_parity_rejected() {
        let err = CoupledSpinElement::new(pin(1, &[unit(1, 0)]), pin(1, &[])).unwrap_err();
        assert_eq!(err, CliffordError::OddTotalParity { left: 1, right: 0 });
    }

    #[test]
    fn units_multiply_to_unit() {
        let u = CoupledSpinElement::unit(1, 1);
        assert_eq!(coupled_mul(&u, &u), CoupledSpinElement::unit(2, 2));
    }

    #[test]
    fn product_unfolds_slotwise() {
        let x = CoupledSpinElement::new(pin(1, &[unit(1, 0)]), pin(1, &[unit(1, 0)])).unwrap();
        let prod = coupled_mul(&x, &x);
        let expected =
            CoupledSpinElement::new(pin(2, &[unit(2, 0), unit(2, 1)]), pin(2, &[unit(2, 0), unit(2, 1)])).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn negated_representative_is_same_class() {
        let p = pin(2, &[unit(2, 1)]);
        let a = CoupledSpinElement::new(p.clone(), p.clone()).unwrap();
        let b = CoupledSpinElement::new(p.negate(), p.negate()).unwrap();
        assert_eq!(a, b);
        let c = CoupledSpinElement::new(p.negate(), p).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn lift_sign_does_not_matter() {
        let p = pin(3, &[unit(3, 0)]);
        let m = pin_to_orthogonal(&p);
        let a = coupled_from_orthogonal(&m, &p).unwrap();
        let b = coupled_from_orthogonal(&m, &p.negate()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, CoupledSpinElement::new(p.clone(), p).unwrap());
    }

    #[test]
    fn identity_gives_unit() {
        let id = PinElement::identity(3);
        let x = coupled_from_orthogonal(&OrthogonalMatrix::identity(3), &id).unwrap();
        assert_eq!(x, CoupledSpinElement::unit(3, 3));
    }

    #[test]
    fn wrong_lift_rejected() {
        let p = pin(2, &[unit(2, 0)]);
        let err = coupled_from_orthogonal(&OrthogonalMatrix::identity(2), &p).unwrap_err();
        assert_eq!(err, CliffordError::LiftMismatch);
    }

    #[test]
    fn stabilization_composes() {
        let p = pin(2, &[unit(2, 0), unit(2, 1)]);
        let x = CoupledSpinElement::new(p.clone(), pin(1, &[])).unwrap();
        assert_eq!(coupled_stabilize(&coupled_stabilize(&x, 1), 2), coupled_stabilize(&x, 3));
        assert_eq!(coupled_stabilize(&CoupledSpinElement::unit(2, 1), 1), CoupledSpinElement::unit(3, 2));
    }

    #[test]
    fn stabilized_class_projects_block_diagonally() {
        let p = pin(2, &[unit(2, 0)]);
        let q = pin(3, &[unit(3, 2)]);
        let x = CoupledSpinElement::new(p.clone(), q.clone()).unwrap();
        let s = coupled_stabilize(&x, 2);
        let (a, b) = s.project();
        let id = OrthogonalMatrix::identity(2);
        assert_eq!(a, pin_to_orthogonal(&p).block_sum(&id));
        assert_eq!(b, pin_to_orthogonal(&q).block_sum(&id));
    }
}
