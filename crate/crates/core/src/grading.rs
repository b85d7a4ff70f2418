//! Coupled orientations and the absolute Z/2 grading of Heegaard diagram
//! generators, computed from homological data only.
//!
//! `H = H_1(Σ; R)` is modelled as `Q^{2g}` in a basis `(a_1, b_1, …, a_g,
//! b_g)` with the intersection form `ω(a_i, b_i) = 1`. The alpha and beta
//! curves span Lagrangian subspaces `A` and `B`; an auxiliary inner product
//! (identity by default) turns the pair into a canonical isomorphism
//! `τ_{A,B} : A → B`, and pairing a basis of `A` with its image gives the
//! canonical coupled orientation of `A ⊕ B`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("intersection form is not skew-symmetric")]
    NotSkew,
    #[error("intersection form is not unimodular")]
    NotUnimodular,
    #[error("inner product is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("subspace is not Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("generator permutation is not a bijection of 1..{0}")]
    NotABijection(usize),
    #[error("local sign {0} is not ±1")]
    BadSign(i64),
    #[error("vectors do not form a basis: {0}")]
    NotABasis(String),
    #[error("vector is outside the domain of the map")]
    NotInDomain,
    #[error("orientation comparison degenerate (bases do not span the same space)")]
    Degenerate,
}

pub type Vector = Vec<Q>;

/// `H_1` of a genus-`g` surface with its intersection form and an inner
/// product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    genus: usize,
    form: Vec<Vec<Q>>,
    inner: Vec<Vec<Q>>,
}

impl SymplecticSpace {
    /// Standard form in the basis `(a_1, b_1, …)` with identity inner product.
    pub fn standard(genus: usize) -> Self {
        let n = 2 * genus;
        let mut form = vec![linalg::zero_vec(n); n];
        for i in 0..genus {
            form[2 * i][2 * i + 1] = q(1);
            form[2 * i + 1][2 * i] = q(-1);
        }
        SymplecticSpace { genus, form, inner: identity(n) }
    }

    /// A custom integral intersection form, checked skew and unimodular.
    pub fn from_form(form: &[Vec<i64>]) -> Result<Self, GradingError> {
        let n = form.len();
        if !n.is_multiple_of(2) {
            return Err(GradingError::DimensionMismatch { expected: n + 1, found: n });
        }
        for row in form {
            if row.len() != n {
                return Err(GradingError::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if form[i][j] != -form[j][i] {
                    return Err(GradingError::NotSkew);
                }
            }
        }
        let form: Vec<Vec<Q>> = form.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        if linalg::det(&form).abs() != Q::one() {
            return Err(GradingError::NotUnimodular);
        }
        Ok(SymplecticSpace { genus: n / 2, form, inner: identity(n) })
    }

    /// Replaces the inner product.
    pub fn with_inner_product(mut self, inner: Vec<Vec<Q>>) -> Result<Self, GradingError> {
        let n = self.dim();
        if inner.len() != n || inner.iter().any(|r| r.len() != n) {
            return Err(GradingError::DimensionMismatch { expected: n, found: inner.len() });
        }
        let symmetric = (0..n).all(|i| (0..n).all(|j| inner[i][j] == inner[j][i]));
        if !symmetric || !linalg::is_positive_definite(&inner) {
            return Err(GradingError::NotPositiveDefinite);
        }
        self.inner = inner;
        Ok(self)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn omega(&self, x: &[Q], y: &[Q]) -> Q {
        linalg::bilinear(&self.form, x, y)
    }

    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        linalg::bilinear(&self.inner, x, y)
    }

    fn check_vector(&self, v: &[Q]) -> Result<(), GradingError> {
        if v.len() != self.dim() {
            return Err(GradingError::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }
}

fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// A Lagrangian subspace, stored by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianSubspace {
    basis: Vec<Vector>,
}

impl LagrangianSubspace {
    pub fn new(space: &SymplecticSpace, basis: Vec<Vector>) -> Result<Self, GradingError> {
        for v in &basis {
            space.check_vector(v)?;
        }
        if basis.len() != space.genus() || linalg::rank(&basis) != space.genus() {
            return Err(GradingError::NotLagrangian(format!(
                "need {} independent vectors, got rank {} from {}",
                space.genus(),
                linalg::rank(&basis),
                basis.len()
            )));
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate().skip(i + 1) {
                if !space.omega(u, v).is_zero() {
                    return Err(GradingError::NotLagrangian(format!("ω(v{}, v{}) ≠ 0", i + 1, j + 1)));
                }
            }
        }
        Ok(LagrangianSubspace { basis })
    }

    pub fn from_integers(space: &SymplecticSpace, basis: &[Vec<i64>]) -> Result<Self, GradingError> {
        Self::new(space, basis.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        linalg::coordinates(&self.basis, v).is_some()
    }
}

/// The linear map `τ_{L0,L1}`, stored by its values on a basis of `L0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauMap {
    domain: Vec<Vector>,
    images: Vec<Vector>,
}

impl TauMap {
    pub fn apply(&self, v: &[Q]) -> Result<Vector, GradingError> {
        let c = linalg::coordinates(&self.domain, v).ok_or(GradingError::NotInDomain)?;
        let mut out = linalg::zero_vec(v.len());
        for (ci, img) in c.iter().zip(&self.images) {
            linalg::axpy(&mut out, ci, img);
        }
        Ok(out)
    }

    /// Dimension of the image (equals the domain dimension for a bijection).
    pub fn rank(&self) -> usize {
        linalg::rank(&self.images)
    }
}

/// The canonical isomorphism `L0 → L1`.
///
/// On `K = L0 ∩ L1` it is the identity. On the orthogonal complement `L0'`
/// of `K` in `L0`, `u` is sent to the unique `w` in the complement `L1'`
/// of `K` in `L1` with `⟨w, y⟩ = ω(u, y)` for all `y ∈ L1'`; the pairing
/// `ω : L0' × L1' → R` is perfect because both subspaces are Lagrangian.
pub fn tau_iso(
    space: &SymplecticSpace,
    l0: &LagrangianSubspace,
    l1: &LagrangianSubspace,
) -> Result<TauMap, GradingError> {
    // re-validate, since subspaces may come from another space
    let l0 = LagrangianSubspace::new(space, l0.basis.clone())?;
    let l1 = LagrangianSubspace::new(space, l1.basis.clone())?;
    let k = linalg::intersection(&l0.basis, &l1.basis);
    let l0c = linalg::complement_within(&space.inner, &l0.basis, &k);
    let l1c = linalg::complement_within(&space.inner, &l1.basis, &k);
    debug_assert_eq!(l0c.len(), l1c.len());
    let gram: Vec<Vec<Q>> = l1c.iter().map(|y| l1c.iter().map(|z| space.inner(y, z)).collect()).collect();
    let mut domain = k.clone();
    let mut images = k;
    for u in &l0c {
        let rhs: Vec<Q> = l1c.iter().map(|y| space.omega(u, y)).collect();
        let c = solve_square(&gram, &rhs).ok_or(GradingError::Degenerate)?;
        let mut w = linalg::zero_vec(space.dim());
        for (ci, y) in c.iter().zip(&l1c) {
            linalg::axpy(&mut w, ci, y);
        }
        domain.push(u.clone());
        images.push(w);
    }
    Ok(TauMap { domain, images })
}

fn solve_square(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    // columns of m as basis, rhs as target
    let n = m.len();
    let cols: Vec<Vec<Q>> = (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
    linalg::coordinates(&cols, rhs)
}

/// Homology data of a Heegaard diagram: integral classes of the alpha and
/// beta curves in the standard basis of `H_1(Σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceHomologyData {
    space: SymplecticSpace,
    alpha: LagrangianSubspace,
    beta: LagrangianSubspace,
}

impl SurfaceHomologyData {
    pub fn new(space: SymplecticSpace, alpha: &[Vec<i64>], beta: &[Vec<i64>]) -> Result<Self, GradingError> {
        let a = LagrangianSubspace::from_integers(&space, alpha)?;
        let b = LagrangianSubspace::from_integers(&space, beta)?;
        Ok(SurfaceHomologyData { space, alpha: a, beta: b })
    }

    pub fn genus(&self) -> usize {
        self.space.genus()
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn alpha(&self) -> &LagrangianSubspace {
        &self.alpha
    }

    pub fn beta(&self) -> &LagrangianSubspace {
        &self.beta
    }

    /// Same curves with a different inner product on `H_1`.
    pub fn with_inner_product(&self, inner: Vec<Vec<Q>>) -> Result<Self, GradingError> {
        Ok(SurfaceHomologyData { space: self.space.clone().with_inner_product(inner)?, ..self.clone() })
    }
}

/// A generator `x = {x_1, …, x_g}` with `x_i ∈ α_i ∩ β_{σ(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorLocalData {
    /// 0-based: `sigma[i]` is the beta curve through the point on `α_i`.
    pub sigma: Vec<usize>,
    /// Local intersection sign of `α_i` and `β_{σ(i)}` at `x_i`.
    pub signs: Vec<i64>,
}

/// An ordered basis of a direct sum, each vector written as the
/// concatenation of its two summand components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledOrientation {
    basis: Vec<Vector>,
}

impl CoupledOrientation {
    pub fn new(basis: Vec<Vector>) -> Result<Self, GradingError> {
        if linalg::rank(&basis) != basis.len() {
            return Err(GradingError::NotABasis("vectors are dependent".into()));
        }
        Ok(CoupledOrientation { basis })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `+1` if `other` induces the same orientation, `−1` otherwise.
    pub fn relative_sign(&self, other: &CoupledOrientation) -> Result<i32, GradingError> {
        linalg::relative_orientation(&self.basis, &other.basis).ok_or(GradingError::Degenerate)
    }
}

fn pair(first: &[Q], second: &[Q]) -> Vector {
    first.iter().chain(second).cloned().collect()
}

/// `(v_1, τv_1, …, v_g, τv_g)` in `A ⊕ B`, using the alpha classes as the
/// basis of `A`.
pub fn canonical_coupled_orientation(data: &SurfaceHomologyData) -> Result<CoupledOrientation, GradingError> {
    canonical_coupled_orientation_with_basis(data, data.alpha.basis())
}

/// As [`canonical_coupled_orientation`] with an explicit basis of `A`; the
/// orientation class does not depend on the choice.
pub fn canonical_coupled_orientation_with_basis(
    data: &SurfaceHomologyData,
    basis: &[Vector],
) -> Result<CoupledOrientation, GradingError> {
    let g = data.genus();
    if basis.len() != g || linalg::rank(basis) != g || !basis.iter().all(|v| data.alpha.contains(v)) {
        return Err(GradingError::NotABasis("not a basis of the alpha subspace".into()));
    }
    let tau = tau_iso(&data.space, &data.alpha, &data.beta)?;
    let zero = linalg::zero_vec(data.space.dim());
    let mut out = Vec::with_capacity(2 * g);
    for v in basis {
        out.push(pair(v, &zero));
        out.push(pair(&zero, &tau.apply(v)?));
    }
    CoupledOrientation::new(out)
}

/// `(b_1, h_2)` from the Mayer–Vietoris map `H_1(Σ) → H_1(Σ)/A ⊕ H_1(Σ)/B`:
/// `h_2` is its kernel `A ∩ B`, `b_1` its cokernel.
pub fn betti_numbers(data: &SurfaceHomologyData) -> (usize, usize) {
    let n = data.space.dim();
    // H/A is detected by ω(α_i, ·) since A is its own ω-annihilator
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(n);
    for v in data.alpha.basis().iter().chain(data.beta.basis()) {
        rows.push((0..n).map(|j| linalg::dot(v, &data.space.form.iter().map(|r| r[j].clone()).collect::<Vec<_>>())).collect());
    }
    let r = linalg::rank(&rows);
    let kernel = n - r;
    let coker = n - r;
    let h2 = linalg::intersection(data.alpha.basis(), data.beta.basis()).len();
    assert_eq!(h2, kernel, "kernel of the Mayer–Vietoris map is A ∩ B");
    assert_eq!(coker, h2, "b_1 = h_2 by exactness");
    (coker, h2)
}

fn check_generator(g: usize, x: &GeneratorLocalData) -> Result<(), GradingError> {
    if x.sigma.len() != g {
        return Err(GradingError::DimensionMismatch { expected: g, found: x.sigma.len() });
    }
    if x.signs.len() != g {
        return Err(GradingError::DimensionMismatch { expected: g, found: x.signs.len() });
    }
    let mut seen = vec![false; g];
    let bijective = x.sigma.iter().all(|&j| j < g && !std::mem::replace(&mut seen[j], true));
    if !bijective {
        return Err(GradingError::NotABijection(g));
    }
    if let Some(&s) = x.signs.iter().find(|&&s| s != 1 && s != -1) {
        return Err(GradingError::BadSign(s));
    }
    Ok(())
}

/// The two signs entering the grading: `s1 = ∏ ε_i` and `s2`, comparing
/// the shuffled basis `([α_1], [β_{σ(1)}], …)` of `A ⊕ B` with the
/// canonical coupled orientation.
pub fn grading_signs(data: &SurfaceHomologyData, x: &GeneratorLocalData) -> Result<(i32, i32), GradingError> {
    let g = data.genus();
    check_generator(g, x)?;
    let canonical = canonical_coupled_orientation(data)?;
    let zero = linalg::zero_vec(data.space.dim());
    let mut local = Vec::with_capacity(2 * g);
    for (i, &j) in x.sigma.iter().enumerate() {
        local.push(pair(&data.alpha.basis()[i], &zero));
        local.push(pair(&zero, &data.beta.basis()[j]));
    }
    let local = CoupledOrientation::new(local)?;
    let s2 = canonical.relative_sign(&local)?;
    let s1 = if x.signs.iter().filter(|&&s| s < 0).count() % 2 == 0 { 1 } else { -1 };
    Ok((s1, s2))
}

/// Absolute grading `gr_HF(x) ∈ {0, 1}`: with `gr(x) = g` when `s1·s2 = +1`
/// and `g + 1` otherwise, `gr_HF = gr + g + b_1 (mod 2)`.
pub fn gr_hf(data: &SurfaceHomologyData, x: &GeneratorLocalData) -> Result<u8, GradingError> {
    let g = data.genus();
    let (s1, s2) = grading_signs(data, x)?;
    let gr = if s1 * s2 == 1 { g } else { g + 1 };
    let (b1, _) = betti_numbers(data);
    Ok(((gr + g + b1) % 2) as u8)
}

/// Orientation of `F ⊕ E` induced by a linear map `f : E → F` and an
/// orientation `o` of `coker(f) ⊕ ker(f)`.
///
/// `f` is given by its matrix (`dim F` rows, `dim E` columns); `coker(f)`
/// is realized as `im(f)^⊥ ⊂ F` and `o`'s vectors are written in `F ⊕ E`
/// coordinates. The result is `o` followed by the shuffled pairs
/// `(f(u_j), u_j)` for a basis `u_j` of `ker(f)^⊥`.
pub fn induced_coupled_orientation(
    f: &[Vec<Q>],
    dim_e: usize,
    o: &CoupledOrientation,
) -> Result<CoupledOrientation, GradingError> {
    let dim_f = f.len();
    if let Some(row) = f.iter().find(|r| r.len() != dim_e) {
        return Err(GradingError::DimensionMismatch { expected: dim_e, found: row.len() });
    }
    let ker = linalg::nullspace(f, dim_e);
    let ft: Vec<Vec<Q>> = (0..dim_e).map(|j| f.iter().map(|r| r[j].clone()).collect()).collect();
    let coker = linalg::nullspace(&ft, dim_f);
    let expected = ker.len() + coker.len();
    if o.basis.len() != expected {
        return Err(GradingError::NotABasis(format!("expected {expected} vectors, got {}", o.basis.len())));
    }
    for v in &o.basis {
        if v.len() != dim_f + dim_e {
            return Err(GradingError::DimensionMismatch { expected: dim_f + dim_e, found: v.len() });
        }
        let (vf, ve) = v.split_at(dim_f);
        let in_coker = linalg::mat_vec(&ft, vf).iter().all(Zero::is_zero);
        let in_ker = linalg::mat_vec(f, ve).iter().all(Zero::is_zero);
        if !in_coker || !in_ker {
            return Err(GradingError::NotABasis("vector outside coker(f) ⊕ ker(f)".into()));
        }
    }
    let id_e = identity(dim_e);
    let complement = linalg::complement_within(&id_e, &id_e, &ker);
    let zero_f = linalg::zero_vec(dim_f);
    let zero_e = linalg::zero_vec(dim_e);
    let mut out = o.basis.clone();
    for u in &complement {
        out.push(pair(&linalg::mat_vec(f, u), &zero_e));
        out.push(pair(&zero_f, u));
    }
    CoupledOrientation::new(out)
}
