//! Triangle and bigon counts on the torus behind the twisted surgery exact
//! triangle.
//!
//! Three curves `β, γ, δ` on `T² = R²/Z²`, each a straight line of
//! primitive slope, meet pairwise in one point. Lifting to the plane, a
//! triangle class with corners at the three intersection points is fixed by
//! the choice of lifts; the classes come in pairs exchanged by the 180°
//! rotation about the basepoint `z`. The `k`-th pair covers `z`
//! `k(k−1)/2` times, and exactly one triangle of each pair has the marked
//! point `p ∈ δ` an odd number of times on its `δ` edge, which is what
//! makes the twisted count cancel.
//!
//! Untwisted signs follow a fixed rule table rather than an orientation
//! computation: the smallest triangle counts `+1`, rotation partners share
//! a sign, and every pair is given sign `+1` (the relative sign of
//! different pairs is a convention, not a computed quantity).

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangleError {
    #[error("direction ({0}, {1}) is not a primitive integer vector")]
    NotPrimitive(i64, i64),
    #[error("intersection numbers (β·γ, γ·δ, δ·β) = ({0}, {1}, {2}); expected all −1")]
    WrongIntersections(i64, i64, i64),
    #[error("{0}")]
    BadPoint(String),
    #[error("maxK must be at least 1")]
    BadBound,
    #[error("enumeration incomplete: {0}")]
    Incomplete(String),
    #[error("curves cross {0} times; expected exactly 2")]
    WrongIntersectionCount(usize),
}

pub type Point = (Q, Q);

fn pt(x: Q, y: Q) -> Point {
    (x, y)
}

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(a: &Point, b: &Point) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// An oriented closed curve on the torus: the image of the line through
/// `point` with primitive integer `direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub direction: (i64, i64),
    pub point: Point,
}

impl Line {
    fn dir(&self) -> Point {
        (q(self.direction.0), q(self.direction.1))
    }

    /// `det(d, v − point)`: integral exactly on the lifts, the value naming
    /// the lift.
    fn level(&self, v: &Point) -> Q {
        cross(&self.dir(), &sub(v, &self.point))
    }

    fn contains_mod_lattice(&self, v: &Point) -> bool {
        self.level(v).is_integer()
    }
}

/// Intersection of lift `j1` of `l1` with lift `j2` of `l2`.
fn intersect(l1: &Line, j1: i64, l2: &Line, j2: i64) -> Point {
    // det(d, v) = det(d, point) + j  for each line
    let (d1, d2) = (l1.dir(), l2.dir());
    let c1 = cross(&d1, &l1.point) + q(j1);
    let c2 = cross(&d2, &l2.point) + q(j2);
    // rows (−d.y, d.x)
    let (a, b, c, d) = (-d1.1.clone(), d1.0.clone(), -d2.1.clone(), d2.0.clone());
    let det = &a * &d - &b * &c;
    let x = (&c1 * &d - &b * &c2) / &det;
    let y = (&a * &c2 - &c * &c1) / &det;
    pt(x, y)
}

/// The three curves with basepoint `z` and twist point `p ∈ δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusOneTriple {
    pub beta: Line,
    pub gamma: Line,
    pub delta: Line,
    pub z: Point,
    pub p: Point,
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

impl GenusOneTriple {
    /// `β: y = 0` oriented by `(1, 0)`, `γ: y = x + ½` oriented by
    /// `(−1, −1)`, `δ: x = 0` oriented by `(0, 1)`; `z = (½, ½)` in the
    /// hexagonal region, `p = (0, ¼)` on `δ`.
    pub fn standard() -> Self {
        GenusOneTriple {
            beta: Line { direction: (1, 0), point: pt(q(0), q(0)) },
            gamma: Line { direction: (-1, -1), point: pt(q(0), half()) },
            delta: Line { direction: (0, 1), point: pt(q(0), q(0)) },
            z: pt(half(), half()),
            p: pt(q(0), Q::new(1.into(), 4.into())),
        }
    }

    pub fn validate(&self) -> Result<(), TriangleError> {
        for l in [&self.beta, &self.gamma, &self.delta] {
            let (a, b) = l.direction;
            if a.gcd(&b) != 1 {
                return Err(TriangleError::NotPrimitive(a, b));
            }
        }
        let det = |u: (i64, i64), v: (i64, i64)| u.0 * v.1 - u.1 * v.0;
        let bg = det(self.beta.direction, self.gamma.direction);
        let gd = det(self.gamma.direction, self.delta.direction);
        let db = det(self.delta.direction, self.beta.direction);
        if (bg, gd, db) != (-1, -1, -1) {
            return Err(TriangleError::WrongIntersections(bg, gd, db));
        }
        for (name, l) in [("β", &self.beta), ("γ", &self.gamma), ("δ", &self.delta)] {
            if l.contains_mod_lattice(&self.z) {
                return Err(TriangleError::BadPoint(format!("z lies on {name}")));
            }
        }
        if !self.delta.contains_mod_lattice(&self.p) {
            return Err(TriangleError::BadPoint("p is not on δ".into()));
        }
        if self.beta.contains_mod_lattice(&self.p) || self.gamma.contains_mod_lattice(&self.p) {
            return Err(TriangleError::BadPoint("p lies on β or γ".into()));
        }
        Ok(())
    }
}

/// One triangle class, with vertices in the plane for the lift that puts
/// the `δ ∩ β` corner on lift `0` of both curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleClass {
    /// Which lift of `γ` closes the triangle.
    pub gamma_lift: i64,
    /// Pair index, `1` for the smallest pair.
    pub k: usize,
    pub n_z: u64,
    /// Number of translates of `p` on the `δ` edge, mod 2.
    pub delta_p_parity: u8,
    pub untwisted_sign: i32,
    /// Whether `δβ → βγ → γδ` runs clockwise.
    pub clockwise: bool,
    /// `γ` lift of the partner under the 180° rotation about `z`.
    pub rotation_partner: i64,
}

impl TriangleClass {
    pub fn twisted_sign(&self) -> i32 {
        if self.delta_p_parity == 1 {
            -self.untwisted_sign
        } else {
            self.untwisted_sign
        }
    }
}

struct Geometry {
    p0: Point,
    q0: Point,
    r0: Point,
}

impl GenusOneTriple {
    fn triangle(&self, j: i64) -> Geometry {
        Geometry {
            p0: intersect(&self.delta, 0, &self.beta, 0),
            q0: intersect(&self.beta, 0, &self.gamma, j),
            r0: intersect(&self.gamma, j, &self.delta, 0),
        }
    }

    /// Class key of an arbitrary lifted triangle: corner offsets from the
    /// `δβ` corner (deck-invariant).
    fn key(g: &Geometry) -> (Point, Point) {
        (sub(&g.q0, &g.p0), sub(&g.r0, &g.p0))
    }
}

/// Translates `v + (a, b)` lying strictly inside the triangle.
fn count_inside(tri: &Geometry, v: &Point) -> Result<u64, TriangleError> {
    let corners = [&tri.p0, &tri.q0, &tri.r0];
    let (lo_x, hi_x) = bounds(corners.iter().map(|c| &c.0));
    let (lo_y, hi_y) = bounds(corners.iter().map(|c| &c.1));
    let orient = cross(&sub(&tri.q0, &tri.p0), &sub(&tri.r0, &tri.p0));
    let mut count = 0;
    for a in shifts(&lo_x, &hi_x, &v.0) {
        for b in shifts(&lo_y, &hi_y, &v.1) {
            let w = pt(&v.0 + q(a), &v.1 + q(b));
            let s = [
                cross(&sub(&tri.q0, &tri.p0), &sub(&w, &tri.p0)),
                cross(&sub(&tri.r0, &tri.q0), &sub(&w, &tri.q0)),
                cross(&sub(&tri.p0, &tri.r0), &sub(&w, &tri.r0)),
            ];
            if s.iter().any(Zero::is_zero) && s.iter().all(|x| x.is_zero() || x.signum() == orient.signum()) {
                return Err(TriangleError::BadPoint("a basepoint translate lies on a triangle edge".into()));
            }
            if s.iter().all(|x| x.signum() == orient.signum()) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Integer shifts `t` with `lo ≤ v + t ≤ hi` (padded by one).
fn shifts(lo: &Q, hi: &Q, v: &Q) -> std::ops::RangeInclusive<i64> {
    let a = (lo - v).floor().to_integer().to_i64().expect("small coordinates");
    let b = (hi - v).ceil().to_integer().to_i64().expect("small coordinates");
    a..=b
}

fn bounds<'a>(it: impl Iterator<Item = &'a Q>) -> (Q, Q) {
    let v: Vec<&Q> = it.collect();
    let lo = v.iter().copied().min().expect("three corners").clone();
    let hi = v.iter().copied().max().expect("three corners").clone();
    (lo, hi)
}

/// Translates of `v` on the open segment from `a` to `b` lying on `line`.
fn count_on_segment(line: &Line, a: &Point, b: &Point, v: &Point) -> u64 {
    let (lo_x, hi_x) = bounds([&a.0, &b.0].into_iter());
    let (lo_y, hi_y) = bounds([&a.1, &b.1].into_iter());
    let mut count = 0;
    for dx in shifts(&lo_x, &hi_x, &v.0) {
        for dy in shifts(&lo_y, &hi_y, &v.1) {
            let w = pt(&v.0 + q(dx), &v.1 + q(dy));
            if !cross(&sub(b, a), &sub(&w, a)).is_zero() || !line.level(&w).is_integer() {
                continue;
            }
            // strictly between a and b
            let t = dot(&sub(&w, a), &sub(b, a));
            if t.is_positive() && t < dot(&sub(b, a), &sub(b, a)) {
                count += 1;
            }
        }
    }
    count
}

fn dot(a: &Point, b: &Point) -> Q {
    &a.0 * &b.0 + &a.1 * &b.1
}

fn rotate_about(c: &Point, v: &Point) -> Point {
    (&c.0 * q(2) - &v.0, &c.1 * q(2) - &v.1)
}

fn measure(t: &GenusOneTriple, j: i64) -> Result<(u64, u8, bool), TriangleError> {
    let g = t.triangle(j);
    let n_z = count_inside(&g, &t.z)?;
    let on_edge = count_on_segment(&t.delta, &g.r0, &g.p0, &t.p);
    let orient = cross(&sub(&g.q0, &g.p0), &sub(&g.r0, &g.p0));
    Ok((n_z, (on_edge % 2) as u8, orient.is_negative()))
}

/// Lift of `γ` whose triangle is the 180° rotation of triangle `j`,
/// searched among lifts `|i| ≤ range`.
fn rotation_partner(t: &GenusOneTriple, j: i64, range: i64) -> Option<i64> {
    let g = t.triangle(j);
    let rotated = Geometry {
        p0: rotate_about(&t.z, &g.p0),
        q0: rotate_about(&t.z, &g.q0),
        r0: rotate_about(&t.z, &g.r0),
    };
    let key = GenusOneTriple::key(&rotated);
    (-range..=range).find(|&i| GenusOneTriple::key(&t.triangle(i)) == key)
}

fn area(g: &Geometry) -> Q {
    cross(&sub(&g.q0, &g.p0), &sub(&g.r0, &g.p0)).abs()
}

/// All triangle classes of the first `max_k` pairs, ordered by pair and
/// then by `γ` lift.
pub fn enumerate_triangles(t: &GenusOneTriple, max_k: usize) -> Result<Vec<TriangleClass>, TriangleError> {
    t.validate()?;
    if max_k == 0 {
        return Err(TriangleError::BadBound);
    }
    // triangle area is a convex quadratic in the lift index, so once both
    // ends of the scanned range exceed the selected areas nothing further
    // out can be smaller
    let scan = 2 * max_k as i64 + 2;
    let lifts: Vec<i64> = (-scan..=scan).collect();
    let measured: Vec<Result<(i64, u64, u8, bool), TriangleError>> = lifts
        .par_iter()
        .map(|&j| measure(t, j).map(|(n, p, c)| (j, n, p, c)))
        .collect();
    let mut all = Vec::new();
    for m in measured {
        let (j, n_z, parity, clockwise) = m?;
        // a degenerate lift (γ through the δβ corner) has zero area
        let a = area(&t.triangle(j));
        if a.is_zero() {
            continue;
        }
        all.push((a, j, n_z, parity, clockwise));
    }
    all.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    all.truncate(2 * max_k);
    let largest = all.last().map(|c| c.0.clone()).unwrap_or_else(|| q(0));
    if area(&t.triangle(-scan)) <= largest || area(&t.triangle(scan)) <= largest {
        return Err(TriangleError::Incomplete("scan range too small".into()));
    }
    let mut out = Vec::new();
    for (idx, (_, j, n_z, parity, clockwise)) in all.into_iter().enumerate() {
        let k = idx / 2 + 1;
        if k > max_k {
            break;
        }
        let partner = rotation_partner(t, j, 2 * scan)
            .ok_or_else(|| TriangleError::Incomplete(format!("no rotation partner for lift {j}")))?;
        out.push(TriangleClass {
            gamma_lift: j,
            k,
            n_z,
            delta_p_parity: parity,
            untwisted_sign: 1,
            clockwise,
            rotation_partner: partner,
        });
    }
    if out.len() != 2 * max_k {
        return Err(TriangleError::Incomplete(format!("found {} classes for {max_k} pairs", out.len())));
    }
    Ok(out)
}

/// `Σ sign` over pair `k`, twisted by `(−1)^{#(p ∩ ∂_δ)}` when asked.
pub fn pair_sum(classes: &[TriangleClass], k: usize, twisted: bool) -> i64 {
    classes
        .iter()
        .filter(|c| c.k == k)
        .map(|c| if twisted { c.twisted_sign() } else { c.untwisted_sign } as i64)
        .sum()
}

/// Independent completeness check: scans every triple of lifts of `β`,
/// `γ`, `δ` in a window, reduces each triangle to its deck class, and
/// returns the classes (as `γ` lifts relative to the base corner) with
/// `n_z ≤ bound`.
pub fn brute_force_classes(t: &GenusOneTriple, window: i64, bound: u64) -> Result<Vec<i64>, TriangleError> {
    t.validate()?;
    let range = 4 * window + 4;
    let base: BTreeMap<(Point, Point), i64> =
        (-range..=range).map(|j| (GenusOneTriple::key(&t.triangle(j)), j)).collect();
    let mut found = std::collections::BTreeSet::new();
    for jb in -window..=window {
        for jd in -window..=window {
            for jg in -window..=window {
                let g = Geometry {
                    p0: intersect(&t.delta, jd, &t.beta, jb),
                    q0: intersect(&t.beta, jb, &t.gamma, jg),
                    r0: intersect(&t.gamma, jg, &t.delta, jd),
                };
                if cross(&sub(&g.q0, &g.p0), &sub(&g.r0, &g.p0)).is_zero() {
                    continue;
                }
                if count_inside(&g, &t.z)? > bound {
                    continue;
                }
                let key = GenusOneTriple::key(&g);
                let j = *base
                    .get(&key)
                    .ok_or_else(|| TriangleError::Incomplete("lifted triangle outside the scanned classes".into()))?;
                found.insert(j);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Per-pair summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub k: usize,
    pub n_z: Vec<u64>,
    pub delta_p_parities: Vec<u8>,
    pub untwisted_sum: i64,
    pub twisted_sum: i64,
    pub expected_n_z: u64,
    pub rotation_pairs_ok: bool,
}

pub fn pair_reports(classes: &[TriangleClass], max_k: usize) -> Vec<PairReport> {
    (1..=max_k)
        .map(|k| {
            let members: Vec<&TriangleClass> = classes.iter().filter(|c| c.k == k).collect();
            let rotation_pairs_ok = members.len() == 2
                && members[0].rotation_partner == members[1].gamma_lift
                && members[1].rotation_partner == members[0].gamma_lift
                && members[0].n_z == members[1].n_z
                && members[0].delta_p_parity != members[1].delta_p_parity;
            PairReport {
                k,
                n_z: members.iter().map(|c| c.n_z).collect(),
                delta_p_parities: members.iter().map(|c| c.delta_p_parity).collect(),
                untwisted_sum: pair_sum(classes, k, false),
                twisted_sum: pair_sum(classes, k, true),
                expected_n_z: (k * (k - 1) / 2) as u64,
                rotation_pairs_ok,
            }
        })
        .collect()
}

/// Two isotopic curves on an annulus: `α` is the core `y = 0`, and `β` is
/// the graph of the piecewise-linear periodic function through
/// `(nodes[i], heights[i])` (period 1, `nodes` increasing in `[0, 1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusConfig {
    pub nodes: Vec<Q>,
    pub heights: Vec<Q>,
    /// `+1` if `α` runs in the `+x` direction.
    pub alpha_orientation: i32,
    /// `+1` if `β` runs in the `+x` direction.
    pub beta_orientation: i32,
}

impl AnnulusConfig {
    /// `β` rises above `α` on `(0, ½)` and dips below on `(½, 1)`.
    pub fn standard() -> Self {
        let quarter = Q::new(1.into(), 4.into());
        AnnulusConfig {
            nodes: vec![q(0), quarter.clone(), half(), half() + &quarter],
            heights: vec![q(0), quarter.clone(), q(0), -quarter],
            alpha_orientation: 1,
            beta_orientation: 1,
        }
    }

    pub fn reversed(&self) -> Self {
        AnnulusConfig {
            alpha_orientation: -self.alpha_orientation,
            beta_orientation: -self.beta_orientation,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigonClass {
    /// Index of the bigon, in order of increasing `x`.
    pub index: usize,
    /// Whether the bigon lies on the left of `α`.
    pub left_of_alpha: bool,
    /// Corner where the bigon's boundary leaves along `α` (the source).
    pub source: usize,
    pub target: usize,
    pub sign: i32,
}

/// Crossings of `β` with `α` as `x`-coordinates in `[0, 1)`.
fn crossings(c: &AnnulusConfig) -> Vec<Q> {
    let m = c.nodes.len();
    let mut out = Vec::new();
    for i in 0..m {
        let (x0, y0) = (&c.nodes[i], &c.heights[i]);
        let (x1, y1) = if i + 1 < m { (c.nodes[i + 1].clone(), &c.heights[i + 1]) } else { (&c.nodes[0] + q(1), &c.heights[0]) };
        if y0.is_zero() {
            out.push(x0.clone());
        } else if !y1.is_zero() && y0.signum() != y1.signum() {
            out.push(x0 + (&x1 - x0) * (y0 / (y0 - y1)));
        }
    }
    out
}

/// Height of `β` above `x`.
fn height_at(c: &AnnulusConfig, x: &Q) -> Q {
    let m = c.nodes.len();
    let x = x - x.floor();
    for i in 0..m {
        let x0 = &c.nodes[i];
        let x1 = if i + 1 < m { c.nodes[i + 1].clone() } else { &c.nodes[0] + q(1) };
        if &x >= x0 && x < x1 {
            let y0 = &c.heights[i];
            let y1 = if i + 1 < m { &c.heights[i + 1] } else { &c.heights[0] };
            return y0 + (y1 - y0) * ((&x - x0) / (&x1 - x0));
        }
    }
    c.heights[0].clone()
}

/// The bigons between `α` and `β`. A bigon on the left of `α` counts `+1`,
/// the other `−1`.
pub fn enumerate_bigons(c: &AnnulusConfig) -> Result<Vec<BigonClass>, TriangleError> {
    let xs = crossings(c);
    if xs.len() != 2 {
        return Err(TriangleError::WrongIntersectionCount(xs.len()));
    }
    let mut out = Vec::new();
    for i in 0..2 {
        let lo = xs[i].clone();
        let hi = if i == 0 { xs[1].clone() } else { &xs[0] + q(1) };
        let mid = (&lo + &hi) / q(2);
        let above = height_at(c, &mid).is_positive();
        // left of α: above when α runs in +x
        let left = above == (c.alpha_orientation > 0);
        // boundary orientation of the region runs along α from the left end
        // of its interval when the region is above α
        let (source, target) = if above { (i, 1 - i) } else { (1 - i, i) };
        out.push(BigonClass { index: i, left_of_alpha: left, source, target, sign: if left { 1 } else { -1 } });
    }
    Ok(out)
}

/// `[⟨∂x_0, x_1⟩, ⟨∂x_1, x_0⟩]` in the two-generator complex.
pub fn bigon_differential(bigons: &[BigonClass]) -> [i64; 2] {
    let from = |s: usize| bigons.iter().filter(|b| b.source == s).map(|b| b.sign as i64).sum();
    [from(0), from(1)]
}
