//! Polyhedral convex cones in halfspace (H) and generator (V) form.
//!
//! The workhorse is [`h_to_v`], a double description sweep with the exact
//! rank-based adjacency test; every canonicalization in the crate funnels
//! through it. H-forms obtained from [`minimal_form`]/[`polar`] are
//! irredundant and unique for the point set, so cone equality is decidable
//! by comparing representations.

use crate::linalg::{kernel_basis, reduce_mod_span, span_basis};
use crate::lp::{feasible_point, HPolyhedron};
use crate::rational::{RMatrix, RVector, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Cone {v : aᵀv = 0 for a in eq, aᵀv ≤ 0 for a in ineq}. Always contains 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HCone {
    pub dim: usize,
    pub eq: Vec<RVector>,
    pub ineq: Vec<RVector>,
}

/// Cone span(lineality) + nonnegative combinations of rays.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VCone {
    pub dim: usize,
    pub lineality: Vec<RVector>,
    pub rays: Vec<RVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeError {
    NotMember,
    NotNormal,
    NotNested,
    /// Face enumeration refuses beyond this many inequality rows.
    TooManyRows {
        rows: usize,
        cap: usize,
    },
}

impl std::fmt::Display for ConeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConeError::NotMember => write!(f, "point is not a member of the cone"),
            ConeError::NotNormal => write!(f, "vector is not in the normal cone"),
            ConeError::NotNested => write!(f, "faces are not nested"),
            ConeError::TooManyRows { rows, cap } => {
                write!(f, "face enumeration over {} rows exceeds cap {}", rows, cap)
            }
        }
    }
}

impl std::error::Error for ConeError {}

impl HCone {
    /// Canonical row form: coprime-integer scaling (sign-normalized for
    /// equality rows), sorted, deduplicated, zero rows dropped.
    pub fn new(dim: usize, eq: Vec<RVector>, ineq: Vec<RVector>) -> Self {
        let mut eq_rows: Vec<RVector> = eq
            .into_iter()
            .inspect(|a| assert_eq!(a.len(), dim, "equality row dimension mismatch"))
            .filter(|a| !a.is_zero())
            .map(|a| a.to_coprime_integer_signed())
            .collect();
        let mut ineq_rows: Vec<RVector> = ineq
            .into_iter()
            .inspect(|a| assert_eq!(a.len(), dim, "inequality row dimension mismatch"))
            .filter(|a| !a.is_zero())
            .map(|a| a.to_coprime_integer())
            .collect();
        eq_rows.sort();
        eq_rows.dedup();
        ineq_rows.sort();
        ineq_rows.dedup();
        HCone {
            dim,
            eq: eq_rows,
            ineq: ineq_rows,
        }
    }

    pub fn whole_space(dim: usize) -> Self {
        HCone::new(dim, Vec::new(), Vec::new())
    }

    /// The subspace {v : v_i free} ∩ {all rows = 0}... i.e. {0} when rows
    /// span. Convenience for tests.
    pub fn origin_only(dim: usize) -> Self {
        let eq = (0..dim).map(|i| RVector::unit(dim, i)).collect();
        HCone::new(dim, eq, Vec::new())
    }

    pub fn contains(&self, v: &RVector) -> bool {
        assert_eq!(v.len(), self.dim);
        self.eq.iter().all(|a| a.dot(v).is_zero())
            && self.ineq.iter().all(|a| !a.dot(v).is_positive())
    }

    /// All rows as a stacked matrix (equalities first).
    pub fn stacked_rows(&self) -> RMatrix {
        let rows: Vec<RVector> = self.eq.iter().chain(self.ineq.iter()).cloned().collect();
        RMatrix::from_rows(&rows, self.dim)
    }

    /// Irredundant canonical H-form of the same point set.
    pub fn minimal_form(&self) -> HCone {
        v_to_h(&h_to_v(self))
    }

    /// View as a polyhedron (all right-hand sides zero).
    pub fn as_polyhedron(&self) -> HPolyhedron {
        HPolyhedron::new(
            self.dim,
            self.eq
                .iter()
                .map(|a| (a.clone(), Rational::zero()))
                .collect(),
            self.ineq
                .iter()
                .map(|a| (a.clone(), Rational::zero()))
                .collect(),
        )
    }

    /// Product cone on the concatenated coordinates.
    pub fn product(&self, other: &HCone) -> HCone {
        let dim = self.dim + other.dim;
        let pad_left = |a: &RVector| a.concat(&RVector::zeros(other.dim));
        let pad_right = |a: &RVector| RVector::zeros(self.dim).concat(a);
        HCone::new(
            dim,
            self.eq
                .iter()
                .map(pad_left)
                .chain(other.eq.iter().map(pad_right))
                .collect(),
            self.ineq
                .iter()
                .map(pad_left)
                .chain(other.ineq.iter().map(pad_right))
                .collect(),
        )
    }
}

impl VCone {
    /// Canonicalize a raw generator list via a double-description round
    /// trip: the result has a canonical lineality basis and irredundant rays
    /// reduced modulo the lineality.
    pub fn from_generators(dim: usize, lineality: Vec<RVector>, rays: Vec<RVector>) -> Self {
        let raw = VCone {
            dim,
            lineality,
            rays,
        };
        h_to_v(&v_to_h(&raw))
    }

    pub fn contains(&self, x: &RVector) -> bool {
        // x = Σ α_i ray_i + Σ β_j lin_j with α ≥ 0: a small feasibility LP.
        let k = self.rays.len();
        let l = self.lineality.len();
        if k + l == 0 {
            return x.is_zero();
        }
        let mut eq = Vec::new();
        for coord in 0..self.dim {
            let mut row = RVector::zeros(k + l);
            for (i, r) in self.rays.iter().enumerate() {
                row[i] = r[coord].clone();
            }
            for (j, b) in self.lineality.iter().enumerate() {
                row[k + j] = b[coord].clone();
            }
            eq.push((row, x[coord].clone()));
        }
        let ineq = (0..k)
            .map(|i| {
                let mut row = RVector::zeros(k + l);
                row[i] = -Rational::one();
                (row, Rational::zero())
            })
            .collect();
        feasible_point(&HPolyhedron::new(k + l, eq, ineq)).is_some()
    }

    /// Generator list: rays plus ± each lineality basis vector.
    pub fn generators_with_lineality_signs(&self) -> Vec<RVector> {
        let mut gens = self.rays.clone();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.neg());
        }
        gens
    }

    /// A relative-interior point: sum of all rays and lineality basis
    /// vectors (0 for the trivial cone).
    pub fn ri_point(&self) -> RVector {
        let mut p = RVector::zeros(self.dim);
        for r in self.rays.iter().chain(self.lineality.iter()) {
            p = p.add(r);
        }
        p
    }
}

/// Double description: minimal canonical V-form of an H-cone.
pub fn h_to_v(cone: &HCone) -> VCone {
    let dim = cone.dim;
    // equalities processed as opposing inequality pairs
    let mut rows: Vec<RVector> = Vec::new();
    for a in &cone.eq {
        rows.push(a.clone());
        rows.push(a.neg());
    }
    rows.extend(cone.ineq.iter().cloned());

    let mut lineality: Vec<RVector> = (0..dim).map(|i| RVector::unit(dim, i)).collect();
    let mut rays: Vec<RVector> = Vec::new();

    for idx in 0..rows.len() {
        let a = rows[idx].clone();
        // Lineality pivot: if the row is non-orthogonal to the lineality
        // space, eliminate one basis vector into a single boundary ray.
        if let Some(p) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let l0 = lineality.remove(p);
            let al0 = a.dot(&l0);
            for l in lineality.iter_mut() {
                let f = a.dot(l) / &al0;
                *l = l.sub(&l0.scale(&f)).to_coprime_integer_signed();
            }
            for r in rays.iter_mut() {
                let f = a.dot(r) / &al0;
                *r = r.sub(&l0.scale(&f)).to_coprime_integer();
            }
            let new_ray = if al0.is_positive() { l0.neg() } else { l0 };
            rays.push(new_ray.to_coprime_integer());
            continue;
        }
        let s: Vec<Rational> = rays.iter().map(|r| a.dot(r)).collect();
        if s.iter().all(|v| !v.is_positive()) {
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_negative()).collect();
        let mut next: Vec<RVector> = (0..rays.len())
            .filter(|&i| !s[i].is_positive())
            .map(|i| rays[i].clone())
            .collect();
        for &i in &pos {
            for &j in &neg {
                if adjacent(&rows[..idx], &rays[i], &rays[j], dim, lineality.len()) {
                    // s_i·r_j - s_j·r_i lands on the hyperplane with positive
                    // coefficients on both parents.
                    let combo = rays[j].scale(&s[i]).sub(&rays[i].scale(&s[j]));
                    next.push(combo.to_coprime_integer());
                }
            }
        }
        rays = next;
    }

    let lin_basis = span_basis(&lineality, dim);
    let mut out_rays: Vec<RVector> = rays
        .iter()
        .map(|r| reduce_mod_span(r, &lin_basis).to_coprime_integer())
        .filter(|r| !r.is_zero())
        .collect();
    out_rays.sort();
    out_rays.dedup();
    VCone {
        dim,
        lineality: lin_basis,
        rays: out_rays,
    }
}

/// Rank-based adjacency of two extreme rays within the cone of the rows
/// processed so far: the rows tight at both must have nullity exactly
/// (lineality dimension + 2).
fn adjacent(
    processed: &[RVector],
    r1: &RVector,
    r2: &RVector,
    dim: usize,
    lineality_dim: usize,
) -> bool {
    let tight: Vec<RVector> = processed
        .iter()
        .filter(|a| a.dot(r1).is_zero() && a.dot(r2).is_zero())
        .cloned()
        .collect();
    let rank = if tight.is_empty() {
        0
    } else {
        crate::linalg::rank(&RMatrix::from_rows(&tight, dim))
    };
    dim - rank == lineality_dim + 2
}

/// Minimal canonical H-form of a V-cone: the polar's generators, obtained by
/// one more double description sweep, are exactly the facets and equalities.
pub fn v_to_h(v: &VCone) -> HCone {
    let polar_h = HCone::new(v.dim, v.lineality.clone(), v.rays.clone());
    let polar_v = h_to_v(&polar_h);
    HCone::new(v.dim, polar_v.lineality, polar_v.rays)
}

/// Polar cone K° = {y : yᵀv ≤ 0 for all v in K}, in minimal H-form.
pub fn polar(k: &HCone) -> HCone {
    let v = h_to_v(k);
    HCone::new(k.dim, v.lineality, v.rays)
}

/// Set equality of two H-cones.
pub fn cone_eq(a: &HCone, b: &HCone) -> bool {
    a.minimal_form() == b.minimal_form()
}

/// Basis of the lineality space {v : all rows vanish}.
pub fn lineality(k: &HCone) -> Vec<RVector> {
    kernel_basis(&k.stacked_rows())
}

/// Basis of span(K) = K - K.
pub fn span_plus(k: &HCone) -> Vec<RVector> {
    let v = h_to_v(k);
    let gens: Vec<RVector> = v.lineality.iter().chain(v.rays.iter()).cloned().collect();
    span_basis(&gens, k.dim)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Outside,
    In { tight: BTreeSet<usize> },
}

/// Membership with the exact tight inequality set I(v).
pub fn membership(k: &HCone, v: &RVector) -> Membership {
    assert_eq!(v.len(), k.dim);
    if k.eq.iter().any(|a| !a.dot(v).is_zero()) {
        return Membership::Outside;
    }
    let mut tight = BTreeSet::new();
    for (i, a) in k.ineq.iter().enumerate() {
        let val = a.dot(v);
        if val.is_positive() {
            return Membership::Outside;
        }
        if val.is_zero() {
            tight.insert(i);
        }
    }
    Membership::In { tight }
}

/// Inequality rows that vanish on all of K (implicit equalities).
pub fn implicit_equalities(k: &HCone) -> BTreeSet<usize> {
    let v = h_to_v(k);
    let gens: Vec<RVector> = v.lineality.iter().chain(v.rays.iter()).cloned().collect();
    k.ineq
        .iter()
        .enumerate()
        .filter(|(_, a)| gens.iter().all(|g| a.dot(g).is_zero()))
        .map(|(i, _)| i)
        .collect()
}

/// Whether v lies in the relative interior of K.
pub fn ri_member(k: &HCone, v: &RVector) -> bool {
    match membership(k, v) {
        Membership::Outside => false,
        Membership::In { tight } => tight == implicit_equalities(k),
    }
}

/// Whether x lies in the relative interior of a polyhedron, via its
/// homogenization: x ∈ ri P iff (x, 1) ∈ ri of the cone over P × {1}.
pub fn ri_member_polyhedron(p: &HPolyhedron, x: &RVector) -> bool {
    let mut lifted = x.clone();
    lifted.0.push(Rational::one());
    ri_member(&p.homogenize(), &lifted)
}

/// Tangent cone T_K(v): the tight inequalities kept, the rest dropped.
pub fn tangent_cone(k: &HCone, v: &RVector) -> Result<HCone, ConeError> {
    match membership(k, v) {
        Membership::Outside => Err(ConeError::NotMember),
        Membership::In { tight } => Ok(HCone::new(
            k.dim,
            k.eq.clone(),
            tight.iter().map(|&i| k.ineq[i].clone()).collect(),
        )),
    }
}

/// Normal cone N_K(v) in generator form: tight inequality rows as rays,
/// equality rows spanning the lineality.
pub fn normal_cone_at(k: &HCone, v: &RVector) -> Result<VCone, ConeError> {
    match membership(k, v) {
        Membership::Outside => Err(ConeError::NotMember),
        Membership::In { tight } => Ok(VCone::from_generators(
            k.dim,
            k.eq.clone(),
            tight.iter().map(|&i| k.ineq[i].clone()).collect(),
        )),
    }
}

/// Tangent cone to a polyhedron at a feasible point.
pub fn tangent_of_polyhedron(p: &HPolyhedron, z: &RVector) -> Result<HCone, ConeError> {
    if !p.contains(z) {
        return Err(ConeError::NotMember);
    }
    let tight = p.tight_at(z);
    Ok(HCone::new(
        p.dim,
        p.eq.iter().map(|(a, _)| a.clone()).collect(),
        tight.iter().map(|&i| p.ineq[i].0.clone()).collect(),
    ))
}

/// Normal cone to a polyhedron at a feasible point, in generator form.
pub fn normal_of_polyhedron(p: &HPolyhedron, z: &RVector) -> Result<VCone, ConeError> {
    if !p.contains(z) {
        return Err(ConeError::NotMember);
    }
    let tight = p.tight_at(z);
    Ok(VCone::from_generators(
        p.dim,
        p.eq.iter().map(|(a, _)| a.clone()).collect(),
        tight.iter().map(|&i| p.ineq[i].0.clone()).collect(),
    ))
}

/// Critical cone K_K(v, z*) = T_K(v) ∩ [z*]⊥. `z*` must be a normal at `v`.
pub fn critical_cone(k: &HCone, v: &RVector, zstar: &RVector) -> Result<HCone, ConeError> {
    let normal = normal_cone_at(k, v)?;
    if !normal.contains(zstar) {
        return Err(ConeError::NotNormal);
    }
    let t = tangent_cone(k, v)?;
    let mut eq = t.eq.clone();
    eq.push(zstar.clone());
    Ok(HCone::new(k.dim, eq, t.ineq))
}

/// Critical cone to a polyhedron at (z, z*).
pub fn critical_cone_of_polyhedron(
    p: &HPolyhedron,
    z: &RVector,
    zstar: &RVector,
) -> Result<HCone, ConeError> {
    let normal = normal_of_polyhedron(p, z)?;
    if !normal.contains(zstar) {
        return Err(ConeError::NotNormal);
    }
    let t = tangent_of_polyhedron(p, z)?;
    let mut eq = t.eq.clone();
    eq.push(zstar.clone());
    Ok(HCone::new(p.dim, eq, t.ineq))
}

/// A face, recorded by the maximal set of inequality rows vanishing on it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FaceDescriptor {
    pub tight: BTreeSet<usize>,
}

pub const FACE_ROW_CAP: usize = 12;

/// The cone cut out by a face descriptor.
pub fn face_cone(k: &HCone, f: &FaceDescriptor) -> HCone {
    let mut eq = k.eq.clone();
    let mut ineq = Vec::new();
    for (i, a) in k.ineq.iter().enumerate() {
        if f.tight.contains(&i) {
            eq.push(a.clone());
        } else {
            ineq.push(a.clone());
        }
    }
    HCone::new(k.dim, eq, ineq)
}

/// A relative-interior representative of the face.
pub fn face_ri_point(k: &HCone, f: &FaceDescriptor) -> RVector {
    h_to_v(&face_cone(k, f)).ri_point()
}

/// Descriptor of the smallest face of K containing `sub` (for a face of K,
/// its own descriptor).
pub fn face_descriptor_of(k: &HCone, sub: &HCone) -> FaceDescriptor {
    FaceDescriptor {
        tight: maximal_tight_set(k, sub),
    }
}

/// Maximal tight set of an arbitrary sub-cone of K.
fn maximal_tight_set(k: &HCone, sub: &HCone) -> BTreeSet<usize> {
    let v = h_to_v(sub);
    let gens: Vec<RVector> = v.lineality.iter().chain(v.rays.iter()).cloned().collect();
    k.ineq
        .iter()
        .enumerate()
        .filter(|(_, a)| gens.iter().all(|g| a.dot(g).is_zero()))
        .map(|(i, _)| i)
        .collect()
}

/// All distinct faces of K, ordered by their maximal tight sets. Every
/// subset of inequality rows turned into equalities yields a face, and every
/// face arises this way; duplicates collapse onto the maximal tight set.
pub fn faces(k: &HCone) -> Result<Vec<FaceDescriptor>, ConeError> {
    let n = k.ineq.len();
    if n > FACE_ROW_CAP {
        return Err(ConeError::TooManyRows {
            rows: n,
            cap: FACE_ROW_CAP,
        });
    }
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let tight: BTreeSet<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let f = FaceDescriptor { tight };
        let maximal = maximal_tight_set(k, &face_cone(k, &f));
        seen.insert(maximal);
    }
    Ok(seen
        .into_iter()
        .map(|tight| FaceDescriptor { tight })
        .collect())
}

/// Whether face `f2` is contained in face `f1` (maximal tight sets reverse
/// the order).
pub fn face_subset(f2: &FaceDescriptor, f1: &FaceDescriptor) -> bool {
    f1.tight.is_subset(&f2.tight)
}

/// The difference cone F1 - F2 for nested faces F2 ⊆ F1: equalities on the
/// rows tight on F1, inequalities on the remaining rows tight on F2.
pub fn face_difference(
    k: &HCone,
    f1: &FaceDescriptor,
    f2: &FaceDescriptor,
) -> Result<HCone, ConeError> {
    if !face_subset(f2, f1) {
        return Err(ConeError::NotNested);
    }
    let mut eq = k.eq.clone();
    let mut ineq = Vec::new();
    for &i in &f2.tight {
        if f1.tight.contains(&i) {
            eq.push(k.ineq[i].clone());
        } else {
            ineq.push(k.ineq[i].clone());
        }
    }
    Ok(HCone::new(k.dim, eq, ineq))
}

/// The limiting normal cone to gph N_C at (z, z*), as the family of branches
/// ((F1-F2)°, F1-F2) over nested face pairs of the critical cone K_C(z, z*).
pub fn limiting_normal_gph(
    c: &HPolyhedron,
    z: &RVector,
    zstar: &RVector,
) -> Result<Vec<(HCone, HCone)>, ConeError> {
    let crit = critical_cone_of_polyhedron(c, z, zstar)?;
    let fs = faces(&crit)?;
    let mut branches: BTreeSet<(HCone, HCone)> = BTreeSet::new();
    for f1 in &fs {
        for f2 in &fs {
            if !face_subset(f2, f1) {
                continue;
            }
            let d = face_difference(&crit, f1, f2)?.minimal_form();
            let p = polar(&d);
            branches.insert((p, d));
        }
    }
    Ok(branches.into_iter().collect())
}
