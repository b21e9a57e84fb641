//! H-polyhedra and an exact rational simplex.
//!
//! The solver is a dense two-phase tableau method with Bland's rule, so it
//! terminates under degeneracy (the multiplier polytopes this crate feeds it
//! are typically degenerate). Every outcome is a value: optima carry the
//! optimal point, the tight inequality set and certifying duals; unbounded
//! problems carry an improving recession ray; infeasible problems carry a
//! Farkas certificate.

use crate::cone;
use crate::rational::{RMatrix, RVector, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Polyhedron {x : aᵀx = b for (a,b) in eq, aᵀx ≤ b for (a,b) in ineq}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HPolyhedron {
    pub dim: usize,
    pub eq: Vec<(RVector, Rational)>,
    pub ineq: Vec<(RVector, Rational)>,
}

impl HPolyhedron {
    /// Builds the polyhedron in canonical row form: rows scaled to coprime
    /// integers (sign-normalized for equalities), sorted, deduplicated,
    /// trivial `0 = 0` / `0 ≤ b, b ≥ 0` rows dropped.
    pub fn new(dim: usize, eq: Vec<(RVector, Rational)>, ineq: Vec<(RVector, Rational)>) -> Self {
        let mut eq_rows: Vec<(RVector, Rational)> = Vec::new();
        for (a, b) in eq {
            assert_eq!(a.len(), dim, "equality row dimension mismatch");
            let row = a.concat(&RVector(vec![b]));
            if row.is_zero() {
                continue;
            }
            let row = row.to_coprime_integer_signed();
            eq_rows.push((RVector(row.0[..dim].to_vec()), row.0[dim].clone()));
        }
        let mut ineq_rows: Vec<(RVector, Rational)> = Vec::new();
        for (a, b) in ineq {
            assert_eq!(a.len(), dim, "inequality row dimension mismatch");
            if a.is_zero() && !b.is_negative() {
                continue;
            }
            let row = a.concat(&RVector(vec![b]));
            let row = row.to_coprime_integer();
            ineq_rows.push((RVector(row.0[..dim].to_vec()), row.0[dim].clone()));
        }
        eq_rows.sort();
        eq_rows.dedup();
        ineq_rows.sort();
        ineq_rows.dedup();
        HPolyhedron {
            dim,
            eq: eq_rows,
            ineq: ineq_rows,
        }
    }

    pub fn whole_space(dim: usize) -> Self {
        HPolyhedron {
            dim,
            eq: Vec::new(),
            ineq: Vec::new(),
        }
    }

    pub fn contains(&self, x: &RVector) -> bool {
        assert_eq!(x.len(), self.dim);
        self.eq.iter().all(|(a, b)| &a.dot(x) == b) && self.ineq.iter().all(|(a, b)| &a.dot(x) <= b)
    }

    /// Indices of inequality rows active at `x` (assumes `x` feasible).
    pub fn tight_at(&self, x: &RVector) -> BTreeSet<usize> {
        self.ineq
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| &a.dot(x) == b)
            .map(|(i, _)| i)
            .collect()
    }

    /// Homogenization {(x,t) : Ax - bt ≤ 0, Ex - et = 0, -t ≤ 0}.
    pub fn homogenize(&self) -> cone::HCone {
        let eq = self
            .eq
            .iter()
            .map(|(a, b)| a.concat(&RVector(vec![-b.clone()])))
            .collect();
        let mut ineq: Vec<RVector> = self
            .ineq
            .iter()
            .map(|(a, b)| a.concat(&RVector(vec![-b.clone()])))
            .collect();
        let mut t_row = RVector::zeros(self.dim + 1);
        t_row[self.dim] = -Rational::one();
        ineq.push(t_row);
        cone::HCone::new(self.dim + 1, eq, ineq)
    }

    /// Irredundant canonical form, via a double-description round trip on the
    /// homogenization. Two polyhedra describe the same set iff their
    /// canonical forms are equal. The empty set canonicalizes to `0 ≤ -1`.
    pub fn canonical_min(&self) -> HPolyhedron {
        if feasible_point(self).is_none() {
            let zero = RVector::zeros(self.dim);
            return HPolyhedron {
                dim: self.dim,
                eq: Vec::new(),
                ineq: vec![(zero, -Rational::one())],
            };
        }
        let min = self.homogenize().minimal_form();
        let mut eq = Vec::new();
        for row in &min.eq {
            eq.push((
                RVector(row.0[..self.dim].to_vec()),
                -row.0[self.dim].clone(),
            ));
        }
        let mut ineq = Vec::new();
        for row in &min.ineq {
            let a = RVector(row.0[..self.dim].to_vec());
            if a.is_zero() {
                // the t ≥ 0 row of the homogenization
                continue;
            }
            ineq.push((a, -row.0[self.dim].clone()));
        }
        HPolyhedron::new(self.dim, eq, ineq)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Max,
    Min,
}

/// Result of an exact LP solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: RVector,
        /// Inequality rows active at `point`.
        tight: BTreeSet<usize>,
        /// Certifying duals, one per inequality row then one per equality
        /// row: Σ dual·row = objective and Σ dual·rhs = value, with the
        /// inequality duals ≥ 0 for Max (≤ 0 for Min).
        dual_ineq: Vec<Rational>,
        dual_eq: Vec<Rational>,
    },
    Unbounded {
        /// Recession direction with strictly improving objective.
        ray: RVector,
    },
    Infeasible {
        /// Coefficients over [ineq rows..., eq rows...]: nonnegative on the
        /// inequalities, signed on the equalities, combining to 0ᵀx ≤ -1.
        farkas: RVector,
    },
}

/// Feasibility check: a feasible point, or a Farkas certificate.
pub fn feasible_point(p: &HPolyhedron) -> Option<RVector> {
    match lp_solve(&RVector::zeros(p.dim), p, Sense::Max) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
        LpOutcome::Infeasible { .. } => None,
    }
}

/// Exact simplex with Bland's anti-cycling rule. Deterministic for fixed
/// input.
pub fn lp_solve(objective: &RVector, p: &HPolyhedron, sense: Sense) -> LpOutcome {
    assert_eq!(objective.len(), p.dim, "objective dimension mismatch");
    let d = p.dim;
    let n_ineq = p.ineq.len();
    let n_eq = p.eq.len();
    let m = n_ineq + n_eq;
    // Standard form: z = [u(d), v(d), s(n_ineq)] ≥ 0, x = u - v.
    let n = 2 * d + n_ineq;
    // rows: first the inequalities (with slack), then the equalities;
    // sigma[r] = -1 if the row was negated to make the rhs nonnegative.
    let mut dmat: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut sigma: Vec<Rational> = Vec::with_capacity(m);
    for (r, (a, b)) in p.ineq.iter().chain(p.eq.iter()).enumerate() {
        let mut row = vec![Rational::zero(); n];
        for j in 0..d {
            row[j] = a[j].clone();
            row[d + j] = -a[j].clone();
        }
        if r < n_ineq {
            row[2 * d + r] = Rational::one();
        }
        let s = if b.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        if s.is_negative() {
            for e in row.iter_mut() {
                *e = -e.clone();
            }
        }
        dmat.push(row);
        rhs.push(b * &s);
        sigma.push(s);
    }

    // Phase 1: artificial columns n..n+m, minimize their sum.
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row = dmat[r].clone();
            row.extend((0..m).map(|k| {
                if k == r {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let ncols = n + m;
    let phase1_cost: Vec<Rational> = (0..ncols)
        .map(|j| {
            if j >= n {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let res1 = simplex_min(&mut t, &mut basis, ncols, &phase1_cost);
    debug_assert!(matches!(res1, SimplexStep::Optimal));
    let w: Rational = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(r, _)| t[r][ncols].clone())
        .fold(Rational::zero(), |a, b| a + b);
    if w.is_positive() {
        // Infeasible: read duals off the artificial columns (they hold B⁻¹)
        // and fold the sign flips back in.
        let y: Vec<Rational> = (0..m)
            .map(|r| {
                let mut acc = Rational::zero();
                for (s, &bcol) in basis.iter().enumerate() {
                    if bcol >= n {
                        acc += &t[s][n + r];
                    }
                }
                acc
            })
            .collect();
        let mut farkas: Vec<Rational> = (0..m).map(|r| -(&sigma[r] * &y[r])).collect();
        // normalize to 0ᵀx ≤ -1
        let total: Rational = farkas
            .iter()
            .zip(p.ineq.iter().chain(p.eq.iter()))
            .map(|(f, (_, b))| f * b)
            .fold(Rational::zero(), |a, b| a + b);
        debug_assert!(total.is_negative());
        let scale = (-total).recip();
        for f in farkas.iter_mut() {
            *f *= &scale;
        }
        return LpOutcome::Infeasible {
            farkas: RVector(farkas),
        };
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    let mut dropped: Vec<usize> = Vec::new(); // original row index of dropped rows
    let mut row_of: Vec<Option<usize>> = (0..m).map(Some).collect();
    while r < basis.len() {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t[r][j].is_zero()) {
                pivot(&mut t, &mut basis, r, j, ncols);
            } else {
                // redundant constraint row
                let orig = row_of
                    .iter()
                    .enumerate()
                    .filter_map(|(o, &slot)| slot.map(|s| (o, s)))
                    .find(|&(_, s)| s == r)
                    .map(|(o, _)| o)
                    .expect("row bookkeeping");
                dropped.push(orig);
                row_of[orig] = None;
                for slot in row_of.iter_mut().flatten() {
                    if *slot > r {
                        *slot -= 1;
                    }
                }
                t.remove(r);
                basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    // Phase 2 on z-columns only.
    for row in t.iter_mut() {
        let rhsv = row[ncols].clone();
        row.truncate(n);
        row.push(rhsv);
    }
    let mut cost: Vec<Rational> = vec![Rational::zero(); n];
    for j in 0..d {
        let c = match sense {
            Sense::Max => -objective[j].clone(),
            Sense::Min => objective[j].clone(),
        };
        cost[j] = c.clone();
        cost[d + j] = -c;
    }
    match simplex_min(&mut t, &mut basis, n, &cost) {
        SimplexStep::Unbounded { col } => {
            let mut dz = vec![Rational::zero(); n];
            dz[col] = Rational::one();
            for (r, &b) in basis.iter().enumerate() {
                dz[b] = -t[r][col].clone();
            }
            let ray = RVector((0..d).map(|j| &dz[j] - &dz[d + j]).collect());
            LpOutcome::Unbounded { ray }
        }
        SimplexStep::Optimal => {
            let mut z = vec![Rational::zero(); n];
            for (r, &b) in basis.iter().enumerate() {
                z[b] = t[r][n].clone();
            }
            let point = RVector((0..d).map(|j| &z[j] - &z[d + j]).collect());
            let value = objective.dot(&point);
            let tight = p.tight_at(&point);
            // Duals: solve Bᵀ y = c_B over the surviving rows, then map back
            // through the sign flips (dropped redundant rows get dual 0).
            let mrows = basis.len();
            let surviving: Vec<usize> = (0..m).filter(|&orig| row_of[orig].is_some()).collect();
            let mut bt = RMatrix::zeros(mrows, mrows);
            for (k, &bcol) in basis.iter().enumerate() {
                for (rr, &orig) in surviving.iter().enumerate() {
                    // dmat rows were built after the sign flip
                    bt[(k, rr)] = dmat[orig][bcol].clone();
                }
            }
            let cb = RVector(basis.iter().map(|&b| cost[b].clone()).collect());
            let (y, _) = crate::linalg::solve_affine(&bt, &cb).expect("basis is invertible");
            let mut dual_std = vec![Rational::zero(); m];
            for orig in 0..m {
                if let Some(rr) = row_of[orig] {
                    dual_std[orig] = y[rr].clone();
                }
            }
            // Undo standardization: row flip by sigma, objective flip for Max.
            let obj_sign = match sense {
                Sense::Max => -Rational::one(),
                Sense::Min => Rational::one(),
            };
            let dual: Vec<Rational> = (0..m)
                .map(|orig| &dual_std[orig] * &sigma[orig] * &obj_sign)
                .collect();
            let dual_ineq = dual[..n_ineq].to_vec();
            let dual_eq = dual[n_ineq..].to_vec();
            LpOutcome::Optimal {
                value,
                point,
                tight,
                dual_ineq,
                dual_eq,
            }
        }
    }
}

enum SimplexStep {
    Optimal,
    Unbounded { col: usize },
}

/// Minimize `cost`ᵀz over the current tableau with Bland's rule: the
/// entering column is the lowest index with negative reduced cost, ties in
/// the ratio test break toward the lowest basis index.
fn simplex_min(
    t: &mut [Vec<Rational>],
    basis: &mut [usize],
    ncols: usize,
    cost: &[Rational],
) -> SimplexStep {
    let m = t.len();
    loop {
        // reduced costs: rc_j = c_j - c_Bᵀ t[:,j]
        let mut entering: Option<usize> = None;
        'cols: for j in 0..ncols {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j].clone();
            for r in 0..m {
                if !t[r][j].is_zero() && !cost[basis[r]].is_zero() {
                    rc -= &cost[basis[r]] * &t[r][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(j) = entering else {
            return SimplexStep::Optimal;
        };
        // ratio test, ties broken by smallest basis index (Bland)
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if t[r][j].is_positive() {
                let ratio = &t[r][ncols] / &t[r][j];
                match &leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]) {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return SimplexStep::Unbounded { col: j };
        };
        pivot(t, basis, r, j, ncols);
    }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize, ncols: usize) {
    let inv = t[r][j].recip();
    for e in t[r].iter_mut() {
        *e *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[j].is_zero() {
            let f = row[j].clone();
            for (c, e) in row.iter_mut().enumerate().take(ncols + 1) {
                let delta = &f * &pivot_row[c];
                *e = &*e - &delta;
            }
        }
    }
    basis[r] = j;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexError {
    /// The polyhedron contains a line; callers quotient lineality explicitly.
    NotPointed,
}

impl std::fmt::Display for VertexError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "polyhedron contains a line; vertices are undefined")
    }
}

impl std::error::Error for VertexError {}

/// All extreme points of `p`, in lexicographic order. Errors on polyhedra
/// with nontrivial lineality; returns the empty list for the empty set.
pub fn vertices(p: &HPolyhedron) -> Result<Vec<RVector>, VertexError> {
    let v = cone::h_to_v(&p.homogenize());
    let mut verts: Vec<RVector> = Vec::new();
    let mut has_vertex_ray = false;
    for r in &v.rays {
        let t = &r[p.dim];
        if t.is_positive() {
            has_vertex_ray = true;
            let inv = t.recip();
            verts.push(RVector(r.0[..p.dim].iter().map(|x| x * &inv).collect()));
        }
    }
    if !has_vertex_ray {
        // empty polyhedron (no point with t > 0)
        return Ok(Vec::new());
    }
    if !v.lineality.is_empty() {
        return Err(VertexError::NotPointed);
    }
    verts.sort();
    verts.dedup();
    Ok(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn r1(dim: usize, rows: &[(&[i64], i64)]) -> Vec<(RVector, Rational)> {
        rows.iter()
            .map(|(a, b)| {
                assert_eq!(a.len(), dim);
                (RVector::from_i64(a), rat(*b))
            })
            .collect()
    }

    #[test]
    fn maximize_on_halfline() {
        // max x1 over {x1 ≤ 0} in R¹
        let p = HPolyhedron::new(1, vec![], r1(1, &[(&[1], 0)]));
        match lp_solve(&RVector::from_i64(&[1]), &p, Sense::Max) {
            LpOutcome::Optimal {
                value,
                point,
                tight,
                ..
            } => {
                assert_eq!(value, rat(0));
                assert_eq!(point, RVector::from_i64(&[0]));
                assert!(tight.contains(&0));
            }
            other => panic!("expected optimal, got {:?}", other),
        }
    }

    #[test]
    fn infeasible_with_farkas() {
        // {x ≤ -1, -x ≤ 0} is empty; certificate (1,1) gives 0 ≤ -1.
        let p = HPolyhedron::new(1, vec![], r1(1, &[(&[1], -1), (&[-1], 0)]));
        match lp_solve(&RVector::zeros(1), &p, Sense::Max) {
            LpOutcome::Infeasible { farkas } => {
                assert_eq!(farkas.len(), 2);
                // nonnegative combination of rows = zero vector, rhs = -1
                let mut lhs = Rational::zero();
                let mut rhs = Rational::zero();
                for (f, (a, b)) in farkas.0.iter().zip(&p.ineq) {
                    assert!(!f.is_negative());
                    lhs += f * &a[0];
                    rhs += f * b;
                }
                assert!(lhs.is_zero());
                assert_eq!(rhs, rat(-1));
            }
            other => panic!("expected infeasible, got {:?}", other),
        }
    }

    #[test]
    fn unbounded_ray() {
        let p = HPolyhedron::new(1, vec![], r1(1, &[(&[-1], 0)]));
        match lp_solve(&RVector::from_i64(&[1]), &p, Sense::Max) {
            LpOutcome::Unbounded { ray } => {
                assert!(ray[0].is_positive());
            }
            other => panic!("expected unbounded, got {:?}", other),
        }
    }

    #[test]
    fn multiplier_segment_argmax() {
        // max λ1 over {λ ≥ 0, λ1 + λ2 = 1}
        let p = HPolyhedron::new(
            2,
            r1(2, &[(&[1, 1], 1)]),
            r1(2, &[(&[-1, 0], 0), (&[0, -1], 0)]),
        );
        match lp_solve(&RVector::from_i64(&[1, 0]), &p, Sense::Max) {
            LpOutcome::Optimal {
                value,
                point,
                tight,
                dual_ineq,
                dual_eq,
            } => {
                assert_eq!(value, rat(1));
                assert_eq!(point, RVector::from_i64(&[1, 0]));
                // λ2 ≥ 0 is the active inequality at (1,0)
                let lam2_row = p
                    .ineq
                    .iter()
                    .position(|(a, _)| a == &RVector::from_i64(&[0, -1]))
                    .unwrap();
                assert!(tight.contains(&lam2_row));
                // duals certify: Σ y·rows = objective, Σ y·rhs = value
                let mut combo = RVector::zeros(2);
                let mut val = Rational::zero();
                for (y, (a, b)) in dual_ineq.iter().zip(&p.ineq) {
                    assert!(!y.is_negative());
                    combo = combo.add(&a.scale(y));
                    val += y * b;
                }
                for (y, (a, b)) in dual_eq.iter().zip(&p.eq) {
                    combo = combo.add(&a.scale(y));
                    val += y * b;
                }
                assert_eq!(combo, RVector::from_i64(&[1, 0]));
                assert_eq!(val, rat(1));
            }
            other => panic!("expected optimal, got {:?}", other),
        }
    }

    #[test]
    fn vertices_of_multiplier_segment() {
        let p = HPolyhedron::new(
            2,
            r1(2, &[(&[1, 1], 1)]),
            r1(2, &[(&[-1, 0], 0), (&[0, -1], 0)]),
        );
        let vs = vertices(&p).unwrap();
        assert_eq!(
            vs,
            vec![RVector::from_i64(&[0, 1]), RVector::from_i64(&[1, 0])]
        );
    }

    #[test]
    fn vertices_of_unit_box() {
        let p = HPolyhedron::new(
            2,
            vec![],
            r1(
                2,
                &[(&[1, 0], 1), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 0)],
            ),
        );
        let vs = vertices(&p).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.contains(&RVector::from_i64(&[1, 1])));
        assert!(vs.contains(&RVector::from_i64(&[0, 0])));
    }

    #[test]
    fn vertices_reject_lines() {
        // {x : x2 ≤ 0} contains the x1 axis
        let p = HPolyhedron::new(2, vec![], r1(2, &[(&[0, 1], 0)]));
        assert_eq!(vertices(&p), Err(VertexError::NotPointed));
    }

    #[test]
    fn singleton_multiplier_set() {
        // {λ ≥ 0, λ1+λ3 = 0, -λ2+λ3 = 0} = {0}
        let p = HPolyhedron::new(
            3,
            r1(3, &[(&[1, 0, 1], 0), (&[0, -1, 1], 0)]),
            r1(3, &[(&[-1, 0, 0], 0), (&[0, -1, 0], 0), (&[0, 0, -1], 0)]),
        );
        assert_eq!(vertices(&p).unwrap(), vec![RVector::zeros(3)]);
    }

    #[test]
    fn canonical_min_drops_redundant_rows() {
        // x ≤ 1 listed twice plus a slacker copy x ≤ 2
        let p = HPolyhedron::new(
            1,
            vec![],
            r1(1, &[(&[1], 1), (&[1], 1), (&[1], 2), (&[-1], 0)]),
        );
        let q = HPolyhedron::new(1, vec![], r1(1, &[(&[1], 1), (&[-1], 0)]));
        assert_eq!(p.canonical_min(), q.canonical_min());
        let _ = ratio(1, 2);
    }
}
