//! Certificates, verifiers and finite searchers for first-order optimality
//! at the candidate point.
//!
//! Two condition systems live here. The sharp system couples a critical
//! direction v̄, a directional multiplier λ̄ and a chain of index sets
//! J̄⁺(λ̄) ⊆ J⁺ ⊆ J ⊆ J̄⁺(Λ̄(v̄)) ⊆ J̄⁺(Λ̄) ⊆ I⁺ ⊆ I ⊆ Ī(v̄) with auxiliary
//! vectors (w, η, ξ, σ, δv, s_δv, μ̄, s_w); the classical M-stationary
//! system for the complementarity reformulation uses one multiplier and a
//! per-index branch disjunction. Verifiers evaluate every condition exactly
//! and report per-condition verdicts with witnesses; searchers enumerate
//! finite catalogs (face representatives, vertices, index chains, branch
//! assignments) and solve one feasibility LP per combination. Strict
//! inequalities inside search LPs are normalized to ≥ 1 / ≤ -1.

use crate::cone::{self, HCone};
use crate::geom::{
    directional, j_plus_of_multiplier, polyhedrality_probe, DirectionalData, GeomError,
    PointGeometry, PolyhedralityProbe, ProblemData,
};
use crate::linalg::{definiteness_on_kernel, solve_affine, Definiteness};
use crate::lp::{feasible_point, lp_solve, vertices, HPolyhedron, LpOutcome, Sense};
use crate::rational::{rat, RMatrix, RVector, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Full data of a sharp-condition certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpCertificate {
    pub vbar: RVector,
    pub lambdabar: RVector,
    /// z̄* with v̄* = ∇²(λ̄ᵀg)v̄ + z̄*; derivable, carried when known.
    pub zbar: Option<RVector>,
    pub i_set: BTreeSet<usize>,
    pub i_plus: BTreeSet<usize>,
    pub j_set: BTreeSet<usize>,
    pub j_plus: BTreeSet<usize>,
    pub w: RVector,
    pub eta: RVector,
    pub xi: RVector,
    pub sigma: RVector,
    pub delta_v: RVector,
    pub s_delta_v: RVector,
    pub mu_bar: RVector,
    pub s_w: RVector,
    pub case_ii: Option<CaseIiData>,
}

/// Extra data for the non-collapsed branch of the final disjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseIiData {
    pub delta_x: RVector,
    /// α with z̄* = Σ_{i∈I} α_i ∇g_i(ȳ), recorded over all q indices.
    pub alphas: RVector,
}

/// Branch taken at a biactive index of an M-stationarity certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BranchTag {
    /// ξ_i > 0 and ∇g_i(ȳ)ᵀw < 0.
    StrictBranch,
    XiZero,
    GradWZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MStatCertificate {
    pub lambda: RVector,
    pub w: RVector,
    pub xi: RVector,
    pub sigma: RVector,
    /// One tag per biactive index (g_i(ȳ) = 0, λ_i = 0).
    pub branches: BTreeMap<usize, BranchTag>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Used where an undecidable polyhedrality probe came back Unknown.
    ConditionalPass,
}

#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub id: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// Per-condition ledger; overall pass iff every condition passes.
#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub conditions: Vec<ConditionCheck>,
}

impl AuditReport {
    pub fn push(&mut self, id: &str, verdict: Verdict, detail: impl Into<String>) {
        self.conditions.push(ConditionCheck {
            id: id.to_string(),
            verdict,
            detail: detail.into(),
        });
    }

    fn check(&mut self, id: &str, ok: bool, detail: impl Into<String>) {
        self.push(id, if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    }

    pub fn overall(&self) -> Verdict {
        if self.conditions.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self
            .conditions
            .iter()
            .any(|c| c.verdict == Verdict::ConditionalPass)
        {
            Verdict::ConditionalPass
        } else {
            Verdict::Pass
        }
    }

    pub fn passes(&self) -> bool {
        self.overall() == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatError {
    AssumptionNotAsserted,
    DimensionMismatch(String),
    /// The M-stationarity multiplier is not a lower-level KKT multiplier.
    InfeasibleMultiplier,
    NotApplicable(String),
    PreconditionFailed(String),
    TooManyBranches {
        count: usize,
        cap: usize,
    },
    Geom(GeomError),
}

impl std::fmt::Display for StatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StatError::AssumptionNotAsserted => {
                write!(
                    f,
                    "the constraint-qualification assumption flag is not asserted"
                )
            }
            StatError::DimensionMismatch(s) => write!(f, "dimension mismatch: {}", s),
            StatError::InfeasibleMultiplier => {
                write!(f, "multiplier is infeasible for the lower-level KKT system")
            }
            StatError::NotApplicable(s) => write!(f, "not applicable: {}", s),
            StatError::PreconditionFailed(s) => write!(f, "precondition failed: {}", s),
            StatError::TooManyBranches { count, cap } => {
                write!(
                    f,
                    "branch enumeration over {} indices exceeds cap {}",
                    count, cap
                )
            }
            StatError::Geom(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for StatError {}

impl From<GeomError> for StatError {
    fn from(e: GeomError) -> Self {
        StatError::Geom(e)
    }
}

impl From<cone::ConeError> for StatError {
    fn from(e: cone::ConeError) -> Self {
        StatError::Geom(GeomError::Cone(e))
    }
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Verifies a sharp certificate condition by condition. `sigma_choice`
/// optionally replaces the default Σ = all extreme multipliers in the
/// zero-direction case of the final disjunction.
pub fn verify_sharp(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &SharpCertificate,
    sigma_choice: Option<&[RVector]>,
) -> Result<AuditReport, StatError> {
    if !data.assumption1 {
        return Err(StatError::AssumptionNotAsserted);
    }
    check_sharp_shapes(data, cert)?;
    let mut rep = AuditReport::default();

    // structural memberships and the index-set chain
    if !geom.critical_cone.contains(&cert.vbar) {
        rep.check("critical-direction", false, "v̄ is not in the critical cone");
        return Ok(rep);
    }
    rep.check("critical-direction", true, "v̄ lies in the critical cone");
    let dir = directional(data, geom, &cert.vbar)?;
    if !dir.dir_multipliers.contains(&cert.lambdabar) {
        rep.check(
            "multiplier",
            false,
            "λ̄ is not in the directional multiplier set",
        );
        return Ok(rep);
    }
    rep.check(
        "multiplier",
        true,
        "λ̄ lies in the directional multiplier set",
    );

    let jp_lam = j_plus_of_multiplier(&cert.lambdabar, &geom.active_lower);
    let jp_dir = &dir.j_plus_dir;
    let jp_all = &geom.j_plus_all;
    let act_v = &dir.active_at_v;
    let chain_ok = jp_lam.is_subset(&cert.j_plus)
        && cert.j_plus.is_subset(&cert.j_set)
        && cert.j_set.is_subset(jp_dir)
        && jp_dir.is_subset(jp_all)
        && jp_all.is_subset(&cert.i_plus)
        && cert.i_plus.is_subset(&cert.i_set)
        && cert.i_set.is_subset(act_v);
    rep.check(
        "chain",
        chain_ok,
        format!(
            "J̄⁺(λ̄)={} ⊆ J⁺={} ⊆ J={} ⊆ J̄⁺(Λ̄(v̄))={} ⊆ J̄⁺(Λ̄)={} ⊆ I⁺={} ⊆ I={} ⊆ Ī(v̄)={}",
            fmt_set(&jp_lam),
            fmt_set(&cert.j_plus),
            fmt_set(&cert.j_set),
            fmt_set(jp_dir),
            fmt_set(jp_all),
            fmt_set(&cert.i_plus),
            fmt_set(&cert.i_set),
            fmt_set(act_v)
        ),
    );

    // (a) x-stationarity
    let res_a = data
        .grad_f_x()
        .sub(&data.jac_phi_x().vecmat(&cert.w))
        .add(&data.jac_g_upper_x().vecmat(&cert.sigma));
    rep.check("a", res_a.is_zero(), format!("x-residual {}", res_a));

    // (b) y-stationarity with the ∇g(ȳ)ᵀξ and 2∇²(ηᵀg)(ȳ)v̄ terms
    let res_b = data
        .grad_f_y()
        .sub(&data.jac_phi_y().vecmat(&cert.w))
        .add(&data.jac_g_upper_y().vecmat(&cert.sigma))
        .sub(&data.curvature(&cert.lambdabar).matvec(&cert.w))
        .add(&data.jac_g.vecmat(&cert.xi))
        .add(
            &data
                .curvature_map(&cert.vbar)
                .matvec(&cert.eta)
                .scale(&rat(2)),
        );
    rep.check("b", res_b.is_zero(), format!("y-residual {}", res_b));

    // (c) ξ supported on I
    let c_ok = (0..data.q).all(|i| cert.i_set.contains(&i) || cert.xi[i].is_zero());
    rep.check("c", c_ok, "ξ vanishes off I");

    // (d) ξ_i ≥ 0 and ∇g_i(ȳ)ᵀw ≤ 0 on I \ I⁺
    let d_ok = cert.i_set.iter().all(|&i| {
        cert.i_plus.contains(&i)
            || (!cert.xi[i].is_negative() && !data.jac_g.row(i).dot(&cert.w).is_positive())
    });
    rep.check("d", d_ok, "sign pattern on I \\ I⁺");

    // (e) ∇g_i(ȳ)ᵀw = 0 on I⁺
    let e_ok = cert
        .i_plus
        .iter()
        .all(|&i| data.jac_g.row(i).dot(&cert.w).is_zero());
    rep.check("e", e_ok, "gradients orthogonal to w on I⁺");

    // (f) η: ∇g(ȳ)ᵀη = 0, supported on J, nonnegative on J \ J⁺
    let f_res = data.jac_g.vecmat(&cert.eta);
    let f_ok = f_res.is_zero()
        && (0..data.q).all(|i| cert.j_set.contains(&i) || cert.eta[i].is_zero())
        && cert
            .j_set
            .iter()
            .all(|&i| cert.j_plus.contains(&i) || !cert.eta[i].is_negative());
    rep.check("f", f_ok, format!("∇g(ȳ)ᵀη = {}", f_res));

    // (g) σ ≥ 0 with complementarity σ_i G_i = 0
    let g_ok = (0..data.p).all(|i| {
        !cert.sigma[i].is_negative() && (cert.sigma[i].is_zero() || data.g_upper_val[i].is_zero())
    });
    rep.check("g", g_ok, "σ ≥ 0 and σ_i G_i(x̄,ȳ) = 0");

    // (h) δv tangency: equalities on J̄⁺(Λ̄), inequalities on Ī(v̄) \ J̄⁺(Λ̄)
    let h_ok = act_v.iter().all(|&i| {
        let val = data.jac_g.row(i).dot(&cert.delta_v);
        if jp_all.contains(&i) {
            val.is_zero()
        } else {
            !val.is_positive()
        }
    });
    rep.check("h", h_ok, "δv is tangent to the critical cone at v̄");

    // (i) I recovered from δv
    let i_rec: BTreeSet<usize> = act_v
        .iter()
        .copied()
        .filter(|&i| data.jac_g.row(i).dot(&cert.delta_v).is_zero())
        .collect();
    rep.check(
        "i",
        i_rec == cert.i_set,
        format!("recovered I = {}", fmt_set(&i_rec)),
    );

    // (j) s_δv system over J̄⁺(λ̄) and J̄⁺(Λ̄(v̄))
    let sj = |i: usize| {
        data.jac_g.row(i).dot(&cert.s_delta_v)
            + data.bilinear_in_g(&cert.vbar, &cert.delta_v)[i].clone()
    };
    let j_ok = jp_lam.iter().all(|&i| sj(i).is_zero())
        && jp_dir
            .iter()
            .all(|&i| jp_lam.contains(&i) || !sj(i).is_positive());
    rep.check("j", j_ok, "s_δv system on the multiplier supports");

    // (k) J recovered from s_δv
    let j_rec: BTreeSet<usize> = jp_dir
        .iter()
        .copied()
        .filter(|&i| sj(i).is_zero())
        .collect();
    rep.check(
        "k",
        j_rec == cert.j_set,
        format!("recovered J = {}", fmt_set(&j_rec)),
    );

    // (l) μ̄: ∇g(ȳ)ᵀμ̄ = 0, supported on J, nonnegative on J \ J̄⁺(λ̄)
    let l_res = data.jac_g.vecmat(&cert.mu_bar);
    let l_ok = l_res.is_zero()
        && (0..data.q).all(|i| cert.j_set.contains(&i) || cert.mu_bar[i].is_zero())
        && cert
            .j_set
            .iter()
            .all(|&i| jp_lam.contains(&i) || !cert.mu_bar[i].is_negative());
    rep.check("l", l_ok, format!("∇g(ȳ)ᵀμ̄ = {}", l_res));

    // (m) J⁺ recovered from μ̄
    let mut jp_rec = jp_lam.clone();
    for &i in &cert.j_set {
        if !jp_lam.contains(&i) && cert.mu_bar[i].is_positive() {
            jp_rec.insert(i);
        }
    }
    rep.check(
        "m",
        jp_rec == cert.j_plus,
        format!("recovered J⁺ = {}", fmt_set(&jp_rec)),
    );

    // (n) s_w system
    let sn = |i: usize| {
        data.jac_g.row(i).dot(&cert.s_w) + data.bilinear_in_g(&cert.vbar, &cert.w)[i].clone()
    };
    let n_ok = cert.j_plus.iter().all(|&i| sn(i).is_zero())
        && cert
            .j_set
            .iter()
            .all(|&i| cert.j_plus.contains(&i) || !sn(i).is_positive());
    rep.check("n", n_ok, "s_w system on J and J⁺");

    // final disjunction
    furthermore(
        data,
        geom,
        cert,
        &dir,
        &jp_lam,
        jp_dir,
        jp_all,
        act_v,
        sigma_choice,
        &mut rep,
    )?;
    Ok(rep)
}

fn check_sharp_shapes(data: &ProblemData, cert: &SharpCertificate) -> Result<(), StatError> {
    let want = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(StatError::DimensionMismatch(what.to_string()))
        }
    };
    want(cert.vbar.len() == data.m, "vbar must have length m")?;
    want(
        cert.lambdabar.len() == data.q,
        "lambdabar must have length q",
    )?;
    if let Some(z) = &cert.zbar {
        want(z.len() == data.m, "zbar must have length m")?;
    }
    want(cert.w.len() == data.m, "w must have length m")?;
    want(cert.eta.len() == data.q, "eta must have length q")?;
    want(cert.xi.len() == data.q, "xi must have length q")?;
    want(cert.sigma.len() == data.p, "sigma must have length p")?;
    want(cert.delta_v.len() == data.m, "delta_v must have length m")?;
    want(
        cert.s_delta_v.len() == data.m,
        "s_delta_v must have length m",
    )?;
    want(cert.mu_bar.len() == data.q, "mu_bar must have length q")?;
    want(cert.s_w.len() == data.m, "s_w must have length m")?;
    if let Some(cii) = &cert.case_ii {
        want(cii.delta_x.len() == data.n, "delta_x must have length n")?;
        want(cii.alphas.len() == data.q, "alphas must have length q")?;
    }
    for s in [&cert.i_set, &cert.i_plus, &cert.j_set, &cert.j_plus] {
        want(
            s.iter().all(|&i| i < data.q),
            "index sets must reference lower-level constraints",
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn furthermore(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &SharpCertificate,
    dir: &DirectionalData,
    jp_lam: &BTreeSet<usize>,
    jp_dir: &BTreeSet<usize>,
    jp_all: &BTreeSet<usize>,
    act_v: &BTreeSet<usize>,
    sigma_choice: Option<&[RVector]>,
    rep: &mut AuditReport,
) -> Result<(), StatError> {
    let collapsed = cert.i_set == *act_v && cert.j_plus == *jp_lam && cert.j_set == *jp_dir;
    if collapsed {
        if !cert.vbar.is_zero() {
            rep.check("furthermore", true, "collapsed chain with v̄ ≠ 0 (case a)");
            return Ok(());
        }
        // case (b): v̄ = 0 needs a trivial lineality space and λ̄ ∈ Σ(0, z̄*)
        let lin_trivial = cone::lineality(&geom.critical_cone).is_empty();
        if !lin_trivial {
            rep.check(
                "furthermore",
                false,
                "v̄ = 0 with a nontrivial lineality space in the critical cone",
            );
            return Ok(());
        }
        let in_sigma = match sigma_choice {
            Some(user) => user.contains(&cert.lambdabar),
            None => geom.extreme_multipliers.contains(&cert.lambdabar),
        };
        if !in_sigma {
            rep.check("furthermore", false, "λ̄ is not in Σ(0, z̄*)");
            return Ok(());
        }
        // z̄* = Σ_{i∈I} α_i ∇g_i with α_i > 0 on I⁺ \ J̄⁺(Λ̄): when z̄* is
        // pinned by the certificate solve for α, otherwise any α of that
        // sign pattern defines a valid z̄*.
        let ok = match &cert.zbar {
            Some(z) => alpha_representation(data, cert, jp_all, z).is_some(),
            None => true,
        };
        rep.check(
            "furthermore",
            ok,
            "v̄ = 0 with L(K̄) = {0} and λ̄ ∈ Σ(0, z̄*) (case b)",
        );
        return Ok(());
    }
    // non-collapsed chain: case II
    if cert.vbar.is_zero() {
        rep.check(
            "furthermore",
            false,
            "non-collapsed index chain requires v̄ ≠ 0",
        );
        return Ok(());
    }
    let Some(cii) = &cert.case_ii else {
        rep.check(
            "furthermore",
            false,
            "non-collapsed index chain requires the δx / α block",
        );
        return Ok(());
    };
    // z̄* from α, with the sign pattern α_i > 0 on I⁺ \ J̄⁺(Λ̄), α_i ≥ 0 on
    // I \ J̄⁺(Λ̄), support in I
    let alpha_ok = (0..data.q).all(|i| {
        if !cert.i_set.contains(&i) {
            cii.alphas[i].is_zero()
        } else if cert.i_plus.contains(&i) && !jp_all.contains(&i) {
            cii.alphas[i].is_positive()
        } else if !jp_all.contains(&i) {
            !cii.alphas[i].is_negative()
        } else {
            true
        }
    });
    rep.check("II-alpha", alpha_ok, "α sign pattern for z̄*");
    let zstar = data.jac_g.vecmat(&cii.alphas);
    // (IIa) ∇F(x̄,ȳ)ᵀ(δx, v̄) = 0
    let iia = data.grad_f_x().dot(&cii.delta_x) + data.grad_f_y().dot(&cert.vbar);
    rep.check("II-a", iia.is_zero(), format!("∇Fᵀ(δx, v̄) = {}", iia));
    // (IIb) ∇φ(x̄,ȳ)(δx, v̄) + ∇²(λ̄ᵀg)v̄ + z̄* = 0
    let phi_dxv = data
        .jac_phi_x()
        .matvec(&cii.delta_x)
        .add(&data.jac_phi_y().matvec(&cert.vbar));
    let iib = phi_dxv
        .add(&data.curvature(&cert.lambdabar).matvec(&cert.vbar))
        .add(&zstar);
    rep.check("II-b", iib.is_zero(), format!("residual {}", iib));
    // (IIc) active upper-level rows
    let mut iic = true;
    for i in data.active_upper() {
        let gi = data.jac_g_upper_x().row(i).dot(&cii.delta_x)
            + data.jac_g_upper_y().row(i).dot(&cert.vbar);
        if gi.is_positive() || (!cert.sigma[i].is_zero() && !gi.is_zero()) {
            iic = false;
        }
    }
    rep.check("II-c", iic, "∇G_iᵀ(δx,v̄) ≤ 0 with σ complementarity");
    // non-polyhedrality near (v̄, -∇φ(δx,v̄))
    let vstar = phi_dxv.neg();
    match polyhedrality_probe(data, geom, &cert.vbar, &vstar) {
        Ok(PolyhedralityProbe::NotLocallyPolyhedral { witness }) => {
            rep.check(
                "furthermore",
                true,
                format!("tangent graph not locally polyhedral (witness {})", witness),
            );
        }
        Ok(PolyhedralityProbe::Unknown) => {
            rep.push(
                "furthermore",
                Verdict::ConditionalPass,
                "polyhedrality probe inconclusive: case II accepted conditionally",
            );
        }
        Ok(PolyhedralityProbe::LocallyPolyhedral) => {
            rep.check(
                "furthermore",
                false,
                "tangent graph is locally polyhedral; case II unavailable",
            );
        }
        Err(GeomError::NotTangent) => {
            rep.check("furthermore", false, "(v̄, -∇φ(δx,v̄)) is not a tangent pair");
        }
        Err(e) => return Err(e.into()),
    }
    let _ = dir;
    Ok(())
}

/// Finds α ≥ 0 on I \ J̄⁺(Λ̄) (strictly positive on I⁺ \ J̄⁺(Λ̄), free on
/// J̄⁺(Λ̄)) with Σ α_i ∇g_i = z̄*, if one exists.
fn alpha_representation(
    data: &ProblemData,
    cert: &SharpCertificate,
    jp_all: &BTreeSet<usize>,
    zstar: &RVector,
) -> Option<RVector> {
    let idx: Vec<usize> = cert.i_set.iter().copied().collect();
    let k = idx.len();
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    for r in 0..data.m {
        let mut row = RVector::zeros(k);
        for (c, &i) in idx.iter().enumerate() {
            row[c] = data.jac_g[(i, r)].clone();
        }
        eq.push((row, zstar[r].clone()));
    }
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    for (c, &i) in idx.iter().enumerate() {
        if jp_all.contains(&i) {
            continue;
        }
        let mut row = RVector::zeros(k);
        row[c] = -Rational::one();
        let bound = if cert.i_plus.contains(&i) {
            -Rational::one()
        } else {
            Rational::zero()
        };
        ineq.push((row, bound));
    }
    let point = feasible_point(&HPolyhedron::new(k, eq, ineq))?;
    let mut alpha = RVector::zeros(data.q);
    for (c, &i) in idx.iter().enumerate() {
        alpha[i] = point[c].clone();
    }
    Some(alpha)
}

/// The face-form view of an index-set certificate: the nested faces behind
/// (I, I⁺) inside K_K̄(v̄,z̄*), the nested faces behind (J, J⁺, δv, μ̄)
/// inside T_{Λ̄(v̄)}(λ̄), and the two difference cones.
#[derive(Clone, Debug)]
pub struct FaceView {
    /// K_K̄(v̄, z̄*).
    pub crit: HCone,
    pub f1_v: HCone,
    pub f2_v: HCone,
    /// F1v - F2v in index form: ∇g_i s = 0 on I⁺, ≤ 0 on I \ I⁺.
    pub diff_v: HCone,
    /// T_{Λ̄(v̄)}(λ̄).
    pub tangent_lambda: HCone,
    pub f1_l: HCone,
    pub f2_l: HCone,
    /// F1λ - F2λ in index form: ∇g(ȳ)ᵀμ = 0, μ = 0 off J, μ ≥ 0 on J \ J⁺.
    pub diff_l: HCone,
}

/// Derives the face-form objects of a certificate.
pub fn face_view(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &SharpCertificate,
) -> Result<FaceView, StatError> {
    let dir = directional(data, geom, &cert.vbar)?;
    let zbar = match &cert.zbar {
        Some(z) => z.clone(),
        None => {
            let mut alpha = RVector::zeros(data.q);
            for &i in &cert.i_plus {
                if !geom.j_plus_all.contains(&i) {
                    alpha[i] = Rational::one();
                }
            }
            data.jac_g.vecmat(&alpha)
        }
    };
    let crit = cone::critical_cone(&geom.critical_cone, &cert.vbar, &zbar)?;
    let with_eqs = |base: &HCone, idx: &BTreeSet<usize>| {
        let mut eq = base.eq.clone();
        eq.extend(idx.iter().map(|&i| data.jac_g.row(i)));
        HCone::new(base.dim, eq, base.ineq.clone())
    };
    let f1_v = with_eqs(&crit, &cert.i_plus);
    let f2_v = with_eqs(&crit, &cert.i_set);
    let diff_v = HCone::new(
        data.m,
        cert.i_plus.iter().map(|&i| data.jac_g.row(i)).collect(),
        cert.i_set
            .iter()
            .filter(|i| !cert.i_plus.contains(i))
            .map(|&i| data.jac_g.row(i))
            .collect(),
    );
    if !dir.dir_multipliers.contains(&cert.lambdabar) {
        return Err(StatError::PreconditionFailed(
            "λ̄ is not in the directional multiplier set".into(),
        ));
    }
    let tangent_lambda = cone::tangent_of_polyhedron(&dir.dir_multipliers, &cert.lambdabar)?;
    let mut f1_eq = tangent_lambda.eq.clone();
    f1_eq.push(data.bilinear_in_g(&cert.vbar, &cert.delta_v));
    let f1_l = HCone::new(data.q, f1_eq, tangent_lambda.ineq.clone());
    let f2_l = match cone::membership(&f1_l, &cert.mu_bar) {
        cone::Membership::In { tight } => cone::face_cone(&f1_l, &cone::FaceDescriptor { tight }),
        cone::Membership::Outside => {
            return Err(StatError::PreconditionFailed(
                "μ̄ is not in the face F1λ".into(),
            ))
        }
    };
    let mut dl_eq: Vec<RVector> = data.jac_g.transpose().row_vectors();
    let mut dl_ineq: Vec<RVector> = Vec::new();
    for i in 0..data.q {
        if !cert.j_set.contains(&i) {
            dl_eq.push(RVector::unit(data.q, i));
        } else if !cert.j_plus.contains(&i) {
            dl_ineq.push(RVector::unit(data.q, i).neg());
        }
    }
    let diff_l = HCone::new(data.q, dl_eq, dl_ineq);
    Ok(FaceView {
        crit,
        f1_v,
        f2_v,
        diff_v,
        tangent_lambda,
        f1_l,
        f2_l,
        diff_l,
    })
}

fn in_polar_of(k: &HCone, x: &RVector) -> bool {
    crate::cone::VCone {
        dim: k.dim,
        lineality: k.eq.clone(),
        rays: k.ineq.clone(),
    }
    .contains(x)
}

/// Checks the face-form conditions against the derived view: the two stated
/// memberships of (w, η), the three residual inclusions, the δv-face
/// identity, and agreement of the nested-face differences with the
/// index-set difference cones.
pub fn face_form_report(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &SharpCertificate,
) -> Result<AuditReport, StatError> {
    let view = face_view(data, geom, cert)?;
    let mut rep = AuditReport::default();
    rep.check("face/w", view.diff_v.contains(&cert.w), "w ∈ F1v - F2v");
    rep.check("face/eta", view.diff_l.contains(&cert.eta), "η ∈ F1λ - F2λ");
    let lhs_b = data
        .grad_f_y()
        .sub(&data.jac_phi_y().vecmat(&cert.w))
        .add(&data.jac_g_upper_y().vecmat(&cert.sigma))
        .sub(&data.curvature(&cert.lambdabar).matvec(&cert.w))
        .add(
            &data
                .curvature_map(&cert.vbar)
                .matvec(&cert.eta)
                .scale(&rat(2)),
        );
    rep.check(
        "face/b",
        in_polar_of(&view.diff_v, &lhs_b.neg()),
        "y-residual in -(F1v - F2v)°",
    );
    rep.check(
        "face/c",
        in_polar_of(&view.diff_l, &data.bilinear_in_g(&cert.vbar, &cert.w)),
        "v̄ᵀ∇²g w in (F1λ - F2λ)°",
    );
    rep.check(
        "face/d",
        in_polar_of(
            &view.tangent_lambda,
            &data.bilinear_in_g(&cert.vbar, &cert.delta_v),
        ),
        "v̄ᵀ∇²g δv in T_{Λ̄(v̄)}(λ̄)°",
    );
    let e_ok = (0..data.p).all(|i| {
        !cert.sigma[i].is_negative() && (cert.sigma[i].is_zero() || data.g_upper_val[i].is_zero())
    });
    rep.check("face/e", e_ok, "σ complementarity");
    // the nested faces reproduce the index-form difference cones
    let d1 = cone::face_descriptor_of(&view.crit, &view.f1_v);
    let d2 = cone::face_descriptor_of(&view.crit, &view.f2_v);
    let diff = cone::face_difference(&view.crit, &d1, &d2)?;
    rep.check(
        "face/diff-v",
        cone::cone_eq(&diff, &view.diff_v),
        "F1v - F2v matches the index form",
    );
    let l1 = cone::face_descriptor_of(&view.tangent_lambda, &view.f1_l);
    let l2 = cone::face_descriptor_of(&view.tangent_lambda, &view.f2_l);
    let diff_l = cone::face_difference(&view.tangent_lambda, &l1, &l2)?;
    rep.check(
        "face/diff-l",
        cone::cone_eq(&diff_l, &view.diff_l),
        "F1λ - F2λ matches the index form",
    );
    Ok(rep)
}

/// Search outcome for the sharp conditions. `NotFoundWithinCatalog` is a
/// bounded claim: it names the finite catalog that was exhausted, never
/// asserting that no certificate exists over the continuum of directions.
#[derive(Clone, Debug)]
pub enum SharpSearch {
    Found(Box<SharpCertificate>),
    NotFoundWithinCatalog { catalog: String },
}

/// Candidate critical directions: 0, the relative-interior representatives
/// of all faces of K̄, and any user-supplied directions lying in K̄.
fn direction_catalog(geom: &PointGeometry, extra: &[RVector]) -> Result<Vec<RVector>, StatError> {
    let mut cat: Vec<RVector> = vec![RVector::zeros(geom.critical_cone.dim)];
    for f in cone::faces(&geom.critical_cone)? {
        cat.push(cone::face_ri_point(&geom.critical_cone, &f));
    }
    for v in extra {
        if geom.critical_cone.contains(v) {
            cat.push(v.to_coprime_integer());
        }
    }
    cat.sort();
    cat.dedup();
    Ok(cat)
}

fn subsets_between(lo: &BTreeSet<usize>, hi: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let free: Vec<usize> = hi.difference(lo).copied().collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u32..(1u32 << free.len()) {
        let mut s = lo.clone();
        for (b, &i) in free.iter().enumerate() {
            if mask & (1 << b) != 0 {
                s.insert(i);
            }
        }
        out.push(s);
    }
    out.sort();
    out
}

/// Searches the finite catalog for a sharp certificate. Deterministic: the
/// first passing combination in catalog order is returned.
pub fn search_sharp(
    data: &ProblemData,
    geom: &PointGeometry,
    extra_directions: &[RVector],
) -> Result<SharpSearch, StatError> {
    if !data.assumption1 {
        return Err(StatError::AssumptionNotAsserted);
    }
    let catalog = direction_catalog(geom, extra_directions)?;
    for vbar in &catalog {
        let dir = directional(data, geom, vbar)?;
        let jp_dir = dir.j_plus_dir.clone();
        let jp_all = geom.j_plus_all.clone();
        let act_v = dir.active_at_v.clone();
        // multiplier candidates: the vertices of Λ̄(v̄) plus their barycenter
        let verts = vertices(&dir.dir_multipliers).expect("multiplier faces are pointed");
        let mut lambdas = verts.clone();
        if verts.len() > 1 {
            let mut bary = RVector::zeros(data.q);
            for v in &verts {
                bary = bary.add(v);
            }
            lambdas.push(bary.scale(&(rat(verts.len() as i64).recip())));
        }
        lambdas.sort();
        lambdas.dedup();
        // z̄* candidates: 0, single generators of N_K̄(v̄), their sum
        let normal = cone::normal_cone_at(&geom.critical_cone, vbar)?;
        let mut zcands: Vec<RVector> = vec![RVector::zeros(data.m)];
        zcands.extend(normal.generators_with_lineality_signs());
        zcands.push(normal.ri_point());
        zcands.sort();
        zcands.dedup();
        for lambdabar in &lambdas {
            let jp_lam = j_plus_of_multiplier(lambdabar, &geom.active_lower);
            for zbar in &zcands {
                let crit = cone::critical_cone(&geom.critical_cone, vbar, zbar)?;
                let mut dvs: Vec<RVector> = vec![RVector::zeros(data.m)];
                for f in cone::faces(&crit)? {
                    dvs.push(cone::face_ri_point(&crit, &f));
                }
                dvs.sort();
                dvs.dedup();
                for delta_v in &dvs {
                    let i_set: BTreeSet<usize> = act_v
                        .iter()
                        .copied()
                        .filter(|&i| data.jac_g.row(i).dot(delta_v).is_zero())
                        .collect();
                    if !jp_all.is_subset(&i_set) {
                        continue;
                    }
                    for i_plus in subsets_between(&jp_all, &i_set) {
                        for j_set in subsets_between(&jp_lam, &jp_dir) {
                            for j_plus in subsets_between(&jp_lam, &j_set) {
                                if let Some(cert) = try_sharp_combination(
                                    data, geom, &dir, vbar, lambdabar, zbar, delta_v, &i_set,
                                    &i_plus, &j_set, &j_plus, &jp_lam, &jp_dir, &jp_all,
                                )? {
                                    let rep = verify_sharp(data, geom, &cert, None)?;
                                    debug_assert!(
                                        rep.passes(),
                                        "searcher produced a non-verifying certificate: {:?}",
                                        rep
                                    );
                                    if rep.passes() {
                                        return Ok(SharpSearch::Found(Box::new(cert)));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SharpSearch::NotFoundWithinCatalog {
        catalog: format!(
            "v̄ over {{0}} ∪ ri-representatives of {} faces of K̄ ∪ {} user directions; \
             λ̄ over vertices and barycenter of Λ̄(v̄); z̄* over 0 and single generators of \
             N_K̄(v̄) and their sum; δv over face representatives of K_K̄(v̄,z̄*); index \
             chains exhaustive",
            cone::faces(&geom.critical_cone)?.len(),
            extra_directions.len()
        ),
    })
}

/// One joint feasibility LP in (w, η, ξ, σ, s_δv, μ̄, s_w) for a fixed
/// combination of direction, multiplier and index chain. Strict conditions
/// in the J-recovery rows and the μ̄ positivity rows are normalized to
/// ≥ 1 / ≤ -1.
#[allow(clippy::too_many_arguments)]
fn try_sharp_combination(
    data: &ProblemData,
    geom: &PointGeometry,
    dir: &DirectionalData,
    vbar: &RVector,
    lambdabar: &RVector,
    zbar: &RVector,
    delta_v: &RVector,
    i_set: &BTreeSet<usize>,
    i_plus: &BTreeSet<usize>,
    j_set: &BTreeSet<usize>,
    j_plus: &BTreeSet<usize>,
    jp_lam: &BTreeSet<usize>,
    jp_dir: &BTreeSet<usize>,
    jp_all: &BTreeSet<usize>,
) -> Result<Option<SharpCertificate>, StatError> {
    let (n, m, p, q) = (data.n, data.m, data.p, data.q);
    // variable layout: w | η | ξ | σ | s_δv | μ̄ | s_w
    let ow = 0;
    let oeta = ow + m;
    let oxi = oeta + q;
    let osig = oxi + q;
    let osdv = osig + p;
    let omu = osdv + m;
    let osw = omu + q;
    let nvars = osw + m;
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    let upper_x = data.jac_g_upper_x();
    let upper_y = data.jac_g_upper_y();
    let q_lam = data.curvature(lambdabar);
    let hv = data.curvature_map(vbar);

    // (a) ∇_xφᵀ w - ∇_xGᵀ σ = ∇_xF
    for k in 0..n {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = data.jac_phi[(i, k)].clone();
        }
        for j in 0..p {
            row[osig + j] = -upper_x[(j, k)].clone();
        }
        eq.push((row, data.grad_f[k].clone()));
    }
    // (b) ∇_yφᵀw + ∇²(λ̄ᵀg)w - ∇_yGᵀσ - ∇gᵀξ - 2H(v̄)η = ∇_yF
    for k in 0..m {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = &data.jac_phi[(i, n + k)] + &q_lam[(k, i)];
        }
        for j in 0..p {
            row[osig + j] = -upper_y[(j, k)].clone();
        }
        for i in 0..q {
            row[oxi + i] = -data.jac_g[(i, k)].clone();
            row[oeta + i] = -(&hv[(k, i)] * &rat(2));
        }
        eq.push((row, data.grad_f[n + k].clone()));
    }
    // (c) ξ = 0 off I; (d) sign rows on I \ I⁺; (e) gradient rows on I⁺
    for i in 0..q {
        if !i_set.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[oxi + i] = Rational::one();
            eq.push((row, Rational::zero()));
        }
    }
    for &i in i_set {
        if i_plus.contains(&i) {
            let mut row = RVector::zeros(nvars);
            for k in 0..m {
                row[ow + k] = data.jac_g[(i, k)].clone();
            }
            eq.push((row, Rational::zero()));
        } else {
            let mut row = RVector::zeros(nvars);
            row[oxi + i] = -Rational::one();
            ineq.push((row, Rational::zero()));
            let mut row = RVector::zeros(nvars);
            for k in 0..m {
                row[ow + k] = data.jac_g[(i, k)].clone();
            }
            ineq.push((row, Rational::zero()));
        }
    }
    // (f) ∇gᵀη = 0; η = 0 off J; η ≥ 0 on J \ J⁺
    for k in 0..m {
        let mut row = RVector::zeros(nvars);
        for i in 0..q {
            row[oeta + i] = data.jac_g[(i, k)].clone();
        }
        eq.push((row, Rational::zero()));
    }
    for i in 0..q {
        if !j_set.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[oeta + i] = Rational::one();
            eq.push((row, Rational::zero()));
        } else if !j_plus.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[oeta + i] = -Rational::one();
            ineq.push((row, Rational::zero()));
        }
    }
    // (g) σ ≥ 0, σ = 0 on inactive upper rows
    for j in 0..p {
        let mut row = RVector::zeros(nvars);
        row[osig + j] = -Rational::one();
        ineq.push((row, Rational::zero()));
        if !data.g_upper_val[j].is_zero() {
            let mut row = RVector::zeros(nvars);
            row[osig + j] = Rational::one();
            eq.push((row, Rational::zero()));
        }
    }
    // (j)+(k): s_δv rows: equalities on J, strict ≤ -1 on J̄⁺(Λ̄(v̄)) \ J
    let bil_dv = data.bilinear_in_g(vbar, delta_v);
    for &i in jp_dir {
        let mut row = RVector::zeros(nvars);
        for k in 0..m {
            row[osdv + k] = data.jac_g[(i, k)].clone();
        }
        if j_set.contains(&i) {
            eq.push((row, -bil_dv[i].clone()));
        } else {
            ineq.push((row, -bil_dv[i].clone() - Rational::one()));
        }
    }
    // (l)+(m): μ̄ rows
    for k in 0..m {
        let mut row = RVector::zeros(nvars);
        for i in 0..q {
            row[omu + i] = data.jac_g[(i, k)].clone();
        }
        eq.push((row, Rational::zero()));
    }
    for i in 0..q {
        if !j_set.contains(&i) || (j_set.contains(&i) && !j_plus.contains(&i)) {
            // μ̄ vanishes off J and on J \ J⁺
            let mut row = RVector::zeros(nvars);
            row[omu + i] = Rational::one();
            eq.push((row, Rational::zero()));
        } else if j_plus.contains(&i) && !jp_lam.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[omu + i] = -Rational::one();
            ineq.push((row, -Rational::one()));
        }
    }
    // (n): s_w rows, coupled with w through v̄ᵀ∇²g_i w
    for &i in j_set {
        let mut row = RVector::zeros(nvars);
        for k in 0..m {
            row[osw + k] = data.jac_g[(i, k)].clone();
            row[ow + k] = data.hess_g[i].matvec(vbar)[k].clone();
        }
        if j_plus.contains(&i) {
            eq.push((row, Rational::zero()));
        } else {
            ineq.push((row, Rational::zero()));
        }
    }

    let lp = HPolyhedron::new(nvars, eq, ineq);
    let Some(point) = feasible_point(&lp) else {
        return Ok(None);
    };
    let slice = |o: usize, len: usize| RVector(point.0[o..o + len].to_vec());
    let mut cert = SharpCertificate {
        vbar: vbar.clone(),
        lambdabar: lambdabar.clone(),
        zbar: Some(zbar.clone()),
        i_set: i_set.clone(),
        i_plus: i_plus.clone(),
        j_set: j_set.clone(),
        j_plus: j_plus.clone(),
        w: slice(ow, m),
        eta: slice(oeta, q),
        xi: slice(oxi, q),
        sigma: slice(osig, p),
        delta_v: delta_v.clone(),
        s_delta_v: slice(osdv, m),
        mu_bar: slice(omu, q),
        s_w: slice(osw, m),
        case_ii: None,
    };
    // final disjunction
    let collapsed = i_set == &dir.active_at_v && j_plus == jp_lam && j_set == jp_dir;
    if collapsed {
        if !vbar.is_zero() {
            return Ok(Some(cert));
        }
        if !cone::lineality(&geom.critical_cone).is_empty() {
            return Ok(None);
        }
        if !geom.extreme_multipliers.contains(lambdabar) {
            return Ok(None);
        }
        // a valid z̄* for case (b): α = 1 on I⁺ \ J̄⁺(Λ̄), 0 elsewhere on I
        let mut alpha = RVector::zeros(q);
        for &i in i_plus {
            if !jp_all.contains(&i) {
                alpha[i] = Rational::one();
            }
        }
        cert.zbar = Some(data.jac_g.vecmat(&alpha));
        return Ok(Some(cert));
    }
    if vbar.is_zero() {
        return Ok(None);
    }
    // Case II: solve for (δx, α) under the already-found σ, then probe
    // non-polyhedrality at (v̄, -∇φ(δx, v̄)).
    let Some((delta_x, alphas)) =
        case_ii_solve(data, vbar, lambdabar, i_set, i_plus, jp_all, &cert.sigma)
    else {
        return Ok(None);
    };
    let vstar = data
        .jac_phi_x()
        .matvec(&delta_x)
        .add(&data.jac_phi_y().matvec(vbar))
        .neg();
    match polyhedrality_probe(data, geom, vbar, &vstar)? {
        PolyhedralityProbe::NotLocallyPolyhedral { .. } => {
            cert.zbar = Some(data.jac_g.vecmat(&alphas));
            cert.case_ii = Some(CaseIiData { delta_x, alphas });
            Ok(Some(cert))
        }
        // Unknown yields only a conditional pass; the searcher keeps looking
        _ => Ok(None),
    }
}

/// The (δx, α) system of case II: ∇Fᵀ(δx,v̄) = 0, ∇φ(δx,v̄) + ∇²(λ̄ᵀg)v̄ +
/// Σ α_i ∇g_i = 0, complementarity against the found σ, α signs per the
/// index sets (strict rows normalized to ≥ 1).
fn case_ii_solve(
    data: &ProblemData,
    vbar: &RVector,
    lambdabar: &RVector,
    i_set: &BTreeSet<usize>,
    i_plus: &BTreeSet<usize>,
    jp_all: &BTreeSet<usize>,
    sigma: &RVector,
) -> Option<(RVector, RVector)> {
    let idx: Vec<usize> = i_set.iter().copied().collect();
    let k = idx.len();
    let nvars = data.n + k;
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    // (IIa)
    {
        let mut row = RVector::zeros(nvars);
        for j in 0..data.n {
            row[j] = data.grad_f[j].clone();
        }
        eq.push((row, -data.grad_f_y().dot(vbar)));
    }
    // (IIb)
    let rhs = data
        .jac_phi_y()
        .matvec(vbar)
        .add(&data.curvature(lambdabar).matvec(vbar))
        .neg();
    let phix = data.jac_phi_x();
    for r in 0..data.m {
        let mut row = RVector::zeros(nvars);
        for j in 0..data.n {
            row[j] = phix[(r, j)].clone();
        }
        for (c, &i) in idx.iter().enumerate() {
            row[data.n + c] = data.jac_g[(i, r)].clone();
        }
        eq.push((row, rhs[r].clone()));
    }
    // (IIc) for active upper rows, against the found σ
    let ux = data.jac_g_upper_x();
    let uy = data.jac_g_upper_y();
    for i in data.active_upper() {
        let mut row = RVector::zeros(nvars);
        for j in 0..data.n {
            row[j] = ux[(i, j)].clone();
        }
        let rhs_i = -uy.row(i).dot(vbar);
        if sigma[i].is_positive() {
            eq.push((row, rhs_i));
        } else {
            ineq.push((row, rhs_i));
        }
    }
    // α signs
    for (c, &i) in idx.iter().enumerate() {
        if jp_all.contains(&i) {
            continue;
        }
        let mut row = RVector::zeros(nvars);
        row[data.n + c] = -Rational::one();
        let bound = if i_plus.contains(&i) {
            -Rational::one()
        } else {
            Rational::zero()
        };
        ineq.push((row, bound));
    }
    let point = feasible_point(&HPolyhedron::new(nvars, eq, ineq))?;
    let delta_x = RVector(point.0[..data.n].to_vec());
    let mut alphas = RVector::zeros(data.q);
    for (c, &i) in idx.iter().enumerate() {
        alphas[i] = point[data.n + c].clone();
    }
    Some((delta_x, alphas))
}

#[derive(Clone, Debug)]
pub enum CorollaryOutcome {
    Found(Box<SharpCertificate>),
    NoneFound,
    /// Λ̄ is not a singleton.
    NotApplicable,
}

/// Whether the multiplier set is a single point.
pub fn multiplier_set_is_singleton(data: &ProblemData, geom: &PointGeometry) -> bool {
    if geom.extreme_multipliers.len() != 1 {
        return false;
    }
    // bounded iff sup Σ λ_i is attained
    matches!(
        lp_solve(
            &RVector(vec![Rational::one(); data.q]),
            &geom.multiplier_set,
            Sense::Max,
        ),
        LpOutcome::Optimal { .. }
    )
}

/// The simplified search available when Λ̄ = {λ̄} is a singleton: the index
/// chain collapses and only (v̄, I⁺, w, ξ, σ) remain.
pub fn corollary_unique_check(
    data: &ProblemData,
    geom: &PointGeometry,
    extra_directions: &[RVector],
) -> Result<CorollaryOutcome, StatError> {
    if !multiplier_set_is_singleton(data, geom) {
        return Ok(CorollaryOutcome::NotApplicable);
    }
    let lambdabar = geom.extreme_multipliers[0].clone();
    let jp_lam = j_plus_of_multiplier(&lambdabar, &geom.active_lower);
    let catalog = direction_catalog(geom, extra_directions)?;
    for vbar in &catalog {
        // the collapsed chain pins I = Ī(v̄); the final disjunction needs
        // v̄ ≠ 0 or a trivial lineality space (λ̄ ∈ Σ is automatic for a
        // singleton)
        if vbar.is_zero() && !cone::lineality(&geom.critical_cone).is_empty() {
            continue;
        }
        let dir = directional(data, geom, vbar)?;
        let act_v = dir.active_at_v.clone();
        if !jp_lam.is_subset(&act_v) {
            continue;
        }
        for i_plus in subsets_between(&jp_lam, &act_v) {
            if let Some(cert) =
                try_corollary_combination(data, geom, vbar, &lambdabar, &act_v, &i_plus, &jp_lam)?
            {
                let rep = verify_sharp(data, geom, &cert, None)?;
                debug_assert!(rep.passes(), "corollary produced a failing certificate");
                if rep.passes() {
                    return Ok(CorollaryOutcome::Found(Box::new(cert)));
                }
            }
        }
    }
    Ok(CorollaryOutcome::NoneFound)
}

fn try_corollary_combination(
    data: &ProblemData,
    geom: &PointGeometry,
    vbar: &RVector,
    lambdabar: &RVector,
    act_v: &BTreeSet<usize>,
    i_plus: &BTreeSet<usize>,
    jp_lam: &BTreeSet<usize>,
) -> Result<Option<SharpCertificate>, StatError> {
    let (n, m, p, q) = (data.n, data.m, data.p, data.q);
    // variable layout: w | ξ | σ
    let ow = 0;
    let oxi = ow + m;
    let osig = oxi + q;
    let nvars = osig + p;
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    let upper_x = data.jac_g_upper_x();
    let upper_y = data.jac_g_upper_y();
    let q_lam = data.curvature(lambdabar);
    for k in 0..n {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = data.jac_phi[(i, k)].clone();
        }
        for j in 0..p {
            row[osig + j] = -upper_x[(j, k)].clone();
        }
        eq.push((row, data.grad_f[k].clone()));
    }
    for k in 0..m {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = &data.jac_phi[(i, n + k)] + &q_lam[(k, i)];
        }
        for j in 0..p {
            row[osig + j] = -upper_y[(j, k)].clone();
        }
        for i in 0..q {
            row[oxi + i] = -data.jac_g[(i, k)].clone();
        }
        eq.push((row, data.grad_f[n + k].clone()));
    }
    for i in 0..q {
        if !act_v.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[oxi + i] = Rational::one();
            eq.push((row, Rational::zero()));
        }
    }
    for &i in act_v {
        if i_plus.contains(&i) {
            let mut row = RVector::zeros(nvars);
            for k in 0..m {
                row[ow + k] = data.jac_g[(i, k)].clone();
            }
            eq.push((row, Rational::zero()));
        } else {
            let mut row = RVector::zeros(nvars);
            row[oxi + i] = -Rational::one();
            ineq.push((row, Rational::zero()));
            let mut row = RVector::zeros(nvars);
            for k in 0..m {
                row[ow + k] = data.jac_g[(i, k)].clone();
            }
            ineq.push((row, Rational::zero()));
        }
    }
    for j in 0..p {
        let mut row = RVector::zeros(nvars);
        row[osig + j] = -Rational::one();
        ineq.push((row, Rational::zero()));
        if !data.g_upper_val[j].is_zero() {
            let mut row = RVector::zeros(nvars);
            row[osig + j] = Rational::one();
            eq.push((row, Rational::zero()));
        }
    }
    let Some(point) = feasible_point(&HPolyhedron::new(nvars, eq, ineq)) else {
        return Ok(None);
    };
    let w = RVector(point.0[ow..ow + m].to_vec());
    let xi = RVector(point.0[oxi..oxi + q].to_vec());
    let sigma = RVector(point.0[osig..osig + p].to_vec());
    // s_w from the collapsed (n)-system: the gradients on J̄⁺(λ̄) are
    // linearly independent for a singleton multiplier set
    let bil_w = data.bilinear_in_g(vbar, &w);
    let jl: Vec<usize> = jp_lam.iter().copied().collect();
    let s_w = if jl.is_empty() {
        RVector::zeros(m)
    } else {
        let a = RMatrix::from_rows(
            &jl.iter().map(|&i| data.jac_g.row(i)).collect::<Vec<_>>(),
            m,
        );
        let b = RVector(jl.iter().map(|&i| -bil_w[i].clone()).collect());
        let (sw, _) = solve_affine(&a, &b)
            .expect("gradients on the singleton support are linearly independent");
        sw
    };
    let mut alpha = RVector::zeros(q);
    for &i in i_plus {
        if !geom.j_plus_all.contains(&i) {
            alpha[i] = Rational::one();
        }
    }
    Ok(Some(SharpCertificate {
        vbar: vbar.clone(),
        lambdabar: lambdabar.clone(),
        zbar: Some(data.jac_g.vecmat(&alpha)),
        i_set: act_v.clone(),
        i_plus: i_plus.clone(),
        j_set: jp_lam.clone(),
        j_plus: jp_lam.clone(),
        w,
        eta: RVector::zeros(q),
        xi,
        sigma,
        delta_v: RVector::zeros(m),
        s_delta_v: RVector::zeros(m),
        mu_bar: RVector::zeros(q),
        s_w,
        case_ii: None,
    }))
}

/// Canonical branch tag for observed values at a biactive index.
fn canonical_tag(xi_i: &Rational, grad_w_i: &Rational) -> BranchTag {
    if xi_i.is_positive() && grad_w_i.is_negative() {
        BranchTag::StrictBranch
    } else if xi_i.is_zero() {
        BranchTag::XiZero
    } else {
        BranchTag::GradWZero
    }
}

/// Verifies an M-stationarity certificate against the complementarity
/// system, condition by condition.
pub fn verify_mstat(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &MStatCertificate,
) -> Result<AuditReport, StatError> {
    if cert.lambda.len() != data.q
        || cert.w.len() != data.m
        || cert.xi.len() != data.q
        || cert.sigma.len() != data.p
    {
        return Err(StatError::DimensionMismatch(
            "multiplier/w/xi/sigma lengths must be (q, m, q, p)".into(),
        ));
    }
    if !geom.multiplier_set.contains(&cert.lambda) {
        return Err(StatError::InfeasibleMultiplier);
    }
    let mut rep = AuditReport::default();
    let res_a = data
        .grad_f_x()
        .sub(&data.jac_phi_x().vecmat(&cert.w))
        .add(&data.jac_g_upper_x().vecmat(&cert.sigma));
    rep.check("a", res_a.is_zero(), format!("x-residual {}", res_a));
    let res_b = data
        .grad_f_y()
        .sub(&data.jac_phi_y().vecmat(&cert.w))
        .add(&data.jac_g_upper_y().vecmat(&cert.sigma))
        .sub(&data.curvature(&cert.lambda).matvec(&cert.w))
        .add(&data.jac_g.vecmat(&cert.xi));
    rep.check("b", res_b.is_zero(), format!("y-residual {}", res_b));
    // (c) ξ_i = 0 on inactive rows (λ_i = 0 there by feasibility)
    let c_ok = (0..data.q).all(|i| geom.active_lower.contains(&i) || cert.xi[i].is_zero());
    rep.check("c", c_ok, "ξ vanishes where g_i(ȳ) < 0");
    // (d) ∇g_iᵀw = 0 where λ_i > 0
    let d_ok = geom
        .active_lower
        .iter()
        .all(|&i| !cert.lambda[i].is_positive() || data.jac_g.row(i).dot(&cert.w).is_zero());
    rep.check("d", d_ok, "gradients orthogonal to w where λ_i > 0");
    // (f) biactive disjunction
    let mut f_ok = true;
    let mut tags_ok = true;
    for &i in &geom.active_lower {
        if cert.lambda[i].is_positive() {
            continue;
        }
        let gw = data.jac_g.row(i).dot(&cert.w);
        let strict = cert.xi[i].is_positive() && gw.is_negative();
        let product_zero = (cert.xi[i].clone() * &gw).is_zero();
        if !(strict || product_zero) {
            f_ok = false;
        }
        match cert.branches.get(&i) {
            Some(BranchTag::StrictBranch) => {
                if !(cert.xi[i].is_positive() && gw.is_negative()) {
                    tags_ok = false;
                }
            }
            Some(BranchTag::XiZero) => {
                if !cert.xi[i].is_zero() {
                    tags_ok = false;
                }
            }
            Some(BranchTag::GradWZero) => {
                if !gw.is_zero() {
                    tags_ok = false;
                }
            }
            None => tags_ok = false,
        }
    }
    rep.check("f", f_ok, "biactive disjunction");
    rep.check("branch-tags", tags_ok, "branch tags consistent with values");
    // (e) σ ≥ 0 with σ_i G_i = 0
    let e_ok = (0..data.p).all(|i| {
        !cert.sigma[i].is_negative() && (cert.sigma[i].is_zero() || data.g_upper_val[i].is_zero())
    });
    rep.check("e", e_ok, "σ ≥ 0 and σ_i G_i(x̄,ȳ) = 0");
    Ok(rep)
}

const BRANCH_CAP: usize = 12;

/// Enumerates M-stationarity certificates: per extreme multiplier, one
/// feasibility LP per branch assignment over the biactive indices (strict
/// branches normalized to ξ_i ≥ 1, ∇g_iᵀw ≤ -1), deduplicated on the
/// resulting certificate values.
pub fn search_mstat(
    data: &ProblemData,
    geom: &PointGeometry,
) -> Result<Vec<MStatCertificate>, StatError> {
    let mut found: Vec<MStatCertificate> = Vec::new();
    for lambda in &geom.extreme_multipliers {
        let biactive: Vec<usize> = geom
            .active_lower
            .iter()
            .copied()
            .filter(|&i| lambda[i].is_zero())
            .collect();
        if biactive.len() > BRANCH_CAP {
            return Err(StatError::TooManyBranches {
                count: biactive.len(),
                cap: BRANCH_CAP,
            });
        }
        let tags = [
            BranchTag::StrictBranch,
            BranchTag::XiZero,
            BranchTag::GradWZero,
        ];
        let total = 3usize.pow(biactive.len() as u32);
        for code in 0..total {
            let mut assignment = BTreeMap::new();
            let mut c = code;
            for &i in &biactive {
                assignment.insert(i, tags[c % 3]);
                c /= 3;
            }
            if let Some(cert) = try_mstat_assignment(data, geom, lambda, &assignment) {
                if !found.contains(&cert) {
                    found.push(cert);
                }
            }
        }
    }
    Ok(found)
}

fn try_mstat_assignment(
    data: &ProblemData,
    geom: &PointGeometry,
    lambda: &RVector,
    assignment: &BTreeMap<usize, BranchTag>,
) -> Option<MStatCertificate> {
    let (n, m, p, q) = (data.n, data.m, data.p, data.q);
    let ow = 0;
    let oxi = ow + m;
    let osig = oxi + q;
    let nvars = osig + p;
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    let upper_x = data.jac_g_upper_x();
    let upper_y = data.jac_g_upper_y();
    let q_lam = data.curvature(lambda);
    for k in 0..n {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = data.jac_phi[(i, k)].clone();
        }
        for j in 0..p {
            row[osig + j] = -upper_x[(j, k)].clone();
        }
        eq.push((row, data.grad_f[k].clone()));
    }
    for k in 0..m {
        let mut row = RVector::zeros(nvars);
        for i in 0..m {
            row[ow + i] = &data.jac_phi[(i, n + k)] + &q_lam[(k, i)];
        }
        for j in 0..p {
            row[osig + j] = -upper_y[(j, k)].clone();
        }
        for i in 0..q {
            row[oxi + i] = -data.jac_g[(i, k)].clone();
        }
        eq.push((row, data.grad_f[n + k].clone()));
    }
    for i in 0..q {
        if !geom.active_lower.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[oxi + i] = Rational::one();
            eq.push((row, Rational::zero()));
        } else if lambda[i].is_positive() {
            let mut row = RVector::zeros(nvars);
            for k in 0..m {
                row[ow + k] = data.jac_g[(i, k)].clone();
            }
            eq.push((row, Rational::zero()));
        }
    }
    for (&i, tag) in assignment {
        match tag {
            BranchTag::StrictBranch => {
                let mut row = RVector::zeros(nvars);
                row[oxi + i] = -Rational::one();
                ineq.push((row, -Rational::one()));
                let mut row = RVector::zeros(nvars);
                for k in 0..m {
                    row[ow + k] = data.jac_g[(i, k)].clone();
                }
                ineq.push((row, -Rational::one()));
            }
            BranchTag::XiZero => {
                let mut row = RVector::zeros(nvars);
                row[oxi + i] = Rational::one();
                eq.push((row, Rational::zero()));
            }
            BranchTag::GradWZero => {
                let mut row = RVector::zeros(nvars);
                for k in 0..m {
                    row[ow + k] = data.jac_g[(i, k)].clone();
                }
                eq.push((row, Rational::zero()));
            }
        }
    }
    for j in 0..p {
        let mut row = RVector::zeros(nvars);
        row[osig + j] = -Rational::one();
        ineq.push((row, Rational::zero()));
        if !data.g_upper_val[j].is_zero() {
            let mut row = RVector::zeros(nvars);
            row[osig + j] = Rational::one();
            eq.push((row, Rational::zero()));
        }
    }
    let point = feasible_point(&HPolyhedron::new(nvars, eq, ineq))?;
    let w = RVector(point.0[ow..ow + m].to_vec());
    let xi = RVector(point.0[oxi..oxi + q].to_vec());
    let sigma = RVector(point.0[osig..osig + p].to_vec());
    let mut branches = BTreeMap::new();
    for &i in assignment.keys() {
        branches.insert(i, canonical_tag(&xi[i], &data.jac_g.row(i).dot(&w)));
    }
    Some(MStatCertificate {
        lambda: lambda.clone(),
        w,
        xi,
        sigma,
        branches,
    })
}

/// For a singleton multiplier set, the sharp conditions imply classical
/// M-stationarity: this audit materializes the induced certificate and runs
/// the M-stationarity verifier on it.
pub fn sharp_vs_mstat_audit(
    data: &ProblemData,
    geom: &PointGeometry,
    cert: &SharpCertificate,
) -> Result<AuditReport, StatError> {
    if !multiplier_set_is_singleton(data, geom) {
        return Err(StatError::NotApplicable(
            "the multiplier set is not a singleton".into(),
        ));
    }
    let sharp_rep = verify_sharp(data, geom, cert, None)?;
    if !sharp_rep.passes() {
        return Err(StatError::PreconditionFailed(
            "the sharp certificate does not pass verification".into(),
        ));
    }
    let mut branches = BTreeMap::new();
    for &i in &geom.active_lower {
        if cert.lambdabar[i].is_zero() {
            branches.insert(
                i,
                canonical_tag(&cert.xi[i], &data.jac_g.row(i).dot(&cert.w)),
            );
        }
    }
    let induced = MStatCertificate {
        lambda: cert.lambdabar.clone(),
        w: cert.w.clone(),
        xi: cert.xi.clone(),
        sigma: cert.sigma.clone(),
        branches,
    };
    let mut rep = verify_mstat(data, geom, &induced)?;
    rep.push(
        "implication",
        Verdict::Pass,
        "off Ī(v̄): ξ_i = 0 where λ̄_i = 0; on I⁺: ∇g_i(ȳ)ᵀw = 0 where λ̄_i > 0; \
         biactive rows inherit the sign pattern of I \\ I⁺",
    );
    Ok(rep)
}

/// Witness of a violated sufficient condition for the upper-level
/// constraint qualification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MscqWitness {
    pub lambda: RVector,
    pub eta: RVector,
    pub u: RVector,
    pub v: RVector,
    pub w: RVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MscqVerdict {
    Satisfied,
    Violated(Box<MscqWitness>),
    Inconclusive { reason: String },
}

/// Partial sufficient check for metric subregularity of the combined system
/// at the candidate point. Exact when the η-coupling vanishes: per extreme
/// multiplier and η-ray, strict positive definiteness of the symmetrized
/// ∇_yφ + ∇²(λᵀg) on the admissible w-subspace certifies nonexistence of a
/// violating tuple. A non-definite branch is downgraded to Violated only
/// when a full witness (u, v, w, η) is assembled; otherwise Inconclusive.
pub fn mscq_sufficient_check(
    data: &ProblemData,
    geom: &PointGeometry,
    lower_mscq: bool,
    upper_mscq: bool,
) -> MscqVerdict {
    if !lower_mscq || !upper_mscq {
        return MscqVerdict::Inconclusive {
            reason: "lower- and upper-level subregularity flags must both be asserted".into(),
        };
    }
    // hypothesis: ∇_xGᵀη = 0, η ∈ N_{R^p₋}(G) ⟹ ∇_yGᵀη = 0
    let active_upper = data.active_upper();
    if data.p > 0 {
        let mut eqrows: Vec<RVector> = Vec::new();
        let ux = data.jac_g_upper_x();
        for k in 0..data.n {
            eqrows.push(ux.col(k));
        }
        for i in 0..data.p {
            if !active_upper.contains(&i) {
                eqrows.push(RVector::unit(data.p, i));
            }
        }
        let ineqrows: Vec<RVector> = active_upper
            .iter()
            .map(|&i| RVector::unit(data.p, i).neg())
            .collect();
        let eta_cone = HCone::new(data.p, eqrows, ineqrows);
        let gens = cone::h_to_v(&eta_cone);
        let uy = data.jac_g_upper_y();
        for g in gens.generators_with_lineality_signs() {
            if !uy.vecmat(&g).is_zero() {
                return MscqVerdict::Inconclusive {
                    reason: "the x-gradient kernel condition on the upper level fails".into(),
                };
            }
        }
    }
    let mut inconclusive: Option<String> = None;
    for lambda in &geom.extreme_multipliers {
        // η branches: 0 and each extreme ray of N_{R^p₋}(G(x̄,ȳ))
        let mut etas: Vec<Option<usize>> = vec![None];
        etas.extend(active_upper.iter().copied().map(Some));
        for eta_idx in etas {
            match mscq_branch(data, geom, lambda, eta_idx) {
                BranchVerdict::Certified => {}
                BranchVerdict::Violated(w) => return MscqVerdict::Violated(w),
                BranchVerdict::Inconclusive(r) => {
                    inconclusive.get_or_insert(r);
                }
            }
        }
    }
    match inconclusive {
        None => MscqVerdict::Satisfied,
        Some(reason) => MscqVerdict::Inconclusive { reason },
    }
}

enum BranchVerdict {
    Certified,
    Violated(Box<MscqWitness>),
    Inconclusive(String),
}

fn mscq_branch(
    data: &ProblemData,
    geom: &PointGeometry,
    lambda: &RVector,
    eta_idx: Option<usize>,
) -> BranchVerdict {
    let i_plus = j_plus_of_multiplier(lambda, &geom.active_lower);
    let eta_dir = eta_idx.map(|i| RVector::unit(data.p, i));
    if let Some(ref e) = eta_dir {
        // coupling term ηᵀ∇_yG w present and nonvanishing: not algorithmic
        if !data.jac_g_upper_y().vecmat(e).is_zero() {
            return BranchVerdict::Inconclusive(format!(
                "η-coupled branch (active upper row {}) has a nonvanishing y-gradient",
                eta_idx.unwrap() + 1
            ));
        }
    }
    // admissible subspace in (w, s): ∇g_i(ȳ)ᵀw = 0 on I⁺(λ),
    // ∇_xφᵀw = s ∇_xGᵀη̂ (s absent when η̂ = 0)
    let extra = usize::from(eta_dir.is_some());
    let mut rows: Vec<RVector> = Vec::new();
    for &i in &i_plus {
        let mut row = data.jac_g.row(i);
        for _ in 0..extra {
            row = row.concat(&RVector::zeros(1));
        }
        rows.push(row);
    }
    let phix = data.jac_phi_x();
    for k in 0..data.n {
        let mut row = phix.col(k);
        if let Some(ref e) = eta_dir {
            let rhs = data.jac_g_upper_x().vecmat(e);
            row = row.concat(&RVector(vec![-rhs[k].clone()]));
        }
        rows.push(row);
    }
    let ker = crate::linalg::kernel_basis(&RMatrix::from_rows(&rows, data.m + extra));
    let w_span = crate::linalg::span_basis(
        &ker.iter()
            .map(|k| RVector(k.0[..data.m].to_vec()))
            .collect::<Vec<_>>(),
        data.m,
    );
    if w_span.is_empty() {
        return BranchVerdict::Certified;
    }
    let q_form = data.jac_phi_y().add(&data.curvature(lambda)).symmetrize();
    // restrict to span(w_span): definiteness via the orthogonality rows
    let complement_rows = orthogonality_rows(&w_span, data.m);
    let verdict = definiteness_on_kernel(&q_form, &complement_rows).expect("square quadratic form");
    let w0 = match verdict {
        Definiteness::PositiveDefinite => return BranchVerdict::Certified,
        Definiteness::PositiveSemidefinite { null } => null,
        Definiteness::Indefinite { witness } => witness,
    };
    // quadratic form admits w ≠ 0 with wᵀQw ≤ 0; try to assemble the (u, v)
    // part of a witness over the direction catalog
    match assemble_uv_witness(data, geom, lambda) {
        Some((u, v)) => BranchVerdict::Violated(Box::new(MscqWitness {
            lambda: lambda.clone(),
            eta: eta_dir.unwrap_or_else(|| RVector::zeros(data.p)),
            u,
            v,
            w: w0,
        })),
        None => BranchVerdict::Inconclusive(
            "quadratic form not positive definite on the admissible subspace and no \
             catalog witness completes the tuple"
                .into(),
        ),
    }
}

/// Rows whose kernel is exactly span(basis): a basis of the orthogonal
/// complement.
fn orthogonality_rows(basis: &[RVector], dim: usize) -> RMatrix {
    let m = RMatrix::from_rows(basis, dim);
    let complement = crate::linalg::kernel_basis(&m);
    RMatrix::from_rows(&complement, dim)
}

/// Looks for (u, v) ≠ 0 with λ ∈ Λ̄(v), ∇G(x̄,ȳ)(u,v) ∈ T_{R^p₋}(G) and
/// (v, -∇φ(x̄,ȳ)(u,v)) tangent to gph N̂_Γ, over the face catalog of K̄.
fn assemble_uv_witness(
    data: &ProblemData,
    geom: &PointGeometry,
    lambda: &RVector,
) -> Option<(RVector, RVector)> {
    let mut candidates: Vec<RVector> = vec![RVector::zeros(data.m)];
    if let Ok(fs) = cone::faces(&geom.critical_cone) {
        for f in fs {
            candidates.push(cone::face_ri_point(&geom.critical_cone, &f));
        }
    }
    candidates.sort();
    candidates.dedup();
    for v in &candidates {
        let Ok(dir) = directional(data, geom, v) else {
            continue;
        };
        if !dir.dir_multipliers.contains(lambda) {
            continue;
        }
        if v.is_zero() {
            // need u ≠ 0: try both signs of each coordinate normalization
            for j in 0..data.n {
                for sign in [Rational::one(), -Rational::one()] {
                    if let Some(u) = solve_u_given_v(data, geom, &dir, v, Some((j, sign.clone()))) {
                        return Some((u, v.clone()));
                    }
                }
            }
        } else if let Some(u) = solve_u_given_v(data, geom, &dir, v, None) {
            return Some((u, v.clone()));
        }
    }
    None
}

/// Feasibility in (u, λ', η') for a fixed candidate v: the tangent system
/// -∇_xφ u - ∇_yφ v = H(v)λ' + Σ η'_i ∇g_i with λ' ∈ Λ̄(v), plus the active
/// upper-level rows ∇G_i (u,v) ≤ 0, plus an optional normalization
/// u_j = ±1.
fn solve_u_given_v(
    data: &ProblemData,
    geom: &PointGeometry,
    dir: &DirectionalData,
    v: &RVector,
    normalize: Option<(usize, Rational)>,
) -> Option<RVector> {
    let act: Vec<usize> = dir.active_at_v.iter().copied().collect();
    let nvars = data.n + data.q + act.len();
    let hv = data.curvature_map(v);
    let phix = data.jac_phi_x();
    let rhs = data.jac_phi_y().matvec(v).neg();
    let mut eq: Vec<(RVector, Rational)> = Vec::new();
    let mut ineq: Vec<(RVector, Rational)> = Vec::new();
    for r in 0..data.m {
        let mut row = RVector::zeros(nvars);
        for j in 0..data.n {
            row[j] = phix[(r, j)].clone();
        }
        for i in 0..data.q {
            row[data.n + i] = hv[(r, i)].clone();
        }
        for (c, &i) in act.iter().enumerate() {
            row[data.n + data.q + c] = data.jac_g[(i, r)].clone();
        }
        eq.push((row, rhs[r].clone()));
    }
    for (a, b) in &dir.dir_multipliers.eq {
        let mut row = RVector::zeros(nvars);
        for i in 0..data.q {
            row[data.n + i] = a[i].clone();
        }
        eq.push((row, b.clone()));
    }
    for (a, b) in &dir.dir_multipliers.ineq {
        let mut row = RVector::zeros(nvars);
        for i in 0..data.q {
            row[data.n + i] = a[i].clone();
        }
        ineq.push((row, b.clone()));
    }
    for (c, &i) in act.iter().enumerate() {
        if !geom.j_plus_all.contains(&i) {
            let mut row = RVector::zeros(nvars);
            row[data.n + data.q + c] = -Rational::one();
            ineq.push((row, Rational::zero()));
        }
    }
    let ux = data.jac_g_upper_x();
    let uy = data.jac_g_upper_y();
    for i in data.active_upper() {
        let mut row = RVector::zeros(nvars);
        for j in 0..data.n {
            row[j] = ux[(i, j)].clone();
        }
        ineq.push((row, -uy.row(i).dot(v)));
    }
    if let Some((j, sign)) = normalize {
        let mut row = RVector::zeros(nvars);
        row[j] = Rational::one();
        eq.push((row, sign));
    }
    let point = feasible_point(&HPolyhedron::new(nvars, eq, ineq))?;
    Some(RVector(point.0[..data.n].to_vec()))
}

// Tests for this module live in crates/core/tests/stationarity.rs; the two
// worked examples get exercised end to end there and in the CLI acceptance
// suite.
