//! Exact JSON ingestion and report emission.
//!
//! Every scalar in a problem or certificate file is a string "p/q" or an
//! integer literal; floating-point literals are rejected with the offending
//! path. Index sets are 1-based in files and reports.

use mpec_core::geom::ProblemData;
use mpec_core::rational::{parse_rational, RMatrix, RVector, Rational};
use mpec_core::stationarity::{
    AuditReport, BranchTag, CaseIiData, MStatCertificate, SharpCertificate, Verdict,
};
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug)]
pub enum ParseError {
    Json(String),
    /// A float or otherwise non-rational scalar, with its path.
    NonRationalLiteral(String),
    /// Wrong array shape, with its path.
    Shape(String),
    Missing(String),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Json(s) => write!(f, "json error: {}", s),
            ParseError::NonRationalLiteral(p) => {
                write!(
                    f,
                    "non-rational literal at {}: write \"p/q\" or an integer",
                    p
                )
            }
            ParseError::Shape(p) => write!(f, "shape error at {}", p),
            ParseError::Missing(p) => write!(f, "missing field {}", p),
        }
    }
}

impl std::error::Error for ParseError {}

fn scalar(v: &Value, path: &str) -> Result<Rational, ParseError> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| ParseError::NonRationalLiteral(path.to_string()))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(ParseError::NonRationalLiteral(path.to_string()))
            }
        }
        _ => Err(ParseError::NonRationalLiteral(path.to_string())),
    }
}

fn vector(v: &Value, path: &str, len: usize) -> Result<RVector, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::Shape(path.to_string()))?;
    if arr.len() != len {
        return Err(ParseError::Shape(format!(
            "{} (expected length {}, got {})",
            path,
            len,
            arr.len()
        )));
    }
    let mut out = Vec::with_capacity(len);
    for (i, e) in arr.iter().enumerate() {
        out.push(scalar(e, &format!("{}[{}]", path, i))?);
    }
    Ok(RVector(out))
}

fn matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<RMatrix, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::Shape(path.to_string()))?;
    if arr.len() != rows {
        return Err(ParseError::Shape(format!(
            "{} (expected {} rows, got {})",
            path,
            rows,
            arr.len()
        )));
    }
    let mut rvs = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        rvs.push(vector(row, &format!("{}[{}]", path, i), cols)?);
    }
    Ok(RMatrix::from_rows(&rvs, cols))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| ParseError::Missing(key.into()))
}

fn dim(obj: &Map<String, Value>, key: &str) -> Result<usize, ParseError> {
    get(obj, key)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| ParseError::Shape(format!("dims.{}", key)))
}

/// Optional extras carried alongside the derivative data.
#[derive(Debug, Default)]
pub struct ProblemExtras {
    pub lower_mscq: bool,
    pub upper_mscq: bool,
    pub directions: Vec<RVector>,
    pub sigma_choice: Option<Vec<RVector>>,
    pub certificate: Option<Value>,
}

pub fn parse_problem(text: &str) -> Result<(ProblemData, ProblemExtras), ParseError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| ParseError::Shape("top level must be an object".into()))?;
    let dims = get(obj, "dims")?
        .as_object()
        .ok_or_else(|| ParseError::Shape("dims".into()))?;
    let n = dim(dims, "n")?;
    let m = dim(dims, "m")?;
    let p = dim(dims, "p")?;
    let q = dim(dims, "q")?;
    let grad_f = vector(get(obj, "grad_F")?, "grad_F", n + m)?;
    let phi_val = vector(get(obj, "phi")?, "phi", m)?;
    let jac_phi = matrix(get(obj, "jac_phi")?, "jac_phi", m, n + m)?;
    let g_val = vector(get(obj, "g")?, "g", q)?;
    let jac_g = matrix(get(obj, "jac_g")?, "jac_g", q, m)?;
    let hess_arr = get(obj, "hess_g")?
        .as_array()
        .ok_or_else(|| ParseError::Shape("hess_g".into()))?;
    if hess_arr.len() != q {
        return Err(ParseError::Shape(format!(
            "hess_g (expected {} matrices, got {})",
            q,
            hess_arr.len()
        )));
    }
    let mut hess_g = Vec::with_capacity(q);
    for (i, h) in hess_arr.iter().enumerate() {
        let hm = matrix(h, &format!("hess_g[{}]", i), m, m)?;
        if !hm.is_symmetric() {
            return Err(ParseError::Shape(format!(
                "hess_g[{}] must be symmetric",
                i
            )));
        }
        hess_g.push(hm);
    }
    let g_upper_val = vector(get(obj, "G_val")?, "G_val", p)?;
    let jac_g_upper = matrix(get(obj, "jac_G")?, "jac_G", p, n + m)?;
    let mut extras = ProblemExtras::default();
    let mut assumption1 = false;
    if let Some(flags) = obj.get("flags").and_then(|f| f.as_object()) {
        assumption1 = flags
            .get("assumption1")
            .and_then(|v| v.as_bool())
            .unwrap_or(false);
        extras.lower_mscq = flags
            .get("lower_mscq")
            .and_then(|v| v.as_bool())
            .unwrap_or(false);
        extras.upper_mscq = flags
            .get("upper_mscq")
            .and_then(|v| v.as_bool())
            .unwrap_or(false);
    }
    if let Some(dirs) = obj.get("directions") {
        let arr = dirs
            .as_array()
            .ok_or_else(|| ParseError::Shape("directions".into()))?;
        for (i, d) in arr.iter().enumerate() {
            extras
                .directions
                .push(vector(d, &format!("directions[{}]", i), m)?);
        }
    }
    if let Some(sig) = obj.get("sigma_choice") {
        let arr = sig
            .as_array()
            .ok_or_else(|| ParseError::Shape("sigma_choice".into()))?;
        let mut list = Vec::new();
        for (i, s) in arr.iter().enumerate() {
            list.push(vector(s, &format!("sigma_choice[{}]", i), q)?);
        }
        extras.sigma_choice = Some(list);
    }
    extras.certificate = obj.get("certificate").cloned();
    let data = ProblemData {
        n,
        m,
        p,
        q,
        grad_f,
        phi_val,
        jac_phi,
        g_val,
        jac_g,
        hess_g,
        g_upper_val,
        jac_g_upper,
        assumption1,
    };
    Ok((data, extras))
}

fn index_set(v: &Value, path: &str, q: usize) -> Result<BTreeSet<usize>, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::Shape(path.to_string()))?;
    let mut out = BTreeSet::new();
    for (k, e) in arr.iter().enumerate() {
        let i = e
            .as_u64()
            .ok_or_else(|| ParseError::Shape(format!("{}[{}]", path, k)))? as usize;
        if i == 0 || i > q {
            return Err(ParseError::Shape(format!(
                "{}[{}]: index {} out of 1..={}",
                path, k, i, q
            )));
        }
        out.insert(i - 1);
    }
    Ok(out)
}

pub enum Certificate {
    Sharp(Box<SharpCertificate>),
    MStat(Box<MStatCertificate>),
}

pub fn parse_certificate(value: &Value, data: &ProblemData) -> Result<Certificate, ParseError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Shape("certificate must be an object".into()))?;
    let kind = get(obj, "type")?
        .as_str()
        .ok_or_else(|| ParseError::Shape("certificate.type".into()))?;
    match kind {
        "sharp" => Ok(Certificate::Sharp(Box::new(parse_sharp(obj, data)?))),
        "mstat" => Ok(Certificate::MStat(Box::new(parse_mstat(obj, data)?))),
        other => Err(ParseError::Shape(format!(
            "certificate.type must be \"sharp\" or \"mstat\", got {:?}",
            other
        ))),
    }
}

fn parse_sharp(
    obj: &Map<String, Value>,
    data: &ProblemData,
) -> Result<SharpCertificate, ParseError> {
    let (m, q, p, n) = (data.m, data.q, data.p, data.n);
    let opt_vec = |key: &str, len: usize| -> Result<Option<RVector>, ParseError> {
        match obj.get(key) {
            Some(Value::Null) | None => Ok(None),
            Some(v) => Ok(Some(vector(v, key, len)?)),
        }
    };
    let case_ii = match obj.get("case_ii") {
        Some(Value::Null) | None => None,
        Some(v) => {
            let c = v
                .as_object()
                .ok_or_else(|| ParseError::Shape("case_ii".into()))?;
            Some(CaseIiData {
                delta_x: vector(get(c, "delta_x")?, "case_ii.delta_x", n)?,
                alphas: vector(get(c, "alphas")?, "case_ii.alphas", q)?,
            })
        }
    };
    Ok(SharpCertificate {
        vbar: vector(get(obj, "vbar")?, "vbar", m)?,
        lambdabar: vector(get(obj, "lambdabar")?, "lambdabar", q)?,
        zbar: opt_vec("zbar", m)?,
        i_set: index_set(get(obj, "I")?, "I", q)?,
        i_plus: index_set(get(obj, "I_plus")?, "I_plus", q)?,
        j_set: index_set(get(obj, "J")?, "J", q)?,
        j_plus: index_set(get(obj, "J_plus")?, "J_plus", q)?,
        w: vector(get(obj, "w")?, "w", m)?,
        eta: vector(get(obj, "eta")?, "eta", q)?,
        xi: vector(get(obj, "xi")?, "xi", q)?,
        sigma: vector(get(obj, "sigma")?, "sigma", p)?,
        delta_v: vector(get(obj, "delta_v")?, "delta_v", m)?,
        s_delta_v: vector(get(obj, "s_delta_v")?, "s_delta_v", m)?,
        mu_bar: vector(get(obj, "mu_bar")?, "mu_bar", q)?,
        s_w: vector(get(obj, "s_w")?, "s_w", m)?,
        case_ii,
    })
}

fn parse_mstat(
    obj: &Map<String, Value>,
    data: &ProblemData,
) -> Result<MStatCertificate, ParseError> {
    let mut branches = BTreeMap::new();
    if let Some(b) = obj.get("branches") {
        let bo = b
            .as_object()
            .ok_or_else(|| ParseError::Shape("branches".into()))?;
        for (k, v) in bo {
            let idx: usize = k
                .parse()
                .map_err(|_| ParseError::Shape(format!("branches.{}", k)))?;
            if idx == 0 || idx > data.q {
                return Err(ParseError::Shape(format!("branches.{}: out of range", k)));
            }
            let tag = match v.as_str() {
                Some("strict") => BranchTag::StrictBranch,
                Some("xi_zero") => BranchTag::XiZero,
                Some("grad_w_zero") => BranchTag::GradWZero,
                _ => {
                    return Err(ParseError::Shape(format!(
                        "branches.{}: expected strict | xi_zero | grad_w_zero",
                        k
                    )))
                }
            };
            branches.insert(idx - 1, tag);
        }
    }
    Ok(MStatCertificate {
        lambda: vector(get(obj, "lambda")?, "lambda", data.q)?,
        w: vector(get(obj, "w")?, "w", data.m)?,
        xi: vector(get(obj, "xi")?, "xi", data.q)?,
        sigma: vector(get(obj, "sigma")?, "sigma", data.p)?,
        branches,
    })
}

// ---- emission ----

pub fn rational_json(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn vector_json(v: &RVector) -> Value {
    Value::Array(v.0.iter().map(rational_json).collect())
}

pub fn index_set_json(s: &BTreeSet<usize>) -> Value {
    Value::Array(s.iter().map(|&i| json!(i + 1)).collect())
}

pub fn sharp_certificate_json(c: &SharpCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("type".into(), json!("sharp"));
    obj.insert("vbar".into(), vector_json(&c.vbar));
    obj.insert("lambdabar".into(), vector_json(&c.lambdabar));
    if let Some(z) = &c.zbar {
        obj.insert("zbar".into(), vector_json(z));
    }
    obj.insert("I".into(), index_set_json(&c.i_set));
    obj.insert("I_plus".into(), index_set_json(&c.i_plus));
    obj.insert("J".into(), index_set_json(&c.j_set));
    obj.insert("J_plus".into(), index_set_json(&c.j_plus));
    obj.insert("w".into(), vector_json(&c.w));
    obj.insert("eta".into(), vector_json(&c.eta));
    obj.insert("xi".into(), vector_json(&c.xi));
    obj.insert("sigma".into(), vector_json(&c.sigma));
    obj.insert("delta_v".into(), vector_json(&c.delta_v));
    obj.insert("s_delta_v".into(), vector_json(&c.s_delta_v));
    obj.insert("mu_bar".into(), vector_json(&c.mu_bar));
    obj.insert("s_w".into(), vector_json(&c.s_w));
    if let Some(cii) = &c.case_ii {
        obj.insert(
            "case_ii".into(),
            json!({
                "delta_x": vector_json(&cii.delta_x),
                "alphas": vector_json(&cii.alphas),
            }),
        );
    }
    Value::Object(obj)
}

pub fn mstat_certificate_json(c: &MStatCertificate) -> Value {
    let branches: Map<String, Value> = c
        .branches
        .iter()
        .map(|(&i, tag)| {
            let t = match tag {
                BranchTag::StrictBranch => "strict",
                BranchTag::XiZero => "xi_zero",
                BranchTag::GradWZero => "grad_w_zero",
            };
            ((i + 1).to_string(), json!(t))
        })
        .collect();
    json!({
        "type": "mstat",
        "lambda": vector_json(&c.lambda),
        "w": vector_json(&c.w),
        "xi": vector_json(&c.xi),
        "sigma": vector_json(&c.sigma),
        "branches": branches,
    })
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::ConditionalPass => "conditionally-pass",
    }
}

pub fn report_json(rep: &AuditReport) -> Value {
    json!({
        "overall": verdict_str(rep.overall()),
        "conditions": rep.conditions.iter().map(|c| json!({
            "id": c.id,
            "verdict": verdict_str(c.verdict),
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}
