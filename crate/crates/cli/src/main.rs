//! Command-line front end: problem ingestion, command dispatch, report
//! emission.
//!
//! Exit codes: 0 = pass/found, 1 = fail/none, 2 = inconclusive/unknown,
//! 3 = usage or input error. Reports go to standard output (JSON with
//! `--json`), diagnostics to standard error.

mod io;

use io::{
    mstat_certificate_json, parse_certificate, parse_problem, report_json, sharp_certificate_json,
    vector_json, Certificate,
};
use mpec_core::cone;
use mpec_core::geom::{
    analyze_point, check_2_nondegenerate, decompose_tangent_pair, directional,
    index_form_2_nondegenerate, polyhedrality_probe, tangent_gph_member, PointGeometry,
    PolyhedralityProbe, ProblemData, Tangency, TwoNondegeneracy,
};
use mpec_core::lp::vertices;
use mpec_core::rational::{parse_rational, RVector};
use mpec_core::stationarity::{
    corollary_unique_check, mscq_sufficient_check, search_mstat, search_sharp, verify_mstat,
    verify_sharp, CorollaryOutcome, MscqVerdict, SharpSearch, Verdict,
};
use serde_json::{json, Value};
use std::process::ExitCode;

const USAGE: &str = "\
usage: mpec <command> <problem.json> [options] [--json]

commands:
  analyze <problem>                      point geometry: active set, critical
                                         cone (both representations), multiplier
                                         polytope, extreme multipliers, supports
  directional <problem> --v V           directional multiplier face, active
                                         indices, 2-nondegeneracy verdict
  tangent <problem> --v V --vstar W     tangent-pair membership and, when
                                         2-nondegenerate, the unique decomposition
  verify-sharp <problem> --cert FILE    audit a sharp certificate
  search-sharp <problem> [--direction V]
                                         search the finite catalog for one
  verify-mstat <problem> --cert FILE    audit an M-stationarity certificate
  search-mstat <problem>                enumerate M-stationarity certificates
  corollary-unique <problem> [--direction V]
                                         singleton-multiplier search
  mscq-check <problem>                  partial sufficient subregularity check
  probe-polyhedral <problem> --v V --vstar W
                                         local polyhedrality semi-decision

vectors are comma-separated exact rationals, e.g. --v 1,1,0 or --v 1/2,-3,0
exit codes: 0 pass/found, 1 fail/none, 2 inconclusive/unknown, 3 usage/input
";

/// Prints a line to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(3)
        }
    }
}

struct Options {
    json: bool,
    v: Option<RVector>,
    vstar: Option<RVector>,
    cert: Option<String>,
    directions: Vec<RVector>,
}

fn parse_vector_arg(s: &str) -> Result<RVector, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.push(parse_rational(part).ok_or_else(|| {
            format!(
                "cannot parse {:?} as an exact rational (use p/q or integer)",
                part
            )
        })?);
    }
    Ok(RVector(out))
}

fn run(args: &[String]) -> Result<u8, String> {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        say!("{}", USAGE.trim_end());
        return Ok(if args.is_empty() { 3 } else { 0 });
    }
    let command = args[0].as_str();
    let mut path: Option<String> = None;
    let mut opts = Options {
        json: false,
        v: None,
        vstar: None,
        cert: None,
        directions: Vec::new(),
    };
    let mut it = args[1..].iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--json" => opts.json = true,
            "--v" => {
                let val = it.next().ok_or("--v needs a value")?;
                opts.v = Some(parse_vector_arg(val)?);
            }
            "--vstar" => {
                let val = it.next().ok_or("--vstar needs a value")?;
                opts.vstar = Some(parse_vector_arg(val)?);
            }
            "--cert" => {
                let val = it.next().ok_or("--cert needs a file path")?;
                opts.cert = Some(val.clone());
            }
            "--direction" => {
                let val = it.next().ok_or("--direction needs a value")?;
                opts.directions.push(parse_vector_arg(val)?);
            }
            other if !other.starts_with('-') && path.is_none() => {
                path = Some(other.to_string());
            }
            other => return Err(format!("unrecognized argument {:?}", other)),
        }
    }
    let path = path.ok_or("missing problem file")?;
    let text =
        std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let (data, extras) = parse_problem(&text).map_err(|e| e.to_string())?;
    let geom = analyze_point(&data).map_err(|e| e.to_string())?;
    let mut user_dirs = extras.directions.clone();
    user_dirs.extend(opts.directions.iter().cloned());

    match command {
        "analyze" => cmd_analyze(&geom, &opts),
        "directional" => {
            let v = opts.v.clone().ok_or("directional requires --v")?;
            cmd_directional(&data, &geom, &v, &opts)
        }
        "tangent" => {
            let v = opts.v.clone().ok_or("tangent requires --v")?;
            let vstar = opts.vstar.clone().ok_or("tangent requires --vstar")?;
            cmd_tangent(&data, &geom, &v, &vstar, &opts)
        }
        "verify-sharp" => {
            let cert = load_certificate(&data, &extras, &opts)?;
            let Certificate::Sharp(c) = cert else {
                return Err("verify-sharp expects a certificate of type \"sharp\"".into());
            };
            let rep = verify_sharp(&data, &geom, &c, extras.sigma_choice.as_deref())
                .map_err(|e| e.to_string())?;
            let code = match rep.overall() {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::ConditionalPass => 2,
            };
            emit_report(
                "verify-sharp",
                &rep,
                Some(sharp_certificate_json(&c)),
                code,
                &opts,
            );
            Ok(code)
        }
        "search-sharp" => {
            match search_sharp(&data, &geom, &user_dirs).map_err(|e| e.to_string())? {
                SharpSearch::Found(c) => {
                    let rep = verify_sharp(&data, &geom, &c, extras.sigma_choice.as_deref())
                        .map_err(|e| e.to_string())?;
                    emit_report(
                        "search-sharp",
                        &rep,
                        Some(sharp_certificate_json(&c)),
                        0,
                        &opts,
                    );
                    Ok(0)
                }
                SharpSearch::NotFoundWithinCatalog { catalog } => {
                    if opts.json {
                        print_json(&json!({
                            "command": "search-sharp",
                            "outcome": "not-found-within-catalog",
                            "catalog": catalog,
                            "exit_code": 1,
                        }));
                    } else {
                        say!("no sharp certificate within the catalog");
                        say!("catalog: {}", catalog);
                    }
                    Ok(1)
                }
            }
        }
        "verify-mstat" => {
            let cert = load_certificate(&data, &extras, &opts)?;
            let Certificate::MStat(c) = cert else {
                return Err("verify-mstat expects a certificate of type \"mstat\"".into());
            };
            let rep = verify_mstat(&data, &geom, &c).map_err(|e| e.to_string())?;
            let code = if rep.passes() { 0 } else { 1 };
            emit_report(
                "verify-mstat",
                &rep,
                Some(mstat_certificate_json(&c)),
                code,
                &opts,
            );
            Ok(code)
        }
        "search-mstat" => {
            let certs = search_mstat(&data, &geom).map_err(|e| e.to_string())?;
            let code = if certs.is_empty() { 1 } else { 0 };
            if opts.json {
                print_json(&json!({
                    "command": "search-mstat",
                    "outcome": if certs.is_empty() { "none" } else { "found" },
                    "certificates": certs.iter().map(mstat_certificate_json).collect::<Vec<_>>(),
                    "exit_code": code,
                }));
            } else if certs.is_empty() {
                say!("no M-stationarity certificate exists at this point");
            } else {
                say!("{} M-stationarity certificate class(es):", certs.len());
                for (k, c) in certs.iter().enumerate() {
                    say!(
                        "  [{}] lambda = {}  w = {}  xi = {}  sigma = {}",
                        k + 1,
                        c.lambda,
                        c.w,
                        c.xi,
                        c.sigma
                    );
                }
            }
            Ok(code)
        }
        "corollary-unique" => {
            match corollary_unique_check(&data, &geom, &user_dirs).map_err(|e| e.to_string())? {
                CorollaryOutcome::Found(c) => {
                    let rep = verify_sharp(&data, &geom, &c, extras.sigma_choice.as_deref())
                        .map_err(|e| e.to_string())?;
                    emit_report(
                        "corollary-unique",
                        &rep,
                        Some(sharp_certificate_json(&c)),
                        0,
                        &opts,
                    );
                    Ok(0)
                }
                CorollaryOutcome::NoneFound => {
                    if opts.json {
                        print_json(&json!({
                            "command": "corollary-unique",
                            "outcome": "none",
                            "exit_code": 1,
                        }));
                    } else {
                        say!("no certificate: the singleton-multiplier conditions fail");
                    }
                    Ok(1)
                }
                CorollaryOutcome::NotApplicable => {
                    if opts.json {
                        print_json(&json!({
                            "command": "corollary-unique",
                            "outcome": "not-applicable",
                            "exit_code": 2,
                        }));
                    } else {
                        say!("not applicable: the multiplier set is not a singleton");
                    }
                    Ok(2)
                }
            }
        }
        "mscq-check" => {
            let verdict = mscq_sufficient_check(&data, &geom, extras.lower_mscq, extras.upper_mscq);
            let (code, outcome, detail) = match &verdict {
                MscqVerdict::Satisfied => (0u8, "satisfied", Value::Null),
                MscqVerdict::Violated(w) => (
                    1,
                    "violated",
                    json!({
                        "lambda": vector_json(&w.lambda),
                        "eta": vector_json(&w.eta),
                        "u": vector_json(&w.u),
                        "v": vector_json(&w.v),
                        "w": vector_json(&w.w),
                    }),
                ),
                MscqVerdict::Inconclusive { reason } => (2, "inconclusive", json!(reason)),
            };
            if opts.json {
                print_json(&json!({
                    "command": "mscq-check",
                    "outcome": outcome,
                    "detail": detail,
                    "exit_code": code,
                }));
            } else {
                match &verdict {
                    MscqVerdict::Satisfied => {
                        say!("subregularity sufficient condition: satisfied")
                    }
                    MscqVerdict::Violated(w) => {
                        say!("subregularity sufficient condition: violated");
                        say!(
                            "  witness: lambda = {} eta = {} u = {} v = {} w = {}",
                            w.lambda,
                            w.eta,
                            w.u,
                            w.v,
                            w.w
                        );
                    }
                    MscqVerdict::Inconclusive { reason } => {
                        say!("subregularity sufficient condition: inconclusive");
                        say!("  reason: {}", reason);
                    }
                }
            }
            Ok(code)
        }
        "probe-polyhedral" => {
            let v = opts.v.clone().ok_or("probe-polyhedral requires --v")?;
            let vstar = opts
                .vstar
                .clone()
                .ok_or("probe-polyhedral requires --vstar")?;
            let probe = polyhedrality_probe(&data, &geom, &v, &vstar).map_err(|e| e.to_string())?;
            let (code, outcome, witness) = match &probe {
                PolyhedralityProbe::LocallyPolyhedral => (0u8, "locally-polyhedral", Value::Null),
                PolyhedralityProbe::NotLocallyPolyhedral { witness } => {
                    (1, "not-locally-polyhedral", vector_json(witness))
                }
                PolyhedralityProbe::Unknown => (2, "unknown", Value::Null),
            };
            if opts.json {
                print_json(&json!({
                    "command": "probe-polyhedral",
                    "outcome": outcome,
                    "witness": witness,
                    "exit_code": code,
                }));
            } else {
                say!("polyhedrality probe: {}", outcome);
                if let PolyhedralityProbe::NotLocallyPolyhedral { witness } = &probe {
                    say!("  witness direction: {}", witness);
                }
            }
            Ok(code)
        }
        other => Err(format!("unknown command {:?}\n{}", other, USAGE)),
    }
}

fn load_certificate(
    data: &ProblemData,
    extras: &io::ProblemExtras,
    opts: &Options,
) -> Result<Certificate, String> {
    let value: Value = match &opts.cert {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {}", path, e))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {}", path, e))?
        }
        None => extras
            .certificate
            .clone()
            .ok_or("no certificate: pass --cert FILE or embed a \"certificate\" block")?,
    };
    parse_certificate(&value, data).map_err(|e| e.to_string())
}

fn print_json(v: &Value) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit_report(
    command: &str,
    rep: &mpec_core::stationarity::AuditReport,
    certificate: Option<Value>,
    code: u8,
    opts: &Options,
) {
    if opts.json {
        let mut obj = report_json(rep);
        if let Value::Object(map) = &mut obj {
            map.insert("command".into(), json!(command));
            map.insert("exit_code".into(), json!(code));
            if let Some(c) = certificate {
                map.insert("certificate".into(), c);
            }
        }
        print_json(&obj);
    } else {
        say!("{}: {}", command, io::verdict_str(rep.overall()));
        for c in &rep.conditions {
            say!(
                "  ({}) {}  [{}]",
                c.id,
                io::verdict_str(c.verdict),
                c.detail
            );
        }
        if let Some(cv) = certificate {
            say!("certificate: {}", cv);
        }
    }
}

fn hcone_json(k: &cone::HCone) -> Value {
    let v = cone::h_to_v(k);
    json!({
        "dim": k.dim,
        "eq_rows": k.eq.iter().map(vector_json).collect::<Vec<_>>(),
        "ineq_rows": k.ineq.iter().map(vector_json).collect::<Vec<_>>(),
        "lineality_basis": v.lineality.iter().map(vector_json).collect::<Vec<_>>(),
        "rays": v.rays.iter().map(vector_json).collect::<Vec<_>>(),
    })
}

fn cmd_analyze(geom: &PointGeometry, opts: &Options) -> Result<u8, String> {
    let kbar = geom.critical_cone.minimal_form();
    let lbar = geom.multiplier_set.canonical_min();
    if opts.json {
        print_json(&json!({
            "command": "analyze",
            "active_lower": geom.active_lower.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "critical_cone": hcone_json(&kbar),
            "multiplier_set": {
                "dim": lbar.dim,
                "eq": lbar.eq.iter().map(|(a, b)| json!({
                    "coeffs": vector_json(a), "rhs": b.to_string()
                })).collect::<Vec<_>>(),
                "ineq": lbar.ineq.iter().map(|(a, b)| json!({
                    "coeffs": vector_json(a), "rhs": b.to_string()
                })).collect::<Vec<_>>(),
            },
            "extreme_multipliers": geom.extreme_multipliers.iter().map(vector_json)
                .collect::<Vec<_>>(),
            "j_plus_all": geom.j_plus_all.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "exit_code": 0,
        }));
    } else {
        say!(
            "active lower-level constraints: {:?}",
            geom.active_lower.iter().map(|i| i + 1).collect::<Vec<_>>()
        );
        say!("critical cone (H-form, canonical):");
        for r in &kbar.eq {
            say!("  {} . v = 0", r);
        }
        for r in &kbar.ineq {
            say!("  {} . v <= 0", r);
        }
        let v = cone::h_to_v(&kbar);
        say!("critical cone (V-form):");
        say!("  lineality basis: {:?}", v.lineality);
        say!("  rays: {:?}", v.rays);
        say!("multiplier set (canonical rows):");
        for (a, b) in &lbar.eq {
            say!("  {} . lambda = {}", a, b);
        }
        for (a, b) in &lbar.ineq {
            say!("  {} . lambda <= {}", a, b);
        }
        say!("extreme multipliers: {:?}", geom.extreme_multipliers);
        say!(
            "support union of multipliers: {:?}",
            geom.j_plus_all.iter().map(|i| i + 1).collect::<Vec<_>>()
        );
    }
    Ok(0)
}

fn cmd_directional(
    data: &ProblemData,
    geom: &PointGeometry,
    v: &RVector,
    opts: &Options,
) -> Result<u8, String> {
    let dir = match directional(data, geom, v) {
        Ok(d) => d,
        Err(e) => {
            if opts.json {
                print_json(&json!({
                    "command": "directional",
                    "outcome": "error",
                    "detail": e.to_string(),
                    "exit_code": 1,
                }));
            } else {
                say!("directional: {}", e);
            }
            return Ok(1);
        }
    };
    let nd = check_2_nondegenerate(data, geom, v).map_err(|e| e.to_string())?;
    let (jhat, index_verdict) =
        index_form_2_nondegenerate(data, geom, v).map_err(|e| e.to_string())?;
    let verts = vertices(&dir.dir_multipliers).map_err(|e| e.to_string())?;
    let face = dir.dir_multipliers.canonical_min();
    if opts.json {
        let (ndv, witness) = match &nd {
            TwoNondegeneracy::Yes => ("yes", Value::Null),
            TwoNondegeneracy::No { witness } => ("no", vector_json(witness)),
        };
        print_json(&json!({
            "command": "directional",
            "active_at_v": dir.active_at_v.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "dir_multipliers": {
                "eq": face.eq.iter().map(|(a, b)| json!({
                    "coeffs": vector_json(a), "rhs": b.to_string()
                })).collect::<Vec<_>>(),
                "ineq": face.ineq.iter().map(|(a, b)| json!({
                    "coeffs": vector_json(a), "rhs": b.to_string()
                })).collect::<Vec<_>>(),
                "vertices": verts.iter().map(vector_json).collect::<Vec<_>>(),
            },
            "j_plus_dir": dir.j_plus_dir.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "quad_objective": vector_json(&dir.quad_objective),
            "two_nondegenerate": ndv,
            "witness": witness,
            "index_form": {
                "j_hat": jhat.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "two_nondegenerate": index_verdict,
            },
            "exit_code": 0,
        }));
    } else {
        say!(
            "active indices along v: {:?}",
            dir.active_at_v.iter().map(|i| i + 1).collect::<Vec<_>>()
        );
        say!("directional multiplier face vertices: {:?}", verts);
        say!(
            "support union of the face: {:?}",
            dir.j_plus_dir.iter().map(|i| i + 1).collect::<Vec<_>>()
        );
        match &nd {
            TwoNondegeneracy::Yes => say!("2-nondegenerate in this direction: yes"),
            TwoNondegeneracy::No { witness } => {
                say!(
                    "2-nondegenerate in this direction: no (witness {})",
                    witness
                )
            }
        }
        say!(
            "index form: J-hat = {:?}, verdict agrees = {}",
            jhat.iter().map(|i| i + 1).collect::<Vec<_>>(),
            index_verdict == matches!(nd, TwoNondegeneracy::Yes)
        );
    }
    Ok(0)
}

fn cmd_tangent(
    data: &ProblemData,
    geom: &PointGeometry,
    v: &RVector,
    vstar: &RVector,
    opts: &Options,
) -> Result<u8, String> {
    match tangent_gph_member(data, geom, v, vstar) {
        Tangency::Yes { lambda, zstar } => {
            let decomposition = match check_2_nondegenerate(data, geom, v) {
                Ok(TwoNondegeneracy::Yes) => {
                    let (l, z) =
                        decompose_tangent_pair(data, geom, v, vstar).map_err(|e| e.to_string())?;
                    Some((l, z))
                }
                _ => None,
            };
            if opts.json {
                print_json(&json!({
                    "command": "tangent",
                    "outcome": "member",
                    "lambda": vector_json(&lambda),
                    "zstar": vector_json(&zstar),
                    "unique_decomposition": decomposition.as_ref().map(|(l, z)| json!({
                        "lambdabar": vector_json(l),
                        "zbar": vector_json(z),
                    })),
                    "exit_code": 0,
                }));
            } else {
                say!("tangent pair: yes");
                say!("  witness lambda = {} zstar = {}", lambda, zstar);
                if let Some((l, z)) = decomposition {
                    say!("  unique decomposition: lambdabar = {} zbar = {}", l, z);
                }
            }
            Ok(0)
        }
        Tangency::No { farkas } => {
            if opts.json {
                print_json(&json!({
                    "command": "tangent",
                    "outcome": "not-member",
                    "farkas": farkas.as_ref().map(vector_json),
                    "exit_code": 1,
                }));
            } else {
                say!("tangent pair: no");
                if let Some(f) = farkas {
                    say!("  infeasibility certificate: {}", f);
                }
            }
            Ok(1)
        }
    }
}
