use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{
    AmLogArgs, CliError, Command, Config, CongruenceArgs, Document, FglArgs, Method, PfArgs, ScanArgs,
    WittArgs, WittOp,
};
use crate::artinmazur::{self, builtin_family, closed_form_logarithm, FamilyId, PARAM};
use crate::error::Error;
use crate::fgl::{FormalGroupLaw, Logarithm};
use crate::ordinarity::{self, DEFAULT_BUDGET};
use crate::picardfuchs::{self, ThetaOperator};
use crate::ring::ZPoly;
use crate::witt::{GhostVector, WittVector};

type Out = Result<Document, CliError>;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

pub(super) fn dispatch(cmd: &Command, config: &Config) -> Out {
    match cmd {
        Command::Families => families(),
        Command::Witt(a) => witt(a),
        Command::AmLog(a) => am_log(a, config),
        Command::Fgl(a) => fgl(a, config),
        Command::ScanOrdinary(a) => scan(a, config),
        Command::PfCheck(a) => pf_check(a, config),
        Command::Congruence(a) => congruence(a, config),
    }
}

fn family(flag: &Option<String>, config: &Config) -> Result<FamilyId, CliError> {
    let name = flag
        .as_ref()
        .or(config.family.as_ref())
        .ok_or_else(|| CliError::Usage("--family is required (or set family in the config)".into()))?;
    Ok(name.parse()?)
}

/// Logarithm `a_1..a_M` of a built-in family by the chosen method.
pub fn family_logarithm(id: FamilyId, m_max: usize, method: Method) -> Result<Logarithm, Error> {
    match method {
        Method::Extraction => artinmazur::am_logarithm(&builtin_family(id).family, m_max),
        Method::ClosedForm => closed_form_logarithm(id, m_max),
    }
}

fn families() -> Out {
    let mut entries = Vec::new();
    let mut doc = Document::new(
        Value::Null,
        vec![
            "id",
            "ambient_dim",
            "fibre_dim",
            "equation",
            "rule",
            "singular_locus",
            "operator",
        ],
    );
    for id in FamilyId::ALL {
        let e = builtin_family(id);
        let op = picardfuchs::bundled_operator(id).map(|o| o.to_string());
        doc.row(vec![
            id.to_string(),
            e.family.ambient_dim().to_string(),
            e.fibre_dim().to_string(),
            e.family.polys()[0].to_string(),
            e.rule.to_string(),
            e.singular_locus().to_string(),
            op.clone().unwrap_or_else(|| "-".into()),
        ]);
        entries.push(json!({
            "id": id,
            "ambient": e.family.ambient(),
            "ambient_dim": e.family.ambient_dim(),
            "fibre_dim": e.fibre_dim(),
            "equations": e.family.polys(),
            "rule": e.rule,
            "singular_locus": e.singular_locus(),
            "operator": op,
        }));
    }
    doc.json = json!({ "families": entries });
    Ok(doc)
}

fn poly_list(s: &str) -> Result<Vec<ZPoly>, CliError> {
    Ok(s.split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, Error>>()?)
}

fn need<T: Copy>(v: Option<T>, flag: &str, op: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --op {op}")))
}

fn witt(a: &WittArgs) -> Out {
    let op_name = format!("{:?}", a.op).to_lowercase();
    let operand = |s: &str| -> Result<WittVector, CliError> { Ok(WittVector::new(poly_list(s)?)?) };
    let second = || -> Result<WittVector, CliError> {
        let b =
            a.b.as_deref()
                .ok_or_else(|| CliError::Usage(format!("--b is required for --op {op_name}")))?;
        operand(b)
    };
    let (result, entries): (Value, Vec<ZPoly>) = match a.op {
        WittOp::Ghost => {
            let g = operand(&a.a)?.to_ghost();
            (to_json(&g), g.entries().to_vec())
        }
        WittOp::FromGhost => {
            let w = GhostVector::new(poly_list(&a.a)?)?.to_witt()?;
            (to_json(&w), w.coords().to_vec())
        }
        op => {
            let x = operand_or_lift(a, &op_name, &operand)?;
            let w = match op {
                WittOp::Add => x.add(&second()?)?,
                WittOp::Sub => x.sub(&second()?)?,
                WittOp::Mul => x.mul(&second()?)?,
                WittOp::Neg => x.neg(),
                WittOp::Frobenius => x.frobenius(need(a.m, "m", &op_name)?)?,
                WittOp::Verschiebung => match a.len {
                    Some(len) => x.verschiebung_to(need(a.m, "m", &op_name)?, len)?,
                    None => x.verschiebung(need(a.m, "m", &op_name)?),
                },
                _ => x,
            };
            (to_json(&w), w.coords().to_vec())
        }
    };
    let mut doc = Document::new(json!({ "op": op_name, "result": result }), vec!["index", "value"]);
    for (i, c) in entries.iter().enumerate() {
        doc.row(vec![(i + 1).to_string(), c.to_string()]);
    }
    Ok(doc)
}

fn operand_or_lift(
    a: &WittArgs,
    op_name: &str,
    operand: &dyn Fn(&str) -> Result<WittVector, CliError>,
) -> Result<WittVector, CliError> {
    if a.op != WittOp::Teichmueller {
        return operand(&a.a);
    }
    let v: ZPoly = a.a.trim().parse()?;
    let len = need(a.len, "len", op_name)?;
    if len == 0 {
        return Err(CliError::Usage("--len must be positive".into()));
    }
    Ok(WittVector::teichmueller(&v, len))
}

fn am_log(a: &AmLogArgs, config: &Config) -> Out {
    let id = family(&a.family, config)?;
    if let Some(n) = &a.modulus {
        if *n < BigInt::from(2) {
            return Err(CliError::Usage(format!("--mod must be at least 2, got {n}")));
        }
    }
    let log = family_logarithm(id, a.mmax, a.method)?;
    let mut doc = Document::new(Value::Null, vec!["m", "a_m"]);
    let mut rows = Vec::new();
    for (i, c) in log.coeffs().iter().enumerate() {
        let c = match &a.modulus {
            Some(n) => c.reduce_mod(n),
            None => c.clone(),
        };
        doc.row(vec![(i + 1).to_string(), c.to_string()]);
        rows.push(json!({ "m": i + 1, "a_m": c }));
    }
    doc.json = json!({
        "family": id,
        "method": a.method.as_str(),
        "mmax": a.mmax,
        "modulus": a.modulus.as_ref().map(|n| n.to_string()),
        "coeffs": rows,
    });
    Ok(doc)
}

fn fgl(a: &FglArgs, config: &Config) -> Out {
    let id = family(&a.family, config)?;
    if a.deg == 0 {
        return Err(CliError::Usage("--deg must be positive".into()));
    }
    let mut log = family_logarithm(id, a.deg, a.method)?;
    if let Some(v) = &a.at_x {
        log = log.eval_param(PARAM, v);
    }
    let law = FormalGroupLaw::from_logarithm(&log, a.deg)?;
    let report = law.integrality_report();
    let mut doc = Document::new(Value::Null, vec!["i", "j", "coeff", "integral"]);
    for (&(i, j), c) in law.series().terms() {
        doc.row(vec![
            i.to_string(),
            j.to_string(),
            c.to_string(),
            c.is_integral().to_string(),
        ]);
    }
    let offending: Vec<Value> = report
        .offending
        .iter()
        .map(|(i, j, c)| json!({ "i": i, "j": j, "coeff": c }))
        .collect();
    doc.json = json!({
        "family": id,
        "method": a.method.as_str(),
        "degree": a.deg,
        "at_x": a.at_x.as_ref().map(|v| v.to_string()),
        "logarithm": log,
        "law": law,
        "integral": report.passed(),
        "offending": offending,
    });
    Ok(doc)
}

fn scan(a: &ScanArgs, config: &Config) -> Out {
    let id = family(&a.family, config)?;
    let budget = a.budget.or(config.budget).unwrap_or(DEFAULT_BUDGET);
    let report = ordinarity::ordinarity_scan(id, a.pmax, a.oracle, budget)?;
    let mut doc = Document::new(
        to_json(&report),
        vec!["p", "lambda", "a_p_value", "verdict", "oracle_verdict", "agree"],
    );
    let dash = || "-".to_string();
    for r in report.rows() {
        doc.row(vec![
            r.p.to_string(),
            r.lambda.to_string(),
            r.a_p_value.to_string(),
            r.verdict.clone(),
            r.oracle_verdict.map_or_else(dash, |v| v.to_string()),
            r.agree.map_or_else(dash, |v| v.to_string()),
        ]);
    }
    Ok(doc)
}

fn pf_check(a: &PfArgs, config: &Config) -> Out {
    let id = family(&a.family, config)?;
    let op: ThetaOperator = match &a.operator {
        Some(s) => s.parse()?,
        None => picardfuchs::bundled_operator(id).ok_or_else(|| Error::NoOperator(id.to_string()))?,
    };
    if let Some(t) = a.series_order {
        if id != FamilyId::QuinticCy3 {
            return Err(Error::InvalidArgument(format!(
                "a holomorphic period is bundled only for quintic-cy3, not {id}"
            ))
            .into());
        }
        let check = picardfuchs::series_solution_check(&op, &picardfuchs::quintic_period(t), t)?;
        let mut doc = Document::new(
            json!({ "family": id, "operator": op.to_string(), "series_check": check }),
            vec!["order", "pass", "first_failure"],
        );
        let failure = check
            .first_failure
            .as_ref()
            .map_or_else(|| "-".to_string(), |(n, c)| format!("{c}*x^{n}"));
        doc.row(vec![t.to_string(), check.passed.to_string(), failure]);
        return Ok(doc);
    }
    let k_max = a
        .kmax
        .ok_or_else(|| CliError::Usage("--kmax or --series-order is required".into()))?;
    if k_max == 0 {
        return Err(CliError::Usage("--kmax must be positive".into()));
    }
    let log = family_logarithm(id, k_max, a.method)?;
    let rows = picardfuchs::pf_congruence_check(&op, &log, k_max)?;
    let mut doc = Document::new(
        json!({
            "family": id,
            "method": a.method.as_str(),
            "operator": op.to_string(),
            "kmax": k_max,
            "rows": rows,
        }),
        vec!["k", "pass", "residual"],
    );
    for r in &rows {
        let residual = if r.passed {
            "-".to_string()
        } else {
            r.residual.to_string()
        };
        doc.row(vec![r.k.to_string(), r.passed.to_string(), residual]);
    }
    Ok(doc)
}

fn congruence(a: &CongruenceArgs, config: &Config) -> Out {
    let id = family(&a.family, config)?;
    let mut needed = 1usize;
    for &p in &a.primes {
        ordinarity::check_odd_prime(p)?;
        let top = p
            .checked_pow(a.nu)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| CliError::Usage(format!("{p}^{} is too large", a.nu)))?;
        needed = needed.max(top);
    }
    let m_max = a.mmax.unwrap_or(needed);
    if m_max == 0 {
        return Err(CliError::Usage("--mmax must be positive".into()));
    }
    let log = family_logarithm(id, m_max, a.method)?;
    let results = a
        .primes
        .iter()
        .map(|&p| ordinarity::frobenius_power_congruence(&log, p, a.nu))
        .collect::<Result<Vec<_>, _>>()?;
    let mut doc = Document::new(
        json!({
            "family": id,
            "method": a.method.as_str(),
            "mmax": m_max,
            "results": results,
        }),
        vec!["p", "nu", "pass", "difference"],
    );
    for r in &results {
        doc.row(vec![
            r.p.to_string(),
            r.nu.to_string(),
            r.passed.to_string(),
            if r.difference.is_zero() {
                "0".into()
            } else {
                r.difference.to_string()
            },
        ]);
    }
    Ok(doc)
}
