use std::fmt::Write as _;

use serde_json::{json, Value};

use etaform::basis::{cusp_basis, dim_cusp, eisenstein_expand, expand_cusp_basis, DILATIONS};
use etaform::eta::{expand as expand_quotient, ligozat_check, EtaQuotient};
use etaform::formula::format_rational;
use etaform::verify::{verify as run_verify, Fault};
use etaform::{EisensteinSeries, Error, Formula, QSeries, Rational, Result};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

/// Exit code plus the text written to stdout.
pub struct CommandResult {
    pub exit_code: u8,
    pub output: String,
}

impl CommandResult {
    fn ok(output: String) -> Self {
        CommandResult { exit_code: EXIT_OK, output }
    }
}

fn joined(coeffs: &[Rational]) -> String {
    coeffs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn strings(coeffs: &[Rational]) -> Vec<String> {
    coeffs.iter().map(format_rational).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn to_json(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("json value serializes"))
}

pub fn expand(level: u64, eta: &str, terms: i64, json: bool) -> Result<CommandResult> {
    if terms < 1 {
        return Err(Error::Domain(format!("--terms must be positive, got {terms}")));
    }
    let f = EtaQuotient::parse(level, eta)?;
    let order = etaform::eta::fractional_order(&f);
    if !order.is_integer() {
        return Err(Error::FractionalLeadingPower(order));
    }
    let lead: i64 = order.to_integer().try_into().expect("leading power fits in i64");
    let series = expand_quotient(&f, lead + terms)?;
    let out = if json {
        to_json(&json!({
            "level": level,
            "eta": f.to_string(),
            "leading_exponent": series.leading_exponent(),
            "precision": series.precision(),
            "coefficients": strings(series.coeffs()),
        }))
    } else {
        format!(
            "leading_exponent: {}\nprecision: {}\ncoefficients: {}\n",
            series.leading_exponent(),
            series.precision(),
            joined(series.coeffs())
        )
    };
    Ok(CommandResult::ok(out))
}

pub fn check(level: u64, eta: &str, json: bool) -> Result<CommandResult> {
    let f = EtaQuotient::parse(level, eta)?;
    let report = ligozat_check(&f);
    let out = if json {
        let orders: serde_json::Map<String, Value> = report
            .cusp_orders
            .iter()
            .map(|(c, v)| (c.to_string(), Value::String(format_rational(v))))
            .collect();
        to_json(&json!({
            "level": level,
            "eta": f.to_string(),
            "weight": format_rational(&report.weight),
            "L1": report.l1_ok,
            "L2": report.l2_ok,
            "L3": report.l3_ok,
            "L4": report.l4_ok,
            "L5": report.l5_ok,
            "cusp_orders": orders,
            "modular": report.is_modular,
            "cusp_form": report.is_cusp_form,
        }))
    } else {
        let mut s = String::new();
        writeln!(s, "quotient: {f} (level {level})").unwrap();
        writeln!(s, "weight: {}", report.weight).unwrap();
        for (name, ok) in [
            ("L1", report.l1_ok),
            ("L2", report.l2_ok),
            ("L3", report.l3_ok),
            ("L4", report.l4_ok),
            ("L5", report.l5_ok),
        ] {
            writeln!(s, "{name}: {}", pass_fail(ok)).unwrap();
        }
        for (cusp, order) in &report.cusp_orders {
            writeln!(s, "order at {cusp}: {order}").unwrap();
        }
        writeln!(
            s,
            "modular: {}, cusp form: {}",
            yes_no(report.is_modular),
            yes_no(report.is_cusp_form)
        )
        .unwrap();
        s
    };
    Ok(CommandResult::ok(out))
}

pub fn formula(k: i64, i: i64, terms: Option<i64>, json: bool) -> Result<CommandResult> {
    let f = match terms {
        None => Formula::derive(k, i)?,
        Some(t) => {
            let needed = dim_cusp(k)? as i64 + 1;
            if t < needed {
                return Err(Error::Domain(format!("--terms must be at least 4k - 4 = {needed}")));
            }
            Formula::with_basis(k, i, &expand_cusp_basis(k, t)?)?
        }
    };
    let out = if json { format!("{}\n", f.to_json()) } else { f.to_string() };
    Ok(CommandResult::ok(out))
}

pub fn verify(kmax: i64, nmax: i64, inject_fault: bool) -> Result<CommandResult> {
    let fault = inject_fault.then_some(Fault::PerturbB1);
    let report = run_verify(kmax, nmax, fault)?;
    let mut s = String::new();
    for cell in &report.cells {
        let status = match &cell.mismatch {
            None => "ok".to_string(),
            Some(m) => format!("MISMATCH {m}"),
        };
        writeln!(s, "k={} i={}: {} comparisons, {status}", cell.k, cell.i, cell.comparisons).unwrap();
    }
    let exit_code = match report.first_mismatch() {
        None => {
            writeln!(
                s,
                "verified: {} cells, {} exact comparisons, n <= {}",
                report.cells.len(),
                report.comparisons(),
                nmax
            )
            .unwrap();
            EXIT_OK
        }
        Some(m) => {
            writeln!(s, "FAILED: first mismatch at {m}").unwrap();
            EXIT_MISMATCH
        }
    };
    Ok(CommandResult { exit_code, output: s })
}

pub fn basis(k: i64, terms: i64, json: bool) -> Result<CommandResult> {
    if terms < 1 {
        return Err(Error::Domain(format!("--terms must be positive, got {terms}")));
    }
    let weight = 2 * k;
    let elements = cusp_basis(k)?;
    let cusp_rows: Vec<(i64, QSeries)> = elements
        .iter()
        .map(|c| Ok((c.j(), c.expand(terms)?)))
        .collect::<Result<_>>()?;
    let eis_rows: Vec<(u64, QSeries)> = DILATIONS
        .iter()
        .map(|&t| Ok((t, eisenstein_expand(&EisensteinSeries::new(weight as u32, t)?, terms))))
        .collect::<Result<_>>()?;

    let row = |s: &QSeries| -> Vec<Rational> {
        (0..terms).map(|n| s.coefficient(n).expect("within precision")).collect()
    };
    let out = if json {
        let cusp: Vec<Value> = cusp_rows
            .iter()
            .map(|(j, s)| json!({"j": j, "eta": elements[(*j - 1) as usize].quotient().to_string(), "coefficients": strings(&row(s))}))
            .collect();
        let eis: Vec<Value> = eis_rows
            .iter()
            .map(|(t, s)| json!({"t": t, "coefficients": strings(&row(s))}))
            .collect();
        to_json(&json!({"k": k, "weight": weight, "terms": terms, "cusp": cusp, "eisenstein": eis}))
    } else {
        let mut s = String::from("kind,index");
        for n in 0..terms {
            write!(s, ",q^{n}").unwrap();
        }
        s.push('\n');
        for (j, series) in &cusp_rows {
            writeln!(s, "cusp,{j},{}", joined(&row(series))).unwrap();
        }
        for (t, series) in &eis_rows {
            writeln!(s, "eisenstein,{t},{}", joined(&row(series))).unwrap();
        }
        s
    };
    Ok(CommandResult::ok(out))
}
