//! File and stdout formats: trace and spectrum CSV, verdict, gate and
//! operator JSON.

use std::collections::BTreeMap;
use std::io::Write;

use iswhm_core::evolve::EvolutionTrace;
use iswhm_core::gates::GateReport;
use iswhm_core::{SpectralSample, TruncatedOperator, TruncationSpec, Verdict};
use serde::Serialize;

use crate::CliError;

/// `%.12g`: 12 significant digits, trailing zeros dropped.
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn state_label(levels: &[usize]) -> String {
    let parts: Vec<String> = levels.iter().map(|n| n.to_string()).collect();
    format!("p_{}", parts.join("_"))
}

pub fn trace_header(trace: &EvolutionTrace) -> Vec<String> {
    let mut h = vec!["t".to_string(), "E0".to_string()];
    h.extend(trace.variables.iter().map(|v| format!("exp_{v}")));
    h.extend(trace.spec.indexer().iter().map(|l| state_label(&l)));
    h
}

/// `t,E0,exp_<var>...,p_<n1>_<n2>...`, composite states in row-major
/// order, E0 left empty on rows without a sample.
pub fn write_trace_csv<W: Write>(trace: &EvolutionTrace, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trace_header(trace))?;
    for row in &trace.rows {
        let mut rec = vec![fmt_g12(row.t), row.e0.map(fmt_g12).unwrap_or_default()];
        rec.extend(row.expectations.iter().copied().map(fmt_g12));
        rec.extend(row.probabilities.iter().copied().map(fmt_g12));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_spectrum_csv<W: Write>(flow: &[SpectralSample], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "s", "e0", "gap"])?;
    for s in flow {
        w.write_record([fmt_g12(s.t), fmt_g12(s.s), fmt_g12(s.e0), fmt_g12(s.gap)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct VerdictJson {
    pub status: &'static str,
    pub equation: String,
    #[serde(rename = "P")]
    pub levels: usize,
    #[serde(rename = "T")]
    pub total_time: f64,
    pub dt: f64,
    pub dominant_state: Option<Vec<usize>>,
    pub dominant_probability: f64,
    /// Variable name to value; integers are written as decimal strings
    /// when they do not fit in `i64`.
    pub solution: Option<BTreeMap<String, serde_json::Value>>,
    pub e0_final: f64,
    pub expectations_final: BTreeMap<String, f64>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let solution = v.solution.as_ref().map(|xs| {
            v.variables
                .iter()
                .zip(xs)
                .map(|(name, x)| {
                    let value = match i64::try_from(x) {
                        Ok(n) => serde_json::Value::from(n),
                        Err(_) => serde_json::Value::from(x.to_string()),
                    };
                    (name.clone(), value)
                })
                .collect()
        });
        VerdictJson {
            status: v.status.name(),
            equation: v.equation.clone(),
            levels: v.levels,
            total_time: v.total_time,
            dt: v.dt,
            dominant_state: v.dominant_state.clone(),
            dominant_probability: v.dominant_probability,
            solution,
            e0_final: v.e0_final,
            expectations_final: v.variables.iter().cloned().zip(v.expectations_final.iter().copied()).collect(),
        }
    }
}

pub fn verdict_json(v: &Verdict) -> String {
    serde_json::to_string_pretty(&VerdictJson::from(v)).expect("verdict serializes")
}

#[derive(Debug, Serialize)]
struct GateJson<'a> {
    gate: &'a str,
    phi: f64,
    fidelity: f64,
    unitary_defect: f64,
    pass: bool,
}

pub fn gates_json(reports: &[GateReport]) -> String {
    let rows: Vec<GateJson> = reports
        .iter()
        .map(|r| GateJson {
            gate: &r.name,
            phi: r.phi,
            fidelity: r.fidelity,
            unitary_defect: r.unitary_defect,
            pass: r.pass,
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("reports serialize")
}

pub fn gates_table(reports: &[GateReport]) -> String {
    let mut s = format!("{:<10} {:>16} {:>18} {:>5}\n", "gate", "phi", "fidelity", "pass");
    for r in reports {
        s.push_str(&format!(
            "{:<10} {:>16.12} {:>18.15} {:>5}\n",
            r.name,
            r.phi,
            r.fidelity,
            if r.pass { "yes" } else { "NO" }
        ));
    }
    s
}

#[derive(Debug, Serialize)]
struct SpecJson {
    k: usize,
    #[serde(rename = "P")]
    levels: usize,
    dim: usize,
}

#[derive(Debug, Serialize)]
struct OperatorDump {
    dim: usize,
    spec: SpecJson,
    hi_form: &'static str,
    h_d: Vec<Vec<[f64; 2]>>,
    h_i: Vec<Vec<[f64; 2]>>,
}

fn entries(op: &TruncatedOperator) -> Vec<Vec<[f64; 2]>> {
    let m = op.matrix();
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Debug dump of `H_D` and `H_I`, entries as `[re, im]`.
pub fn operator_dump(
    spec: TruncationSpec,
    hi_form: &'static str,
    hd: &TruncatedOperator,
    hi: &TruncatedOperator,
) -> String {
    let dump = OperatorDump {
        dim: spec.dim(),
        spec: SpecJson { k: spec.k(), levels: spec.levels(), dim: spec.dim() },
        hi_form,
        h_d: entries(hd),
        h_i: entries(hi),
    };
    serde_json::to_string(&dump).expect("operators serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (2000.0, "2000"),
            (0.5, "0.5"),
            (1.0 / 3.0, "0.333333333333"),
            (-16.000000000049, "-16"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-5, "0.00001"),
            (1.5e-7, "1.5e-07"),
            (9.9999999999999e-1, "1"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g12(x), want, "{x}");
        }
    }

    #[test]
    fn g12_round_trips_to_12_digits() {
        for x in [std::f64::consts::PI, -1e-9 / 7.0, 6.02214076e23, 0.9947264] {
            let y: f64 = fmt_g12(x).parse().unwrap();
            assert!(((x - y) / x).abs() < 1e-11);
        }
    }
}
