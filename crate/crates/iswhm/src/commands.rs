//! Library entry points behind each subcommand.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use iswhm_core::decide::decide_traced;
use iswhm_core::evolve::{run_evolution, EvolutionTrace};
use iswhm_core::gates::{builtin_gates, verify, GateReport};
use iswhm_core::operators::{build_hd, build_hi};
use iswhm_core::{spectral_flow, SpectralSample, TruncationSpec, Verdict, VerdictStatus};

use crate::config::RunConfig;
use crate::format;
use crate::svg::{LineChart, Series};
use crate::CliError;

/// At most this many probability curves are drawn; above it only the
/// states with the largest final probability are kept.
pub const MAX_PLOTTED_STATES: usize = 16;

pub fn exit_code(status: VerdictStatus) -> i32 {
    match status {
        VerdictStatus::HasSolution | VerdictStatus::NoSolution | VerdictStatus::DegenerateZero => 0,
        VerdictStatus::Inconclusive => 2,
    }
}

pub fn truncation(cfg: &RunConfig) -> Result<TruncationSpec, CliError> {
    TruncationSpec::for_polynomial(&cfg.polynomial, cfg.levels, cfg.max_dim).map_err(|e| CliError::Core(e.into()))
}

pub fn solve(cfg: &RunConfig) -> Result<(Verdict, Option<EvolutionTrace>), CliError> {
    Ok(decide_traced(&cfg.polynomial, cfg.levels, cfg.max_dim, &cfg.params, &cfg.thresholds)?)
}

pub fn trace(cfg: &RunConfig) -> Result<EvolutionTrace, CliError> {
    Ok(run_evolution(&cfg.polynomial, truncation(cfg)?, &cfg.params)?)
}

pub fn spectrum(cfg: &RunConfig) -> Result<Vec<SpectralSample>, CliError> {
    Ok(spectral_flow(&cfg.polynomial, truncation(cfg)?, &cfg.params)?)
}

pub fn operator_dump(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = truncation(cfg)?;
    let hd = build_hd(&cfg.polynomial, spec).map_err(|e| CliError::Core(e.into()))?;
    let hi = build_hi(spec, cfg.params.hi_form);
    Ok(format::operator_dump(spec, cfg.params.hi_form.name(), &hd, &hi))
}

/// Verifies every builtin gate, each with its phase shifted by `phi_offset`.
pub fn gate_reports(phi_offset: f64) -> Result<Vec<GateReport>, CliError> {
    builtin_gates().iter().map(|g| verify(&g.perturbed(phi_offset)).map_err(|e| CliError::Core(e.into()))).collect()
}

pub fn probability_chart(trace: &EvolutionTrace) -> LineChart {
    let labels: Vec<Vec<usize>> = trace.spec.indexer().iter().collect();
    let last = &trace.last().probabilities;
    let mut chosen: Vec<usize> = (0..labels.len()).collect();
    if chosen.len() > MAX_PLOTTED_STATES {
        chosen.sort_by(|&a, &b| last[b].total_cmp(&last[a]).then(a.cmp(&b)));
        chosen.truncate(MAX_PLOTTED_STATES);
        chosen.sort_unstable();
    }
    let series = chosen
        .into_iter()
        .map(|i| Series {
            name: format!("|{}>", labels[i].iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
            points: trace.rows.iter().map(|r| (r.t, r.probabilities[i])).collect(),
        })
        .collect();
    LineChart {
        title: format!("State probabilities, {}", trace.equation),
        x_label: "t".into(),
        y_label: "probability".into(),
        series,
    }
}

pub fn expectation_chart(trace: &EvolutionTrace) -> LineChart {
    let series = trace
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| Series {
            name: format!("<{v}>"),
            points: trace.rows.iter().map(|r| (r.t, r.expectations[i])).collect(),
        })
        .collect();
    LineChart {
        title: format!("Expected values, {}", trace.equation),
        x_label: "t".into(),
        y_label: "<n^2>".into(),
        series,
    }
}

pub fn e0_chart(trace: &EvolutionTrace) -> LineChart {
    let points = trace.rows.iter().filter_map(|r| r.e0.map(|e| (r.t, e))).collect();
    LineChart {
        title: format!("Ground energy, {}", trace.equation),
        x_label: "t".into(),
        y_label: "E0".into(),
        series: vec![Series { name: "E0".into(), points }],
    }
}

pub fn spectrum_chart(equation: &str, flow: &[SpectralSample]) -> LineChart {
    let e0 = flow.iter().map(|s| (s.t, s.e0)).collect();
    let e1 = flow.iter().map(|s| (s.t, s.e0 + s.gap)).collect();
    LineChart {
        title: format!("Spectral flow, {equation}"),
        x_label: "t".into(),
        y_label: "energy".into(),
        series: vec![Series { name: "E0".into(), points: e0 }, Series { name: "E1".into(), points: e1 }],
    }
}

/// `<dir>/<stem>_<suffix>.svg` next to `out`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    out.with_file_name(format!("{stem}_{suffix}.svg"))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Writes the trace CSV to `cfg.out` (or `fallback` when unset) and, with
/// `cfg.svg`, the three charts beside it.
pub fn write_trace_outputs<W: Write>(
    cfg: &RunConfig,
    trace: &EvolutionTrace,
    fallback: Option<W>,
) -> Result<(), CliError> {
    match (&cfg.out, fallback) {
        (Some(path), _) => {
            let mut f = create(path)?;
            format::write_trace_csv(trace, &mut f)?;
            f.flush().map_err(|e| CliError::io(path, e))?;
        }
        (None, Some(w)) => format::write_trace_csv(trace, w)?,
        (None, None) => {}
    }
    if cfg.svg {
        let out = cfg.out.as_deref().ok_or(CliError::Config("svg output needs an output path".into()))?;
        for (suffix, chart) in [
            ("probabilities", probability_chart(trace)),
            ("expectations", expectation_chart(trace)),
            ("e0", e0_chart(trace)),
        ] {
            write_file(&sibling(out, suffix), chart.render().as_bytes())?;
        }
    }
    Ok(())
}

pub fn write_spectrum_outputs<W: Write>(cfg: &RunConfig, flow: &[SpectralSample], stdout: W) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let mut f = create(path)?;
            format::write_spectrum_csv(flow, &mut f)?;
            f.flush().map_err(|e| CliError::io(path, e))?;
        }
        None => format::write_spectrum_csv(flow, stdout)?,
    }
    if cfg.svg {
        let out = cfg.out.as_deref().ok_or(CliError::Config("svg output needs an output path".into()))?;
        let chart = spectrum_chart(&cfg.polynomial.print_canonical(), flow);
        write_file(&sibling(out, "spectrum"), chart.render().as_bytes())?;
    }
    Ok(())
}

pub fn maybe_dump_operators(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(path) = &cfg.dump_operators {
        write_file(path, operator_dump(cfg)?.as_bytes())?;
    }
    Ok(())
}
