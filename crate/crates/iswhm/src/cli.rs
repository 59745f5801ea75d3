//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{FileConfig, RunConfig};
use crate::format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "iswhm", version, about = "Adiabatic infinite-square-well decision engine for Diophantine equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the equation has a solution in positive perfect squares.
    Solve(RunArgs),
    /// Write the evolution trace as CSV, optionally with SVG charts.
    Trace(RunArgs),
    /// Write the ground-energy flow `(t, s, e0, gap)` as CSV.
    Spectrum(RunArgs),
    /// Gate constructions by free evolution in the well.
    Gates {
        #[command(subcommand)]
        command: GatesCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum GatesCommand {
    /// Check every builtin gate.
    Verify(GatesArgs),
}

#[derive(Debug, Args)]
pub struct GatesArgs {
    /// Print a JSON array instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Shift every gate's phase by this amount.
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_offset: f64,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Key = value config file; flags take precedence.
    #[arg(short = 'c', long)]
    pub config: Option<PathBuf>,
    #[arg(short = 'e', long, allow_hyphen_values = true)]
    pub equation: Option<String>,
    /// Levels per variable.
    #[arg(short = 'P', long = "levels")]
    pub levels: Option<usize>,
    /// Total evolution time.
    #[arg(short = 'T', long = "total-time")]
    pub total_time: Option<f64>,
    /// Step size [default: 1].
    #[arg(long)]
    pub dt: Option<f64>,
    /// complement_projector, ones or laplacian.
    #[arg(long)]
    pub hi_form: Option<String>,
    /// Where in each step the schedule is evaluated: start or midpoint.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub e0_stride: Option<usize>,
    #[arg(long)]
    pub record_stride: Option<usize>,
    /// Minimum dominant probability for a verdict.
    #[arg(long)]
    pub dominance: Option<f64>,
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
    /// Also write SVG charts next to the output file.
    #[arg(long)]
    pub svg: bool,
    /// Write H_D and H_I as JSON to this path.
    #[arg(long)]
    pub dump_operators: Option<PathBuf>,
}

impl RunArgs {
    fn as_file_config(&self) -> FileConfig {
        FileConfig {
            equation: self.equation.clone(),
            levels: self.levels,
            total_time: self.total_time,
            dt: self.dt,
            hi_form: self.hi_form.clone(),
            schedule: self.schedule.clone(),
            e0_stride: self.e0_stride,
            record_stride: self.record_stride,
            max_dim: self.max_dim,
            dominance: self.dominance,
            out: self.out.clone(),
            svg: self.svg.then_some(true),
            dump_operators: self.dump_operators.clone(),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        RunConfig::from_file_config(file.merged(self.as_file_config()))
    }
}

/// Runs one command, writing to the given streams; returns the exit code.
pub fn run<O: Write, E: Write>(cli: Cli, stdout: &mut O, stderr: &mut E) -> i32 {
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn dispatch<O: Write>(cli: Cli, stdout: &mut O) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = args.resolve()?;
            commands::maybe_dump_operators(&cfg)?;
            let (verdict, trace) = commands::solve(&cfg)?;
            if let Some(trace) = &trace {
                commands::write_trace_outputs(&cfg, trace, None::<&mut O>)?;
            }
            writeln!(stdout, "{}", format::verdict_json(&verdict))?;
            Ok(commands::exit_code(verdict.status))
        }
        Command::Trace(args) => {
            let cfg = args.resolve()?;
            commands::maybe_dump_operators(&cfg)?;
            let trace = commands::trace(&cfg)?;
            commands::write_trace_outputs(&cfg, &trace, Some(&mut *stdout))?;
            Ok(0)
        }
        Command::Spectrum(args) => {
            let cfg = args.resolve()?;
            commands::maybe_dump_operators(&cfg)?;
            let flow = commands::spectrum(&cfg)?;
            commands::write_spectrum_outputs(&cfg, &flow, &mut *stdout)?;
            Ok(0)
        }
        Command::Gates { command: GatesCommand::Verify(args) } => {
            let reports = commands::gate_reports(args.phi_offset)?;
            if args.json {
                writeln!(stdout, "{}", format::gates_json(&reports))?;
            } else {
                write!(stdout, "{}", format::gates_table(&reports))?;
            }
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_constant_equation_parses() {
        let cli = Cli::try_parse_from(["iswhm", "solve", "-e", "-x+4", "-P", "3", "-T", "10"]).unwrap();
        let Command::Solve(args) = cli.command else { panic!() };
        assert_eq!(args.equation.as_deref(), Some("-x+4"));
    }
}
