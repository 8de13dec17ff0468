//! The `rispower` command-line interface.
//!
//! Exit codes: 0 success, 2 invalid input (descriptor, states, arguments),
//! 3 file-system failure. Nothing is written to the data stream on error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{compare, sweep, worst_case_dynamic, SweepParameter};
use crate::catalog_io::{
    builtin_entry, descriptor_to_json, entries, load_descriptor_with, load_states, CatalogError,
};
use crate::dynamic_power::sequence_energy;
use crate::hardware_model::{RisDescriptor, ValidationOptions};
use crate::quantities::{parse_power, PowerMicrowatts};
use crate::static_power::static_power_breakdown;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "rispower", version, about = "RIS power consumption estimator")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Static power breakdown: control board plus drive circuits.
    Estimate(SourceArgs),
    /// Energy and mean power over a coding-state sequence.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        /// Coding-state file.
        #[arg(long)]
        states: PathBuf,
    },
    /// Static breakdown while varying one descriptor parameter.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// cell_count, group_size, signals_per_circuit, bit_resolution or per_circuit_power (uW).
        #[arg(long)]
        param: SweepParameter,
        /// Comma-separated integer values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
    },
    /// Side-by-side static and worst-case power of several devices.
    Compare {
        /// Built-in catalog key; repeatable.
        #[arg(long)]
        builtin: Vec<String>,
        /// Descriptor file; repeatable.
        #[arg(long)]
        descriptor: Vec<PathBuf>,
        /// Control-board power for devices that do not specify one.
        #[arg(long, value_parser = parse_power_arg)]
        control_board_power: Option<PowerMicrowatts>,
    },
    /// Built-in measured devices.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show { key: String },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in catalog key.
    #[arg(long, conflicts_with = "descriptor", required_unless_present = "descriptor")]
    pub builtin: Option<String>,
    /// Descriptor file.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    /// Replace the control-board power, e.g. "1.5 W".
    #[arg(long, value_parser = parse_power_arg)]
    pub control_board_power: Option<PowerMicrowatts>,
}

fn parse_power_arg(s: &str) -> Result<PowerMicrowatts, String> {
    parse_power(s).map_err(|e| e.to_string())
}

/// A failed command and its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl ToString) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.to_string(),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError {
            code: if e.is_io() { EXIT_IO } else { EXIT_VALIDATION },
            message: e.to_string(),
        }
    }
}

fn load_source(source: &SourceArgs) -> Result<RisDescriptor, CliError> {
    let d = match (&source.builtin, &source.descriptor) {
        (Some(key), _) => builtin_entry(key)?.descriptor,
        (None, Some(path)) => load_descriptor_with(path, &ValidationOptions::board_power_optional())?,
        (None, None) => return Err(CliError::invalid("either --builtin or --descriptor is required")),
    };
    Ok(match source.control_board_power {
        Some(p) => d.with_control_board_power(p),
        None => d,
    })
}

fn power_pair(p: PowerMicrowatts) -> (u64, String) {
    (p.as_microwatts(), p.display())
}

#[derive(Serialize)]
struct EstimateRow {
    name: String,
    technology: String,
    component_count: u64,
    group_size: u64,
    signals_per_circuit: u32,
    n_drive_circuit: u64,
    control_board_power_uw: u64,
    control_board_power: String,
    per_circuit_power_uw: u64,
    per_circuit_power: String,
    total_drive_power_uw: u64,
    total_drive_power: String,
    static_total_uw: u64,
    static_total: String,
}

#[derive(Serialize)]
struct SimulateRow {
    name: String,
    segments: usize,
    duration_us: u64,
    energy_pj: u64,
    mean_power_uw: u64,
    mean_power: String,
    static_total_uw: u64,
    static_total: String,
    mean_dynamic_uw: u64,
}

#[derive(Serialize)]
struct SweepCsvRow {
    parameter: &'static str,
    value: u64,
    status: &'static str,
    error: Option<String>,
    component_count: Option<u64>,
    group_size: Option<u64>,
    n_drive_circuit: Option<u64>,
    per_circuit_power_uw: Option<u64>,
    total_drive_power_uw: Option<u64>,
    static_total_uw: Option<u64>,
    static_total: Option<String>,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    base: &'a str,
    parameter: &'static str,
    rows: &'a [SweepCsvRow],
}

#[derive(Serialize)]
struct CompareRow {
    name: String,
    technology: String,
    component_count: u64,
    n_drive_circuit: u64,
    static_total_uw: u64,
    static_total: String,
    worst_case_dynamic_uw: u64,
    worst_case_dynamic: String,
    worst_case_total_uw: u64,
    worst_case_total: String,
}

#[derive(Serialize)]
struct CatalogRow {
    key: String,
    technology: String,
    rows: u32,
    cols: u32,
    cells: u64,
    frequency_hz: u64,
    control_board_power_uw: Option<u64>,
    drive_circuit: String,
    per_circuit_power_uw: u64,
    worst_case_dynamic_uw: u64,
}

#[derive(Serialize)]
struct CatalogShow<'a> {
    key: &'a str,
    descriptor: serde_json::Value,
    provenance: Vec<&'a str>,
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("report row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

/// Aligned text table built from the csv rendering. A single row is shown
/// as `field  value` lines.
fn to_table<T: Serialize>(rows: &[T]) -> String {
    let text = to_csv(rows);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map(|h| h.iter().map(str::to_owned).collect())
        .unwrap_or_default();
    let records: Vec<Vec<String>> = reader
        .records()
        .filter_map(Result::ok)
        .map(|r| r.iter().map(str::to_owned).collect())
        .collect();

    let mut out = String::new();
    if records.len() == 1 {
        let width = headers.iter().map(String::len).max().unwrap_or(0);
        for (h, v) in headers.iter().zip(&records[0]) {
            out.push_str(&format!("{h:<width$}  {v}\n"));
        }
        return out;
    }
    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for r in &records {
        for (w, v) in widths.iter_mut().zip(r) {
            *w = (*w).max(v.len());
        }
    }
    for line in std::iter::once(&headers).chain(&records) {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn render<T: Serialize, D: Serialize + ?Sized>(format: OutputFormat, doc: &D, rows: &[T]) -> String {
    match format {
        OutputFormat::Json => to_json(doc),
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Table => to_table(rows),
    }
}

fn estimate(source: &SourceArgs, format: OutputFormat) -> Result<String, CliError> {
    let d = load_source(source)?;
    let b = static_power_breakdown(&d).map_err(CliError::invalid)?;
    let (control_board_power_uw, control_board_power) = power_pair(b.control_board_power);
    let (per_circuit_power_uw, per_circuit_power) = power_pair(b.per_circuit_power);
    let (total_drive_power_uw, total_drive_power) = power_pair(b.total_drive_power);
    let (static_total_uw, static_total) = power_pair(b.static_total);
    let row = EstimateRow {
        name: d.name().to_owned(),
        technology: d.technology().to_string(),
        component_count: d.component_count(),
        group_size: d.group_size(),
        signals_per_circuit: d.drive_circuit().signals_per_circuit,
        n_drive_circuit: b.drive_circuit_count,
        control_board_power_uw,
        control_board_power,
        per_circuit_power_uw,
        per_circuit_power,
        total_drive_power_uw,
        total_drive_power,
        static_total_uw,
        static_total,
    };
    Ok(render(format, &row, std::slice::from_ref(&row)))
}

fn simulate(source: &SourceArgs, states: &PathBuf, format: OutputFormat) -> Result<String, CliError> {
    let d = load_source(source)?;
    let seq = load_states(states, &d)?;
    let result = sequence_energy(&d, &seq).map_err(CliError::invalid)?;
    let static_total = static_power_breakdown(&d).map_err(CliError::invalid)?.static_total;
    let (mean_power_uw, mean_power) = power_pair(result.mean_power);
    let (static_total_uw, static_total_text) = power_pair(static_total);
    let row = SimulateRow {
        name: d.name().to_owned(),
        segments: seq.segments().len(),
        duration_us: result.duration.as_microseconds(),
        energy_pj: result.energy.as_picojoules(),
        mean_power_uw,
        mean_power,
        static_total_uw,
        static_total: static_total_text,
        mean_dynamic_uw: mean_power_uw - static_total_uw,
    };
    Ok(render(format, &row, std::slice::from_ref(&row)))
}

fn run_sweep(
    source: &SourceArgs,
    param: SweepParameter,
    values: &[u64],
    format: OutputFormat,
) -> Result<String, CliError> {
    let d = load_source(source)?;
    let result = sweep(&d, param, values).map_err(CliError::invalid)?;
    let rows: Vec<SweepCsvRow> = result
        .rows
        .iter()
        .map(|row| match &row.outcome {
            Ok(p) => SweepCsvRow {
                parameter: param.as_str(),
                value: row.value,
                status: "ok",
                error: None,
                component_count: Some(p.component_count),
                group_size: Some(p.group_size),
                n_drive_circuit: Some(p.breakdown.drive_circuit_count),
                per_circuit_power_uw: Some(p.breakdown.per_circuit_power.as_microwatts()),
                total_drive_power_uw: Some(p.breakdown.total_drive_power.as_microwatts()),
                static_total_uw: Some(p.breakdown.static_total.as_microwatts()),
                static_total: Some(p.breakdown.static_total.display()),
            },
            Err(e) => SweepCsvRow {
                parameter: param.as_str(),
                value: row.value,
                status: "error",
                error: Some(e.clone()),
                component_count: None,
                group_size: None,
                n_drive_circuit: None,
                per_circuit_power_uw: None,
                total_drive_power_uw: None,
                static_total_uw: None,
                static_total: None,
            },
        })
        .collect();
    let doc = SweepDoc {
        base: d.name(),
        parameter: param.as_str(),
        rows: &rows,
    };
    Ok(render(format, &doc, &rows))
}

fn run_compare(
    builtins: &[String],
    files: &[PathBuf],
    board: Option<PowerMicrowatts>,
    format: OutputFormat,
) -> Result<String, CliError> {
    let mut descriptors = Vec::new();
    for key in builtins {
        descriptors.push(builtin_entry(key)?.descriptor);
    }
    for path in files {
        descriptors.push(load_descriptor_with(path, &ValidationOptions::board_power_optional())?);
    }
    if let Some(p) = board {
        for d in descriptors.iter_mut() {
            if d.control_board().rated_power.is_none() {
                *d = d.with_control_board_power(p);
            }
        }
    }
    let rows: Vec<CompareRow> = compare(&descriptors)
        .map_err(CliError::invalid)?
        .into_iter()
        .map(|r| CompareRow {
            name: r.name,
            technology: r.technology.to_string(),
            component_count: r.component_count,
            n_drive_circuit: r.drive_circuit_count,
            static_total_uw: r.static_total.as_microwatts(),
            static_total: r.static_total.display(),
            worst_case_dynamic_uw: r.worst_case_dynamic.as_microwatts(),
            worst_case_dynamic: r.worst_case_dynamic.display(),
            worst_case_total_uw: r.worst_case_total.as_microwatts(),
            worst_case_total: r.worst_case_total.display(),
        })
        .collect();
    Ok(render(format, &rows, &rows))
}

fn catalog_row(key: &str, d: &RisDescriptor) -> CatalogRow {
    CatalogRow {
        key: key.to_owned(),
        technology: d.technology().to_string(),
        rows: d.cells().rows,
        cols: d.cells().cols,
        cells: d.cell_count(),
        frequency_hz: d.frequency_hz(),
        control_board_power_uw: d.control_board().rated_power.map(PowerMicrowatts::as_microwatts),
        drive_circuit: d.drive_circuit().name.clone(),
        per_circuit_power_uw: d.drive_circuit().rated_power.as_microwatts(),
        worst_case_dynamic_uw: worst_case_dynamic(d).map_or(0, PowerMicrowatts::as_microwatts),
    }
}

fn catalog(action: &CatalogAction, format: OutputFormat) -> Result<String, CliError> {
    match action {
        CatalogAction::List => {
            let rows: Vec<CatalogRow> = entries()
                .iter()
                .map(|e| catalog_row(e.key, &e.descriptor))
                .collect();
            Ok(render(format, &rows, &rows))
        }
        CatalogAction::Show { key } => {
            let entry = builtin_entry(key)?;
            let descriptor_json = descriptor_to_json(&entry.descriptor);
            match format {
                OutputFormat::Json => Ok(to_json(&CatalogShow {
                    key: entry.key,
                    descriptor: serde_json::from_str(&descriptor_json).expect("valid json"),
                    provenance: entry.provenance_notes.lines().collect(),
                })),
                OutputFormat::Csv => Ok(to_csv(&[catalog_row(entry.key, &entry.descriptor)])),
                OutputFormat::Table => Ok(format!(
                    "{descriptor_json}\n{}\n",
                    entry.provenance_notes
                )),
            }
        }
    }
}

/// Executes a parsed command and returns the report text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Estimate(source) => estimate(source, cli.format),
        Command::Simulate { source, states } => simulate(source, states, cli.format),
        Command::Sweep {
            source,
            param,
            values,
        } => run_sweep(source, *param, values, cli.format),
        Command::Compare {
            builtin,
            descriptor,
            control_board_power,
        } => run_compare(builtin, descriptor, *control_board_power, cli.format),
        Command::Catalog { action } => catalog(action, cli.format),
    }
}

/// Parses `args`, runs the command, and writes the report to `out` (or the
/// `--output` file) and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &report)
            .map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(report.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_IO
        }
    }
}

/// Entry point of the `rispower` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
