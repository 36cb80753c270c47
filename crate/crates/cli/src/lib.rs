// SPDX-License-Identifier: Apache-2.0

//! Command-line front end over `polya-core`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polya_core::bounds::{all_threshold_reports, ihara_lower_bound, mw_lower_bound, BoundReport};
use polya_core::classify::{
    self, verify_table, ReferenceTables, SweepRecord, TableDiff, TableId,
};
use polya_core::classno::DEFAULT_MEMORY_BUDGET;
use polya_core::polya::invariants;
use polya_core::rdtype::best_witness;
use polya_core::{Error, QuadField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_DIFF: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "polya", version, about = "Pólya groups of quadratic fields")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads for sweeps.
    #[arg(long, env = "POLYA_WORKERS", value_parser = parse_workers, global = true)]
    workers: Option<usize>,
    /// Memory cap in bytes for the imaginary class-number table.
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_MEMORY_BUDGET, global = true)]
    mem_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class, Pólya and genus data of Q(sqrt(D)).
    Field {
        #[arg(allow_negative_numbers = true)]
        d: i64,
    },
    /// Classification sweeps.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Class-number lower bounds and discriminant cutoffs.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Recompute reference tables and report differences.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Imaginary fields with d_K <= max and a given Pólya index.
    Imaginary {
        #[arg(long, value_parser = parse_count)]
        max: u64,
        #[arg(long, value_parser = parse_count)]
        index: u64,
    },
    /// Real fields of extended R-D type with D <= max.
    Rd {
        #[arg(long, value_parser = parse_count)]
        max: u64,
        #[arg(long, value_enum)]
        mode: RdMode,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RdMode {
    /// #Po = h.
    Polya1,
    /// g = h and g+ != h+.
    GenusEqClass,
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Solve every cutoff curve and compare with the published cutoffs.
    Thresholds,
    /// Evaluate one lower bound.
    Eval {
        #[arg(long, value_enum)]
        which: Bound,
        /// Absolute discriminant d_K.
        #[arg(long, value_parser = parse_count)]
        d: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bound {
    Ihara,
    Mw,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_table)]
    table: TableChoice,
    /// Reference CSV replacing the built-in tables.
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
enum TableChoice {
    One(TableId),
    All,
}

fn parse_table(s: &str) -> Result<TableChoice, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(TableChoice::All);
    }
    s.parse().map(TableChoice::One).map_err(|e: Error| e.to_string())
}

/// Positive integer, also written as `1e6` or `2.5e5`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return if n > 0 { Ok(n) } else { Err("must be positive".into()) };
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(x >= 1.0 && x <= 9.007_199_254_740_992e15 && x.fract() == 0.0) {
        return Err(format!("not a positive integer below 2^53: {s}"));
    }
    Ok(x as u64)
}

fn parse_workers(s: &str) -> Result<usize, String> {
    let n = parse_count(s)?;
    usize::try_from(n).map_err(|e| e.to_string())
}

enum Failure {
    Domain(Error),
    Diff,
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parse `args` (program name first) and run the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_DOMAIN;
        }
    };
    match pool.install(|| dispatch(&cli, &mut *out, &mut *err)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Diff) => EXIT_DIFF,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Field { d } => field(*d, cli.format, out),
        Command::Sweep(SweepCommand::Imaginary { max, index }) => {
            let records = classify::sweep_imaginary_index(*max, *index, cli.mem_budget)?;
            writeln!(err, "{} imaginary fields with d_K <= {max} and index {index}", records.len())?;
            emit_records(&records, cli.format, out)
        }
        Command::Sweep(SweepCommand::Rd { max, mode }) => {
            let records = match mode {
                RdMode::Polya1 => classify::sweep_rd_polya_index1(*max)?,
                RdMode::GenusEqClass => classify::sweep_rd_genus_eq_class(*max)?,
            };
            writeln!(err, "{} extended R-D fields with D <= {max}", records.len())?;
            emit_records(&records, cli.format, out)
        }
        Command::Bounds(BoundsCommand::Thresholds) => emit_reports(&all_threshold_reports()?, cli.format, out),
        Command::Bounds(BoundsCommand::Eval { which, d }) => {
            let value = match which {
                Bound::Ihara => ihara_lower_bound(*d as f64)?,
                Bound::Mw => mw_lower_bound(&field_of_disc(*d)?)?,
            };
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::json!({ "d_K": d, "bound": value }))?,
                Format::Csv => writeln!(out, "d_K,bound\n{d},{value}")?,
                Format::Table => writeln!(out, "{value}")?,
            }
            Ok(())
        }
        Command::Verify(args) => verify(args, cli.format, out, err),
    }
}

/// The real field with `|disc| = d_k`.
fn field_of_disc(d_k: u64) -> Result<QuadField, Error> {
    let d = match d_k % 4 {
        1 => d_k,
        0 => d_k / 4,
        _ => return Err(Error::Domain(format!("{d_k} is not a fundamental discriminant"))),
    };
    let f = QuadField::new(d as i64)?;
    if f.abs_disc() != d_k {
        return Err(Error::Domain(format!("{d_k} is not a fundamental discriminant")));
    }
    Ok(f)
}

fn field(d: i64, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let f = QuadField::new(d)?;
    let inv = invariants(&f)?;
    let witness = if f.is_real() { best_witness(d as u64) } else { None };
    let record = SweepRecord::new(&inv, witness.as_ref());
    match format {
        Format::Csv => classify::write_csv(&[record], out)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&record)?)?,
        Format::Table => {
            let kind = match witness {
                Some(w) => format!("{} (ell = {}, r = {})", w.kind, w.ell, w.r),
                None if f.is_real() => "none".into(),
                None => "-".into(),
            };
            let norm = inv.unit_norm.map_or("-".into(), |n| n.to_string());
            let rows = [
                ("field", f.to_string()),
                ("disc", f.disc().to_string()),
                ("ramified", format!("{:?}", f.ramified_primes())),
                ("h", inv.h.to_string()),
                ("h_plus", inv.h_plus.to_string()),
                ("unit norm", norm),
                ("#Po", inv.polya_order.to_string()),
                ("g", inv.g.to_string()),
                ("g_plus", inv.g_plus.to_string()),
                ("Polya index", inv.polya_index.to_string()),
                ("genus index", inv.genus_index.to_string()),
                ("R-D type", kind),
            ];
            for (k, v) in rows {
                writeln!(out, "{k:<12} {v}")?;
            }
        }
    }
    Ok(())
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn emit_records(records: &[SweepRecord], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Csv => classify::write_csv(records, out)?,
        Format::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        r.d_k.to_string(),
                        r.h.to_string(),
                        r.h_plus.to_string(),
                        r.polya.to_string(),
                        r.g.to_string(),
                        r.g_plus.to_string(),
                        cell(r.norm),
                        r.index.to_string(),
                        cell(r.kind),
                        cell(r.ell),
                        cell(r.r),
                    ]
                })
                .collect();
            write_table(&classify::CSV_HEADER, &rows, 0, out)?;
        }
    }
    Ok(())
}

/// Columns before `left` are left-aligned, the rest right-aligned.
fn write_table(header: &[&str], rows: &[Vec<String>], left: usize, out: &mut dyn Write) -> std::io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i < left { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        padded.join("  ").trim_end().to_owned()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn emit_reports(reports: &[BoundReport], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Table => {
            let header = ["case", "solved", "f(solved)", "published", "f(published)", "gap", "holds"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.case_label.clone(),
                        format!("{:.6e}", r.threshold),
                        format!("{:.7}", r.f_at_threshold),
                        format!("{:.3e}", r.published_threshold),
                        format!("{:.7}", r.f_at_published),
                        format!("{:+.3}%", 100.0 * r.relative_gap),
                        r.holds_beyond_published.to_string(),
                    ]
                })
                .collect();
            write_table(&header, &rows, 1, out)?;
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let reference = match &args.data {
        Some(path) => ReferenceTables::from_path(path)?,
        None => ReferenceTables::embedded()?,
    };
    let tables = match args.table {
        TableChoice::One(t) => vec![t],
        TableChoice::All => TableId::ALL.to_vec(),
    };
    let mut clean = true;
    for t in tables {
        writeln!(err, "verifying {t} ...")?;
        let diff = verify_table(t, &reference)?;
        clean &= diff.is_empty();
        emit_diff(&diff, format, out)?;
    }
    if clean {
        Ok(())
    } else {
        Err(Failure::Diff)
    }
}

fn emit_diff(diff: &TableDiff, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string(diff)?)?;
        return Ok(());
    }
    let status = if diff.is_empty() { "ok" } else { "DIFF" };
    if format == Format::Csv {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            diff.table,
            status,
            diff.rows,
            diff.missing.len(),
            diff.extra.len(),
            diff.mismatched.len()
        )?;
        return Ok(());
    }
    writeln!(out, "{}: {status} ({} reference rows, sweep limit {})", diff.table, diff.rows, diff.limit)?;
    if !diff.missing.is_empty() {
        writeln!(out, "  missing from sweep: {:?}", diff.missing)?;
    }
    if !diff.extra.is_empty() {
        writeln!(out, "  not in reference: {:?}", diff.extra)?;
    }
    for m in &diff.mismatched {
        writeln!(out, "  D = {}: expected {}, computed {}", m.d, m.expected, m.actual)?;
    }
    Ok(())
}
