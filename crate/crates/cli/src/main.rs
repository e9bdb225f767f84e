use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use antiprim::lab::{self, GridSpec, Outcome, SweepDocument};
use antiprim::{
    coset_size, delta_ladder, dimension_record, dimension_table_within, largest_leaders, leaders_in_range, orbit, CodeParams,
    DefiningSetSpec, DimensionRecord, Error, Status,
};

#[derive(Parser)]
#[command(name = "antiprim", version, about = "Cyclotomic cosets, largest coset leaders and BCH dimensions for n = q^m + 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit of one residue, or the leaders in a range.
    Cosets(CosetsArgs),
    /// The largest coset leaders, or all leaders in a range with their sizes.
    Leaders(LeadersArgs),
    /// The closed-form largest-leader ladder.
    Deltas(DeltasArgs),
    /// Defining set size, dimension and Bose distance of one code.
    Dims(DimsArgs),
    /// Dimension records for a range of designed distances.
    Table(TableArgs),
    /// Run claim checks over a parameter grid.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: u32,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl ParamArgs {
    fn params(&self) -> Result<CodeParams, Usage> {
        CodeParams::new(self.q, self.m).map_err(usage)
    }
}

#[derive(Args)]
struct CosetsArgs {
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    x: Option<u128>,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    range: Option<(u128, u128)>,
}

#[derive(Args)]
struct LeadersArgs {
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long, conflicts_with = "range", default_value_t = 6)]
    top: usize,
    #[arg(long, value_parser = parse_range)]
    range: Option<(u128, u128)>,
}

#[derive(Args)]
struct DeltasArgs {
    #[command(flatten)]
    p: ParamArgs,
    /// Compare every rank against the oracle.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long)]
    delta: u128,
    #[arg(long, default_value_t = 1)]
    b: u8,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    p: ParamArgs,
    /// Inclusive δ range `a..b`; defaults to `2..n`.
    #[arg(long, value_parser = parse_range)]
    delta: Option<(u128, u128)>,
    #[arg(long, default_value_t = 1)]
    b: u8,
    /// Maximum number of rows.
    #[arg(long, default_value_t = 1_000_000)]
    max_rows: u128,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated claim ids.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    claims: Vec<String>,
    /// Every registered claim (the default when --claims is absent).
    #[arg(long)]
    all: bool,
    /// q values (comma-separated); defaults to 3,4,5,7,8,9.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    /// m values (comma-separated); defaults to 2..7.
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    /// Cells with larger n are skipped.
    #[arg(long, env = "ANTIPRIM_MAX_N", default_value_t = lab::DEFAULT_MAX_N)]
    max_n: u128,
    /// Wall-clock guard per claim and cell, in milliseconds.
    #[arg(long, default_value_t = lab::DEFAULT_CELL_TIME_BUDGET_MS)]
    cell_time_ms: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Zero the timing fields in the report.
    #[arg(long)]
    no_timings: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// An error in the invocation rather than in the computation.
struct Usage(String);

fn usage(e: Error) -> Usage {
    Usage(e.to_string())
}

fn parse_range(s: &str) -> Result<(u128, u128), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range like 1..9, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let b = b.trim().trim_start_matches('=').parse().map_err(|e| format!("bad range end: {e}"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

enum Failure {
    Usage(Usage),
    Other(anyhow::Error),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(usage(e)),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.into())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Cosets(a) => cosets(a),
        Command::Leaders(a) => leaders(a),
        Command::Deltas(a) => deltas(a),
        Command::Dims(a) => dims(a),
        Command::Table(a) => table(a),
        Command::Verify(a) => verify(a),
    }
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn print_json<T: Serialize>(v: &T) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).context("serializing output")?;
    writeln!(out)?;
    Ok(ExitCode::SUCCESS)
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) -> CmdResult {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header).context("writing csv")?;
    for r in rows {
        w.write_record(r).context("writing csv")?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

/// Left-aligned columns separated by two spaces.
fn print_table(header: &[&str], rows: &[Vec<String>]) -> CmdResult {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = io::stdout().lock();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn render<T: Serialize>(format: Format, json: &T, header: &[&str], rows: &[Vec<String>]) -> CmdResult {
    match format {
        Format::Json => print_json(json),
        Format::Csv => print_csv(header, rows),
        Format::Table => print_table(header, rows),
    }
}

#[derive(Serialize)]
struct LeaderRow {
    leader: u128,
    size: u32,
}

fn leader_rows(params: &CodeParams, leaders: &[u128]) -> Result<Vec<LeaderRow>, Failure> {
    leaders
        .iter()
        .map(|&l| Ok(LeaderRow { leader: l, size: coset_size(params, l)? }))
        .collect()
}

fn render_leaders(format: Format, rows: &[LeaderRow]) -> CmdResult {
    let table: Vec<Vec<String>> = rows.iter().map(|r| vec![r.leader.to_string(), r.size.to_string()]).collect();
    render(format, &rows, &["leader", "size"], &table)
}

fn cosets(a: CosetsArgs) -> CmdResult {
    let params = a.p.params()?;
    if let Some((lo, hi)) = a.range {
        let leaders = leaders_in_range(&params, lo, hi)?;
        return render_leaders(a.p.format, &leader_rows(&params, &leaders)?);
    }
    let x = a.x.expect("clap enforces --x or --range");
    let c = orbit(&params, x)?;
    let elements = c.elements.clone().unwrap_or_default();
    #[derive(Serialize)]
    struct View<'a> {
        x: u128,
        #[serde(flatten)]
        coset: &'a antiprim::Coset,
    }
    let row = vec![x.to_string(), c.leader.to_string(), c.size.to_string(), join(&elements, " ")];
    render(a.p.format, &View { x, coset: &c }, &["x", "leader", "size", "orbit"], &[row])
}

fn leaders(a: LeadersArgs) -> CmdResult {
    let params = a.p.params()?;
    let leaders = match a.range {
        Some((lo, hi)) => leaders_in_range(&params, lo, hi)?,
        None => largest_leaders(&params, a.top)?,
    };
    render_leaders(a.p.format, &leader_rows(&params, &leaders)?)
}

#[derive(Serialize)]
struct DeltaRow {
    rank: usize,
    value: String,
    status: Status,
    size_claim: Option<u32>,
    claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

fn deltas(a: DeltasArgs) -> CmdResult {
    let params = a.p.params()?;
    let ladder = delta_ladder(&params)?;
    let oracle = if a.verify {
        Some(largest_leaders(&params, ladder.entries.len())?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for e in &ladder.entries {
        // Ranks beyond the nonzero cosets fall back to C_0.
        let o = oracle.as_ref().map(|o| o.get(e.rank - 1).copied().unwrap_or(0));
        let oracle_size = match o {
            Some(0) => Some(1),
            Some(v) => Some(coset_size(&params, v)?),
            None => None,
        };
        rows.push(DeltaRow {
            rank: e.rank,
            value: e.value.to_string(),
            status: e.status,
            size_claim: e.size_claim,
            claim: e.claim.clone(),
            oracle: o,
            oracle_size,
            matches: o.map(|v| v.to_string() == e.value.to_string()),
        });
    }
    let mut header = vec!["rank", "value", "status", "size_claim", "claim"];
    if a.verify {
        header.extend(["oracle", "oracle_size", "match"]);
    }
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let status = match r.status {
                Status::Proved => "proved",
                Status::Conjectured => "conjectured",
            };
            let mut v = vec![
                r.rank.to_string(),
                r.value.clone(),
                status.to_string(),
                opt(r.size_claim.map(|s| s.to_string())),
                r.claim.clone(),
            ];
            if a.verify {
                v.push(opt(r.oracle.map(|s| s.to_string())));
                v.push(opt(r.oracle_size.map(|s| s.to_string())));
                v.push(opt(r.matches.map(|m| if m { "yes".into() } else { "NO".into() })));
            }
            v
        })
        .collect();
    if let Format::Table = a.p.format {
        println!("{} ladder, variant {}", params, ladder.variant);
    }
    let code = render(a.p.format, &rows, &header, &table)?;
    if rows.iter().any(|r| r.matches == Some(false) && r.status == Status::Proved) {
        eprintln!("warning: a proved ladder entry disagrees with the oracle");
        return Ok(ExitCode::FAILURE);
    }
    Ok(code)
}

const CSV_HEADER: [&str; 10] = ["q", "m", "n", "delta", "b", "t_size", "dimension", "bose_distance", "closed_form", "source"];

fn record_row(r: &DimensionRecord) -> Vec<String> {
    vec![
        r.q.to_string(),
        r.m.to_string(),
        r.n.to_string(),
        r.delta.to_string(),
        r.b.to_string(),
        r.t_size.to_string(),
        r.dimension.to_string(),
        r.bose_distance.to_string(),
        r.closed_form_dimension.map(|d| d.to_string()).unwrap_or_default(),
        r.closed_form_source.clone().unwrap_or_default(),
    ]
}

fn spec(params: CodeParams, delta: u128, b: u8) -> Result<DefiningSetSpec, Usage> {
    DefiningSetSpec::new(params, delta, b).map_err(usage)
}

fn dims(a: DimsArgs) -> CmdResult {
    let params = a.p.params()?;
    let rec = dimension_record(&spec(params, a.delta, a.b)?)?;
    match a.p.format {
        Format::Json => print_json(&rec),
        Format::Csv => print_csv(&CSV_HEADER, &[record_row(&rec)]),
        Format::Table => {
            let cf = match (&rec.closed_form_dimension, &rec.closed_form_source) {
                (Some(d), Some(s)) => format!("{d} ({s}){}", if rec.agrees == Some(false) { " MISMATCH" } else { "" }),
                _ => "none".into(),
            };
            let rows = [
                ("code", format!("C(n={}, q={}, δ={}, b={})", rec.n, rec.q, rec.delta, rec.b)),
                ("|T|", rec.t_size.to_string()),
                ("dimension", rec.dimension.to_string()),
                ("bose distance", rec.bose_distance.to_string()),
                ("closed form", cf),
            ];
            let mut out = io::stdout().lock();
            for (k, v) in rows {
                writeln!(out, "{k:<14} {v}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn table(a: TableArgs) -> CmdResult {
    let params = a.p.params()?;
    let n = params.n().ok_or_else(|| Usage(format!("n = {} is too large for direct tables", params.n_big())))?;
    let (lo, hi) = a.delta.unwrap_or((2, n));
    spec(params.clone(), lo, a.b)?;
    spec(params.clone(), hi, a.b)?;
    let records = dimension_table_within(&params, lo..=hi, a.b, a.max_rows)?;
    let rows: Vec<Vec<String>> = records.iter().map(record_row).collect();
    render(a.p.format, &records, &CSV_HEADER, &rows)
}

fn verify(a: VerifyArgs) -> CmdResult {
    let claims: Vec<&lab::Claim> = if a.claims.is_empty() {
        lab::registry().iter().collect()
    } else {
        let mut v = Vec::new();
        for id in &a.claims {
            match lab::claim(id.trim()) {
                Some(c) => v.push(c),
                None => {
                    return Err(Usage(format!(
                        "unknown claim id {id:?}; valid ids: {}",
                        lab::claim_ids().join(", ")
                    ))
                    .into())
                }
            }
        }
        v.sort_by_key(|c| c.id);
        v.dedup_by_key(|c| c.id);
        v
    };
    let defaults = GridSpec::default();
    let grid = GridSpec {
        qs: if a.q.is_empty() { defaults.qs } else { a.q.clone() },
        ms: if a.m.is_empty() { defaults.ms } else { a.m.clone() },
        max_n: a.max_n,
        cell_time_budget_ms: a.cell_time_ms,
    };
    grid.validate().map_err(usage)?;
    let reports = lab::sweep_with_jobs(&grid, &claims, a.jobs)?;
    let mut doc = SweepDocument::new(grid, reports);
    if a.no_timings {
        doc.strip_timings();
    }
    if let Some(path) = &a.out {
        let json = serde_json::to_string_pretty(&doc).context("serializing report")?;
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    match a.format {
        Format::Json if a.out.is_none() => {
            print_json(&doc)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .reports
                .iter()
                .flat_map(|r| {
                    r.cells.iter().map(move |c| {
                        vec![
                            r.claim.clone(),
                            c.q.to_string(),
                            c.m.to_string(),
                            c.n.clone(),
                            serde_json::to_value(c.outcome).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                            c.counterexamples.len().to_string(),
                            c.note.clone().unwrap_or_default(),
                        ]
                    })
                })
                .collect();
            print_csv(&["claim", "q", "m", "n", "outcome", "counterexamples", "note"], &rows)?;
        }
        _ => {
            let header = ["claim", "kind", "pass", "fail", "consistent", "counterexample", "inapplicable", "skipped"];
            let rows: Vec<Vec<String>> = doc
                .reports
                .iter()
                .map(|r| {
                    let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                    vec![
                        r.claim.clone(),
                        kind,
                        r.count(Outcome::Pass).to_string(),
                        r.count(Outcome::Fail).to_string(),
                        r.count(Outcome::Consistent).to_string(),
                        r.count(Outcome::Counterexample).to_string(),
                        r.count(Outcome::Inapplicable).to_string(),
                        r.count(Outcome::SkippedBudget).to_string(),
                    ]
                })
                .collect();
            print_table(&header, &rows)?;
        }
    }
    for r in &doc.reports {
        for c in &r.cells {
            if matches!(c.outcome, Outcome::Fail | Outcome::Counterexample) {
                let what = if c.outcome == Outcome::Fail { "FAIL" } else { "warning: conjecture counterexample" };
                let first = c
                    .counterexamples
                    .first()
                    .map(|x| format!(" witness {} expected {} observed {}", x.witness, x.expected, x.observed))
                    .or_else(|| c.note.as_ref().map(|n| format!(" {n}")))
                    .unwrap_or_default();
                eprintln!("{what}: {} at (q={}, m={}){first}", r.claim, c.q, c.m);
            }
        }
    }
    Ok(if doc.failures() > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
