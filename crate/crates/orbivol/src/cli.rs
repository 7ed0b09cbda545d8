//! Command-line front end: single J(2n,−2m) orbifolds, the batch reference-table
//! harness and arbitrary PD diagrams.

use crate::complexfn::{mod_distance, mod_reduce, Cx};
use crate::cvolume::{
    compare_with_golden, complex_volume, table1_golden, GoldenRow, OrbifoldInvariants,
};
use crate::diagram::{generate_j_diagram, parse_pd};
use crate::error::{Error, Result};
use crate::jknot::{geometric_lambda, JKnotParams};
use crate::potential::{build_potential, SegmentSolution};
use crate::solver::{
    continue_to_orbifold, solve_complete, solve_orbifold, SeedStrategy, SolverConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

/// Golden-table tolerance on volume and on CS modulo μ.
pub const TABLE_TOL: f64 = 1e-7;
/// Agreement required between the closed-form and solver pipelines.
pub const CROSSCHECK_TOL: f64 = 1e-6;
/// Largest 2n for which `table1 --crosscheck` runs the solver.
pub const CROSSCHECK_MAX_TWO_N: usize = 6;

pub const CSV_HEADER: [&str; 10] = [
    "two_n",
    "two_m",
    "r",
    "lambda_re",
    "lambda_im",
    "w_re",
    "w_im",
    "volume",
    "cs_rep",
    "modulus",
];

#[derive(Debug, Parser)]
#[command(
    name = "orbivol",
    version,
    about = "Complex volumes of alternating knot orbifolds"
)]
pub struct Cli {
    /// Extra CS output: `cs` adds −Re w / (−2π²) read modulo 1/r.
    #[arg(long, value_enum, global = true, default_value = "none")]
    pub normalize: Normalize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Normalize {
    None,
    Cs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form pipeline for one orbifold O(J(2n,−2m), r).
    Jknot(JknotArgs),
    /// Recompute the 79-row table and check it against the embedded values.
    Table1(Table1Args),
    /// Generic solver on a PD-code diagram.
    Diagram(DiagramArgs),
}

#[derive(Debug, Args)]
pub struct JknotArgs {
    /// number of vertical crossings 2n
    #[arg(long)]
    pub n: usize,
    /// number of horizontal crossings 2m
    #[arg(long)]
    pub m: usize,
    /// cone order r ≥ 3
    #[arg(long)]
    pub r: u32,
    /// list every root of the Riley–Mednykh polynomial
    #[arg(long)]
    pub all_roots: bool,
    /// emit JSON instead of a text line
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// write the table here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// also run the generic solver on rows with 2n ≤ 6
    #[arg(long)]
    pub crosscheck: bool,
}

/// Orbifold order, or `inf` for the complete structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl FromStr for Order {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Order::Infinite);
        }
        match s.parse::<u32>() {
            Ok(r) if r >= 3 => Ok(Order::Finite(r)),
            _ => Err(format!("expected an integer ≥ 3 or 'inf', got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedArg {
    Regular,
    Given,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    /// PD-code file, one `X i j k l` line per crossing
    #[arg(long)]
    pub pd: PathBuf,
    /// cone order r ≥ 3, or `inf` for the complete structure
    #[arg(long)]
    pub r: Order,
    /// Newton residual tolerance
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[arg(long, default_value_t = 60)]
    pub max_iter: usize,
    /// continuation steps from t = 0 to 2π/r
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "regular")]
    pub seed_strategy: SeedArg,
    /// JSON segment solution used by `--seed-strategy given`
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// emit JSON instead of a text line
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    ClosedForm,
    Solver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub knot: String,
    pub two_n: Option<usize>,
    pub two_m: Option<usize>,
    /// `None` for the complete structure
    pub r: Option<u32>,
    pub lambda_re: Option<f64>,
    pub lambda_im: Option<f64>,
    pub w_re: f64,
    pub w_im: f64,
    pub volume: f64,
    pub cs_rep: f64,
    pub modulus: f64,
    pub residual: f64,
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs_normalized: Option<f64>,
}

impl ResultRecord {
    pub fn new(
        knot: String,
        crossings: Option<(usize, usize)>,
        inv: &OrbifoldInvariants,
        pipeline: Pipeline,
        normalize: Normalize,
    ) -> Self {
        ResultRecord {
            knot,
            two_n: crossings.map(|c| c.0),
            two_m: crossings.map(|c| c.1),
            r: inv.r,
            lambda_re: inv.lambda.map(|l| l.re),
            lambda_im: inv.lambda.map(|l| l.im),
            w_re: inv.w_raw.re,
            w_im: inv.w_raw.im,
            volume: inv.volume,
            cs_rep: inv.cs_rep,
            modulus: inv.modulus,
            residual: inv.residual,
            pipeline,
            cs_normalized: (normalize == Normalize::Cs).then(|| normalized_cs(inv.w_raw, inv.r)),
        }
    }

    pub fn w(&self) -> Cx {
        Cx::new(self.w_re, self.w_im)
    }

    fn csv_fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or(String::new(), num);
        vec![
            self.two_n.map_or(String::new(), |v| v.to_string()),
            self.two_m.map_or(String::new(), |v| v.to_string()),
            self.r.map_or("inf".into(), |v| v.to_string()),
            opt(self.lambda_re),
            opt(self.lambda_im),
            num(self.w_re),
            num(self.w_im),
            num(self.volume),
            num(self.cs_rep),
            num(self.modulus),
        ]
    }

    fn text(&self) -> String {
        let order = self.r.map_or("inf".into(), |r| r.to_string());
        let lambda = match (self.lambda_re, self.lambda_im) {
            (Some(re), Some(im)) => format!("  Λ = {re:.10} {im:+.10}i"),
            _ => String::new(),
        };
        let normalized = self
            .cs_normalized
            .map_or(String::new(), |c| format!("  cs/(−2π²) = {c:.10}"));
        format!(
            "{} r={}{}  w = {:.10} {:+.10}i  vol = {:.10}  cs = {:.10} (mod {:.10}){}  residual {:.1e}  [{}]",
            self.knot,
            order,
            lambda,
            self.w_re,
            self.w_im,
            self.volume,
            self.cs_rep,
            self.modulus,
            normalized,
            self.residual,
            match self.pipeline {
                Pipeline::ClosedForm => "closed-form",
                Pipeline::Solver => "solver",
            }
        )
    }
}

/// Shortest round-trip decimal, in exponent form for tiny magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// −Re w divided by −2π², read modulo 1/r (modulo ½ for the complete
/// structure, matching the modulus π²).
pub fn normalized_cs(w: Cx, r: Option<u32>) -> f64 {
    let x = -w.re / (-2.0 * PI * PI);
    let m = r.map_or(0.5, |r| 1.0 / r as f64);
    mod_reduce(x, m).unwrap_or(f64::NAN)
}

/// One root of φ with its evaluation, for `jknot --all-roots`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub w_re: Option<f64>,
    pub w_im: Option<f64>,
    pub volume: Option<f64>,
    pub geometric: bool,
    pub error: Option<String>,
}

pub fn j_label(two_n: usize, two_m: usize) -> String {
    format!("J({two_n},-{two_m})")
}

/// Exit code for a failed `jknot` run.
pub fn jknot_exit_code(e: &Error) -> i32 {
    match e {
        Error::NonHyperbolic(_) | Error::Domain(_) => 2,
        _ => 3,
    }
}

/// Exit code for a failed `diagram` run: input problems 2, invalid
/// diagrams 3, numerical failures 4.
pub fn diagram_exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::Domain(_) => 2,
        Error::Structural(_) | Error::NonAlternating(_) | Error::NonHyperbolic(_) => 3,
        _ => 4,
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Jknot(a) => cmd_jknot(a, cli.normalize, out).map_err(|e| (jknot_exit_code(&e), e)),
        Command::Table1(a) => return cmd_table1(a, cli.normalize, out, err),
        Command::Diagram(a) => {
            cmd_diagram(a, cli.normalize, out, err).map_err(|e| (diagram_exit_code(&e), e))
        }
    };
    match result {
        Ok(()) => 0,
        Err((code, e)) => {
            let category = match code {
                2 if matches!(e, Error::NonHyperbolic(_)) => "non-hyperbolic",
                2 => "input error",
                3 if matches!(cli.command, Command::Diagram(_)) => "invalid diagram",
                _ => "numerical failure",
            };
            let _ = writeln!(err, "error ({category}): {e}");
            code
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Precondition(format!("output: {e}"))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize")
}

pub fn cmd_jknot(a: &JknotArgs, normalize: Normalize, out: &mut dyn Write) -> Result<()> {
    let params = JKnotParams::from_crossings(a.n, a.m, a.r)?;
    let choice = geometric_lambda(&params)?;
    if a.all_roots {
        let recs: Vec<CandidateRecord> = choice
            .candidates
            .iter()
            .map(|c| CandidateRecord {
                lambda_re: c.lambda.re,
                lambda_im: c.lambda.im,
                w_re: c.w.map(|w| w.re),
                w_im: c.w.map(|w| w.im),
                volume: c.volume,
                geometric: c.geometric,
                error: c.error.clone(),
            })
            .collect();
        if a.json {
            writeln!(out, "{}", json(&recs)).map_err(io_err)?;
        } else {
            for c in &recs {
                let value = match (c.w_re, c.w_im) {
                    (Some(re), Some(im)) => format!("w = {re:.10} {im:+.10}i"),
                    _ => format!("rejected: {}", c.error.as_deref().unwrap_or("")),
                };
                let mark = if c.geometric { "  <- geometric" } else { "" };
                writeln!(
                    out,
                    "Λ = {:.10} {:+.10}i  {value}{mark}",
                    c.lambda_re, c.lambda_im
                )
                .map_err(io_err)?;
            }
        }
        return Ok(());
    }
    let rec = ResultRecord::new(
        j_label(a.n, a.m),
        Some((a.n, a.m)),
        &choice.invariants,
        Pipeline::ClosedForm,
        normalize,
    );
    let text = if a.json { json(&rec) } else { rec.text() };
    writeln!(out, "{text}").map_err(io_err)
}

/// One computed reference-table row.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub golden: GoldenRow,
    pub record: Option<ResultRecord>,
    pub failure: Option<String>,
    pub solver: Option<std::result::Result<ResultRecord, String>>,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn closed_form_row(g: &GoldenRow, normalize: Normalize) -> (Option<ResultRecord>, Option<String>) {
    let inv = match g.params().and_then(|p| geometric_lambda(&p)) {
        Ok(c) => c.invariants,
        Err(e) => return (None, Some(e.to_string())),
    };
    let d = compare_with_golden(&inv, g);
    let failure = (d.volume > TABLE_TOL || d.cs > TABLE_TOL).then(|| {
        format!(
            "volume off by {:.2e}, cs off by {:.2e} mod μ",
            d.volume, d.cs
        )
    });
    let rec = ResultRecord::new(
        j_label(g.two_n, g.two_m),
        Some((g.two_n, g.two_m)),
        &inv,
        Pipeline::ClosedForm,
        normalize,
    );
    (Some(rec), failure)
}

/// Solver-path records for every golden row with 2n ≤ 6, keyed by row
/// index; the complete structure is solved once per knot.
pub fn solver_rows(
    rows: &[GoldenRow],
    normalize: Normalize,
) -> BTreeMap<usize, std::result::Result<ResultRecord, String>> {
    let cfg = SolverConfig::default();
    let mut knots: Vec<(usize, usize)> = rows
        .iter()
        .filter(|g| g.two_n <= CROSSCHECK_MAX_TWO_N)
        .map(|g| (g.two_n, g.two_m))
        .collect();
    knots.dedup();
    let complete: BTreeMap<(usize, usize), std::result::Result<_, String>> = knots
        .par_iter()
        .map(|&(n2, m2)| {
            let solved = (|| {
                let d = generate_j_diagram(n2 / 2, m2 / 2)?;
                let pf = build_potential(&d);
                let s = solve_complete(&pf, &d, &cfg)?;
                Ok::<_, Error>((pf, s.z))
            })();
            ((n2, m2), solved.map_err(|e| e.to_string()))
        })
        .collect();
    rows.par_iter()
        .enumerate()
        .filter(|(_, g)| g.two_n <= CROSSCHECK_MAX_TWO_N)
        .map(|(i, g)| {
            let rec = match &complete[&(g.two_n, g.two_m)] {
                Err(e) => Err(e.clone()),
                Ok((pf, z)) => continue_to_orbifold(pf, z, g.r, &cfg)
                    .and_then(|s| complex_volume(pf, &s.z, Some(g.r)))
                    .map(|inv| {
                        ResultRecord::new(
                            j_label(g.two_n, g.two_m),
                            Some((g.two_n, g.two_m)),
                            &inv,
                            Pipeline::Solver,
                            normalize,
                        )
                    })
                    .map_err(|e| e.to_string()),
            };
            (i, rec)
        })
        .collect()
}

/// Volume and CS (mod μ) discrepancy between two records of one orbifold.
pub fn record_agreement(a: &ResultRecord, b: &ResultRecord) -> f64 {
    let cs = mod_distance(-a.w_re, -b.w_re, a.modulus);
    (a.volume - b.volume).abs().max(cs)
}

/// Computes every reference-table row (and optionally the solver path).
pub fn table1_rows(crosscheck: bool, normalize: Normalize) -> Vec<TableRow> {
    let golden = table1_golden();
    let mut rows: Vec<TableRow> = golden
        .par_iter()
        .map(|g| {
            let (record, failure) = closed_form_row(g, normalize);
            TableRow {
                golden: *g,
                record,
                failure,
                solver: None,
            }
        })
        .collect();
    if crosscheck {
        for (i, rec) in solver_rows(&golden, normalize) {
            let row = &mut rows[i];
            match (&rec, &row.record) {
                (Ok(s), Some(c)) => {
                    let dev = record_agreement(c, s);
                    if dev > CROSSCHECK_TOL && row.failure.is_none() {
                        row.failure = Some(format!("solver path disagrees by {dev:.2e}"));
                    }
                }
                (Err(e), _) if row.failure.is_none() => {
                    row.failure = Some(format!("solver path failed: {e}"));
                }
                _ => {}
            }
            row.solver = Some(rec);
        }
    }
    rows
}

fn table_csv(rows: &[TableRow], crosscheck: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if crosscheck {
        header.extend(["solver_w_re", "solver_w_im", "solver_agreement"]);
    }
    let csv_err = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut fields = match &row.record {
            Some(r) => r.csv_fields(),
            None => {
                let g = &row.golden;
                let mut f = vec![g.two_n.to_string(), g.two_m.to_string(), g.r.to_string()];
                f.resize(CSV_HEADER.len(), String::new());
                f
            }
        };
        if crosscheck {
            match (&row.solver, &row.record) {
                (Some(Ok(s)), Some(c)) => {
                    fields.extend([num(s.w_re), num(s.w_im), num(record_agreement(c, s))])
                }
                _ => fields.extend([String::new(), String::new(), String::new()]),
            }
        }
        w.write_record(&fields).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    record: &'a ResultRecord,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<&'a ResultRecord>,
}

pub fn cmd_table1(
    a: &Table1Args,
    normalize: Normalize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let rows = table1_rows(a.crosscheck, normalize);
    let body = match a.format {
        Format::Csv => match table_csv(&rows, a.crosscheck) {
            Ok(s) => s,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        },
        Format::Json => {
            let items: Vec<JsonRow> = rows
                .iter()
                .filter_map(|r| {
                    r.record.as_ref().map(|rec| JsonRow {
                        record: rec,
                        pass: r.passed(),
                        solver: r.solver.as_ref().and_then(|s| s.as_ref().ok()),
                    })
                })
                .collect();
            json(&items) + "\n"
        }
    };
    let written = match &a.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => out.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    let failures: Vec<&TableRow> = rows.iter().filter(|r| !r.passed()).collect();
    for f in &failures {
        let g = &f.golden;
        let _ = writeln!(
            err,
            "FAIL {} r={}: {}",
            j_label(g.two_n, g.two_m),
            g.r,
            f.failure.as_deref().unwrap_or("")
        );
    }
    let _ = writeln!(
        err,
        "{}/{} rows pass",
        rows.len() - failures.len(),
        rows.len()
    );
    if failures.is_empty() {
        0
    } else {
        1
    }
}

pub fn cmd_diagram(
    a: &DiagramArgs,
    normalize: Normalize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let text = std::fs::read_to_string(&a.pd)
        .map_err(|e| Error::Io(format!("{}: {e}", a.pd.display())))?;
    let diagram = parse_pd(&text)?;
    let initial = match &a.initial {
        Some(path) => {
            let s = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let sol: SegmentSolution = serde_json::from_str(&s).map_err(|e| Error::Parse {
                line: e.line(),
                msg: format!("initial solution: {e}"),
            })?;
            Some(sol)
        }
        None => None,
    };
    let cfg = SolverConfig {
        tol: a.tol,
        max_iter: a.max_iter,
        continuation_steps: a.steps,
        seed_strategy: match a.seed_strategy {
            SeedArg::Regular => SeedStrategy::Regular,
            SeedArg::Given => SeedStrategy::Given,
        },
        initial,
    };
    let pf = build_potential(&diagram);
    let (solved, r) = match a.r {
        Order::Infinite => (solve_complete(&pf, &diagram, &cfg)?, None),
        Order::Finite(r) => (solve_orbifold(&pf, &diagram, r, &cfg)?, Some(r)),
    };
    let inv = complex_volume(&pf, &solved.z, r)?;
    let knot =
        a.pd.file_stem()
            .map_or("diagram".into(), |s| s.to_string_lossy().into_owned());
    let rec = ResultRecord::new(knot, None, &inv, Pipeline::Solver, normalize);
    let text = if a.json { json(&rec) } else { rec.text() };
    writeln!(out, "{text}").map_err(io_err)?;
    for w in &solved.warnings {
        writeln!(err, "warning: {w}").map_err(io_err)?;
    }
    Ok(())
}
