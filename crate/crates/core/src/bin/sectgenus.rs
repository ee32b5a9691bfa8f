use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sectgenus::chow::{quadric_invariants, veronese_invariants, BaseCurve, ProjBundleModel};
use sectgenus::classify::{
    default_n_range, default_rules, enumerate_quadric_splittings, Candidate, CandidateStatus,
    ExclusionRule,
};
use sectgenus::fixture::{load_fixture, TableId};
use sectgenus::oracle::{oracle_selftest, SelftestReport};
use sectgenus::report::Format;
use sectgenus::verify::{verify, VerifyOptions};
use sectgenus::{Error, Execution};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "sectgenus",
    version,
    about = "Invariants and classification tables for sectional genus three"
)]
struct Cli {
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, sectional genus and s of a member of |2H + bF| (or of the Veronese polarization).
    Invariants {
        #[arg(long)]
        base_genus: u32,
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// Use L = 2H + bF on a rank-3 bundle instead.
        #[arg(long)]
        veronese: bool,
    },
    /// Splitting types of hyperquadric fibrations over P^1 of degree d, with rule traces.
    Enumerate {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// `default` or a comma-separated list of rule names.
        #[arg(long, default_value = "default")]
        rules: String,
        /// Print admitted candidates only.
        #[arg(long)]
        admitted_only: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Human)]
        format: OutFormat,
    },
    /// Recompute a table and compare it with a fixture.
    Verify {
        #[arg(long)]
        table: String,
        #[arg(long)]
        fixture: PathBuf,
        /// Count fixture-flagged discrepancies as failures.
        #[arg(long)]
        ignore_whitelist: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Human)]
        format: OutFormat,
    },
    /// Cross-check the ring and closed forms against a naive multiplier over a parameter grid.
    OracleSelftest {
        #[arg(long, value_enum, default_value_t = OutFormat::Human)]
        format: OutFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Human,
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Human => Format::Human,
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match run(cli.command, exec) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command, exec: Execution) -> Result<u8, Error> {
    match command {
        Command::Invariants {
            base_genus,
            rank,
            c1,
            b,
            veronese,
        } => {
            let bundle = ProjBundleModel::new(BaseCurve::new(base_genus), rank, c1)?;
            let value = if veronese {
                let v = veronese_invariants(&bundle, b)?;
                json!({ "d": v.d, "g": v.g })
            } else {
                let q = quadric_invariants(&bundle, b)?;
                json!({ "d": q.d, "g": q.g, "s": q.s })
            };
            println!("{value}");
            Ok(0)
        }
        Command::Enumerate {
            d,
            n_min,
            n_max,
            rules,
            admitted_only,
            format,
        } => {
            let rules = parse_rules(&rules)?;
            let default = default_n_range(d);
            let range = n_min.unwrap_or(*default.start())..=n_max.unwrap_or(*default.end());
            let mut candidates = enumerate_quadric_splittings(d, range, &rules, exec)?;
            if admitted_only {
                candidates.retain(Candidate::is_admitted);
            }
            print!("{}", render_candidates(&candidates, format));
            Ok(0)
        }
        Command::Verify {
            table,
            fixture,
            ignore_whitelist,
            format,
        } => {
            let table: TableId = table.parse()?;
            let rows = load_fixture(&fixture)?;
            let opts = VerifyOptions {
                honor_whitelist: !ignore_whitelist,
                exec,
            };
            let report = verify(table, &rows, opts)?;
            print!("{}", report.render(format.into()));
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
        Command::OracleSelftest { format } => {
            let report = oracle_selftest(exec)?;
            match format {
                OutFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializes")
                ),
                _ => print!("{}", render_selftest(&report)),
            }
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
    }
}

fn parse_rules(list: &str) -> Result<Vec<ExclusionRule>, Error> {
    if list.trim().eq_ignore_ascii_case("default") {
        return Ok(default_rules());
    }
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

fn trace_fields(c: &Candidate) -> String {
    let Some(x) = c.exclusion() else {
        return String::new();
    };
    let Value::Object(map) = serde_json::to_value(&x.trace).expect("serializes") else {
        return String::new();
    };
    map.iter()
        .filter(|(k, _)| k.as_str() != "kind")
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn status_label(c: &Candidate) -> String {
    match &c.status {
        CandidateStatus::Admitted {
            beyond_paper: true, ..
        } => "admitted (beyond-paper)".into(),
        CandidateStatus::Admitted { .. } => "admitted".into(),
        CandidateStatus::Excluded(x) => format!("excluded by {} ({})", x.rule.name(), x.citation),
    }
}

fn render_candidates(candidates: &[Candidate], format: OutFormat) -> String {
    match format {
        OutFormat::Json => {
            let mut s = serde_json::to_string_pretty(candidates).expect("serializes");
            s.push('\n');
            s
        }
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "splitting",
                "d",
                "e",
                "b",
                "s",
                "status",
                "rule",
                "trace",
            ])
            .expect("in-memory write");
            for c in candidates {
                let (status, rule) = match &c.status {
                    CandidateStatus::Admitted {
                        beyond_paper: true, ..
                    } => ("beyond-paper", ""),
                    CandidateStatus::Admitted { .. } => ("admitted", ""),
                    CandidateStatus::Excluded(x) => ("excluded", x.rule.name()),
                };
                w.write_record([
                    c.n.to_string(),
                    c.splitting.to_string(),
                    c.d.to_string(),
                    c.e.to_string(),
                    c.b.to_string(),
                    c.s.to_string(),
                    status.into(),
                    rule.into(),
                    trace_fields(c),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        OutFormat::Human => {
            let mut out = String::new();
            for c in candidates {
                let _ = write!(
                    out,
                    "n={} {:<22} s={:<4} {}",
                    c.n,
                    c.splitting.to_string(),
                    c.s,
                    status_label(c)
                );
                let fields = trace_fields(c);
                if !fields.is_empty() {
                    let _ = write!(out, ": {fields}");
                }
                out.push('\n');
            }
            let admitted = candidates.iter().filter(|c| c.is_admitted()).count();
            let _ = writeln!(
                out,
                "{} candidates, {} admitted",
                candidates.len(),
                admitted
            );
            out
        }
    }
}

fn render_selftest(r: &SelftestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "grid points: {}  comparisons: {}  mismatches: {}  max deviation: {}",
        r.grid_points,
        r.comparisons,
        r.mismatches.len(),
        r.max_deviation
    );
    for m in r.mismatches.iter().take(10) {
        let _ = writeln!(
            out,
            "  mismatch {} at g(C)={} rank={} e={} b={}: closed {} ring {} oracle {}",
            m.quantity,
            m.point.base_genus,
            m.point.rank,
            m.point.e,
            m.point.b,
            m.closed_form,
            m.ring,
            m.oracle
        );
    }
    let _ = writeln!(
        out,
        "identity (n-1)d + s + 4n g(C) = 8n: holds at {}/{} grid points with g = 3",
        r.identity_points - r.identity_failures.len(),
        r.identity_points
    );
    let p = &r.printed_identity_probe;
    let _ = writeln!(
        out,
        "printed form (n+1)d + s + 4n g(C) = 8n at (n, d, g(C)) = ({}, {}, {}): s = {}, lhs = {}, rhs = {} -> {}",
        p.n,
        p.d,
        p.base_genus,
        p.s,
        p.lhs,
        p.rhs,
        if p.holds { "holds" } else { "fails (counterexample)" }
    );
    let _ = writeln!(out, "status: {}", if r.passed() { "PASS" } else { "FAIL" });
    out
}
