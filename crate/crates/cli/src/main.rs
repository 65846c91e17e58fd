use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use redei8::forms::parse_form;
use redei8::report::{build_report, render_table};
use redei8::scan::{run_scan, write_jsonl, write_summary, ScanOptions};
use redei8::{max_abs_delta, parse_primes};
use redei8_core::quadform::{nullity_set, predicted_nullities};
use redei8_core::redei::validate_field_with_bound;

const EXIT_INCONSISTENT: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "redei8", version, about = "2-, 4- and 8-ranks of class groups of Q(sqrt(-p1...pt))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report for one field, given its primes p1,...,pt (pt = 3 mod 4 last).
    Field {
        primes: String,
        /// Cross-check against the binary quadratic form class group.
        #[arg(long)]
        oracle: bool,
        /// Print one JSON object instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Scan every valid field with |delta| <= N.
    Scan {
        #[arg(long = "max-abs-delta", value_name = "N")]
        max_abs_delta: u64,
        /// Number of primes t, or "all".
        #[arg(long, default_value = "all")]
        t: String,
        #[arg(long)]
        oracle: bool,
        /// JSON-lines output file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Classify a quadratic form over GF(2), e.g. "X+O1" or "01;00".
    ClassifyForm { form: String },
    /// Print S(rho, r).
    NullitySet {
        rho: usize,
        r: usize,
        /// The form is X (r = 2).
        #[arg(long)]
        x: bool,
    },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn format_set<'a>(items: impl IntoIterator<Item = &'a usize>) -> String {
    let v: Vec<String> = items.into_iter().map(usize::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn cmd_field(primes: &str, oracle: bool, json: bool) -> ExitCode {
    let bound = match max_abs_delta() {
        Ok(b) => b,
        Err(e) => return usage_error(e),
    };
    let field = match parse_primes(primes).and_then(|p| validate_field_with_bound(&p, bound).map_err(|e| e.to_string()))
    {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let report = match build_report(&field, oracle) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INCONSISTENT);
        }
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        print!("{}", render_table(&field, &report));
    }
    if report.consistent {
        ExitCode::SUCCESS
    } else {
        eprintln!("inconsistent field {:?}", report.primes);
        ExitCode::from(EXIT_INCONSISTENT)
    }
}

fn cmd_scan(max: u64, t: &str, oracle: bool, out: Option<PathBuf>, jobs: usize) -> ExitCode {
    let bound = match max_abs_delta() {
        Ok(b) => b,
        Err(e) => return usage_error(e),
    };
    if max > bound {
        return usage_error(format!(
            "--max-abs-delta {max} exceeds the bound {bound} (set REDEI8_MAX_DELTA to raise it)"
        ));
    }
    let t = match t {
        "all" => None,
        other => match other.parse::<usize>() {
            Ok(v) if v >= 1 => Some(v),
            _ => return usage_error(format!("--t expects a positive integer or \"all\", got {other:?}")),
        },
    };
    let opts = ScanOptions { max_abs_delta: max, t, oracle, jobs };
    let outcome = match run_scan(&opts) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    if let Some(path) = out {
        let written = File::create(&path).and_then(|f| write_jsonl(&outcome.records, BufWriter::new(f)));
        if let Err(e) = written {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_INCONSISTENT);
        }
    }
    if let Err(e) = write_summary(&outcome, io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INCONSISTENT);
    }
    if outcome.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCONSISTENT)
    }
}

fn cmd_classify(spec: &str) -> ExitCode {
    let q = match parse_form(spec) {
        Ok(q) => q,
        Err(e) => return usage_error(e),
    };
    let c = q.classify();
    println!("form        {q:?}");
    println!("n           {}", c.n);
    println!("type        {}", c.form_type);
    println!("rank        {}", c.rank);
    println!("defect      {}", c.defect);
    println!("k           {}", c.k);
    println!("arf         {}", c.arf.map_or("undefined".to_string(), |a| a.to_string()));
    println!("rho         {}", c.rho);
    println!("zero_count  {}", c.zero_count);
    println!("nullities   {}", format_set(&predicted_nullities(&q)));
    ExitCode::SUCCESS
}

fn cmd_nullity_set(rho: usize, r: usize, x: bool) -> ExitCode {
    if x && (r != 2 || rho != 1) {
        return usage_error("--x requires rho = 1 and r = 2");
    }
    match nullity_set(rho, r, x) {
        Ok(s) => {
            println!("{}", format_set(&s));
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Field { primes, oracle, json } => cmd_field(&primes, oracle, json),
        Command::Scan { max_abs_delta, t, oracle, out, jobs } => cmd_scan(max_abs_delta, &t, oracle, out, jobs),
        Command::ClassifyForm { form } => cmd_classify(&form),
        Command::NullitySet { rho, r, x } => cmd_nullity_set(rho, r, x),
    }
}
