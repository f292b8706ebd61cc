use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bei_algebra::MonomialOrder;
use bei_harness::report::write_csv;
use bei_harness::suite::parse_m_range;
use bei_harness::{
    cmd_decompose, cmd_oracle, cmd_predict, cmd_suite, cmd_verify, parse_expr, Cache, Family, HarnessError,
    Result, Settings, VerdictReport,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bei", version, about = "Invariants of generalized binomial edge ideals: formulas, oracle and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form invariants with the rules that produced them.
    Predict(Single),
    /// Dimension, depth and regularity from Groebner bases and the minimal free resolution.
    Oracle(Single),
    /// Prediction and oracle side by side, with a verdict per invariant.
    Verify(Single),
    /// Minimal primes P_T over the cut point sets, optionally checked against J.
    Decompose {
        #[command(flatten)]
        single: Single,
        /// Check the intersection identity and the exact-sequence identity at each internal vertex.
        #[arg(long)]
        identity: bool,
    },
    /// Verify every member of a bounded family.
    Suite {
        /// fans[:n=N,w=W,h=H,pure] | fp[:p=P] | paths[:t=T] | complete[:n=N] | chains[:t=T,p=P] | composites | random[:count=C,seed=S,atoms=A]
        family: String,
        /// 3, 2,3 or 2..4
        #[arg(long, default_value = "2..3")]
        m: String,
        #[command(flatten)]
        common: Common,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Args)]
struct Single {
    /// Expression such as `circ(Fp(3)@6, Fp(3)@1)`; `-` reads standard input.
    expr: String,
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Prime characteristic of the coefficient field.
    #[arg(long = "char", default_value_t = 32003)]
    characteristic: u32,
    /// Monomial order for the dimension computation: degrevlex or lex.
    #[arg(long, default_value = "degrevlex")]
    order: MonomialOrder,
    /// Largest m*|V| for Groebner basis work.
    #[arg(long, default_value_t = 24)]
    gb_cap: usize,
    /// Largest m*|V| for the free resolution.
    #[arg(long, default_value_t = 18)]
    res_cap: usize,
    /// Skip the oracle; every verdict is oracle-unavailable.
    #[arg(long)]
    formula_only: bool,
    /// Write the JSON report here (`-` for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV report here (`-` for standard output).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Oracle result cache directory.
    #[arg(long, env = "BEI_CACHE")]
    cache: Option<PathBuf>,
}

impl Common {
    fn settings(&self, m: u32) -> Settings {
        let mut s = Settings::new(m).with_characteristic(self.characteristic);
        s.order = self.order;
        s.caps.gb_vars = self.gb_cap;
        s.caps.res.max_vars = self.res_cap;
        s.formula_only = self.formula_only;
        s
    }

    fn cache(&self) -> Result<Option<Cache>> {
        self.cache.as_ref().map(Cache::open).transpose()
    }
}

fn write_to(path: &Path, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if path.as_os_str() == "-" {
        f(&mut io::stdout().lock())
    } else {
        let mut file = fs::File::create(path)?;
        f(&mut file)
    }
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    if let Some(p) = path {
        write_to(p, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(())
}

fn write_csv_to(path: &Option<PathBuf>, reports: &[VerdictReport]) -> Result<()> {
    if let Some(p) = path {
        write_to(p, |w| write_csv(w, reports))?;
    }
    Ok(())
}

fn read_expr(text: &str) -> Result<(String, bei_core::GraphExpr)> {
    let source = if text == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        text.to_string()
    };
    match parse_expr(&source) {
        Ok(e) => Ok((source, e)),
        Err(d) => {
            eprintln!("{}", d.render(&source));
            Err(HarnessError::Parse(d))
        }
    }
}

fn single_report(report: VerdictReport, common: &Common) -> Result<bool> {
    if common.json.as_deref() != Some(Path::new("-")) && common.csv.as_deref() != Some(Path::new("-")) {
        print!("{}", report.to_text());
    }
    write_json(&common.json, &report)?;
    write_csv_to(&common.csv, std::slice::from_ref(&report))?;
    Ok(report.violations() > 0)
}

/// `Ok(true)` when some check produced a VIOLATION.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Predict(s) => {
            let (_, e) = read_expr(&s.expr)?;
            single_report(cmd_predict(&e, &s.common.settings(s.m))?, &s.common)
        }
        Command::Oracle(s) => {
            let (_, e) = read_expr(&s.expr)?;
            let cache = s.common.cache()?;
            single_report(cmd_oracle(&e, &s.common.settings(s.m), cache.as_ref())?, &s.common)
        }
        Command::Verify(s) => {
            let (_, e) = read_expr(&s.expr)?;
            let cache = s.common.cache()?;
            single_report(cmd_verify(&e, &s.common.settings(s.m), cache.as_ref())?, &s.common)
        }
        Command::Decompose { single: s, identity } => {
            let (_, e) = read_expr(&s.expr)?;
            let report = cmd_decompose(&e, &s.common.settings(s.m), identity)?;
            if s.common.json.as_deref() != Some(Path::new("-")) {
                print!("{}", report.to_text());
            }
            write_json(&s.common.json, &report)?;
            Ok(!report.holds())
        }
        Command::Suite { family, m, common, jobs } => {
            let family: Family = family.parse()?;
            let ms = parse_m_range(&m)?;
            let cache = common.cache()?;
            let report = cmd_suite(&family, &ms, &common.settings(ms[0]), cache.as_ref(), jobs)?;
            if common.json.as_deref() != Some(Path::new("-")) && common.csv.as_deref() != Some(Path::new("-")) {
                print!("{}", report.to_text());
            }
            write_json(&common.json, &report)?;
            write_csv_to(&common.csv, &report.reports)?;
            Ok(report.violations() > 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(HarnessError::Parse(_)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
