//! `qpeel`: construct, inspect, peel and verify intersecting families of
//! subspaces.
//!
//! Exit codes: 0 when every verdict holds, 1 when some verdict is false,
//! 2 on usage or input errors, 3 when a budget cap is hit.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qpeel_core::construct::{build, size_report, ConstructionSpec, Kind};
use qpeel_core::peel::{
    check_cross_layer_bound, check_layer_bound, peel, peel_cross, structural_remainder,
};
use qpeel_core::qcalc::{format_rational, gaussian, parse_rational, q_bracket, write_csv, BoundReport};
use qpeel_core::qspace::{enumerate_grassmannian, Ambient};
use qpeel_core::verify::suite::flag;
use qpeel_core::verify::{
    check_relative_diversity, oracle_maximal_families, parse_grid, run_suite, ProofTarget,
    Suite, SuiteOptions,
};
use qpeel_core::{Budget, Error, SubspaceFamily};

#[derive(Parser, Debug)]
#[command(name = "qpeel", version, about = "Intersecting families of subspaces over GF(q)")]
struct Cli {
    /// Override the enumeration cap (also settable through QPEEL_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Override the peeling step cap.
    #[arg(long, global = true)]
    step_cap: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print gaussian(n, k) over GF(q), or [n] with --bracket.
    Gauss {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: i64,
        #[arg(long, required_unless_present = "bracket")]
        k: Option<i64>,
        #[arg(long)]
        bracket: bool,
    },
    /// Dump every k-subspace of V(n, q) as a family file.
    Enum {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a named family (star, g2, g3-delta, k1, hm, line1, plane7, ...).
    Construct {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Center dimension of a star, intersection parameter of k{i}.
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also print the size check against the closed form to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Size, t-intersection and diversity of a family file (stdin by default).
    Check {
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Run the relative diversity bound with this α, written "p/r".
        #[arg(long)]
        alpha: Option<String>,
        /// Run the remainder bound after peeling to dimension s+t.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Peel a family and print the trace as JSON.
    Peel {
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Dimension of the final layer; defaults to t.
        #[arg(long)]
        stop: Option<usize>,
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Peel against a fixed partner family instead.
        #[arg(long, requires = "partner")]
        cross: bool,
        #[arg(long)]
        partner: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// All maximal t-intersecting families at desk scale, as JSON.
    Oracle {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a report suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// "default", or a grid like "q=2,3;k=4..6;d=1..3;i=3..6" (proofs suite).
        #[arg(long, default_value = "default")]
        grid: String,
        /// Restrict the proofs suite to one target.
        #[arg(long)]
        theorem: Option<ProofTarget>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Seed for randomized suites.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random families (peel suite).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Print only the failing reports.
        #[arg(long)]
        failures: bool,
    },
    /// Merge report files (JSON arrays) and summarize them by label.
    Report {
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// What a command decided, apart from its output.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qpeel: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}

fn budget(cli: &Cli) -> Result<Budget, Error> {
    let mut b = Budget::from_env()?;
    if let Some(c) = cli.budget {
        b = b.with_enumeration_cap(c);
    }
    if let Some(c) = cli.step_cap {
        b = b.with_step_cap(c);
    }
    Ok(b)
}

fn read_family(path: Option<&Path>) -> Result<SubspaceFamily, Error> {
    match path {
        Some(p) => SubspaceFamily::read_json(BufReader::new(File::open(p)?)),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            SubspaceFamily::from_json(&text)
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn verdict(reports: &[BoundReport]) -> Outcome {
    if reports.iter().all(|r| r.verdict) {
        Outcome::Ok
    } else {
        Outcome::Failed
    }
}

fn write_reports(reports: &[BoundReport], format: Format, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(reports, &mut *out)?,
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let budget = budget(&cli)?;
    match cli.cmd {
        Cmd::Gauss { q, n, k, bracket } => {
            if !(2..=u64::from(u8::MAX)).contains(&q) {
                return Err(Error::Precondition(format!("q must be at least 2, got {q}")));
            }
            let v = match (bracket, k) {
                (true, _) => q_bracket(n, q),
                (false, Some(k)) => gaussian(n, k, q),
                (false, None) => unreachable!("clap requires --k without --bracket"),
            };
            println!("{v}");
            Ok(Outcome::Ok)
        }
        Cmd::Enum { q, n, k, out } => {
            let a = Ambient::new(n, q)?;
            if k > n {
                return Err(Error::Precondition(format!("need k <= n, got n={n} k={k}")));
            }
            let fam = SubspaceFamily::from_members(a, enumerate_grassmannian(a, k, &budget)?)?;
            fam.write_json(sink(out.as_deref())?)?;
            Ok(Outcome::Ok)
        }
        Cmd::Construct { kind, q, n, k, t, out, report } => {
            let spec = ConstructionSpec { kind, q, n, k, t };
            let fam = build(&spec, &budget)?;
            fam.write_json(sink(out.as_deref())?)?;
            if report {
                let r = size_report(&spec, &fam)?;
                eprintln!("{r}");
                return Ok(verdict(&[r]));
            }
            Ok(Outcome::Ok)
        }
        Cmd::Check { t, input, alpha, s } => {
            let fam = read_family(input.as_deref())?;
            let intersecting = fam.is_t_intersecting(t);
            println!("intersecting={intersecting}");
            println!("size={}", fam.len());
            if !fam.is_empty() {
                println!("diversity={}", fam.diversity()?);
            }
            let mut reports = Vec::new();
            if let Some(a) = alpha {
                let a = parse_rational(&a)
                    .ok_or_else(|| Error::Precondition(format!("alpha must be p/r, got {a:?}")))?;
                reports.push(check_relative_diversity(&fam, t, &a)?);
            }
            if let Some(s) = s {
                reports.push(structural_remainder(&fam, t, s, &budget)?.report);
            }
            for r in &reports {
                println!("{r}");
            }
            Ok(if intersecting { verdict(&reports) } else { Outcome::Failed })
        }
        Cmd::Peel { t, stop, input, cross, partner, out } => {
            let fam = read_family(input.as_deref())?;
            let stop = stop.unwrap_or(t);
            let (trace, reports) = if cross {
                let partner = read_family(partner.as_deref())?;
                let trace = peel_cross(&fam, &partner, t, stop, &budget)?;
                let reports = check_cross_layer_bound(&trace)?;
                (trace, reports)
            } else {
                let trace = peel(&fam, t, stop, &budget)?;
                let mut reports = check_layer_bound(&trace)?;
                let rebuilt = trace.reconstruction().iter().all(|&(_, ok)| ok);
                reports.push(flag("peel/reconstruction", Default::default(), rebuilt));
                (trace, reports)
            };
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", trace.to_json())?;
            w.flush()?;
            for r in &reports {
                eprintln!("{r}");
            }
            Ok(verdict(&reports))
        }
        Cmd::Oracle { q, n, k, t, out } => {
            let r = oracle_maximal_families(q, n, k, t, &budget)?;
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", r.to_json())?;
            w.flush()?;
            eprintln!(
                "families={} max_size={} max_diversity={}",
                r.families.len(),
                r.max_size,
                r.max_diversity
            );
            Ok(Outcome::Ok)
        }
        Cmd::Verify { suite, grid, theorem, format, seed, count, out, failures } => {
            if suite.is_randomized() && seed.is_none() {
                return Err(Error::Precondition(format!("suite {suite} needs --seed")));
            }
            let grid = match grid.trim() {
                "default" => None,
                g => Some(parse_grid(g)?),
            };
            let opts = SuiteOptions { seed, count, target: theorem, grid };
            let reports = run_suite(suite, &opts, &budget)?;
            let failed = reports.iter().filter(|r| !r.verdict).count();
            let shown: Vec<BoundReport> = if failures {
                reports.iter().filter(|r| !r.verdict).cloned().collect()
            } else {
                reports.clone()
            };
            write_reports(&shown, format, &mut *sink(out.as_deref())?)?;
            eprintln!("suite={suite} reports={} false={failed}", reports.len());
            Ok(verdict(&reports))
        }
        Cmd::Report { inputs, format, out } => {
            let mut all: Vec<BoundReport> = Vec::new();
            if inputs.is_empty() {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text)?;
                all.extend(serde_json::from_str::<Vec<BoundReport>>(&text)?);
            }
            for p in &inputs {
                let text = std::fs::read_to_string(p)?;
                all.extend(serde_json::from_str::<Vec<BoundReport>>(&text)?);
            }
            let mut w = sink(out.as_deref())?;
            match format {
                Some(f) => write_reports(&all, f, &mut *w)?,
                None => {
                    write_summary(&all, &mut *w)?;
                    w.flush()?;
                }
            }
            Ok(verdict(&all))
        }
    }
}

/// One line per label: totals, failures, and the first failing context.
fn write_summary(reports: &[BoundReport], w: &mut dyn Write) -> Result<(), Error> {
    let mut by_label: std::collections::BTreeMap<&str, (usize, usize, Option<&BoundReport>)> =
        Default::default();
    for r in reports {
        let e = by_label.entry(r.label.as_str()).or_default();
        e.0 += 1;
        if !r.verdict {
            e.1 += 1;
            e.2.get_or_insert(r);
        }
    }
    for (label, (total, bad, first)) in &by_label {
        write!(w, "{label}: {total} checked, {bad} false")?;
        if let Some(r) = first {
            write!(
                w,
                "; first at ({}): {} {} {}",
                r.context,
                format_rational(&r.lhs),
                r.relation.symbol(),
                format_rational(&r.rhs)
            )?;
        }
        writeln!(w)?;
    }
    let bad = reports.iter().filter(|r| !r.verdict).count();
    writeln!(w, "total: {} checked, {bad} false", reports.len())?;
    Ok(())
}
