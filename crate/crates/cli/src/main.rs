use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pga_core::closure::{orbitals, two_closure};
use pga_core::corpus::{self, validate, CorpusEntry};
use pga_core::fixity::{self, ElementCensus};
use pga_core::report::{write_report, CheckId, Status};
use pga_core::{analyze, run_all, Caps, Error, GroupAnalysis};

const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "pga", version, about = "Permutation group analysis and fixity checks for elusive groups")]
struct Cli {
    #[command(flatten)]
    caps: CapFlags,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the resource caps. `PGA_CAPS=key=value,...` sets defaults; flags win.
#[derive(Args)]
struct CapFlags {
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    enumeration_cap: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    lattice_cap: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    closure_degree_cap: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full analysis of one group file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the checks over every .grp file in a directory.
    Verify {
        dir: PathBuf,
        /// Comma-separated check ids, or `all`.
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Write the line-delimited report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 3 when any result is skipped.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute the 2-closure of a group.
    TwoClosure {
        file: PathBuf,
        /// Write the closure generators as a .grp file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compute fixity, witness and elusiveness.
    Fixity { file: PathBuf },
    /// Write a built-in family member as a .grp file.
    Gen {
        family: String,
        params: Vec<u64>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if root_cause(&e).is_cap() { EXIT_CAP } else { EXIT_INPUT };
        Failure { code, msg: e.to_string() }
    }
}

fn root_cause(e: &Error) -> &Error {
    match e {
        Error::InFile { source, .. } | Error::AtLine { source, .. } => root_cause(source),
        other => other,
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.into() }
}

fn apply_caps_env(caps: &mut Caps, text: &str) -> Result<(), Failure> {
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) =
            item.split_once('=').ok_or_else(|| input(format!("PGA_CAPS: expected key=value, got `{item}`")))?;
        let value: u64 = value
            .trim()
            .parse()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| input(format!("PGA_CAPS: `{key}` needs a positive integer")))?;
        match key.trim() {
            "enumeration_cap" => caps.enumeration_cap = value,
            "lattice_cap" => caps.lattice_cap = value as usize,
            "closure_degree_cap" => caps.closure_degree_cap = value as usize,
            other => return Err(input(format!("PGA_CAPS: unknown cap `{other}`"))),
        }
    }
    Ok(())
}

fn resolve_caps(flags: &CapFlags) -> Result<Caps, Failure> {
    let mut caps = Caps::default();
    if let Ok(text) = std::env::var("PGA_CAPS") {
        apply_caps_env(&mut caps, &text)?;
    }
    if let Some(v) = flags.enumeration_cap {
        caps.enumeration_cap = v;
    }
    if let Some(v) = flags.lattice_cap {
        caps.lattice_cap = v as usize;
    }
    if let Some(v) = flags.closure_degree_cap {
        caps.closure_degree_cap = v as usize;
    }
    Ok(caps)
}

fn load_file(path: &Path, caps: &Caps) -> Result<CorpusEntry, Failure> {
    let in_file = |e: Error| Error::InFile { path: path.to_path_buf(), source: Box::new(e) };
    let text = std::fs::read_to_string(path).map_err(|e| in_file(e.into()))?;
    let mut entry = corpus::parse_group_file(&text).map_err(in_file)?;
    entry.source = path.display().to_string();
    validate(&entry, caps).map_err(in_file)?;
    Ok(entry)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn or_absent<T: ToString>(a: &GroupAnalysis, field: &str, v: Option<T>) -> String {
    v.map_or_else(|| format!("skipped ({})", a.reason(field)), |v| v.to_string())
}

fn print_analysis(a: &GroupAnalysis) {
    println!("name: {}", a.name());
    println!("degree: {} = {}", a.degree(), a.degree_factored);
    println!("order: {} = {}", a.order_factored.value(), a.order_factored);
    println!("stabilizer order: {}", a.stabilizer_order.value());
    println!("transitive: {}", a.transitive);
    match &a.fixity {
        Some(f) => println!("fixity: {} (witness {} fixing {{{}}})", f.fixity, f.witness, join(&f.witness_fixed_set)),
        None => println!("fixity: skipped ({})", a.reason("fixity")),
    }
    println!("elusive: {}", or_absent(a, "elusive", a.elusive));
    println!("2-closed: {}", or_absent(a, "two_closed", a.two_closed));
    println!("solvable: {}", or_absent(a, "solvable", a.solvable));
    let orders = a.normal_lattice.as_ref().map(|l| join(l.iter().map(|n| n.order.value())));
    println!("normal subgroup orders: {}", or_absent(a, "normal_lattice", orders));
    match &a.prime_profile {
        Some(p) => {
            println!("prime fix profile:");
            for q in p.by_prime.keys() {
                println!(
                    "  p={q}: p-elements fix {{{}}}; order-p elements fix {{{}}}",
                    join(p.prime_power_counts(*q)),
                    join(p.prime_order_counts(*q))
                );
            }
        }
        None => println!("prime fix profile: skipped ({})", a.reason("prime_profile")),
    }
}

fn cmd_analyze(file: &Path, format: Format, caps: &Caps) -> Result<u8, Failure> {
    let entry = load_file(file, caps)?;
    let a = analyze(&entry, caps)?;
    match format {
        Format::Text => print_analysis(&a),
        Format::Records => println!("{}", a.to_json()),
    }
    Ok(if a.absent.is_empty() { 0 } else { EXIT_CAP })
}

fn print_summary(report: &pga_core::Report) {
    let summary = report.summary();
    println!("{:<8} {:>9} {:>8} {:>9} {:>8}", "check", "verified", "vacuous", "violated", "skipped");
    for (id, c) in &summary {
        println!("{:<8} {:>9} {:>8} {:>9} {:>8}", id.as_str(), c.verified, c.vacuous, c.violated, c.skipped);
    }
    let groups: std::collections::BTreeSet<&str> = report.entries.iter().map(|e| e.group.as_str()).collect();
    println!(
        "{} groups, {} results: {} verified, {} vacuous, {} violated, {} skipped",
        groups.len(),
        report.entries.len(),
        report.total(Status::Verified),
        report.total(Status::Vacuous),
        report.total(Status::Violated),
        report.total(Status::Skipped)
    );
    for e in report.entries.iter().filter(|e| e.status == Status::Violated) {
        let w = e.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        println!("VIOLATED {} {}: {}", e.group, e.check, w);
    }
}

fn cmd_verify(
    dir: &Path,
    check: &str,
    jobs: Option<u64>,
    out: Option<&Path>,
    strict: bool,
    format: Format,
    caps: &Caps,
) -> Result<u8, Failure> {
    let selection = CheckId::parse_list(check)?;
    let entries = corpus::load_corpus(dir, caps).map_err(|e| Failure { code: EXIT_INPUT, msg: e.to_string() })?;
    if entries.is_empty() {
        eprintln!("warning: no .grp files in {}", dir.display());
    }
    let jobs = jobs.map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), |j| j as usize);
    let report = run_all(&entries, &selection, jobs, caps)?;
    if let Some(path) = out {
        write_report(&report, path)?;
    }
    match format {
        Format::Text => print_summary(&report),
        Format::Records if out.is_none() => print!("{}", report.to_lines()),
        Format::Records => {}
    }
    Ok(if report.total(Status::Violated) > 0 {
        EXIT_VIOLATED
    } else if strict && report.total(Status::Skipped) > 0 {
        EXIT_CAP
    } else {
        0
    })
}

fn cmd_two_closure(file: &Path, emit: Option<&Path>, caps: &Caps) -> Result<u8, Failure> {
    let entry = load_file(file, caps)?;
    let g = &entry.group;
    let closure = two_closure(g, caps.closure_degree_cap)?;
    let closed = closure.is_subgroup_of(g)?;
    println!("group order: {}", g.order()?);
    println!("closure order: {}", closure.order()?);
    println!("rank: {}", orbitals(g).rank());
    println!("is_2_closed: {closed}");
    if let Some(path) = emit {
        let out = CorpusEntry::new(format!("{}_closure", entry.name), "two-closure", closure);
        std::fs::write(path, corpus::serialize(&out)).map_err(|e| Failure::from(Error::from(e)))?;
    }
    Ok(0)
}

fn cmd_fixity(file: &Path, caps: &Caps) -> Result<u8, Failure> {
    let entry = load_file(file, caps)?;
    let g = &entry.group;
    let census = ElementCensus::scan(g, caps.enumeration_cap)?;
    let f = census.fixity.as_ref().ok_or(Error::TrivialGroup)?;
    println!("fixity: {}", f.fixity);
    println!("witness: {}", f.witness);
    println!("witness fixed set: {{{}}}", join(&f.witness_fixed_set));
    if g.is_transitive() {
        println!("elusive: {}", census.is_elusive());
        println!("regular: {}", fixity::is_regular(g)?);
        println!("frobenius: {}", !fixity::is_regular(g)? && f.fixity == 1);
    } else {
        println!("transitive: false");
    }
    Ok(0)
}

fn cmd_gen(family: &str, params: &[u64], out: Option<&Path>) -> Result<u8, Failure> {
    let entry = corpus::builtin_family(family, params)?;
    let text = corpus::serialize(&entry);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::from(Error::from(e)))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let caps = resolve_caps(&cli.caps)?;
    match &cli.command {
        Command::Analyze { file, format } => cmd_analyze(file, *format, &caps),
        Command::Verify { dir, check, jobs, out, strict, format } => {
            cmd_verify(dir, check, *jobs, out.as_deref(), *strict, *format, &caps)
        }
        Command::TwoClosure { file, emit } => cmd_two_closure(file, emit.as_deref(), &caps),
        Command::Fixity { file } => cmd_fixity(file, &caps),
        Command::Gen { family, params, out } => cmd_gen(family, params, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
