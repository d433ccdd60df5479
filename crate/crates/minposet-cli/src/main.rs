//! Command-line front end: construct the extremal posets, verify
//! automorphism groups, audit generator cycle types, enumerate small
//! posets, and re-run the exhaustive lemma checks.
//!
//! Results go to standard output (JSON by default), progress to standard
//! error. Exit codes: 0 when the command succeeds and any requested check
//! passes, 1 when a check fails, 2 on invalid input or parameters.

use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use minposet::aut::{find_generator, group_order};
use minposet::constructions::{
    beta, circulant_two_level, frucht_poset, minimal_poset, prime_power_poset, z12_poset,
    CIRCULANT_SHIFTS,
};
use minposet::error::Error;
use minposet::io::{poset_to_dot, poset_to_json, read_poset};
use minposet::oracle::{
    cyclic_order_of, survey, verify_lemma_constraints_exhaustive, verify_lemma_two_orbits,
    verify_lemma_z4, Enumerator, DEFAULT_ENUMERATION_LIMIT,
};
use minposet::perm::CycleType;
use minposet::weights::audit_generator;

/// Environment variable overriding the default enumeration limit when no
/// `--limit` flag is given.
const LIMIT_VAR: &str = "MINPOSET_ENUMERATION_LIMIT";

#[derive(Parser)]
#[command(name = "minposet", version, about = "Posets with prescribed cyclic automorphism groups")]
struct Cli {
    /// Output format; `dot` applies to `construct` only
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel subcommands (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Build a poset with a prescribed cyclic automorphism group
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check a poset read as JSON from stdin for a cyclic group of the given order
    Verify {
        /// The expected automorphism group order
        #[arg(long)]
        order: u64,
    },
    /// Print the minimum point count realizing the cyclic group of order n
    Beta { n: u64 },
    /// Audit a generator cycle type against the weight inequalities
    Audit {
        /// Comma-separated cycle lengths, such as 6,6,4,4
        cycle_type: String,
        /// The group order the cycle type should generate
        #[arg(long)]
        n: u64,
    },
    /// Enumerate the isomorphism classes of posets on n points
    Enumerate {
        n: usize,
        /// Print the class count alone
        #[arg(long)]
        count_only: bool,
        /// Directory holding cached enumeration levels
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Highest point count the enumerator may build
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Re-run the exhaustive lemma verifications
    VerifyLemmas {
        #[arg(value_enum, default_value_t = LemmaSelection::All)]
        which: LemmaSelection,
        /// Point-count cap for the constraint sweep
        #[arg(long)]
        limit: Option<usize>,
        /// Directory holding cached enumeration levels
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Smallest point count admitting a cyclic automorphism group of order m
    MinPoints {
        m: u64,
        /// Highest point count to search
        #[arg(long)]
        limit: Option<usize>,
        /// Directory holding cached enumeration levels
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The smallest poset whose automorphism group is cyclic of order n
    Minimal { n: u64 },
    /// The block for one prime power: p then r
    PrimePower { p: u64, r: u32 },
    /// The three-level fence on 3n points
    Frucht { n: u64 },
    /// The two-level circulant on 2n points
    Circulant {
        n: u64,
        /// Comma-separated shift set; defaults to 0,1,2,4
        shifts: Option<String>,
    },
    /// The fused 20-point block of order 12
    Z12,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaSelection {
    All,
    TwoOrbits,
    Z4,
    Constraints,
}

fn main() -> ExitCode {
    // Die quietly when the reader closes the pipe early (head, broken
    // downstream command) instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Construct { kind } => cmd_construct(kind, cli.format),
        Command::Verify { order } => cmd_verify(order, cli.format),
        Command::Beta { n } => cmd_beta(n, cli.format),
        Command::Audit { cycle_type, n } => cmd_audit(&cycle_type, n, cli.format),
        Command::Enumerate { n, count_only, cache, limit } => {
            cmd_enumerate(n, count_only, cache, limit, cli.format)
        }
        Command::VerifyLemmas { which, limit, cache } => {
            cmd_verify_lemmas(which, limit, cache, cli.format)
        }
        Command::MinPoints { m, limit, cache } => cmd_min_points(m, limit, cache, cli.format),
    }
}

fn cmd_construct(kind: ConstructKind, format: Format) -> Result<ExitCode, Error> {
    let poset = match kind {
        ConstructKind::Minimal { n } => minimal_poset(n)?,
        ConstructKind::PrimePower { p, r } => prime_power_poset(p, r)?,
        ConstructKind::Frucht { n } => frucht_poset(n)?,
        ConstructKind::Circulant { n, shifts } => {
            let shifts = match shifts {
                Some(text) => parse_shifts(&text)?,
                None => CIRCULANT_SHIFTS.to_vec(),
            };
            circulant_two_level(n, &shifts)?
        }
        ConstructKind::Z12 => z12_poset(),
    };
    match format {
        Format::Json => println!("{}", poset_to_json(&poset)),
        Format::Dot => print!("{}", poset_to_dot(&poset)),
        Format::Table => {
            println!("points: {}", poset.n());
            for (a, b) in poset.cover_edges() {
                println!("{} < {}", poset.point_name(a), poset.point_name(b));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_shifts(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad shift {part:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct VerifyReport {
    points: usize,
    /// Full group order; a string because it can exceed every JSON number.
    group_order: String,
    cyclic_order: Option<u64>,
    expected_order: u64,
    verified: bool,
    generator_cycle_type: Option<String>,
}

fn cmd_verify(expected: u64, format: Format) -> Result<ExitCode, Error> {
    let poset = read_poset(io::stdin().lock())?;
    let order = group_order(&poset)?;
    let cyclic_order = cyclic_order_of(&poset)?;
    let verified = cyclic_order == Some(expected);
    let generator_cycle_type = match cyclic_order {
        Some(_) => Some(find_generator(&poset)?.cycle_type().to_string()),
        None => None,
    };
    let report = VerifyReport {
        points: poset.n(),
        group_order: order.to_string(),
        cyclic_order,
        expected_order: expected,
        verified,
        generator_cycle_type,
    };
    match format {
        Format::Table => {
            println!("points: {}", report.points);
            println!("group order: {}", report.group_order);
            match (&report.cyclic_order, &report.generator_cycle_type) {
                (Some(m), Some(ct)) => println!("cyclic of order {m}, generator type {ct}"),
                _ => println!("not cyclic"),
            }
            println!(
                "expected order {}: {}",
                expected,
                if verified { "verified" } else { "FAILED" }
            );
        }
        _ => println!("{}", serde_json::to_string(&report).expect("plain data")),
    }
    Ok(exit_check(verified))
}

fn cmd_beta(n: u64, format: Format) -> Result<ExitCode, Error> {
    let value = beta(n)?;
    match format {
        Format::Table => println!("{value}"),
        _ => println!("{}", serde_json::json!({ "n": n, "beta": value })),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AuditCheckReport {
    kind: String,
    value: String,
    bound: u64,
    satisfied: bool,
}

#[derive(Serialize)]
struct AuditOutput {
    n: u64,
    cycle_type: String,
    sums: BTreeMap<u64, String>,
    checks: Vec<AuditCheckReport>,
    lower_bound_points: u64,
    passed: bool,
}

fn cmd_audit(cycle_type: &str, n: u64, format: Format) -> Result<ExitCode, Error> {
    let ct = CycleType::parse(cycle_type)?;
    let report = audit_generator(&ct, n)?;
    let output = AuditOutput {
        n,
        cycle_type: ct.to_string(),
        sums: report.sums().iter().map(|(&q, w)| (q, w.to_string())).collect(),
        checks: report
            .checks()
            .iter()
            .map(|check| AuditCheckReport {
                kind: check.kind.to_string(),
                value: check.value.to_string(),
                bound: check.bound,
                satisfied: check.satisfied,
            })
            .collect(),
        lower_bound_points: report.lower_bound_points(),
        passed: report.passed(),
    };
    match format {
        Format::Table => {
            println!("cycle type {} against n = {}", output.cycle_type, n);
            for check in &output.checks {
                println!(
                    "{:<24} = {:>6}  (needs >= {:>2})  {}",
                    check.kind,
                    check.value,
                    check.bound,
                    if check.satisfied { "ok" } else { "FAILED" }
                );
            }
            println!("points forced: {}", output.lower_bound_points);
            println!("{}", if output.passed { "passed" } else { "FAILED" });
        }
        _ => println!("{}", serde_json::to_string(&output).expect("plain data")),
    }
    Ok(exit_check(output.passed))
}

fn cmd_enumerate(
    n: usize,
    count_only: bool,
    cache: Option<PathBuf>,
    limit: Option<usize>,
    format: Format,
) -> Result<ExitCode, Error> {
    let mut enumerator = make_enumerator(limit, cache, n)?;
    // Levels build one point at a time; narrate each as it completes.
    for level in 0..=n {
        let classes = enumerator.count(level)?;
        eprintln!("n={level}: {classes} classes");
    }
    if count_only {
        println!("{}", enumerator.count(n)?);
        return Ok(ExitCode::SUCCESS);
    }
    let record = survey(&mut enumerator, n)?;
    match format {
        Format::Table => {
            println!("classes on {n} points: {}", record.total);
            for (order, count) in &record.with_cyclic_aut {
                println!("cyclic of order {order}: {count}");
            }
        }
        _ => println!("{}", serde_json::to_string(&record).expect("plain data")),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TwoOrbitSummary {
    p: u64,
    configurations: usize,
    passed: bool,
}

#[derive(Serialize)]
struct FamilySummary {
    orbit_sizes: Vec<usize>,
    configurations: usize,
    valid: usize,
    verified: bool,
}

#[derive(Serialize)]
struct ConstraintSummary {
    limit: usize,
    posets_seen: u64,
    generators_checked: u64,
    violations: usize,
    passed: bool,
}

#[derive(Serialize, Default)]
struct LemmaOutput {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    two_orbits: Vec<TwoOrbitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    z4_families: Vec<FamilySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraints: Option<ConstraintSummary>,
    passed: bool,
}

fn cmd_verify_lemmas(
    which: LemmaSelection,
    limit: Option<usize>,
    cache: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, Error> {
    let mut output = LemmaOutput { passed: true, ..LemmaOutput::default() };
    if matches!(which, LemmaSelection::All | LemmaSelection::TwoOrbits) {
        for p in [3, 5, 7] {
            eprintln!("two-orbit structures for p={p}");
            let report = verify_lemma_two_orbits(p)?;
            output.passed &= report.passed();
            output.two_orbits.push(TwoOrbitSummary {
                p,
                configurations: report.cases.len(),
                passed: report.passed(),
            });
        }
    }
    if matches!(which, LemmaSelection::All | LemmaSelection::Z4) {
        eprintln!("invariant configurations for the order-4 rotation");
        let report = verify_lemma_z4()?;
        output.passed &= report.passed();
        output.z4_families.extend(report.families.iter().map(|family| FamilySummary {
            orbit_sizes: family.orbit_sizes.clone(),
            configurations: family.configurations,
            valid: family.valid,
            verified: family.passed(),
        }));
    }
    if matches!(which, LemmaSelection::All | LemmaSelection::Constraints) {
        let cap = resolve_limit(limit)?.unwrap_or(7);
        eprintln!("constraint sweep over all posets on up to {cap} points");
        let mut enumerator = make_enumerator(Some(cap), cache, cap)?;
        let sweep = verify_lemma_constraints_exhaustive(&mut enumerator, cap)?;
        output.passed &= sweep.passed();
        output.constraints = Some(ConstraintSummary {
            limit: cap,
            posets_seen: sweep.posets_seen,
            generators_checked: sweep.generators_checked,
            violations: sweep.violations.len(),
            passed: sweep.passed(),
        });
    }
    match format {
        Format::Table => {
            for row in &output.two_orbits {
                println!(
                    "two orbits, p={}: {} structures, {}",
                    row.p,
                    row.configurations,
                    if row.passed { "all verified" } else { "FAILED" }
                );
            }
            for family in &output.z4_families {
                println!(
                    "order-4 orbits {:?}: {} of {} configurations close into orders, {}",
                    family.orbit_sizes,
                    family.valid,
                    family.configurations,
                    if family.verified { "all verified" } else { "FAILED" }
                );
            }
            if let Some(sweep) = &output.constraints {
                println!(
                    "constraints on <= {} points: {} posets, {} generators, {} violations",
                    sweep.limit, sweep.posets_seen, sweep.generators_checked, sweep.violations
                );
            }
            println!("{}", if output.passed { "passed" } else { "FAILED" });
        }
        _ => println!("{}", serde_json::to_string(&output).expect("plain data")),
    }
    Ok(exit_check(output.passed))
}

fn cmd_min_points(
    m: u64,
    limit: Option<usize>,
    cache: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, Error> {
    let cap = resolve_limit(limit)?.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    let mut enumerator = make_enumerator(Some(cap), cache, cap)?;
    let found = enumerator.min_points_with_cyclic_aut(m)?;
    match format {
        Format::Table => match found {
            Some(points) => println!("{points}"),
            None => println!("absent up to {cap} points"),
        },
        _ => println!(
            "{}",
            serde_json::json!({ "order": m, "limit": cap, "min_points": found })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

/// The explicit flag, else the environment override, else nothing.
fn resolve_limit(flag: Option<usize>) -> Result<Option<usize>, Error> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(LIMIT_VAR) {
        Ok(text) => text
            .parse()
            .map(Some)
            .map_err(|_| Error::Format(format!("bad {LIMIT_VAR} value {text:?}"))),
        Err(_) => Ok(None),
    }
}

fn make_enumerator(
    limit: Option<usize>,
    cache: Option<PathBuf>,
    need: usize,
) -> Result<Enumerator, Error> {
    let cap = resolve_limit(limit)?.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    if need > cap {
        return Err(Error::EnumerationLimit { n: need, limit: cap });
    }
    Ok(match cache {
        Some(dir) => Enumerator::with_cache(cap, dir),
        None => Enumerator::new(cap),
    })
}

fn exit_check(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
