use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilorbit::linkpattern::{self, LinkPattern, SetShapeCounts};
use nilorbit::orbits::{self, OrbitLabel, OrderKind};
use nilorbit::verify::{self, Check, SuiteConfig, VerificationReport};
use nilorbit::{weyl, Family, NilradicalId, RootSystemType};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nilorbit", version, about = "B-orbits in abelian nilradicals of classical Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List orbit labels with lengths and predicted dimensions
    Enumerate(EnumerateArgs),
    /// Hasse diagram of a closure order
    Poset(PosetArgs),
    /// Run the verification suite and write JSON-lines reports
    Verify(VerifyArgs),
    /// Link-pattern statistics and lengths of every involution
    Lengths(LengthsArgs),
    /// Rerun the failing checks recorded in a report file
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Dot,
    Ascii,
}

#[derive(Args)]
struct Scope {
    #[arg(long)]
    family: Family,
    /// Lie rank (sl_N has rank N - 1)
    #[arg(long)]
    rank: usize,
    /// Simple root defining the nilradical, e.g. e2-e1 or 2e1
    #[arg(long)]
    nilradical: Option<String>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    scope: Scope,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PosetArgs {
    #[command(flatten)]
    scope: Scope,
    #[arg(long, default_value = "geometric")]
    order: OrderKind,
    /// Overlay the geometric and Bruhat-predicted Hasse diagrams
    #[arg(long)]
    overlay: bool,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Checks to run (repeatable); all by default
    #[arg(long)]
    check: Vec<Check>,
    /// Families to run (repeatable); all by default
    #[arg(long)]
    family: Vec<Family>,
    /// Run a single rank instead of the default ceilings
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    nilradical: Option<String>,
    #[arg(long, default_value_t = 4)]
    max_rank_bruhat_oracle: usize,
    /// Report every timing as 0 so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
    /// Swap the two sides of this relation-table row
    #[arg(long, hide = true)]
    inject_fault: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LengthsArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: usize,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReplayArgs {
    /// JSON-lines report written by `verify`
    report: PathBuf,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<nilorbit::Error> for Failure {
    fn from(e: nilorbit::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn emit(output: &Output, text: &str) -> io::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Failure::Usage(format!("format `{name}` is not available for {command}"))
}

fn nilradicals(scope: &Scope) -> Result<Vec<NilradicalId>, Failure> {
    let t = RootSystemType::new(scope.family, scope.rank)?;
    match &scope.nilradical {
        Some(sel) => Ok(vec![NilradicalId::parse(t, sel)?]),
        None => Ok(t.abelian_nilradicals()),
    }
}

fn single_nilradical(scope: &Scope) -> Result<NilradicalId, Failure> {
    let mut ids = nilradicals(scope)?;
    if ids.len() != 1 {
        let options: Vec<String> = ids.iter().map(NilradicalId::selector).collect();
        return Err(Failure::Usage(format!(
            "{}{} has several abelian nilradicals; choose one with --nilradical ({})",
            scope.family,
            scope.rank,
            options.join(", ")
        )));
    }
    Ok(ids.remove(0))
}

fn label_row(l: &OrbitLabel) -> Result<serde_json::Value, Failure> {
    Ok(json!({
        "nilradical": l.nilradical().selector(),
        "label": l.key(),
        "cardinality": l.cardinality(),
        "arcs": l.arc_count(),
        "sigma": l.sigma().to_string(),
        "length": l.length(),
        "conjugate_length": l.conjugate_length(),
        "dim": orbits::predicted_dimension(l)?,
        "coadjoint_dim": orbits::predicted_coadjoint_dimension(l)?,
    }))
}

fn cmd_enumerate(args: &EnumerateArgs) -> Outcome {
    let ids = nilradicals(&args.scope)?;
    let labels: Vec<OrbitLabel> = ids.iter().flat_map(orbits::enumerate_orbits).collect();
    let mut out = String::new();
    match args.format {
        Format::Json => {
            let rows = labels.iter().map(label_row).collect::<Result<Vec<_>, _>>()?;
            out = serde_json::to_string_pretty(&rows).expect("json") + "\n";
        }
        Format::Tsv => {
            out.push_str("nilradical\tlabel\tcardinality\tarcs\tsigma\tlength\tconjugate_length\tdim\tcoadjoint_dim\n");
            for l in &labels {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    l.nilradical().selector(),
                    l,
                    l.cardinality(),
                    l.arc_count(),
                    l.sigma(),
                    l.length(),
                    l.conjugate_length(),
                    orbits::predicted_dimension(l)?,
                    orbits::predicted_coadjoint_dimension(l)?,
                );
            }
        }
        Format::Ascii => {
            for l in &labels {
                let _ = writeln!(
                    out,
                    "{} {}  sigma={} dim={}",
                    l.nilradical(),
                    l,
                    l.sigma(),
                    orbits::predicted_dimension(l)?
                );
                out.push_str(&l.link_pattern().render_ascii());
                out.push('\n');
            }
        }
        Format::Dot => return Err(unsupported(args.format, "enumerate")),
    }
    emit(&args.output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_poset(args: &PosetArgs) -> Outcome {
    let id = single_nilradical(&args.scope)?;
    if args.overlay {
        let geo = orbits::build_poset(&id, OrderKind::Geometric)?;
        let bru = orbits::build_poset(&id, OrderKind::BruhatPredicted)?;
        let (dot, disagreements) = geo.overlay_dot(&bru)?;
        emit(&args.output, &dot)?;
        eprintln!("{id}: {disagreements} disagreement edges");
        return Ok(if disagreements == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let poset = orbits::build_poset(&id, args.order)?;
    let text = match args.format {
        Format::Dot => poset.to_dot(),
        Format::Json => serde_json::to_string_pretty(&poset.to_json()).expect("json") + "\n",
        Format::Tsv => {
            let mut out = String::from("lower\tupper\n");
            for &(i, j) in poset.covers() {
                let _ = writeln!(out, "{}\t{}", poset.labels()[i], poset.labels()[j]);
            }
            out
        }
        Format::Ascii => {
            let mut out = String::new();
            for (k, l) in poset.labels().iter().enumerate() {
                let ups: Vec<String> = poset
                    .covers()
                    .iter()
                    .filter(|&&(i, _)| i == k)
                    .map(|&(_, j)| poset.labels()[j].to_string())
                    .collect();
                let _ = writeln!(out, "[{}] {}  <  {}", poset.dims()[k], l, ups.join(" | "));
            }
            out
        }
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn write_reports(output: &Output, reports: &[VerificationReport]) -> io::Result<()> {
    let mut text = String::new();
    for r in reports {
        text.push_str(&r.to_json_line());
        text.push('\n');
    }
    emit(output, &text)
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let defaults = SuiteConfig::default();
    let config = SuiteConfig {
        checks: args.check.clone(),
        families: args.family.clone(),
        rank: args.rank,
        nilradical: args.nilradical.clone(),
        lengths: defaults.lengths,
        conjecture: defaults.conjecture,
        max_rank_bruhat_oracle: args.max_rank_bruhat_oracle,
        fault: args.inject_fault,
    };
    let tasks = config.plan()?;
    if tasks.is_empty() {
        return Err(Failure::Usage("no checks match the given scope".into()));
    }
    if let Some(row) = args.inject_fault {
        let fits = tasks.iter().filter_map(|t| t.nilradical.as_ref()).any(|id| {
            orbits::relation_table(id).is_some_and(|rows| row < rows.len())
        });
        if !fits {
            return Err(Failure::Usage(format!("no relation table in scope has a row {row}")));
        }
    }
    let mut reports = verify::run_tasks(&tasks);
    if args.no_timing {
        reports.iter_mut().for_each(|r| r.millis = 0);
    }
    write_reports(&args.output, &reports)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    eprintln!("{} checks, {} failed", reports.len(), failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_lengths(args: &LengthsArgs) -> Outcome {
    let t = RootSystemType::new(args.family, args.rank)?;
    let mut rows = Vec::new();
    for sigma in weyl::involutions(t) {
        let set = weyl::disjoint_reflection_decomposition(&sigma)?;
        let p = LinkPattern::of_set(&set, t)?;
        let formula = match t.family() {
            Family::A => linkpattern::length_formula_a(&set, t)?,
            Family::B | Family::C => linkpattern::length_formula_c(&set, t)?,
            Family::D => linkpattern::length_formula_d(&set, t)?,
        };
        let key = set.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        rows.push((key, SetShapeCounts::of(&set)?, p, formula, weyl::length(&sigma, t)?));
    }
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            out.push_str("set\tarcs\ta\tc\tr\tb\tformula\tlength\n");
            for (key, counts, p, formula, length) in &rows {
                let _ = writeln!(
                    out,
                    "{key}\t{}\t{}\t{}\t{}\t{}\t{formula}\t{length}",
                    p.num_arcs(),
                    counts.a,
                    p.crossings(),
                    p.right_arcs(),
                    p.bridges()
                );
            }
        }
        Format::Json => {
            let values: Vec<_> = rows
                .iter()
                .map(|(key, counts, p, formula, length)| {
                    json!({
                        "set": key, "arcs": p.num_arcs(), "a": counts.a, "c": p.crossings(),
                        "r": p.right_arcs(), "b": p.bridges(), "pattern": p.arc_list(),
                        "formula": formula, "length": length,
                    })
                })
                .collect();
            out = serde_json::to_string_pretty(&values).expect("json") + "\n";
        }
        Format::Ascii => {
            for (key, _, p, formula, length) in &rows {
                let _ = writeln!(out, "{{{key}}}  formula={formula} length={length}");
                out.push_str(&p.render_ascii());
                out.push('\n');
            }
        }
        Format::Dot => return Err(unsupported(args.format, "lengths")),
    }
    emit(&args.output, &out)?;
    let mismatches = rows.iter().filter(|r| r.3 != r.4 as i64).count();
    Ok(if mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_replay(args: &ReplayArgs) -> Outcome {
    let text = fs::read_to_string(&args.report)?;
    let mut reports = Vec::new();
    let mut reproduced = 0;
    for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let recorded: VerificationReport = serde_json::from_str(line)
            .map_err(|e| Failure::Usage(format!("line {}: {e}", k + 1)))?;
        if recorded.passed() {
            continue;
        }
        let again = verify::replay(&recorded)?;
        let same = !again.passed() && again.counterexample == recorded.counterexample;
        eprintln!(
            "{} {}{} {}: {}",
            recorded.check,
            recorded.family,
            recorded.rank,
            recorded.nilradical.as_deref().unwrap_or("-"),
            if same { "reproduced" } else if again.passed() { "now passes" } else { "fails differently" }
        );
        if !again.passed() {
            reproduced += 1;
        }
        reports.push(again);
    }
    write_reports(&args.output, &reports)?;
    Ok(if reproduced == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Poset(a) => cmd_poset(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lengths(a) => cmd_lengths(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
