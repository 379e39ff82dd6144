//! `hcg`: generate, solve, check and explore 3-coloured triple systems.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 faithfulness error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use hcg_core::bounds::{m_bound, smallest_n_for};
use hcg_core::colour::{Colour, ColourSet};
use hcg_core::colouring::Colouring;
use hcg_core::error::Error;
use hcg_core::extractor::{solve, Solution};
use hcg_core::format::{InstanceFile, MatchingDocument, Source};
use hcg_core::generators::{
    conjecture_bound, fixture, layered_lowest_colour, random_colouring, sharpness_instance, ConjectureParams, LayerSpec,
};
use hcg_core::matching::{verify_matching, Matching};
use hcg_core::oracle::{max_matching_in_colours, max_two_coloured};
use hcg_core::stress::{run_stress, StressConfig};
use hcg_core::structure::classify_sextuple;
use hcg_core::vset::{combinations, VertexSet};

#[derive(Parser)]
#[command(name = "hcg", version, about = "Two-coloured matchings in 3-coloured triple systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Generate(GenerateArgs),
    /// Extract a two-coloured matching of size m_bound(n).
    Solve(SolveArgs),
    /// Exact maximum matching in a colour pair.
    Oracle(OracleArgs),
    /// Check a matching document against an instance.
    Verify(VerifyArgs),
    /// Classify one sextuple or scan all of them.
    Classify(ClassifyArgs),
    /// Solve and check many seeded random instances.
    Stress(StressArgs),
    /// Evaluate the bound formulas.
    Bound(BoundArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["layers", "sharpness", "random", "fixture"])))]
struct GenerateArgs {
    /// Layer sizes a,b,c of the lowest-colour construction.
    #[arg(long, value_parser = parse_usize3)]
    layers: Option<[usize; 3]>,
    /// Instance on smallest_n_for(k) − 1 vertices with no matching of size k.
    #[arg(long)]
    sharpness: Option<usize>,
    /// Uniformly random instance on N vertices.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    #[arg(long, value_parser = parse_weights, requires = "random")]
    weights: Option<[f64; 3]>,
    #[arg(long, requires = "random")]
    seed: Option<u64>,
    /// FIX-A, FIX-B or FIX-C.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Write the trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print the matching document instead of a summary.
    #[arg(long)]
    json: bool,
    /// Write the matching document.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, value_parser = parse_pair, conflicts_with = "best_pair")]
    pair: Option<ColourSet>,
    /// Best of the three pairs (the default).
    #[arg(long)]
    best_pair: bool,
    /// Node budget of the search.
    #[arg(long)]
    budget: Option<u64>,
    /// Exit 1 unless the result is proved maximum.
    #[arg(long)]
    require_exact: bool,
    #[arg(long)]
    json: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    document: PathBuf,
    /// Minimum size; defaults to m_bound(n).
    #[arg(long)]
    min: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["sextuple", "scan"])))]
struct ClassifyArgs {
    instance: PathBuf,
    #[arg(long, value_delimiter = ',')]
    sextuple: Option<Vec<usize>>,
    #[arg(long)]
    scan: bool,
    /// List every spread instead of class counts.
    #[arg(long, requires = "scan")]
    spreads_only: bool,
}

#[derive(Args)]
struct StressArgs {
    /// Inclusive range a..b.
    #[arg(long, value_parser = parse_range)]
    n_range: (usize, usize),
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Compare with the exact oracle up to this n.
    #[arg(long)]
    oracle_max_n: Option<usize>,
    #[arg(long, value_parser = parse_weights)]
    weights: Option<[f64; 3]>,
    /// Directory for minimized failing instances.
    #[arg(long, default_value = ".")]
    repro_dir: PathBuf,
    #[arg(long)]
    json: bool,
    /// Replace the solver by one that returns nothing.
    #[arg(long, hide = true)]
    inject_failure: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["n", "k", "general"])))]
struct BoundArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// r,t,s,k
    #[arg(long, value_delimiter = ',', num_args = 1)]
    general: Option<Vec<u64>>,
}

/// Failure carrying its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if matches!(e, Error::Faithfulness(_)) { 3 } else { 2 };
        Fail { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail { code: 2, message: message.into() }
}

fn rejected(message: impl Into<String>) -> Fail {
    Fail { code: 1, message: message.into() }
}

type CmdResult = Result<(), Fail>;

fn parse_usize3(s: &str) -> Result<[usize; 3], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("`{p}` is not a count")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three values a,b,c".to_string())
}

fn parse_weights(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("`{p}` is not a weight")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three weights w1,w2,w3".to_string())
}

fn parse_colour(s: &str) -> Result<Colour, String> {
    s.trim()
        .parse::<u8>()
        .ok()
        .and_then(Colour::new)
        .ok_or_else(|| format!("`{s}` is not a colour 1, 2 or 3"))
}

fn parse_pair(s: &str) -> Result<ColourSet, String> {
    let (a, b) = s.split_once(',').ok_or("expected a colour pair such as 1,2")?;
    let (a, b) = (parse_colour(a)?, parse_colour(b)?);
    if a == b {
        return Err("the two colours must differ".into());
    }
    Ok(ColourSet::pair(a, b))
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a range a..b")?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn read_text(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Colouring, Fail> {
    let text = read_text(path)?;
    InstanceFile::parse(&text)
        .map(|f| f.colouring)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit_document(doc: &MatchingDocument, json: bool, output: Option<&Path>, summary: String) -> CmdResult {
    if let Some(p) = output {
        write_text(p, &format!("{}\n", doc.to_json()))?;
    }
    if json {
        println!("{}", doc.to_json());
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn fmt_colour(c: Option<Colour>) -> String {
    c.map_or_else(|| "none".to_string(), |c| c.to_string())
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let (c, mode) = if let Some([x, y, z]) = a.layers {
        (layered_lowest_colour(LayerSpec::new(x, y, z))?, format!("layers {x},{y},{z}"))
    } else if let Some(k) = a.sharpness {
        (sharpness_instance(k)?, format!("sharpness k={k}"))
    } else if let Some(n) = a.random {
        let seed = a.seed.unwrap_or(0);
        let w = a.weights.unwrap_or([1.0; 3]);
        (random_colouring(n, seed, w)?, format!("random seed={seed} weights={},{},{}", w[0], w[1], w[2]))
    } else {
        let name = a.fixture.expect("clap requires one mode");
        let c = fixture(&name)?;
        (c, format!("fixture {name}"))
    };
    let file = InstanceFile::new(c).with_comment(mode.clone());
    let summary = format!("n={} mode={mode}", file.n());
    match a.output {
        Some(p) => {
            write_text(&p, &file.serialize())?;
            println!("{summary}");
        }
        None => {
            print!("{}", file.serialize());
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let c = read_instance(&a.instance)?;
    let Solution { matching, trace, restarts } = solve(&c)?;
    if let Some(p) = &a.trace {
        write_text(p, &trace.to_jsonl())?;
    }
    let mut doc = MatchingDocument::new(&c, &matching, Source::Solve);
    doc.trace = a.trace.as_ref().map(|p| p.display().to_string());
    let summary = format!(
        "size={} avoided={} m_bound={} restarts={restarts}",
        matching.len(),
        fmt_colour(matching.avoided),
        m_bound(c.n())
    );
    emit_document(&doc, a.json, a.output.as_deref(), summary)
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let c = read_instance(&a.instance)?;
    let (pair, r) = match a.pair {
        Some(pair) => {
            let mut r = max_matching_in_colours(&c, c.vertices(), pair, a.budget);
            r.matching = r.matching.with_avoided(pair.first_missing());
            (pair, r)
        }
        None => max_two_coloured(&c, c.vertices(), a.budget),
    };
    let mut doc = MatchingDocument::new(&c, &r.matching, Source::Oracle);
    doc.exact = Some(r.exact);
    let summary = format!(
        "size={} pair={pair} exact={} explored={} budget_hit={}",
        r.size(),
        r.exact,
        r.explored,
        r.budget_hit
    );
    emit_document(&doc, a.json, a.output.as_deref(), summary)?;
    if a.require_exact && !r.exact {
        return Err(rejected("search budget exhausted before the maximum was proved"));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let c = read_instance(&a.instance)?;
    let doc = MatchingDocument::from_json(&read_text(&a.document)?)?;
    let min = a.min.unwrap_or_else(|| m_bound(c.n()));
    let mut violations = Vec::new();
    if doc.n != c.n() {
        violations.push(format!("document is for n={}, instance has n={}", doc.n, c.n()));
    }
    if doc.size != doc.triples.len() {
        violations.push(format!("document size {} but {} triples", doc.size, doc.triples.len()));
    }
    if violations.is_empty() {
        let m: Matching = doc.matching();
        violations.extend(verify_matching(&c, &m, min).violations);
        if let Some(av) = doc.avoided {
            if m.colours_used(&c).contains(av) {
                violations.push(format!("document claims to avoid colour {av} but uses it"));
            }
        }
    }
    if violations.is_empty() {
        println!("ok size={} min={min}", doc.size);
        return Ok(());
    }
    for v in &violations {
        println!("violation: {v}");
    }
    Err(rejected(format!("{} violation(s)", violations.len())))
}

fn class_label(dominated: ColourSet, spread: Option<(Colour, u8)>) -> String {
    match spread {
        Some((col, level)) => format!("spread colour={col} level={level}"),
        None if dominated.is_empty() => "universal".to_string(),
        None => format!("dominated{dominated}"),
    }
}

fn cmd_classify(a: ClassifyArgs) -> CmdResult {
    let c = read_instance(&a.instance)?;
    if let Some(vs) = a.sextuple {
        let s: VertexSet = vs.iter().copied().collect();
        if vs.len() != 6 || s.len() != 6 {
            return Err(usage(format!("--sextuple needs six distinct vertices, got {}", vs.len())));
        }
        if let Some(&v) = vs.iter().find(|&&v| v >= c.n()) {
            return Err(usage(format!("vertex {v} out of range for n={}", c.n())));
        }
        let class = classify_sextuple(&c, s)?;
        let sp = class.spread();
        println!("{}", class_label(class.dominated, sp.map(|s| (s.colour, s.level))));
        if let Some(sp) = sp {
            println!("dominating={} core={}", sp.dominating, sp.core);
            println!("plus=({}, {}) minus=({}, {})", sp.m_plus, sp.p, sp.m_minus, sp.n);
        } else {
            println!("dominated_by={}", class.dominated);
        }
        for (g, split) in Colour::ALL.into_iter().zip(class.avoiding_splits) {
            if let Some(split) = split {
                println!("avoid {g}: {split}");
            }
        }
        return Ok(());
    }

    let items = c.vertices().to_vec();
    let mut classes: BTreeMap<String, (u64, VertexSet)> = BTreeMap::new();
    let (mut universal, mut spreads) = (0u64, 0u64);
    for six in combinations::<6>(&items) {
        let s: VertexSet = six.into_iter().collect();
        let class = classify_sextuple(&c, s)?;
        if let Some(sp) = class.spread() {
            spreads += 1;
            if a.spreads_only {
                println!("{s} spread colour={} level={} dominating={}", sp.colour, sp.level, sp.dominating);
                continue;
            }
            classes.entry(class_label(class.dominated, Some((sp.colour, sp.level)))).or_insert((0, s)).0 += 1;
        }
        if class.universal {
            universal += 1;
        } else if !a.spreads_only {
            classes.entry(class_label(class.dominated, None)).or_insert((0, s)).0 += 1;
        }
    }
    if a.spreads_only {
        println!("spreads: {spreads}");
        return Ok(());
    }
    for (label, (count, first)) in &classes {
        println!("{label}: {count} first={first}");
    }
    println!("universal: {universal}");
    println!("spreads: {spreads}");
    Ok(())
}

fn cmd_stress(a: StressArgs) -> CmdResult {
    let cfg = StressConfig {
        n_min: a.n_range.0,
        n_max: a.n_range.1,
        count: a.count,
        seed: a.seed,
        oracle_max_n: a.oracle_max_n,
        weights: a.weights.unwrap_or([1.0; 3]),
        oracle_budget: None,
    };
    let report = if a.inject_failure {
        let stub = |c: &Colouring| {
            solve(c).map(|mut s| {
                s.matching = Matching::new(Vec::new());
                s
            })
        };
        run_stress(&cfg, &stub)?
    } else {
        run_stress(&cfg, &solve)?
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for (n, s) in &report.by_n {
            let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            println!(
                "n={n} passed={}/{} min_gap={} max_gap={} max_oracle_gap={} max_restarts={}",
                s.passed,
                s.instances,
                opt(s.min_gap),
                opt(s.max_gap),
                opt(s.max_oracle_gap),
                s.max_restarts
            );
        }
        println!("total passed={} failed={}", report.passed, report.failed);
    }
    if report.ok() {
        return Ok(());
    }
    fs::create_dir_all(&a.repro_dir).map_err(|e| usage(format!("cannot create {}: {e}", a.repro_dir.display())))?;
    for f in &report.failures {
        let c = Colouring::from_digits(f.minimized_n, &f.minimized_digits)?;
        let file = InstanceFile::new(c)
            .with_comment(format!("minimized from n={} index={} seed={}", f.n, f.index, f.seed))
            .with_comment(f.reason.replace('\n', " "));
        let path = a.repro_dir.join(format!("repro-n{}-i{}.hcg", f.n, f.index));
        write_text(&path, &file.serialize())?;
        eprintln!("failure n={} index={}: {} (repro {})", f.n, f.index, f.reason, path.display());
    }
    Err(rejected(format!("{} of {} instances failed", report.failed, report.instances)))
}

fn cmd_bound(a: BoundArgs) -> CmdResult {
    if let Some(n) = a.n {
        println!("{}", m_bound(n));
    } else if let Some(k) = a.k {
        println!("{}", smallest_n_for(k));
    } else {
        let g = a.general.expect("clap requires one mode");
        let [r, t, s, k]: [u64; 4] = g
            .try_into()
            .map_err(|_| usage("--general takes four values r,t,s,k"))?;
        println!("{}", conjecture_bound(ConjectureParams { r, t, s, k })?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Stress(a) => cmd_stress(a),
        Command::Bound(a) => cmd_bound(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        assert_eq!(Fail::from(Error::Faithfulness("x".into())).code, 3);
        assert_eq!(Fail::from(Error::Parse("x".into())).code, 2);
        assert_eq!(Fail::from(Error::Input("x".into())).code, 2);
        assert_eq!(rejected("x").code, 1);
        assert_eq!(usage("x").code, 2);
    }

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_range("9..14"), Ok((9, 14)));
        assert!(parse_range("9-14").is_err());
        assert_eq!(parse_usize3("1,3,9"), Ok([1, 3, 9]));
        assert!(parse_usize3("1,3").is_err());
        assert_eq!(parse_pair("3,1"), Ok(ColourSet::pair(Colour::ONE, Colour::THREE)));
        assert!(parse_pair("1,4").is_err());
        assert!(parse_weights("1,2").is_err());
    }
}
