//! The `mahavier` command line tool.
//!
//! Every subcommand builds one JSON report. `--json` prints it as is; the
//! default human form prints the same report flattened to `path: value`
//! lines, so both carry identical data.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde_json::{json, Value};

use mahavier_core::enumerate::{
    count_relations, enumerate_relations, verify_claim, Claim, EnumConfig, PredicateMask, DEFAULT_MAX_N, HARD_MAX_N,
};
use mahavier_core::grid::{
    construct_family, figure1_presets, FamilySpec, GridSpec, LowerChoice, StarChoice, UpperChoice,
};
use mahavier_core::io::{RelationFile, SystemFile};
use mahavier_core::mahavier::{embed_chain, enumerate_product, ProductConfig, DEFAULT_NODE_CAP};
use mahavier_core::witness::{gamma_chain_witness, nontriviality_witness};
use mahavier_core::{ElementSet, EndoRelation, GammaWitness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mahavier", version, about = "Finite-model checks for set-valued relations and Mahavier products")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; never changes the output.
    #[arg(long, global = true, env = "MAHAVIER_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every predicate of a relation file and report witnesses.
    Check(CheckArgs),
    /// List or count all relations on n points matching a filter.
    Enumerate(EnumerateArgs),
    /// Sweep a claim over every relation on 1..=max-n points.
    Verify(VerifyArgs),
    /// Enumerate the Mahavier product of a system file.
    Product(ProductArgs),
    /// Embed the chain 0 < 1 < … < alpha into a constant product.
    Embed(EmbedArgs),
    /// Build a grid V-relation from one of the five families or a figure preset.
    Construct(ConstructArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    /// Predicates that must hold (comma separated or repeated); exit 1 otherwise.
    #[arg(long)]
    expect: Vec<String>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Raise the size bound above its default.
    #[arg(long, default_value_t = DEFAULT_MAX_N, value_parser = parse_bound)]
    bound: usize,
}

fn parse_bound(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if (1..=HARD_MAX_N).contains(&n) => Ok(n),
        _ => Err(format!("bound must be in 1..={HARD_MAX_N}")),
    }
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Predicates every listed relation satisfies (comma separated or repeated).
    #[arg(long)]
    filter: Vec<String>,
    #[arg(long)]
    count_only: bool,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    claim: String,
    #[arg(long)]
    max_n: usize,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Debug, Args)]
struct ProductArgs {
    file: PathBuf,
    #[arg(long)]
    count_only: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    alpha: usize,
    /// `x,y`; defaults to the least Condition Γ witness.
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// Family 1..5.
    #[arg(long, required_unless_present = "figure", conflicts_with = "figure")]
    family: Option<u8>,
    /// Figure panel 1..4 (k divisible by 4).
    #[arg(long)]
    figure: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Family 2, one choice per point: interval, zero-self, zero, self.
    #[arg(long)]
    lower: Option<String>,
    /// Family 3, one choice per point: interval, self-top, top, self.
    #[arg(long)]
    upper: Option<String>,
    /// Family 4 index set A, e.g. `0,3-5`.
    #[arg(long)]
    a: Option<String>,
    /// Family 4 index set B; family 5 uses `--set`.
    #[arg(long)]
    b: Option<String>,
    /// Family 5 point b.
    #[arg(long)]
    center: Option<usize>,
    /// Family 5 index set B.
    #[arg(long)]
    set: Option<String>,
    /// Family 5, one choice per point: self, whole, fixed:<y>.
    #[arg(long)]
    star: Option<String>,
    /// Write the relation file here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Outcome {
    report: Value,
    status: i32,
}

type CmdResult = Result<Outcome, String>;

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`, diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            }
        }
    };
    let jobs = cli.jobs.map(|j| j as usize).unwrap_or_else(default_jobs);
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Enumerate(a) => enumerate(a, jobs),
        Command::Verify(a) => verify(a, jobs),
        Command::Product(a) => product(a, jobs),
        Command::Embed(a) => embed(a),
        Command::Construct(a) => construct(a),
    };
    match result {
        Ok(outcome) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&outcome.report).expect("plain data") + "\n"
            } else {
                human(&outcome.report)
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            outcome.status
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// `path: value` lines, `summary` first. Arrays of scalars or of scalar
/// arrays stay inline as JSON.
pub fn human(report: &Value) -> String {
    let mut lines = Vec::new();
    if let Some(s) = report.get("summary").and_then(Value::as_str) {
        lines.push(s.to_string());
    }
    flatten("", report, &mut lines);
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && (!i.is_array() || is_flat(i))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flatten(prefix: &str, v: &Value, lines: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                if prefix.is_empty() && k == "summary" {
                    continue;
                }
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&path, child, lines);
            }
        }
        Value::Array(items) if !is_flat(v) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, lines);
            }
        }
        Value::String(s) => lines.push(format!("{prefix}: {s}")),
        _ => lines.push(format!("{prefix}: {v}")),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_relation(path: &Path) -> Result<RelationFile, String> {
    RelationFile::parse_any(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn relation_json(f: &EndoRelation) -> Value {
    json!({ "n": f.size(), "pairs": f.pairs().collect::<Vec<_>>() })
}

fn witness_json(w: &GammaWitness) -> Value {
    json!({ "x": w.x, "y": w.y, "triple": w.triple() })
}

fn opt_witness(w: Option<GammaWitness>) -> Value {
    w.as_ref().map_or(Value::Null, witness_json)
}

fn properties_json(f: &EndoRelation) -> Value {
    let p = f.properties();
    json!({
        "serial": p.serial,
        "surjective": p.surjective,
        "transitive": p.transitive,
        "idempotent": p.idempotent,
        "trivial": p.trivial,
        "v_relation": p.v_relation,
        "gamma": opt_witness(p.gamma),
    })
}

fn parse_mask(items: &[String]) -> Result<PredicateMask, String> {
    items.iter().try_fold(PredicateMask::empty(), |acc, s| {
        PredicateMask::parse_list(s).map(|m| acc | m).map_err(|e| e.to_string())
    })
}

fn check(args: &CheckArgs) -> CmdResult {
    let file = load_relation(&args.file)?;
    let f = &file.relation;
    let expect = parse_mask(&args.expect)?;
    let actual = PredicateMask::of(f);
    let missing = expect.difference(actual);
    let chain = if f.is_idempotent() && f.is_serial() && !f.is_trivial() {
        let (w, trace) = gamma_chain_witness(f).map_err(|e| e.to_string())?;
        json!({ "witness": witness_json(&w), "points": trace.points, "lemma_points": trace.lemma_points })
    } else {
        Value::Null
    };
    let props = f.properties();
    let summary = format!(
        "v_relation={} trivial={} gamma={}",
        props.v_relation,
        props.trivial,
        props.gamma.map_or("none".to_string(), |w| w.to_string())
    );
    let mut report = json!({
        "command": "check",
        "relation": relation_json(f),
        "properties": properties_json(f),
        "nontriviality_witness": nontriviality_witness(f),
        "chain_witness": chain,
        "expect": expect.names(),
        "missing": missing.names(),
        "summary": summary,
    });
    if let Some(labels) = &file.labels {
        report["labels"] = json!(labels);
    }
    Ok(Outcome {
        report,
        status: if missing.is_empty() { EXIT_OK } else { EXIT_FALSE },
    })
}

fn enum_config(bound: &BoundArgs, jobs: usize) -> EnumConfig {
    EnumConfig { max_n: bound.bound, jobs }
}

fn enumerate(args: &EnumerateArgs, jobs: usize) -> CmdResult {
    let filter = parse_mask(&args.filter)?;
    let config = enum_config(&args.bound, jobs);
    let count = count_relations(args.n, filter, &config).map_err(|e| e.to_string())?;
    let mut report = json!({
        "command": "enumerate",
        "n": args.n,
        "filter": filter.names(),
        "count": count,
        "summary": format!("{count} relations on {} points", args.n),
    });
    if !args.count_only {
        let relations: Vec<Value> = enumerate_relations(args.n, filter, &config)
            .map_err(|e| e.to_string())?
            .map(|f| json!({ "code": f.encode(), "pairs": f.pairs().collect::<Vec<_>>() }))
            .collect();
        report["relations"] = Value::Array(relations);
    }
    Ok(Outcome { report, status: EXIT_OK })
}

fn verify(args: &VerifyArgs, jobs: usize) -> CmdResult {
    let claim: Claim = args.claim.parse().map_err(|e: mahavier_core::enumerate::EnumError| e.to_string())?;
    let config = enum_config(&args.bound, jobs);
    if args.max_n == 0 {
        return Err("--max-n must be at least 1".into());
    }
    let tables = (1..=args.max_n)
        .map(|n| verify_claim(claim, n, &config))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let total: usize = tables.iter().map(|t| t.counterexamples.len()).sum();
    let report = json!({
        "command": "verify",
        "claim": claim.name(),
        "max_n": args.max_n,
        "counterexamples": total,
        "verified": total == 0,
        "tables": tables,
        "summary": format!("{total} counterexamples"),
    });
    Ok(Outcome {
        report,
        status: if total == 0 { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
    })
}

fn product(args: &ProductArgs, jobs: usize) -> CmdResult {
    let text = read(&args.file)?;
    let sys = SystemFile::parse(&text)
        .and_then(|f| f.to_system())
        .map_err(|e| format!("{}: {e}", args.file.display()))?;
    let config = ProductConfig {
        node_cap: args.node_cap,
        jobs,
    };
    let result = enumerate_product(&sys, &config).map_err(|e| e.to_string())?;
    let warning = result
        .incompatibility
        .map(|t| format!("system is not compatible at {t}; product enumerated anyway"));
    let mut report = json!({
        "command": "product",
        "indices": sys.preorder().len(),
        "order": sys.preorder().strict_pairs(),
        "sizes": sys.sizes(),
        "compatible": result.incompatibility.is_none(),
        "incompatibility": result.incompatibility,
        "exact": sys.is_exact(),
        "exactness_violation": sys.exactness_violation(),
        "count": result.count,
        "stats": result.stats,
        "warning": warning,
        "summary": format!("{} threads", result.count),
    });
    if !args.count_only {
        report["threads"] = json!(result.threads);
    }
    Ok(Outcome { report, status: EXIT_OK })
}

fn parse_witness(text: &str) -> Result<GammaWitness, String> {
    let bad = || format!("witness `{text}` is not of the form x,y");
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    let x = x.trim().parse().map_err(|_| bad())?;
    let y = y.trim().parse().map_err(|_| bad())?;
    GammaWitness::new(x, y).map_err(|e| e.to_string())
}

fn embed(args: &EmbedArgs) -> CmdResult {
    let f = load_relation(&args.relation)?.relation;
    let witness = match &args.witness {
        Some(text) => parse_witness(text)?,
        None => match f.condition_gamma() {
            Some(w) => w,
            None => {
                let report = json!({
                    "command": "embed",
                    "relation": relation_json(&f),
                    "gamma": Value::Null,
                    "summary": "relation has no Condition Γ witness",
                });
                return Ok(Outcome { report, status: EXIT_FALSE });
            }
        },
    };
    let e = embed_chain(&f, witness, args.alpha).map_err(|e| e.to_string())?;
    let report = json!({
        "command": "embed",
        "relation": relation_json(&f),
        "witness": witness_json(&e.witness),
        "alpha": e.alpha,
        "count": e.threads.len(),
        "members_checked": true,
        "distinct": true,
        "warning": e.warning,
        "threads": e.threads,
        "summary": format!("{} threads embedded", e.threads.len()),
    });
    Ok(Outcome { report, status: EXIT_OK })
}

/// `0,2,5-7` style index sets.
fn parse_set(text: &str) -> Result<ElementSet, String> {
    let bad = || format!("bad index set `{text}`");
    let mut set = ElementSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once('-') {
            Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
            None => {
                let x = part.parse().map_err(|_| bad())?;
                (x, x)
            }
        };
        if lo > hi || hi >= 64 {
            return Err(bad());
        }
        set = set.union(ElementSet::range_inclusive(lo, hi));
    }
    Ok(set)
}

fn parse_choices<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(',').map(|c| c.trim().parse::<T>().map_err(|e| e.to_string())).collect()
}

fn need<'a>(value: &'a Option<String>, flag: &str, family: u8) -> Result<&'a str, String> {
    value.as_deref().ok_or_else(|| format!("family {family} needs --{flag}"))
}

fn family_spec(args: &ConstructArgs, family: u8) -> Result<FamilySpec, String> {
    Ok(match family {
        1 => FamilySpec::Reflection,
        2 => FamilySpec::Lower(parse_choices::<LowerChoice>(need(&args.lower, "lower", 2)?)?),
        3 => FamilySpec::Upper(parse_choices::<UpperChoice>(need(&args.upper, "upper", 3)?)?),
        4 => FamilySpec::Split {
            a: parse_set(need(&args.a, "a", 4)?)?,
            b: parse_set(need(&args.b, "b", 4)?)?,
        },
        5 => FamilySpec::Star {
            center: args.center.ok_or("family 5 needs --center")?,
            set: parse_set(need(&args.set, "set", 5)?)?,
            choices: parse_choices::<StarChoice>(need(&args.star, "star", 5)?)?,
        },
        other => return Err(format!("unknown family {other}; expected 1..5")),
    })
}

fn construct(args: &ConstructArgs) -> CmdResult {
    let (label, f, expected) = match (args.family, args.figure) {
        (_, Some(panel)) => {
            let panels = figure1_presets(args.k).map_err(|e| e.to_string())?;
            let p = panels
                .into_iter()
                .find(|p| p.panel == panel)
                .ok_or_else(|| format!("unknown figure panel {panel}; expected 1..4"))?;
            (json!({ "figure": panel }), p.relation, Some(opt_witness(p.expected)))
        }
        (Some(family), None) => {
            let grid = GridSpec::new(args.k).map_err(|e| e.to_string())?;
            let f = construct_family(&family_spec(args, family)?, &grid).map_err(|e| e.to_string())?;
            (json!({ "family": family }), f, None)
        }
        (None, None) => return Err("one of --family or --figure is required".into()),
    };
    let gamma = f.condition_gamma();
    let mut report = json!({
        "command": "construct",
        "source": label,
        "k": args.k,
        "relation": relation_json(&f),
        "properties": properties_json(&f),
        "summary": format!(
            "V-relation on {} points, gamma={}",
            f.size(),
            gamma.map_or("none".to_string(), |w| w.to_string())
        ),
    });
    if let Some(expected) = expected {
        report["expected_witness"] = expected;
    }
    if let Some(path) = &args.output {
        fs::write(path, RelationFile::new(f).to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
        report["output"] = json!(path.display().to_string());
    }
    Ok(Outcome { report, status: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_shapes() {
        let v = json!({"summary": "s", "a": {"b": [1, 2]}, "c": [{"d": null}], "e": [[0, 1]]});
        assert_eq!(human(&v), "s\na.b: [1,2]\nc[0].d: null\ne: [[0,1]]\n");
    }

    #[test]
    fn sets() {
        assert_eq!(parse_set("0,3-5").unwrap().to_vec(), vec![0, 3, 4, 5]);
        assert!(parse_set("5-3").is_err());
        assert!(parse_set("x").is_err());
        assert!(parse_set("").unwrap().is_empty());
    }

    #[test]
    fn witnesses() {
        assert_eq!(parse_witness("0, 1").unwrap(), GammaWitness { x: 0, y: 1 });
        assert!(parse_witness("1,1").is_err());
        assert!(parse_witness("1").is_err());
    }
}
