use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use softtopo::baire::{is_baire, is_first_category, is_locally_compact, is_nowhere_dense};
use softtopo::compactness::{is_compact_set, is_compact_space, is_quasi_compact};
use softtopo::io::{self, Bundle, BundleError, NULL_NAME};
use softtopo::maps::PreimageMode;
use softtopo::separation::{is_hausdorff, is_normal, is_regular, is_regular_with, Disjointness, RegularClause};
use softtopo::subspace::build_subspace;
use softtopo::topology::verify_with_carrier;
use softtopo::{Error, SoftTopology};
use softtopo_fuzz::{run_theorem, GeneratorConfig, FuzzError, Verdict};

mod render;
use render::Names;

/// Soft element enumerations above this size need --force.
const ELEMENT_GUARD: u128 = 1_000_000;

#[derive(Parser)]
#[command(name = "softtopo", version, about = "Finite soft sets and soft e-topologies")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the soft e-topology axioms for the listed family.
    Verify { file: PathBuf },
    /// Decide a property of the document's topology.
    Check {
        #[command(subcommand)]
        property: Property,
    },
    /// Closure or interior of a named set.
    Compute {
        #[arg(value_enum)]
        operator: Operator,
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
    /// List the soft elements of a named set.
    Elements {
        #[arg(long)]
        set: String,
        #[arg(long)]
        force: bool,
        file: PathBuf,
    },
    /// Build the subspace on a constant point set.
    Subspace {
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
        file: PathBuf,
    },
    /// Soft functions between two documents.
    Map {
        #[command(subcommand)]
        action: MapAction,
    },
    /// Run a registered property on random instances.
    Fuzz(FuzzArgs),
}

#[derive(Subcommand)]
enum Property {
    Hausdorff { file: PathBuf },
    Regular {
        /// Require the closed set itself to be disjoint from the point's open.
        #[arg(long)]
        literal: bool,
        file: PathBuf,
    },
    Normal { file: PathBuf },
    QuasiCompact { file: PathBuf },
    Compact { file: PathBuf },
    CompactSet {
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
    LocallyCompact { file: PathBuf },
    Baire { file: PathBuf },
    NowhereDense {
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
    FirstCategory {
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Closure,
    Interior,
}

#[derive(Subcommand)]
enum MapAction {
    /// Compare pointwise continuity with the preimage criterion.
    Check {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        codomain: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Violation)]
        preimage_mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Preimages outside S(X̃) count as failures.
    Violation,
    /// Preimages outside S(X̃) are ignored.
    Skip,
}

#[derive(clap::Args)]
struct FuzzArgs {
    #[arg(long)]
    case: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "SOFTTOPO_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    points: usize,
    #[arg(long, default_value_t = 2)]
    params: usize,
    #[arg(long, default_value_t = 3)]
    subbase: usize,
    #[arg(long, default_value_t = 512)]
    max_topology: usize,
    #[arg(long, default_value_t = 16)]
    attempts: usize,
    /// Where shrunk counterexamples are written.
    #[arg(long, default_value = "fuzz-out")]
    out_dir: PathBuf,
}

/// Exit 2: unreadable input, failed precondition or bad configuration.
struct Failure(String);

impl From<BundleError> for Failure {
    fn from(e: BundleError) -> Self {
        Failure(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<FuzzError> for Failure {
    fn from(e: FuzzError) -> Self {
        Failure(e.to_string())
    }
}

struct Answer {
    holds: bool,
    json: Value,
    text: String,
}

impl Answer {
    fn new(holds: bool, json: Value, text: String) -> Self {
        Self { holds, json, text }
    }
}

fn load(path: &Path) -> Result<Bundle, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<(Bundle, SoftTopology), Failure> {
    let bundle = load(path)?;
    let tau = bundle.topology()?;
    Ok((bundle, tau))
}

fn verify(file: &Path) -> Result<Answer, Failure> {
    let bundle = load(file)?;
    if bundle.topology.is_none() {
        let tau = bundle.topology()?;
        let json = json!({ "valid": true, "generated_from_subbase": true, "members": tau.len(), "violations": [] });
        return Ok(Answer::new(true, json, format!("valid: true\nmembers: {} (generated from subbase)\n", tau.len())));
    }
    let members = bundle.topology_members()?;
    let report = verify_with_carrier(&bundle.carrier_set()?, &members)?;
    let names = Names::new(&bundle);
    let mut text = format!("valid: {}\nmembers: {}\n", report.valid, members.len());
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let witnesses: Vec<String> = v.witnesses.iter().map(|w| names.label(w)).collect();
            text += &format!("violation {}: [{}] -> {}\n", v.axiom, witnesses.join(", "), v.offending);
            json!({ "axiom": v.axiom, "witnesses": render::sets(&v.witnesses), "offending": render::set(&v.offending) })
        })
        .collect();
    let json = json!({ "valid": report.valid, "members": members.len(), "violations": violations });
    Ok(Answer::new(report.valid, json, text))
}

fn check(property: &Property) -> Result<Answer, Failure> {
    let answer = match property {
        Property::Hausdorff { file } => {
            let (_, tau) = load_space(file)?;
            let (json, text) = render::separation(&is_hausdorff(&tau));
            Answer::new(json["holds"] == true, json, text)
        }
        Property::Regular { literal, file } => {
            let (_, tau) = load_space(file)?;
            let report = if *literal {
                is_regular_with(&tau, RegularClause::Literal, Disjointness::Elementary)
            } else {
                is_regular(&tau)
            };
            let (json, text) = render::separation(&report);
            Answer::new(report.holds, json, text)
        }
        Property::Normal { file } => {
            let (_, tau) = load_space(file)?;
            let report = is_normal(&tau);
            let (json, text) = render::separation(&report);
            Answer::new(report.holds, json, text)
        }
        Property::QuasiCompact { file } => {
            let (_, tau) = load_space(file)?;
            let r = is_quasi_compact(&tau);
            let text = format!(
                "holds: {}\nopens: {}\nminimum subcover of the full cover: {} member(s)\n",
                r.holds, r.open_count, r.full_cover_subcover.cardinality
            );
            Answer::new(r.holds, json!(r), text)
        }
        Property::Compact { file } => {
            let (_, tau) = load_space(file)?;
            let r = is_compact_space(&tau);
            let json = json!({
                "holds": r.holds,
                "quasi_compact": r.quasi_compact,
                "hausdorff": r.hausdorff.holds,
                "hausdorff_counterexample": r.hausdorff.counterexample.as_ref().map(render::hypothesis),
            });
            let mut text = format!("holds: {}\nquasi-compact: {}\nhausdorff: {}\n", r.holds, r.quasi_compact.holds, r.hausdorff.holds);
            if let Some(h) = &r.hausdorff.counterexample {
                text += &format!("unseparated pair: {}\n", render::hypothesis_text(h));
            }
            Answer::new(r.holds, json, text)
        }
        Property::CompactSet { set, file } => {
            let (bundle, tau) = load_space(file)?;
            let f = bundle.set(set)?;
            let r = is_compact_set(&tau, &f)?;
            let text = format!(
                "holds: {}\nin S: {}\ncomplement in S: {}\n",
                r.holds, r.admissible, r.complement_admissible
            );
            let mut json = json!(r);
            json["set"] = render::set(&f);
            Answer::new(r.holds, json, text)
        }
        Property::LocallyCompact { file } => {
            let (_, tau) = load_space(file)?;
            let r = is_locally_compact(&tau)?;
            let counterexample = r.counterexample.as_ref().map(|(x, o)| json!({ "element": render::element(x), "open": render::set(o) }));
            let mut text = format!("holds: {}\n", r.holds);
            if let Some((x, o)) = &r.counterexample {
                text += &format!("no compact neighborhood of {x} inside {o}\n");
            }
            Answer::new(r.holds, json!({ "holds": r.holds, "counterexample": counterexample }), text)
        }
        Property::Baire { file } => {
            let (_, tau) = load_space(file)?;
            let r = is_baire(&tau);
            let json = json!({
                "holds": r.holds,
                "meager_union": render::set(&r.meager_union),
                "interior": render::set(&r.interior),
                "family": render::sets(&r.family),
            });
            let text = format!(
                "holds: {}\nclosed sets with empty interior: {}\ntheir union: {}\ninterior of the union: {}\n",
                r.holds,
                r.family.len(),
                r.meager_union,
                r.interior
            );
            Answer::new(r.holds, json, text)
        }
        Property::NowhereDense { set, file } => {
            let (bundle, tau) = load_space(file)?;
            let f = bundle.set(set)?;
            let holds = is_nowhere_dense(&tau, &f)?;
            let closure = tau.closure_of(&f);
            let interior = tau.interior_of(&closure);
            let json = json!({ "holds": holds, "closure": render::set(&closure), "interior_of_closure": render::set(&interior) });
            let text = format!("holds: {holds}\nclosure: {closure}\ninterior of closure: {interior}\n");
            Answer::new(holds, json, text)
        }
        Property::FirstCategory { set, file } => {
            let (bundle, tau) = load_space(file)?;
            let f = bundle.set(set)?;
            let r = is_first_category(&tau, &f, None)?;
            let holds = r.is_first_category();
            let json = json!({
                "holds": holds,
                "verdict": r.verdict,
                "method": r.method,
                "decomposition": r.decomposition.as_ref().map(render::sets),
            });
            let mut text = format!("holds: {holds}\nverdict: {}\n", json["verdict"].as_str().unwrap_or_default());
            for piece in r.decomposition.iter().flatten() {
                text += &format!("  piece {piece}\n");
            }
            Answer::new(holds, json, text)
        }
    };
    Ok(answer)
}

fn compute(operator: Operator, name: &str, file: &Path) -> Result<Answer, Failure> {
    let (bundle, tau) = load_space(file)?;
    let f = bundle.set(name)?;
    let (label, result) = match operator {
        Operator::Closure => (format!("closure({name})"), tau.closure(&f)?),
        Operator::Interior => (format!("interior({name})"), tau.interior(&f)?),
    };
    let text = format!("{label} = {result}\n");
    let json = json!({ "sets": { label: render::set(&result) } });
    Ok(Answer::new(true, json, text))
}

fn elements(name: &str, force: bool, file: &Path) -> Result<Answer, Failure> {
    let bundle = load(file)?;
    let f = bundle.set(name)?;
    let count = f.se_count();
    if count > ELEMENT_GUARD && !force {
        return Err(Failure(format!("{name} has {count} soft elements; pass --force to list more than {ELEMENT_GUARD}")));
    }
    let listed: Vec<_> = f.elements().collect();
    let text = format!("count: {count}\n") + &listed.iter().map(|x| format!("  {x}\n")).collect::<String>();
    let json = json!({ "set": name, "count": count as u64, "elements": listed.iter().map(render::element).collect::<Vec<_>>() });
    Ok(Answer::new(true, json, text))
}

fn subspace(points: &[String], file: &Path) -> Result<Answer, Failure> {
    let (bundle, tau) = load_space(file)?;
    let y = bundle.universe.mask_of(points)?;
    let names = Names::new(&bundle);
    match build_subspace(&tau, y) {
        Ok(sub) => {
            let carrier_name = ["Y", "Y_sub", "Y_subspace"]
                .into_iter()
                .find(|n| !bundle.sets.contains_key(*n))
                .unwrap_or("Y_carrier")
                .to_string();
            let mut sets = BTreeMap::new();
            let mut listed = Vec::new();
            sets.insert(carrier_name.clone(), sub.carrier().clone());
            for (m, &source) in sub.topology.members().iter().zip(&sub.provenance) {
                let name = if m.is_null() {
                    NULL_NAME.to_string()
                } else if m == sub.carrier() {
                    carrier_name.clone()
                } else {
                    let base = names.get(&tau.members()[source]).map_or_else(|| format!("O{source}"), str::to_string);
                    let mut name = format!("{base}_Y");
                    while sets.contains_key(&name) {
                        name.push('\'');
                    }
                    sets.insert(name.clone(), m.clone());
                    name
                };
                listed.push(name);
            }
            let out = Bundle {
                universe: bundle.universe.clone(),
                carrier: Some(carrier_name),
                sets,
                topology: Some(listed),
                subbase: None,
                elements: BTreeMap::new(),
                functions: BTreeMap::new(),
            };
            let doc = out.to_document();
            let text = format!("subspace on {{{}}}:\n", points.join(","))
                + &out.topology.iter().flatten().map(|n| format!("  {n} = {}\n", out.set(n).expect("listed"))).collect::<String>();
            Ok(Answer::new(true, json!(doc), text))
        }
        Err(Error::Subspace(pre)) => {
            let label = |i: usize| names.label(&tau.members()[i]);
            let pairs: Vec<[String; 2]> = pre.pair_violations.iter().map(|&(i, j)| [label(i), label(j)]).collect();
            let traces: Vec<String> = pre.trace_violations.iter().map(|&i| label(i)).collect();
            let mut text = format!("preconditions hold: false\nviolations: {}\n", pre.violation_count());
            for [a, b] in &pairs {
                text += &format!("  {a} and {b} meet outside S\n");
            }
            for t in &traces {
                text += &format!("  trace of {t} on Y leaves S\n");
            }
            let json = json!({
                "preconditions_hold": false,
                "y": render::set(&pre.y),
                "pair_violations": pairs,
                "trace_violations": traces,
            });
            Ok(Answer::new(false, json, text))
        }
        Err(e) => Err(e.into()),
    }
}

fn map_check(function: &str, domain: &Path, codomain: &Path, mode: Mode) -> Result<Answer, Failure> {
    let (dom, tau) = load_space(domain)?;
    let (cod, sigma) = load_space(codomain)?;
    let f = dom.function(function, &cod.universe)?;
    let discontinuity = f.discontinuity(&tau, &sigma)?;
    let mode = match mode {
        Mode::Violation => PreimageMode::Violation,
        Mode::Skip => PreimageMode::Skip,
    };
    let preimage = f.is_continuous_preimage(&tau, &sigma, mode)?;
    let definitional = discontinuity.is_none();
    let agree = definitional == preimage.holds;
    let failures: Vec<Value> = preimage
        .failures
        .iter()
        .map(|t| json!({ "open": render::set(&t.open), "preimage": render::set(&t.preimage), "reason": t.reason }))
        .collect();
    let json = json!({
        "definitional": { "holds": definitional, "discontinuity": discontinuity.as_ref().map(render::element) },
        "preimage": { "holds": preimage.holds, "mode": mode, "failures": failures },
        "agree": agree,
    });
    let mut text = format!("definitional: {definitional}\npreimage: {}\nagree: {agree}\n", preimage.holds);
    if let Some(x) = &discontinuity {
        text += &format!("discontinuous at {x}\n");
    }
    for t in &preimage.failures {
        text += &format!("  preimage of {} is {} ({})\n", t.open, t.preimage, json!(t.reason).as_str().unwrap_or_default());
    }
    Ok(Answer::new(definitional && preimage.holds, json, text))
}

/// Writes through a temporary file so readers never see partial output.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, contents)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn fuzz(args: &FuzzArgs) -> Result<Answer, Failure> {
    let config = GeneratorConfig {
        points: args.points,
        params: args.params,
        seed: args.seed,
        subbase: args.subbase,
        max_topology: args.max_topology,
        trials: args.trials,
        attempts: args.attempts,
    };
    let report = run_theorem(&args.case, &config)?;
    let mut text = format!(
        "case: {}\nverdict: {}\ntrials: {}\nconfirmed: {}\nskipped: {}\ncounterexamples: {}\n",
        report.case,
        json!(report.verdict).as_str().unwrap_or_default(),
        report.trials,
        report.confirmed,
        report.skipped,
        report.counterexample_trials
    );
    let mut paths = Vec::new();
    if !report.counterexamples.is_empty() {
        fs::create_dir_all(&args.out_dir).map_err(|e| Failure(format!("{}: {e}", args.out_dir.display())))?;
        for c in &report.counterexamples {
            let path = args.out_dir.join(format!("{}-seed{}-trial{}.json", report.case, args.seed, c.trial));
            write_atomic(&path, &io::to_canonical_string(c))?;
            text += &format!("minimal counterexample (size {} from {}): {}\n", c.size, c.original_size, path.display());
            paths.push(path);
        }
    }
    for p in &paths {
        eprintln!("counterexample written to {}", p.display());
    }
    let json = serde_json::to_value(&report).expect("reports serialize");
    Ok(Answer::new(report.verdict != Verdict::Counterexample, json, text))
}

fn run(cli: &Cli) -> Result<Answer, Failure> {
    match &cli.command {
        Command::Verify { file } => verify(file),
        Command::Check { property } => check(property),
        Command::Compute { operator, set, file } => compute(*operator, set, file),
        Command::Elements { set, force, file } => elements(set, *force, file),
        Command::Subspace { points, file } => subspace(points, file),
        Command::Map { action: MapAction::Check { function, domain, codomain, preimage_mode } } => {
            map_check(function, domain, codomain, *preimage_mode)
        }
        Command::Fuzz(args) => fuzz(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(answer) => {
            match cli.format {
                Format::Json => print!("{}", io::to_canonical_string(&answer.json)),
                Format::Text => print!("{}", answer.text),
            }
            ExitCode::from(if answer.holds { 0 } else { 1 })
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
