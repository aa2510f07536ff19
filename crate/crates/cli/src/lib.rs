//! Command-line front end for the fusion engine.
//!
//! Every command loads a family configuration, runs one engine operation
//! and prints a JSON envelope:
//!
//! ```json
//! {"command": "decompose", "inputs": {...}, "outputs": {...},
//!  "exact": true, "numeric": false, "engine_version": "0.1.0", "timing_ms": 0.4}
//! ```
//!
//! Failures print `{"command", "error": {"kind", "message"}, ...}` instead.
//! Exit codes: 0 success, 1 computation error, 2 usage or configuration error.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fusion_core::amenability::{amenability_verdict, DEFAULT_DEPTH};
use fusion_core::characters::{moment, moment_sequence, StarWord};
use fusion_core::config::FamilyConfig;
use fusion_core::geometry::{ball, distance, growth, growth_csv, GeneratorElement};
use fusion_core::params::{derive_irreducible_lists, is_kac, modular_spectrum, qdim, Param, ParamList};
use fusion_core::powers::SetCalculus;
use fusion_core::towers::{export_dot, principal_graph, tower, with_weights};
use fusion_core::{with_family, FusionElement, FusionRules, FusionSystem};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] fusion_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Engine(fusion_core::Error::Config(_)) => 2,
            CliError::Engine(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            _ => "computation",
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "fusion", version, about = "Exact fusion rules and invariants of compact quantum groups")]
pub struct Cli {
    /// Omit the timing field, so repeated runs print identical bytes.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArg {
    /// Family configuration: a JSON file, or inline JSON starting with `{`.
    #[arg(long)]
    pub family: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decompose `x ⊗ y` into irreducibles.
    Decompose {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Moments of the character of `u`.
    Moments {
        #[command(flatten)]
        family: FamilyArg,
        /// Representation; defaults to the family's fundamental one.
        #[arg(long)]
        u: Option<String>,
        /// Number of moments.
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Report moments of X^2, X^4, ..., X^{2k}.
        #[arg(long)]
        even: bool,
        /// Explicit *-words such as `XX*X`; overrides `--k`.
        #[arg(long = "word")]
        words: Vec<String>,
        /// One JSON object per line instead of an envelope.
        #[arg(long)]
        jsonl: bool,
    },
    /// Word-metric distance between two irreducibles.
    Distance {
        #[command(flatten)]
        family: FamilyArg,
        /// Generating element; defaults to 1 + u + ū for the fundamental u.
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Irreducibles within a radius.
    Ball {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        v: Option<String>,
        /// Center; defaults to the unit.
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        radius: usize,
    },
    /// Sphere and ball sizes by radius.
    Growth {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        radius: usize,
        /// Print `radius,sphere,ball` rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Kesten-type amenability test.
    Amenable {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Tolerance; defaults to a per-family value.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Parameter lists of irreducibles, derived from the configured fundamental list.
    ListInvariant {
        #[command(flatten)]
        family: FamilyArg,
        /// Tensor-power depth explored from the fundamental representation.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Restrict the report to these labels.
        #[arg(long = "label")]
        labels: Vec<String>,
    },
    /// Lattice generated by a parameter list.
    ModularSpectrum {
        #[command(flatten)]
        family: FamilyArg,
        /// Comma-separated list such as `q^1/2,q^-1/2`.
        #[arg(long, conflicts_with = "label")]
        list: Option<String>,
        /// Use the derived list of this irreducible instead.
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Parameters to test for membership.
        #[arg(long = "member")]
        members: Vec<String>,
    },
    /// Principal graph of the tower of `u`.
    Graph {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// Write Graphviz output to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a Powers witness file.
    PowersCheck {
        #[command(flatten)]
        family: FamilyArg,
        /// Witness JSON: a file, or inline JSON starting with `{`.
        #[arg(long)]
        witness: String,
    },
    /// Search for a Powers witness.
    PowersSearch {
        #[command(flatten)]
        family: FamilyArg,
        /// Comma-separated finite set F.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        budget: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Moments { .. } => "moments",
            Command::Distance { .. } => "distance",
            Command::Ball { .. } => "ball",
            Command::Growth { .. } => "growth",
            Command::Amenable { .. } => "amenable",
            Command::ListInvariant { .. } => "list-invariant",
            Command::ModularSpectrum { .. } => "modular-spectrum",
            Command::Graph { .. } => "graph",
            Command::PowersCheck { .. } => "powers-check",
            Command::PowersSearch { .. } => "powers-search",
        }
    }

    fn family(&self) -> &FamilyArg {
        match self {
            Command::Decompose { family, .. }
            | Command::Moments { family, .. }
            | Command::Distance { family, .. }
            | Command::Ball { family, .. }
            | Command::Growth { family, .. }
            | Command::Amenable { family, .. }
            | Command::ListInvariant { family, .. }
            | Command::ModularSpectrum { family, .. }
            | Command::Graph { family, .. }
            | Command::PowersCheck { family, .. }
            | Command::PowersSearch { family, .. } => family,
        }
    }
}

/// Exit code and everything destined for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// What a command produced, before it is wrapped in an envelope.
enum Output {
    Report { inputs: Value, outputs: Value, exact: bool, numeric: bool },
    Raw(String),
}

fn report(inputs: Value, outputs: Value, exact: bool) -> Output {
    Output::Report { inputs, outputs, exact, numeric: !exact }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            return Outcome { code, stdout: err.render().to_string() };
        }
    };
    let name = cli.command.name();
    let start = Instant::now();
    let result = execute(&cli.command);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(Output::Raw(text)) => Outcome { code: 0, stdout: text },
        Ok(Output::Report { inputs, outputs, exact, numeric }) => {
            let mut env = Map::new();
            env.insert("command".into(), name.into());
            env.insert("inputs".into(), inputs);
            env.insert("outputs".into(), outputs);
            env.insert("exact".into(), exact.into());
            env.insert("numeric".into(), numeric.into());
            env.insert("engine_version".into(), fusion_core::VERSION.into());
            if !cli.no_timing {
                env.insert("timing_ms".into(), json!(elapsed_ms));
            }
            Outcome { code: 0, stdout: render(&Value::Object(env)) }
        }
        Err(err) => {
            log::error!("{name}: {err}");
            let env = json!({
                "command": name,
                "error": {"kind": err.kind(), "message": err.to_string()},
                "engine_version": fusion_core::VERSION,
            });
            Outcome { code: err.exit_code(), stdout: render(&env) }
        }
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Reads inline JSON or a file.
fn read_json(arg: &str, what: &str) -> CliResult<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Config(format!("cannot read {what} `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{what} is not valid JSON: {e}")))
}

fn load_family(arg: &FamilyArg) -> CliResult<FamilyConfig> {
    Ok(FamilyConfig::from_value(read_json(&arg.family, "family configuration")?)?)
}

fn execute(cmd: &Command) -> CliResult<Output> {
    let cfg = load_family(cmd.family())?;
    let fam = cfg.build()?;
    let out = with_family!(&fam, sys => dispatch(cmd, &cfg, sys));
    log::debug!("{}: {} irreducible pairs computed", fam.descriptor(), fam.computed_pairs());
    out
}

fn element_or_fundamental<R: FusionRules>(sys: &FusionSystem<R>, text: &Option<String>) -> CliResult<FusionElement<R::Label>> {
    Ok(match text {
        Some(t) => sys.parse_element(t)?,
        None => sys.fundamental(),
    })
}

fn generator<R: FusionRules>(sys: &FusionSystem<R>, v: &Option<String>) -> CliResult<GeneratorElement<R::Label>> {
    Ok(match v {
        Some(t) => GeneratorElement::new(sys, sys.parse_element(t)?)?,
        None => GeneratorElement::standard(sys, &sys.fundamental())?,
    })
}

fn center<R: FusionRules>(sys: &FusionSystem<R>, c: &Option<String>) -> CliResult<R::Label> {
    Ok(match c {
        Some(t) => sys.parse_label(t)?,
        None => sys.unit(),
    })
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn derived_lists<R: FusionRules>(
    cfg: &FamilyConfig,
    sys: &FusionSystem<R>,
    depth: usize,
) -> CliResult<BTreeMap<R::Label, ParamList>> {
    let fund = cfg
        .fundamental_list()?
        .ok_or_else(|| CliError::Config("this command needs a `params` block in the family configuration".into()))?;
    Ok(derive_irreducible_lists(sys, &fund, depth)?)
}

fn dispatch<R: FusionRules>(cmd: &Command, cfg: &FamilyConfig, sys: &FusionSystem<R>) -> CliResult<Output> {
    let family = sys.descriptor();
    match cmd {
        Command::Decompose { x, y, .. } => {
            let product = sys.tensor(&sys.parse_element(x)?, &sys.parse_element(y)?)?;
            Ok(report(json!({"family": family, "x": x, "y": y}), sys.element_to_map(&product), true))
        }
        Command::Moments { u, k, even, words, jsonl, .. } => {
            let u_el = element_or_fundamental(sys, u)?;
            let rows: Vec<(String, String)> = if words.is_empty() {
                let seq = moment_sequence(sys, &u_el, if *even { 2 * k } else { *k })?;
                let picked: Vec<(usize, String)> = seq
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1, v.to_string()))
                    .filter(|(m, _)| !*even || m % 2 == 0)
                    .collect();
                picked.into_iter().map(|(m, v)| (StarWord::power(m).to_string(), v)).collect()
            } else {
                words
                    .iter()
                    .map(|w| {
                        let word: StarWord = w.parse()?;
                        Ok((word.to_string(), moment(sys, &u_el, &word)?.to_string()))
                    })
                    .collect::<CliResult<_>>()?
            };
            if *jsonl {
                let mut text = String::new();
                for (w, v) in &rows {
                    text.push_str(&serde_json::to_string(&json!({"word": w, "value": v})).expect("json values serialize"));
                    text.push('\n');
                }
                return Ok(Output::Raw(text));
            }
            let inputs = json!({"family": family, "u": sys.format_element(&u_el), "k": k, "even": even, "words": words});
            let values: Vec<&String> = rows.iter().map(|(_, v)| v).collect();
            let outputs = json!({"words": rows.iter().map(|(w, _)| w).collect::<Vec<_>>(), "moments": values});
            Ok(report(inputs, outputs, true))
        }
        Command::Distance { v, a, b, budget, .. } => {
            let gen = generator(sys, v)?;
            let d = distance(sys, &gen, &sys.parse_label(a)?, &sys.parse_label(b)?, *budget)?;
            let inputs = json!({"family": family, "v": sys.format_element(gen.element()), "a": a, "b": b, "budget": budget});
            Ok(report(inputs, json!({"distance": d}), true))
        }
        Command::Ball { v, center: c, radius, .. } => {
            let gen = generator(sys, v)?;
            let c = center(sys, c)?;
            let labels: Vec<String> = ball(sys, &gen, &c, *radius).iter().map(|l| sys.format_label(l)).collect();
            let inputs = json!({"family": family, "v": sys.format_element(gen.element()), "center": sys.format_label(&c), "radius": radius});
            Ok(report(inputs, json!({"size": labels.len(), "labels": labels}), true))
        }
        Command::Growth { v, center: c, radius, csv, .. } => {
            let gen = generator(sys, v)?;
            let c = center(sys, c)?;
            let rows = growth(sys, &gen, &c, *radius);
            if *csv {
                return Ok(Output::Raw(growth_csv(&rows)));
            }
            let inputs = json!({"family": family, "v": sys.format_element(gen.element()), "center": sys.format_label(&c), "radius": radius});
            let table: Vec<Value> = rows.iter().map(|r| json!({"radius": r.radius, "sphere": r.sphere, "ball": r.ball})).collect();
            Ok(report(inputs, Value::Array(table), true))
        }
        Command::Amenable { u, depth, tol, .. } => {
            let u_el = element_or_fundamental(sys, u)?;
            let tol = tol.unwrap_or_else(|| cfg.default_tolerance());
            let r = amenability_verdict(sys, &u_el, *depth, tol)?;
            let inputs = json!({"family": family, "u": sys.format_element(&u_el), "depth": depth, "tolerance": tol});
            Ok(report(inputs, r.to_json(), false))
        }
        Command::ListInvariant { depth, labels, .. } => {
            let lists = derived_lists(cfg, sys, *depth)?;
            let wanted: Option<BTreeSet<R::Label>> = if labels.is_empty() {
                None
            } else {
                Some(labels.iter().map(|l| sys.parse_label(l)).collect::<Result<_, _>>()?)
            };
            let values = cfg.generator_values();
            let mut out = Map::new();
            for (label, list) in &lists {
                if wanted.as_ref().is_some_and(|w| !w.contains(label)) {
                    continue;
                }
                let mut entry = json!({"list": list.to_strings(), "kac": is_kac(list)});
                if list.symbols().iter().all(|s| values.contains_key(s)) {
                    entry["qdim"] = json!(qdim(list, &values)?);
                }
                out.insert(sys.format_label(label), entry);
            }
            if let Some(w) = &wanted {
                for l in w {
                    if !lists.contains_key(l) {
                        return Err(fusion_core::Error::InvalidInput(format!(
                            "`{}` is not reached within depth {depth}",
                            sys.format_label(l)
                        ))
                        .into());
                    }
                }
            }
            let inputs = json!({"family": family, "depth": depth, "labels": labels});
            Ok(report(inputs, Value::Object(out), true))
        }
        Command::ModularSpectrum { list, label, depth, members, .. } => {
            let l = match (list, label) {
                (Some(text), _) => ParamList::parse_all(split_list(text))?,
                (None, Some(lab)) => {
                    let lists = derived_lists(cfg, sys, *depth)?;
                    let key = sys.parse_label(lab)?;
                    lists.get(&key).cloned().ok_or_else(|| {
                        fusion_core::Error::InvalidInput(format!("`{lab}` is not reached within depth {depth}"))
                    })?
                }
                (None, None) => return Err(CliError::Usage("give --list or --label".into())),
            };
            let lattice = modular_spectrum(&l);
            let mut membership = Map::new();
            for m in members {
                let p: Param = m.parse()?;
                membership.insert(m.clone(), lattice.contains(&p).into());
            }
            let inputs = json!({"family": family, "list": l.to_strings(), "members": members});
            let mut outputs = lattice.to_json();
            outputs["display"] = lattice.to_string().into();
            outputs["membership"] = Value::Object(membership);
            Ok(report(inputs, outputs, true))
        }
        Command::Graph { u, depth, dot, .. } => {
            let u_el = element_or_fundamental(sys, u)?;
            let t = tower(sys, &u_el, *depth)?;
            let graph = principal_graph(sys, &t);
            let weights = graph_weights(cfg, sys, &graph, *depth)?;
            let graph = with_weights(graph, &weights);
            if let Some(path) = dot {
                write_file(path, &export_dot(&graph))?;
            }
            let ends: Vec<String> = (0..=*depth).map(|k| t.end_dimension(k).to_string()).collect();
            let inputs = json!({"family": family, "u": sys.format_element(&u_el), "depth": depth});
            let outputs = json!({"graph": graph.to_json(), "end_dimensions": ends});
            Ok(report(inputs, outputs, true))
        }
        Command::PowersCheck { witness, .. } => {
            let calc = SetCalculus::new(sys);
            let w = calc.witness_from_json(&read_json(witness, "witness")?)?;
            let r = calc.check_witness(&w)?;
            let inputs = json!({"family": family, "witness": calc.witness_to_json(&w)});
            let outputs = json!({
                "holds": r.holds,
                "exact": r.exact,
                "first_condition": r.first_condition,
                "second_condition": r.second_condition,
                "detail": r.detail,
            });
            Ok(report(inputs, outputs, r.exact))
        }
        Command::PowersSearch { f, budget, .. } => {
            let calc = SetCalculus::new(sys);
            let f_set = split_list(f).into_iter().map(|l| sys.parse_label(l)).collect::<Result<BTreeSet<_>, _>>()?;
            let found = calc.search_witness(&f_set, *budget)?;
            let inputs = json!({"family": family, "F": split_list(f), "budget": budget});
            let outputs = match &found {
                Some(w) => json!({"found": true, "witness": calc.witness_to_json(w)}),
                None => json!({"found": false, "witness": null}),
            };
            Ok(report(inputs, outputs, true))
        }
    }
}

/// Quantum dimensions from the derived parameter lists when the
/// configuration has them, classical dimensions otherwise.
fn graph_weights<R: FusionRules>(
    cfg: &FamilyConfig,
    sys: &FusionSystem<R>,
    graph: &fusion_core::towers::WeightedGraph,
    depth: usize,
) -> CliResult<BTreeMap<String, f64>> {
    let names: BTreeSet<&str> = graph.vertices.iter().map(|v| v.name.as_str()).collect();
    let mut weights = BTreeMap::new();
    if cfg.params.is_some() {
        let values = cfg.generator_values();
        for (label, list) in derived_lists(cfg, sys, depth.max(1))? {
            let name = sys.format_label(&label);
            if names.contains(name.as_str()) && list.symbols().iter().all(|s| values.contains_key(s)) {
                weights.insert(name, qdim(&list, &values)?);
            }
        }
        return Ok(weights);
    }
    for name in names {
        let label = sys.parse_label(name)?;
        weights.insert(name.to_string(), fusion_core::big_ln(&sys.dim(&label)).exp());
    }
    Ok(weights)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Engine(fusion_core::Error::Io(e)))
}
