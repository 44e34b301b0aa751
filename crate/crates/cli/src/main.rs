use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use divgon::bramble::{self, Bramble};
use divgon::chipfire::{self, Divisor};
use divgon::enumerate;
use divgon::family::FamilySpec;
use divgon::formats;
use divgon::gonality;
use divgon::graph::MultiGraph;
use divgon::harmonic::{self, IndexedMorphism, MorphismError, Requirement};
use divgon::metric;
use divgon::theorem;
use divgon::treewidth::{self, TreewidthOptions};

#[derive(Parser)]
#[command(name = "divgon", version, about = "Chip-firing, gonality and treewidth on multigraphs")]
struct Cli {
    /// Output format.
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
    /// Write a named graph: tree SEED N | path N | cycle N | complete N |
    /// multipartite N1 N2 ... | grid ROWS COLS | hypercube D | banana K.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Exact gonality.
    Gonality {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<i64>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Rank of a divisor.
    Rank { graph: PathBuf, divisor: PathBuf },
    /// The v-reduced divisor equivalent to a divisor.
    Reduce {
        graph: PathBuf,
        divisor: PathBuf,
        #[arg(long)]
        at: usize,
    },
    /// Fire a vertex set once.
    Fire {
        graph: PathBuf,
        divisor: PathBuf,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long)]
        legal: bool,
    },
    /// Decide equivalence; prints a firing script when equivalent.
    Equiv { graph: PathBuf, first: PathBuf, second: PathBuf },
    /// Exact treewidth with an optimal elimination order.
    Treewidth {
        graph: PathBuf,
        #[arg(long)]
        bramble: Vec<PathBuf>,
        #[arg(long, default_value_t = treewidth::DEFAULT_LIMIT)]
        max_vertices: usize,
    },
    /// Bramble order or validity.
    Bramble {
        #[command(subcommand)]
        action: BrambleAction,
    },
    /// Check that gonality is at least treewidth on a suite.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Harmonic morphism certificates.
    Morphism {
        #[command(subcommand)]
        action: MorphismAction,
    },
    /// Metric graph operations.
    Metric {
        #[command(subcommand)]
        action: MetricAction,
    },
}

#[derive(Subcommand)]
enum BrambleAction {
    Order { graph: PathBuf, bramble: PathBuf },
    Check { graph: PathBuf, bramble: PathBuf },
}

#[derive(Subcommand)]
enum VerifyWhat {
    Theorem {
        /// `all-connected-n<=K` or graph files.
        #[arg(long, num_args = 1.., required = true)]
        suite: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    None,
    Harmonic,
    Nondegenerate,
    Homomorphism,
}

impl From<Level> for Requirement {
    fn from(l: Level) -> Self {
        match l {
            Level::None => Requirement::None,
            Level::Harmonic => Requirement::Harmonic,
            Level::Nondegenerate => Requirement::Nondegenerate,
            Level::Homomorphism => Requirement::Homomorphism,
        }
    }
}

#[derive(Subcommand)]
enum MorphismAction {
    /// Verify a morphism and print multiplicities and degree.
    Check {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Harmonic)]
        require: Level,
    },
    /// Pull back a divisor on the target.
    Pullback { source: PathBuf, target: PathBuf, morphism: PathBuf, divisor: PathBuf },
    /// Gonality bound from a positive-rank divisor on the target.
    Certify { source: PathBuf, target: PathBuf, morphism: PathBuf, divisor: PathBuf },
}

#[derive(Subcommand)]
enum MetricAction {
    /// Transfer a positive-rank divisor to a subdivision.
    Transfer { metric_graph: PathBuf, witness: PathBuf },
    /// Divisor of a piecewise-linear function.
    Div { metric_graph: PathBuf, function: PathBuf },
}

struct CliError {
    kind: &'static str,
    message: String,
}

fn err(kind: &'static str, message: impl ToString) -> CliError {
    CliError { kind, message: message.to_string() }
}

/// Text and JSON renderings of a result plus its verdict.
struct Output {
    text: String,
    json: Value,
    verdict: bool,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, verdict: true }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| err("io", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MultiGraph, CliError> {
    formats::parse_graph(&read(path)?).map_err(|e| err("format", format!("{}: {e}", path.display())))
}

fn load_divisor(path: &Path) -> Result<Divisor, CliError> {
    formats::parse_divisor(&read(path)?).map_err(|e| err("format", format!("{}: {e}", path.display())))
}

fn load_morphism(source: &Path, target: &Path, path: &Path) -> Result<IndexedMorphism, CliError> {
    let (s, t) = (load_graph(source)?, load_graph(target)?);
    formats::parse_morphism(&s, &t, &read(path)?).map_err(|e| err("format", format!("{}: {e}", path.display())))
}

fn line(d: &Divisor) -> String {
    format!("{d}\n")
}

fn numbers(params: &[String]) -> Result<Vec<usize>, CliError> {
    params.iter().map(|p| p.parse().map_err(|_| err("usage", format!("bad parameter `{p}`")))).collect()
}

fn family_spec(name: &str, params: &[String]) -> Result<FamilySpec, CliError> {
    let nums = numbers(params)?;
    let want = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(err("usage", format!("family `{name}` takes {k} parameter(s)")))
        }
    };
    Ok(match name {
        "tree" => {
            want(2)?;
            FamilySpec::RandomTree { seed: nums[0] as u64, n: nums[1] }
        }
        "path" => {
            want(1)?;
            FamilySpec::Path(nums[0])
        }
        "cycle" => {
            want(1)?;
            FamilySpec::Cycle(nums[0])
        }
        "complete" => {
            want(1)?;
            FamilySpec::Complete(nums[0])
        }
        "multipartite" => FamilySpec::CompleteMultipartite(nums),
        "grid" => {
            want(2)?;
            FamilySpec::Grid { rows: nums[0], cols: nums[1] }
        }
        "hypercube" => {
            want(1)?;
            FamilySpec::Hypercube(u32::try_from(nums[0]).map_err(|_| err("usage", "dimension too large"))?)
        }
        "banana" => {
            want(1)?;
            FamilySpec::Banana(nums[0])
        }
        other => return Err(err("usage", format!("unknown family `{other}`"))),
    })
}

fn suite_bound(name: &str) -> Option<usize> {
    let rest = name.strip_prefix("all-connected-n")?;
    let k = rest.strip_prefix("<=").or_else(|| rest.strip_prefix('≤'))?;
    k.parse().ok()
}

fn morphism_error(e: MorphismError) -> Result<Output, CliError> {
    match e {
        MorphismError::Malformed(_) | MorphismError::Chip(_) | MorphismError::InvalidWitness(_) => Err(err("input", e)),
        verdict => Ok(Output {
            text: format!("false: {verdict}\n"),
            json: json!({"valid": false, "reason": verdict.to_string()}),
            verdict: false,
        }),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Gen { family: name, params, output } => {
            let g = family_spec(name, params)?.generate().map_err(|e| err("input", e))?;
            let text = formats::write_graph(&g);
            match output {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| err("io", format!("{}: {e}", path.display())))?;
                    Ok(Output::ok("", json!({"vertices": g.vertex_count(), "edges": g.edge_count()})))
                }
                None => Ok(Output::ok(text, json!({"graph": formats::write_graph(&g)}))),
            }
        }
        Command::Gonality { graph, cap, witness_out } => {
            let g = load_graph(graph)?;
            let r = gonality::gonality(&g, *cap).map_err(|e| err("solver", e))?;
            let body = json!({"gonality": r.value, "witness": r.witness.values(), "examined": r.stats.examined});
            if let Some(path) = witness_out {
                let w = json!({"gonality": r.value, "witness": r.witness.values()});
                fs::write(path, format!("{w}\n")).map_err(|e| err("io", format!("{}: {e}", path.display())))?;
            }
            Ok(Output::ok(format!("{}\n", r.value), body))
        }
        Command::Rank { graph, divisor } => {
            let (g, d) = (load_graph(graph)?, load_divisor(divisor)?);
            let r = chipfire::rank(&g, &d).map_err(|e| err("input", e))?;
            Ok(Output::ok(format!("{r}\n"), json!({"rank": r})))
        }
        Command::Reduce { graph, divisor, at } => {
            let (g, d) = (load_graph(graph)?, load_divisor(divisor)?);
            let (r, x) = chipfire::reduce(&g, &d, *at).map_err(|e| err("input", e))?;
            Ok(Output::ok(line(&r), json!({"divisor": r.values(), "script": x.script})))
        }
        Command::Fire { graph, divisor, set, legal } => {
            let (g, d) = (load_graph(graph)?, load_divisor(divisor)?);
            match chipfire::fire_set(&g, &d, set, *legal) {
                Ok(r) => Ok(Output::ok(line(&r), json!({"divisor": r.values()}))),
                Err(e @ chipfire::ChipError::IllegalMove { .. }) => Ok(Output {
                    text: format!("illegal: {e}\n"),
                    json: json!({"legal": false, "reason": e.to_string()}),
                    verdict: false,
                }),
                Err(e) => Err(err("input", e)),
            }
        }
        Command::Equiv { graph, first, second } => {
            let (g, d, e) = (load_graph(graph)?, load_divisor(first)?, load_divisor(second)?);
            match chipfire::equivalent(&g, &d, &e).map_err(|e| err("input", e))? {
                Some(x) => Ok(Output::ok(
                    format!("{}\n", formats::write_script(&x)),
                    json!({"equivalent": true, "script": x.script}),
                )),
                None => Ok(Output {
                    text: "not equivalent\n".into(),
                    json: json!({"equivalent": false}),
                    verdict: false,
                }),
            }
        }
        Command::Treewidth { graph, bramble: paths, max_vertices } => {
            let g = load_graph(graph)?;
            let hints = paths
                .iter()
                .map(|p| formats::parse_bramble(&read(p)?).map_err(|e| err("format", format!("{}: {e}", p.display()))))
                .collect::<Result<Vec<Bramble>, _>>()?;
            let opts = TreewidthOptions { max_vertices: *max_vertices };
            let (w, order) = treewidth::treewidth_with(&g, &hints, opts).map_err(|e| err("solver", e))?;
            Ok(Output::ok(format!("{w}\n"), json!({"treewidth": w, "order": order.order})))
        }
        Command::Bramble { action } => {
            let (graph, path) = match action {
                BrambleAction::Order { graph, bramble } | BrambleAction::Check { graph, bramble } => (graph, bramble),
            };
            let g = load_graph(graph)?;
            let b = formats::parse_bramble(&read(path)?).map_err(|e| err("format", format!("{}: {e}", path.display())))?;
            match action {
                BrambleAction::Order { .. } => {
                    let (k, s) = bramble::bramble_order(&g, &b).map_err(|e| err("input", e))?;
                    let set: Vec<String> = s.vertices.iter().map(|v| v.to_string()).collect();
                    Ok(Output::ok(format!("{k}\n{}\n", set.join(" ")), json!({"order": k, "hitting_set": s.vertices})))
                }
                BrambleAction::Check { .. } => {
                    let ok = bramble::is_bramble(&g, &b).map_err(|e| err("input", e))?;
                    Ok(Output { text: format!("{ok}\n"), json: json!({"bramble": ok}), verdict: ok })
                }
            }
        }
        Command::Verify { what: VerifyWhat::Theorem { suite } } => {
            let items: Vec<(String, MultiGraph)> = if let [name] = suite.as_slice() {
                if let Some(k) = suite_bound(name) {
                    if k > 7 {
                        return Err(err("usage", "exhaustive suites go up to 7 vertices"));
                    }
                    enumerate::connected_simple_suite(k)
                } else {
                    vec![(name.clone(), load_graph(Path::new(name))?)]
                }
            } else {
                suite.iter().map(|p| Ok((p.clone(), load_graph(Path::new(p))?))).collect::<Result<_, CliError>>()?
            };
            let report = theorem::verify_main_theorem(&items);
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({"id": r.id, "n": r.n, "m": r.m, "dgon": r.dgon, "tw": r.tw, "gap": r.gap()}))
                .collect();
            let hist: serde_json::Map<String, Value> =
                report.gap_histogram.iter().map(|(g, c)| (g.to_string(), json!(c))).collect();
            let errors: Vec<Value> = report.errors.iter().map(|(id, e)| json!({"id": id, "error": e})).collect();
            let body = json!({"rows": rows, "violations": report.violations, "gap_histogram": hist, "errors": errors});
            Ok(Output { text: report.to_text(), json: body, verdict: report.holds() })
        }
        Command::Morphism { action } => match action {
            MorphismAction::Check { source, target, morphism, require } => {
                let psi = load_morphism(source, target, morphism)?;
                match harmonic::check_indexed(&psi, (*require).into()) {
                    Ok(Some(data)) => {
                        let m: Vec<String> = data.m.iter().map(|x| x.to_string()).collect();
                        Ok(Output::ok(
                            format!("degree {}\nm {}\n", data.degree, m.join(" ")),
                            json!({"valid": true, "degree": data.degree, "m": data.m}),
                        ))
                    }
                    Ok(None) => Ok(Output::ok("morphism\n", json!({"valid": true, "harmonic": false}))),
                    Err(e) => morphism_error(e),
                }
            }
            MorphismAction::Pullback { source, target, morphism, divisor } => {
                let psi = load_morphism(source, target, morphism)?;
                let d = load_divisor(divisor)?;
                plain(&psi)?;
                match harmonic::pullback(&psi.base, &d) {
                    Ok(p) => Ok(Output::ok(line(&p), json!({"divisor": p.values()}))),
                    Err(e) => morphism_error(e),
                }
            }
            MorphismAction::Certify { source, target, morphism, divisor } => {
                let psi = load_morphism(source, target, morphism)?;
                let d = load_divisor(divisor)?;
                plain(&psi)?;
                match harmonic::gonality_bound_certificate(&psi.base, &d) {
                    Ok((w, bound)) => Ok(Output::ok(
                        format!("{}bound {bound}\n", line(&w)),
                        json!({"valid": true, "witness": w.values(), "bound": bound}),
                    )),
                    Err(e) => morphism_error(e),
                }
            }
        },
        Command::Metric { action } => match action {
            MetricAction::Transfer { metric_graph, witness } => {
                let gamma = formats::parse_metric_graph(&read(metric_graph)?)
                    .map_err(|e| err("format", format!("{}: {e}", metric_graph.display())))?;
                let w = formats::parse_witness_file(&read(witness)?)
                    .map_err(|e| err("format", format!("{}: {e}", witness.display())))?;
                match metric::transfer_witness(&gamma, &w.divisor, &w.witnesses) {
                    Ok(r) => {
                        let text = format!(
                            "{}{}bound {}\nscale {}\n",
                            formats::write_graph(&r.graph),
                            line(&r.divisor),
                            r.bound,
                            r.scale
                        );
                        let body = json!({
                            "graph": formats::write_graph(&r.graph),
                            "divisor": r.divisor.values(),
                            "bound": r.bound,
                            "scale": r.scale.to_string(),
                            "scripts": r.scripts.iter().map(|x| x.script.clone()).collect::<Vec<_>>(),
                        });
                        Ok(Output::ok(text, body))
                    }
                    Err(e @ (metric::MetricError::WitnessInvalid { .. } | metric::MetricError::NotCovering { .. })) => {
                        Ok(Output {
                            text: format!("false: {e}\n"),
                            json: json!({"valid": false, "reason": e.to_string()}),
                            verdict: false,
                        })
                    }
                    Err(e) => Err(err("input", e)),
                }
            }
            MetricAction::Div { metric_graph, function } => {
                let gamma = formats::parse_metric_graph(&read(metric_graph)?)
                    .map_err(|e| err("format", format!("{}: {e}", metric_graph.display())))?;
                let f = formats::parse_pl_function(&read(function)?)
                    .map_err(|e| err("format", format!("{}: {e}", function.display())))?;
                let d = metric::to_div(&gamma, &f).map_err(|e| err("input", e))?;
                let text = formats::write_point_divisor(&d);
                let body: Value = serde_json::from_str(&text).expect("writer emits JSON");
                Ok(Output::ok(format!("{text}\n"), json!({"divisor": body})))
            }
        },
    }
}

fn plain(psi: &IndexedMorphism) -> Result<(), CliError> {
    if psi.indices.iter().zip(&psi.base.edge_map).any(|(&r, img)| r != 1 && matches!(img, harmonic::EdgeImage::Edge(_))) {
        return Err(err("usage", "pull back along the parallel-edge expansion of an indexed morphism"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", out.json),
            }
            if out.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind, "message": e.message}));
            ExitCode::from(2)
        }
    }
}
