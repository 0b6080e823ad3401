use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fatgraph::ainf::{fixtures, AInfinityAlgebra};
use fatgraph::complex::{coboundary_graph, homology_dims};
use fatgraph::enumerate::{basis, enumerate_graphs};
use fatgraph::io::{algebra_from_json, CEChainDoc, CanonicalDoc, GraphDoc, TensorDoc};
use fatgraph::scalar::Scalar;
use fatgraph::tcft::correlation;
use fatgraph::verify::{self, Suite, VerifyOptions};
use fatgraph::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fatgraph",
    version,
    about = "Ribbon graph complexes and partition functions of cyclic A-infinity algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Window {
    #[arg(long, default_value_t = 2)]
    vertices: usize,
    #[arg(long, default_value_t = 3)]
    edges: usize,
    /// Only connected graphs
    #[arg(long)]
    connected: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List canonical ribbon graphs of one bidegree
    Enumerate(Window),
    /// Betti numbers of the graph complex
    Homology {
        #[arg(long, default_value_t = 5)]
        edges: usize,
        #[arg(long)]
        connected: bool,
    },
    /// Partition function of an algebra on a window of graphs
    Partition {
        /// JSON file, or the name of a shipped fixture
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        window: Window,
    },
    /// Characteristic class of an algebra, truncated
    Characteristic {
        #[arg(long)]
        algebra: String,
        /// Largest exterior degree
        #[arg(long, default_value_t = 2)]
        exterior: usize,
        /// Largest total order of a wedge
        #[arg(long)]
        order: Option<usize>,
    },
    /// Correlator of a legged graph
    Correlate {
        #[arg(long)]
        algebra: String,
        /// JSON graph file with legs_in and legs_out
        #[arg(long)]
        graph: String,
    },
    /// Run a named identity suite
    Verify {
        /// one of d2, delta2, adjointness, kontsevich, triangle, roundtrip,
        /// bracket, cycle, exp, equivalence, characteristic, invariance, tcft
        suite: String,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Legs per side for tcft
        #[arg(long)]
        legs: Option<usize>,
        #[arg(long)]
        algebra: Option<String>,
    },
}

enum Outcome {
    Ok,
    IdentityFailed,
}

fn load_algebra(source: &str) -> Result<AInfinityAlgebra> {
    if Path::new(source).exists() {
        let text =
            std::fs::read_to_string(source).map_err(|e| Error::Input(format!("{source}: {e}")))?;
        return algebra_from_json(&text);
    }
    fixtures::by_name(source).ok_or_else(|| {
        Error::Input(format!(
            "{source:?} is neither a file nor one of {}",
            fixtures::NAMES.join(", ")
        ))
    })
}

fn valid_algebra(source: &str) -> Result<AInfinityAlgebra> {
    let a = load_algebra(source)?;
    let report = a.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::Input(format!(
            "invalid algebra: {} check failed{}: {}",
            v.check,
            v.order
                .map(|k| format!(" at order {k}"))
                .unwrap_or_default(),
            v.detail
        )));
    }
    Ok(a)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Text => print!("{}", text()),
        Format::Structured => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable output")
        ),
    }
}

fn graph_line(d: &CanonicalDoc) -> String {
    let flag = if d.vanishes() { " vanishes" } else { "" };
    format!(
        "({}, {}) aut {}{} vertices {:?} edges {:?}\n",
        d.vertices, d.edges, d.aut, flag, d.graph.vertices, d.graph.edges
    )
}

#[derive(Serialize)]
struct PartitionRow {
    graph: GraphDoc,
    aut: u64,
    value: Scalar,
}

#[derive(Serialize)]
struct PartitionDoc {
    rows: Vec<PartitionRow>,
    cycle_checked: usize,
    cycle_failures: Vec<GraphDoc>,
}

fn run(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Enumerate(w) => {
            let docs: Vec<CanonicalDoc> = enumerate_graphs(w.vertices, w.edges, w.connected)
                .iter()
                .map(|c| CanonicalDoc::of(&c.graph))
                .collect();
            emit(format, &docs, || docs.iter().map(graph_line).collect());
        }
        Command::Homology { edges, connected } => {
            let table = homology_dims(edges, connected);
            emit(format, &table, || {
                let mut s = format!("{:>3} {:>3} {:>5} {:>5}\n", "v", "e", "dim", "betti");
                for r in &table {
                    s += &format!(
                        "{:>3} {:>3} {:>5} {:>5}\n",
                        r.vertices, r.edges, r.dim, r.betti
                    );
                }
                s
            });
        }
        Command::Partition { algebra, window } => {
            let a = valid_algebra(&algebra)?;
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            let mut checked = 0;
            for e in 1..=window.edges {
                for v in 1..=window.vertices {
                    for c in basis(v, e, window.connected) {
                        let z = a.partition_value(&c.graph)?;
                        rows.push(PartitionRow {
                            graph: GraphDoc::from_graph(&c.graph),
                            aut: c.aut,
                            value: z,
                        });
                        if e < window.edges && v < window.vertices {
                            let dz: Scalar = coboundary_graph(&c.graph)
                                .terms()
                                .map(|(h, k)| a.partition_value(h).map(|z| k * &z))
                                .sum::<Result<Scalar>>()?;
                            checked += 1;
                            if !num_traits::Zero::is_zero(&dz) {
                                failures.push(GraphDoc::from_graph(&c.graph));
                            }
                        }
                    }
                }
            }
            let failed = !failures.is_empty();
            let doc = PartitionDoc {
                rows,
                cycle_checked: checked,
                cycle_failures: failures,
            };
            emit(format, &doc, || {
                let mut s = String::new();
                for r in &doc.rows {
                    s += &format!(
                        "({}, {}) aut {} Z = {} edges {:?} vertices {:?}\n",
                        r.graph.vertices.len(),
                        r.graph.edges.len(),
                        r.aut,
                        r.value,
                        r.graph.edges,
                        r.graph.vertices
                    );
                }
                s += &format!(
                    "Z(delta G) = 0 on {} of {} graphs\n",
                    doc.cycle_checked - doc.cycle_failures.len(),
                    doc.cycle_checked
                );
                s
            });
            if failed {
                return Ok(Outcome::IdentityFailed);
            }
        }
        Command::Characteristic {
            algebra,
            exterior,
            order,
        } => {
            let a = valid_algebra(&algebra)?;
            let mut c = a.characteristic_class(exterior)?;
            if let Some(k) = order {
                c = c.filter(|fs| fs.iter().map(Vec::len).sum::<usize>() <= k);
            }
            let doc = CEChainDoc::from_chain(&c);
            emit(format, &doc, || c.to_string());
        }
        Command::Correlate { algebra, graph } => {
            let a = valid_algebra(&algebra)?;
            let text = std::fs::read_to_string(&graph)
                .map_err(|e| Error::Input(format!("{graph}: {e}")))?;
            let g = serde_json::from_str::<GraphDoc>(&text)?.to_graph()?;
            let t = correlation(&a, &g)?;
            let doc = TensorDoc::from_tensor(&t);
            emit(format, &doc, || format!("{t}\n"));
        }
        Command::Verify {
            suite,
            edges,
            samples,
            seed,
            legs,
            algebra,
        } => {
            let suite: Suite = suite.parse()?;
            let algebras = match algebra {
                Some(source) => vec![(source.clone(), load_algebra(&source)?)],
                None => Vec::new(),
            };
            let opts = VerifyOptions {
                max_edges: edges,
                samples,
                seed,
                legs,
                algebras,
            };
            let report = verify::run(suite, &opts)?;
            emit(format, &report, || format!("{report}\n"));
            if !report.passed() {
                return Ok(Outcome::IdentityFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
