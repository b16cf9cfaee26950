use std::fs;
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plknot_core::analysis::{forcing_number, infeasible_core_catalog, max_forced, were_set, Mode};
use plknot_core::diagram::parse_bits;
use plknot_core::generators::{gen_random, gen_star, gen_torus};
use plknot_core::geometry::format_rational;
use plknot_core::io::{read_shadow, write_shadow};
use plknot_core::realizability::{build_constraints, diagnose, minimal_infeasible_core};
use plknot_core::search::{figure_targets, search, Family};
use plknot_core::{CrossingAssignment, Error, Pseudodiagram};
use serde_json::{json, Value};

const BITS_HELP: &str = "One 0/1 character per crossing, in ascending crossing id. 1 means the \
                         edge with the smaller index passes over.";

#[derive(Parser)]
#[command(name = "plknot", version, about = "Realizability, weighted resolution sets and forcing numbers of PL knot shadows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Args)]
struct Input {
    /// Shadow document.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct Output {
    /// Write the document here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a shadow document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// List the crossings of a shadow.
    Crossings(Input),
    /// Decide whether one resolution is realizable.
    Realizable {
        #[command(flatten)]
        input: Input,
        #[arg(long, help = BITS_HELP)]
        bits: String,
    },
    /// Weighted resolution set over all completions of the document.
    Were {
        #[command(flatten)]
        input: Input,
        /// Classify every completion, realizable or not.
        #[arg(long)]
        smooth: bool,
    },
    /// Smallest set of precrossings whose assignment forces the rest.
    Forcing {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Most crossings any partial assignment forces.
    Maxforced {
        #[command(flatten)]
        input: Input,
        /// Number of partial assignments to try (default 600000).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Minimal infeasible set of crossings of a nonrealizable resolution.
    Iis {
        #[command(flatten)]
        input: Input,
        #[arg(long, help = BITS_HELP)]
        bits: String,
    },
    /// Seeded search for shadows with the small-figure resolution sets.
    Search {
        /// Only this target (five-edge, six-edge, seven-edge).
        #[arg(long)]
        target: Option<String>,
        /// Override the target's shadow family.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 10_000)]
        seeds: u64,
        /// Append the search log to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Save each found shadow as <target>.json here.
        #[arg(long)]
        save_dir: Option<PathBuf>,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with the explorer bundle.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// The {n/2} star polygon.
    Star {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Shadow of the (n,2)-torus knot.
    Torus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        subdiv: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random polygon.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Random,
    Pentagram,
}

enum Failure {
    Usage(String),
    Validation(String),
    Budget,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget) => {
            eprintln!("error: budget exceeded, result is partial");
            ExitCode::from(3)
        }
    }
}

fn load(path: &Path) -> Result<Pseudodiagram, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    read_shadow(&bytes).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn resolution(d: &Pseudodiagram, bits: &str) -> Result<Pseudodiagram, Failure> {
    let bits = parse_bits(bits)?;
    Ok(Pseudodiagram::resolution_from_bits(Arc::clone(d.shadow_arc()), &bits)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn assignment_text(items: impl IntoIterator<Item = (usize, CrossingAssignment)>) -> String {
    let parts: Vec<String> = items.into_iter().map(|(c, v)| format!("{c}={v}")).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(" ")
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { kind } => {
            let (shadow, out) = match kind {
                GenKind::Star { n, out } => (gen_star(n)?, out),
                GenKind::Torus { n, subdiv, out } => (gen_torus(n, subdiv)?, out),
                GenKind::Random { vertices, seed, out } => (gen_random(vertices, seed)?, out),
            };
            let text = write_shadow(&Pseudodiagram::unassigned(Arc::new(shadow)));
            match out.output {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Crossings(input) => {
            let d = load(&input.file)?;
            let rows: Vec<Value> = d
                .shadow()
                .crossings()
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    json!({
                        "id": i,
                        "edge_a": g.edge_a,
                        "edge_b": g.edge_b,
                        "s": format_rational(&g.s),
                        "t": format_rational(&g.t),
                        "point": [format_rational(&g.point.x), format_rational(&g.point.y)],
                        "assignment": d.get(i),
                    })
                })
                .collect();
            match input.format {
                Format::Json => print_json(&Value::Array(rows)),
                Format::Table => {
                    println!("id\tedge_a\tedge_b\ts\tt\tx\ty\tassignment");
                    for (i, g) in d.shadow().crossings().iter().enumerate() {
                        println!(
                            "{i}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            g.edge_a,
                            g.edge_b,
                            format_rational(&g.s),
                            format_rational(&g.t),
                            format_rational(&g.point.x),
                            format_rational(&g.point.y),
                            d.get(i).map_or("-", |a| a.as_str())
                        );
                    }
                }
            }
        }
        Command::Realizable { input, bits } => {
            let d = load(&input.file)?;
            let r = resolution(&d, &bits)?;
            let result = diagnose(&build_constraints(&r));
            let witness = result.witness.as_ref().map(|z| z.iter().map(format_rational).collect::<Vec<_>>());
            match input.format {
                Format::Json => print_json(&json!({
                    "bits": bits,
                    "status": result.status,
                    "witness": witness,
                    "core": result.core,
                })),
                Format::Table => {
                    println!("{}", result.status);
                    if let Some(w) = witness {
                        for (i, h) in w.iter().enumerate() {
                            println!("z{i} = {h}");
                        }
                    }
                    if let Some(core) = &result.core {
                        println!("core: {}", core.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
                    }
                }
            }
        }
        Command::Iis { input, bits } => {
            let d = load(&input.file)?;
            let r = resolution(&d, &bits)?;
            let core = minimal_infeasible_core(&build_constraints(&r))?;
            let pairs: Vec<(usize, CrossingAssignment)> =
                core.iter().map(|&c| (c, r.get(c).expect("total"))).collect();
            match input.format {
                Format::Json => print_json(&json!({"bits": bits, "core": core, "assignment": pairs})),
                Format::Table => println!("core: {}", assignment_text(pairs)),
            }
        }
        Command::Were { input, smooth } => {
            let d = load(&input.file)?;
            let mode = if smooth { Mode::Smooth } else { Mode::Pl };
            let w = were_set(&d, mode)?;
            match input.format {
                Format::Json => print_json(&json!({
                    "mode": mode,
                    "completions": w.completions,
                    "were": w.to_string_map(),
                })),
                Format::Table => {
                    println!("class\tprobability");
                    for (k, p) in &w.entries {
                        println!("{k}\t{}", format_rational(p));
                    }
                    if mode == Mode::Pl {
                        println!("\u{2205}\t{}", format_rational(&w.empty_prob));
                    }
                }
            }
        }
        Command::Forcing { input, max_size } => {
            let d = load(&input.file)?;
            let report = forcing_number(&d, max_size)?;
            match input.format {
                Format::Json => print_json(&serde_json::to_value(&report).expect("json")),
                Format::Table => {
                    match report.forcing_number {
                        Some(k) => println!("forcing number: {k}"),
                        None => println!("forcing number: none up to size {}", report.searched_up_to),
                    }
                    if report.forcing_number.is_some() {
                        println!("witness: {}", assignment_text(report.witness_assignment.clone()));
                    }
                    if let Some(t) = &report.propagation_trace {
                        println!("derived: {}", assignment_text(t.derived.clone()));
                        println!("status: {}", t.status);
                    }
                    if let Some(w) = &report.waves {
                        let shape: Vec<String> = w.shape().iter().map(usize::to_string).collect();
                        println!("waves: {}", shape.join(" "));
                    }
                    if report.vacuous {
                        println!("vacuous: every precrossing is in the witness");
                    }
                }
            }
        }
        Command::Maxforced { input, budget } => {
            let d = load(&input.file)?;
            let report = max_forced(&d, budget);
            let cores = if report.budget_exceeded { None } else { Some(infeasible_core_catalog(&d)?.len()) };
            match input.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report).expect("json");
                    v["distinct_minimal_cores"] = json!(cores);
                    print_json(&v);
                }
                Format::Table => {
                    println!("m: {}", report.m);
                    println!("assignment: {}", assignment_text(report.assignment.clone()));
                    println!("derived: {}", assignment_text(report.derived.clone()));
                    let total = report.total_states.map_or("overflow".to_string(), |t| t.to_string());
                    println!("states: {} of {total}", report.states_explored);
                    if let Some(c) = cores {
                        println!("distinct minimal infeasible cores: {c}");
                    }
                }
            }
            if report.budget_exceeded {
                return Err(Failure::Budget);
            }
        }
        Command::Search { target, family, start, seeds, log, save_dir } => {
            let mut targets = figure_targets();
            if let Some(name) = &target {
                targets.retain(|t| &t.name == name);
                if targets.is_empty() {
                    return Err(Failure::Usage(format!("unknown target {name:?}")));
                }
            }
            for mut t in targets {
                if let Some(f) = family {
                    t.family = match f {
                        FamilyArg::Random => Family::Random,
                        FamilyArg::Pentagram => Family::Pentagram,
                    };
                }
                let outcome = search(&t, start..start.saturating_add(seeds));
                let text = outcome.log();
                print!("{text}");
                if let Some(path) = &log {
                    let mut f = fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    f.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?;
                }
                if let (Some(dir), Some((_, d))) = (&save_dir, &outcome.found) {
                    let path = dir.join(format!("{}.json", t.name));
                    fs::write(&path, write_shadow(d)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
            }
        }
        Command::Serve { port, host, static_dir } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Failure::Usage(format!("bad address {host}:{port}: {e}")))?;
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            rt.block_on(plknot_service::serve(addr, static_dir)).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}
