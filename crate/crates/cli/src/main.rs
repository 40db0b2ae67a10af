use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use diamgap::approx::two_approx;
use diamgap::certificates::{
    generate_lb, generate_ub_certificate, verify_lb, verify_ub, CertParams, Document, GenMode,
};
use diamgap::graph::exact_diameter;
use diamgap::hopsets::{
    build_undirected_hopset, exhaustive_hopset_within, verify_additive_hopbound,
    verify_distance_preservation, ExhaustiveHopsets, Hopset, HopsetBuilder, HopsetParams,
    PairSelection, SampledHopsets,
};
use diamgap::ov::{brute_force, gen_random, plant, OvInstance};
use diamgap::reductions::{build_directed_gadget_within, build_undirected_gadget_within};
use diamgap::Graph;

mod experiment;

#[derive(Parser, Debug)]
#[command(
    name = "diamgap",
    version,
    about = "Diameter gadgets, certificates and hopsets"
)]
struct Cli {
    /// Cap on vertices plus edges for gadgets and exhaustive hopsets
    #[arg(
        long,
        global = true,
        env = "DIAMGAP_SIZE_BUDGET",
        default_value_t = 2_000_000
    )]
    size_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random OV instance
    GenOv {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        d: usize,
        #[arg(long, default_value_t = 0.5)]
        p_one: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force an orthogonal k-tuple into the instance
        #[arg(long)]
        plant: Option<usize>,
        /// Output file; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Search an OV instance for an orthogonal k-tuple by brute force
    SolveOv {
        instance: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
    },
    /// Reduce an OV instance to a diameter gadget
    Reduce {
        instance: PathBuf,
        /// Tuple size for the directed gadget (default 3)
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Directed)]
        variant: Variant,
        /// Writes `<prefix>.graph` and `<prefix>.map`
        #[arg(short, long)]
        out_prefix: PathBuf,
    },
    /// Compute the diameter exactly or within a factor of two
    Diameter {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = DiameterMode::Exact)]
        mode: DiameterMode,
        /// Start vertex for the two-approximation
        #[arg(long)]
        probe: Option<usize>,
    },
    /// Generate an upper-bound certificate or a lower-bound witness
    Certify {
        graph: PathBuf,
        #[arg(short = 'D', long = "D")]
        d: f64,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        #[arg(short, long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = CertModeArg::Unweighted)]
        mode: CertModeArg,
        /// Hopset source in hopset mode; sampled needs an undirected graph
        #[arg(long, value_enum, default_value_t = HopsetSource::Auto)]
        hopsets: HopsetSource,
        /// Level parameter of the sampled hopset
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit a lower-bound witness (a vertex of eccentricity above D)
        #[arg(long)]
        lower_bound: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a certificate or witness against a graph
    Verify {
        graph: PathBuf,
        certificate: PathBuf,
    },
    /// Build an additive hopset
    HopsetBuild {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(short, long, default_value_t = 0.3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add a shortcut for every reachable pair (works on directed graphs)
        #[arg(long)]
        exhaustive: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check distance preservation and the additive hop bound
    HopsetVerify {
        graph: PathBuf,
        hopset: PathBuf,
        /// Defaults to the hopset's claimed bound
        #[arg(long)]
        beta: Option<usize>,
        /// Defaults to the hopset's claimed slack
        #[arg(short, long)]
        epsilon: Option<f64>,
    },
    /// Sweep planted and random instances through the directed gadget
    ExperimentGap {
        #[arg(short, long, value_delimiter = ',', num_args = 1.., required = true)]
        k: Vec<usize>,
        #[arg(short, long, value_delimiter = ',', num_args = 1..)]
        n: Vec<usize>,
        #[arg(short, long, default_value_t = 6)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.75)]
        p_one: f64,
        /// CSV output; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the certifier on random graphs at D = diameter
    ExperimentCert {
        #[arg(short, long, value_delimiter = ',', num_args = 1..)]
        k: Vec<usize>,
        #[arg(short, long, value_delimiter = ',', num_args = 1..)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value_t = 0.5)]
        epsilon: f64,
        /// Random edges on top of the spanning backbone, per vertex
        #[arg(long, default_value_t = 2)]
        density: usize,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long)]
        undirected: bool,
        #[arg(long, value_enum, default_value_t = CertModeArg::Unweighted)]
        mode: CertModeArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Directed,
    Undirected,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DiameterMode {
    Exact,
    TwoApprox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum CertModeArg {
    Unweighted,
    Hopset,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HopsetSource {
    /// Sampled for undirected graphs, exhaustive for directed ones
    Auto,
    Sampled,
    Exhaustive,
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::read_file(path).with_context(|| format!("reading graph {}", path.display()))
}

fn read_instance(path: &Path) -> Result<OvInstance> {
    OvInstance::read_file(path).with_context(|| format!("reading instance {}", path.display()))
}

/// Whole numbers print without a fractional part.
fn number(x: f64) -> serde_json::Value {
    if x.fract() == 0.0 && x.abs() < 2f64.powi(53) {
        json!(x as i64)
    } else {
        json!(x)
    }
}

fn units(g: &Graph, d: diamgap::Distance) -> serde_json::Value {
    g.distance_units(d).map_or(serde_json::Value::Null, number)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub(crate) fn hopset_builder(
    g: &Graph,
    source: HopsetSourceChoice,
    delta: f64,
    epsilon: f64,
    budget: u64,
) -> Result<Box<dyn HopsetBuilder + Sync>> {
    Ok(match source {
        HopsetSourceChoice::Sampled => {
            if g.is_directed() {
                bail!("sampled hopsets need an undirected graph; use --hopsets exhaustive");
            }
            Box::new(SampledHopsets(HopsetParams::new(delta, epsilon)?))
        }
        HopsetSourceChoice::Exhaustive => Box::new(ExhaustiveHopsets { budget }),
    })
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum HopsetSourceChoice {
    Sampled,
    Exhaustive,
}

impl HopsetSource {
    fn resolve(self, g: &Graph) -> HopsetSourceChoice {
        match self {
            HopsetSource::Sampled => HopsetSourceChoice::Sampled,
            HopsetSource::Exhaustive => HopsetSourceChoice::Exhaustive,
            HopsetSource::Auto if g.is_directed() => HopsetSourceChoice::Exhaustive,
            HopsetSource::Auto => HopsetSourceChoice::Sampled,
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let budget = cli.size_budget;
    match cli.command {
        Command::GenOv {
            n,
            d,
            p_one,
            seed,
            plant: k,
            out,
        } => {
            let mut inst = gen_random(n, d, p_one, seed)?;
            if let Some(k) = k {
                inst = plant(&inst, k, seed)?;
            }
            write_or_print(out.as_deref(), &inst.to_text())?;
        }
        Command::SolveOv { instance, k } => {
            let inst = read_instance(&instance)?;
            let start = Instant::now();
            let found = brute_force(&inst, k)?;
            println!(
                "{}",
                json!({
                    "k": k,
                    "solution": found.map(|w| w.0),
                    "runtime_ms": start.elapsed().as_millis(),
                })
            );
        }
        Command::Reduce {
            instance,
            k,
            variant,
            out_prefix,
        } => {
            let inst = read_instance(&instance)?;
            let gg = match variant {
                Variant::Directed => build_directed_gadget_within(&inst, k.unwrap_or(3), budget)?,
                Variant::Undirected => {
                    if k.is_some() {
                        eprintln!("warning: the undirected gadget ignores --k");
                    }
                    build_undirected_gadget_within(&inst, budget)?
                }
            };
            let graph_path = out_prefix.with_extension("graph");
            let map_path = out_prefix.with_extension("map");
            gg.graph.write_file(&graph_path)?;
            gg.write_mapping(&map_path)?;
            println!(
                "{}",
                json!({
                    "graph": graph_path,
                    "mapping": map_path,
                    "vertices": gg.graph.vertex_count(),
                    "edges": gg.graph.edge_count(),
                })
            );
        }
        Command::Diameter { graph, mode, probe } => {
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let record = match mode {
                DiameterMode::Exact => {
                    let d = exact_diameter(&g);
                    json!({
                        "mode": "exact",
                        "diameter": units(&g, d),
                        "connected": d.is_finite(),
                        "runtime_ms": start.elapsed().as_millis(),
                    })
                }
                DiameterMode::TwoApprox => match two_approx(&g, probe) {
                    Ok(r) => json!({
                        "mode": "two_approx",
                        "lower": number(r.lower),
                        "upper": number(r.upper),
                        "connected": true,
                        "runtime_ms": start.elapsed().as_millis(),
                    }),
                    Err(diamgap::Error::Disconnected) => json!({
                        "mode": "two_approx",
                        "lower": null,
                        "upper": null,
                        "connected": false,
                        "runtime_ms": start.elapsed().as_millis(),
                    }),
                    Err(e) => return Err(e.into()),
                },
            };
            println!("{record}");
        }
        Command::Certify {
            graph,
            d,
            k,
            epsilon,
            mode,
            hopsets,
            delta,
            seed,
            lower_bound,
            out,
        } => {
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let doc = if lower_bound {
                if !(d.is_finite() && d >= 0.0) {
                    bail!("D must be a non-negative number, got {d}");
                }
                generate_lb(&g, d).map(|witness| Document::LowerBound { d, witness })
            } else {
                let params = CertParams::new(k, d, epsilon)?;
                let result = match mode {
                    CertModeArg::Unweighted => {
                        generate_ub_certificate(&g, &params, GenMode::Unweighted, seed)
                    }
                    CertModeArg::Hopset => {
                        let builder =
                            hopset_builder(&g, hopsets.resolve(&g), delta, epsilon, budget)?;
                        generate_ub_certificate(&g, &params, GenMode::Hopset(&*builder), seed)
                    }
                };
                match result {
                    Ok(certificate) => Some(Document::UpperBound {
                        params,
                        certificate,
                    }),
                    Err(diamgap::Error::GenerationFailure(reason)) => {
                        eprintln!("generation failed: {reason}");
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            let runtime_ms = start.elapsed().as_millis();
            let Some(doc) = doc else {
                println!("{}", json!({"status": "failure", "runtime_ms": runtime_ms}));
                return Ok(ExitCode::FAILURE);
            };
            doc.write_file(&out)?;
            let variant = match &doc {
                Document::UpperBound { certificate, .. } => certificate.variant_name(),
                Document::LowerBound { .. } => "lower_bound",
            };
            println!(
                "{}",
                json!({
                    "status": "ok",
                    "variant": variant,
                    "out": out,
                    "runtime_ms": runtime_ms,
                })
            );
        }
        Command::Verify { graph, certificate } => {
            let g = read_graph(&graph)?;
            let doc = Document::read_file(&certificate)
                .with_context(|| format!("reading certificate {}", certificate.display()))?;
            let verdict = match &doc {
                Document::UpperBound {
                    params,
                    certificate,
                } => verify_ub(&g, certificate, params),
                Document::LowerBound { d, witness } => verify_lb(&g, witness, *d),
            };
            println!("{verdict}");
            if !verdict.is_accept() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::HopsetBuild {
            graph,
            delta,
            epsilon,
            seed,
            exhaustive,
            out,
        } => {
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let h = if exhaustive {
                exhaustive_hopset_within(&g, budget)?
            } else {
                build_undirected_hopset(&g, delta, epsilon, seed)?
            };
            h.write_file(&out)?;
            println!(
                "{}",
                json!({
                    "shortcuts": h.len(),
                    "beta": h.claimed_beta,
                    "epsilon": h.claimed_epsilon,
                    "out": out,
                    "runtime_ms": start.elapsed().as_millis(),
                })
            );
        }
        Command::HopsetVerify {
            graph,
            hopset,
            beta,
            epsilon,
        } => {
            let g = read_graph(&graph)?;
            let h = Hopset::read_file(&hopset)
                .with_context(|| format!("reading hopset {}", hopset.display()))?;
            let beta = beta.unwrap_or(h.claimed_beta);
            let epsilon = epsilon.unwrap_or(h.claimed_epsilon);
            let preserves = verify_distance_preservation(&g, &h);
            let hopbound = verify_additive_hopbound(&g, &h, beta, epsilon, PairSelection::All);
            println!(
                "{}",
                json!({
                    "preserves_distances": preserves,
                    "hopbound": hopbound,
                    "beta": beta,
                    "epsilon": epsilon,
                })
            );
            if !(preserves && hopbound) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::ExperimentGap {
            k,
            n,
            d,
            trials,
            seed,
            p_one,
            out,
        } => {
            let sweep = experiment::GapSweep {
                ks: k,
                ns: n,
                dim: d,
                trials,
                seed,
                p_one,
                budget,
            };
            let rows = sweep.run()?;
            let violations = rows.iter().filter(|r| !r.gap_ok).count();
            let mut text = experiment::GapRow::HEADER.to_string() + "\n";
            for r in &rows {
                text += &r.to_csv();
                text.push('\n');
            }
            text += &format!("# summary rows={} violations={violations}\n", rows.len());
            write_or_print(out.as_deref(), &text)?;
            if violations > 0 {
                eprintln!("{violations} gap violations");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::ExperimentCert {
            k,
            n,
            trials,
            seed,
            epsilon,
            density,
            max_weight,
            undirected,
            mode,
            out,
        } => {
            let sweep = experiment::CertSweep {
                ks: k,
                ns: n,
                trials,
                seed,
                epsilon,
                density,
                max_weight,
                directed: !undirected,
                mode,
                budget,
            };
            let rows = sweep.run()?;
            let accepted = rows.iter().filter(|r| r.accepted).count();
            let mut text = experiment::CertRow::HEADER.to_string() + "\n";
            for r in &rows {
                text += &r.to_csv();
                text.push('\n');
            }
            text += &format!("# summary rows={} accepted={accepted}\n", rows.len());
            write_or_print(out.as_deref(), &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
