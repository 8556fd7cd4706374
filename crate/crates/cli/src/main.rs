//! `sgs`: build, merge and query subgraph-sampling sketches of graph streams.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use subgraph_sampling::algorithms::{AlgoParams, Mode, StreamState};
use subgraph_sampling::oracle::materialize;
use subgraph_sampling::sample::CellMode;
use subgraph_sampling::solvers::PropertySpec;
use subgraph_sampling::stream_io::{
    compare, oracle_report, read_stream, write_stream, Family, GeneratorSpec, StreamFile,
};
use subgraph_sampling::wire::{self, MAGIC};

#[derive(Parser)]
#[command(name = "sgs", version, about = "Subgraph sampling sketches for dynamic graph streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic stream file.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write the stream here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a sketch file from a stream file.
    Sketch {
        stream: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Vertex count; defaults to the stream header.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Merge sketch files built with identical parameters.
    Merge {
        #[arg(required = true, num_args = 1..)]
        sketches: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer from a sketch file, or sketch a stream file and answer.
    Query {
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Vertex count; defaults to the stream header.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact answer by materializing the stream.
    Oracle {
        stream: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Vertex count; defaults to the stream header.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Query vs oracle over a sweep of generated streams.
    Compare {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Print the table as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value = "exact-matching")]
    mode: Mode,
    /// Promise parameter.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Arboricity bound.
    #[arg(long, default_value_t = 1)]
    nu: u32,
    /// Hyperedge size.
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, env = "SUBSAMPLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Amplification trials of contraction search.
    #[arg(long, default_value_t = 5)]
    reps: u32,
    #[arg(long, default_value_t = 100.0)]
    b_const: f64,
    #[arg(long, default_value_t = 5.0)]
    r_const: f64,
    /// counter, xor_unique or l0; defaults per mode.
    #[arg(long)]
    cell_mode: Option<CellMode>,
    /// Contraction-closed property, e.g. b_matching(2), max_forest.
    #[arg(long, default_value = "b_matching(1)")]
    prop: PropertySpec,
    /// Round weights up to powers of 1+eps.
    #[arg(long)]
    round: bool,
    #[arg(long, default_value_t = 1.0)]
    w_max: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// Override the arboricity vertex sampling rate.
    #[arg(long)]
    p: Option<f64>,
}

impl ParamArgs {
    fn to_params(&self) -> AlgoParams {
        AlgoParams {
            k: self.k,
            alpha: self.alpha,
            eps: self.eps,
            nu: self.nu,
            d: self.d,
            r_const: self.r_const,
            b_const: self.b_const,
            reps: self.reps,
            seed: self.seed,
            delta: self.delta,
            cell_mode: self.cell_mode,
            round: self.round,
            w_max: self.w_max,
            p_override: self.p,
            property: self.prop,
            ..AlgoParams::default()
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// planted-matching, planted-hitting-set, bounded-arboricity, grid,
    /// bipartite-complete, random-gnm, layered, perfect-matching
    #[arg(long, default_value = "planted-matching")]
    family: String,
    #[arg(long, default_value_t = 500)]
    n: u64,
    #[arg(long, default_value_t = 0.0)]
    churn: f64,
    /// Generator seed (trial t of `compare` uses gen_seed + t).
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Planted optimum; `compare` defaults it to --k.
    #[arg(long)]
    planted: Option<usize>,
    /// Hyperedge size of planted-hitting-set and random-gnm.
    #[arg(long = "arity", default_value_t = 2)]
    arity: usize,
    /// Arboricity of bounded-arboricity.
    #[arg(long = "trees", default_value_t = 1)]
    trees: u32,
    #[arg(long, default_value_t = 10)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cols: usize,
    /// Side sizes of bipartite-complete.
    #[arg(long, default_value_t = 20)]
    side_a: usize,
    #[arg(long, default_value_t = 20)]
    side_b: usize,
    /// Edge count of random-gnm.
    #[arg(long, default_value_t = 100)]
    m: usize,
    /// Comma-separated weights drawn uniformly per edge.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    /// Keep generator vertex labels instead of shuffling them.
    #[arg(long)]
    no_shuffle: bool,
}

impl FamilyArgs {
    fn to_spec(&self, default_k: usize) -> Result<GeneratorSpec> {
        let k = self.planted.unwrap_or(default_k);
        let family = match self.family.replace('_', "-").as_str() {
            "planted-matching" => Family::PlantedMatching { k },
            "planted-hitting-set" => Family::PlantedHittingSet { k, d: self.arity },
            "bounded-arboricity" => Family::BoundedArboricity { nu: self.trees },
            "grid" => Family::Grid { rows: self.rows, cols: self.cols },
            "bipartite-complete" => Family::BipartiteComplete { a: self.side_a, b: self.side_b },
            "random-gnm" => Family::RandomGnm { m: self.m, d: self.arity },
            "layered" => Family::Layered { k },
            "perfect-matching" => Family::PerfectMatching,
            other => bail!("unknown family '{other}'"),
        };
        let mut spec = GeneratorSpec::new(family, self.n).with_churn(self.churn).with_seed(self.gen_seed);
        spec.weights = self.weights.clone();
        spec.shuffle_labels = !self.no_shuffle;
        Ok(spec)
    }
}

fn load_stream(path: &Path) -> Result<StreamFile> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_stream(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn is_sketch_file(path: &Path) -> Result<bool> {
    let mut head = [0u8; 4];
    let mut f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(io::Read::read(&mut f, &mut head)? == 4 && head == MAGIC)
}

fn load_state(path: &Path) -> Result<StreamState> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    wire::from_bytes(&bytes).with_context(|| format!("decoding {}", path.display()))
}

fn build_state(stream: &StreamFile, params: &ParamArgs, n: Option<u64>) -> Result<StreamState> {
    let n = n.unwrap_or(stream.header.n);
    let mut state = StreamState::new(params.mode, params.to_params(), n)?;
    state.process_batch(&stream.updates)?;
    Ok(state)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            match writeln!(io::stdout().lock(), "{text}") {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { family, out } => {
            let spec = family.to_spec(4)?;
            let g = subgraph_sampling::stream_io::generate(&spec)?;
            match out {
                Some(p) => {
                    let f = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    write_stream(io::BufWriter::new(f), &g.stream)?;
                    let summary = serde_json::json!({
                        "out": p,
                        "n": g.stream.header.n,
                        "inserts": g.inserts,
                        "deletes": g.deletes,
                        "promise": g.promise,
                    });
                    emit(None, &serde_json::to_string_pretty(&summary)?)?;
                }
                None => write_stream(io::stdout().lock(), &g.stream)?,
            }
        }
        Command::Sketch { stream, params, n, out } => {
            let state = build_state(&load_stream(&stream)?, &params, n)?;
            fs::write(&out, wire::to_bytes(&state)).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Merge { sketches, out } => {
            let mut acc = load_state(&sketches[0])?;
            for p in &sketches[1..] {
                acc.merge_from(&load_state(p)?).with_context(|| format!("merging {}", p.display()))?;
            }
            fs::write(&out, wire::to_bytes(&acc)).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Query { input, params, n, out } => {
            let state = if is_sketch_file(&input)? { load_state(&input)? } else { build_state(&load_stream(&input)?, &params, n)? };
            let report = state.finish()?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
        }
        Command::Oracle { stream, params, n, out } => {
            let s = load_stream(&stream)?;
            let g = materialize(n.unwrap_or(s.header.n), &s.updates)?;
            let report = oracle_report(params.mode, &params.to_params(), &g)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
        }
        Command::Compare { params, family, trials, json, out } => {
            let spec = family.to_spec(params.k)?;
            let table = compare(params.mode, &params.to_params(), &spec, trials)?;
            let text = if json { serde_json::to_string_pretty(&table)? } else { table.to_string() };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed downstream pipe (`sgs gen | head`) is not a failure
        Err(e) if e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sgs: {e:#}");
            ExitCode::FAILURE
        }
    }
}
