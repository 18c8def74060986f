//! `ctqw`: command-line front end for the walk equivalence checker.
//!
//! All vertex indices printed or accepted are 0-based.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ctqw_core::equivalence::StartDetail;
use ctqw_core::scan::{self, format_table};
use ctqw_core::{canon, catalog, graph6, Classifier, Error, FamilySpec, Generator, Graph};

const EXIT_PARSE: u8 = 2;
const EXIT_STRICT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Laplacian vs adjacency quantum walk equivalence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every start vertex of one graph.
    Check {
        /// Graph in graph6 format.
        graph6: String,
        /// Start vertices to report: `all` or a comma-separated list.
        #[arg(long, default_value = "all")]
        starts: String,
        /// Exit with status 3 if a tolerance-decided merge occurred.
        #[arg(long)]
        strict: bool,
    },
    /// Classify every graph in a graph6 file of one vertex order.
    Scan {
        file: PathBuf,
        #[arg(long, env = "CTQW_WORKERS")]
        workers: Option<usize>,
        /// Write the JSON summary here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Scan `DIR/graph<n>c.g6` for n = 1..=N and print the summary table.
    Table {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, env = "CTQW_WORKERS")]
        workers: Option<usize>,
        /// Write a JSON array of summaries here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a family member.
    ///
    /// Descriptors: F1:<left>,<k4>,<right>  F2:<head>,<k4>  F3:<bridge>
    /// F4:M=<m>  F5:<c1>,<c2>,<c3>  F6:base=<graph6>[;starts=<v>,...]
    /// F7:<cycle>  F8:i=<i>. Numeric parameters may also be written name=value
    /// (F1 left,k4,right; F2 head,k4; F3 bridge; F5 c1,c2,c3; F7 cycle).
    Family {
        descriptor: String,
        /// Print only the graph6 record.
        #[arg(long = "emit-graph6")]
        emit_graph6: bool,
        /// Run the classifier and require it to cover the designated starts.
        #[arg(long)]
        verify: bool,
    },
    /// Amplitudes (or probabilities) of one walk at one time.
    Evolve {
        graph6: String,
        #[arg(long, value_enum)]
        generator: GeneratorArg,
        #[arg(long)]
        start: usize,
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
        #[arg(long)]
        probabilities: bool,
    },
    /// Write all connected graphs on N vertices as graph6 (N <= 7 via the
    /// brute-force oracle, larger N via canonical augmentation).
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "A", alias = "a")]
    A,
}

impl From<GeneratorArg> for Generator {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::L => Generator::Laplacian,
            GeneratorArg::A => Generator::Adjacency,
        }
    }
}

/// Exit status requested by a command that otherwise succeeded.
struct Status(u8);

fn parse_graph(text: &str) -> anyhow::Result<Graph> {
    graph6::decode(text.trim()).with_context(|| format!("invalid graph6 record {text:?}"))
}

fn default_workers(workers: Option<usize>) -> usize {
    workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn write_json(path: &Path, body: &str) -> anyhow::Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn run_check(text: &str, starts: &str, strict: bool) -> anyhow::Result<Status> {
    let g = parse_graph(text)?;
    let selected: Vec<usize> = if starts == "all" {
        (0..g.n()).collect()
    } else {
        starts
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad start {s:?}"))
            })
            .collect::<anyhow::Result<_>>()?
    };
    if let Some(&bad) = selected.iter().find(|&&s| s >= g.n()) {
        bail!("start vertex {bad} outside 0..{}", g.n());
    }
    let report = Classifier::default().classify(&g)?;
    let profile = g.degree_profile();
    println!("graph {} (n = {}, vertices 0-based)", text.trim(), g.n());
    println!(
        "degrees {:?}{}",
        profile.degrees,
        if profile.is_regular { " (regular)" } else { "" }
    );
    for &s in &selected {
        match &report.details[s] {
            StartDetail::Equivalent => println!("start {s}: equivalent"),
            StartDetail::Differs {
                target,
                gap,
                laplacian,
                adjacency,
            } => println!(
                "start {s}: differs at target {target}, frequency {gap:.9}: L {laplacian:.9} vs A {adjacency:.9}"
            ),
            StartDetail::FilterRejected {
                time,
                target,
                difference,
            } => println!("start {s}: differs at t = {time}, target {target}, |dp| = {difference:.3e}"),
        }
    }
    println!("equivalent starts: {:?}", report.equivalent_starts);
    if report.suspicious_merges > 0 {
        eprintln!(
            "warning: {} tolerance-decided merge(s) of nearly equal frequencies",
            report.suspicious_merges
        );
        if strict {
            return Ok(Status(EXIT_STRICT));
        }
    }
    Ok(Status(0))
}

fn run_scan(
    file: &Path,
    workers: Option<usize>,
    json: Option<&Path>,
    strict: bool,
) -> anyhow::Result<Status> {
    let reader =
        BufReader::new(File::open(file).with_context(|| format!("opening {}", file.display()))?);
    let summary = scan::scan_stream(reader, default_workers(workers))?;
    print!("{}", format_table(std::slice::from_ref(&summary)));
    for hit in &summary.hits {
        println!("hit {} starts {:?}", hit.graph6, hit.starts);
    }
    println!("elapsed {:.3} s", summary.elapsed);
    if let Some(path) = json {
        write_json(path, &summary.to_json())?;
    }
    if summary.suspicious_merges > 0 {
        eprintln!(
            "warning: {} tolerance-decided merge(s) of nearly equal frequencies",
            summary.suspicious_merges
        );
        if strict {
            return Ok(Status(EXIT_STRICT));
        }
    }
    Ok(Status(0))
}

fn run_table(
    max_n: usize,
    dir: &Path,
    workers: Option<usize>,
    json: Option<&Path>,
) -> anyhow::Result<Status> {
    if max_n == 11 {
        eprintln!("note: n = 11 has about 10^9 graphs and is far beyond desk scale");
    }
    let rows = scan::reproduce_table(max_n, dir, default_workers(workers))?;
    print!("{}", format_table(&rows));
    if let Some(path) = json {
        let body = serde_json::to_string_pretty(&rows)?;
        write_json(path, &body)?;
    }
    Ok(Status(0))
}

fn run_family(descriptor: &str, emit_graph6: bool, verify: bool) -> anyhow::Result<Status> {
    let spec: FamilySpec = descriptor.parse()?;
    let inst = spec.generate()?;
    let record = graph6::encode(&inst.graph)?;
    if emit_graph6 {
        println!("{record}");
    } else {
        println!("family {} (vertices 0-based)", inst.label);
        println!(
            "n = {}, edges = {}",
            inst.graph.n(),
            inst.graph.edge_count()
        );
        println!("graph6 {record}");
        println!("designated starts {:?}", inst.designated_starts);
    }
    if verify {
        let report = Classifier::default().classify(&inst.graph)?;
        let missing: Vec<usize> = inst
            .designated_starts
            .iter()
            .copied()
            .filter(|s| !report.equivalent_starts.contains(s))
            .collect();
        if !emit_graph6 {
            println!(
                "classified equivalent starts {:?}",
                report.equivalent_starts
            );
        }
        if !missing.is_empty() {
            bail!("designated starts {missing:?} are not equivalent");
        }
        if !emit_graph6 {
            println!("verified");
        }
    }
    Ok(Status(0))
}

fn run_evolve(
    text: &str,
    generator: Generator,
    start: usize,
    time: f64,
    probabilities: bool,
) -> anyhow::Result<Status> {
    let g = parse_graph(text)?;
    let dec = ctqw_core::SpectralDecomposition::of_graph(&g, generator)?;
    let state = dec.evolve(start, time)?;
    println!("# generator {generator}, start {start}, t = {time}, vertices 0-based");
    if probabilities {
        for (v, p) in state.probabilities().iter().enumerate() {
            println!("{v}\t{p:.12}");
        }
    } else {
        for (v, z) in state.amplitudes.iter().enumerate() {
            println!("{v}\t{:+.12}\t{:+.12}", z.re, z.im);
        }
    }
    Ok(Status(0))
}

fn run_generate(n: usize, out: Option<&Path>) -> anyhow::Result<Status> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let count = if n <= canon::ORACLE_MAX_N {
        let graphs = canon::enumerate_connected(n)?;
        for g in &graphs {
            writeln!(sink, "{}", graph6::encode(g)?)?;
        }
        graphs.len()
    } else {
        catalog::write_connected(n, &mut sink)?
    };
    sink.flush()?;
    eprintln!("{count} connected graphs on {n} vertices");
    Ok(Status(0))
}

fn is_parse_error(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<Error>(),
            Some(
                Error::Graph6 { .. }
                    | Error::Line { .. }
                    | Error::Family(_)
                    | Error::MixedSizes { .. }
            )
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check {
            graph6,
            starts,
            strict,
        } => run_check(graph6, starts, *strict),
        Command::Scan {
            file,
            workers,
            json,
            strict,
        } => run_scan(file, *workers, json.as_deref(), *strict),
        Command::Table {
            max_n,
            dir,
            workers,
            json,
        } => run_table(*max_n, dir, *workers, json.as_deref()),
        Command::Family {
            descriptor,
            emit_graph6,
            verify,
        } => run_family(descriptor, *emit_graph6, *verify),
        Command::Evolve {
            graph6,
            generator,
            start,
            time,
            probabilities,
        } => run_evolve(graph6, (*generator).into(), *start, *time, *probabilities),
        Command::Generate { n, out } => run_generate(*n, out.as_deref()),
    };
    match result {
        Ok(Status(code)) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_parse_error(&err) {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
