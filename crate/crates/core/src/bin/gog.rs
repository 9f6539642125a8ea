use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gog_core::dot::to_dot;
use gog_core::format::{emit, parse_file, GogDocument, GroupSpec, ParseFileError};
use gog_core::rep::TopRep;
use gog_core::rtt::{check_rtt, maximal_filtration, relative_train_track_algorithm, StratumKind};
use gog_core::spectral::PfValue;
use gog_core::trace::Trace;
use gog_core::traintrack::{train_track_algorithm, TtError, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "gog", version, about = "Train tracks for free products of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition matrix, irreducibility, λ and strata.
    Info { input: PathBuf },
    /// Run the train track algorithm on an irreducible representative.
    Tt(RunArgs),
    /// Run the relative train track algorithm.
    Rtt(RunArgs),
    /// Report whether the map is a train track and a relative train track.
    Check { input: PathBuf },
    /// Write a Graphviz rendering.
    Dot {
        input: PathBuf,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    input: PathBuf,
    /// Output `.gog`; defaults to `<input>.tt.gog` or `<input>.rtt.gog`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Maximum number of moves.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

enum Failure {
    Input(String),
    Algorithm(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Algorithm(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Algorithm(m) | Failure::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { input } => info(&input),
        Command::Tt(args) => tt(&args),
        Command::Rtt(args) => rtt(&args),
        Command::Check { input } => check(&input),
        Command::Dot { input, output } => dot(&input, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &Path) -> Result<GogDocument, Failure> {
    parse_file(path).map_err(|e| match e {
        ParseFileError::Io(..) => Failure::Io(e.to_string()),
        ParseFileError::Format(e) => Failure::Input(format!("{}: {e}", path.display())),
    })
}

fn load_rep(path: &Path) -> Result<(GogDocument, TopRep), Failure> {
    let doc = load(path)?;
    let f = doc.rep().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((doc, f))
}

fn verbose() -> bool {
    std::env::var("GOG_TRACE").is_ok_and(|v| v == "verbose")
}

fn print_trace(trace: &Trace) {
    for line in trace.lines(verbose()) {
        println!("{line}");
    }
}

fn print_lambda(label: &str, lambda: &PfValue) {
    println!("{label} = {}", lambda.to_decimal(20));
    println!("minimal polynomial = {}", lambda.minimal_polynomial());
}

fn algorithm_failure(e: TtError) -> Failure {
    match &e {
        TtError::Reducible { trace, .. } | TtError::BudgetExceeded { trace, .. } => print_trace(trace),
        _ => {}
    }
    Failure::Algorithm(e.to_string())
}

fn info(path: &Path) -> Result<(), Failure> {
    let (_, f) = load_rep(path)?;
    let inv = f.graph.invariants();
    println!(
        "vertices {} edges {} eta {} beta {} complexity {} edge bound {}",
        f.graph.num_vertices(),
        f.graph.num_edges(),
        inv.eta,
        inv.beta,
        inv.complexity,
        inv.edge_bound
    );
    let m = f.transition_matrix();
    let names: Vec<&str> = f.graph.edges.iter().map(|e| e.name.as_str()).collect();
    println!("matrix (columns {})", names.join(" "));
    for row in &m.rows {
        let r: Vec<String> = row.iter().map(u64::to_string).collect();
        println!("  [{}]", r.join(" "));
    }
    println!("irreducible: {}", if m.is_irreducible() { "yes" } else { "no" });
    if m.is_irreducible() {
        let lambda = m.pf_eigenvalue().map_err(|e| Failure::Algorithm(e.to_string()))?;
        print_lambda("lambda", &lambda);
    }
    let filt = maximal_filtration(&f);
    println!("{}", filt.describe(&f.graph));
    Ok(())
}

fn default_output(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map_or("out".into(), |s| s.to_string_lossy().into_owned());
    input.with_file_name(format!("{stem}.{suffix}.gog"))
}

/// Emit `f` with the input's group declarations; table paths are made absolute
/// when the output lands in another directory.
fn write_rep(doc: &GogDocument, input: &Path, f: &TopRep, name: &str, out: &Path) -> Result<(), Failure> {
    let mut groups = doc.groups.clone();
    let (src_dir, out_dir) = (input.parent().unwrap_or(Path::new("")), out.parent().unwrap_or(Path::new("")));
    if src_dir != out_dir {
        for g in &mut groups {
            if let GroupSpec::Table(p) = &g.spec {
                let abs = std::fs::canonicalize(src_dir.join(p)).map_err(|e| Failure::Io(format!("{p}: {e}")))?;
                g.spec = GroupSpec::Table(abs.display().to_string());
            }
        }
    }
    let text = emit(&GogDocument::from_rep(f, name, &groups));
    std::fs::write(out, text).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn tt(args: &RunArgs) -> Result<(), Failure> {
    let (doc, f) = load_rep(&args.input)?;
    let out = train_track_algorithm(&f, args.budget).map_err(algorithm_failure)?;
    print_trace(&out.trace);
    println!("train track: {}", if out.rep.is_train_track() { "yes" } else { "no" });
    let lambda = out.rep.pf().map_err(|e| Failure::Algorithm(e.to_string()))?;
    let path = args.output.clone().unwrap_or_else(|| default_output(&args.input, "tt"));
    write_rep(&doc, &args.input, &out.rep, "f", &path)?;
    print_lambda("lambda", &lambda);
    Ok(())
}

fn rtt(args: &RunArgs) -> Result<(), Failure> {
    let (doc, f) = load_rep(&args.input)?;
    let out = relative_train_track_algorithm(&f, args.budget).map_err(algorithm_failure)?;
    print_trace(&out.trace);
    println!("{}", out.filtration.describe(&out.rep.graph));
    print!("{}", out.report.describe(&out.rep.graph));
    println!("relative train track: {}", if out.report.passes() { "yes" } else { "no" });
    let path = args.output.clone().unwrap_or_else(|| default_output(&args.input, "rtt"));
    write_rep(&doc, &args.input, &out.rep, "f", &path)?;
    for (i, s) in out.filtration.strata.iter().enumerate() {
        if let (StratumKind::Eg, Some(l)) = (s.kind, &s.lambda) {
            print_lambda(&format!("lambda H{}", i + 1), l);
        }
    }
    Ok(())
}

fn check(path: &Path) -> Result<(), Failure> {
    let doc = load(path)?;
    let f = doc.rep_unchecked();
    match f.validate() {
        Err(e) => println!("train track: no ({e})"),
        Ok(()) => {
            let offenders = f.train_track_offenders();
            if offenders.is_empty() {
                println!("train track: yes");
            } else {
                println!("train track: no");
                for o in &offenders {
                    println!(
                        "  image of {} takes the illegal turn {} at position {}",
                        f.graph.edge(o.edge).name,
                        o.turn.display(&f.graph),
                        o.position
                    );
                }
            }
        }
    }
    let filt = maximal_filtration(&f);
    let report = check_rtt(&f, &filt);
    print!("{}", report.describe(&f.graph));
    println!("relative train track: {}", if report.passes() { "yes" } else { "no" });
    Ok(())
}

fn dot(path: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let doc = load(path)?;
    let name = &doc.maps[0].0;
    let text = to_dot(&doc.rep_unchecked(), name);
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
