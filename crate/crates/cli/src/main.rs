use clap::{Args, Parser, Subcommand};
use insep_core::corpus::{gen_corpus, Profile};
use insep_core::input::read_input;
use insep_core::pipeline::Options;
use insep_core::report::{error_kind, render_text, run, Command, SCHEMA};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "insep", version, about = "Inseparable base change of varieties in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduced structure of the base change.
    Reduce(RunArgs),
    /// Movable part of the linear system.
    Movable(RunArgs),
    /// Fixed part of the linear system.
    Fixed(RunArgs),
    /// Essential part of the base change.
    Essential(RunArgs),
    /// Canonical bundle formula check.
    Cbf(RunArgs),
    /// Fibration defined by the movable part.
    Fibration(RunArgs),
    /// Every stage.
    Analyze(RunArgs),
    /// Write a seeded family of input files.
    GenCorpus(CorpusArgs),
}

#[derive(Args)]
struct RunArgs {
    input: PathBuf,
    #[arg(long)]
    degree_bound: Option<u32>,
    #[arg(long)]
    chart: Option<usize>,
    /// Also write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Accepted for interface uniformity; the analysis is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CorpusArgs {
    outdir: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value = "fermat-hypersurface")]
    profile: String,
    /// Characteristics, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    p: Vec<u32>,
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn analysis(cmd: Command, args: RunArgs) -> ExitCode {
    let opts = Options { degree_bound: args.degree_bound, chart: args.chart };
    let (text, json_text, code) = match read_input(&args.input) {
        Ok(input) => {
            let r = run(cmd, &input, &opts);
            (render_text(&r), r.to_json(), r.exit_code)
        }
        Err(e) => {
            let v = json!({
                "schema": SCHEMA,
                "command": cmd.name(),
                "status": "error",
                "error": {"kind": error_kind(&e), "message": e.to_string()},
            });
            (format!("error ({}): {e}\n", error_kind(&e)), serde_json::to_string_pretty(&v).unwrap(), 1)
        }
    };
    print!("{text}");
    if let Some(path) = &args.json {
        if let Err(e) = write_atomic(path, &(json_text + "\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}

fn corpus(args: CorpusArgs) -> ExitCode {
    let Some(profile) = Profile::parse(&args.profile) else {
        let names: Vec<&str> = Profile::ALL.iter().map(|p| p.name()).collect();
        eprintln!("unknown profile {}; expected one of {}", args.profile, names.join(", "));
        return ExitCode::from(1);
    };
    let instances = match gen_corpus(args.seed, args.count, profile, &args.p) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&args.outdir) {
        eprintln!("cannot create {}: {e}", args.outdir.display());
        return ExitCode::from(1);
    }
    for inst in &instances {
        let path = args.outdir.join(format!("{}.toml", inst.name));
        if let Err(e) = write_atomic(&path, &inst.text()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
        println!("{}", path.display());
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Reduce(a) => analysis(Command::Reduce, a),
        Cmd::Movable(a) => analysis(Command::Movable, a),
        Cmd::Fixed(a) => analysis(Command::Fixed, a),
        Cmd::Essential(a) => analysis(Command::Essential, a),
        Cmd::Cbf(a) => analysis(Command::Cbf, a),
        Cmd::Fibration(a) => analysis(Command::Fibration, a),
        Cmd::Analyze(a) => analysis(Command::Analyze, a),
        Cmd::GenCorpus(a) => corpus(a),
    }
}
