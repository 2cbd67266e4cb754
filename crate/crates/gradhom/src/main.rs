use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gradhom::commands::{self, Outcome};
use gradhom::{corpus, CliError, Settings};

#[derive(Parser)]
#[command(name = "gradhom", version, about = "Proper gradient fields in the plane: invariants, reduction and homotopies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Field-spec JSON file; repeat for commands taking two fields.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Output directory; the primary document goes to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Half-width of the square searched for zeros.
    #[arg(long = "box", global = true)]
    half: Option<f64>,
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Winding-degree radius.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Launch directions per source.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Boundary tolerance of the zero search.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    Analyze,
    Classify,
    #[command(name = "homotopy-check")]
    HomotopyCheck {
        #[arg(long)]
        constructor: String,
    },
    Reduce,
    Corpus {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    Portrait,
}

fn settings(cli: &Cli) -> Settings {
    let base = match cli.command {
        Command::Corpus { .. } => corpus::default_settings(),
        _ => Settings::default(),
    };
    Settings {
        half: cli.half.unwrap_or(base.half),
        grid: cli.grid.unwrap_or(base.grid),
        radius: cli.radius.or(base.radius),
        samples: cli.samples.unwrap_or(base.samples),
        seed: cli.seed.unwrap_or(base.seed),
        tol: cli.tol.unwrap_or(base.tol),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = settings(cli);
    s.check()?;
    match &cli.command {
        Command::Analyze => commands::analyze_cmd(&cli.input, &s),
        Command::Classify => commands::classify_cmd(&cli.input, &s),
        Command::HomotopyCheck { constructor } => commands::homotopy_cmd(&cli.input, constructor, &s),
        Command::Reduce => commands::reduce_cmd(&cli.input, &s),
        Command::Corpus { count } => commands::corpus_cmd(&cli.input, *count, &s),
        Command::Portrait => commands::portrait_cmd(&cli.input, &s),
    }
}

fn emit(out: &Option<PathBuf>, o: &Outcome) -> Result<(), CliError> {
    let write_err = |path: &std::path::Path, source| CliError::Write { path: path.display().to_string(), source };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
            for (name, body) in &o.files {
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| write_err(&path, e))?;
            }
        }
        None => {
            if let Some((_, body)) = o.files.first() {
                std::io::stdout().write_all(body.as_bytes()).map_err(|e| write_err(std::path::Path::new("<stdout>"), e))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| emit(&cli.out, &o).map(|()| o.code)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            if let Some(dir) = &cli.out {
                if std::fs::create_dir_all(dir).is_ok() {
                    let _ = std::fs::write(dir.join("error.json"), e.to_json() + "\n");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
