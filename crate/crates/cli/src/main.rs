use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use stablecsa::construct::Group;
use stablecsa::field::DEFAULT_PRIME;
use stablecsa_cli::{run, verify_certificate, CliError, Command, CommandRequest, Mode, TupleSource, EXIT_CERTIFICATE, EXIT_INPUT, EXIT_OK};

#[derive(Parser)]
#[command(name = "stablecsa", version, about = "Stable tuples in algebras with involution, Pfister certificates, gerbe period and index")]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// epsilon = gcd(|d|, rank, multiplicities) and the existence conditions.
    Epsilon {
        #[arg(long)]
        file: PathBuf,
    },
    /// Period and index of the gerbe for a parabolic datum.
    PeriodIndex {
        #[arg(long)]
        file: PathBuf,
    },
    /// Build a tuple and check sigma(lambda) = -lambda.
    Construct(TupleArgs),
    /// Certify stability symbolically, by specialization, or both.
    Certify {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long, default_value = "symbolic")]
        mode: Mode,
        #[arg(long, env = "STABLECSA_TRIALS", default_value_t = 5)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
    /// Show that a vector is not an isotropic vector of a Pfister form, or
    /// check a quaternion norm form.
    PfisterCheck {
        /// JSON `{ "arity": n, "candidate": [..] }`.
        #[arg(long, conflicts_with_all = ["entry", "norm"])]
        file: Option<PathBuf>,
        #[arg(long, requires = "arity")]
        entry: Vec<String>,
        #[arg(long)]
        arity: Option<usize>,
        /// Quaternion index l for the norm form of (x_l, y_l).
        #[arg(long)]
        norm: Option<u16>,
    },
    /// Re-execute every certificate step in a saved JSON report.
    Verify { path: PathBuf },
}

#[derive(Args)]
struct TupleArgs {
    #[arg(long)]
    group: Option<Group>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, default_value_t = 2)]
    g: u32,
    /// The block example with an invariant isotropic plane.
    #[arg(long, conflicts_with_all = ["group", "file"])]
    planted: bool,
    /// JSON `{ "gram": [[..]], "elements": [[[..]]] }` of expressions.
    #[arg(long, conflicts_with = "group")]
    file: Option<PathBuf>,
}

impl TupleArgs {
    fn source(&self) -> Result<TupleSource, CliError> {
        if self.planted {
            return Ok(TupleSource::Planted);
        }
        if let Some(path) = &self.file {
            return Ok(TupleSource::File { path: path.clone() });
        }
        match (self.group, self.alpha, self.s) {
            (Some(group), Some(alpha), Some(s)) => Ok(TupleSource::Params { group, alpha, s, g: self.g }),
            _ => Err(CliError::Input("give --group, --alpha and --s, or --planted, or --file".into())),
        }
    }
}

fn request(sub: &Sub) -> Result<CommandRequest, CliError> {
    Ok(match sub {
        Sub::Epsilon { file } => CommandRequest { input: Some(file.clone()), ..CommandRequest::new(Command::Epsilon) },
        Sub::PeriodIndex { file } => CommandRequest { input: Some(file.clone()), ..CommandRequest::new(Command::PeriodIndex) },
        Sub::Construct(t) => CommandRequest { tuple: Some(t.source()?), ..CommandRequest::new(Command::Construct) },
        Sub::Certify { tuple, mode, trials, seed, prime } => CommandRequest {
            tuple: Some(tuple.source()?),
            mode: *mode,
            trials: *trials,
            seed: *seed,
            prime: *prime,
            ..CommandRequest::new(Command::Certify)
        },
        Sub::PfisterCheck { file, entry, arity, norm } => CommandRequest {
            input: file.clone(),
            entries: entry.clone(),
            arity: *arity,
            norm: *norm,
            ..CommandRequest::new(Command::PfisterCheck)
        },
        Sub::Verify { .. } => unreachable!("handled separately"),
    })
}

fn execute(cli: &Cli) -> anyhow::Result<i32> {
    if let Sub::Verify { path } = &cli.command {
        return match verify_certificate(path) {
            Ok(true) => {
                println!("certificate verified");
                Ok(EXIT_OK)
            }
            Ok(false) => {
                // rerun for the failing step
                let text = std::fs::read_to_string(path)?;
                let err = stablecsa_cli::verify_report(&stablecsa_cli::parse_report(&text)?).unwrap_err();
                println!("certificate rejected: {err}");
                Ok(EXIT_CERTIFICATE)
            }
            Err(e) => Err(e.into()),
        };
    }
    let req = request(&cli.command)?;
    let report = run(&req)?;
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &cli.output {
        std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    // clap's own usage status (2) would collide with the Undetermined status
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { EXIT_OK as u8 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(EXIT_INPUT, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
