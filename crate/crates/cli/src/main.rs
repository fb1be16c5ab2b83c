use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use endocover::localfield::Normalization;
use endocover::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "endocover", version, about = "Finite-level computations for covers of tori and reductive groups")]
#[command(args_conflicts_with_subcommands = true, subcommand_required = false, arg_required_else_help = true)]
struct Cli {
    /// Print the JSON schema of an input kind (or of all of them) and exit.
    #[arg(long, value_name = "KIND", num_args = 0..=1, default_missing_value = "all")]
    schema: Option<String>,

    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Class field theory normalization used when orienting κ.
    #[arg(long, global = true, env = "ENDOCOVER_NORMALIZATION", value_enum, default_value = "deligne")]
    pub normalization: NormArg,

    /// Write the JSON result here instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum NormArg {
    Deligne,
    Artin,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Deligne => Normalization::Deligne,
            NormArg::Artin => Normalization::Artin,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of a finite Galois module in degrees 0 to 2.
    Cohomology {
        input: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Covers of tori and quasi-split groups.
    #[command(subcommand)]
    Covers(CoversCmd),
    /// Endoscopic cover characters.
    #[command(subcommand)]
    Endo(EndoCmd),
    /// Local field arithmetic.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Desk-scale transfer factors.
    #[command(subcommand)]
    Transfer(TransferCmd),
    /// Bundled presets.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BaseSource {
    /// aniso1, split1 or induced-Z/2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Lattice JSON `{group, rank, action}` or `{group, base}`.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CoversCmd {
    /// List the isomorphism classes of level-n covers.
    Classify {
        #[command(flatten)]
        base: BaseSource,
        #[arg(long)]
        n: i64,
    },
    /// Isomorphisms between two descriptors.
    Isom { first: PathBuf, second: PathBuf },
    /// Automorphisms of any level-n cover.
    Aut {
        #[command(flatten)]
        base: BaseSource,
        #[arg(long)]
        n: i64,
    },
    /// Baer sum of two descriptors, or the inverse of one.
    Baer {
        first: PathBuf,
        second: Option<PathBuf>,
        #[arg(long, conflicts_with = "second")]
        inverse: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum EndoCmd {
    /// Compute x_{H,G} and its L-embedding certificate.
    Cover {
        #[arg(long, conflicts_with = "input")]
        preset: Option<String>,
        #[arg(required_unless_present = "preset")]
        input: Option<PathBuf>,
        /// Require σ_H(s) = s on the nose.
        #[arg(long)]
        strict_s: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// The Hilbert symbol (a, b)_v.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "real")]
        place: String,
        /// `--place` given after `--`, as in `field hilbert -- -1 -1 --place real`.
        #[arg(hide = true, allow_hyphen_values = true)]
        rest: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransferCmd {
    /// Evaluate Δ′_x with every intermediate.
    Eval {
        #[arg(long, conflicts_with = "input")]
        fixture: Option<String>,
        #[arg(required_unless_present = "fixture")]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixturesCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Run {
        id: String,
        #[arg(long)]
        json: bool,
    },
}

/// What a command produced.
pub enum Output {
    Json(Value),
    /// Text plus whether the underlying checks passed.
    Text(String, bool),
}

pub fn read(path: &Path) -> endocover::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(path.display().to_string(), e.to_string()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invalid { .. } => 2,
        Error::Unsupported(_) => 3,
        Error::CheckFailed(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (&cli.schema, cli.command) {
        (Some(kind), _) => commands::schema(kind),
        (None, Some(cmd)) => dispatch(cmd, &cli.global),
        (None, None) => Err(Error::invalid("/", "no subcommand given")),
    };
    let (text, ok) = match result {
        Ok(Output::Json(v)) => (serde_json::to_string_pretty(&v).expect("serializable") + "\n", true),
        Ok(Output::Text(t, ok)) => (t, ok),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match &cli.global.output {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(cmd: Command, g: &Global) -> endocover::Result<Output> {
    match cmd {
        Command::Cohomology { input, degree } => commands::cohomology(&input, degree),
        Command::Covers(c) => commands::covers(c),
        Command::Endo(EndoCmd::Cover { preset, input, strict_s }) => commands::endo_cover(preset.as_deref(), input.as_deref(), strict_s),
        Command::Field(FieldCmd::Hilbert { a, b, place, rest }) => {
            let place = match rest.as_slice() {
                [] => place,
                [flag, v] if flag == "--place" => v.clone(),
                [kv] if kv.starts_with("--place=") => kv["--place=".len()..].to_string(),
                _ => return Err(Error::invalid("/", format!("unexpected arguments {rest:?}"))),
            };
            commands::hilbert(&a, &b, &place)
        }
        Command::Transfer(TransferCmd::Eval { fixture, input }) => commands::transfer(fixture.as_deref(), input.as_deref(), g.normalization.into()),
        Command::Fixtures(FixturesCmd::List { json }) => Ok(commands::fixtures_list(json)),
        Command::Fixtures(FixturesCmd::Run { id, json }) => commands::fixtures_run(&id, json),
    }
}
