//! `nilorb`: classify nilpotent orbits of `sl_n^(1)` from the command line.

mod doc;

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilorb::selfcheck::{self, Fault};
use nilorb::{
    adjoint_act, bracket, classify, conjugator_quasi_jordan, enumerate_orbits, quasi_jordanize, AffineElement, Error,
    FormNorm, QuasiJordanForm, Settings, ZeroTest, DEFAULT_WORKING_PRECISION,
};

use doc::{ElementDocument, GroupDocument, LabelDocument, OrbitRow};

#[derive(Parser, Debug)]
#[command(name = "nilorb", version, about = "Nilpotent orbits of the affine algebra sl_n^(1)")]
struct Cli {
    /// Working precision for inverses and roots.
    #[arg(long, global = true, default_value_t = DEFAULT_WORKING_PRECISION)]
    prec: i64,

    /// Normalisation of the invariant form.
    #[arg(long, global = true, value_enum, default_value_t = Form::Killing)]
    form: Form,

    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    Killing,
    Trace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InjectedFault {
    ResidueSignFlip,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the orbit label `(σ, k, λ)` of a nilpotent element.
    Classify { file: PathBuf },
    /// List one canonical representative per orbit.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        /// Central charge, a Q(i) literal.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        level: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Apply a group element to an algebra element.
    Act { group: PathBuf, element: PathBuf },
    /// The bracket of two algebra elements.
    Bracket { a: PathBuf, b: PathBuf },
    /// A group element moving the matrix part of FROM onto that of TO.
    Conjugator { from: PathBuf, to: PathBuf },
    /// Run the bundled invariant suites.
    Selfcheck {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<InjectedFault>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
    SelfcheckFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::SelfcheckFailed => 1,
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::NotNilpotent(_) => 3,
                Error::PrecisionExhausted(_) => 4,
                Error::NotConjugate { .. } | Error::ShapeMismatch(..) => 5,
                Error::Verification(_) => 70,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Core(e @ Error::PrecisionExhausted(_)) => write!(f, "{e}; try a larger --prec"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::SelfcheckFailed => write!(f, "self-check failed"),
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    if cli.prec <= 0 {
        return Err(CliError::Input("--prec must be positive".into()));
    }
    let form = match cli.form {
        Form::Killing => FormNorm::Killing,
        Form::Trace => FormNorm::Trace,
    };
    Ok(Settings { working_prec: cli.prec, form })
}

fn emit_json<T: serde::Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn emit_element(out: &mut impl Write, a: &AffineElement) -> io::Result<()> {
    emit_json(out, &ElementDocument::from_element(a))
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let settings = settings(cli)?;
    let io_err = |e: io::Error| CliError::Input(format!("write failed: {e}"));
    match &cli.command {
        Command::Classify { file } => {
            let a = ElementDocument::load(file)?;
            let label = classify(&a, &settings)?;
            if cli.json {
                emit_json(out, &LabelDocument::from(&label)).map_err(io_err)?;
            } else {
                writeln!(out, "{label}").map_err(io_err)?;
            }
        }
        Command::Enumerate { n, level, format } => {
            if *n == 0 {
                return Err(CliError::Input("-n must be at least 1".into()));
            }
            let level = doc::parse_scalar(level)?;
            let rows = enumerate_orbits(*n, &level);
            if cli.json || *format == Format::Json {
                let docs: Vec<OrbitRow> = rows.iter().map(|(l, m)| OrbitRow::new(l, m)).collect();
                emit_json(out, &docs).map_err(io_err)?;
            } else {
                writeln!(out, "partition\tk\tlevel\trepresentative").map_err(io_err)?;
                for (label, rep) in &rows {
                    let rep = OrbitRow::new(label, rep)
                        .matrix
                        .iter()
                        .map(|r| format!("[{}]", r.join(", ")))
                        .collect::<Vec<_>>()
                        .join(" ");
                    writeln!(out, "{}\t{}\t{}\t{rep}", label.partition, label.k, label.level.to_literal())
                        .map_err(io_err)?;
                }
            }
        }
        Command::Act { group, element } => {
            let h = GroupDocument::load(group, settings.working_prec)?;
            let a = ElementDocument::load(element)?;
            emit_element(out, &adjoint_act(&h, &a, &settings)?).map_err(io_err)?;
        }
        Command::Bracket { a, b } => {
            let a = ElementDocument::load(a)?;
            let b = ElementDocument::load(b)?;
            emit_element(out, &bracket(&a, &b, settings.form)?).map_err(io_err)?;
        }
        Command::Conjugator { from, to } => {
            let x = ElementDocument::load(from)?;
            let y = ElementDocument::load(to)?;
            let h = conjugator(&x, &y, &settings)?;
            emit_json(out, &GroupDocument::from_group(&h)).map_err(io_err)?;
        }
        Command::Selfcheck { seed, cases, inject_fault } => {
            let mut config = selfcheck::Config { settings, ..Default::default() };
            if let Some(seed) = seed {
                config.seed = *seed;
            }
            if let Some(cases) = cases {
                config.cases = *cases;
            }
            config.fault = inject_fault.map(|InjectedFault::ResidueSignFlip| Fault::ResidueSignFlip);
            let reports = selfcheck::run(&config);
            writeln!(out, "seed {} cases {}", config.seed, config.cases).map_err(io_err)?;
            for r in &reports {
                writeln!(out, "{r}").map_err(io_err)?;
            }
            let failing: Vec<_> = reports.iter().filter(|r| !r.ok()).collect();
            if !failing.is_empty() {
                for r in failing {
                    if let Some(cx) = &r.counterexample {
                        writeln!(out, "\ncounterexample for {}:\n{cx}", r.name).map_err(io_err)?;
                    }
                }
                return Err(CliError::SelfcheckFailed);
            }
        }
    }
    Ok(())
}

/// `h` with `Ad h` taking the matrix part of `x` to that of `y`.
///
/// Quasi-Jordan inputs are used directly; anything else is first brought to
/// quasi-Jordan form and the pieces are composed.
fn conjugator(x: &AffineElement, y: &AffineElement, settings: &Settings) -> Result<nilorb::GroupElement, CliError> {
    if x.n() != y.n() {
        return Err(CliError::Input(format!("dimensions differ: {} vs {}", x.n(), y.n())));
    }
    let wp = settings.working_prec;
    let h = match (QuasiJordanForm::from_matrix(x.mat()), QuasiJordanForm::from_matrix(y.mat())) {
        (Some(src), Some(dst)) if src.partition() == dst.partition() => conjugator_quasi_jordan(&src, &dst, wp)?,
        _ => {
            let (hx, dx) = quasi_jordanize(x.mat(), wp)?;
            let (hy, dy) = quasi_jordanize(y.mat(), wp)?;
            let c = conjugator_quasi_jordan(&dx, &dy, wp)?;
            hy.inverse(wp)?.compose(&c)?.compose(&hx)?
        }
    };
    let moved = adjoint_act(&h, &AffineElement::from_matrix(x.mat().clone())?, settings)?;
    match moved.mat().compare(y.mat())? {
        ZeroTest::Zero => Ok(h),
        ZeroTest::Undetermined => Err(Error::PrecisionExhausted("cannot verify the conjugator".into()).into()),
        ZeroTest::NonZero => Err(Error::Verification("conjugator does not map FROM onto TO".into()).into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
