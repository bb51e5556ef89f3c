use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bloch_pair::channel::{apply_channel, cp_check, decay_factors, ChannelMode, ChannelParams};
use bloch_pair::curve::{run_curve, Quantity, SweepSpec};
use bloch_pair::entanglement::{entangled_time, ppt_scalar_oracle, ppt_scalar_paper, pt_spectrum};
use bloch_pair::error::Error;
use bloch_pair::figures::{parse_figure_id, run_all_figures, run_figure, FigureOptions};
use bloch_pair::qstate::{bloch_to_density, generic_pure_state, validate_state, DensityMatrix, FamilyParam};
use bloch_pair::teleport::{horodecki_measure, teleportation_window, telp_paper};
use bloch_pair::validate::{run_validate, SEARCH_HORIZON};

#[derive(Parser)]
#[command(
    name = "bloch-pair",
    version,
    about = "Two-qubit entanglement and teleportation under T1/T2 relaxation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bloch data, density matrix and diagnostics of the input family state.
    State {
        #[arg(long, default_value_t = 0.0)]
        p: f64,
    },
    /// Evolved family state at a single time.
    Evolve {
        #[command(flatten)]
        family: FamilyArgs,
        /// Evaluation time, in units of T1a.
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Physical)]
        mode: ModeArg,
    },
    /// Time sweep of one quantity.
    Curve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        quantity: QuantityArg,
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 501)]
        steps: usize,
        /// Input amplitude for `fidelity` (default 1).
        #[arg(long)]
        lambda1: Option<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Physical)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement lifetime and teleportation windows.
    Window {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = SEARCH_HORIZON)]
        tmax: f64,
    },
    /// Curves of a published figure preset (`1`..`8`, `3-body`, `7a`, ..., or `all`).
    Figure {
        id: String,
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 501)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Physical)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output directory.
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Runs the self-check suite; exits 2 if any check fails.
    Validate {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Family parameter and channel. Without `--t2a/--t2b`, `T1 = 1` and `T2 = 1/α`.
#[derive(Args)]
struct FamilyArgs {
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    seq: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    teq: f64,
    #[arg(long, default_value_t = 2.5)]
    alpha_a: f64,
    /// Defaults to `--alpha-a`.
    #[arg(long)]
    alpha_b: Option<f64>,
    #[arg(long)]
    t2a: Option<f64>,
    #[arg(long)]
    t2b: Option<f64>,
}

impl FamilyArgs {
    fn family(&self) -> Result<FamilyParam, Error> {
        FamilyParam::new(self.p)
    }

    fn channel(&self) -> Result<ChannelParams, Error> {
        let alpha_b = self.alpha_b.unwrap_or(self.alpha_a);
        for a in [self.alpha_a, alpha_b] {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Usage(format!("alpha must be positive, got {a}")));
            }
        }
        let t2a = self.t2a.unwrap_or(1.0 / self.alpha_a);
        let t2b = self.t2b.unwrap_or(1.0 / alpha_b);
        ChannelParams::from_alpha_t2(self.alpha_a, t2a, alpha_b, t2b, self.seq, self.teq)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PaperLiteral,
    Physical,
}

impl From<ModeArg> for ChannelMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PaperLiteral => ChannelMode::PaperLiteral,
            ModeArg::Physical => ChannelMode::Physical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    PptPaper,
    PptOracle,
    Doe,
    Telp,
    Horodecki,
    Fidelity,
    CpCheck,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::PptPaper => Quantity::PptPaper,
            QuantityArg::PptOracle => Quantity::PptOracle,
            QuantityArg::Doe => Quantity::Doe,
            QuantityArg::Telp => Quantity::Telp,
            QuantityArg::Horodecki => Quantity::Horodecki,
            QuantityArg::Fidelity => Quantity::Fidelity,
            QuantityArg::CpCheck => Quantity::CpCheck,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

enum Failure {
    Error(Error),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Usage(format!("cannot write {}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn matrix_json(m: &DensityMatrix) -> Value {
    let rows: Vec<Value> = (0..4)
        .map(|i| Value::Array((0..4).map(|j| json!([m.get(i, j).re, m.get(i, j).im])).collect()))
        .collect();
    Value::Array(rows)
}

fn state_report(m: &DensityMatrix) -> Result<Value, Error> {
    let spec = pt_spectrum(m)?;
    Ok(json!({
        "density_matrix": matrix_json(m),
        "diagnostics": validate_state(m),
        "pt_spectrum": spec.lambdas,
        "doe": spec.negativity_sum(),
    }))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::State { p } => {
            let s = generic_pure_state(FamilyParam::new(p)?);
            let mut report = state_report(&bloch_to_density(&s))?;
            report["bloch"] = json!(s);
            report["horodecki"] = json!(horodecki_measure(&s));
            print!("{}", json_line(&report));
        }
        Command::Evolve { family, t, mode } => {
            let (fp, cp) = (family.family()?, family.channel()?);
            let s = apply_channel(&generic_pure_state(fp), &cp, t, mode.into())?;
            let m = bloch_to_density(&s);
            let df = decay_factors(&cp, t)?;
            let mut report = state_report(&m)?;
            report["t"] = json!(t);
            report["bloch"] = json!(s);
            report["decay_factors"] = json!([df.gamma1, df.beta1, df.gamma2, df.beta2]);
            report["ppt_paper"] = json!(ppt_scalar_paper(fp, &df, cp.s_eq(), cp.t_eq()));
            report["ppt_oracle"] = json!(ppt_scalar_oracle(&m)?);
            report["telp"] = json!(telp_paper(fp, &df, cp.s_eq(), cp.t_eq()));
            report["horodecki"] = json!(horodecki_measure(&s));
            report["cp_check"] = json!(cp_check(&df, cp.s_eq(), cp.t_eq()).passes());
            print!("{}", json_line(&report));
        }
        Command::Curve {
            family,
            quantity,
            tmax,
            steps,
            lambda1,
            mode,
            format,
            out,
        } => {
            let quantity = Quantity::from(quantity);
            let lambda1 = match (quantity, lambda1) {
                (Quantity::Fidelity, None) => Some(1.0),
                (_, l) => l,
            };
            let spec = SweepSpec {
                quantity,
                p: family.family()?,
                channel: family.channel()?,
                mode: mode.into(),
                t_max: tmax,
                steps,
                lambda1,
            };
            let table = run_curve(&spec)?;
            let text = match format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            emit(&text, out.as_deref())?;
        }
        Command::Window { family, tmax } => {
            let (fp, cp) = (family.family()?, family.channel()?);
            let lifetime = entangled_time(fp, &cp, tmax)?;
            let windows = teleportation_window(fp, &cp, tmax)?;
            let report = json!({
                "time_unit": format!("t in units of T1a (T1a = {})", cp.t1a()),
                "horizon": tmax,
                "entangled_until": lifetime,
                "teleportation": windows,
            });
            print!("{}", json_line(&report));
        }
        Command::Figure {
            id,
            tmax,
            steps,
            mode,
            format,
            out,
        } => {
            let opts = FigureOptions {
                t_max: tmax,
                steps,
                mode: mode.into(),
            };
            let curves = if id == "all" {
                run_all_figures(&opts)?
            } else {
                let (n, variant) = parse_figure_id(&id)?;
                run_figure(n, variant.as_deref(), &opts)?
            };
            fs::create_dir_all(&out).map_err(|e| io_err(&out, e))?;
            for c in &curves {
                let (ext, text) = match format {
                    Format::Csv => ("csv", c.table.to_csv()),
                    Format::Json => ("json", c.table.to_json()),
                };
                let path = out.join(format!("{}.{ext}", c.name));
                fs::write(&path, text).map_err(|e| io_err(&path, e))?;
                println!("{}", path.display());
            }
        }
        Command::Validate { format, out } => {
            let report = run_validate()?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json(),
            };
            emit(&text, out.as_deref())?;
            if !report.passed() {
                return Err(Failure::Validation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Domain(_) | Error::InvalidInput(_) | Error::UnsupportedStructure(_) => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(3),
            }
        }
    }
}
