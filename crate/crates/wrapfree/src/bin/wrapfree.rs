use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;
use serde::de::DeserializeOwned;
use serde::Serialize;

use wrapfree::class_l::classl_f;
use wrapfree::convolutions::{self, ClosedForm, ConvolutionResult};
use wrapfree::harness::{self, emit, Emittable, SuiteConfig, OUT_DIR_ENV};
use wrapfree::levy::{self, AdditiveBuild, CanonicalPairR, IdKind, MultBuild, CLASSICAL_MODES};
use wrapfree::numerics::{angle_grid, linspace};
use wrapfree::transforms::{recover_circle, recover_line, DEFAULT_LADDER};
use wrapfree::wrapping::{unwrap_descriptor, wrap_descriptor, wrap_direct};
use wrapfree::{BooleanIDDescriptor, ClassLDescriptor, Error, MeasureProfile, Result, TransformHandle};

#[derive(Parser)]
#[command(name = "wrapfree", version, about = "Wrapping of class-L measures onto the circle and their convolutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wrap a class-L descriptor; prints the Boolean descriptor, or a profile with --direct.
    Wrap {
        #[arg(long)]
        descriptor: PathBuf,
        /// Wrap the recovered line density by direct periodic summation.
        #[arg(long)]
        direct: bool,
        /// Period window `M` of the direct summation.
        #[arg(long, default_value_t = 64)]
        window: usize,
        #[command(flatten)]
        output: ProfileArgs,
    },
    /// Unwrap a Boolean descriptor onto the given branch.
    Unwrap {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        branch: i64,
    },
    /// Convolve two descriptors and write the resulting profile.
    Convolve {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long, value_enum)]
        domain: DomainArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: ProfileArgs,
    },
    /// Convolution power of one descriptor.
    Power {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        branch: i64,
        #[arg(long, value_enum, default_value_t = PowerOp::Free)]
        op: PowerOp,
        #[arg(long, value_enum, default_value_t = DomainArg::Circle)]
        domain: DomainArg,
        descriptor: PathBuf,
        #[command(flatten)]
        output: ProfileArgs,
    },
    /// Belinschi-Nica map at time t.
    Bn {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        branch: i64,
        #[arg(long, value_enum, default_value_t = DomainArg::Circle)]
        domain: DomainArg,
        descriptor: PathBuf,
        #[command(flatten)]
        output: ProfileArgs,
    },
    /// Infinitely divisible laws from Levy-Khinchin pairs.
    Levy {
        #[command(subcommand)]
        command: LevyCommand,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        only: Option<String>,
        /// Directory for report.json; overrides the environment and the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LevyCommand {
    /// Build the law of a pair: a line pair `(alpha, tau)` or a circle pair `(gamma, sigma)`.
    Build {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum)]
        domain: DomainArg,
        pair: PathBuf,
        #[command(flatten)]
        output: ProfileArgs,
    },
    /// Map a line pair to its circle pair.
    BpMap { pair: PathBuf },
    /// Loewner residual of the Belinschi-Nica flow on the circle |z| = radius.
    Burgers {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        /// Circle pair; the free Gaussian pair when omitted.
        pair: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// CSV destination; a JSON sidecar is written next to it. Stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid points of the emitted profile.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Half-width of the line window.
    #[arg(long, default_value_t = 20.0)]
    range: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Boolean,
    Free,
    Monotone,
}

#[derive(Clone, Copy, ValueEnum)]
enum PowerOp {
    Boolean,
    Free,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    Line,
    Circle,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Boolean,
    Free,
    Monotone,
    Classical,
}

impl From<KindArg> for IdKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Boolean => IdKind::Boolean,
            KindArg::Free => IdKind::Free,
            KindArg::Monotone => IdKind::Monotone,
            KindArg::Classical => IdKind::Classical,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Wrap { descriptor, direct, window, output } => {
            let d: ClassLDescriptor = load(&descriptor)?;
            if !direct {
                print_json(&wrap_descriptor(&d))?;
                if output.out.is_some() {
                    let eta = wrap_descriptor(&d).to_handle();
                    output.emit(&recover_circle(&eta, &angle_grid(output.grid), &DEFAULT_LADDER)?)?;
                }
                return Ok(ExitCode::SUCCESS);
            }
            let n = output.grid;
            let reach = ((window + 1) * n) as i64;
            let line: Vec<f64> = (-reach..=reach).map(|j| std::f64::consts::TAU * j as f64 / n as f64).collect();
            let profile = recover_line(&classl_f(&d), &line, &DEFAULT_LADDER)?;
            output.emit(&wrap_direct(&profile, &angle_grid(n), Some(window))?)?;
        }
        Command::Unwrap { descriptor, branch } => {
            let b: BooleanIDDescriptor = load(&descriptor)?;
            print_json(&unwrap_descriptor(&b, branch))?;
        }
        Command::Convolve { op, domain, a, b, output } => {
            let r = match domain {
                DomainArg::Line => {
                    let (d1, d2): (ClassLDescriptor, ClassLDescriptor) = (load(&a)?, load(&b)?);
                    match op {
                        Op::Boolean => Closed::ClassL(convolutions::boolean_add(&d1, &d2)),
                        Op::Free => Closed::Result(convolutions::free_add(&d1.to_handle(), &d2.to_handle())?),
                        Op::Monotone => Closed::Handle(convolutions::monotone_compose(&d1.to_handle(), &d2.to_handle())?),
                    }
                }
                DomainArg::Circle => {
                    let (b1, b2): (BooleanIDDescriptor, BooleanIDDescriptor) = (load(&a)?, load(&b)?);
                    match op {
                        Op::Boolean => Closed::BooleanId(convolutions::mult_boolean(&b1, &b2)),
                        Op::Free => Closed::Result(convolutions::mult_free(&b1, &b2)?),
                        Op::Monotone => Closed::Handle(convolutions::monotone_compose(&b1.to_handle(), &b2.to_handle())?),
                    }
                }
            };
            r.finish(domain, &output)?;
        }
        Command::Power { t, branch, op, domain, descriptor, output } => {
            let r = match (domain, op) {
                (DomainArg::Line, PowerOp::Boolean) => {
                    Closed::ClassL(convolutions::boolean_power(&load::<ClassLDescriptor>(&descriptor)?, t)?)
                }
                (DomainArg::Line, PowerOp::Free) => {
                    Closed::Result(convolutions::free_power(&load::<ClassLDescriptor>(&descriptor)?.to_handle(), t)?)
                }
                (DomainArg::Circle, PowerOp::Boolean) => {
                    Closed::BooleanId(convolutions::mult_boolean_power(&load(&descriptor)?, t, branch)?)
                }
                (DomainArg::Circle, PowerOp::Free) => {
                    Closed::Result(convolutions::mult_free_power(&load(&descriptor)?, t, branch)?)
                }
            };
            r.finish(domain, &output)?;
        }
        Command::Bn { t, branch, domain, descriptor, output } => {
            let r = match domain {
                DomainArg::Line => {
                    convolutions::belinschi_nica_line(&load::<ClassLDescriptor>(&descriptor)?.to_handle(), t)?
                }
                DomainArg::Circle => convolutions::belinschi_nica_circle(&load(&descriptor)?, t, branch)?,
            };
            Closed::Result(r).finish(domain, &output)?;
        }
        Command::Levy { command } => levy_command(command)?,
        Command::Verify { config, only, out } => return verify(config, only, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn levy_command(command: LevyCommand) -> Result<()> {
    match command {
        LevyCommand::Build { kind, domain, pair, output } => match domain {
            DomainArg::Line => {
                let p: CanonicalPairR = load(&pair)?;
                match levy::build_additive_id(kind.into(), &p) {
                    AdditiveBuild::Transform(h) => Closed::Handle(h).finish(domain, &output)?,
                    AdditiveBuild::Characteristic(cf) => {
                        let mut csv = String::from("t,re,im\n");
                        for t in linspace(-output.range, output.range, output.grid) {
                            let v = cf.eval(t);
                            csv.push_str(&format!("{t:e},{:e},{:e}\n", v.re, v.im));
                        }
                        write_text(output.out.as_deref(), &csv)?;
                    }
                }
            }
            DomainArg::Circle => {
                let b: BooleanIDDescriptor = load(&pair)?;
                match levy::build_mult_id(kind.into(), &b) {
                    MultBuild::Boolean(d) => Closed::BooleanId(d).finish(domain, &output)?,
                    MultBuild::Transform(h) => Closed::Handle(h).finish(domain, &output)?,
                    MultBuild::Fourier(series) => output.emit(&series.profile(&angle_grid(output.grid), CLASSICAL_MODES))?,
                }
            }
        },
        LevyCommand::BpMap { pair } => {
            let p: CanonicalPairR = load(&pair)?;
            print_json(&levy::bp_pair_map(&p)?)?;
        }
        LevyCommand::Burgers { t, grid, radius, pair } => {
            let b = match pair {
                Some(path) => load(&path)?,
                None => levy::free_gaussian_pair(),
            };
            let h = (t / 2.0).min(1e-4);
            let mut csv = String::from("theta,residual\n");
            let mut worst: f64 = 0.0;
            for theta in angle_grid(grid) {
                let r = levy::loewner_residual(&b, t, C::from_polar(radius, theta), h)?;
                worst = worst.max(r);
                csv.push_str(&format!("{theta:e},{r:e}\n"));
            }
            write_text(None, &csv)?;
            eprintln!("max residual {worst:.3e}");
        }
    }
    Ok(())
}

fn verify(config: Option<PathBuf>, only: Option<String>, out: Option<PathBuf>) -> Result<ExitCode> {
    let mut cfg = match config {
        Some(path) => SuiteConfig::load(&path)?,
        None => SuiteConfig::default(),
    };
    if only.is_some() {
        cfg.only = only;
    }
    if let Some(dir) = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)) {
        cfg.out_dir = Some(dir);
    }
    let report = harness::run_suite(&cfg)?;
    print!("{}", report.summary());
    let failed = report.records.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", report.records.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

/// A convolution output before recovery.
enum Closed {
    ClassL(ClassLDescriptor),
    BooleanId(BooleanIDDescriptor),
    Handle(TransformHandle),
    Result(ConvolutionResult),
}

impl Closed {
    /// Prints any exact descriptor and emits the recovered profile.
    fn finish(self, domain: DomainArg, output: &ProfileArgs) -> Result<()> {
        let handle = match self {
            Closed::ClassL(d) => {
                print_descriptor(output, &d)?;
                d.to_handle()
            }
            Closed::BooleanId(b) => {
                print_descriptor(output, &b)?;
                b.to_handle()
            }
            Closed::Handle(h) => h,
            Closed::Result(r) => {
                match &r.closed_form {
                    Some(ClosedForm::ClassL(d)) => print_descriptor(output, d)?,
                    Some(ClosedForm::BooleanId(b)) => print_descriptor(output, b)?,
                    None => {}
                }
                r.handle
            }
        };
        let profile = match domain {
            DomainArg::Line => {
                recover_line(&handle, &linspace(-output.range, output.range, output.grid), &DEFAULT_LADDER)?
            }
            DomainArg::Circle => recover_circle(&handle, &angle_grid(output.grid), &DEFAULT_LADDER)?,
        };
        output.emit(&profile)
    }
}

impl ProfileArgs {
    fn emit(&self, profile: &MeasureProfile) -> Result<()> {
        match &self.out {
            Some(path) => emit(Emittable::Profile(profile), path),
            None => write_text(None, &profile.to_csv()),
        }
    }
}

/// Exact descriptors go to stdout only when the profile goes to a file.
fn print_descriptor<T: Serialize>(output: &ProfileArgs, value: &T) -> Result<()> {
    if output.out.is_some() {
        print_json(value)?;
    }
    Ok(())
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    write_text(None, &(text + "\n"))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
    }
}
