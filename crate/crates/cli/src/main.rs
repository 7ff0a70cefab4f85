//! `sscode`: construct rulers, evaluate line codes, and run Monte Carlo sweeps.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 verification failure.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use sensing_subspace::codebook::{beampattern, min_distance};
use sensing_subspace::rulers::{
    bose_chowla, is_golomb, is_modular_golomb, parse_ruler, ula, verify_perfect_difference, Ruler,
};
use sensing_subspace::sim::{
    format_sig, snr_grid, sweep_m, sweep_snr, Family, Geometry, MSweepSpec, MonteCarlo,
    SnrSweepSpec, SweepAxis, SweepResult, DEFAULT_TRIALS,
};

#[derive(Parser, Debug)]
#[command(
    name = "sscode",
    version,
    about = "Sparse-array line codes for direction finding"
)]
#[command(args_override_self = true)]
struct Cli {
    /// `key = value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or check sensor rulers.
    #[command(subcommand)]
    Ruler(RulerCmd),
    /// Evaluate the line code of a ruler.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Monte Carlo error-rate sweeps.
    #[command(subcommand)]
    Sim(SimCmd),
}

#[derive(Subcommand, Debug)]
enum RulerCmd {
    /// Bose-Chowla ruler for a prime power q (M = q, N = q^2 - 1).
    BoseChowla {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contiguous ruler {0, ..., M-1} on a grid of N points.
    Ula {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a ruler file. With --q (or N = q^2 - 1) checks the perfect
    /// difference property, otherwise the modular Golomb property.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct RulerSource {
    /// Bose-Chowla ruler with this q.
    #[arg(long, value_name = "Q")]
    bose_chowla: Option<u64>,
    /// ULA with this many sensors.
    #[arg(long, value_name = "M")]
    ula: Option<u64>,
    /// Ruler file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Minimum distance with the applicable bounds.
    Dmin {
        #[command(flatten)]
        source: RulerSource,
        /// Grid size for --ula (default M^2 - 1).
        #[arg(long, requires = "ula")]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Beampattern as a `k,B` CSV.
    Beampattern {
        #[command(flatten)]
        source: RulerSource,
        #[arg(long, requires = "ula")]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    #[value(alias = "bose-chowla")]
    Bc,
    Ula,
    Custom,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Monte Carlo trials per point.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report only distances and bounds.
    #[arg(long)]
    bound_only: bool,
    /// Worker thread cap (does not change results).
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV (standard output if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl McArgs {
    fn monte_carlo(&self) -> MonteCarlo {
        MonteCarlo {
            trials: self.trials,
            seed: self.seed,
            threads: self.threads,
            bound_only: self.bound_only,
        }
    }
}

#[derive(Subcommand, Debug)]
enum SimCmd {
    /// Error rate against SNR for a fixed array.
    SweepSnr {
        #[arg(long, value_enum, default_value = "bc")]
        family: FamilyArg,
        /// Bose-Chowla q.
        #[arg(long, default_value_t = 19)]
        q: u64,
        /// ULA sensor count.
        #[arg(long, default_value_t = 19)]
        m: u64,
        /// ULA grid size (default M^2 - 1).
        #[arg(long)]
        n: Option<u64>,
        /// Ruler file for the custom family.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        snr_min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        snr_max: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Distance and error rate against M with N = M^2 - 1.
    SweepM {
        #[arg(long, value_enum, default_value = "bc")]
        family: FamilyArg,
        #[arg(long, default_value_t = 2)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        snr: f64,
        #[command(flatten)]
        mc: McArgs,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<sensing_subspace::Error> for Failure {
    fn from(e: sensing_subspace::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let args = match config::expand_config(&Cli::command(), std::env::args().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_ruler(path: &PathBuf) -> Result<Ruler, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_ruler(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn source_ruler(src: &RulerSource, n: Option<u64>) -> Result<Ruler, Failure> {
    if let Some(q) = src.bose_chowla {
        Ok(bose_chowla(q)?)
    } else if let Some(m) = src.ula {
        Ok(Geometry::Ula { m, n }.ruler()?)
    } else {
        read_ruler(src.file.as_ref().expect("clap enforces one source"))
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Ruler(c) => run_ruler(c),
        Command::Code(c) => run_code(c),
        Command::Sim(c) => run_sim(c),
    }
}

fn run_ruler(cmd: RulerCmd) -> Result<(), Failure> {
    match cmd {
        RulerCmd::BoseChowla { q, out } => emit(out.as_ref(), &bose_chowla(q)?.to_string()),
        RulerCmd::Ula { m, n, out } => emit(out.as_ref(), &ula(m, n)?.to_string()),
        RulerCmd::Verify { file, q } => {
            let r = read_ruler(&file)?;
            let q = q.or_else(|| infer_q(r.modulus()));
            let mut report = format!(
                "N={}\nM={}\ngolomb={}\n",
                r.modulus(),
                r.len(),
                is_golomb(&r)
            );
            let modular = is_modular_golomb(&r);
            report.push_str(&format!("modular_golomb={modular}\n"));
            let failure = match q {
                Some(q) => {
                    let pd = verify_perfect_difference(&r, q)?;
                    report.push_str(&format!(
                        "perfect_difference(q={q})={}\nsupport={}\n",
                        pd.holds, pd.support_size
                    ));
                    pd.witness.map(|w| {
                        report.push_str(&format!("witness={w}\n"));
                        format!("not a perfect difference ruler for q={q}: {w}")
                    })
                }
                None => (!modular).then(|| "differences repeat modulo N".to_string()),
            };
            print!("{report}");
            match failure {
                Some(msg) => Err(Failure::Verification(msg)),
                None => Ok(()),
            }
        }
    }
}

/// `q` with `q^2 - 1 = n`, if one exists.
fn infer_q(n: u64) -> Option<u64> {
    let q = ((n as f64) + 1.0).sqrt().round() as u64;
    (q >= 2 && q.checked_mul(q) == Some(n + 1)).then_some(q)
}

fn na(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_sig)
}

fn run_code(cmd: CodeCmd) -> Result<(), Failure> {
    match cmd {
        CodeCmd::Dmin { source, n, out } => {
            let r = source_ruler(&source, n)?;
            let d = min_distance(&r);
            let text = format!(
                "ruler={}\nM={}\nN={}\ndmin={}\nargmin_k={}\nmax_offpeak={}\nwelch={}\nbound={}\n",
                r.label(),
                d.m,
                d.n,
                format_sig(d.dmin),
                d.argmin_lag,
                format_sig(d.max_offpeak_beampattern),
                na(d.welch_upper),
                na(d.construction_bound),
            );
            emit(out.as_ref(), &text)
        }
        CodeCmd::Beampattern { source, n, out } => {
            let r = source_ruler(&source, n)?;
            let mut text = String::from("k,B\n");
            for (k, b) in beampattern(&r).iter().enumerate() {
                text.push_str(&format!("{k},{}\n", format_sig(*b)));
            }
            emit(out.as_ref(), &text)
        }
    }
}

fn report_side_notes(res: &SweepResult) {
    if !res.skipped.is_empty() {
        let list: Vec<String> = res.skipped.iter().map(u64::to_string).collect();
        eprintln!("skipped M (no realizable ruler): {}", list.join(" "));
    }
    for row in &res.rows {
        if let Some(pe) = row.pe {
            if let Some(upper) = pe.upper95() {
                let x = match res.axis {
                    SweepAxis::Snr => format!("snr_db={}", format_sig(row.snr_db)),
                    SweepAxis::M => format!("M={}", row.m),
                };
                eprintln!(
                    "{x}: 0 errors in {} trials, pe_upper95={}",
                    pe.trials,
                    format_sig(upper)
                );
            }
        }
    }
}

fn run_sim(cmd: SimCmd) -> Result<(), Failure> {
    let (res, out) = match cmd {
        SimCmd::SweepSnr {
            family,
            q,
            m,
            n,
            file,
            snr_min,
            snr_max,
            step,
            mc,
        } => {
            let geometry = match family {
                FamilyArg::Bc => Geometry::BoseChowla { q },
                FamilyArg::Ula => Geometry::Ula { m, n },
                FamilyArg::Custom => {
                    let path =
                        file.ok_or_else(|| Failure::Usage("--family custom needs --file".into()))?;
                    Geometry::Custom(read_ruler(&path)?)
                }
            };
            let spec = SnrSweepSpec {
                geometry,
                snr_db: snr_grid(snr_min, snr_max, step)?,
                mc: mc.monte_carlo(),
            };
            (sweep_snr(&spec)?, mc.out)
        }
        SimCmd::SweepM {
            family,
            m_min,
            m_max,
            snr,
            mc,
        } => {
            let family = match family {
                FamilyArg::Bc => Family::BoseChowla,
                FamilyArg::Ula => Family::Ula,
                FamilyArg::Custom => {
                    return Err(Failure::Usage(
                        "sweep-m supports the bc and ula families".into(),
                    ))
                }
            };
            let spec = MSweepSpec {
                family,
                m_min,
                m_max,
                snr_db: snr,
                mc: mc.monte_carlo(),
            };
            (sweep_m(&spec)?, mc.out)
        }
    };
    report_side_notes(&res);
    emit(out.as_ref(), &res.to_csv())
}
