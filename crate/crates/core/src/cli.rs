//! Command-line front end. Exit codes: 0 success, 1 usage or configuration
//! error, 2 divergence in a scenario run, 3 failed sweep assertion.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::coupling::{analyze, scaling_equivalence, PRESENCE_TAU};
use crate::dynamics::{find_equilibria, EquilibriumReport, StaticSystem};
use crate::error::{Error, Result};
use crate::io::{read_system, write_system};
use crate::reduction::build_reduced;
use crate::scenario::{run_scenario, Overrides, Scenario};
use crate::spectral::{quasi_harmonic, QuasiHarmonicSystem};
use crate::sweep::{format_analysis, format_sweep, sweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_SWEEP_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "altchain", version, about = "Alternating-mass FPU chains: reduction, normal-mode coupling analysis and integration")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "ALTCHAIN_OUT_DIR", default_value = "out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one or more scenario files.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Coupling analysis for every odd p up to --pmax.
    Sweep {
        #[arg(long, default_value_t = 47)]
        pmax: usize,
        #[arg(long, default_value_t = 0.01)]
        a: f64,
        /// Reference tables to fit against rows of matching size.
        #[arg(long = "reference")]
        references: Vec<PathBuf>,
    },
    /// Coupling analysis of a system file.
    Analyze {
        system: PathBuf,
        /// Also report the scaling fit of this file against our own system.
        #[arg(long)]
        fit: bool,
    },
    /// Equilibria of a system file, or of the reduced system with --p.
    Equilibria {
        #[arg(required_unless_present = "p")]
        system: Option<PathBuf>,
        /// Use the reduced particle system of this p instead of a file.
        #[arg(long, conflicts_with = "system")]
        p: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 4.0)]
        half_width: f64,
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Write the quasi-harmonic system for p to a system file.
    Export {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0.01)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Express the system in the frame of this reference table.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Destination (default: <out-dir>/system_p<P>.txt).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Default)]
pub struct IntegratorArgs {
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub sample_dt: Option<f64>,
}

impl IntegratorArgs {
    fn overrides(&self) -> Overrides {
        Overrides { abs_tol: self.abs_tol, rel_tol: self.rel_tol, t_end: self.t_end, sample_dt: self.sample_dt }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Run { scenarios, integrator } => run(scenarios, &integrator.overrides(), &cli.out_dir),
        Command::Sweep { pmax, a, references } => run_sweep(*pmax, *a, references, &cli.out_dir),
        Command::Analyze { system, fit } => {
            let sys = read_system(system)?;
            println!("{}", analyze_text(&sys, *fit)?);
            Ok(EXIT_OK)
        }
        Command::Equilibria { system, p, a, alpha, half_width, grid } => {
            let reports = match (system, p) {
                (Some(path), _) => find_equilibria(&read_system(path)?, *half_width, *grid)?,
                (None, Some(p)) => find_equilibria(&build_reduced(*p, *a, *alpha)?, *half_width, *grid)?,
                (None, None) => return Err(Error::Config("need a system file or --p".into())),
            };
            print!("{}", format_equilibria(&reports));
            Ok(EXIT_OK)
        }
        Command::Export { p, a, alpha, reference, output } => {
            let (_, _, ours) = quasi_harmonic(*p, *a, *alpha)?;
            let sys = match reference {
                Some(r) => scaling_equivalence(&ours, &read_system(r)?, PRESENCE_TAU)?.apply(&ours),
                None => ours,
            };
            let path = match output {
                Some(o) => o.clone(),
                None => {
                    fs::create_dir_all(&cli.out_dir)?;
                    cli.out_dir.join(format!("system_p{p}.txt"))
                }
            };
            write_system(&path, &sys)?;
            println!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
    }
}

fn run(paths: &[PathBuf], overrides: &Overrides, out_dir: &Path) -> Result<i32> {
    let mut code = EXIT_OK;
    for path in paths {
        let scenario = Scenario::load(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let outcome = run_scenario(&scenario, out_dir, overrides)?;
        let drift = outcome.energy_drift.map_or("n/a".to_string(), |d| format!("{d:.2e}"));
        println!(
            "{}: {} (final t = {}), energy drift {drift}, {:.2} s",
            outcome.name,
            outcome.termination.describe(),
            outcome.trajectory.final_time(),
            outcome.wall_time
        );
        if outcome.diverged() {
            code = EXIT_DIVERGED;
        }
    }
    Ok(code)
}

fn run_sweep(pmax: usize, a: f64, references: &[PathBuf], out_dir: &Path) -> Result<i32> {
    let refs = references
        .iter()
        .map(|p| Ok((p.file_stem().unwrap_or_default().to_string_lossy().into_owned(), read_system(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let report = sweep(pmax, a, &refs)?;
    let text = format_sweep(&report);
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("sweep_p{pmax}.txt"));
    fs::write(&path, &text)?;
    print!("{}", text.split("\n\n").next().unwrap_or(""));
    println!("\nreport written to {}", path.display());
    Ok(if report.passed() { EXIT_OK } else { EXIT_SWEEP_FAILED })
}

/// Analysis report for a system file; with `fit`, also the scaling fit of
/// our own system of the same `p` and `a` against it.
pub fn analyze_text(sys: &QuasiHarmonicSystem, fit: bool) -> Result<String> {
    let mut s = format_analysis(sys, &analyze(sys, PRESENCE_TAU)?);
    if fit {
        let (_, _, ours) = quasi_harmonic(sys.p, sys.a, sys.alpha)?;
        let f = scaling_equivalence(&ours, sys, PRESENCE_TAU)?;
        let _ = writeln!(s, "scaling fit: residual {:.3e}, sign conflicts {}, flipped modes {:?}", f.residual, f.sign_conflicts, f.flipped().iter().map(|m| m + 1).collect::<Vec<_>>());
        let _ = writeln!(s, "scales: {:?}", f.scales);
    }
    Ok(s)
}

pub fn format_equilibria(reports: &[EquilibriumReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} equilibria", reports.len());
    for r in reports {
        let pt: Vec<String> = r.point.iter().map(|v| format!("{v:.10}")).collect();
        let _ = writeln!(s, "point ({}) residual {:.1e}", pt.join(", "), r.residual);
        let _ = writeln!(
            s,
            "  imaginary {} / positive real {} / negative real {}",
            r.pure_imaginary, r.positive_real, r.negative_real
        );
        let ev: Vec<String> = r.eigenvalues.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
        let _ = writeln!(s, "  eigenvalues: {}", ev.join(" "));
    }
    s
}

/// Keeps the trait in the public surface of the CLI for custom systems.
pub fn equilibria_of(sys: &dyn StaticSystem, half_width: f64, grid: usize) -> Result<String> {
    Ok(format_equilibria(&find_equilibria(sys, half_width, grid)?))
}
