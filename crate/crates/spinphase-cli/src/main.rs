//! Command-line front end for the driven coupled-spin Berry phase
//! computations.
//!
//! Every successful invocation ends with one machine-readable line of
//! `key=value` pairs on stdout. Errors print a single machine-parsable
//! line on stderr and exit 1 (validation) or 2 (computational failure).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinphase_cli::sweep::{self, SweepError};
use spinphase_core::{
    berry_phase, berry_phase_loop, canonical_branch, circle_distance, eigenvalues_analytic,
    geometric_phase_from_evolution, hamiltonian, hermitian_eig, spectral_gap, subsystem_phases,
    EigenLabel, Error as CoreError, EvolutionConfig, LoopPath, ModelParams,
};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(
    name = "spinphase",
    version,
    about = "Berry phases of two coupled spin-1/2 particles with one spin driven \
             by a rotating magnetic field",
    after_help = "Units: energies in half the Zeeman splitting, time in its inverse, \
                  angles in radians (use --theta-deg for degrees). Phases are reported \
                  in radians and in units of pi, branch [0, 2pi). Couplings below 1e-3 \
                  are treated as exactly decoupled: the gap between hybridized levels \
                  closes like g*sin(theta) and label tracking loses meaning there."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every point computation.
#[derive(Args)]
struct PointArgs {
    /// Dimensionless spin-spin coupling, >= 0 (units of half the Zeeman energy)
    #[arg(long)]
    g: f64,
    /// Field polar angle in radians, inside (1e-3, pi - 1e-3)
    #[arg(long, conflicts_with = "theta_deg")]
    theta: Option<f64>,
    /// Field polar angle in degrees (alternative to --theta)
    #[arg(long)]
    theta_deg: Option<f64>,
}

impl PointArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        let theta = match (self.theta, self.theta_deg) {
            (Some(t), None) => t,
            (None, Some(d)) => d * PI / 180.0,
            _ => {
                return Err(CliError::Validation(
                    "exactly one of --theta (radians) or --theta-deg required".into(),
                ))
            }
        };
        ModelParams::new(self.g, theta).map_err(CliError::from)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Level energies E1..E4 (units of half the Zeeman splitting) and the spectral gap
    Eig {
        #[command(flatten)]
        point: PointArgs,
        /// Drive angle in radians for the numerically diagonalized matrix
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Also print the numerically diagonalized eigenvectors at --phi
        #[arg(long)]
        vectors: bool,
    },
    /// Berry phase of one composite eigenstate over a drive cycle
    Berry {
        #[command(flatten)]
        point: PointArgs,
        /// Eigenstate label 1..4 (sign pattern E1 > E3 > 0 > E4 > E2)
        #[arg(long)]
        label: usize,
        /// Method: loop (Pancharatnam product), closed (analytic), integral (connection)
        #[arg(long, default_value = "loop")]
        method: String,
        /// Loop resolution (number of phi samples)
        #[arg(long, default_value_t = LoopPath::DEFAULT_SINGLE)]
        n: usize,
    },
    /// Mixed-state Berry phases of both spins and the additivity residual
    Subsystem {
        #[command(flatten)]
        point: PointArgs,
        /// Eigenstate label 1..4
        #[arg(long)]
        label: usize,
        /// Loop resolution (number of phi samples)
        #[arg(long, default_value_t = LoopPath::DEFAULT_SINGLE)]
        n: usize,
    },
    /// Integrate the Schrodinger equation over one drive period and
    /// extract the geometric phase
    Evolve {
        #[command(flatten)]
        point: PointArgs,
        /// Eigenstate label 1..4 (initial state at phi = 0)
        #[arg(long)]
        label: usize,
        /// Drive period T (inverse energy units); larger is more adiabatic
        #[arg(long = "T")]
        period: f64,
        /// Integration steps (default: T / 5e-3, at least 1000)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run a (g, theta) sweep from a JSON config and write CSV
    Sweep {
        /// Path to the JSON sweep configuration
        #[arg(long)]
        config: PathBuf,
    },
}

enum CliError {
    Validation(String),
    Computation(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Computation(e.to_string())
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Computation(e.to_string())
        }
    }
}

fn parse_label(l: usize) -> Result<EigenLabel, CliError> {
    EigenLabel::from_index(l).map_err(CliError::from)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Eig { point, phi, vectors } => {
            let params = point.params()?;
            let e = eigenvalues_analytic(&params);
            println!(
                "energies (units of half the Zeeman splitting), labels 1..4, phi-independent:"
            );
            for (k, v) in e.iter().enumerate() {
                println!("  E{} = {v:+.12}", k + 1);
            }
            if vectors {
                let sys = hermitian_eig(&hamiltonian(&params, phi)).map_err(CliError::from)?;
                println!("eigenvectors at phi = {phi} (ascending energy):");
                for (en, v) in sys.energies().iter().zip(sys.vectors()) {
                    print!("  E = {en:+.9}:");
                    for a in v.amplitudes() {
                        print!(" {:+.6}{:+.6}i", a.re, a.im);
                    }
                    println!();
                }
            }
            println!(
                "g={} theta={} E1={:.12e} E2={:.12e} E3={:.12e} E4={:.12e} gap={:.12e}",
                params.g(),
                params.theta(),
                e[0],
                e[1],
                e[2],
                e[3],
                spectral_gap(&params)
            );
        }
        Cmd::Berry { point, label, method, n } => {
            let params = point.params()?;
            let label = parse_label(label)?;
            let method = sweep::parse_method(&method)?;
            let path = LoopPath::new(n).map_err(CliError::from)?;
            let r = berry_phase(&params, label, method, &path)?;
            println!(
                "Berry phase of eigenstate {}: {:.12} rad = {:.12} pi ({})",
                label.index(),
                r.value,
                r.value / PI,
                r.method.tag()
            );
            println!(
                "g={} theta={} label={} method={} n={} gamma_rad={:.12e} gamma_pi={:.12e}",
                params.g(),
                params.theta(),
                label.index(),
                r.method.tag(),
                r.grid_points,
                r.value,
                r.value / PI
            );
        }
        Cmd::Subsystem { point, label, n } => {
            let params = point.params()?;
            let label = parse_label(label)?;
            let path = LoopPath::new(n).map_err(CliError::from)?;
            let subs = subsystem_phases(&params, label, &path)?;
            let composite = berry_phase_loop(&params, label, &path)?;
            let sum = canonical_branch(subs.gamma_sub1.value + subs.gamma_sub2.value);
            let resid = circle_distance(sum, composite.value);
            println!(
                "subsystem 1: {:.12} rad = {:.12} pi",
                subs.gamma_sub1.value,
                subs.gamma_sub1.value / PI
            );
            println!(
                "subsystem 2: {:.12} rad = {:.12} pi",
                subs.gamma_sub2.value,
                subs.gamma_sub2.value / PI
            );
            println!(
                "sum: {:.12} rad  composite (loop): {:.12} rad  residual: {:.3e} rad",
                sum, composite.value, resid
            );
            println!(
                "g={} theta={} label={} n={} gamma_sub1_rad={:.12e} gamma_sub2_rad={:.12e} \
                 gamma_sum_rad={:.12e} composite_rad={:.12e} schmidt_p={:.12e} \
                 additivity_residual={:.12e}",
                params.g(),
                params.theta(),
                label.index(),
                n,
                subs.gamma_sub1.value,
                subs.gamma_sub2.value,
                sum,
                composite.value,
                subs.schmidt_p,
                resid
            );
        }
        Cmd::Evolve { point, label, period, steps } => {
            let params = point.params()?;
            let label = parse_label(label)?;
            let cfg = match steps {
                Some(s) => EvolutionConfig::with_steps(params, label, period, s),
                None => EvolutionConfig::new(params, label, period),
            }
            .map_err(CliError::from)?;
            let (r, cyclicity) = geometric_phase_from_evolution(&cfg)?;
            println!(
                "geometric phase from evolution: {:.12} rad = {:.12} pi",
                r.value,
                r.value / PI
            );
            println!("cyclicity |<psi(0)|psi(T)>| = {cyclicity:.9}");
            println!(
                "g={} theta={} label={} T={} steps={} gamma_rad={:.12e} gamma_pi={:.12e} \
                 cyclicity={:.9}",
                params.g(),
                params.theta(),
                label.index(),
                period,
                cfg.n_steps(),
                r.value,
                r.value / PI,
                cyclicity
            );
        }
        Cmd::Sweep { config } => {
            let cfg = sweep::load_config(&config)?;
            let rows = sweep::run_sweep(&cfg)?;
            let out = PathBuf::from(&cfg.output_path);
            sweep::write_csv(&rows, &out)?;
            println!(
                "wrote {} rows ({} x {} grid) to {}",
                rows.len(),
                cfg.g_steps,
                cfg.theta_steps,
                out.display()
            );
            println!(
                "rows={} g_steps={} theta_steps={} n_points={} method={} output={}",
                rows.len(),
                cfg.g_steps,
                cfg.theta_steps,
                cfg.n_points,
                cfg.method,
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap usage problems are validation errors (exit 1), not clap's
    // default exit 2, which is reserved for computational failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let first_line = e.to_string().lines().next().unwrap_or("bad usage").to_string();
            eprintln!("error kind=validation message=\"{first_line}\"");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error kind=validation message=\"{msg}\"");
            ExitCode::from(1)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error kind=computation message=\"{msg}\"");
            ExitCode::from(2)
        }
    }
}
