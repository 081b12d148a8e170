use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vacpol::cli::{
    cmd_fermi, cmd_ks, cmd_point, cmd_table, cmd_verify, exit_code, ConfigOverrides, EvaluationMethod, Format, Grid,
    RunConfig, Suite, VerifyOptions, EXIT_FAILURE, EXIT_OK, EXIT_USAGE, TOL_ENV,
};
use vacpol::{Error, Result};

/// Uehling and Källén-Sabry vacuum-polarization potentials.
#[derive(Parser)]
#[command(name = "vacpol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Point-nucleus Uehling potential.
    Point,
    /// Uehling potential of a Fermi-distributed nucleus.
    Fermi,
    /// Källén-Sabry potential.
    Ks,
    /// Any method; the potential follows from the method.
    Table,
    /// Run the verification suite.
    Verify {
        /// specfun, uehling, fermi, ks or all.
        #[arg(default_value = "all")]
        suite: Suite,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Negative control: flip the sign of one closed form of g.
        #[arg(long, hide = true)]
        flip_g_sign: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Nuclear charge.
    #[arg(long = "Z", global = true)]
    z: Option<f64>,
    /// Half-density radius in fm.
    #[arg(long, global = true)]
    xi_fm: Option<f64>,
    /// 90%-10% surface thickness in fm.
    #[arg(long, global = true)]
    t_fm: Option<f64>,
    /// Diffuseness in fm (overrides --t-fm).
    #[arg(long, global = true)]
    a_fm: Option<f64>,
    /// Smallest radius in Bohr radii.
    #[arg(long, global = true)]
    r_min: Option<f64>,
    /// Largest radius in Bohr radii.
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
    /// linear or log.
    #[arg(long, global = true)]
    grid: Option<Grid>,
    #[arg(long, global = true)]
    method: Option<EvaluationMethod>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// File of key=value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            z: self.z,
            xi_fm: self.xi_fm,
            t_fm: self.t_fm,
            a_fm: self.a_fm,
            r_min: self.r_min,
            r_max: self.r_max,
            points: self.points,
            grid: self.grid,
            method: self.method,
            format: self.format,
            tol: self.tol,
        }
    }

    fn resolve(&self) -> Result<RunConfig> {
        let file = self.config.as_deref().map(ConfigOverrides::load).transpose()?;
        let env_value = std::env::var(TOL_ENV).ok();
        let env = ConfigOverrides::from_env_value(env_value.as_deref())?;
        RunConfig::resolve(file.as_ref(), &env, &self.overrides())
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let config = cli.run.resolve()?;
    let out = cli.run.out.as_ref();
    let table = match cli.command {
        Command::Point => cmd_point(&config)?,
        Command::Fermi => cmd_fermi(&config)?,
        Command::Ks => cmd_ks(&config)?,
        Command::Table => cmd_table(&config)?,
        Command::Verify {
            suite,
            tol_scale,
            flip_g_sign,
        } => {
            let report = cmd_verify(suite, VerifyOptions { tol_scale, flip_g_sign })?;
            let text = match cli.run.format {
                Some(Format::Json) => report.to_json(),
                _ => report.to_text(),
            };
            emit(out, &text)?;
            return Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE });
        }
    };
    emit(out, &table.render(config.format))?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("vacpol: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code.clamp(0, EXIT_USAGE) as u8)
}
