//! Command-line arguments and the resolved experiment configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use durrmeyer_core::function::TestFunction;
use durrmeyer_core::OperatorParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Tabulate f and G(f) on a grid.
    Eval,
    /// Check the closed-form moments against quadrature.
    MomentsCheck,
    /// Sup-norm error against n and the empirical order.
    Converge,
    /// Evaluate every error estimate over the standard sweep.
    BoundsCheck,
    /// x²·sin(2x/π) with n = 20: the operator against classical Durrmeyer.
    Figure1,
    /// x⁷ + 10x⁵ + x with n ∈ {10, 20, 50}.
    Figure2,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::MomentsCheck => "moments-check",
            Command::Converge => "converge",
            Command::BoundsCheck => "bounds-check",
            Command::Figure1 => "figure1",
            Command::Figure2 => "figure2",
        }
    }
}

/// Experiments on generalized Bernstein–Durrmeyer operators of blending type.
#[derive(Debug, Parser)]
#[command(name = "durrmeyer", version, about)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,

    /// Degree n; repeat for several.
    #[arg(long = "n", value_name = "N")]
    pub n: Vec<u32>,

    #[arg(long)]
    pub alpha: Option<f64>,

    #[arg(long)]
    pub rho: Option<f64>,

    /// Built-in function id (const:c, e1..e4, septic, xsin, xsin-periodic,
    /// abs-half, pow1.5) or poly:c0,c1,...
    #[arg(long = "fn", value_name = "ID")]
    pub function: Option<String>,

    /// Number of uniform grid points on [0, 1].
    #[arg(long)]
    pub grid: Option<usize>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// figure1: also emit the x²·sin(2πx) variant.
    #[arg(long)]
    pub periodic_variant: bool,
}

/// Fully resolved configuration; every field is within the module
/// preconditions.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n_list: Vec<u32>,
    pub alpha: f64,
    pub rho: f64,
    #[serde(serialize_with = "serialize_function")]
    pub function: TestFunction,
    pub grid_size: usize,
    pub out_dir: PathBuf,
    pub periodic_variant: bool,
    /// Set only for the sweep commands when --alpha / --rho were given.
    #[serde(skip)]
    pub alpha_given: bool,
    #[serde(skip)]
    pub rho_given: bool,
    #[serde(skip)]
    pub n_given: bool,
}

fn serialize_function<S: serde::Serializer>(f: &TestFunction, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

pub const DEFAULT_GRID: usize = 257;

impl ExperimentConfig {
    /// Applies the per-command defaults and validates.
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let (n_default, alpha_default, rho_default, fn_default): (&[u32], f64, f64, TestFunction) =
            match args.command {
                Command::Eval => (&[20], 0.3, 4.0, TestFunction::SquareSine),
                Command::MomentsCheck => (&[2, 5, 10, 20, 50], 0.3, 4.0, TestFunction::Monomial(2)),
                Command::Converge => (
                    &[10, 20, 40, 80, 160, 320],
                    0.3,
                    4.0,
                    TestFunction::SquareSine,
                ),
                Command::BoundsCheck => (&[10, 20, 50], 0.3, 4.0, TestFunction::SquareSine),
                Command::Figure1 => (&[20], 0.3, 4.0, TestFunction::SquareSine),
                Command::Figure2 => (&[10, 20, 50], 0.2, 4.0, TestFunction::Septic),
            };
        let function = match &args.function {
            Some(id) => id
                .parse::<TestFunction>()
                .map_err(|e| CliError::Usage(e.to_string()))?,
            None => fn_default,
        };
        let mut n_list = if args.n.is_empty() {
            n_default.to_vec()
        } else {
            args.n.clone()
        };
        n_list.sort_unstable();
        n_list.dedup();
        let config = Self {
            command: args.command,
            n_list,
            alpha: args.alpha.unwrap_or(alpha_default),
            rho: args.rho.unwrap_or(rho_default),
            function,
            grid_size: args.grid.unwrap_or(DEFAULT_GRID),
            out_dir: args.out,
            periodic_variant: args.periodic_variant,
            alpha_given: args.alpha.is_some(),
            rho_given: args.rho.is_some(),
            n_given: !args.n.is_empty(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for &n in &self.n_list {
            OperatorParams::new(n, self.alpha, self.rho)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if self.n_list.is_empty() {
            return Err(CliError::Usage("at least one --n is required".into()));
        }
        if self.grid_size < 2 {
            return Err(CliError::Usage(format!(
                "--grid must be at least 2 (got {})",
                self.grid_size
            )));
        }
        Ok(())
    }

    pub fn params(&self, n: u32) -> Result<OperatorParams, CliError> {
        Ok(OperatorParams::new(n, self.alpha, self.rho)?)
    }
}
