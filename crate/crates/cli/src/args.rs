//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levysup::{JumpSign, ProcessModel, SubordinatorModel};

use crate::grid::{parse_edges, parse_list, Grid};
use crate::output::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "levysup", version, about = "Joint law of the time and value of the supremum of a Lévy process")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Master seed; `LEVYSUP_SEED` is consulted only when this is absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Thread count hint for Monte Carlo; never changes results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint, entrance, time-and-level or inverse-subordinator densities on grids.
    Density(DensityArgs),
    /// Density of the supremum at a fixed horizon; the atom at 0 goes to the summary.
    Marginal(MarginalArgs),
    /// Density of the time of the supremum.
    Arcsine(ArcsineArgs),
    /// Residuals of fluctuation identities.
    Identity(IdentityArgs),
    /// Analytic laws against Monte Carlo samples.
    Validate(ValidateArgs),
    /// Dump simulated (time of supremum, supremum, terminal value) samples.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Brownian motion with drift.
    Bm,
    /// Symmetric Cauchy process.
    Cauchy,
    /// Strictly stable, `--index` and `--rho`.
    Stable,
    /// Spectrally negative stable, `--index` in (1, 2).
    Sn,
    /// Compound Poisson with exponential jumps and drift.
    Cpp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JumpDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub drift: Option<f64>,
    /// Stability index.
    #[arg(long)]
    pub index: Option<f64>,
    /// Positivity parameter `P(X_1 ≥ 0)`.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub jump_mean: Option<f64>,
    #[arg(long, value_enum)]
    pub jump_sign: Option<JumpDirection>,
}

impl ModelArgs {
    pub fn build(&self) -> Result<ProcessModel, CliError> {
        let kind = self.model.ok_or_else(|| CliError::Usage("--model is required".into()))?;
        let allowed: &[&str] = match kind {
            ModelKind::Bm => &["drift"],
            ModelKind::Cauchy => &[],
            ModelKind::Stable => &["index", "rho"],
            ModelKind::Sn => &["index"],
            ModelKind::Cpp => &["drift", "rate", "jump-mean", "jump-sign"],
        };
        let given = [
            ("drift", self.drift.is_some()),
            ("index", self.index.is_some()),
            ("rho", self.rho.is_some()),
            ("rate", self.rate.is_some()),
            ("jump-mean", self.jump_mean.is_some()),
            ("jump-sign", self.jump_sign.is_some()),
        ];
        if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
            return Err(CliError::Usage(format!("--{flag} does not apply to this model")));
        }
        let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this model")));
        let model = match kind {
            ModelKind::Bm => ProcessModel::brownian(self.drift.unwrap_or(0.0)),
            ModelKind::Cauchy => Ok(ProcessModel::cauchy()),
            ModelKind::Stable => ProcessModel::stable(need(self.index, "index")?, need(self.rho, "rho")?),
            ModelKind::Sn => ProcessModel::spectrally_negative(need(self.index, "index")?),
            ModelKind::Cpp => {
                let sign = match self.jump_sign.unwrap_or(JumpDirection::Up) {
                    JumpDirection::Up => JumpSign::Positive,
                    JumpDirection::Down => JumpSign::Negative,
                };
                ProcessModel::compound_poisson(need(self.rate, "rate")?, need(self.jump_mean, "jump-mean")?, sign, need(self.drift, "drift")?)
            }
        };
        Ok(model?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SubordinatorArgs {
    /// Index of the stable jump part; omit for a pure drift.
    #[arg(long)]
    pub sub_index: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sub_scale: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sub_drift: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sub_killing: f64,
}

impl SubordinatorArgs {
    pub fn build(&self) -> Result<SubordinatorModel, CliError> {
        Ok(match self.sub_index {
            Some(index) => SubordinatorModel::stable(index, self.sub_scale, self.sub_drift, self.sub_killing)?,
            None => SubordinatorModel::pure_drift(self.sub_drift, self.sub_killing)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    /// `(g_t, X̄_t, X̄_t − X_t)` on `--s-grid × --x-grid × --y-grid`.
    Joint,
    /// `(g_t, X̄_t, X_t)` on `--s-grid × --x-grid × --z-grid`.
    Terminal,
    /// Entrance density of one side at `--t` on `--grid`.
    Entrance,
    /// `(g_t, X̄_t)` on `--s-grid × --x-grid`.
    TimeLevel,
    /// Inverse of a driftless subordinator at `--t` on `--grid`.
    InverseSubordinator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    /// Excursions of the process reflected at its supremum.
    Sup,
    /// Excursions of the process reflected at its infimum.
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SnPathArg {
    Semigroup,
    Series,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub subordinator: SubordinatorArgs,
    #[arg(long, value_enum)]
    pub kind: DensityKind,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub s_grid: Option<Grid>,
    #[arg(long)]
    pub x_grid: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_grid: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub z_grid: Option<Grid>,
    #[arg(long, value_enum, default_value_t = SideArg::Sup)]
    pub side: SideArg,
    /// Evaluation path for spectrally negative time-level densities.
    #[arg(long, value_enum)]
    pub path: Option<SnPathArg>,
}

#[derive(Debug, Clone, Args)]
pub struct MarginalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long)]
    pub grid: Grid,
    /// Add a `cdf` column.
    #[arg(long)]
    pub cdf: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ArcsineArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long)]
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityCheck {
    /// `κ(1, 0) = 1`.
    Normalization,
    /// `κ(α, 0)·κ*(α, 0) = α`.
    WienerHopf,
    /// Fristedt's formula against the closed form at `(--alpha, --beta)`.
    Fristedt,
    /// Laplace transform of the lifetime tail against `κ(--eps, 0)`.
    LadderLaplace,
    /// Semigroup rebuilt from the entrance laws, L1 distance.
    Semigroup,
    /// Laplace transform of the inverse subordinator.
    SubordinatorLaplace,
    /// Tail identity of a drifted subordinator on `--grid`.
    DriftedSubordinator,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub subordinator: SubordinatorArgs,
    #[arg(long, value_enum)]
    pub check: IdentityCheck,
    /// Laplace argument in time.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Laplace argument in space.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 5.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 201)]
    pub count: usize,
    /// Level of the subordinator checks.
    #[arg(long, default_value_t = 1.0)]
    pub level: f64,
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Override of the residual tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValidateCheck {
    /// KS distance of the simulated supremum, extrapolated over grid levels.
    SupKs,
    /// KS distance of the simulated time of the supremum to the arcsine law.
    ArcsineKs,
    /// Two estimators of the atom at 0 of a Type 3 supremum.
    Atom,
    /// Chi-square of the simulated (time, level) histogram.
    JointChi2,
    /// Permutation test of independence of the stable triple factors.
    Independence,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub check: ValidateCheck,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    /// Grid step counts, coarse to fine, each dividing the finest (default 1000).
    #[arg(long, value_parser = parse_levels)]
    pub levels: Option<Levels>,
    /// Disable the exact bridge correction of Gaussian suprema.
    #[arg(long)]
    pub no_bridge: bool,
    /// Restrict the KS distance to `[0, empirical quantile]`.
    #[arg(long)]
    pub restrict_quantile: Option<f64>,
    /// Pass threshold: maximal KS distance or z-score, minimal p-value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 199)]
    pub permutations: usize,
    #[arg(long, value_parser = parse_edge_list)]
    pub s_edges: Option<Edges>,
    #[arg(long, value_parser = parse_edge_list)]
    pub x_edges: Option<Edges>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long)]
    pub no_bridge: bool,
}

/// Grid step counts, strictly increasing, each dividing the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels(pub Vec<usize>);

fn parse_levels(s: &str) -> Result<Levels, String> {
    let v: Vec<usize> = parse_list(s)?;
    let fine = *v.last().ok_or("empty level list")?;
    if v.contains(&0) || v.windows(2).any(|w| w[0] >= w[1]) || v.iter().any(|l| fine % l != 0) {
        return Err(format!("levels must increase strictly and divide {fine}, got `{s}`"));
    }
    Ok(Levels(v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edges(pub Vec<f64>);

fn parse_edge_list(s: &str) -> Result<Edges, String> {
    parse_edges(s).map(Edges)
}
