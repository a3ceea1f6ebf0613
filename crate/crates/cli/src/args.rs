use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qpa",
    version,
    about = "Pyramid-encoded kinetic evolution experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the kinetic-energy operator and dump its circuit and diagonal.
    EncodeKe(EncodeArgs),
    /// Evolve a Gaussian packet and compare against the split-step reference.
    Evolve(Common),
    /// Sweep register widths and report swap-test fidelities.
    Fidelity(Common),
    /// Gate counts and depths against the reference tables.
    Metrics(Common),
    /// Evaluate the closed-form error budget.
    ErrorBudget(BudgetArgs),
}

/// Flags shared by every command. Values are kept as text and parsed after
/// merging with `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Register width, or a list/range such as `3..9` for sweeps.
    #[arg(long)]
    pub qubits: Option<String>,
    /// Half-width of the position box `[-d, d)`.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Time per reported step.
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<String>,
    /// Number of reported steps.
    #[arg(long)]
    pub steps: Option<String>,
    /// Trotter substeps per reported step, e.g. `10,20,40,50`.
    #[arg(long)]
    pub trotter_steps: Option<String>,
    /// Packet wave number.
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<String>,
    /// none, single, double or multi.
    #[arg(long)]
    pub potential: Option<String>,
    /// Step height.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    #[arg(long)]
    pub shots: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// paper or centered.
    #[arg(long)]
    pub mode: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "qpa-out")]
    pub out: PathBuf,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// `key = value` file or a manifest written by an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    pub fn flags(&self) -> Vec<(&'static str, String)> {
        collect(&[
            ("qubits", &self.qubits),
            ("d", &self.d),
            ("dt", &self.dt),
            ("steps", &self.steps),
            ("trotter_steps", &self.trotter_steps),
            ("k0", &self.k0),
            ("potential", &self.potential),
            ("eta", &self.eta),
            ("mass", &self.mass),
            ("shots", &self.shots),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("format", &self.format),
        ])
    }
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub common: Common,
    /// qate, qwe or direct.
    #[arg(long)]
    pub method: Option<String>,
    /// Half-indices kept exact by qwe, e.g. `11..15` or `1,2,3,4`.
    #[arg(long)]
    pub window: Option<String>,
    /// Controlled-phase allowance for qwe.
    #[arg(long)]
    pub cp_budget: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub common: Common,
    /// Grid step; defaults to the spacing of the `--qubits`/`--d` grid.
    #[arg(long)]
    pub h: Option<String>,
    /// Two-qubit gate count; defaults to the encoder's count for `--qubits`.
    #[arg(long)]
    pub l2: Option<String>,
    #[arg(long)]
    pub sigma_g2: Option<String>,
    #[arg(long)]
    pub t1: Option<String>,
    #[arg(long)]
    pub t2: Option<String>,
    #[arg(long)]
    pub sigma_cr2: Option<String>,
}

fn collect(pairs: &[(&'static str, &Option<String>)]) -> Vec<(&'static str, String)> {
    pairs
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (*k, v.clone())))
        .collect()
}

impl EncodeArgs {
    pub fn flags(&self) -> Vec<(&'static str, String)> {
        let mut flags = self.common.flags();
        flags.extend(collect(&[
            ("method", &self.method),
            ("window", &self.window),
            ("cp_budget", &self.cp_budget),
        ]));
        flags
    }
}

impl BudgetArgs {
    pub fn flags(&self) -> Vec<(&'static str, String)> {
        let mut flags = self.common.flags();
        flags.extend(collect(&[
            ("h", &self.h),
            ("l2", &self.l2),
            ("sigma_g2", &self.sigma_g2),
            ("t1", &self.t1),
            ("t2", &self.t2),
            ("sigma_cr2", &self.sigma_cr2),
        ]));
        flags
    }
}
