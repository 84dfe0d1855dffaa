use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qderiv", version, about = "VQE energies and energy derivatives for small molecules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Scan,
    Optimize,
    Response,
    Ts,
    Excited,
    Derivative,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state energies along a symmetric stretch (VQE, FCI, HF).
    Scan(Flags),
    /// Minimum-energy geometry search from the input geometry.
    Optimize(Flags),
    /// Dipole moment and polarizability along a symmetric stretch.
    Response(Flags),
    /// Transition-state search between two chain geometries.
    Ts(Flags),
    /// Excited-state energies and their bond-length derivatives.
    Excited(Flags),
    /// First and second energy derivatives at the input geometry.
    Derivative(Flags),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Scan(f) => (CommandKind::Scan, f),
            Command::Optimize(f) => (CommandKind::Optimize, f),
            Command::Response(f) => (CommandKind::Response, f),
            Command::Ts(f) => (CommandKind::Ts, f),
            Command::Excited(f) => (CommandKind::Excited, f),
            Command::Derivative(f) => (CommandKind::Derivative, f),
        }
    }
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Scan => "scan",
            CommandKind::Optimize => "optimize",
            CommandKind::Response => "response",
            CommandKind::Ts => "ts",
            CommandKind::Excited => "excited",
            CommandKind::Derivative => "derivative",
        }
    }
}

/// Every option can also come from the `--config` file as `key = value`
/// (keys are the long flag names); flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key=value file with default settings.
    #[arg(long, value_name = "PATH")]
    pub config: Option<String>,
    /// XYZ file (Å); atoms must lie on a z-aligned chain.
    #[arg(long, value_name = "PATH")]
    pub molecule: Option<String>,
    /// Bond-length grid `start:stop:points` (Å).
    #[arg(long, value_name = "A:B:N", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Fermion-to-qubit encoding: jw or bk.
    #[arg(long)]
    pub mapping: Option<String>,
    /// Remove Z2-symmetric qubits.
    #[arg(long)]
    pub taper: bool,
    /// Circuit: hea, excitation or tapered.
    #[arg(long)]
    pub ansatz: Option<String>,
    /// Number of ansatz layers.
    #[arg(long, value_name = "D")]
    pub depth: Option<String>,
    /// Energy evaluation: exact or sampled.
    #[arg(long)]
    pub engine: Option<String>,
    /// Shots per Pauli term (sampled engine only).
    #[arg(long, value_name = "K")]
    pub shots: Option<String>,
    #[arg(long, value_name = "S")]
    pub seed: Option<String>,
    /// Geometry step: gradient or hessian.
    #[arg(long)]
    pub method: Option<String>,
    /// Step scale γ.
    #[arg(long, value_name = "G")]
    pub gamma: Option<String>,
    /// Convergence threshold on the geometry step (bohr).
    #[arg(long, value_name = "T")]
    pub ctol: Option<String>,
    /// Field increment for response properties (a.u.).
    #[arg(long, value_name = "H")]
    pub field_step: Option<String>,
    /// Field direction x, y or z; makes `derivative` differentiate with respect to the field.
    #[arg(long, value_name = "AXIS")]
    pub field_axis: Option<String>,
    /// Variational-angle grid `start:stop:points` for the E(R, θ) landscape (scan, tapered ansatz).
    #[arg(long, value_name = "A:B:N", allow_hyphen_values = true)]
    pub theta_grid: Option<String>,
    /// Reactant bond lengths `r1,r2` (Å); defaults to the input geometry.
    #[arg(long, value_name = "R1,R2")]
    pub reactants: Option<String>,
    /// Product bond lengths `r1,r2` (Å); defaults to the reactants reversed.
    #[arg(long, value_name = "R1,R2")]
    pub products: Option<String>,
    /// Second table: the E(R, θ) landscape (scan) or the E(R1, R2) grid (ts).
    #[arg(long, value_name = "PATH")]
    pub surface_out: Option<String>,
    /// key=value derivative record (derivative).
    #[arg(long, value_name = "PATH")]
    pub record: Option<String>,
    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
}

impl Flags {
    /// Flag values keyed by their config-file names.
    pub fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("molecule", self.molecule.clone()),
            ("grid", self.grid.clone()),
            ("mapping", self.mapping.clone()),
            ("taper", self.taper.then(|| "true".to_string())),
            ("ansatz", self.ansatz.clone()),
            ("depth", self.depth.clone()),
            ("engine", self.engine.clone()),
            ("shots", self.shots.clone()),
            ("seed", self.seed.clone()),
            ("method", self.method.clone()),
            ("gamma", self.gamma.clone()),
            ("ctol", self.ctol.clone()),
            ("field-step", self.field_step.clone()),
            ("field-axis", self.field_axis.clone()),
            ("theta-grid", self.theta_grid.clone()),
            ("reactants", self.reactants.clone()),
            ("products", self.products.clone()),
            ("surface-out", self.surface_out.clone()),
            ("record", self.record.clone()),
            ("format", self.format.clone()),
            ("out", self.out.clone()),
        ]
    }
}
