use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported element `{0}` (only H is available)")]
    UnsupportedElement(String),

    #[error("invalid molecule: {0}")]
    InvalidMolecule(String),

    #[error("atoms {0} and {1} coincide")]
    CoincidentAtoms(usize, usize),

    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),

    #[error("restricted Hartree-Fock needs an even electron count, got {0}; use Löwdin orbitals")]
    RestrictedShell(usize),

    #[error("SCF did not converge after {cycles} cycles (commutator {residual:.3e})")]
    ScfFailure {
        cycles: usize,
        residual: f64,
        density: Vec<f64>,
    },

    #[error("orbital transform failed: {0}")]
    Transform(String),

    #[error("field strength {0:.3e} a.u. is outside the perturbative regime (|F| <= 0.1)")]
    FieldOutOfRegime(f64),

    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    #[error("{0} qubits exceed the limit of {1}")]
    TooManyQubits(usize, usize),

    #[error("qubit {0} carries X/Y letters and cannot be tapered")]
    NotTaperable(usize),

    #[error("observable has a complex coefficient on {0}")]
    NotObservable(String),

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParameterLength { expected: usize, got: usize },

    #[error("slot {slot} out of range (circuit has {count})")]
    SlotOutOfRange { slot: usize, count: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("Hamiltonian build failed at {parameter} = {value}: {source}")]
    Builder {
        parameter: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("point is not an extremum: gradient norm {0:.3e}")]
    NotExtremum(f64),

    #[error("transition-state search failed: no saddle found along {modes} modes")]
    SearchFailed { modes: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}
