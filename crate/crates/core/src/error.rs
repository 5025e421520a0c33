use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Factorial-based evaluation requested beyond the double range.
    #[error("unsupported order {0}: factorials beyond 170 overflow f64")]
    UnsupportedOrder(u32),

    /// Integer arithmetic overflow in an exact combinatorial quantity.
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    /// A jet was asked for a derivative beyond its truncation order.
    #[error("jet orders {available:?} insufficient for derivative {requested:?}")]
    JetOrder {
        available: [usize; 4],
        requested: [usize; 4],
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A quantity that must be real carried too much imaginary part.
    #[error("imaginary residue {residue:.3e} exceeds tolerance {tol:.3e}")]
    ImaginaryResidue { residue: f64, tol: f64 },

    /// A probability or fidelity fell outside its admissible range.
    #[error("computed {what} = {value:.6e} outside its admissible range")]
    OutOfRange { what: &'static str, value: f64 },

    /// Success probability vanished; the conditioned state cannot be prepared.
    #[error("success probability vanishes; configuration is unpreparable")]
    Unpreparable,

    /// Adaptive quadrature box grew past its limit without the boundary
    /// integrand decaying.
    #[error("quadrature domain did not converge (half-width reached {0})")]
    QuadratureDomain(f64),

    /// Fock-space truncation left too much probability mass near the cutoff.
    #[error("truncation leakage {leakage:.3e} exceeds {tol:.3e}; increase the cutoff")]
    Leakage { leakage: f64, tol: f64 },

    /// Cutoff escalation hit its ceiling before the result stabilised.
    #[error("cutoff escalation did not converge: {0}")]
    CutoffConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
