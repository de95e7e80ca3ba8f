use thiserror::Error;

/// Pipeline stage that produced an error, used to label failures bubbling
/// out of [`crate::norm::royden_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Validate,
    Cover,
    Paths,
    Cycles,
    Periods,
    Norm,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Validate => "validate",
            Stage::Cover => "cover",
            Stage::Paths => "paths",
            Stage::Cycles => "cycles",
            Stage::Periods => "periods",
            Stage::Norm => "norm",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial must have degree >= 1")]
    ConstantPolynomial,
    #[error("root finding did not converge (worst residual {worst_residual:e})")]
    RootsDidNotConverge { worst_residual: f64 },

    #[error("denominator h has a repeated root near {root}")]
    NotSquarefree { root: num_complex::Complex64 },
    #[error("degree bound violated: deg g = {deg_g} > deg h - 4 = {bound}")]
    DegreeBoundViolated { deg_g: usize, bound: isize },
    #[error("numerator g is identically zero")]
    ZeroNumerator,
    #[error("denominator h is identically zero")]
    ZeroDenominator,
    #[error("deg h = {0} is too small (need at least 4 punctures)")]
    DegreeTooSmall(usize),
    #[error("affine map x -> a x + b needs a != 0")]
    InvalidAffineMap,
    #[error("expected dim Q(X) = {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("double cover degenerates: defining polynomial has degree {0}")]
    DegenerateCover(usize),
    #[error("numerator degree {degree} exceeds genus - 1 = {max}")]
    DegreeOverflow { degree: usize, max: isize },

    #[error("path construction failed: {0}")]
    PathConstructionFailed(String),
    #[error("intersection matrix has rank {rank}, expected {expected}")]
    RankMismatch { rank: usize, expected: usize },
    #[error("skew form is not unimodular (elementary divisor {0})")]
    NotUnimodular(i64),

    #[error("square-root tracking lost at parameter {at}")]
    TrackingLost { at: f64 },
    #[error("quadrature stalled: error estimate {estimate:e} above tolerance {tol:e}")]
    QuadratureStalled { estimate: f64, tol: f64 },
    #[error("Riemann relations violated: symmetry defect {symmetry:e}, min eigenvalue of Im(tau) {min_eig:e}")]
    RiemannRelationViolation { symmetry: f64, min_eig: f64 },

    #[error("grid too small: {0} points (need at least 7)")]
    GridTooSmall(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Strips stage labels.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            e => e,
        }
    }

    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self.root_cause(),
            Error::ZeroPolynomial
                | Error::ConstantPolynomial
                | Error::NotSquarefree { .. }
                | Error::DegreeBoundViolated { .. }
                | Error::ZeroNumerator
                | Error::ZeroDenominator
                | Error::DegreeTooSmall(_)
                | Error::InvalidAffineMap
                | Error::DimensionMismatch { .. }
                | Error::GridTooSmall(_)
                | Error::InvalidConfig(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
