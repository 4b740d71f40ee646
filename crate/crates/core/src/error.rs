use thiserror::Error;

/// Which of the three evaluated quantities went non-finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Value,
    FirstDerivative,
    SecondDerivative,
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Component::Value => "f",
            Component::FirstDerivative => "f'",
            Component::SecondDerivative => "f''",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("evaluation of {component} at x={x} is not finite")]
    Evaluation { component: Component, x: f64 },

    #[error("derivative vanished at x={x}")]
    DerivativeVanished { x: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("iteration diverged at x={x}")]
    Diverged { x: f64 },

    #[error("division by a vanishing factor q*x^(q-1) at x={x}, q={q}")]
    DivisionDegenerate { x: f64, q: f64 },

    #[error("root must be nonzero")]
    ZeroRoot,

    #[error("not a simple root: f'({alpha}) = 0")]
    NotSimpleRoot { alpha: f64 },

    #[error("inapplicable: {0}")]
    Inapplicable(&'static str),

    #[error("too few qualifying points for estimation: {found} (need {needed})")]
    TooFewPoints { found: usize, needed: usize },

    #[error("degenerate error sequence: {0}")]
    DegenerateErrors(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = NumericError> = std::result::Result<T, E>;
