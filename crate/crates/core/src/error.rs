use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed variable table: {0}")]
    MalformedTable(String),
    #[error("variable tables do not match: {0}")]
    TableMismatch(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("implicit solve: Jacobian with respect to the unknowns is singular at the origin")]
    SingularJacobian,
    #[error("implicit solve: system does not vanish at the origin ({0})")]
    Basepoint(String),
    #[error("evaluation error: variable `{0}` is unassigned")]
    Unassigned(String),
    #[error("point is not on the manifold: {0}")]
    NotOnManifold(String),
    #[error("vector is not complex-tangent: {0}")]
    NotTangent(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("division by a non-unit: {0}")]
    NonUnit(String),
    #[error("order insufficient: {what} needs order {required}, have {available}")]
    OrderInsufficient { what: String, required: u32, available: u32 },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Invalid(String),
}
