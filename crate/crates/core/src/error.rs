use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} is not an even integer >= 4")]
    BadDimension(u32),
    #[error("k = {k} outside [1, {d}]")]
    BadK { d: u32, k: u32 },
    #[error("point is not a state (outside the CP region)")]
    NotAState,
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),
    #[error("point does not lie on the conic")]
    PointNotOnConic,
    #[error("tangent is undefined at a singular point")]
    SingularTangent,
    #[error("line passes through the origin")]
    LineThroughOrigin,
    #[error("the origin has no polar")]
    OriginHasNoPolar,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("parameter u = {0} outside the admissible range")]
    BadConicParameter(String),
    #[error("table mismatch: {0}")]
    TableMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix does not have unit trace")]
    NotUnitTrace,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not a skew-symmetric unitary")]
    NotSkewUnitary,
    #[error("parameters outside the required region")]
    ParamsOutsideRegion,
    #[error("perturbation too large: partial transpose has eigenvalue {0:e}")]
    EpsTooLarge(f64),
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}
