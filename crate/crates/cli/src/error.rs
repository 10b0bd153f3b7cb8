use chevlab::cayley::BallError;
use chevlab::classify::ClassifyError;
use chevlab::constants::ConstError;
use chevlab::degrees::DegreeError;
use chevlab::escape::EscapeError;
use chevlab::gf::GfError;
use chevlab::groups::GroupError;
use chevlab::growth::GrowthError;
use chevlab::matrix::MatrixError;
use chevlab::torus_lab::TorusLabError;
use chevlab::varieties::VarietyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Violation(_) => 5,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<BallError> for CliError {
    fn from(e: BallError) -> Self {
        match e {
            BallError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            BallError::NoGenerators => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::InadmissibleFamilyParameter { .. } | GroupError::BadCharacteristic(_) => {
                CliError::Hypothesis(e.to_string())
            }
            GroupError::GroupTooLarge { .. } => CliError::Cap(e.to_string()),
            GroupError::Ball(b) => b.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::OrbitStabilizer { .. } => CliError::Violation(e.to_string()),
            _ => CliError::Cap(e.to_string()),
        }
    }
}

impl From<ConstError> for CliError {
    fn from(e: ConstError) -> Self {
        match e {
            ConstError::RankTooSmall(_) => CliError::Hypothesis(e.to_string()),
            ConstError::InequalityFailed { .. } => CliError::Violation(e.to_string()),
            ConstError::BadParameter(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        CliError::Cap(e.to_string())
    }
}

impl From<EscapeError> for CliError {
    fn from(e: EscapeError) -> Self {
        match e {
            EscapeError::Ball(b) => b.into(),
            EscapeError::NoEscapeWithinBall { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::Ball(b) => b.into(),
            GrowthError::Group(g) => g.into(),
            GrowthError::Classify(c) => c.into(),
            GrowthError::HypothesisFailed(_) | GrowthError::NotGenerating { .. } => CliError::Hypothesis(e.to_string()),
            GrowthError::TheoremViolation(_) => CliError::Violation(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TorusLabError> for CliError {
    fn from(e: TorusLabError) -> Self {
        match e {
            TorusLabError::Group(g) => g.into(),
            TorusLabError::HypothesisFailed(_) | TorusLabError::MaximalTorus => CliError::Hypothesis(e.to_string()),
            TorusLabError::RankDeficient { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::AmbientTooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
