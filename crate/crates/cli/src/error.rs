use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}:{line}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: key `{key}`: {message}", path.display())]
    Field {
        path: PathBuf,
        key: &'static str,
        message: String,
    },
    #[error("{}:{line}: `{key}`: {source}", path.display())]
    Syntax {
        path: PathBuf,
        line: usize,
        key: &'static str,
        #[source]
        source: singrev::expr::ParseError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] singrev::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use singrev::Error as E;
        match self {
            CliError::Config { .. } | CliError::Field { .. } => "E_CONFIG",
            CliError::Syntax { .. } => "E_SYNTAX",
            CliError::Usage(_) => "E_USAGE",
            CliError::Io { .. } => "E_IO",
            CliError::Core(e) => match e {
                E::Parse(_) => "E_SYNTAX",
                E::Eval(_) => "E_EVAL",
                E::Quad(_) => "E_QUADRATURE",
                E::YCollapse { .. } => "E_Y_COLLAPSE",
                E::InvalidSpec(_) => "E_SPEC",
                E::InvalidArgument(_) => "E_ARGUMENT",
                E::NotSingular { .. } => "E_NOT_SINGULAR",
                E::RootRefinement { .. } => "E_ROOT",
                E::PeriodAudit { .. } => "E_PERIOD_AUDIT",
                E::InconsistentH { .. } => "E_H_MISMATCH",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. }
            | CliError::Field { .. }
            | CliError::Syntax { .. }
            | CliError::Usage(_) => 2,
            CliError::Core(singrev::Error::Parse(_) | singrev::Error::InvalidSpec(_)) => 2,
            CliError::Core(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
