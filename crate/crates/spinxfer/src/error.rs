use std::path::PathBuf;

use spinxfer_core::Error as ModelError;

/// Front-end failures, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration:{}", bullet_list(.0))]
    Config(Vec<String>),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Scenario(ModelError),
}

fn bullet_list(items: &[String]) -> String {
    items.iter().map(|s| format!("\n  - {s}")).collect()
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for usage, configuration and IO problems, 3 for scenario failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Scenario(_) => 3,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Scenario(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Config(vec![]).exit_code(), 2);
        assert_eq!(CliError::from(ModelError::HeavyHoleTopmost).exit_code(), 3);
    }

    #[test]
    fn config_errors_are_listed() {
        let e = CliError::Config(vec!["a: bad".into(), "b: worse".into()]);
        assert_eq!(e.to_string(), "invalid configuration:\n  - a: bad\n  - b: worse");
    }
}
