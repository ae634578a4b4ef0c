//! Bundled example problems.

use thiserror::Error;

use crate::io::{parse_problem, InputError, Problem};

/// Names accepted by [`load_fixture`].
pub const FIXTURES: [&str; 2] = ["example1", "example2"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}; known: example1, example2")]
    UnknownFixture(String),
    #[error("bundled fixture is malformed: {0}")]
    Malformed(#[from] InputError),
}

pub fn fixture_text(name: &str) -> Result<&'static str, FixtureError> {
    match name {
        "example1" => Ok(include_str!("../../../fixtures/example1.json")),
        "example2" => Ok(include_str!("../../../fixtures/example2.json")),
        other => Err(FixtureError::UnknownFixture(other.to_string())),
    }
}

pub fn load_fixture(name: &str) -> Result<Problem, FixtureError> {
    Ok(parse_problem(fixture_text(name)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_fixtures_parse() {
        for name in FIXTURES {
            load_fixture(name).unwrap();
        }
        assert_eq!(
            load_fixture("unknown").unwrap_err(),
            FixtureError::UnknownFixture("unknown".into())
        );
    }
}
