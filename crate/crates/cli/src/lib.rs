//! Front end for the verification engine: argument model, subcommand
//! drivers, the reference tables and the inductive replay.

pub mod args;
pub mod commands;
pub mod output;
pub mod tables;
pub mod theorem;

use slp_core::rootsystem::{designated_theta, CoxeterType, RootSystem, Theta};
use thiserror::Error;

use crate::args::Command;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] slp_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for bad input, 2 when a mathematical check failed.
    pub fn exit_code(&self) -> i32 {
        use slp_core::Error as E;
        match self {
            CliError::Core(
                E::Validation(_) | E::Precondition(_) | E::Invariant(_) | E::Overflow { .. } | E::SearchBound(_),
            ) => 2,
            _ => 1,
        }
    }
}

/// Result of a subcommand that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Roots(a) => commands::roots(a),
        Command::Quotient(a) => commands::quotient(a),
        Command::Lefschetz(a) => commands::lefschetz(a),
        Command::Paths(a) => commands::paths(a),
        Command::Coinvariant(a) => commands::coinvariant(a),
        Command::Deform(a) => commands::deform(a),
        Command::Tables(a) => tables::run(a),
        Command::VerifyTheorem(a) => theorem::run(a),
    }
}

pub fn parse_type(s: &str) -> Result<CoxeterType, CliError> {
    s.parse().map_err(|e: slp_core::Error| CliError::Usage(format!("--type: {e}")))
}

pub fn root_system(s: &str) -> Result<RootSystem, CliError> {
    Ok(RootSystem::new(parse_type(s)?)?)
}

/// Resolves a --theta value against `rs`: None gives the designated subset,
/// "empty" the empty one, digits a 1-based index list, anything else a type
/// name matched against the subdiagrams (designated subset first).
pub fn resolve_theta(rs: &RootSystem, spec: Option<&str>) -> Result<Theta, CliError> {
    let ty = rs.coxeter_type();
    let n = rs.rank();
    let Some(spec) = spec.map(str::trim) else {
        return Ok(designated_theta(&ty));
    };
    if spec.eq_ignore_ascii_case("empty") || spec.eq_ignore_ascii_case("none") {
        return Ok(Theta::empty());
    }
    if spec.starts_with(|c: char| c.is_ascii_digit()) {
        let mut idx = Vec::new();
        for part in spec.split(',') {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--theta: cannot parse index {part:?}")))?;
            if k == 0 || k > n {
                return Err(CliError::Usage(format!("--theta: index {k} outside 1..={n}")));
            }
            idx.push(k - 1);
        }
        return Ok(Theta::new(idx));
    }
    let designated = designated_theta(&ty);
    if designated.type_name(&ty).eq_ignore_ascii_case(spec) {
        return Ok(designated);
    }
    (0u32..1 << n)
        .map(|mask| Theta::new((0..n).filter(|i| mask >> i & 1 == 1).collect()))
        .find(|t| t.type_name(&ty).eq_ignore_ascii_case(spec))
        .ok_or_else(|| CliError::Usage(format!("--theta: {ty} has no parabolic subdiagram of type {spec}")))
}

/// 1-based indices for output.
pub fn theta_one_based(theta: &Theta) -> Vec<usize> {
    theta.indices().iter().map(|i| i + 1).collect()
}
