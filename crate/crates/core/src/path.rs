//! Resolution paths: alternating sequences of literals and clauses that
//! link complementary occurrences of connecting variables.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Lit, Var};

/// One `ℓ, C, ℓ′` segment of a resolution path. `clause` is a 0-based
/// index into the matrix of the formula the path lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PathStep {
    pub entry: Lit,
    pub clause: usize,
    pub exit: Lit,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct ResolutionPath {
    steps: Vec<PathStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path has no clauses")]
    Empty,
    #[error("step {step}: clause index {clause} out of range")]
    ClauseOutOfRange { step: usize, clause: usize },
    #[error("step {step}: literal {lit} not in clause")]
    LiteralNotInClause { step: usize, lit: Lit },
    #[error("step {step}: next literal is not the complement of {lit}")]
    BrokenLink { step: usize, lit: Lit },
    #[error("step {step}: linking variable {var} is not in the connecting set")]
    LinkOutsideSet { step: usize, var: Var },
    #[error("step {step}: enters and leaves on the same variable")]
    SameVariable { step: usize },
    #[error("path starts and ends with the same literal")]
    SameEndpoints,
}

impl ResolutionPath {
    pub fn new(steps: Vec<PathStep>) -> ResolutionPath {
        ResolutionPath { steps }
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> Option<Lit> {
        self.steps.first().map(|s| s.entry)
    }

    pub fn end(&self) -> Option<Lit> {
        self.steps.last().map(|s| s.exit)
    }

    /// Clause indices in traversal order.
    pub fn clauses(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.clause).collect()
    }

    /// Checks the four defining conditions against `formula` and the
    /// connecting set `links`.
    pub fn validate(&self, formula: &Formula, links: &BTreeSet<Var>) -> Result<(), PathError> {
        if self.steps.is_empty() {
            return Err(PathError::Empty);
        }
        for (i, step) in self.steps.iter().enumerate() {
            let clause = formula
                .clauses()
                .get(step.clause)
                .ok_or(PathError::ClauseOutOfRange { step: i, clause: step.clause })?;
            for lit in [step.entry, step.exit] {
                if !clause.contains(lit) {
                    return Err(PathError::LiteralNotInClause { step: i, lit });
                }
            }
            if step.entry.var() == step.exit.var() {
                return Err(PathError::SameVariable { step: i });
            }
            if let Some(next) = self.steps.get(i + 1) {
                if next.entry != !step.exit {
                    return Err(PathError::BrokenLink { step: i, lit: step.exit });
                }
                if !links.contains(&step.exit.var()) {
                    return Err(PathError::LinkOutsideSet { step: i, var: step.exit.var() });
                }
            }
        }
        if self.start() == self.end() {
            return Err(PathError::SameEndpoints);
        }
        Ok(())
    }
}

/// Renders as `ℓ1 C<i> ℓ′1 ℓ2 C<j> ℓ′2 …` with 1-based clause ordinals.
impl fmt::Display for ResolutionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{} C{} {}", step.entry, step.clause + 1, step.exit)?;
        }
        Ok(())
    }
}
