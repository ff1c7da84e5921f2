//! Splitting wide clauses into ternary ones while preserving which literals
//! are resolution connected.
//!
//! A clause `(ℓ1 ∨ … ∨ ℓn)` with `n > 3` becomes `(ℓ1 ∨ ℓ2 ∨ z)` and
//! `(¬z ∨ ℓ3 ∨ … ∨ ℓn)` for a fresh existential `z`, repeated until every
//! piece has at most three literals. Adding the fresh variables to the
//! connecting set makes paths through the pieces correspond one-to-one to
//! paths through the original clause.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, Formula, Lit, Quantifier, Var};
use crate::path::{PathError, PathStep, ResolutionPath};
use crate::qdimacs::{write_body, write_header};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("variable {0} is not quantified in the prefix")]
    UnknownVariable(Var),
    #[error("variable {0} is universal and cannot link resolution steps")]
    NotExistential(Var),
    #[error("path is not valid in the split formula: {0}")]
    InvalidPath(PathError),
    #[error("path endpoint {0} is a fresh literal")]
    FreshEndpoint(Lit),
    #[error("mapped path failed validation: {0}")]
    MappedPathInvalid(PathError),
}

/// The ternary formula `F′` with its connecting set `X′` and the origin of
/// every clause.
#[derive(Clone, Debug)]
pub struct TransformResult {
    pub formula: Formula,
    pub connection_set: BTreeSet<Var>,
    /// `provenance[i]` is the index of the input clause that clause `i`
    /// of `formula` was cut from.
    pub provenance: Vec<usize>,
    /// Fresh variables in creation order, numbered consecutively above the
    /// input's largest variable.
    pub fresh_variables: Vec<Var>,
    original_num_vars: u32,
}

impl TransformResult {
    pub fn is_fresh(&self, var: Var) -> bool {
        var.id() > self.original_num_vars
    }

    /// Maps an `X′`-resolution path of the split formula to an
    /// `X`-resolution path of the input by collapsing every run
    /// `ℓ, C′, z, ¬z, C″, ℓ′` through fresh variables into `ℓ, C, ℓ′`.
    /// The result is validated against `original` before it is returned.
    pub fn map_path_back(
        &self,
        original: &Formula,
        path: &ResolutionPath,
    ) -> Result<ResolutionPath, SplitError> {
        path.validate(&self.formula, &self.connection_set)
            .map_err(SplitError::InvalidPath)?;
        for end in [path.start(), path.end()].into_iter().flatten() {
            if self.is_fresh(end.var()) {
                return Err(SplitError::FreshEndpoint(end));
            }
        }
        let mut steps: Vec<PathStep> = Vec::with_capacity(path.len());
        let mut open: Option<(Lit, usize)> = None;
        for step in path.steps() {
            let (entry, clause) = open.unwrap_or((step.entry, self.provenance[step.clause]));
            debug_assert_eq!(clause, self.provenance[step.clause]);
            if self.is_fresh(step.exit.var()) {
                open = Some((entry, clause));
            } else {
                steps.push(PathStep { entry, clause, exit: step.exit });
                open = None;
            }
        }
        let mapped = ResolutionPath::new(steps);
        let links: BTreeSet<Var> = self
            .connection_set
            .iter()
            .copied()
            .filter(|&v| !self.is_fresh(v))
            .collect();
        mapped
            .validate(original, &links)
            .map_err(SplitError::MappedPathInvalid)?;
        Ok(mapped)
    }

    /// QDIMACS of the split formula preceded by `c provenance <i> <j>`
    /// lines pairing 1-based output and input clause ordinals.
    pub fn to_qdimacs_with_provenance(&self) -> String {
        let mut out = String::new();
        for (i, &j) in self.provenance.iter().enumerate() {
            writeln!(out, "c provenance {} {}", i + 1, j + 1).unwrap();
        }
        write_header(&mut out, &self.formula);
        write_body(&mut out, &self.formula);
        out
    }
}

/// Checks that every variable of `links` is existential in `formula`.
pub fn check_links(formula: &Formula, links: &BTreeSet<Var>) -> Result<(), SplitError> {
    for &z in links {
        match formula.prefix().quantifier(z) {
            None => return Err(SplitError::UnknownVariable(z)),
            Some(Quantifier::Forall) => return Err(SplitError::NotExistential(z)),
            Some(Quantifier::Exists) => {}
        }
    }
    Ok(())
}

/// Splits every clause longer than three literals. Linear in `|F|`.
pub fn to_q3cnf(formula: &Formula, links: &BTreeSet<Var>) -> Result<TransformResult, SplitError> {
    check_links(formula, links)?;
    let (split, provenance, fresh) = split_clauses(formula);
    let mut connection_set = links.clone();
    connection_set.extend(fresh.iter().copied());
    Ok(TransformResult {
        formula: split,
        connection_set,
        provenance,
        fresh_variables: fresh,
        original_num_vars: formula.num_vars(),
    })
}

/// The splitting itself, which does not depend on the connecting set.
pub(crate) fn split_clauses(formula: &Formula) -> (Formula, Vec<usize>, Vec<Var>) {
    let mut next_id = formula.num_vars();
    let mut fresh = Vec::new();
    let mut clauses = Vec::with_capacity(formula.clauses().len());
    let mut provenance = Vec::with_capacity(formula.clauses().len());
    for (ci, clause) in formula.clauses().iter().enumerate() {
        let lits = clause.lits();
        if lits.len() <= 3 {
            clauses.push(clause.clone());
            provenance.push(ci);
            continue;
        }
        let mut carry: Option<Lit> = None;
        let mut rest = lits;
        loop {
            let head_len = if carry.is_some() { 2 } else { 3 } - 1;
            let remaining = rest.len() + carry.is_some() as usize;
            if remaining <= 3 {
                clauses.push(Clause::from_lits_unchecked(carry.into_iter().chain(rest.iter().copied()).collect()));
                provenance.push(ci);
                break;
            }
            next_id += 1;
            let z = Var::new(next_id);
            fresh.push(z);
            let (head, tail) = rest.split_at(head_len);
            let piece: Vec<Lit> = carry
                .into_iter()
                .chain(head.iter().copied())
                .chain(std::iter::once(z.positive()))
                .collect();
            clauses.push(Clause::from_lits_unchecked(piece));
            provenance.push(ci);
            carry = Some(z.negative());
            rest = tail;
        }
    }
    // Each fresh variable is prepended, so the newest one ends up outermost.
    let prefix: Vec<(Var, Quantifier)> = fresh
        .iter()
        .rev()
        .map(|&z| (z, Quantifier::Exists))
        .chain(formula.prefix().entries().iter().copied())
        .collect();
    (Formula::from_parts(next_id, prefix, clauses), provenance, fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn set(vars: &[Var]) -> BTreeSet<Var> {
        vars.iter().copied().collect()
    }

    fn step(entry: i64, clause: usize, exit: i64) -> PathStep {
        PathStep { entry: lit(entry), clause, exit: lit(exit) }
    }

    #[test]
    fn example1_first_clause_splits_once() {
        let f = example1();
        let r = to_q3cnf(&f, &set(&[Y1])).unwrap();
        let z = Var::new(6);
        assert_eq!(r.fresh_variables, vec![z]);
        assert_eq!(r.connection_set, set(&[Y1, z]));
        assert_eq!(r.formula.clause(0).lits(), &lits(&[3, 5, 6])[..]);
        assert_eq!(r.formula.clause(1).lits(), &lits(&[-6, 2, 1])[..]);
        assert_eq!(r.formula.clauses().len(), 5);
        assert_eq!(r.provenance, vec![0, 0, 1, 2, 3]);
        assert_eq!(r.formula.prefix().entries()[0], (z, Quantifier::Exists));
        assert_eq!(r.formula.depth(Y1), Ok(2));
    }

    #[test]
    fn ternary_formula_is_unchanged() {
        let f = example2();
        let r = to_q3cnf(&f, &set(&[V, Y, Z])).unwrap();
        assert_eq!(r.formula, f);
        assert!(r.fresh_variables.is_empty());
        assert_eq!(r.provenance, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn five_literal_clause_needs_two_splits() {
        let f = qcnf(&[('e', &[1, 2, 3, 4, 5])], &[&[1, 2, 3, 4, 5], &[-1]]);
        let r = to_q3cnf(&f, &BTreeSet::new()).unwrap();
        assert_eq!(r.fresh_variables, vec![Var::new(6), Var::new(7)]);
        assert_eq!(r.formula.clause(0).lits(), &lits(&[1, 2, 6])[..]);
        assert_eq!(r.formula.clause(1).lits(), &lits(&[-6, 3, 7])[..]);
        assert_eq!(r.formula.clause(2).lits(), &lits(&[-7, 4, 5])[..]);
        assert_eq!(r.provenance, vec![0, 0, 0, 1]);
        // newest fresh variable outermost
        assert_eq!(r.formula.prefix().entries()[0].0, Var::new(7));
        assert!(r.formula.size() <= 3 * f.size());
    }

    #[test]
    fn links_must_be_existential() {
        let f = example1();
        assert_eq!(to_q3cnf(&f, &set(&[X1])).unwrap_err(), SplitError::NotExistential(X1));
        let nine = Var::new(9);
        assert_eq!(to_q3cnf(&f, &set(&[nine])).unwrap_err(), SplitError::UnknownVariable(nine));
    }

    #[test]
    fn map_back_collapses_fresh_links() {
        let f = example1();
        let r = to_q3cnf(&f, &set(&[Y1])).unwrap();
        // x1, (x1 x2 z), z, ¬z, (¬z y2 y1), y1
        let p = ResolutionPath::new(vec![step(3, 0, 6), step(-6, 1, 1)]);
        let back = r.map_path_back(&f, &p).unwrap();
        assert_eq!(back, ResolutionPath::new(vec![step(3, 0, 1)]));

        // reversed: y1, (¬z y2 y1), ¬z, z, (x1 x2 z), x1, then on through C4
        let p = ResolutionPath::new(vec![step(2, 1, -6), step(6, 0, 3)]);
        let back = r.map_path_back(&f, &p).unwrap();
        assert_eq!(back, ResolutionPath::new(vec![step(2, 0, 3)]));
    }

    #[test]
    fn map_back_is_identity_without_fresh_links() {
        let f = example1();
        let r = to_q3cnf(&f, &set(&[Y1])).unwrap();
        // ¬x1, C2, ¬y1 with C2 now at index 2
        let p = ResolutionPath::new(vec![step(-3, 2, -1), step(1, 1, 2)]);
        let back = r.map_path_back(&f, &p).unwrap();
        assert_eq!(back, ResolutionPath::new(vec![step(-3, 1, -1), step(1, 0, 2)]));
    }

    #[test]
    fn map_back_rejects_bad_input() {
        let f = example1();
        let r = to_q3cnf(&f, &set(&[Y1])).unwrap();
        let fresh_end = ResolutionPath::new(vec![step(3, 0, 6)]);
        assert_eq!(r.map_path_back(&f, &fresh_end), Err(SplitError::FreshEndpoint(lit(6))));
        let broken = ResolutionPath::new(vec![step(3, 0, 2)]);
        assert!(matches!(r.map_path_back(&f, &broken), Err(SplitError::InvalidPath(_))));
    }

    #[test]
    fn provenance_comments() {
        let f = example1();
        let r = to_q3cnf(&f, &BTreeSet::new()).unwrap();
        let text = r.to_qdimacs_with_provenance();
        assert!(text.starts_with("c provenance 1 1\nc provenance 2 1\nc provenance 3 2\n"));
        assert!(text.contains("p cnf 6 5\ne 6 1 2 0\n"));
        let reparsed = crate::qdimacs::parse_qdimacs(&text).unwrap();
        assert_eq!(reparsed.formula, r.formula);
    }
}
