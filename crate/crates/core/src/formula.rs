//! Quantified CNF formulas: variables, literals, clauses, prefixes and the
//! operations on them that do not depend on any dependency scheme.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A propositional variable, numbered from 1 as in QDIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    /// Panics if `id` is zero.
    pub const fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids start at 1");
        Var(id)
    }

    pub const fn id(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub const fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A signed variable.
///
/// The encoding is dense: the positive literal of `v` has code `2v`, the
/// negative one `2v + 1`. Graph vertices are indexed by this code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit(u32);

impl Lit {
    pub const fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + if positive { 0 } else { 1 })
    }

    /// Decodes a dense literal code. Codes 0 and 1 belong to no variable.
    pub fn from_code(code: usize) -> Option<Lit> {
        if code < 2 || code > u32::MAX as usize {
            None
        } else {
            Some(Lit(code as u32))
        }
    }

    /// Parses a signed QDIMACS integer; zero has no literal.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > (u32::MAX / 2) as u64 {
            return None;
        }
        Some(Lit::new(Var(value.unsigned_abs() as u32), value > 0))
    }

    pub const fn var(self) -> Var {
        Var(self.0 / 2)
    }

    pub const fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub const fn code(self) -> usize {
        self.0 as usize
    }

    pub const fn complement(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn to_dimacs(self) -> i64 {
        let id = self.var().0 as i64;
        if self.is_positive() {
            id
        } else {
            -id
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        self.complement()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Lit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Quantifier {
    #[serde(rename = "e")]
    Exists,
    #[serde(rename = "a")]
    Forall,
}

impl Quantifier {
    pub fn symbol(self) -> char {
        match self {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A disjunction of literals, in input order, without duplicates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub(crate) fn from_lits_unchecked(lits: Vec<Lit>) -> Clause {
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn is_tautological(&self) -> bool {
        self.lits.iter().any(|&l| self.lits.contains(&!l))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// A maximal run of equally quantified variables in the prefix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Block {
    pub quantifier: Quantifier,
    pub vars: Vec<Var>,
}

/// The quantifier prefix. `depth[v]` is the 1-based position of `v`, or 0
/// when `v` is not quantified.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Prefix {
    entries: Vec<(Var, Quantifier)>,
    depth: Vec<u32>,
}

impl Prefix {
    fn from_entries(entries: Vec<(Var, Quantifier)>, num_vars: u32) -> Prefix {
        let mut depth = vec![0; num_vars as usize + 1];
        for (i, &(v, _)) in entries.iter().enumerate() {
            debug_assert_eq!(depth[v.index()], 0, "variable {v} quantified twice");
            depth[v.index()] = i as u32 + 1;
        }
        Prefix { entries, depth }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Var, Quantifier)] {
        &self.entries
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn depth(&self, var: Var) -> Option<usize> {
        match self.depth.get(var.index()) {
            Some(&d) if d > 0 => Some(d as usize),
            _ => None,
        }
    }

    pub fn quantifier(&self, var: Var) -> Option<Quantifier> {
        self.depth(var).map(|d| self.entries[d - 1].1)
    }

    pub fn contains(&self, var: Var) -> bool {
        self.depth(var).is_some()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut blocks: Vec<Block> = Vec::new();
        for &(v, q) in &self.entries {
            match blocks.last_mut() {
                Some(b) if b.quantifier == q => b.vars.push(v),
                _ => blocks.push(Block {
                    quantifier: q,
                    vars: vec![v],
                }),
            }
        }
        blocks
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable {0} is not quantified in the prefix")]
    UnknownVariable(Var),
    #[error("the given order is not a permutation of the prefix variables")]
    NotAPermutation,
    #[error("prefix position {0} has no right neighbour")]
    NoAdjacentPair(usize),
}

/// A truth assignment to a set of variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, var: Var, value: bool) -> Assignment {
        self.values.insert(var, value);
        self
    }

    pub fn insert(&mut self, var: Var, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(&var).copied()
    }

    /// Value of a literal, `None` when its variable is unassigned.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Union of two assignments; values of `other` win on overlap.
    pub fn union(&self, other: &Assignment) -> Assignment {
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|(&k, &v)| (k, v)));
        Assignment { values }
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment {
            values: iter.into_iter().collect(),
        }
    }
}

/// A formula as read, before normalization. Clauses may contain duplicate
/// or complementary literals and variables missing from the prefix.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RawFormula {
    pub num_vars: u32,
    pub prefix: Vec<(Var, Quantifier)>,
    pub clauses: Vec<Vec<Lit>>,
}

/// What [`normalize`] changed.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Diagnostics {
    /// Tautological clauses removed from the matrix.
    pub tautological: usize,
    /// Repeated literal occurrences removed inside clauses.
    pub duplicate_literals: usize,
    /// Matrix variables missing from the prefix, now bound existentially
    /// in a fresh outermost block.
    pub free: Vec<Var>,
    /// Prefix variables that never occur in the matrix. They are kept.
    pub unused: Vec<Var>,
    /// Repeated quantifications dropped from a raw prefix (first one wins).
    pub requantified: Vec<Var>,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        *self == Diagnostics::default()
    }
}

/// A normalized QCNF formula: every matrix variable is quantified, no clause
/// is tautological or repeats a literal. Immutable once built.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Formula {
    num_vars: u32,
    prefix: Prefix,
    clauses: Vec<Clause>,
    occurs: Vec<bool>,
}

/// Normalizes a raw formula. Never fails; everything it changes is counted
/// in the returned diagnostics.
pub fn normalize(raw: &RawFormula) -> (Formula, Diagnostics) {
    let mut diag = Diagnostics::default();
    let mut num_vars = raw.num_vars;
    for &(v, _) in &raw.prefix {
        num_vars = num_vars.max(v.id());
    }
    for clause in &raw.clauses {
        for lit in clause {
            num_vars = num_vars.max(lit.var().id());
        }
    }

    let mut seen_var = vec![false; num_vars as usize + 1];
    let mut prefix = Vec::with_capacity(raw.prefix.len());
    for &(v, q) in &raw.prefix {
        if seen_var[v.index()] {
            diag.requantified.push(v);
        } else {
            seen_var[v.index()] = true;
            prefix.push((v, q));
        }
    }

    // Literal-indexed stamps give linear-time duplicate and tautology checks.
    let mut stamp = vec![usize::MAX; 2 * (num_vars as usize + 1)];
    let mut clauses = Vec::with_capacity(raw.clauses.len());
    for (ci, clause) in raw.clauses.iter().enumerate() {
        let mut lits = Vec::with_capacity(clause.len());
        let mut tautological = false;
        for &lit in clause {
            if stamp[lit.code()] == ci {
                diag.duplicate_literals += 1;
                continue;
            }
            if stamp[(!lit).code()] == ci {
                tautological = true;
            }
            stamp[lit.code()] = ci;
            lits.push(lit);
        }
        if tautological {
            diag.tautological += 1;
        } else {
            clauses.push(Clause { lits });
        }
    }

    let mut occurs = vec![false; num_vars as usize + 1];
    for clause in &clauses {
        for lit in clause.iter() {
            occurs[lit.var().index()] = true;
        }
    }
    // Tautological clauses are gone, so a variable seen only there is unused.
    let mut free: Vec<Var> = (1..=num_vars)
        .map(Var)
        .filter(|v| occurs[v.index()] && !seen_var[v.index()])
        .collect();
    free.sort();
    if !free.is_empty() {
        let mut bound: Vec<(Var, Quantifier)> =
            free.iter().map(|&v| (v, Quantifier::Exists)).collect();
        bound.extend(prefix);
        prefix = bound;
    }
    diag.free = free;
    diag.unused = prefix
        .iter()
        .map(|&(v, _)| v)
        .filter(|v| !occurs[v.index()])
        .collect();

    let formula = Formula {
        num_vars,
        prefix: Prefix::from_entries(prefix, num_vars),
        clauses,
        occurs,
    };
    (formula, diag)
}

impl Formula {
    /// Builds a formula whose parts are already known to be normalized.
    pub(crate) fn from_parts(
        num_vars: u32,
        prefix: Vec<(Var, Quantifier)>,
        clauses: Vec<Clause>,
    ) -> Formula {
        let mut occurs = vec![false; num_vars as usize + 1];
        for clause in &clauses {
            for lit in clause.iter() {
                occurs[lit.var().index()] = true;
            }
        }
        Formula {
            num_vars,
            prefix: Prefix::from_entries(prefix, num_vars),
            clauses,
            occurs,
        }
    }

    /// Convenience constructor: normalizes and drops the diagnostics.
    pub fn new(prefix: Vec<(Var, Quantifier)>, clauses: Vec<Vec<Lit>>) -> Formula {
        normalize(&RawFormula {
            num_vars: 0,
            prefix,
            clauses,
        })
        .0
    }

    /// Largest variable index the formula may refer to.
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> &Clause {
        &self.clauses[index]
    }

    /// Sum of clause lengths.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    /// True when `var` occurs in some clause.
    pub fn occurs(&self, var: Var) -> bool {
        self.occurs.get(var.index()).copied().unwrap_or(false)
    }

    pub fn depth(&self, var: Var) -> Result<usize, FormulaError> {
        self.prefix
            .depth(var)
            .ok_or(FormulaError::UnknownVariable(var))
    }

    pub fn quantifier(&self, var: Var) -> Result<Quantifier, FormulaError> {
        self.prefix
            .quantifier(var)
            .ok_or(FormulaError::UnknownVariable(var))
    }

    pub fn is_existential(&self, var: Var) -> bool {
        self.prefix.quantifier(var) == Some(Quantifier::Exists)
    }

    pub fn is_universal(&self, var: Var) -> bool {
        self.prefix.quantifier(var) == Some(Quantifier::Forall)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.prefix.vars()
    }

    pub fn existentials(&self) -> impl Iterator<Item = Var> + '_ {
        self.prefix
            .entries()
            .iter()
            .filter(|e| e.1 == Quantifier::Exists)
            .map(|e| e.0)
    }

    pub fn universals(&self) -> impl Iterator<Item = Var> + '_ {
        self.prefix
            .entries()
            .iter()
            .filter(|e| e.1 == Quantifier::Forall)
            .map(|e| e.0)
    }

    /// Both literals of every variable occurring in the matrix.
    pub fn literals(&self) -> Vec<Lit> {
        self.vars()
            .filter(|&v| self.occurs(v))
            .flat_map(|v| [v.positive(), v.negative()])
            .collect()
    }

    /// Variables to the right of `var` in the prefix, in prefix order.
    pub fn right_of(&self, var: Var) -> Result<Vec<Var>, FormulaError> {
        let d = self.depth(var)?;
        Ok(self.prefix.entries()[d..].iter().map(|e| e.0).collect())
    }

    pub fn quantifier_blocks(&self) -> Vec<Block> {
        self.prefix.blocks()
    }

    /// Index of the quantifier block containing `var`.
    pub fn block_index(&self, var: Var) -> Result<usize, FormulaError> {
        let d = self.depth(var)?;
        let entries = self.prefix.entries();
        Ok(entries[..d]
            .windows(2)
            .filter(|w| w[0].1 != w[1].1)
            .count())
    }

    fn check_known(&self, vars: impl IntoIterator<Item = Var>) -> Result<(), FormulaError> {
        for v in vars {
            if !self.prefix.contains(v) {
                return Err(FormulaError::UnknownVariable(v));
            }
        }
        Ok(())
    }

    /// `F[τ]`: clauses satisfied by `τ` are removed, falsified literals are
    /// removed from the rest and the assigned variables leave the prefix.
    pub fn restrict(&self, tau: &Assignment) -> Result<Formula, FormulaError> {
        self.check_known(tau.vars())?;
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|l| tau.lit_value(l) == Some(true)))
            .map(|c| Clause {
                lits: c.iter().filter(|&l| tau.lit_value(l).is_none()).collect(),
            })
            .collect();
        let prefix = self
            .prefix
            .entries()
            .iter()
            .filter(|e| tau.get(e.0).is_none())
            .copied()
            .collect();
        Ok(Formula::from_parts(self.num_vars, prefix, clauses))
    }

    /// Quantifier reordering: the same matrix under the prefix given by
    /// `order`, which must be a permutation of the prefix variables.
    pub fn reorder(&self, order: &[Var]) -> Result<Formula, FormulaError> {
        if order.len() != self.prefix.len() {
            return Err(FormulaError::NotAPermutation);
        }
        let mut seen = vec![false; self.num_vars as usize + 1];
        let mut prefix = Vec::with_capacity(order.len());
        for &v in order {
            let q = self
                .prefix
                .quantifier(v)
                .ok_or(FormulaError::UnknownVariable(v))?;
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(FormulaError::NotAPermutation);
            }
            prefix.push((v, q));
        }
        Ok(Formula::from_parts(
            self.num_vars,
            prefix,
            self.clauses.clone(),
        ))
    }

    /// Swaps the quantifications at 1-based depths `depth` and `depth + 1`.
    pub fn transpose(&self, depth: usize) -> Result<Formula, FormulaError> {
        if depth == 0 || depth >= self.prefix.len() {
            return Err(FormulaError::NoAdjacentPair(depth));
        }
        let mut order: Vec<Var> = self.vars().collect();
        order.swap(depth - 1, depth);
        self.reorder(&order)
    }

    /// Down-shifting: moves `set` to the rightmost positions of the prefix,
    /// keeping the relative order inside `set` and inside its complement.
    pub fn shift_down(&self, set: &BTreeSet<Var>) -> Result<Formula, FormulaError> {
        self.check_known(set.iter().copied())?;
        let order: Vec<Var> = self
            .vars()
            .filter(|v| !set.contains(v))
            .chain(self.vars().filter(|v| set.contains(v)))
            .collect();
        self.reorder(&order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn literal_encoding() {
        let x = Var::new(3);
        assert_eq!(x.positive().code(), 6);
        assert_eq!(x.negative().code(), 7);
        assert_eq!(!!x.negative(), x.negative());
        assert_eq!((!x.positive()).var(), x);
        assert_eq!(Lit::from_dimacs(-3), Some(x.negative()));
        assert_eq!(Lit::from_dimacs(0), None);
        assert_eq!(Lit::from_code(7), Some(x.negative()));
        assert_eq!(Lit::from_code(1), None);
    }

    #[test]
    fn normalize_drops_tautologies() {
        let raw = RawFormula {
            num_vars: 2,
            prefix: vec![(Var::new(1), Quantifier::Exists), (Var::new(2), Quantifier::Exists)],
            clauses: vec![lits(&[1, -1, 2]), lits(&[2])],
        };
        let (f, diag) = normalize(&raw);
        assert_eq!(diag.tautological, 1);
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(diag.unused, vec![Var::new(1)]);
    }

    #[test]
    fn normalize_merges_duplicate_literals() {
        let raw = RawFormula {
            num_vars: 1,
            prefix: vec![(Var::new(1), Quantifier::Exists)],
            clauses: vec![lits(&[1, 1])],
        };
        let (f, diag) = normalize(&raw);
        assert_eq!(f.clause(0).lits(), &lits(&[1])[..]);
        assert_eq!(diag.duplicate_literals, 1);
    }

    #[test]
    fn normalize_binds_free_variables_outermost() {
        let raw = RawFormula {
            num_vars: 7,
            prefix: vec![(Var::new(1), Quantifier::Forall)],
            clauses: vec![lits(&[1, 7])],
        };
        let (f, diag) = normalize(&raw);
        assert_eq!(diag.free, vec![Var::new(7)]);
        assert_eq!(f.depth(Var::new(7)), Ok(1));
        assert_eq!(f.quantifier(Var::new(7)), Ok(Quantifier::Exists));
        assert_eq!(f.depth(Var::new(1)), Ok(2));
    }

    #[test]
    fn normalize_keeps_empty_clause() {
        let raw = RawFormula {
            num_vars: 1,
            prefix: vec![(Var::new(1), Quantifier::Exists)],
            clauses: vec![vec![], lits(&[1])],
        };
        let (f, _) = normalize(&raw);
        assert_eq!(f.clauses().len(), 2);
        assert!(f.clause(0).is_empty());
    }

    #[test]
    fn normalize_keeps_first_quantification() {
        let raw = RawFormula {
            num_vars: 1,
            prefix: vec![(Var::new(1), Quantifier::Forall), (Var::new(1), Quantifier::Exists)],
            clauses: vec![lits(&[1])],
        };
        let (f, diag) = normalize(&raw);
        assert_eq!(diag.requantified, vec![Var::new(1)]);
        assert_eq!(f.quantifier(Var::new(1)), Ok(Quantifier::Forall));
    }

    #[test]
    fn example1_size_and_depths() {
        let f = example1();
        assert_eq!(f.size(), 11);
        assert_eq!(f.depth(Y1), Ok(1));
        assert_eq!(f.depth(X2), Ok(5));
        assert_eq!(f.depth(Var::new(9)), Err(FormulaError::UnknownVariable(Var::new(9))));
    }

    #[test]
    fn right_of_examples() {
        let f = example1();
        assert_eq!(f.right_of(X1).unwrap(), vec![Y3, X2]);
        assert!(f.right_of(X2).unwrap().is_empty());
        let g = example2();
        assert_eq!(f.right_of(Y1).unwrap().len(), 4);
        assert_eq!(g.right_of(U).unwrap(), vec![E, V, X, Y, Z]);
    }

    #[test]
    fn quantifier_blocks_examples() {
        use Quantifier::*;
        let f = example1();
        let blocks: Vec<_> = f
            .quantifier_blocks()
            .into_iter()
            .map(|b| (b.quantifier, b.vars))
            .collect();
        assert_eq!(
            blocks,
            vec![(Exists, vec![Y1, Y2]), (Forall, vec![X1]), (Exists, vec![Y3]), (Forall, vec![X2])]
        );
        let g = example2();
        let blocks: Vec<_> = g
            .quantifier_blocks()
            .into_iter()
            .map(|b| (b.quantifier, b.vars))
            .collect();
        assert_eq!(
            blocks,
            vec![(Forall, vec![U]), (Exists, vec![E, V]), (Forall, vec![X]), (Exists, vec![Y, Z])]
        );
        let all_e = qcnf(&[('e', &[1, 2, 3])], &[&[1, 2, 3]]);
        assert_eq!(all_e.quantifier_blocks().len(), 1);
        assert_eq!(f.block_index(Y2), Ok(0));
        assert_eq!(f.block_index(X2), Ok(3));
    }

    #[test]
    fn restrict_examples() {
        let f = intro_formula();
        let g = f.restrict(&Assignment::new().with(Var::new(1), true)).unwrap();
        assert_eq!(g.prefix().entries(), &[(Var::new(2), Quantifier::Exists)]);
        assert_eq!(g.clauses().len(), 1);
        assert_eq!(g.clause(0).lits(), &lits(&[2])[..]);

        assert_eq!(f.restrict(&Assignment::new()).unwrap(), f);

        let all = Assignment::new().with(Var::new(1), true).with(Var::new(2), true);
        let h = f.restrict(&all).unwrap();
        assert!(h.clauses().is_empty());
        assert!(h.prefix().is_empty());

        let unknown = Assignment::new().with(Var::new(5), true);
        assert!(f.restrict(&unknown).is_err());
    }

    #[test]
    fn shift_down_example() {
        // ∃x ∀y ∃z ∀u ∀w with x=1 y=2 z=3 u=4 w=5
        let f = qcnf(
            &[('e', &[1]), ('a', &[2]), ('e', &[3]), ('a', &[4, 5])],
            &[&[1, 2, 3, 4, 5]],
        );
        let set: BTreeSet<Var> = [1, 3, 4].into_iter().map(Var::new).collect();
        let g = f.shift_down(&set).unwrap();
        let order: Vec<u32> = g.vars().map(Var::id).collect();
        assert_eq!(order, vec![2, 5, 1, 3, 4]);
        assert_eq!(g.quantifier(Var::new(1)), Ok(Quantifier::Exists));
        assert_eq!(g.quantifier(Var::new(5)), Ok(Quantifier::Forall));
        assert_eq!(g.clauses(), f.clauses());

        assert_eq!(f.shift_down(&BTreeSet::new()).unwrap(), f);
        let everything: BTreeSet<Var> = f.vars().collect();
        assert_eq!(f.shift_down(&everything).unwrap(), f);
    }

    #[test]
    fn transpose_and_reorder() {
        let f = example2();
        let g = f.transpose(1).unwrap();
        assert_eq!(g.depth(E), Ok(1));
        assert_eq!(g.depth(U), Ok(2));
        assert!(f.transpose(6).is_err());
        assert!(f.reorder(&[U, E]).is_err());
        assert!(f.reorder(&[U, U, V, X, Y, Z]).is_err());
    }
}
