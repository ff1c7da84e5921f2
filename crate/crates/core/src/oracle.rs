//! Brute-force reference implementations used to validate the linear-time
//! procedures: the evaluator `ν`, the minimal matrix scheme `D^mat`, PEC
//! reachability by fixpoint iteration, resolution path search straight
//! from the definition, and checks of dependency-scheme properties.
//!
//! Everything here is exponential or at least super-linear and guarded by
//! an [`EvalBudget`]; exceeding it is an error, never a silent truncation.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaError, Lit, Quantifier, Var};
use crate::path::{PathStep, ResolutionPath};
use crate::pec::{Color, ColoredGraph};
use crate::relation::{closure, DependencyRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_variables: usize,
    pub max_reorderings: u64,
}

impl Default for EvalBudget {
    fn default() -> EvalBudget {
        EvalBudget {
            max_variables: 20,
            max_reorderings: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("formula has {actual} variables, budget allows {limit}")]
    TooManyVariables { actual: usize, limit: usize },
    #[error("{actual} reorderings needed, budget allows {limit}")]
    TooManyReorderings { actual: u64, limit: u64 },
    #[error("({0}, {1}) is not a pair of the prefix relation")]
    NotInPrefixRelation(Var, Var),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

fn check_variables(formula: &Formula, budget: &EvalBudget) -> Result<(), OracleError> {
    let actual = formula.prefix().len();
    if actual > budget.max_variables {
        return Err(OracleError::TooManyVariables {
            actual,
            limit: budget.max_variables,
        });
    }
    Ok(())
}

/// `ν(F)` by the recursive definition: branch on the prefix from the left,
/// value 0 before 1, minimum for `∀`, maximum for `∃`, stopping a node as
/// soon as its value is decided.
pub fn evaluate(formula: &Formula, budget: &EvalBudget) -> Result<bool, OracleError> {
    check_variables(formula, budget)?;
    let mut values: Vec<Option<bool>> = vec![None; formula.num_vars() as usize + 1];
    Ok(eval_rec(formula, formula.prefix().entries(), &mut values))
}

fn matrix_status(formula: &Formula, values: &[Option<bool>]) -> Option<bool> {
    let lit_value = |l: Lit| values[l.var().index()].map(|v| v == l.is_positive());
    let mut open = false;
    for clause in formula.clauses() {
        let mut satisfied = false;
        let mut undecided = false;
        for l in clause.iter() {
            match lit_value(l) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => undecided = true,
            }
        }
        if !satisfied {
            if !undecided {
                return Some(false);
            }
            open = true;
        }
    }
    if open {
        None
    } else {
        Some(true)
    }
}

fn eval_rec(formula: &Formula, rest: &[(Var, Quantifier)], values: &mut [Option<bool>]) -> bool {
    if let Some(v) = matrix_status(formula, values) {
        return v;
    }
    let Some((&(var, q), inner)) = rest.split_first() else {
        unreachable!("every matrix variable is quantified");
    };
    let mut result = q == Quantifier::Forall;
    for value in [false, true] {
        values[var.index()] = Some(value);
        let sub = eval_rec(formula, inner, values);
        values[var.index()] = None;
        match q {
            Quantifier::Exists if sub => {
                result = true;
                break;
            }
            Quantifier::Forall if !sub => {
                result = false;
                break;
            }
            _ => {}
        }
    }
    result
}

/// The matrix as a truth table over the prefix variables, bit-packed.
/// Quantifiers are eliminated in place: after folding variable `b`, every
/// entry holds the quantified value and no longer depends on bit `b`.
#[derive(Clone, Debug)]
pub struct TruthTable {
    words: Vec<u64>,
}

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

impl TruthTable {
    /// Table of the matrix where variable `vars[b]` is bit `b` of the row
    /// index. Every matrix variable must be listed.
    pub fn of_matrix(formula: &Formula, vars: &[Var]) -> TruthTable {
        let n = vars.len();
        let rows = 1usize << n;
        let len = rows.div_ceil(64);
        let mut bit_of = vec![usize::MAX; formula.num_vars() as usize + 1];
        for (b, v) in vars.iter().enumerate() {
            bit_of[v.index()] = b;
        }
        let mut words = vec![u64::MAX; len];
        if rows < 64 {
            words[0] = (1u64 << rows) - 1;
        }
        let mut clause_words = vec![0u64; len];
        for clause in formula.clauses() {
            clause_words.fill(0);
            for l in clause.iter() {
                let b = bit_of[l.var().index()];
                assert!(b != usize::MAX, "variable {} missing from table", l.var());
                for (i, w) in clause_words.iter_mut().enumerate() {
                    *w |= literal_word(b, i, l.is_positive());
                }
            }
            for (w, c) in words.iter_mut().zip(&clause_words) {
                *w &= c;
            }
        }
        TruthTable { words }
    }

    /// Eliminates bit `b` with `q`: `∀` takes the minimum, `∃` the maximum.
    pub fn fold(&mut self, b: usize, q: Quantifier) {
        let op = |a: u64, c: u64| match q {
            Quantifier::Forall => a & c,
            Quantifier::Exists => a | c,
        };
        if b < 6 {
            let shift = 1 << b;
            let mask = LOW_MASKS[b];
            for w in &mut self.words {
                let r = op(*w & mask, (*w >> shift) & mask);
                *w = r | (r << shift);
            }
        } else {
            let stride = 1 << (b - 6);
            for chunk in self.words.chunks_mut(2 * stride) {
                let (lo, hi) = chunk.split_at_mut(stride);
                for (a, c) in lo.iter_mut().zip(hi) {
                    let r = op(*a, *c);
                    *a = r;
                    *c = r;
                }
            }
        }
    }

    /// The value once every bit has been folded.
    pub fn value(&self) -> bool {
        self.words[0] & 1 == 1
    }
}

fn literal_word(b: usize, word: usize, positive: bool) -> u64 {
    let ones_where_set = if b < 6 {
        !LOW_MASKS[b]
    } else if (word >> (b - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    };
    if positive {
        ones_where_set
    } else {
        !ones_where_set
    }
}

/// `ν(F)` via a truth table: an independent route to the same value, far
/// faster than [`evaluate`] when many orders of one matrix are needed.
pub fn evaluate_by_table(formula: &Formula, budget: &EvalBudget) -> Result<bool, OracleError> {
    check_variables(formula, budget)?;
    let vars: Vec<Var> = formula.vars().collect();
    let mut table = TruthTable::of_matrix(formula, &vars);
    for (b, &(_, q)) in formula.prefix().entries().iter().enumerate().rev() {
        table.fold(b, q);
    }
    Ok(table.value())
}

/// Evaluates many quantifier orders of one matrix.
struct ReorderEngine {
    table: TruthTable,
    bit: Vec<usize>,
    quantifier: Vec<Quantifier>,
}

impl ReorderEngine {
    fn new(formula: &Formula) -> ReorderEngine {
        let vars: Vec<Var> = formula.vars().collect();
        let mut bit = vec![usize::MAX; formula.num_vars() as usize + 1];
        let mut quantifier = vec![Quantifier::Exists; formula.num_vars() as usize + 1];
        for (b, &(v, q)) in formula.prefix().entries().iter().enumerate() {
            bit[v.index()] = b;
            quantifier[v.index()] = q;
        }
        ReorderEngine {
            table: TruthTable::of_matrix(formula, &vars),
            bit,
            quantifier,
        }
    }

    /// Folds `order` innermost-first into `table`.
    fn fold_all(&self, table: &mut TruthTable, order: &[Var]) {
        for &v in order.iter().rev() {
            table.fold(self.bit[v.index()], self.quantifier[v.index()]);
        }
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Calls `f` on every permutation of `items` (Heap's algorithm) until it
/// returns true.
fn any_permutation(items: &mut [Var], f: &mut dyn FnMut(&[Var]) -> bool) -> bool {
    fn go(k: usize, items: &mut [Var], f: &mut dyn FnMut(&[Var]) -> bool) -> bool {
        if k <= 1 {
            return f(items);
        }
        for i in 0..k - 1 {
            if go(k - 1, items, f) {
                return true;
            }
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        go(k - 1, items, f)
    }
    go(items.len(), items, f)
}

/// Whether `(x, y) ∈ D^mat_F`: some reordering `F′` with `x` immediately
/// before `y` and `R_{F′}(x) ⊆ R_F(x)` changes value when `x` and `y` are
/// swapped. Every qualifying order is enumerated.
pub fn dmat_contains(
    formula: &Formula,
    x: Var,
    y: Var,
    budget: &EvalBudget,
) -> Result<bool, OracleError> {
    check_variables(formula, budget)?;
    let (dx, dy) = (formula.depth(x)?, formula.depth(y)?);
    if dx >= dy {
        return Err(OracleError::NotInPrefixRelation(x, y));
    }
    let right: Vec<Var> = formula.right_of(x)?.into_iter().filter(|&v| v != y).collect();
    check_reorderings(formula.prefix().len(), right.len(), budget)?;
    Ok(dmat_with_engine(&ReorderEngine::new(formula), formula, x, y, &right))
}

/// Number of orders `D^mat` ranges over for a pair whose left variable has
/// `free` other variables to its right, out of `n`.
fn check_reorderings(n: usize, free: usize, budget: &EvalBudget) -> Result<(), OracleError> {
    let needed: u64 = (0..=free)
        .map(|k| binomial(free, k) * factorial(k) * factorial(n - 2 - k))
        .sum();
    if needed > budget.max_reorderings {
        return Err(OracleError::TooManyReorderings {
            actual: needed,
            limit: budget.max_reorderings,
        });
    }
    Ok(())
}

fn dmat_with_engine(
    engine: &ReorderEngine,
    formula: &Formula,
    x: Var,
    y: Var,
    right: &[Var],
) -> bool {
    // The part after x, y is any subset S of `right` in any order; the
    // rest goes before x in any order.
    for mask in 0u64..(1 << right.len()) {
        let mut after: Vec<Var> = Vec::new();
        for (i, &v) in right.iter().enumerate() {
            if mask >> i & 1 == 1 {
                after.push(v);
            }
        }
        let mut before: Vec<Var> = formula
            .vars()
            .filter(|&v| v != x && v != y && !after.contains(&v))
            .collect();
        let found = any_permutation(&mut after, &mut |suffix| {
            let mut inner = engine.table.clone();
            engine.fold_all(&mut inner, suffix);
            let mut xy = inner.clone();
            engine.fold_all(&mut xy, &[x, y]);
            let mut yx = inner;
            engine.fold_all(&mut yx, &[y, x]);
            any_permutation(&mut before, &mut |prefix| {
                let mut a = xy.clone();
                engine.fold_all(&mut a, prefix);
                let mut b = yx.clone();
                engine.fold_all(&mut b, prefix);
                a.value() != b.value()
            })
        });
        if found {
            return true;
        }
    }
    false
}

/// All of `D^mat_F`.
pub fn dmat_full(formula: &Formula, budget: &EvalBudget) -> Result<DependencyRelation, OracleError> {
    check_variables(formula, budget)?;
    let vars: Vec<Var> = formula.vars().collect();
    let engine = ReorderEngine::new(formula);
    let mut rel = DependencyRelation::new();
    for (i, &x) in vars.iter().enumerate() {
        for &y in &vars[i + 1..] {
            let right: Vec<Var> = vars[i + 1..].iter().copied().filter(|&v| v != y).collect();
            check_reorderings(vars.len(), right.len(), budget)?;
            if dmat_with_engine(&engine, formula, x, y, &right) {
                rel.insert(x, y);
            }
        }
    }
    Ok(rel)
}

/// For each vertex, the colors `c` such that some PEC walk from `source`
/// with a blue first edge ends there with a `c` edge. Computed by
/// iterating to a fixpoint over (vertex, last color) states, without a
/// work queue. Entry `source` is included and may be non-empty.
pub fn pec_reachable_oracle(graph: &ColoredGraph, source: usize) -> Vec<BTreeSet<Color>> {
    let n = graph.vertex_count();
    let mut reached = vec![[false; 2]; n];
    let slot = |c: Color| (c == Color::Blue) as usize;
    for &(w, c) in graph.neighbors(source) {
        if c == Color::Blue {
            reached[w as usize][1] = true;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            for last in Color::ALL {
                if !reached[v][slot(last)] {
                    continue;
                }
                for &(w, c) in graph.neighbors(v) {
                    if c != last && !reached[w as usize][slot(c)] {
                        reached[w as usize][slot(c)] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    reached
        .into_iter()
        .map(|r| Color::ALL.into_iter().filter(|&c| r[slot(c)]).collect())
        .collect()
}

/// Clause indices containing each literal, indexed by literal code.
fn occurrences(formula: &Formula) -> Vec<Vec<usize>> {
    let mut occ = vec![Vec::new(); 2 * (formula.num_vars() as usize + 1)];
    for (i, clause) in formula.clauses().iter().enumerate() {
        for l in clause.iter() {
            occ[l.code()].push(i);
        }
    }
    occ
}

/// Every `links`-resolution path from `from` to `to` with at most
/// `max_len` clause occurrences, found by exhaustive depth-first search
/// over the defining conditions. Exponential in `max_len`.
pub fn enumerate_resolution_paths(
    formula: &Formula,
    links: &BTreeSet<Var>,
    from: Lit,
    to: Lit,
    max_len: usize,
) -> Vec<ResolutionPath> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        formula: &Formula,
        occ: &[Vec<usize>],
        links: &BTreeSet<Var>,
        entry: Lit,
        to: Lit,
        max_len: usize,
        steps: &mut Vec<PathStep>,
        out: &mut Vec<ResolutionPath>,
    ) {
        if steps.len() == max_len {
            return;
        }
        for &ci in occ.get(entry.code()).map(Vec::as_slice).unwrap_or(&[]) {
            for exit in formula.clause(ci).iter() {
                if exit.var() == entry.var() {
                    continue;
                }
                steps.push(PathStep { entry, clause: ci, exit });
                if exit == to {
                    out.push(ResolutionPath::new(steps.clone()));
                }
                if links.contains(&exit.var()) {
                    go(formula, occ, links, !exit, to, max_len, steps, out);
                }
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    if from == to {
        return out;
    }
    let occ = occurrences(formula);
    go(formula, &occ, links, from, to, max_len, &mut Vec::new(), &mut out);
    out
}

/// A shortest `links`-resolution path from `from` to `to`, if any, by
/// breadth-first search over the literal each step enters its clause on.
/// Works on clauses of any width.
pub fn shortest_resolution_path(
    formula: &Formula,
    links: &BTreeSet<Var>,
    from: Lit,
    to: Lit,
) -> Option<ResolutionPath> {
    if from == to {
        return None;
    }
    let occ = occurrences(formula);
    let n = occ.len();
    if from.code() >= n {
        return None;
    }
    // parent[entry] = the step that led here (its entry and clause).
    let mut parent: Vec<Option<(Lit, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from.code()] = true;
    let mut queue = VecDeque::from([from]);
    let rebuild = |parent: &[Option<(Lit, usize)>], mut entry: Lit, last: PathStep| {
        let mut steps = vec![last];
        while let Some((prev, ci)) = parent[entry.code()] {
            steps.push(PathStep { entry: prev, clause: ci, exit: !entry });
            entry = prev;
        }
        steps.reverse();
        ResolutionPath::new(steps)
    };
    while let Some(entry) = queue.pop_front() {
        for &ci in &occ[entry.code()] {
            for exit in formula.clause(ci).iter() {
                if exit.var() == entry.var() {
                    continue;
                }
                if exit == to {
                    return Some(rebuild(&parent, entry, PathStep { entry, clause: ci, exit }));
                }
                let next = !exit;
                if links.contains(&exit.var()) && !seen[next.code()] {
                    seen[next.code()] = true;
                    parent[next.code()] = Some((entry, ci));
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Every literal `ℓ′ ≠ from` such that some `links`-resolution path runs
/// from `from` to `ℓ′`. Same search as [`shortest_resolution_path`],
/// collecting every exit instead of stopping at one target.
pub fn connected_literals(formula: &Formula, links: &BTreeSet<Var>, from: Lit) -> BTreeSet<Lit> {
    let occ = occurrences(formula);
    let mut out = BTreeSet::new();
    if from.code() >= occ.len() {
        return out;
    }
    let mut seen = vec![false; occ.len()];
    seen[from.code()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(entry) = queue.pop_front() {
        for &ci in &occ[entry.code()] {
            for exit in formula.clause(ci).iter() {
                if exit.var() == entry.var() {
                    continue;
                }
                if exit != from {
                    out.insert(exit);
                }
                let next = !exit;
                if links.contains(&exit.var()) && !seen[next.code()] {
                    seen[next.code()] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    out
}

/// An adjacent pair whose swap changes `ν` although the relation does not
/// contain it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TranspositionViolation {
    /// 1-based depth of `x`; `y` sits at `depth + 1`.
    pub depth: usize,
    pub x: Var,
    pub y: Var,
    pub before: bool,
    pub after: bool,
}

/// Checks that every adjacent transposition outside `relation` preserves
/// `ν`. Returns the leftmost violation, if any.
pub fn check_transposition_soundness(
    formula: &Formula,
    relation: &DependencyRelation,
    budget: &EvalBudget,
) -> Result<Option<TranspositionViolation>, OracleError> {
    let before = evaluate(formula, budget)?;
    let entries = formula.prefix().entries();
    for depth in 1..entries.len() {
        let (x, y) = (entries[depth - 1].0, entries[depth].0);
        if relation.contains(x, y) {
            continue;
        }
        let after = evaluate(&formula.transpose(depth)?, budget)?;
        if after != before {
            return Ok(Some(TranspositionViolation { depth, x, y, before, after }));
        }
    }
    Ok(None)
}

/// Whether `ν(F) = ν(S↓(F, R*(X)))` for the given relation `R`.
pub fn check_cumulative_shift(
    formula: &Formula,
    relation: &DependencyRelation,
    set: &BTreeSet<Var>,
    budget: &EvalBudget,
) -> Result<bool, OracleError> {
    let shifted = formula.shift_down(&closure(relation, set))?;
    Ok(evaluate(formula, budget)? == evaluate(&shifted, budget)?)
}
