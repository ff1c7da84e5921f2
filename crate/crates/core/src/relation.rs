//! Binary relations over the variables of a formula, as produced by
//! dependency schemes, and their text and JSON renderings.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::formula::{Diagnostics, Formula, Var};
use crate::qdimacs::to_qdimacs;

/// A set of ordered variable pairs `(x, y)`. Relations produced by this
/// crate only contain pairs with `x` left of `y` in the prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyRelation {
    pairs: BTreeSet<(Var, Var)>,
}

impl DependencyRelation {
    pub fn new() -> DependencyRelation {
        DependencyRelation::default()
    }

    pub fn insert(&mut self, x: Var, y: Var) -> bool {
        self.pairs.insert((x, y))
    }

    pub fn contains(&self, x: Var, y: Var) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        self.pairs.iter().copied()
    }

    /// `R(x)`: every `y` with `(x, y)` in the relation.
    pub fn image(&self, x: Var) -> impl Iterator<Item = Var> + '_ {
        self.pairs
            .range((x, Var::new(1))..=(x, Var::new(u32::MAX)))
            .map(|&(_, y)| y)
    }

    pub fn is_subset(&self, other: &DependencyRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn difference<'a>(
        &'a self,
        other: &'a DependencyRelation,
    ) -> impl Iterator<Item = (Var, Var)> + 'a {
        self.pairs.difference(&other.pairs).copied()
    }

    /// True when every pair runs left to right in the prefix of `formula`.
    pub fn respects_prefix_order(&self, formula: &Formula) -> bool {
        self.iter().all(|(x, y)| {
            matches!(
                (formula.prefix().depth(x), formula.prefix().depth(y)),
                (Some(dx), Some(dy)) if dx < dy
            )
        })
    }

    /// Pairs sorted by `(depth(x), depth(y))`. Pairs mentioning variables
    /// outside the prefix go last, by index.
    pub fn sorted_pairs(&self, formula: &Formula) -> Vec<(Var, Var)> {
        let key = |v: Var| formula.prefix().depth(v).unwrap_or(usize::MAX);
        let mut pairs: Vec<(Var, Var)> = self.iter().collect();
        pairs.sort_by_key(|&(x, y)| (key(x), key(y), x, y));
        pairs
    }

    /// One `x y` line per pair in prefix order. `verbose` annotates each
    /// variable with its quantifier and depth, e.g. `3(a@3)`.
    pub fn to_text(&self, formula: &Formula, verbose: bool) -> String {
        let mut out = String::new();
        for (x, y) in self.sorted_pairs(formula) {
            writeln!(
                out,
                "{} {}",
                var_label(formula, x, verbose),
                var_label(formula, y, verbose)
            )
            .unwrap();
        }
        out
    }
}

impl FromIterator<(Var, Var)> for DependencyRelation {
    fn from_iter<I: IntoIterator<Item = (Var, Var)>>(iter: I) -> Self {
        DependencyRelation {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl Extend<(Var, Var)> for DependencyRelation {
    fn extend<I: IntoIterator<Item = (Var, Var)>>(&mut self, iter: I) {
        self.pairs.extend(iter)
    }
}

pub fn var_label(formula: &Formula, v: Var, verbose: bool) -> String {
    if !verbose {
        return v.to_string();
    }
    match (formula.prefix().quantifier(v), formula.prefix().depth(v)) {
        (Some(q), Some(d)) => format!("{v}({q}@{d})"),
        _ => v.to_string(),
    }
}

/// `R_F`: each variable paired with every variable to its right.
pub fn prefix_relation(formula: &Formula) -> DependencyRelation {
    let vars: Vec<Var> = formula.vars().collect();
    let mut rel = DependencyRelation::new();
    for (i, &x) in vars.iter().enumerate() {
        for &y in &vars[i + 1..] {
            rel.insert(x, y);
        }
    }
    rel
}

/// `R*(X)`: `set` together with everything reachable from it along pairs of
/// `relation`.
pub fn closure(relation: &DependencyRelation, set: &BTreeSet<Var>) -> BTreeSet<Var> {
    let mut reached = set.clone();
    let mut queue: VecDeque<Var> = set.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for y in relation.image(x) {
            if reached.insert(y) {
                queue.push_back(y);
            }
        }
    }
    reached
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Res,
    Triv,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Res => "res",
            Scheme::Triv => "triv",
        }
    }
}

/// SHA-256 of the normalized QDIMACS rendering, in hex.
pub fn formula_hash(formula: &Formula) -> String {
    let digest = Sha256::digest(to_qdimacs(formula).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// The structured form of a relation: `{scheme, formula_hash, pairs,
/// diagnostics}`.
#[derive(Clone, Debug, Serialize)]
pub struct RelationDocument {
    pub scheme: Scheme,
    pub formula_hash: String,
    pub pairs: Vec<[u32; 2]>,
    pub diagnostics: Diagnostics,
}

impl RelationDocument {
    pub fn new(
        scheme: Scheme,
        formula: &Formula,
        relation: &DependencyRelation,
        diagnostics: &Diagnostics,
    ) -> RelationDocument {
        RelationDocument {
            scheme,
            formula_hash: formula_hash(formula),
            pairs: relation
                .sorted_pairs(formula)
                .into_iter()
                .map(|(x, y)| [x.id(), y.id()])
                .collect(),
            diagnostics: diagnostics.clone(),
        }
    }
}
