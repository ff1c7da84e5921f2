//! Resolution-path dependencies in linear time per query.
//!
//! Every query splits the formula to 3-CNF, builds the colored literal
//! graph for the required connecting set and runs [`pec_walk`] from the
//! source literals. Two literals are resolution connected exactly when the
//! walk reaches the second one with a blue last edge.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Lit, Quantifier, Var};
use crate::path::{PathStep, ResolutionPath};
use crate::pec::{connection_graph_unchecked, pec_walk, Color, ColorLabeling, ColoredGraph};
use crate::relation::DependencyRelation;
use crate::split::{split_clauses, SplitError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResdepError {
    #[error("variable {0} is not quantified in the prefix")]
    UnknownVariable(Var),
    #[error("variable {0} is universal and cannot link resolution steps")]
    NotExistential(Var),
    #[error("variable {0} is universal; expected an existential variable")]
    ExpectedExistential(Var),
    #[error("both literals are {0}; a literal is not connected to itself")]
    SameLiteral(Lit),
    #[error("both arguments are variable {0}")]
    SameVariable(Var),
    #[error("witness could not be mapped back: {0}")]
    Witness(#[from] SplitError),
}

/// Work counters of the PEC walks behind a query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WalkStats {
    pub walks: usize,
    pub vertices: usize,
    pub edges: usize,
    pub queue_pushes: usize,
    /// Time spent building connection graphs, summed over threads.
    pub graph_time: Duration,
    /// Time spent in PEC walks, summed over threads.
    pub walk_time: Duration,
}

impl WalkStats {
    fn record(&mut self, graph: &ColoredGraph, labeling: &ColorLabeling, elapsed: Duration) {
        self.walks += 1;
        self.walk_time += elapsed;
        self.vertices = self.vertices.max(graph.vertex_count());
        self.edges = self.edges.max(graph.edge_count());
        self.queue_pushes += labeling.queue_pushes();
    }

    fn merge(&mut self, other: &WalkStats) {
        self.walks += other.walks;
        self.vertices = self.vertices.max(other.vertices);
        self.edges = self.edges.max(other.edges);
        self.queue_pushes += other.queue_pushes;
        self.graph_time += other.graph_time;
        self.walk_time += other.walk_time;
    }
}

/// The 3-CNF form of a formula, computed once and shared by queries with
/// different connecting sets. Splitting does not depend on the set; only
/// which variables get red edges does.
pub struct Connector<'f> {
    original: &'f Formula,
    split: Formula,
    provenance: Vec<usize>,
    fresh: Vec<Var>,
    occurrences: Vec<Vec<u32>>,
}

impl<'f> Connector<'f> {
    pub fn new(formula: &'f Formula) -> Connector<'f> {
        let (split, provenance, fresh) = split_clauses(formula);
        let mut occurrences = vec![Vec::new(); 2 * (split.num_vars() as usize + 1)];
        for (i, clause) in split.clauses().iter().enumerate() {
            for l in clause.iter() {
                occurrences[l.code()].push(i as u32);
            }
        }
        Connector { original: formula, split, provenance, fresh, occurrences }
    }

    pub fn formula(&self) -> &'f Formula {
        self.original
    }

    /// The ternary formula queries run on.
    pub fn split_formula(&self) -> &Formula {
        &self.split
    }

    fn check_links(&self, links: &BTreeSet<Var>) -> Result<(), ResdepError> {
        for &z in links {
            match self.original.prefix().quantifier(z) {
                None => return Err(ResdepError::UnknownVariable(z)),
                Some(Quantifier::Forall) => return Err(ResdepError::NotExistential(z)),
                Some(Quantifier::Exists) => {}
            }
        }
        Ok(())
    }

    /// Graph of the split formula with red edges for `links` and for every
    /// fresh variable.
    pub fn graph(&self, links: &BTreeSet<Var>) -> Result<ColoredGraph, ResdepError> {
        self.check_links(links)?;
        let mut mask = vec![false; self.split.num_vars() as usize + 1];
        for z in links.iter().chain(&self.fresh) {
            mask[z.index()] = true;
        }
        Ok(connection_graph_unchecked(&self.split, &mask))
    }

    fn graph_from_mask(&self, mut mask: Vec<bool>) -> ColoredGraph {
        mask.resize(self.split.num_vars() as usize + 1, false);
        for z in &self.fresh {
            mask[z.index()] = true;
        }
        connection_graph_unchecked(&self.split, &mask)
    }

    fn timed_graph(&self, mask: Vec<bool>, stats: &mut WalkStats) -> ColoredGraph {
        let start = Instant::now();
        let graph = self.graph_from_mask(mask);
        stats.graph_time += start.elapsed();
        graph
    }

    fn walk(&self, graph: &ColoredGraph, from: Lit) -> ColorLabeling {
        pec_walk(graph, from.code()).expect("literal vertex in range")
    }

    fn timed_walk(&self, graph: &ColoredGraph, from: Lit, stats: &mut WalkStats) -> ColorLabeling {
        let start = Instant::now();
        let labeling = self.walk(graph, from);
        stats.record(graph, &labeling, start.elapsed());
        labeling
    }

    /// Resolution connectedness of `from` and `to` with respect to `links`.
    pub fn connected(&self, links: &BTreeSet<Var>, from: Lit, to: Lit) -> Result<bool, ResdepError> {
        self.check_literals(from, to)?;
        let graph = self.graph(links)?;
        Ok(self.walk(&graph, from).has(to.code(), Color::Blue))
    }

    /// Like [`connected`](Self::connected), returning a witness path over
    /// the original clauses.
    pub fn connecting_path(
        &self,
        links: &BTreeSet<Var>,
        from: Lit,
        to: Lit,
    ) -> Result<Option<ResolutionPath>, ResdepError> {
        self.check_literals(from, to)?;
        let graph = self.graph(links)?;
        let labeling = self.walk(&graph, from);
        self.witness(&graph, &labeling, links, to)
    }

    fn check_literals(&self, from: Lit, to: Lit) -> Result<(), ResdepError> {
        if from == to {
            return Err(ResdepError::SameLiteral(from));
        }
        for l in [from, to] {
            if !self.original.prefix().contains(l.var()) {
                return Err(ResdepError::UnknownVariable(l.var()));
            }
        }
        Ok(())
    }

    /// Turns the labeling's walk to `to` into a resolution path of the
    /// split formula, then collapses fresh links. The result is validated.
    fn witness(
        &self,
        graph: &ColoredGraph,
        labeling: &ColorLabeling,
        links: &BTreeSet<Var>,
        to: Lit,
    ) -> Result<Option<ResolutionPath>, ResdepError> {
        if !labeling.has(to.code(), Color::Blue) {
            return Ok(None);
        }
        let walk = labeling
            .extract_walk(graph, to.code(), Color::Blue)
            .expect("label present");
        // Blue edges at even positions are clause steps, red ones links.
        let lit = |v: usize| Lit::from_code(v).expect("literal vertex");
        let steps: Vec<PathStep> = walk
            .chunks(2)
            .zip(walk[1..].chunks(2))
            .map(|(a, b)| {
                let (entry, exit) = (lit(a[0]), lit(b[0]));
                PathStep { entry, clause: self.shared_clause(entry, exit), exit }
            })
            .collect();
        let split_path = ResolutionPath::new(steps);
        let mut split_links = links.clone();
        split_links.extend(self.fresh.iter().copied());
        debug_assert_eq!(split_path.validate(&self.split, &split_links), Ok(()));
        Ok(Some(self.map_back(&split_path, links)?))
    }

    fn shared_clause(&self, a: Lit, b: Lit) -> usize {
        let (short, other) = if self.occurrences[a.code()].len() <= self.occurrences[b.code()].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.occurrences[short.code()]
            .iter()
            .map(|&c| c as usize)
            .find(|&c| self.split.clause(c).contains(other))
            .expect("blue edge comes from a shared clause")
    }

    fn map_back(&self, path: &ResolutionPath, links: &BTreeSet<Var>) -> Result<ResolutionPath, SplitError> {
        let fresh_start = self.original.num_vars();
        let mut steps: Vec<PathStep> = Vec::with_capacity(path.len());
        let mut open: Option<Lit> = None;
        for step in path.steps() {
            let entry = open.unwrap_or(step.entry);
            if step.exit.var().id() > fresh_start {
                open = Some(entry);
            } else {
                let clause = self.provenance[step.clause];
                steps.push(PathStep { entry, clause, exit: step.exit });
                open = None;
            }
        }
        let mapped = ResolutionPath::new(steps);
        mapped
            .validate(self.original, links)
            .map_err(SplitError::MappedPathInvalid)?;
        Ok(mapped)
    }

    /// The dependency-pair test for `x`, `y` with respect to `links`, with
    /// witnesses if requested. Runs two walks, from `x` and from `¬x`.
    pub fn dependency_pair(
        &self,
        links: &BTreeSet<Var>,
        x: Var,
        y: Var,
        witnesses: bool,
    ) -> Result<(bool, Option<WitnessPair>, WalkStats), ResdepError> {
        if x == y {
            return Err(ResdepError::SameVariable(x));
        }
        self.check_literals(x.positive(), y.positive())?;
        let graph = self.graph(links)?;
        self.pair_on_graph(&graph, links, x, y, witnesses)
    }

    fn pair_on_graph(
        &self,
        graph: &ColoredGraph,
        links: &BTreeSet<Var>,
        x: Var,
        y: Var,
        witnesses: bool,
    ) -> Result<(bool, Option<WitnessPair>, WalkStats), ResdepError> {
        let mut stats = WalkStats::default();
        let pos = self.timed_walk(graph, x.positive(), &mut stats);
        let neg = self.timed_walk(graph, x.negative(), &mut stats);
        let Some(crossed) = pair_configuration(&pos, &neg, y) else {
            return Ok((false, None, stats));
        };
        let pair = if witnesses {
            let (a, b) = if crossed {
                (y.negative(), y.positive())
            } else {
                (y.positive(), y.negative())
            };
            Some(WitnessPair {
                crossed,
                from_positive: self.witness(graph, &pos, links, a)?.expect("label checked"),
                from_negative: self.witness(graph, &neg, links, b)?.expect("label checked"),
            })
        } else {
            None
        };
        Ok((true, pair, stats))
    }
}

/// `Some(false)` when `x∼y` and `¬x∼¬y`, `Some(true)` when only the
/// crossed configuration `x∼¬y`, `¬x∼y` holds, `None` when neither does.
fn pair_configuration(pos: &ColorLabeling, neg: &ColorLabeling, y: Var) -> Option<bool> {
    let reach = |l: &ColorLabeling, t: Lit| l.has(t.code(), Color::Blue);
    if reach(pos, y.positive()) && reach(neg, y.negative()) {
        Some(false)
    } else if reach(pos, y.negative()) && reach(neg, y.positive()) {
        Some(true)
    } else {
        None
    }
}

/// Resolution paths certifying a dependency pair `(x, y)`, over the
/// original clauses. Without `crossed`, the paths run `x`→`y` and
/// `¬x`→`¬y`; with it, `x`→`¬y` and `¬x`→`y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub crossed: bool,
    pub from_positive: ResolutionPath,
    pub from_negative: ResolutionPath,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyQueryResult {
    pub dependent: bool,
    pub witnesses: Option<WitnessPair>,
}

/// Whether `from` and `to` are resolution connected in `formula` with
/// respect to `links`. Literals of variables that do not occur in the
/// matrix are connected to nothing.
pub fn resolution_connected(
    formula: &Formula,
    links: &BTreeSet<Var>,
    from: Lit,
    to: Lit,
) -> Result<bool, ResdepError> {
    Connector::new(formula).connected(links, from, to)
}

/// A resolution path from `from` to `to`, if one exists.
pub fn resolution_path(
    formula: &Formula,
    links: &BTreeSet<Var>,
    from: Lit,
    to: Lit,
) -> Result<Option<ResolutionPath>, ResdepError> {
    Connector::new(formula).connecting_path(links, from, to)
}

pub fn is_dependency_pair(
    formula: &Formula,
    links: &BTreeSet<Var>,
    x: Var,
    y: Var,
) -> Result<bool, ResdepError> {
    Ok(Connector::new(formula).dependency_pair(links, x, y, false)?.0)
}

fn known(formula: &Formula, v: Var) -> Result<(), ResdepError> {
    if formula.prefix().contains(v) {
        Ok(())
    } else {
        Err(ResdepError::UnknownVariable(v))
    }
}

/// The connecting set for a pair: existentials right of `x`, minus `y`.
fn pair_links(formula: &Formula, x: Var, y: Var) -> Vec<bool> {
    let mut mask = vec![false; formula.num_vars() as usize + 1];
    let d = formula.prefix().depth(x).expect("known variable");
    for &(v, q) in &formula.prefix().entries()[d..] {
        mask[v.index()] = q == Quantifier::Exists && v != y;
    }
    mask
}

fn mask_to_set(mask: &[bool]) -> BTreeSet<Var> {
    mask.iter()
        .enumerate()
        .filter(|&(_, &on)| on)
        .map(|(i, _)| Var::new(i as u32))
        .collect()
}

/// Whether `(x, y) ∈ D^res_F`.
pub fn dres_contains(formula: &Formula, x: Var, y: Var) -> Result<DependencyQueryResult, ResdepError> {
    dres_query(&Connector::new(formula), x, y, false).map(|r| r.0)
}

/// [`dres_contains`] with a witness pair for dependent pairs.
pub fn dres_contains_with_witness(
    formula: &Formula,
    x: Var,
    y: Var,
) -> Result<DependencyQueryResult, ResdepError> {
    dres_query(&Connector::new(formula), x, y, true).map(|r| r.0)
}

/// Membership of `(x, y)` using a prepared connector.
pub fn dres_query(
    connector: &Connector<'_>,
    x: Var,
    y: Var,
    witnesses: bool,
) -> Result<(DependencyQueryResult, WalkStats), ResdepError> {
    let formula = connector.formula();
    known(formula, x)?;
    known(formula, y)?;
    if x == y {
        return Err(ResdepError::SameVariable(x));
    }
    let not_dependent = DependencyQueryResult { dependent: false, witnesses: None };
    let prefix = formula.prefix();
    if prefix.depth(x) >= prefix.depth(y) || prefix.quantifier(x) == prefix.quantifier(y) {
        return Ok((not_dependent, WalkStats::default()));
    }
    let mask = pair_links(formula, x, y);
    let links = mask_to_set(&mask);
    let mut stats = WalkStats::default();
    let graph = connector.timed_graph(mask, &mut stats);
    let (dependent, pair, walks) = connector.pair_on_graph(&graph, &links, x, y, witnesses)?;
    stats.merge(&walks);
    Ok((DependencyQueryResult { dependent, witnesses: pair }, stats))
}

/// `D^res_F(y)` for an existential `y` with witnesses and work counters.
#[derive(Clone, Debug, Default)]
pub struct ExistentialReport {
    pub dependents: BTreeSet<Var>,
    pub witnesses: BTreeMap<Var, WitnessPair>,
    pub stats: WalkStats,
}

/// `D^res_F(y)` for an existential `y`: the universals right of `y` it
/// depends on. All of them share the connecting set `R_F(y) ∖ var∀`, so
/// two walks, from `y` and `¬y`, decide every candidate.
pub fn dres_of_existential(formula: &Formula, y: Var) -> Result<BTreeSet<Var>, ResdepError> {
    Ok(existential_report(&Connector::new(formula), y, false)?.dependents)
}

pub fn existential_report(
    connector: &Connector<'_>,
    y: Var,
    witnesses: bool,
) -> Result<ExistentialReport, ResdepError> {
    let formula = connector.formula();
    match formula.prefix().quantifier(y) {
        None => return Err(ResdepError::UnknownVariable(y)),
        Some(Quantifier::Forall) => return Err(ResdepError::ExpectedExistential(y)),
        Some(Quantifier::Exists) => {}
    }
    let mask = pair_links(formula, y, y);
    let links = mask_to_set(&mask);
    let mut report = ExistentialReport::default();
    let graph = connector.timed_graph(mask, &mut report.stats);
    let d = connector.timed_walk(&graph, y.positive(), &mut report.stats);
    let d_neg = connector.timed_walk(&graph, y.negative(), &mut report.stats);
    let depth = formula.prefix().depth(y).expect("checked");
    for &(x, q) in &formula.prefix().entries()[depth..] {
        if q != Quantifier::Forall {
            continue;
        }
        let Some(crossed) = pair_configuration(&d, &d_neg, x) else {
            continue;
        };
        report.dependents.insert(x);
        if witnesses {
            let (a, b) = if crossed {
                (x.negative(), x.positive())
            } else {
                (x.positive(), x.negative())
            };
            let pair = WitnessPair {
                crossed,
                from_positive: connector.witness(&graph, &d, &links, a)?.expect("label checked"),
                from_negative: connector.witness(&graph, &d_neg, &links, b)?.expect("label checked"),
            };
            report.witnesses.insert(x, pair);
        }
    }
    Ok(report)
}

/// Options for [`dres_full_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct FullOptions {
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub jobs: usize,
    /// Collect witnesses for existential-source pairs.
    pub witnesses: bool,
}

#[derive(Clone, Debug, Default)]
pub struct FullReport {
    pub relation: DependencyRelation,
    /// Witnesses keyed by pair, for existential-source pairs.
    pub witnesses: BTreeMap<(Var, Var), WitnessPair>,
    pub stats: WalkStats,
}

/// All of `D^res_F`.
pub fn dres_full(formula: &Formula) -> DependencyRelation {
    dres_full_with(formula, FullOptions::default()).relation
}

/// All of `D^res_F`: existential sources by [`existential_report`],
/// universal sources pair by pair, since each pair excludes its own `y`
/// from the connecting set. The relation does not depend on `jobs`.
pub fn dres_full_with(formula: &Formula, options: FullOptions) -> FullReport {
    full_report(&Connector::new(formula), options)
}

/// [`dres_full_with`] on a prepared connector.
pub fn full_report(connector: &Connector<'_>, options: FullOptions) -> FullReport {
    let formula = connector.formula();
    let sources: Vec<(Var, Quantifier)> = formula.prefix().entries().to_vec();
    let per_source = |&(x, q): &(Var, Quantifier)| -> FullReport {
        let mut out = FullReport::default();
        match q {
            Quantifier::Exists => {
                let r = existential_report(connector, x, options.witnesses).expect("existential source");
                out.relation.extend(r.dependents.iter().map(|&u| (x, u)));
                out.witnesses.extend(r.witnesses.into_iter().map(|(u, w)| ((x, u), w)));
                out.stats.merge(&r.stats);
            }
            Quantifier::Forall => {
                let depth = formula.prefix().depth(x).expect("prefix variable");
                for &(y, qy) in &sources[depth..] {
                    if qy != Quantifier::Exists {
                        continue;
                    }
                    let (r, stats) = dres_query(connector, x, y, false).expect("valid pair");
                    if r.dependent {
                        out.relation.insert(x, y);
                    }
                    out.stats.merge(&stats);
                }
            }
        }
        out
    };
    let parts: Vec<FullReport> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| sources.par_iter().map(per_source).collect())
    } else {
        sources.iter().map(per_source).collect()
    };
    let mut report = FullReport::default();
    for part in parts {
        report.relation.extend(part.relation.iter());
        report.witnesses.extend(part.witnesses);
        report.stats.merge(&part.stats);
    }
    report
}

/// The trivial scheme: every prefix pair crossing a quantifier block
/// boundary, restricted to variables that occur in the matrix.
pub fn dtriv_full(formula: &Formula) -> DependencyRelation {
    let entries = formula.prefix().entries();
    let mut block = Vec::with_capacity(entries.len());
    let mut current = 0;
    for (i, &(_, q)) in entries.iter().enumerate() {
        if i > 0 && entries[i - 1].1 != q {
            current += 1;
        }
        block.push(current);
    }
    let mut rel = DependencyRelation::new();
    for (i, &(x, _)) in entries.iter().enumerate() {
        if !formula.occurs(x) {
            continue;
        }
        for (j, &(y, _)) in entries.iter().enumerate().skip(i + 1) {
            if block[i] != block[j] && formula.occurs(y) {
                rel.insert(x, y);
            }
        }
    }
    rel
}
