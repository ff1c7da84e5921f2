//! Two-edge-colored graphs and properly edge-colored (PEC) walks.
//!
//! A PEC walk never uses two consecutive edges of the same color; unlike a
//! path it may revisit vertices. [`pec_walk`] labels every vertex `t` with
//! the colors `c` such that some PEC walk from the source to `t` starts with
//! a blue edge and ends with a `c` edge, in time linear in the graph size.
//!
//! [`build_connection_graph`] turns a ternary formula into such a graph:
//! one vertex per literal, blue edges between literals sharing a clause,
//! red edges between the two literals of every connecting variable.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Lit, Var};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::Red, Color::Blue];

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Color::Red => 1,
            Color::Blue => 2,
        }
    }

    fn slot(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Blue => 'b',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(usize, usize),
    #[error("clause {clause} has {len} literals; split the formula to 3-CNF first")]
    NotTernary { clause: usize, len: usize },
    #[error("variable {0} is not existential and cannot link resolution steps")]
    NotExistential(Var),
    #[error("variable {0} is not quantified in the prefix")]
    UnknownVariable(Var),
    #[error("the source vertex itself cannot be queried")]
    SourceQuery,
    #[error("vertex {vertex} has no {color:?} label")]
    MissingLabel { vertex: usize, color: Color },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An undirected simple graph whose edges are red or blue, stored as
/// per-vertex adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    adjacency: Vec<Vec<(u32, Color)>>,
    edges: usize,
}

impl ColoredGraph {
    pub fn new(vertex_count: usize) -> ColoredGraph {
        ColoredGraph {
            adjacency: vec![Vec::new(); vertex_count],
            edges: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(u32, Color)] {
        &self.adjacency[v]
    }

    /// Adds an edge after checking simplicity. Linear in the degree of `u`.
    pub fn add_edge(&mut self, u: usize, v: usize, color: Color) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange(x));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.color(u, v).is_some() {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adjacency[u].push((v as u32, color));
        self.adjacency[v].push((u as u32, color));
        self.edges += 1;
        Ok(())
    }

    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        self.adjacency
            .get(u)?
            .iter()
            .find(|&&(w, _)| w as usize == v)
            .map(|&(_, c)| c)
    }

    /// Each edge once, as `(u, v, color)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, Color)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| {
                adj.iter()
                    .filter(move |&&(v, _)| u < v as usize)
                    .map(move |&(v, c)| (u, v as usize, c))
            })
            .collect();
        out.sort();
        out
    }

    /// Line-oriented export: `v <n>` followed by `e <u> <v> <r|b>` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("v {}\n", self.vertex_count());
        for (u, v, c) in self.edges() {
            writeln!(out, "e {u} {v} {}", c.symbol()).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<ColoredGraph, GraphError> {
        let mut graph: Option<ColoredGraph> = None;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let parse_err = |message: &str| GraphError::Parse {
                line: line_no,
                message: message.to_string(),
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                ["v", n] if graph.is_none() => {
                    let n = n.parse().map_err(|_| parse_err("bad vertex count"))?;
                    graph = Some(ColoredGraph::new(n));
                }
                ["e", u, v, c] => {
                    let g = graph.as_mut().ok_or_else(|| parse_err("edge before `v` line"))?;
                    let u = u.parse().map_err(|_| parse_err("bad vertex"))?;
                    let v = v.parse().map_err(|_| parse_err("bad vertex"))?;
                    let color = match *c {
                        "r" => Color::Red,
                        "b" => Color::Blue,
                        _ => return Err(parse_err("color must be r or b")),
                    };
                    g.add_edge(u, v, color)?;
                }
                _ => return Err(parse_err("expected `v <n>` or `e <u> <v> <r|b>`")),
            }
        }
        graph.ok_or(GraphError::Parse {
            line: 1,
            message: "missing `v` line".to_string(),
        })
    }
}

const NO_PRED: u32 = u32::MAX;
const SEED_PRED: u32 = u32::MAX - 1;

/// Order in which [`pec_walk_with`] processes pending edges. The labeling
/// does not depend on it; witness walks do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QueueDiscipline {
    /// Breadth-first: witnesses are shortest walks.
    #[default]
    Fifo,
    Lifo,
}

/// The output of [`pec_walk`]: for each vertex, the set `ψ(v)` of colors
/// that can end a PEC walk from the source with a blue first edge, and for
/// each label the vertex it was reached from.
#[derive(Clone, Debug)]
pub struct ColorLabeling {
    source: usize,
    labels: Vec<u8>,
    pred: Vec<[u32; 2]>,
    pushes: usize,
}

/// Runs PEC-Walk from `source` with a FIFO queue.
pub fn pec_walk(graph: &ColoredGraph, source: usize) -> Result<ColorLabeling, GraphError> {
    pec_walk_with(graph, source, QueueDiscipline::Fifo)
}

pub fn pec_walk_with(
    graph: &ColoredGraph,
    source: usize,
    discipline: QueueDiscipline,
) -> Result<ColorLabeling, GraphError> {
    let n = graph.vertex_count();
    if source >= n {
        return Err(GraphError::VertexOutOfRange(source));
    }
    let mut labeling = ColorLabeling {
        source,
        labels: vec![0; n],
        pred: vec![[NO_PRED; 2]; n],
        pushes: 0,
    };
    // Pending traversed edges (from, to, color of the edge).
    let mut queue: VecDeque<(u32, u32, Color)> = VecDeque::new();

    for &(w, c) in graph.neighbors(source) {
        if c == Color::Blue && labeling.insert(w as usize, Color::Blue, SEED_PRED) {
            queue.push_back((source as u32, w, Color::Blue));
        }
    }
    loop {
        let next = match discipline {
            QueueDiscipline::Fifo => queue.pop_front(),
            QueueDiscipline::Lifo => queue.pop_back(),
        };
        let Some((_, v, arrived)) = next else { break };
        for &(w, c) in graph.neighbors(v as usize) {
            if c != arrived && labeling.insert(w as usize, c, v) {
                queue.push_back((v, w, c));
            }
        }
    }
    Ok(labeling)
}

impl ColorLabeling {
    /// Adds `color` to `ψ(vertex)`; false if it was already there.
    fn insert(&mut self, vertex: usize, color: Color, from: u32) -> bool {
        if self.labels[vertex] & color.bit() != 0 {
            return false;
        }
        self.labels[vertex] |= color.bit();
        self.pred[vertex][color.slot()] = from;
        self.pushes += 1;
        true
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Whether `color ∈ ψ(vertex)`. Out-of-range vertices carry no labels.
    pub fn has(&self, vertex: usize, color: Color) -> bool {
        self.labels
            .get(vertex)
            .is_some_and(|&l| l & color.bit() != 0)
    }

    pub fn colors(&self, vertex: usize) -> Vec<Color> {
        Color::ALL
            .into_iter()
            .filter(|&c| self.has(vertex, c))
            .collect()
    }

    /// Number of edges pushed onto the work queue during the run; at most
    /// twice the number of edges.
    pub fn queue_pushes(&self) -> usize {
        self.pushes
    }

    /// Whether some PEC walk from the source to `target` starts blue and
    /// ends with `color`. The source itself is not a valid target.
    pub fn reachable_with_last_color(&self, target: usize, color: Color) -> Result<bool, GraphError> {
        if target == self.source {
            return Err(GraphError::SourceQuery);
        }
        if target >= self.labels.len() {
            return Err(GraphError::VertexOutOfRange(target));
        }
        Ok(self.has(target, color))
    }

    /// Reconstructs a witness walk from the predecessor records and checks
    /// it against `graph` before returning it.
    pub fn extract_walk(
        &self,
        graph: &ColoredGraph,
        target: usize,
        color: Color,
    ) -> Result<Vec<usize>, GraphError> {
        if !self.has(target, color) {
            return Err(GraphError::MissingLabel { vertex: target, color });
        }
        let limit = 2 * self.labels.len() + 1;
        let mut walk = vec![target];
        let (mut v, mut c) = (target, color);
        loop {
            match self.pred[v][c.slot()] {
                SEED_PRED => {
                    walk.push(self.source);
                    break;
                }
                NO_PRED => unreachable!("label without predecessor"),
                u => {
                    walk.push(u as usize);
                    v = u as usize;
                    c = c.other();
                }
            }
            assert!(walk.len() <= limit, "predecessor chain longer than 2|V|");
        }
        walk.reverse();
        let colors = check_pec_walk(graph, &walk).expect("extracted walk must be a PEC walk");
        debug_assert_eq!(colors.first(), Some(&Color::Blue));
        debug_assert_eq!(colors.last(), Some(&color));
        Ok(walk)
    }
}

/// Checks that `walk` follows edges of `graph` and alternates colors,
/// returning the edge colors. An empty list means a single-vertex walk.
pub fn check_pec_walk(graph: &ColoredGraph, walk: &[usize]) -> Option<Vec<Color>> {
    let mut colors = Vec::with_capacity(walk.len().saturating_sub(1));
    for pair in walk.windows(2) {
        let c = graph.color(pair[0], pair[1])?;
        if colors.last() == Some(&c) {
            return None;
        }
        colors.push(c);
    }
    Some(colors)
}

fn link_mask(formula: &Formula, links: &BTreeSet<Var>) -> Result<Vec<bool>, GraphError> {
    let mut mask = vec![false; formula.num_vars() as usize + 1];
    for &z in links {
        match formula.prefix().quantifier(z) {
            None => return Err(GraphError::UnknownVariable(z)),
            Some(crate::formula::Quantifier::Forall) => return Err(GraphError::NotExistential(z)),
            Some(_) => mask[z.index()] = true,
        }
    }
    Ok(mask)
}

/// Builds the colored literal graph of a ternary formula: vertex `ℓ.code()`
/// per literal, blue edges between literals sharing a clause, red edges
/// `z`–`¬z` for every `z` in `links`. Linear in the formula size.
pub fn build_connection_graph(
    formula: &Formula,
    links: &BTreeSet<Var>,
) -> Result<ColoredGraph, GraphError> {
    let mask = link_mask(formula, links)?;
    if let Some((clause, c)) = formula.clauses().iter().enumerate().find(|(_, c)| c.len() > 3) {
        return Err(GraphError::NotTernary { clause, len: c.len() });
    }
    Ok(connection_graph_unchecked(formula, &mask))
}

/// `links` is indexed by variable; the formula must be ternary.
pub(crate) fn connection_graph_unchecked(formula: &Formula, links: &[bool]) -> ColoredGraph {
    let n = 2 * (formula.num_vars() as usize + 1);
    let mut adjacency: Vec<Vec<(u32, Color)>> = vec![Vec::new(); n];
    for clause in formula.clauses() {
        let lits = clause.lits();
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                adjacency[a.code()].push((b.code() as u32, Color::Blue));
                adjacency[b.code()].push((a.code() as u32, Color::Blue));
            }
        }
    }
    // Literal pairs shared by several clauses give one edge.
    let mut stamp = vec![u32::MAX; n];
    let mut half_edges = 0;
    for (v, adj) in adjacency.iter_mut().enumerate() {
        adj.retain(|&(w, _)| std::mem::replace(&mut stamp[w as usize], v as u32) != v as u32);
        half_edges += adj.len();
    }
    for (id, _) in links.iter().enumerate().filter(|&(_, &on)| on) {
        let z = Var::new(id as u32);
        let (p, q) = (z.positive().code(), z.negative().code());
        adjacency[p].push((q as u32, Color::Red));
        adjacency[q].push((p as u32, Color::Red));
        half_edges += 2;
    }
    ColoredGraph {
        adjacency,
        edges: half_edges / 2,
    }
}

/// The uncolored incidence graph on clauses and literals: `C`–`ℓ` for
/// `ℓ ∈ C` and `z`–`¬z` for `z` in `links`. Literal `ℓ` is vertex
/// `ℓ.code()`; clause `i` follows all literal vertices.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    literal_vertices: usize,
    adjacency: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn literal_vertex(&self, lit: Lit) -> usize {
        lit.code()
    }

    pub fn clause_vertex(&self, clause: usize) -> usize {
        self.literal_vertices + clause
    }

    pub fn is_clause_vertex(&self, v: usize) -> bool {
        v >= self.literal_vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|a| a.contains(&v))
    }
}

pub fn build_incidence_graph(
    formula: &Formula,
    links: &BTreeSet<Var>,
) -> Result<IncidenceGraph, GraphError> {
    let mask = link_mask(formula, links)?;
    let literal_vertices = 2 * (formula.num_vars() as usize + 1);
    let mut adjacency = vec![Vec::new(); literal_vertices + formula.clauses().len()];
    for (i, clause) in formula.clauses().iter().enumerate() {
        let cv = literal_vertices + i;
        for lit in clause.iter() {
            adjacency[cv].push(lit.code());
            adjacency[lit.code()].push(cv);
        }
    }
    for (id, _) in mask.iter().enumerate().filter(|&(_, &on)| on) {
        let z = Var::new(id as u32);
        adjacency[z.positive().code()].push(z.negative().code());
        adjacency[z.negative().code()].push(z.positive().code());
    }
    Ok(IncidenceGraph {
        literal_vertices,
        adjacency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::split::to_q3cnf;

    fn code(v: i64) -> usize {
        lit(v).code()
    }

    #[test]
    fn walk_not_path_labels() {
        let g = walk_not_path_graph();
        let psi = pec_walk(&g, S).unwrap();
        assert!(psi.reachable_with_last_color(T, Color::Blue).unwrap());
        // s,u,w,v ends blue at v, s,u,v ends red
        assert_eq!(psi.colors(GV), vec![Color::Red, Color::Blue]);
        assert_eq!(psi.colors(GW), vec![Color::Red, Color::Blue]);
        assert_eq!(psi.colors(GU), vec![Color::Red, Color::Blue]);
        assert!(!psi.reachable_with_last_color(T, Color::Red).unwrap());
        assert_eq!(psi.reachable_with_last_color(S, Color::Blue), Err(GraphError::SourceQuery));
        assert!(psi.queue_pushes() <= 2 * g.edge_count());
    }

    #[test]
    fn walk_not_path_witness() {
        let g = walk_not_path_graph();
        let psi = pec_walk(&g, S).unwrap();
        let walk = psi.extract_walk(&g, T, Color::Blue).unwrap();
        assert_eq!(walk, vec![S, GU, GV, GW, GU, T]);
        assert_eq!(psi.extract_walk(&g, GV, Color::Blue).unwrap(), vec![S, GU, GW, GV]);
        assert!(psi.extract_walk(&g, T, Color::Red).is_err());
    }

    #[test]
    fn blue_star_labels_leaves_only() {
        let mut g = ColoredGraph::new(4);
        for leaf in 1..4 {
            g.add_edge(0, leaf, Color::Blue).unwrap();
        }
        let psi = pec_walk(&g, 0).unwrap();
        for leaf in 1..4 {
            assert_eq!(psi.colors(leaf), vec![Color::Blue]);
        }
        assert!(psi.colors(0).is_empty());
    }

    #[test]
    fn isolated_source_and_red_start() {
        let mut g = ColoredGraph::new(3);
        g.add_edge(1, 2, Color::Blue).unwrap();
        let psi = pec_walk(&g, 0).unwrap();
        assert!((0..3).all(|v| psi.colors(v).is_empty()));

        let mut g = ColoredGraph::new(3);
        g.add_edge(0, 1, Color::Red).unwrap();
        g.add_edge(1, 2, Color::Blue).unwrap();
        let psi = pec_walk(&g, 0).unwrap();
        assert!((0..3).all(|v| psi.colors(v).is_empty()));
        assert!(pec_walk(&g, 3).is_err());
    }

    #[test]
    fn single_edge_and_chain_witnesses() {
        let mut g = ColoredGraph::new(2);
        g.add_edge(0, 1, Color::Blue).unwrap();
        let psi = pec_walk(&g, 0).unwrap();
        assert_eq!(psi.extract_walk(&g, 1, Color::Blue).unwrap(), vec![0, 1]);

        // s=0, a=1, b=2, t=3: blue s-a, red a-b, blue b-t
        let mut g = ColoredGraph::new(4);
        g.add_edge(0, 1, Color::Blue).unwrap();
        g.add_edge(1, 2, Color::Red).unwrap();
        g.add_edge(2, 3, Color::Blue).unwrap();
        let psi = pec_walk(&g, 0).unwrap();
        assert_eq!(psi.extract_walk(&g, 3, Color::Blue).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn simple_graph_is_enforced() {
        let mut g = ColoredGraph::new(3);
        g.add_edge(0, 1, Color::Blue).unwrap();
        assert_eq!(g.add_edge(1, 0, Color::Red), Err(GraphError::DuplicateEdge(1, 0)));
        assert_eq!(g.add_edge(2, 2, Color::Red), Err(GraphError::SelfLoop(2)));
        assert_eq!(g.add_edge(0, 3, Color::Red), Err(GraphError::VertexOutOfRange(3)));
    }

    #[test]
    fn text_round_trip() {
        let g = walk_not_path_graph();
        let text = g.to_text();
        assert!(text.starts_with("v 5\ne 0 1 b\n"));
        assert_eq!(ColoredGraph::from_text(&text).unwrap(), {
            // adjacency order may differ; compare edge sets
            let h = ColoredGraph::from_text(&text).unwrap();
            assert_eq!(h.edges(), g.edges());
            h
        });
        assert!(ColoredGraph::from_text("e 0 1 b\n").is_err());
        assert!(ColoredGraph::from_text("v 2\ne 0 1 g\n").is_err());
    }

    #[test]
    fn connection_graph_of_split_example1() {
        let f = example1();
        let split = to_q3cnf(&f, &[Y1, Y3].into_iter().collect()).unwrap();
        let links: BTreeSet<Var> = [Y1, Y3].into_iter().collect();
        let g = build_connection_graph(&split.formula, &links).unwrap();
        assert_eq!(g.color(code(1), code(-1)), Some(Color::Red));
        assert_eq!(g.color(code(4), code(-4)), Some(Color::Red));
        assert_eq!(g.color(code(2), code(-2)), None);
        for (a, b) in [(-3, -2), (-3, -1), (-2, -1), (-1, -4), (-1, 4)] {
            assert_eq!(g.color(code(a), code(b)), Some(Color::Blue), "{a} {b}");
        }
        // C1 = (x1 x2 y2 y1) is split at its second literal
        assert_eq!(g.color(code(3), code(5)), Some(Color::Blue));
        assert_eq!(g.color(code(2), code(1)), Some(Color::Blue));
        assert_eq!(g.color(code(3), code(1)), None);
        assert!(build_connection_graph(&f, &links).is_err());
    }

    #[test]
    fn connection_graph_edge_cases() {
        let f = intro_formula();
        let g = build_connection_graph(&f, &BTreeSet::new()).unwrap();
        assert!(g.edges().iter().all(|e| e.2 == Color::Blue));
        assert_eq!(g.edge_count(), 2);

        let unit = qcnf(&[('e', &[1])], &[&[1]]);
        let g = build_connection_graph(&unit, &BTreeSet::new()).unwrap();
        assert_eq!(g.edge_count(), 0);

        assert_eq!(
            build_connection_graph(&f, &[Var::new(1)].into_iter().collect()),
            Err(GraphError::NotExistential(Var::new(1)))
        );
        assert_eq!(
            build_connection_graph(&f, &[Var::new(9)].into_iter().collect()),
            Err(GraphError::UnknownVariable(Var::new(9)))
        );
    }

    #[test]
    fn shared_literal_pairs_are_deduplicated() {
        let f = qcnf(&[('e', &[1, 2, 3])], &[&[1, 2], &[1, 2, 3]]);
        let g = build_connection_graph(&f, &BTreeSet::new()).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(code(1)).len(), 2);
    }

    #[test]
    fn incidence_graph_of_example1() {
        let f = example1();
        let g = build_incidence_graph(&f, &[Y1, Y3].into_iter().collect()).unwrap();
        let c1 = g.clause_vertex(0);
        let mut around_c1: Vec<usize> = g.neighbors(c1).to_vec();
        around_c1.sort();
        let mut expected: Vec<usize> = [3, 5, 2, 1].iter().map(|&v| code(v)).collect();
        expected.sort();
        assert_eq!(around_c1, expected);
        assert!(g.has_edge(code(1), code(-1)));
        assert!(!g.has_edge(code(2), code(-2)));
        assert_eq!(g.edge_count(), 11 + 2);

        let only_y1 = build_incidence_graph(&f, &[Y1].into_iter().collect()).unwrap();
        assert_eq!(only_y1.edge_count(), 11 + 1);

        let empty = qcnf(&[], &[]);
        let g = build_incidence_graph(&empty, &BTreeSet::new()).unwrap();
        assert_eq!(g.edge_count(), 0);
    }
}
