//! Python bindings. Variables and literals are QDIMACS integers; colors are
//! the strings `"red"` and `"blue"`.

use std::collections::BTreeSet;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qdep::resdep::FullOptions;
use qdep::{
    Color, DependencyRelation, EvalBudget, Lit, Quantifier, ResolutionPath, Var, WitnessPair,
};

type Step = (i64, usize, i64);
type Witness = (bool, Vec<Step>, Vec<Step>);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn budget_error(e: qdep::OracleError) -> PyErr {
    match e {
        qdep::OracleError::TooManyVariables { .. } | qdep::OracleError::TooManyReorderings { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => value_error(e),
    }
}

fn var(id: u32) -> PyResult<Var> {
    if id == 0 {
        return Err(PyValueError::new_err("variable ids start at 1"));
    }
    Ok(Var::new(id))
}

fn lit(value: i64) -> PyResult<Lit> {
    Lit::from_dimacs(value).ok_or_else(|| PyValueError::new_err(format!("invalid literal {value}")))
}

fn var_set(ids: Vec<u32>) -> PyResult<BTreeSet<Var>> {
    ids.into_iter().map(var).collect()
}

fn steps(p: &ResolutionPath) -> Vec<Step> {
    p.steps().iter().map(|s| (s.entry.to_dimacs(), s.clause, s.exit.to_dimacs())).collect()
}

fn witness(w: &WitnessPair) -> Witness {
    (w.crossed, steps(&w.from_positive), steps(&w.from_negative))
}

fn pairs(f: &qdep::Formula, r: &DependencyRelation) -> Vec<(u32, u32)> {
    r.sorted_pairs(f).into_iter().map(|(x, y)| (x.id(), y.id())).collect()
}

fn color(name: &str) -> PyResult<Color> {
    match name {
        "red" | "r" => Ok(Color::Red),
        "blue" | "b" => Ok(Color::Blue),
        _ => Err(PyValueError::new_err(format!("unknown color {name:?}"))),
    }
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Red => "red",
        Color::Blue => "blue",
    }
}

/// A normalized quantified CNF formula.
#[pyclass(frozen, module = "qdep")]
struct Formula {
    inner: qdep::Formula,
}

#[pymethods]
impl Formula {
    /// Builds a formula from `(var, "e" | "a")` pairs and integer clauses.
    /// Matrix variables missing from the prefix are bound existentially
    /// in an outermost block.
    #[new]
    fn new(prefix: Vec<(u32, String)>, clauses: Vec<Vec<i64>>) -> PyResult<Formula> {
        let prefix = prefix
            .into_iter()
            .map(|(v, q)| {
                let q = match q.as_str() {
                    "e" => Quantifier::Exists,
                    "a" => Quantifier::Forall,
                    _ => return Err(PyValueError::new_err(format!("quantifier must be 'e' or 'a', got {q:?}"))),
                };
                Ok((var(v)?, q))
            })
            .collect::<PyResult<_>>()?;
        let clauses = clauses
            .into_iter()
            .map(|c| c.into_iter().map(lit).collect())
            .collect::<PyResult<_>>()?;
        Ok(Formula { inner: qdep::Formula::new(prefix, clauses) })
    }

    #[staticmethod]
    fn from_qdimacs(text: &str) -> PyResult<Formula> {
        let parsed = qdep::parse_qdimacs(text).map_err(value_error)?;
        Ok(Formula { inner: parsed.formula })
    }

    fn to_qdimacs(&self) -> String {
        qdep::to_qdimacs(&self.inner)
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.num_vars()
    }

    /// Total number of literal occurrences.
    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn prefix(&self) -> Vec<(u32, &'static str)> {
        let symbol = |q| if q == Quantifier::Exists { "e" } else { "a" };
        self.inner.prefix().entries().iter().map(|&(v, q)| (v.id(), symbol(q))).collect()
    }

    #[getter]
    fn clauses(&self) -> Vec<Vec<i64>> {
        self.inner.clauses().iter().map(|c| c.iter().map(Lit::to_dimacs).collect()).collect()
    }

    fn formula_hash(&self) -> String {
        qdep::relation::formula_hash(&self.inner)
    }

    #[pyo3(signature = (max_vars = 20))]
    fn evaluate(&self, max_vars: usize) -> PyResult<bool> {
        let budget = EvalBudget { max_variables: max_vars, ..EvalBudget::default() };
        qdep::evaluate(&self.inner, &budget).map_err(budget_error)
    }

    /// Returns `(dependent, witness)` where `witness` is `None` or
    /// `(crossed, positive_path, negative_path)` with paths as lists of
    /// `(entry, clause_index, exit)`.
    #[pyo3(signature = (x, y, witness = false))]
    fn dres_contains(&self, x: u32, y: u32, witness: bool) -> PyResult<(bool, Option<Witness>)> {
        let (x, y) = (var(x)?, var(y)?);
        let r = if witness {
            qdep::dres_contains_with_witness(&self.inner, x, y)
        } else {
            qdep::dres_contains(&self.inner, x, y)
        }
        .map_err(value_error)?;
        Ok((r.dependent, r.witnesses.as_ref().map(self::witness)))
    }

    #[pyo3(signature = (jobs = 1))]
    fn dres_full(&self, py: Python<'_>, jobs: usize) -> Vec<(u32, u32)> {
        let f = &self.inner;
        let report = py.detach(|| qdep::dres_full_with(f, FullOptions { jobs, witnesses: false }));
        pairs(f, &report.relation)
    }

    fn dres_of_existential(&self, y: u32) -> PyResult<Vec<u32>> {
        let deps = qdep::dres_of_existential(&self.inner, var(y)?).map_err(value_error)?;
        Ok(deps.into_iter().map(Var::id).collect())
    }

    fn dtriv_full(&self) -> Vec<(u32, u32)> {
        pairs(&self.inner, &qdep::dtriv_full(&self.inner))
    }

    #[pyo3(signature = (max_vars = 20, max_reorderings = 1_000_000))]
    fn dmat_full(&self, max_vars: usize, max_reorderings: u64) -> PyResult<Vec<(u32, u32)>> {
        let budget = EvalBudget { max_variables: max_vars, max_reorderings };
        let rel = qdep::dmat_full(&self.inner, &budget).map_err(budget_error)?;
        Ok(pairs(&self.inner, &rel))
    }

    /// Whether literals `a` and `b` are resolution connected through the
    /// existential variables in `links`.
    fn resolution_connected(&self, links: Vec<u32>, a: i64, b: i64) -> PyResult<bool> {
        qdep::resolution_connected(&self.inner, &var_set(links)?, lit(a)?, lit(b)?).map_err(value_error)
    }

    /// The ternary form: `(formula, connecting_set, provenance)` where
    /// `provenance[i]` is the original clause of clause `i`.
    fn to_q3cnf(&self, links: Vec<u32>) -> PyResult<(Formula, Vec<u32>, Vec<usize>)> {
        let t = qdep::to_q3cnf(&self.inner, &var_set(links)?).map_err(value_error)?;
        let set = t.connection_set.iter().map(|v| v.id()).collect();
        Ok((Formula { inner: t.formula }, set, t.provenance))
    }

    fn __repr__(&self) -> String {
        format!(
            "Formula(num_vars={}, clauses={}, size={})",
            self.inner.num_vars(),
            self.inner.clauses().len(),
            self.inner.size()
        )
    }
}

/// An undirected graph with red and blue edges.
#[pyclass(module = "qdep")]
struct ColoredGraph {
    inner: qdep::ColoredGraph,
}

#[pymethods]
impl ColoredGraph {
    #[new]
    fn new(vertices: usize) -> ColoredGraph {
        ColoredGraph { inner: qdep::ColoredGraph::new(vertices) }
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<ColoredGraph> {
        Ok(ColoredGraph { inner: qdep::ColoredGraph::from_text(text).map_err(value_error)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn add_edge(&mut self, u: usize, v: usize, color: &str) -> PyResult<()> {
        self.inner.add_edge(u, v, self::color(color)?).map_err(value_error)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// For every vertex, the colors of last edges of properly edge-colored
    /// walks from `source` that start with a blue edge.
    fn pec_walk(&self, source: usize) -> PyResult<Vec<Vec<&'static str>>> {
        let psi = qdep::pec_walk(&self.inner, source).map_err(value_error)?;
        Ok((0..self.inner.vertex_count())
            .map(|v| psi.colors(v).into_iter().map(color_name).collect())
            .collect())
    }

    /// A walk from `source` to `target` ending in `color`, as a vertex list.
    fn extract_walk(&self, source: usize, target: usize, color: &str) -> PyResult<Vec<usize>> {
        let psi = qdep::pec_walk(&self.inner, source).map_err(value_error)?;
        psi.extract_walk(&self.inner, target, self::color(color)?).map_err(value_error)
    }

    /// The same labels as [`pec_walk`](Self::pec_walk) from a slow fixpoint.
    fn pec_reachable_oracle(&self, source: usize) -> PyResult<Vec<Vec<&'static str>>> {
        if source >= self.inner.vertex_count() {
            return Err(PyValueError::new_err(format!("vertex {source} out of range")));
        }
        Ok(qdep::pec_reachable_oracle(&self.inner, source)
            .into_iter()
            .map(|set| set.into_iter().map(color_name).collect())
            .collect())
    }
}

/// The chain benchmark formula with about `size` literal occurrences.
#[pyfunction]
fn chain_formula(size: usize) -> Formula {
    Formula { inner: qdep::generate::chain_formula(size) }
}

#[pymodule]
#[pyo3(name = "qdep")]
fn qdep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<ColoredGraph>()?;
    m.add_function(wrap_pyfunction!(chain_formula, m)?)?;
    Ok(())
}
