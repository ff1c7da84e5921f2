//! Resolution-path variable dependencies for quantified CNF formulas.
//!
//! The crate parses QDIMACS ([`qdimacs`]), represents formulas and their
//! prefixes ([`formula`]), and decides whether a variable pair belongs to
//! the resolution-path dependency scheme in time linear in the formula
//! size ([`resdep`]). The decision reduces to reachability by properly
//! edge-colored walks in a two-colored literal graph ([`pec`]) built from
//! a ternary version of the formula ([`split`]). The [`oracle`] module
//! holds slow reference implementations used to validate all of this.
//!
//! ```
//! use qdep::{parse_qdimacs, dres_contains, Var};
//!
//! let text = "p cnf 2 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 0\n";
//! let f = parse_qdimacs(text).unwrap().formula;
//! assert!(dres_contains(&f, Var::new(1), Var::new(2)).unwrap().dependent);
//! ```

pub mod fixtures;
pub mod formula;
pub mod generate;
pub mod oracle;
pub mod path;
pub mod pec;
pub mod qdimacs;
pub mod relation;
pub mod resdep;
pub mod split;

pub use formula::{
    normalize, Assignment, Block, Clause, Diagnostics, Formula, FormulaError, Lit, Prefix,
    Quantifier, RawFormula, Var,
};
pub use oracle::{
    check_cumulative_shift, check_transposition_soundness, connected_literals, dmat_contains, dmat_full,
    enumerate_resolution_paths, evaluate, pec_reachable_oracle, shortest_resolution_path,
    EvalBudget, OracleError,
};
pub use path::{PathError, PathStep, ResolutionPath};
pub use pec::{
    build_connection_graph, build_incidence_graph, check_pec_walk, pec_walk, Color,
    ColorLabeling, ColoredGraph, GraphError, IncidenceGraph,
};
pub use qdimacs::{parse_qdimacs, to_qdimacs, ParseError, Parsed};
pub use relation::{closure, prefix_relation, DependencyRelation, RelationDocument, Scheme};
pub use resdep::{
    dres_contains, dres_contains_with_witness, dres_full, dres_full_with, dres_of_existential,
    dtriv_full, existential_report, full_report, is_dependency_pair, resolution_connected,
    resolution_path, Connector, DependencyQueryResult, ResdepError, WitnessPair,
};
pub use split::{to_q3cnf, SplitError, TransformResult};
