//! Small hand-written formulas and graphs used throughout the tests, the
//! command-line examples and the Python bindings.

use crate::formula::{Formula, Lit, Quantifier, Var};
use crate::pec::{Color, ColoredGraph};

/// Builds a formula from `(quantifier, vars)` lines (`'a'` or `'e'`) and
/// clauses given as signed QDIMACS integers.
pub fn qcnf(prefix: &[(char, &[u32])], clauses: &[&[i64]]) -> Formula {
    let prefix = prefix
        .iter()
        .flat_map(|&(q, vars)| {
            let q = match q {
                'a' => Quantifier::Forall,
                'e' => Quantifier::Exists,
                other => panic!("unknown quantifier {other:?}"),
            };
            vars.iter().map(move |&v| (Var::new(v), q))
        })
        .collect();
    let clauses = clauses.iter().map(|c| lits(c)).collect();
    Formula::new(prefix, clauses)
}

pub fn lits(values: &[i64]) -> Vec<Lit> {
    values
        .iter()
        .map(|&v| Lit::from_dimacs(v).expect("non-zero literal"))
        .collect()
}

pub fn lit(value: i64) -> Lit {
    Lit::from_dimacs(value).expect("non-zero literal")
}

// Variables of `example1`.
pub const Y1: Var = Var::new(1);
pub const Y2: Var = Var::new(2);
pub const X1: Var = Var::new(3);
pub const Y3: Var = Var::new(4);
pub const X2: Var = Var::new(5);

/// `∃y1 ∃y2 ∀x1 ∃y3 ∀x2 (x1 ∨ x2 ∨ y2 ∨ y1)(¬x1 ∨ ¬y2 ∨ ¬y1)(¬y1 ∨ ¬y3)(¬y1 ∨ y3)`
/// with y1..x2 numbered 1..5 in prefix order.
pub fn example1() -> Formula {
    qcnf(
        &[('e', &[1, 2]), ('a', &[3]), ('e', &[4]), ('a', &[5])],
        &[&[3, 5, 2, 1], &[-3, -2, -1], &[-1, -4], &[-1, 4]],
    )
}

pub const EXAMPLE1_QDIMACS: &str = "c y1=1 y2=2 x1=3 y3=4 x2=5
p cnf 5 4
e 1 2 0
a 3 0
e 4 0
a 5 0
3 5 2 1 0
-3 -2 -1 0
-1 -4 0
-1 4 0
";

// Variables of `example2`.
pub const U: Var = Var::new(1);
pub const E: Var = Var::new(2);
pub const V: Var = Var::new(3);
pub const X: Var = Var::new(4);
pub const Y: Var = Var::new(5);
pub const Z: Var = Var::new(6);

/// `∀u ∃e ∃v ∀x ∃y ∃z (u ∨ y)(¬y ∨ ¬x ∨ v)(¬v ∨ x ∨ z)(¬z ∨ e)(¬u ∨ ¬e)`,
/// a formula where `e` depends on `u` only through clauses whose pairwise
/// resolvents are tautological.
pub fn example2() -> Formula {
    qcnf(
        &[('a', &[1]), ('e', &[2, 3]), ('a', &[4]), ('e', &[5, 6])],
        &[&[1, 5], &[-5, -4, 3], &[-3, 4, 6], &[-6, 2], &[-1, -2]],
    )
}

pub const EXAMPLE2_QDIMACS: &str = "c u=1 e=2 v=3 x=4 y=5 z=6
p cnf 6 5
a 1 0
e 2 3 0
a 4 0
e 5 6 0
1 5 0
-5 -4 3 0
-3 4 6 0
-6 2 0
-1 -2 0
";

/// `∀x ∃y (x ∨ ¬y)(¬x ∨ y)`: `y` must copy `x`.
pub fn intro_formula() -> Formula {
    qcnf(&[('a', &[1]), ('e', &[2])], &[&[1, -2], &[-1, 2]])
}

/// `∀x1 ∀x2 ∃y (x1)(¬x2 ∨ y)(x2 ∨ ¬y)`: unsatisfiable under every order,
/// yet `(x2, y)` is a resolution-path dependency.
pub fn strict_containment_formula() -> Formula {
    qcnf(&[('a', &[1, 2]), ('e', &[3])], &[&[1], &[-2, 3], &[2, -3]])
}

/// Vertex names of [`walk_not_path_graph`].
pub const S: usize = 0;
pub const GU: usize = 1;
pub const GV: usize = 2;
pub const GW: usize = 3;
pub const T: usize = 4;

/// Five vertices s,u,v,w,t; blue su, ut, vw; red uv, uw. The walk
/// s,u,v,w,u,t alternates colors but no alternating simple path reaches t.
pub fn walk_not_path_graph() -> ColoredGraph {
    let mut g = ColoredGraph::new(5);
    g.add_edge(S, GU, Color::Blue).unwrap();
    g.add_edge(GU, T, Color::Blue).unwrap();
    g.add_edge(GV, GW, Color::Blue).unwrap();
    g.add_edge(GU, GV, Color::Red).unwrap();
    g.add_edge(GU, GW, Color::Red).unwrap();
    g
}
