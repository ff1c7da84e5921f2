//! Generators and independent reference procedures shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use qdep::{Color, ColoredGraph, Formula, Lit, Quantifier, Var};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random simple graph on `n` vertices where each pair is an edge with
/// probability `density`, colored uniformly.
pub fn random_graph(rng: &mut StdRng, n: usize, density: f64) -> ColoredGraph {
    let mut g = ColoredGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                let c = if rng.random_bool(0.5) { Color::Blue } else { Color::Red };
                g.add_edge(u, v, c).unwrap();
            }
        }
    }
    g
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vars: u32,
    pub max_clauses: usize,
    pub max_width: usize,
}

/// A random normalized formula: every variable quantified in a shuffled
/// prefix with random quantifiers, clauses of random width over them.
pub fn random_formula(rng: &mut StdRng, shape: Shape) -> Formula {
    let (prefix, clauses) = random_raw(rng, shape);
    Formula::new(prefix, clauses)
}

pub fn random_raw(rng: &mut StdRng, shape: Shape) -> (Vec<(Var, Quantifier)>, Vec<Vec<Lit>>) {
    let n = rng.random_range(1..=shape.max_vars);
    let mut vars: Vec<Var> = (1..=n).map(Var::new).collect();
    for i in (1..vars.len()).rev() {
        let j = rng.random_range(0..=i);
        vars.swap(i, j);
    }
    let prefix = vars
        .iter()
        .map(|&v| {
            let q = if rng.random_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
            (v, q)
        })
        .collect();
    let m = rng.random_range(1..=shape.max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let w = rng.random_range(1..=shape.max_width);
            (0..w)
                .map(|_| Lit::new(Var::new(rng.random_range(1..=n)), rng.random_bool(0.5)))
                .collect()
        })
        .collect();
    (prefix, clauses)
}

/// All subsets of `items`.
pub fn subsets(items: &[Var]) -> impl Iterator<Item = BTreeSet<Var>> + '_ {
    (0u32..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// `ν` by universal expansion: each existential gets one propositional
/// copy per assignment of the universals to its left, each clause one
/// instance per universal assignment, and the result goes to [`dpll`].
/// Accepts raw clauses (duplicates, tautologies); every variable in the
/// clauses must be in `prefix`.
pub fn expansion_value(prefix: &[(Var, Quantifier)], clauses: &[Vec<Lit>]) -> bool {
    let universals: Vec<Var> = prefix
        .iter()
        .filter(|e| e.1 == Quantifier::Forall)
        .map(|e| e.0)
        .collect();
    assert!(universals.len() <= 12, "expansion too large");
    let max_var = prefix.iter().map(|e| e.0.id()).max().unwrap_or(0) as usize;
    let mut is_universal = vec![false; max_var + 1];
    let mut uni_index = vec![0usize; max_var + 1];
    for (i, u) in universals.iter().enumerate() {
        is_universal[u.index()] = true;
        uni_index[u.index()] = i;
    }
    // Universals left of each existential, as a bit mask over `universals`.
    let mut left_mask = vec![0u32; max_var + 1];
    let mut seen = 0u32;
    for &(v, q) in prefix {
        match q {
            Quantifier::Forall => seen |= 1 << uni_index[v.index()],
            Quantifier::Exists => left_mask[v.index()] = seen,
        }
    }
    let copies = 1usize << universals.len();
    let copy_var = |v: Var, alpha: u32| -> i32 {
        ((v.index() - 1) * copies + (alpha & left_mask[v.index()]) as usize + 1) as i32
    };
    let mut cnf: Vec<Vec<i32>> = Vec::new();
    for alpha in 0..copies as u32 {
        'clause: for clause in clauses {
            let mut out = Vec::new();
            for &l in clause {
                let v = l.var();
                if is_universal[v.index()] {
                    let value = alpha >> uni_index[v.index()] & 1 == 1;
                    if value == l.is_positive() {
                        continue 'clause;
                    }
                } else {
                    let c = copy_var(v, alpha);
                    out.push(if l.is_positive() { c } else { -c });
                }
            }
            cnf.push(out);
        }
    }
    dpll(cnf, max_var * copies)
}

/// A minimal DPLL: unit propagation and branching on the first
/// unassigned variable.
pub fn dpll(clauses: Vec<Vec<i32>>, num_vars: usize) -> bool {
    fn solve(clauses: &[Vec<i32>], assignment: &mut Vec<i8>) -> bool {
        let value = |a: &Vec<i8>, l: i32| -> i8 {
            let v = a[l.unsigned_abs() as usize];
            if l > 0 { v } else { -v }
        };
        let mut trail = Vec::new();
        loop {
            let mut unit = None;
            let mut all_sat = true;
            for c in clauses {
                let mut open = Vec::new();
                let mut sat = false;
                for &l in c {
                    match value(assignment, l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => open.push(l),
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                all_sat = false;
                match open.len() {
                    0 => {
                        for v in trail {
                            assignment[v] = 0;
                        }
                        return false;
                    }
                    1 => {
                        unit = Some(open[0]);
                        break;
                    }
                    _ => {}
                }
            }
            if all_sat {
                return true;
            }
            match unit {
                Some(l) => {
                    let v = l.unsigned_abs() as usize;
                    assignment[v] = if l > 0 { 1 } else { -1 };
                    trail.push(v);
                }
                None => break,
            }
        }
        let v = (1..assignment.len()).find(|&v| assignment[v] == 0).expect("open clause has a variable");
        for choice in [-1, 1] {
            assignment[v] = choice;
            if solve(clauses, assignment) {
                return true;
            }
        }
        assignment[v] = 0;
        for v in trail {
            assignment[v] = 0;
        }
        false
    }
    let mut assignment = vec![0i8; num_vars + 1];
    solve(&clauses, &mut assignment)
}

pub fn formula_value(f: &Formula) -> bool {
    let clauses: Vec<Vec<Lit>> = f.clauses().iter().map(|c| c.lits().to_vec()).collect();
    expansion_value(f.prefix().entries(), &clauses)
}

/// Whether some simple path from `s` to `t` alternates colors. Exhaustive
/// depth-first search; exponential, for tiny graphs only.
pub fn pec_simple_path_exists(g: &ColoredGraph, s: usize, t: usize) -> bool {
    fn go(g: &ColoredGraph, v: usize, t: usize, last: Option<Color>, visited: &mut Vec<bool>) -> bool {
        if v == t {
            return true;
        }
        for &(w, c) in g.neighbors(v) {
            let w = w as usize;
            if Some(c) == last || visited[w] {
                continue;
            }
            visited[w] = true;
            if go(g, w, t, Some(c), visited) {
                return true;
            }
            visited[w] = false;
        }
        false
    }
    let mut visited = vec![false; g.vertex_count()];
    visited[s] = true;
    s != t && go(g, s, t, None, &mut visited)
}
