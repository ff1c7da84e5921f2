mod common;

use std::collections::BTreeSet;

use proptest::collection::vec;
use proptest::prelude::*;
use qdep::oracle::{evaluate_by_table, connected_literals};
use qdep::pec::{pec_walk_with, QueueDiscipline};
use qdep::relation::prefix_relation;
use qdep::*;

fn formula_parts(
    max_vars: u32,
    max_clauses: usize,
    max_width: usize,
) -> impl Strategy<Value = (Vec<(Var, Quantifier)>, Vec<Vec<Lit>>)> {
    (1..=max_vars).prop_flat_map(move |n| {
        let order = Just((1..=n).collect::<Vec<u32>>()).prop_shuffle();
        let quantifiers = vec(any::<bool>(), n as usize);
        let lit = (1..=n, any::<bool>()).prop_map(|(v, s)| Lit::new(Var::new(v), s));
        let clauses = vec(vec(lit, 0..=max_width), 0..=max_clauses);
        (order, quantifiers, clauses).prop_map(|(order, qs, clauses)| {
            let prefix = order
                .into_iter()
                .zip(qs)
                .map(|(v, e)| (Var::new(v), if e { Quantifier::Exists } else { Quantifier::Forall }))
                .collect();
            (prefix, clauses)
        })
    })
}

fn formula(max_vars: u32, max_clauses: usize, max_width: usize) -> impl Strategy<Value = Formula> {
    formula_parts(max_vars, max_clauses, max_width).prop_map(|(p, c)| Formula::new(p, c))
}

fn graph(max_vertices: usize) -> impl Strategy<Value = (ColoredGraph, usize)> {
    (1..=max_vertices).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (vec(0u8..3, pairs), 0..n).prop_map(move |(codes, s)| {
            let mut g = ColoredGraph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match codes[k] {
                        1 => g.add_edge(u, v, Color::Red).unwrap(),
                        2 => g.add_edge(u, v, Color::Blue).unwrap(),
                        _ => {}
                    }
                    k += 1;
                }
            }
            (g, s)
        })
    })
}

fn subset_of(vars: Vec<Var>) -> impl Strategy<Value = BTreeSet<Var>> {
    let n = vars.len();
    vec(any::<bool>(), n).prop_map(move |bits| {
        vars.iter().zip(bits).filter(|(_, b)| *b).map(|(&v, _)| v).collect()
    })
}

fn budget() -> EvalBudget {
    EvalBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn qdimacs_round_trip(f in formula(8, 8, 5)) {
        let text = to_qdimacs(&f);
        let again = parse_qdimacs(&text).unwrap();
        prop_assert_eq!(&again.formula, &f);
        prop_assert_eq!(to_qdimacs(&again.formula), text);
    }

    #[test]
    fn restrictions_compose(f in formula(8, 8, 4), bits in vec(0u8..3, 8)) {
        let mut a = Assignment::new();
        let mut b = Assignment::new();
        for (v, code) in f.vars().zip(bits) {
            match code {
                1 => a.insert(v, v.id() % 2 == 0),
                2 => b.insert(v, v.id() % 3 == 0),
                _ => {}
            }
        }
        let stepwise = f.restrict(&a).unwrap().restrict(&b).unwrap();
        prop_assert_eq!(stepwise, f.restrict(&a.union(&b)).unwrap());
    }

    #[test]
    fn shift_down_is_idempotent(f in formula(8, 4, 3), bits in vec(any::<bool>(), 8)) {
        let set: BTreeSet<Var> = f.vars().zip(bits).filter(|(_, b)| *b).map(|(v, _)| v).collect();
        let once = f.shift_down(&set).unwrap();
        prop_assert_eq!(once.shift_down(&set).unwrap(), once.clone());
        let k = set.len();
        let tail: BTreeSet<Var> = once.vars().skip(f.prefix().len() - k).collect();
        prop_assert_eq!(tail, set);
    }

    #[test]
    fn right_of_counts(f in formula(8, 3, 3)) {
        for x in f.vars() {
            prop_assert_eq!(f.right_of(x).unwrap().len(), f.prefix().len() - f.depth(x).unwrap());
        }
    }

    #[test]
    fn closure_is_monotone_fixpoint(
        pairs in vec((1u32..8, 1u32..8), 0..12),
        a in vec(1u32..8, 0..4),
        b in vec(1u32..8, 0..4),
    ) {
        let rel: DependencyRelation = pairs.iter().map(|&(x, y)| (Var::new(x), Var::new(y))).collect();
        let small: BTreeSet<Var> = a.iter().map(|&v| Var::new(v)).collect();
        let big: BTreeSet<Var> = small.iter().copied().chain(b.iter().map(|&v| Var::new(v))).collect();
        let c = closure(&rel, &small);
        prop_assert!(c.is_subset(&closure(&rel, &big)));
        prop_assert_eq!(closure(&rel, &c), c.clone());
        let fewer: DependencyRelation = pairs.iter().skip(1).map(|&(x, y)| (Var::new(x), Var::new(y))).collect();
        prop_assert!(closure(&fewer, &small).is_subset(&c));
    }

    #[test]
    fn normalization_preserves_value((prefix, clauses) in formula_parts(8, 8, 4)) {
        let f = Formula::new(prefix.clone(), clauses.clone());
        prop_assert_eq!(evaluate(&f, &budget()).unwrap(), common::expansion_value(&prefix, &clauses));
    }

    #[test]
    fn free_variable_is_bound_outermost((prefix, clauses) in formula_parts(3, 4, 3)) {
        // Drop the innermost quantification; normalization must match the
        // explicit outermost existential binding.
        let (dropped, _) = *prefix.last().unwrap();
        let raw = RawFormula { num_vars: 0, prefix: prefix[..prefix.len() - 1].to_vec(), clauses: clauses.clone() };
        let (f, diag) = normalize(&raw);
        let mut explicit = vec![(dropped, Quantifier::Exists)];
        explicit.extend_from_slice(&prefix[..prefix.len() - 1]);
        if f.occurs(dropped) {
            prop_assert_eq!(diag.free.clone(), vec![dropped]);
            prop_assert_eq!(evaluate(&f, &budget()).unwrap(), common::expansion_value(&explicit, &clauses));
        }
    }

    #[test]
    fn evaluators_agree(f in formula(8, 8, 4)) {
        let v = evaluate(&f, &budget()).unwrap();
        prop_assert_eq!(v, evaluate_by_table(&f, &budget()).unwrap());
        prop_assert_eq!(v, common::formula_value(&f));
    }

    #[test]
    fn pec_walk_matches_oracle((g, s) in graph(12)) {
        let psi = pec_walk(&g, s).unwrap();
        let lifo = pec_walk_with(&g, s, QueueDiscipline::Lifo).unwrap();
        let oracle = pec_reachable_oracle(&g, s);
        for (v, expected) in oracle.iter().enumerate() {
            let colors: BTreeSet<Color> = psi.colors(v).into_iter().collect();
            prop_assert_eq!(&colors, expected);
            prop_assert_eq!(psi.colors(v), lifo.colors(v));
            for c in psi.colors(v) {
                let walk = psi.extract_walk(&g, v, c).unwrap();
                let colors = check_pec_walk(&g, &walk).unwrap();
                prop_assert_eq!(walk[0], s);
                prop_assert_eq!(colors[0], Color::Blue);
                prop_assert_eq!(*colors.last().unwrap(), c);
                prop_assert!(walk.len() <= 2 * g.vertex_count() + 1);
            }
        }
        prop_assert!(psi.queue_pushes() <= 2 * g.edge_count());
        prop_assert!(lifo.queue_pushes() <= 2 * g.edge_count());
    }

    #[test]
    fn split_bounds(f in formula(6, 6, 7)) {
        let r = to_q3cnf(&f, &BTreeSet::new()).unwrap();
        prop_assert!(r.formula.clauses().iter().all(|c| c.len() <= 3));
        prop_assert!(r.formula.size() <= 3 * f.size());
        let expected: usize = f.clauses().iter().map(|c| c.len().saturating_sub(3)).sum();
        prop_assert_eq!(r.fresh_variables.len(), expected);
        prop_assert_eq!(r.provenance.len(), r.formula.clauses().len());
        for (i, &j) in r.provenance.iter().enumerate() {
            for l in r.formula.clause(i).iter().filter(|l| !r.is_fresh(l.var())) {
                prop_assert!(f.clause(j).contains(l));
            }
        }
    }

    #[test]
    fn connectedness_symmetric_and_monotone(
        (f, small, extra) in formula(6, 6, 5).prop_flat_map(|f| {
            let ex: Vec<Var> = f.existentials().collect();
            (Just(f), subset_of(ex.clone()), subset_of(ex))
        })
    ) {
        let big: BTreeSet<Var> = small.union(&extra).copied().collect();
        let lits = f.literals();
        let c = Connector::new(&f);
        for &a in &lits {
            for &b in &lits {
                if a == b { continue; }
                let ab = c.connected(&small, a, b).unwrap();
                prop_assert_eq!(ab, c.connected(&small, b, a).unwrap());
                if ab {
                    prop_assert!(c.connected(&big, a, b).unwrap());
                    let p = c.connecting_path(&small, a, b).unwrap().unwrap();
                    prop_assert_eq!(p.validate(&f, &small), Ok(()));
                    prop_assert_eq!((p.start(), p.end()), (Some(a), Some(b)));
                }
            }
        }
    }

    #[test]
    fn split_preserves_connectedness(
        (f, links) in formula(6, 6, 6).prop_flat_map(|f| {
            let ex: Vec<Var> = f.existentials().collect();
            (Just(f), subset_of(ex))
        })
    ) {
        let r = to_q3cnf(&f, &links).unwrap();
        for a in f.literals() {
            let before = connected_literals(&f, &links, a);
            let after: BTreeSet<Lit> = connected_literals(&r.formula, &r.connection_set, a)
                .into_iter()
                .filter(|l| !r.is_fresh(l.var()))
                .collect();
            prop_assert_eq!(&before, &after);
            for &b in &after {
                let p = shortest_resolution_path(&r.formula, &r.connection_set, a, b).unwrap();
                let back = r.map_path_back(&f, &p).unwrap();
                prop_assert_eq!((back.start(), back.end()), (Some(a), Some(b)));
            }
        }
    }

    #[test]
    fn existential_sets_match_pairwise(f in formula(7, 7, 4)) {
        for y in f.existentials() {
            let set = dres_of_existential(&f, y).unwrap();
            for x in f.universals() {
                let pairwise = f.depth(y).unwrap() < f.depth(x).unwrap() && dres_contains(&f, y, x).unwrap().dependent;
                prop_assert_eq!(set.contains(&x), pairwise);
            }
        }
    }

    #[test]
    fn full_relation_is_stable(f in formula(7, 7, 4)) {
        let serial = dres_full(&f);
        let parallel = dres_full_with(&f, qdep::resdep::FullOptions { jobs: 3, witnesses: false });
        prop_assert_eq!(&serial, &parallel.relation);
        prop_assert!(serial.is_subset(&dtriv_full(&f)));
        prop_assert!(dtriv_full(&f).is_subset(&prefix_relation(&f)));
        prop_assert!(serial.respects_prefix_order(&f));
        for (x, y) in serial.iter() {
            prop_assert!(f.occurs(x) && f.occurs(y));
        }
    }
}
