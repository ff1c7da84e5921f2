//! Synthetic benchmark formulas.

use crate::formula::{Formula, Lit, Quantifier, Var};

/// Universal variables shared by both chains of [`chain_formula`].
pub const CHAIN_UNIVERSALS: u32 = 8;

/// A formula of roughly `size` literal occurrences whose dependencies
/// for its first variable `y` can only be found by walking two long chains.
///
/// Prefix `∃y ∀u1..u8 ∃p1..pk ∃q1..qk`. The chain from `y` runs through
/// `(y ∨ p1 ∨ …)`, `(¬p1 ∨ p2 ∨ …)`, … and the one from `¬y` through the
/// `q` clauses; every clause also carries two universal literals, so all
/// clauses have four literals and get split. Only the last clause of each
/// chain mentions `u8`, so deciding `(y, u8)` needs both full chains.
pub fn chain_formula(size: usize) -> Formula {
    let m = CHAIN_UNIVERSALS;
    let k = (size / 8).max(1) as u32;
    let y = Var::new(1);
    let u = |i: u32| Var::new(2 + i % (m - 1));
    let last_u = Var::new(1 + m);
    let p = |i: u32| Var::new(2 + m + i);
    let q = |i: u32| Var::new(2 + m + k + i);

    let mut prefix = vec![(y, Quantifier::Exists)];
    prefix.extend((2..=1 + m).map(|v| (Var::new(v), Quantifier::Forall)));
    prefix.extend((0..2 * k).map(|i| (Var::new(2 + m + i), Quantifier::Exists)));

    let mut clauses: Vec<Vec<Lit>> = Vec::with_capacity(2 * k as usize);
    for (start, link, sign) in [(y.positive(), &p as &dyn Fn(u32) -> Var, true), (y.negative(), &q, false)] {
        for i in 0..k {
            let head = if i == 0 { start } else { link(i - 1).negative() };
            let (a, b) = if i + 1 == k { (last_u, u(i)) } else { (u(i), u(i + 1)) };
            let a = if sign { a.positive() } else { a.negative() };
            let b = if sign { b.negative() } else { b.positive() };
            clauses.push(vec![head, link(i).positive(), a, b]);
        }
    }
    Formula::new(prefix, clauses)
}
