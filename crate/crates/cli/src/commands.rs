use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::time::Instant;

use qdep::generate::chain_formula;
use qdep::oracle::evaluate_by_table;
use qdep::relation::{formula_hash, var_label};
use qdep::resdep::{dres_query, FullOptions};
use qdep::{
    check_cumulative_shift, check_transposition_soundness, dmat_full, dtriv_full, evaluate,
    existential_report, full_report, pec_reachable_oracle, pec_walk, to_qdimacs, Color, Connector,
    DependencyRelation, EvalBudget, Formula, OracleError, Parsed, Quantifier, RelationDocument,
    ResdepError, Scheme, Var, WitnessPair,
};
use serde::Serialize;

use crate::report::RunReport;
use crate::{BenchArgs, CheckArgs, DepsArgs, EvalArgs, Failure, Format, QueryArgs, SchemeArg};

fn load(path: &Path, run: &mut RunReport) -> Result<Parsed, Failure> {
    let start = Instant::now();
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = qdep::parse_qdimacs(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    run.timings.parse = Some(start.elapsed().as_secs_f64());
    run.input_digest = Some(formula_hash(&parsed.formula));
    Ok(parsed)
}

fn known(f: &Formula, id: u32) -> Result<Var, Failure> {
    let v = Var::new(id);
    if f.prefix().contains(v) {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("variable {v} is not quantified in the formula")))
    }
}

fn connector<'f>(f: &'f Formula, run: &mut RunReport) -> Connector<'f> {
    let start = Instant::now();
    let c = Connector::new(f);
    run.timings.transform = Some(start.elapsed().as_secs_f64());
    c
}

fn resdep_failure(e: ResdepError) -> Failure {
    match e {
        ResdepError::Witness(_) => Failure::Input(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::TooManyVariables { .. } | OracleError::TooManyReorderings { .. } => {
            Failure::Budget(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("document serializes") + "\n"
}

#[derive(Serialize)]
struct WitnessEntry<'a> {
    pair: [u32; 2],
    #[serde(flatten)]
    witness: &'a WitnessPair,
}

#[derive(Serialize)]
struct DepsDocument<'a> {
    #[serde(flatten)]
    relation: RelationDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    var: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<WitnessEntry<'a>>>,
}

pub fn deps(a: &DepsArgs, run: &mut RunReport) -> Result<u8, Failure> {
    if a.witness && a.scheme == SchemeArg::Triv {
        return Err(Failure::Usage("--witness requires --scheme res".into()));
    }
    let parsed = load(&a.file, run)?;
    let f = &parsed.formula;
    let var = a.var.map(|id| known(f, id)).transpose()?;
    let mut witnesses = BTreeMap::new();
    let (scheme, relation) = match a.scheme {
        SchemeArg::Triv => {
            let all = dtriv_full(f);
            let relation = match var {
                Some(v) => all.iter().filter(|&(x, _)| x == v).collect(),
                None => all,
            };
            (Scheme::Triv, relation)
        }
        SchemeArg::Res => {
            let c = connector(f, run);
            let mut relation = DependencyRelation::new();
            match var {
                None => {
                    let options = FullOptions { jobs: a.jobs as usize, witnesses: a.witness };
                    let r = full_report(&c, options);
                    run.walks(&r.stats);
                    relation = r.relation;
                    witnesses = r.witnesses;
                }
                Some(y) if f.is_existential(y) => {
                    let r = existential_report(&c, y, a.witness).map_err(resdep_failure)?;
                    run.walks(&r.stats);
                    relation.extend(r.dependents.iter().map(|&u| (y, u)));
                    witnesses.extend(r.witnesses.into_iter().map(|(u, w)| ((y, u), w)));
                }
                Some(x) => {
                    let later = f.right_of(x).expect("known variable");
                    for y in later.into_iter().filter(|&y| f.is_existential(y)) {
                        let (r, stats) = dres_query(&c, x, y, false).map_err(resdep_failure)?;
                        run.walks(&stats);
                        if r.dependent {
                            relation.insert(x, y);
                        }
                    }
                }
            }
            (Scheme::Res, relation)
        }
    };
    run.counts.pairs = relation.len();
    let pairs = relation.sorted_pairs(f);
    let out = match a.format {
        Format::Text => {
            let mut out = String::new();
            for &(x, y) in &pairs {
                writeln!(out, "{} {}", var_label(f, x, a.verbose), var_label(f, y, a.verbose)).unwrap();
                if let Some(w) = witnesses.get(&(x, y)) {
                    writeln!(out, "  path {}", w.from_positive).unwrap();
                    writeln!(out, "  path {}", w.from_negative).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let entries = a.witness.then(|| {
                pairs
                    .iter()
                    .filter_map(|&(x, y)| {
                        let witness = witnesses.get(&(x, y))?;
                        Some(WitnessEntry { pair: [x.id(), y.id()], witness })
                    })
                    .collect()
            });
            json(&DepsDocument {
                relation: RelationDocument::new(scheme, f, &relation, &parsed.diagnostics),
                var: a.var,
                witnesses: entries,
            })
        }
    };
    print!("{out}");
    Ok(0)
}

#[derive(Serialize)]
struct QueryDocument<'a> {
    formula_hash: String,
    x: u32,
    y: u32,
    dependent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<&'a WitnessPair>,
}

pub fn query(a: &QueryArgs, run: &mut RunReport) -> Result<u8, Failure> {
    if a.x == a.y {
        return Err(Failure::Usage(format!("x and y are both variable {}", a.x)));
    }
    let parsed = load(&a.file, run)?;
    let f = &parsed.formula;
    let (x, y) = (known(f, a.x)?, known(f, a.y)?);
    let c = connector(f, run);
    let (r, stats) = dres_query(&c, x, y, a.witness).map_err(resdep_failure)?;
    run.walks(&stats);
    run.counts.pairs = r.dependent as usize;
    let out = match a.format {
        Format::Text => {
            let mut out = String::from(if r.dependent { "dependent\n" } else { "independent\n" });
            if let Some(w) = &r.witnesses {
                writeln!(out, "path {}", w.from_positive).unwrap();
                writeln!(out, "path {}", w.from_negative).unwrap();
            }
            out
        }
        Format::Json => json(&QueryDocument {
            formula_hash: formula_hash(f),
            x: a.x,
            y: a.y,
            dependent: r.dependent,
            witnesses: r.witnesses.as_ref(),
        }),
    };
    print!("{out}");
    Ok(if r.dependent { 0 } else { 1 })
}

fn verdict(value: bool) -> &'static str {
    if value {
        "SAT"
    } else {
        "UNSAT"
    }
}

#[derive(Serialize)]
struct EvalDocument {
    formula_hash: String,
    value: bool,
    result: &'static str,
}

pub fn eval(a: &EvalArgs, run: &mut RunReport) -> Result<u8, Failure> {
    let parsed = load(&a.file, run)?;
    let budget = EvalBudget { max_variables: a.max_vars, ..EvalBudget::default() };
    let value = evaluate(&parsed.formula, &budget).map_err(oracle_failure)?;
    let out = match a.format {
        Format::Text => format!("{}\n", verdict(value)),
        Format::Json => json(&EvalDocument {
            formula_hash: formula_hash(&parsed.formula),
            value,
            result: verdict(value),
        }),
    };
    print!("{out}");
    Ok(0)
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct CheckDocument {
    formula_hash: String,
    passed: bool,
    checks: Vec<CheckResult>,
}

fn pair_list(pairs: impl Iterator<Item = (Var, Var)>) -> String {
    pairs.map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join(" ")
}

fn set_list(set: &BTreeSet<Var>) -> String {
    let vars: Vec<String> = set.iter().map(Var::to_string).collect();
    format!("{{{}}}", vars.join(","))
}

/// Connecting set of the pair `(x, y)`: existentials right of `x`, minus `y`.
fn pair_links(f: &Formula, x: Var, y: Var) -> BTreeSet<Var> {
    let right = f.right_of(x).expect("prefix variable");
    right.into_iter().filter(|&z| z != y && f.is_existential(z)).collect()
}

pub fn check(a: &CheckArgs, run: &mut RunReport) -> Result<u8, Failure> {
    let parsed = load(&a.file, run)?;
    let f = &parsed.formula;
    let budget = EvalBudget { max_variables: a.max_vars, max_reorderings: a.max_reorderings };
    let mut checks = Vec::new();

    let value = evaluate(f, &budget).map_err(oracle_failure)?;
    let table = evaluate_by_table(f, &budget).map_err(oracle_failure)?;
    checks.push(CheckResult {
        name: "evaluators",
        passed: value == table,
        detail: format!("recursive {}, truth table {}", verdict(value), verdict(table)),
    });

    let mat = dmat_full(f, &budget).map_err(oracle_failure)?;
    let c = connector(f, run);
    let full = full_report(&c, FullOptions { jobs: 1, witnesses: true });
    run.walks(&full.stats);
    let res = &full.relation;
    run.counts.pairs = res.len();
    let missing: Vec<(Var, Var)> = mat.difference(res).collect();
    let gap: Vec<(Var, Var)> = res.difference(&mat).collect();
    checks.push(CheckResult {
        name: "dmat-in-dres",
        passed: missing.is_empty(),
        detail: if missing.is_empty() {
            format!(
                "|D^mat| = {}, |D^res| = {}; strict pairs: {}",
                mat.len(),
                res.len(),
                if gap.is_empty() { "none".to_string() } else { pair_list(gap.into_iter()) }
            )
        } else {
            format!("in D^mat but not D^res: {}", pair_list(missing.into_iter()))
        },
    });

    let triv = dtriv_full(f);
    let outside: Vec<(Var, Var)> = res.difference(&triv).collect();
    checks.push(CheckResult {
        name: "dres-in-dtriv",
        passed: outside.is_empty(),
        detail: if outside.is_empty() {
            format!("|D^res| = {}, |D^triv| = {}", res.len(), triv.len())
        } else {
            format!("in D^res but not D^triv: {}", pair_list(outside.into_iter()))
        },
    });

    let violation = check_transposition_soundness(f, res, &budget).map_err(oracle_failure)?;
    checks.push(CheckResult {
        name: "transposition",
        passed: violation.is_none(),
        detail: match violation {
            None => format!("{} adjacent pairs", f.prefix().len().saturating_sub(1)),
            Some(v) => format!(
                "swapping {} and {} at depth {} changes {} to {}",
                v.x,
                v.y,
                v.depth,
                verdict(v.before),
                verdict(v.after)
            ),
        },
    });

    let mut sets: Vec<BTreeSet<Var>> = vec![BTreeSet::new(), f.vars().collect()];
    sets.extend(f.vars().map(|v| BTreeSet::from([v])));
    let mut failed_set = None;
    for set in &sets {
        if !check_cumulative_shift(f, res, set, &budget).map_err(oracle_failure)? {
            failed_set = Some(set);
            break;
        }
    }
    checks.push(CheckResult {
        name: "cumulative-shift",
        passed: failed_set.is_none(),
        detail: match failed_set {
            None => format!("{} sets", sets.len()),
            Some(set) => format!("shifting the closure of {} changes the value", set_list(set)),
        },
    });

    let mut link_sets: BTreeSet<BTreeSet<Var>> = BTreeSet::from([f.existentials().collect()]);
    link_sets.extend(f.existentials().map(|y| pair_links(f, y, y)));
    let mut pec_failure = None;
    let mut walks = 0;
    'graphs: for links in &link_sets {
        let graph = c.graph(links).map_err(resdep_failure)?;
        for s in 0..graph.vertex_count() {
            let psi = pec_walk(&graph, s).expect("vertex in range");
            let oracle = pec_reachable_oracle(&graph, s);
            walks += 1;
            for (v, expected) in oracle.iter().enumerate() {
                let got: BTreeSet<Color> = psi.colors(v).into_iter().collect();
                if &got != expected {
                    pec_failure = Some(format!(
                        "X = {}, source {s}, vertex {v}: walk {got:?}, oracle {expected:?}",
                        set_list(links)
                    ));
                    break 'graphs;
                }
            }
        }
    }
    checks.push(CheckResult {
        name: "pec-oracle",
        passed: pec_failure.is_none(),
        detail: pec_failure.unwrap_or_else(|| format!("{} graphs, {walks} sources", link_sets.len())),
    });

    let mut bad_witness = None;
    for (&(x, y), w) in &full.witnesses {
        let links = pair_links(f, x, y);
        let (to_pos, to_neg) = if w.crossed { (y.negative(), y.positive()) } else { (y.positive(), y.negative()) };
        let ends_ok = w.from_positive.start() == Some(x.positive())
            && w.from_positive.end() == Some(to_pos)
            && w.from_negative.start() == Some(x.negative())
            && w.from_negative.end() == Some(to_neg);
        let valid = w.from_positive.validate(f, &links).and(w.from_negative.validate(f, &links));
        if !ends_ok || valid.is_err() {
            bad_witness = Some(format!("pair ({x},{y}): {} / {}", w.from_positive, w.from_negative));
            break;
        }
    }
    checks.push(CheckResult {
        name: "witnesses",
        passed: bad_witness.is_none(),
        detail: bad_witness.unwrap_or_else(|| format!("{} witness pairs", full.witnesses.len())),
    });

    let passed = checks.iter().all(|c| c.passed);
    let out = match a.format {
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                writeln!(out, "all {} checks passed", checks.len()).unwrap();
            } else {
                writeln!(out, "{failed} of {} checks failed", checks.len()).unwrap();
            }
            out
        }
        Format::Json => json(&CheckDocument { formula_hash: formula_hash(f), passed, checks }),
    };
    print!("{out}");
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct BenchRow {
    size: usize,
    clauses: usize,
    bytes: usize,
    dependents: usize,
    median_seconds: f64,
}

#[derive(Serialize)]
struct BenchDocument {
    family: &'static str,
    runs: u32,
    rows: Vec<BenchRow>,
}

pub fn bench(a: &BenchArgs, run: &mut RunReport) -> Result<u8, Failure> {
    let y = Var::new(1);
    let mut rows = Vec::new();
    for &size in &a.sizes {
        let f = chain_formula(size);
        debug_assert_eq!(f.prefix().quantifier(y), Some(Quantifier::Exists));
        let mut times = Vec::with_capacity(a.runs as usize);
        let mut dependents = 0;
        for _ in 0..a.runs {
            let start = Instant::now();
            let c = Connector::new(&f);
            let r = existential_report(&c, y, false).expect("chain source is existential");
            times.push(start.elapsed().as_secs_f64());
            run.walks(&r.stats);
            dependents = r.dependents.len();
        }
        times.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            size: f.size(),
            clauses: f.clauses().len(),
            bytes: to_qdimacs(&f).len(),
            dependents,
            median_seconds: times[times.len() / 2],
        });
    }
    run.counts.pairs = rows.iter().map(|r| r.dependents).sum();
    let out = match a.format {
        Format::Text => {
            let mut out = String::from("size clauses bytes dependents median_ms\n");
            for r in &rows {
                writeln!(
                    out,
                    "{} {} {} {} {:.3}",
                    r.size,
                    r.clauses,
                    r.bytes,
                    r.dependents,
                    r.median_seconds * 1e3
                )
                .unwrap();
            }
            out
        }
        Format::Json => json(&BenchDocument { family: "chain", runs: a.runs, rows }),
    };
    print!("{out}");
    Ok(0)
}
