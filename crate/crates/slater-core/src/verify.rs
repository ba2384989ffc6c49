//! Seeded cross-check suites binding the solvers to the independent
//! oracles, plus the instance generators they draw from.
//!
//! Each suite returns a [`SuiteReport`] of named checks so the command line
//! tool can print one line per check and dump counterexample files on
//! failure; the acceptance tests assert on the same reports. All
//! randomness flows from a caller-supplied seed through [`SplitMix64`], so
//! every run of a suite is reproducible bit for bit.

use crate::formulas::{
    evaluate, max_independent_set_parity, max_model_decide, Assignment, ClauseSide, Cnf, Graph,
    MaxModelInstance, PartitionedCnf,
};
use crate::gadget::{
    assignment_to_ordering, baseline_bound, bound_for_assignment, cnf_to_tournament,
    decide_designated, find_min_params, GadgetPlan, ModuleRole,
};
use crate::io;
use crate::modules::{quotient, ModulePartition};
use crate::pipeline::{graph_to_maxmodel, maxmodel_to_restricted};
use crate::rng::SplitMix64;
use crate::solver::{
    contiguize_with_trace, is_contiguous, min_fas_bruteforce, min_fas_bruteforce_forced, min_fas_dp,
};
use crate::tournament::{aggregate_majority, fas_size_of_ordering, LinearOrder, Tournament};
use crate::voters::{build_seven_voters, induced_pairs};
use crate::WeightedDigraph;

/// One named pass/fail fact, with an optional counterexample file.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// `(suggested file name, file content)` reproducing the failure.
    pub counterexample: Option<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            detail: detail.into(),
            counterexample: None,
        });
    }

    fn fail(
        &mut self,
        name: impl Into<String>,
        detail: impl Into<String>,
        counterexample: Option<(String, String)>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            detail: detail.into(),
            counterexample,
        });
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        if ok {
            self.pass(name, detail);
        } else {
            self.fail(name, detail, None);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

pub fn random_tournament(rng: &mut SplitMix64, n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.chance())
}

pub fn random_weighted_digraph(rng: &mut SplitMix64, n: usize, max_weight: u64) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                g.set_weight(u, v, rng.below(max_weight + 1));
            }
        }
    }
    g
}

pub fn random_graph(rng: &mut SplitMix64, n: usize) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            if rng.chance() {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// A tournament built as a product: a random quotient tournament on 2 or 3
/// classes with random class contents, so every class is a module.
pub fn random_product_tournament(
    rng: &mut SplitMix64,
    max_n: usize,
) -> (Tournament, ModulePartition) {
    random_product_tournament_with(rng, max_n, false)
}

/// Product tournament whose classes induce transitive subtournaments, as
/// the module-accelerated Slater route requires.
pub fn random_transitive_product_tournament(
    rng: &mut SplitMix64,
    max_n: usize,
) -> (Tournament, ModulePartition) {
    random_product_tournament_with(rng, max_n, true)
}

fn random_product_tournament_with(
    rng: &mut SplitMix64,
    max_n: usize,
    transitive_classes: bool,
) -> (Tournament, ModulePartition) {
    let class_count = 2 + rng.below(2) as usize;
    let n = (class_count as u64 + rng.below((max_n - class_count) as u64 + 1)) as usize;
    // Random composition of n into class_count nonempty parts.
    let mut ids: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut ids);
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut rest = n;
    for c in 0..class_count {
        let remaining_classes = class_count - c - 1;
        let take = if remaining_classes == 0 {
            rest
        } else {
            1 + rng.below((rest - remaining_classes) as u64) as usize
        };
        classes.push(ids.drain(..take).collect());
        rest -= take;
    }
    let mp = ModulePartition::new(n, classes).expect("composition tiles 0..n");
    let class_map = mp.class_map();
    let quotient_t = random_tournament(rng, mp.len());
    let inner = if transitive_classes {
        Tournament::transitive(n)
    } else {
        random_tournament(rng, n)
    };
    let t = Tournament::from_fn(n, |u, v| {
        let (cu, cv) = (class_map[u as usize], class_map[v as usize]);
        if cu == cv {
            inner.arc(u, v)
        } else {
            quotient_t.arc(cu as u32, cv as u32)
        }
    });
    (t, mp)
}

/// A random tournament with one planted non-trivial module; the partition
/// is that module plus singletons.
pub fn random_planted_module(rng: &mut SplitMix64, max_n: usize) -> (Tournament, ModulePartition) {
    let n = (4 + rng.below(max_n as u64 - 3)) as usize;
    let size = (2 + rng.below(3)).min(n as u64 - 1) as usize;
    let mut ids: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut ids);
    let module: Vec<u32> = {
        let mut m = ids[..size].to_vec();
        m.sort_unstable();
        m
    };
    let in_module = {
        let mut mask = vec![false; n];
        for &v in &module {
            mask[v as usize] = true;
        }
        mask
    };
    // Each outside vertex takes one stance toward the whole module.
    let stance: Vec<bool> = (0..n).map(|_| rng.chance()).collect();
    let inner = random_tournament(rng, n);
    // stance[z] true means the module beats z.
    let t = Tournament::from_fn(n, |u, v| {
        match (in_module[u as usize], in_module[v as usize]) {
            (true, true) | (false, false) => inner.arc(u, v),
            (true, false) => !stance[v as usize],
            (false, true) => stance[u as usize],
        }
    });
    let mut classes = vec![module.clone()];
    classes.extend(
        (0..n as u32)
            .filter(|v| !in_module[*v as usize])
            .map(|v| vec![v]),
    );
    let mp = ModulePartition::new(n, classes).expect("module plus singletons");
    (t, mp)
}

/// A random CNF instance satisfied by the all-false assignment: every
/// clause carries at least one negative literal and mentions each variable
/// at most once.
pub fn random_all_false_instance(
    rng: &mut SplitMix64,
    max_vars: usize,
    max_clauses: usize,
) -> MaxModelInstance {
    let n = (1 + rng.below(max_vars as u64)) as usize;
    let m = (1 + rng.below(max_clauses as u64)) as usize;
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let size = (1 + rng.below(3.min(n as u64))) as usize;
        let mut vars: Vec<u32> = (1..=n as u32).collect();
        rng.shuffle(&mut vars);
        let vars = &vars[..size];
        let forced_negative = rng.below(size as u64) as usize;
        let clause: Vec<i32> = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == forced_negative || rng.chance() {
                    -(v as i32)
                } else {
                    v as i32
                }
            })
            .collect();
        clauses.push(clause);
    }
    let cnf = Cnf::new(n, clauses).expect("generated clauses are valid");
    let dvar = (1 + rng.below(n as u64)) as usize;
    MaxModelInstance::new(cnf, dvar).expect("every clause has a negative literal")
}

// ---------------------------------------------------------------------------
// bundled instances
// ---------------------------------------------------------------------------

fn instance(num_vars: usize, clauses: &[&[i32]], dvar: usize) -> MaxModelInstance {
    let cnf = Cnf::new(num_vars, clauses.iter().map(|c| c.to_vec()).collect())
        .expect("bundled clauses are valid");
    MaxModelInstance::new(cnf, dvar).expect("bundled instances are all-false satisfiable")
}

/// The bundled end-to-end suite: small instances with the distinguished
/// variable last, mixing winner and non-winner outcomes.
pub fn bundled_instances() -> Vec<(String, MaxModelInstance)> {
    let specs: Vec<(usize, Vec<Vec<i32>>)> = vec![
        (1, vec![]),
        (1, vec![vec![-1]]),
        (2, vec![vec![-1, 2]]),
        (2, vec![vec![-1, 2], vec![-2]]),
        (2, vec![vec![-1], vec![-2, 1]]),
        (2, vec![vec![-1, -2]]),
        (3, vec![vec![-1, 2], vec![-2, 3]]),
        (3, vec![vec![-1, 2], vec![-2, 3], vec![-3]]),
        (3, vec![vec![-1, -2]]),
        (3, vec![vec![-3, 1], vec![-2]]),
        (2, vec![vec![-1, 2], vec![-2, 1], vec![-1, -2]]),
        (3, vec![vec![-1, 3], vec![-2, 3], vec![-1, -2]]),
    ];
    specs
        .into_iter()
        .enumerate()
        .map(|(i, (n, clauses))| {
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            (format!("bundled-{:02}", i + 1), instance(n, &refs, n))
        })
        .collect()
}

fn restricted(
    num_vars: usize,
    clauses: &[&[i32]],
    dvar: usize,
    sides: &[ClauseSide],
) -> PartitionedCnf {
    let inst = instance(num_vars, clauses, dvar);
    PartitionedCnf::new(inst, sides.to_vec()).expect("bundled side tags are valid")
}

/// The bundled restricted suite for the seven-voter realization.
pub fn bundled_restricted_instances() -> Vec<(String, PartitionedCnf)> {
    use ClauseSide::{Left, Right};
    let mut out = vec![
        ("restricted-01".to_string(), restricted(1, &[], 1, &[])),
        (
            "restricted-02".to_string(),
            restricted(1, &[&[-1]], 1, &[Left]),
        ),
        (
            "restricted-03".to_string(),
            restricted(1, &[&[-1]], 1, &[Right]),
        ),
        (
            "restricted-04".to_string(),
            restricted(2, &[&[-1, 2]], 2, &[Right]),
        ),
        (
            "restricted-05".to_string(),
            restricted(2, &[&[-1, 2], &[-2]], 2, &[Right, Left]),
        ),
        (
            "restricted-06".to_string(),
            restricted(2, &[&[-1, 2], &[-2]], 2, &[Left, Right]),
        ),
        (
            "restricted-07".to_string(),
            restricted(3, &[&[-1, 2], &[-3]], 3, &[Right, Left]),
        ),
    ];
    // One instance produced by the actual clause-splitting pipeline.
    let sourced = maxmodel_to_restricted(&instance(2, &[&[-1, 2]], 2))
        .expect("restriction of a two-variable implication");
    out.push(("restricted-08".to_string(), sourced.pcnf));
    out
}

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

/// Subset DP versus permutation brute force, exhaustively over every
/// tournament on up to four vertices and over seeded random tournaments
/// and weighted digraphs, including every forced-last choice.
pub fn solver_suite(trials: usize, seed: u64, max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new("solver");
    let mut rng = SplitMix64::new(seed);

    let mut exhaustive_ok = 0usize;
    'exhaustive: for n in 1..=4usize {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|a| ((a + 1)..n as u32).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let t = Tournament::from_fn(n, |u, v| {
                let idx = pairs.iter().position(|&p| p == (u, v)).unwrap();
                mask >> idx & 1 == 1
            });
            let g = WeightedDigraph::from_tournament(&t);
            if let Some(detail) = dp_disagrees(&g) {
                report.fail(
                    "exhaustive-small",
                    format!("n={n} mask={mask}: {detail}"),
                    Some((
                        "counterexample-tournament.txt".into(),
                        io::serialize_tournament(&t),
                    )),
                );
                break 'exhaustive;
            }
            exhaustive_ok += 1;
        }
    }
    if report.checks.is_empty() {
        report.pass(
            "exhaustive-small",
            format!("{exhaustive_ok} tournaments, n <= 4"),
        );
    }

    let mut random_ok = 0usize;
    for trial in 0..trials {
        let n = (2 + rng.below(max_n as u64 - 1)) as usize;
        let (g, file) = if trial % 2 == 0 {
            let t = random_tournament(&mut rng, n);
            let file = io::serialize_tournament(&t);
            (WeightedDigraph::from_tournament(&t), file)
        } else {
            let g = random_weighted_digraph(&mut rng, n, 9);
            (g.clone(), format!("{g:?}\n"))
        };
        if let Some(detail) = dp_disagrees(&g) {
            report.fail(
                "random-instances",
                format!("trial {trial}: {detail}"),
                Some(("counterexample-solver.txt".into(), file)),
            );
            return report;
        }
        random_ok += 1;
    }
    report.pass(
        "random-instances",
        format!("{random_ok} seeded instances, n <= {max_n}"),
    );
    report
}

/// Some mismatch between the DP and the brute force on `g`, if any.
fn dp_disagrees(g: &WeightedDigraph) -> Option<String> {
    let brute = min_fas_bruteforce(g).expect("size under brute-force cap");
    let dp = min_fas_dp(g, None).expect("size under DP cap");
    if brute.value != dp.value {
        return Some(format!(
            "unconstrained value {} vs {}",
            brute.value, dp.value
        ));
    }
    if brute.order != dp.order {
        return Some(format!(
            "tie-break mismatch: {:?} vs {:?}",
            brute.order, dp.order
        ));
    }
    for v in 0..g.k() {
        let dp = min_fas_dp(g, Some(v)).expect("size under DP cap");
        let brute = min_fas_bruteforce_forced(g, v).expect("size under brute-force cap");
        if dp.value != brute.value {
            return Some(format!("forced last {v}: {} vs {}", brute.value, dp.value));
        }
        if dp.order != brute.order {
            return Some(format!("forced last {v}: order tie-break mismatch"));
        }
    }
    None
}

/// Contiguization on planted-partition tournaments: the rewrite never
/// increases the implied cost, its output is contiguous, every step's
/// cheaper move is non-positive, and the minimum over module-contiguous
/// orderings equals the global minimum.
pub fn lemma1_suite(trials: usize, seed: u64, max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new("lemma1");
    let mut rng = SplitMix64::new(seed);
    let mut ok = 0usize;
    for trial in 0..trials {
        let (t, mp) = random_product_tournament(&mut rng, max_n);
        let mut seq: Vec<u32> = (0..t.n() as u32).collect();
        rng.shuffle(&mut seq);
        let ord = LinearOrder::new(seq, t.n()).unwrap();
        let before = fas_size_of_ordering(&t, &ord).unwrap();
        let (out, trace) = contiguize_with_trace(&t, &mp, &ord).expect("planted modules verify");
        let after = fas_size_of_ordering(&t, &out).unwrap();

        let mut problem: Option<String> = None;
        if !is_contiguous(&mp, &out) {
            problem = Some("output not contiguous".into());
        } else if after > before {
            problem = Some(format!("cost rose from {before} to {after}"));
        } else if let Some(step) = trace
            .iter()
            .find(|s| s.delta_shift_x.min(s.delta_shift_y) > 0)
        {
            problem = Some(format!("step with both deltas positive: {step:?}"));
        } else {
            // Optimality transfer: contiguous minimum == global minimum.
            let global = min_fas_bruteforce(&WeightedDigraph::from_tournament(&t))
                .expect("n within brute cap")
                .value;
            let q = quotient(&t, &mp).expect("planted modules verify");
            let contiguous_min = min_fas_dp(&q.digraph, None).expect("few classes").value
                + q.internal_min_fas.iter().sum::<u64>();
            if contiguous_min != global {
                problem = Some(format!(
                    "contiguous minimum {contiguous_min} differs from global {global}"
                ));
            }
        }
        if let Some(detail) = problem {
            report.fail(
                "contiguize",
                format!("trial {trial}: {detail}"),
                Some((
                    "counterexample-lemma1.txt".into(),
                    format!(
                        "{}{}order {:?}\n",
                        io::serialize_tournament(&t),
                        io::serialize_modules(&mp),
                        ord.as_slice()
                    ),
                )),
            );
            return report;
        }
        ok += 1;
    }
    report.pass(
        "contiguize",
        format!("{ok} trials, n <= {max_n}, 2-3 planted classes"),
    );
    report
}

/// Graph encoding versus the independent-set parity oracle: exhaustive on
/// up to three vertices, seeded on four.
pub fn lemma2_suite(seed: u64, four_vertex_graphs: usize) -> SuiteReport {
    let mut report = SuiteReport::new("lemma2");
    let mut checked = 0usize;
    for n in 1..=3usize {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|a| ((a + 1)..n as u32).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            if let Some(detail) = encoding_disagrees(&g) {
                report.fail(
                    "exhaustive-graphs",
                    format!("n={n} mask={mask}: {detail}"),
                    Some(("counterexample-graph.txt".into(), io::serialize_graph(&g))),
                );
                return report;
            }
            checked += 1;
        }
    }
    report.pass("exhaustive-graphs", format!("{checked} graphs, n <= 3"));

    let mut rng = SplitMix64::new(seed);
    for trial in 0..four_vertex_graphs {
        let g = random_graph(&mut rng, 4);
        if let Some(detail) = encoding_disagrees(&g) {
            report.fail(
                "random-graphs",
                format!("trial {trial}: {detail}"),
                Some(("counterexample-graph.txt".into(), io::serialize_graph(&g))),
            );
            return report;
        }
    }
    report.pass(
        "random-graphs",
        format!("{four_vertex_graphs} graphs, n = 4"),
    );
    report
}

/// [`lemma2_suite`] for one supplied graph.
pub fn lemma2_single(g: &Graph) -> SuiteReport {
    let mut report = SuiteReport::new("lemma2");
    match encoding_disagrees(g) {
        None => report.pass("instance", format!("n={} edges={}", g.n(), g.edges().len())),
        Some(detail) => report.fail(
            "instance",
            detail,
            Some(("counterexample-graph.txt".into(), io::serialize_graph(g))),
        ),
    }
    report
}

fn encoding_disagrees(g: &Graph) -> Option<String> {
    let enc = graph_to_maxmodel(g).expect("graph is nonempty");
    let n = g.n();
    let cnf = enc.instance.cnf();
    if cnf.num_vars() != n * (n + 1) + n {
        return Some(format!("unexpected variable count {}", cnf.num_vars()));
    }
    let verdict = max_model_decide(&enc.instance).expect("within enumeration cap");
    let parity = max_independent_set_parity(g).expect("within enumeration cap");
    if verdict.dvar_true_at_max != parity.odd {
        return Some(format!(
            "encoding decides {}, parity oracle says max size {} ({})",
            verdict.dvar_true_at_max,
            parity.max_size,
            if parity.odd { "odd" } else { "even" }
        ));
    }
    None
}

/// Clause-splitting restriction: decisions agree and the maximum weight
/// scales by exactly the clause count.
pub fn lemma4_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma4");
    let mut rng = SplitMix64::new(seed);
    let mut ok = 0usize;
    for trial in 0..trials {
        let input = random_all_false_instance(&mut rng, 4, 4);
        let m = input.cnf().num_clauses() as u32;
        let enc = maxmodel_to_restricted(&input).expect("generator avoids duplicate variables");
        let vin = max_model_decide(&input).expect("within cap");
        let vout = max_model_decide(enc.pcnf.instance()).expect("within cap");
        let mut problem: Option<String> = None;
        if vin.dvar_true_at_max != vout.dvar_true_at_max {
            problem = Some(format!(
                "decisions differ: {} vs {}",
                vin.dvar_true_at_max, vout.dvar_true_at_max
            ));
        } else if vout.max_weight != m * vin.max_weight {
            problem = Some(format!(
                "weights {} vs {} * {}",
                vout.max_weight, m, vin.max_weight
            ));
        }
        if let Some(detail) = problem {
            report.fail(
                "restriction",
                format!("trial {trial}: {detail}"),
                Some((
                    "counterexample-lemma4.cnf".into(),
                    io::serialize_dimacs(input.cnf(), Some(input.dvar()), None),
                )),
            );
            return report;
        }
        ok += 1;
    }
    report.pass(
        "restriction",
        format!("{ok} seeded instances, <= 4 vars, <= 4 clauses"),
    );
    report
}

/// [`lemma4_suite`] for one supplied instance.
pub fn lemma4_single(input: &MaxModelInstance) -> SuiteReport {
    let mut report = SuiteReport::new("lemma4");
    let dump = || {
        Some((
            "counterexample-lemma4.cnf".to_string(),
            io::serialize_dimacs(input.cnf(), Some(input.dvar()), None),
        ))
    };
    let enc = match maxmodel_to_restricted(input) {
        Ok(enc) => enc,
        Err(e) => {
            report.fail("instance", format!("restriction failed: {e}"), dump());
            return report;
        }
    };
    let m = input.cnf().num_clauses() as u32;
    let vin = match max_model_decide(input) {
        Ok(v) => v,
        Err(e) => {
            report.fail("instance", format!("input oracle: {e}"), dump());
            return report;
        }
    };
    let vout = match max_model_decide(enc.pcnf.instance()) {
        Ok(v) => v,
        Err(e) => {
            report.fail("instance", format!("output oracle: {e}"), dump());
            return report;
        }
    };
    let ok = vin.dvar_true_at_max == vout.dvar_true_at_max && vout.max_weight == m * vin.max_weight;
    if ok {
        report.pass(
            "instance",
            format!(
                "decision={} weight {} = {m} * {}",
                vout.dvar_true_at_max, vout.max_weight, vin.max_weight
            ),
        );
    } else {
        report.fail(
            "instance",
            format!(
                "decisions {}/{} weights {}/{}*{}",
                vin.dvar_true_at_max, vout.dvar_true_at_max, vout.max_weight, m, vin.max_weight
            ),
            dump(),
        );
    }
    report
}

/// Optimal quotient orderings must order sections ascending, put
/// `A < B < C` before the `D/E/F` tail, and keep that tail a rotation of
/// `D, E, F`.
fn structure_problem(plan: &GadgetPlan, ord: &LinearOrder) -> Option<String> {
    let pos = ord.positions();
    let n = plan.params().n;
    let section_span = |i: usize| {
        let ps: Vec<u32> = ModuleRole::SECTION_ROLES
            .iter()
            .map(|&r| pos[plan.section_module(i, r)])
            .collect();
        (*ps.iter().min().unwrap(), *ps.iter().max().unwrap())
    };
    for i in 1..n {
        let (_, hi) = section_span(i);
        let (lo, _) = section_span(i + 1);
        if hi > lo {
            return Some(format!("sections {i} and {} interleave", i + 1));
        }
    }
    for i in 1..=n {
        let a = pos[plan.section_module(i, ModuleRole::A)];
        let b = pos[plan.section_module(i, ModuleRole::B)];
        let c = pos[plan.section_module(i, ModuleRole::C)];
        let d = pos[plan.section_module(i, ModuleRole::D)];
        let e = pos[plan.section_module(i, ModuleRole::E)];
        let f = pos[plan.section_module(i, ModuleRole::F)];
        if !(a < b && b < c && c < d.min(e).min(f)) {
            return Some(format!("section {i}: A/B/C prefix violated"));
        }
        let mut tail = [(d, ModuleRole::D), (e, ModuleRole::E), (f, ModuleRole::F)];
        tail.sort_by_key(|&(p, _)| p);
        let pattern: Vec<ModuleRole> = tail.iter().map(|&(_, r)| r).collect();
        let rotations: [[ModuleRole; 3]; 3] = [
            [ModuleRole::D, ModuleRole::E, ModuleRole::F],
            [ModuleRole::E, ModuleRole::F, ModuleRole::D],
            [ModuleRole::F, ModuleRole::D, ModuleRole::E],
        ];
        if !rotations.iter().any(|r| r.as_slice() == pattern.as_slice()) {
            return Some(format!("section {i}: tail pattern {pattern:?}"));
        }
    }
    None
}

/// End-to-end gadget decisions against the Max Model oracle, plus the
/// structural facts about optimal quotient orderings.
pub fn theorem1_suite(custom: Option<&MaxModelInstance>) -> SuiteReport {
    let mut report = SuiteReport::new("theorem1");
    let instances: Vec<(String, MaxModelInstance)> = match custom {
        Some(inst) => {
            let (fixed, _) = crate::pipeline::reindex_dvar_last(inst);
            vec![("instance".to_string(), fixed)]
        }
        None => bundled_instances(),
    };
    for (name, inst) in &instances {
        let n = inst.cnf().num_vars();
        let m = inst.cnf().num_clauses();
        let params = find_min_params(n, m);
        let oracle = max_model_decide(inst).expect("bundled instances are within cap");
        let outcome = match decide_designated(inst, &params) {
            Ok(o) => o,
            Err(e) => {
                report.fail(
                    name.clone(),
                    format!("gadget failed: {e}"),
                    dimacs_dump(inst),
                );
                continue;
            }
        };
        let mut problems: Vec<String> = Vec::new();
        if outcome.winner != oracle.dvar_true_at_max {
            problems.push(format!(
                "decision {} but oracle says {}",
                outcome.winner, oracle.dvar_true_at_max
            ));
        }
        if outcome.extracted.weight() != oracle.max_weight {
            problems.push(format!(
                "extracted weight {} but oracle maximum {}",
                outcome.extracted.weight(),
                oracle.max_weight
            ));
        }
        if !evaluate(inst.cnf(), &outcome.extracted).unwrap() {
            problems.push("extracted assignment is not a model".into());
        }
        let floor = params.n as u128 * params.s1 * params.s1;
        if u128::from(outcome.optimal) < floor {
            problems.push(format!(
                "optimal cost {} below floor {floor}",
                outcome.optimal
            ));
        }
        let ceiling = bound_for_assignment(&params, &outcome.extracted);
        if u128::from(outcome.optimal) > ceiling {
            problems.push(format!(
                "optimal cost {} above ceiling {ceiling}",
                outcome.optimal
            ));
        }
        let plan = GadgetPlan::new(inst, params).expect("parameters were just used");
        if let Some(detail) = structure_problem(&plan, &outcome.optimal_order) {
            problems.push(detail);
        }
        if problems.is_empty() {
            report.pass(
                name.clone(),
                format!(
                    "oracle={} slater={} optimal={} s1={} s2={}",
                    oracle.dvar_true_at_max, outcome.winner, outcome.optimal, params.s1, params.s2
                ),
            );
        } else {
            report.fail(name.clone(), problems.join("; "), dimacs_dump(inst));
        }
    }
    report
}

fn dimacs_dump(inst: &MaxModelInstance) -> Option<(String, String)> {
    Some((
        "counterexample-instance.cnf".into(),
        io::serialize_dimacs(inst.cnf(), Some(inst.dvar()), None),
    ))
}

/// Every satisfying assignment's constructed ordering stays within its cost
/// ceiling, and the all-false ceiling sits exactly `(n-1)*s1` under the
/// coarse baseline expression.
pub fn bounds_suite() -> SuiteReport {
    let mut report = SuiteReport::new("bounds");
    for (name, inst) in bundled_instances() {
        let n = inst.cnf().num_vars();
        let m = inst.cnf().num_clauses();
        let params = find_min_params(n, m);
        let plan = GadgetPlan::new(&inst, params).expect("minimal parameters fit");
        let mut problems: Vec<String> = Vec::new();
        let mut models = 0usize;
        for mask in 0u64..(1 << n) {
            let a = Assignment::from_mask(mask, n);
            if !evaluate(inst.cnf(), &a).unwrap() {
                continue;
            }
            models += 1;
            match assignment_to_ordering(&plan, &a) {
                Ok(placed) => {
                    debug_assert!(u128::from(placed.fas) <= placed.bound);
                    if placed.bound != bound_for_assignment(&params, &a) {
                        problems.push(format!("mask {mask}: inconsistent ceiling"));
                    }
                }
                Err(e) => problems.push(format!("mask {mask}: {e}")),
            }
        }
        let all_false = Assignment::all_false(n);
        let baseline = bound_for_assignment(&params, &all_false);
        let coarse = baseline_bound(&params);
        if coarse - baseline != (n as u128 - 1) * params.s1 {
            problems.push(format!(
                "baseline gap {} is not (n-1)*s1",
                coarse - baseline
            ));
        }
        if problems.is_empty() {
            report.pass(name, format!("{models} models within ceilings"));
        } else {
            report.fail(name, problems.join("; "), dimacs_dump(&inst));
        }
    }
    report
}

/// Seven-voter realization: aggregation reproduces the gadget arc for arc,
/// the three voter pairs induce exactly their pair sets, margins stay odd
/// and small, and no voter is redundant.
pub fn theorem2_suite(custom: Option<&PartitionedCnf>) -> SuiteReport {
    let mut report = SuiteReport::new("theorem2");
    let instances: Vec<(String, PartitionedCnf)> = match custom {
        Some(pcnf) => vec![("instance".to_string(), pcnf.clone())],
        None => bundled_restricted_instances(),
    };
    // Voter index -> proven non-redundant on some instance.
    let mut voter_needed = [false; 7];
    for (name, pcnf) in &instances {
        let inst = pcnf.instance();
        let n = inst.cnf().num_vars();
        let m = inst.cnf().num_clauses();
        let params = find_min_params(n, m);
        let layout = match cnf_to_tournament(inst, &params) {
            Ok(l) => l,
            Err(e) => {
                report.fail(
                    name.clone(),
                    format!("gadget failed: {e}"),
                    restricted_dump(pcnf),
                );
                continue;
            }
        };
        let (profile, plan) = match build_seven_voters(&layout, pcnf) {
            Ok(x) => x,
            Err(e) => {
                report.fail(
                    name.clone(),
                    format!("voters failed: {e}"),
                    restricted_dump(pcnf),
                );
                continue;
            }
        };
        let mut problems: Vec<String> = Vec::new();
        let mut histogram = [0u64; 4];
        match aggregate_majority(&profile) {
            Err(e) => problems.push(format!("aggregation tie: {e}")),
            Ok(outcome) => {
                if outcome.tournament != layout.tournament {
                    problems.push("aggregation differs from the gadget".into());
                }
                match margin_audit(&layout, &outcome.margins) {
                    Ok(h) => histogram = h,
                    Err(detail) => problems.push(detail),
                }
            }
        }
        for (set, a, b, label) in [
            (&plan.x0, 1usize, 2usize, "x0"),
            (&plan.x1, 3, 4, "x1"),
            (&plan.x2, 5, 6, "x2"),
        ] {
            let pairs = induced_pairs(&plan.module_orders[a], &plan.module_orders[b])
                .expect("module orders share a length");
            if pairs != *set {
                problems.push(format!("voters {}/{} do not induce {label}", a + 1, b + 1));
            }
        }
        // Redundancy probe on the small instances.
        if layout.tournament.n() <= 4000 {
            for (i, needed) in voter_needed.iter_mut().enumerate() {
                let six = profile.without_voter(i).expect("seven voters");
                let broken = match aggregate_majority(&six) {
                    Err(_) => true,
                    Ok(out) => out.tournament != layout.tournament,
                };
                if broken {
                    *needed = true;
                }
            }
        }
        if problems.is_empty() {
            report.pass(
                name.clone(),
                format!(
                    "{} vertices, {} modules, margins 1/3/5/7: {}/{}/{}/{}",
                    layout.tournament.n(),
                    plan.module_orders[0].len(),
                    histogram[0],
                    histogram[1],
                    histogram[2],
                    histogram[3]
                ),
            );
        } else {
            report.fail(name.clone(), problems.join("; "), restricted_dump(pcnf));
        }
    }
    if custom.is_none() {
        report.check(
            "voter-necessity",
            voter_needed.iter().all(|&b| b),
            format!("{:?}", voter_needed),
        );
    }
    report
}

fn restricted_dump(pcnf: &PartitionedCnf) -> Option<(String, String)> {
    let inst = pcnf.instance();
    Some((
        "counterexample-restricted.cnf".into(),
        io::serialize_dimacs(inst.cnf(), Some(inst.dvar()), Some(pcnf.sides())),
    ))
}

/// Intra-module margins must be 7, inter-module margins 1; audited fully on
/// small gadgets and on a sampled grid for larger ones. Returns the
/// histogram of pairs by absolute margin 1/3/5/7.
fn margin_audit(
    layout: &crate::gadget::GadgetLayout,
    margins: &crate::tournament::Margins,
) -> Result<[u64; 4], String> {
    let n = layout.tournament.n() as u32;
    let owner: Vec<u32> = {
        let mut map = vec![0u32; n as usize];
        for (mi, class) in layout.partition.classes().iter().enumerate() {
            for &v in class {
                map[v as usize] = mi as u32;
            }
        }
        map
    };
    let step = if n <= 1500 { 1 } else { 13 };
    let mut histogram = [0u64; 4];
    let mut u = 0u32;
    while u < n {
        let mut v = u + 1;
        while v < n {
            let margin = margins.margin(u, v).abs();
            let expect = if owner[u as usize] == owner[v as usize] {
                7
            } else {
                1
            };
            if margin != expect {
                return Err(format!("margin({u},{v}) = {margin}, expected {expect}"));
            }
            histogram[(margin / 2) as usize] += 1;
            v += step;
        }
        u += step;
    }
    Ok(histogram)
}

/// The frozen known-answer pair: the implication formula admits a heaviest
/// model setting its distinguished variable, so its designated vertex wins;
/// adding the negating unit clause flips the answer.
pub fn known_answers_suite() -> SuiteReport {
    let mut report = SuiteReport::new("known-answers");
    let yes = instance(2, &[&[-1, 2]], 2);
    let no = instance(2, &[&[-1, 2], &[-2]], 2);

    let oracle_yes = max_model_decide(&yes).unwrap();
    report.check(
        "oracle-implication",
        oracle_yes.dvar_true_at_max && oracle_yes.max_weight == 2,
        format!(
            "weight {} dvar {}",
            oracle_yes.max_weight, oracle_yes.dvar_true_at_max
        ),
    );
    let oracle_no = max_model_decide(&no).unwrap();
    report.check(
        "oracle-negated",
        !oracle_no.dvar_true_at_max && oracle_no.max_weight == 0,
        format!(
            "weight {} dvar {}",
            oracle_no.max_weight, oracle_no.dvar_true_at_max
        ),
    );

    match decide_designated(&yes, &find_min_params(2, 1)) {
        Ok(o) => report.check(
            "designated-implication",
            o.winner,
            format!("winner {}", o.winner),
        ),
        Err(e) => report.fail("designated-implication", e.to_string(), None),
    }
    match decide_designated(&no, &find_min_params(2, 2)) {
        Ok(o) => report.check(
            "designated-negated",
            !o.winner,
            format!("winner {}", o.winner),
        ),
        Err(e) => report.fail("designated-negated", e.to_string(), None),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_generator_yields_modules() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..50 {
            let (t, mp) = random_product_tournament(&mut rng, 9);
            assert!(crate::modules::verify_modules(&t, &mp).is_ok());
            assert!(mp.len() >= 2 && mp.len() <= 3);
        }
    }

    #[test]
    fn planted_generator_yields_modules() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..50 {
            let (t, mp) = random_planted_module(&mut rng, 9);
            assert!(crate::modules::verify_modules(&t, &mp).is_ok());
        }
    }

    #[test]
    fn all_false_generator_invariant() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let inst = random_all_false_instance(&mut rng, 4, 4);
            assert!(evaluate(inst.cnf(), &Assignment::all_false(inst.cnf().num_vars())).unwrap());
        }
    }

    #[test]
    fn quick_solver_suite() {
        let report = solver_suite(40, 11, 6);
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn quick_lemma1_suite() {
        let report = lemma1_suite(25, 12, 7);
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn quick_lemma4_suite() {
        let report = lemma4_suite(20, 13);
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn known_answers_pass() {
        let report = known_answers_suite();
        assert!(report.passed(), "{:?}", report.checks);
    }
}
