//! The CNF-to-tournament gadget.
//!
//! A Max Model instance with `n` variables and `m` clauses (distinguished
//! variable last) becomes a tournament of `6n + m` modules: per variable a
//! section of six large modules `A_i..F_i`, plus one small module `T_j` per
//! clause. Module sizes are driven by two parameters `s1 >> s2` subject to
//! three inequalities that make large-module order violations dominate
//! clause-module placement costs, which in turn dominate clause-to-clause
//! noise. `A..F` have size `s1`, except `E_i` which gets two extra vertices
//! (so setting a variable true is cheaper) and `E_n` three (so setting the
//! distinguished variable true wins ties). Sections are chained ascending;
//! inside a section `A -> B -> C -> {D, E, F}` with the three-cycle
//! `D -> E -> F -> D`; a clause module points at `A_i, B_i, C_i` and loses
//! to `D_i, E_i, F_i` when `x_i` is absent from the clause, with the `B/F`
//! or `C/D` pairs flipped for positive/negative occurrences. Arcs between
//! clause modules ascend by clause index. The designated vertex is the sink
//! of `F_n`; it is a Slater winner exactly when some maximum-weight model
//! sets the distinguished variable.
//!
//! Orderings of the quotient correspond to assignments: `x_i` is read as
//! true exactly when `D_i` precedes `E_i` precedes `F_i`. Against that
//! correspondence this module exposes the cost ceiling
//! [`bound_for_assignment`] and the constructive direction
//! [`assignment_to_ordering`], which places each `T_j` just before the last
//! module of the first section whose variable satisfies clause `j`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::formulas::{Assignment, MaxModelInstance};
use crate::modules::{ModulePartition, WeightedDigraph};
use crate::solver::{self, SolveError};
use crate::tournament::{LinearOrder, Tournament};

/// Vertex-count cap for materializing a gadget tournament. Larger layouts
/// are still constructible as metadata.
pub const MATERIALIZE_CAP: u128 = 60_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("parameters fail the size inequalities (slacks {0:?})")]
    InfeasibleParams(Box<[BigInt; 3]>),
    #[error("parameters sized for {expected_vars} vars / {expected_clauses} clauses but formula has {got_vars} / {got_clauses}")]
    WrongDimensions {
        expected_vars: usize,
        expected_clauses: usize,
        got_vars: usize,
        got_clauses: usize,
    },
    #[error(
        "distinguished variable is {dvar} but must be the last variable {num_vars}; reindex first"
    )]
    DvarNotLast { dvar: usize, num_vars: usize },
    #[error("clause {clause} mentions variable {var} more than once")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("{vertices} vertices exceed the materialization cap of {cap}")]
    TooLarge { vertices: u128, cap: u128 },
    #[error("module size product overflows the solver's weight type")]
    WeightOverflow,
    #[error("assignment has {got} bits, formula has {expected} variables")]
    WrongArity { got: usize, expected: usize },
    #[error("assignment does not satisfy clause {clause}")]
    UnsatisfiedClause { clause: usize },
    #[error("constructed ordering costs {fas}, above its ceiling {bound}")]
    BoundViolated { fas: u64, bound: u128 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Gadget size parameters. `n`/`m` are the formula's variable and clause
/// counts; `s1` and `s2` are the large/small module sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    pub n: usize,
    pub m: usize,
    pub s1: u128,
    pub s2: u128,
}

/// Result of evaluating the three parameter inequalities exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamsCheck {
    pub ok: bool,
    /// `lhs - rhs` per inequality; all must be positive.
    pub slack: [BigInt; 3],
}

/// Evaluates the three inequalities in exact integers:
///
/// 1. `s1^2            > (3n-1)m*s1*s2 + 3n*s1 + m^2*s2^2 + 9m(n-1)*s2`
/// 2. `s1*s2           > 3n*s1         + m^2*s2^2 + 9m(n-1)*s2`
/// 3. `s1              > m^2*s2^2 + 9m(n-1)*s2`
pub fn check_params(p: &ReductionParams) -> ParamsCheck {
    let n = BigInt::from(p.n);
    let m = BigInt::from(p.m);
    let s1 = BigInt::from(p.s1);
    let s2 = BigInt::from(p.s2);
    let tail = &m * &m * &s2 * &s2 + 9u32 * &m * (&n - 1) * &s2;
    let slack1 = &s1 * &s1 - ((3u32 * &n - 1) * &m * &s1 * &s2 + 3u32 * &n * &s1 + &tail);
    let slack2 = &s1 * &s2 - (3u32 * &n * &s1 + &tail);
    let slack3 = &s1 - &tail;
    let zero = BigInt::from(0);
    let ok = slack1 > zero && slack2 > zero && slack3 > zero;
    ParamsCheck {
        ok,
        slack: [slack1, slack2, slack3],
    }
}

fn feasible(n: u128, m: u128, s1: u128, s2: u128) -> bool {
    // Desk-scale fast path; magnitudes here stay far below u128 limits.
    let tail = m * m * s2 * s2 + 9 * m * n.saturating_sub(1) * s2;
    s1 * s1 > (3 * n - 1) * m * s1 * s2 + 3 * n * s1 + tail
        && s1 * s2 > 3 * n * s1 + tail
        && s1 > tail
}

/// Smallest-gadget parameters for a formula with `n >= 1` variables and
/// `m >= 0` clauses.
///
/// Feasibility is upward-closed in `s1` for fixed `s2`, so for each `s2`
/// the minimal feasible `s1` is found by binary search; among those pairs
/// the one minimizing the total vertex count `6n*s1 + 2n + 1 + m*s2` wins,
/// smaller `s2` on ties. Inequality (2) forces `s2 > 3n`, and dominant
/// lower bounds on `s1` grow with `s2`, which bounds the search.
pub fn find_min_params(n: usize, m: usize) -> ReductionParams {
    assert!(n >= 1, "the formula must have at least one variable");
    let (nu, mu) = (n as u128, m as u128);
    let mut best: Option<(u128, u128, u128)> = None; // (total, s2, s1)
    let mut s2 = 3 * nu + 1;
    loop {
        // s1 must exceed each of these regardless of the quadratic check.
        let floor = (mu * mu * s2 * s2 + 9 * mu * (nu - 1) * s2)
            .max(3 * nu)
            .max((3 * nu - 1) * mu * s2);
        if let Some((total, _, _)) = best {
            if 6 * nu * (floor + 1) + 2 * nu + 1 + mu * s2 >= total {
                break;
            }
        }
        let mut hi = floor.max(1);
        while !feasible(nu, mu, hi, s2) {
            hi *= 2;
        }
        let mut lo = floor; // infeasible or zero
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if feasible(nu, mu, mid, s2) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let s1 = hi;
        let total = 6 * nu * s1 + 2 * nu + 1 + mu * s2;
        if best.is_none_or(|(t, _, _)| total < t) {
            best = Some((total, s2, s1));
        }
        s2 += 1;
    }
    let (_, s2, s1) = best.expect("every s2 > 3n admits a feasible s1");
    ReductionParams { n, m, s1, s2 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleRole {
    A,
    B,
    C,
    D,
    E,
    F,
    /// A clause module `T_j`.
    Clause,
}

impl ModuleRole {
    pub const SECTION_ROLES: [ModuleRole; 6] = [
        ModuleRole::A,
        ModuleRole::B,
        ModuleRole::C,
        ModuleRole::D,
        ModuleRole::E,
        ModuleRole::F,
    ];

    pub fn letter(self) -> char {
        match self {
            ModuleRole::A => 'A',
            ModuleRole::B => 'B',
            ModuleRole::C => 'C',
            ModuleRole::D => 'D',
            ModuleRole::E => 'E',
            ModuleRole::F => 'F',
            ModuleRole::Clause => 'T',
        }
    }
}

/// One module of the layout: its role, 1-based section or clause index, and
/// half-open vertex id range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    pub role: ModuleRole,
    pub index: usize,
    pub start: u128,
    pub end: u128,
}

impl ModuleSpec {
    pub fn name(&self) -> String {
        format!("{}{}", self.role.letter(), self.index)
    }

    pub fn size(&self) -> u128 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occurrence {
    Absent,
    Positive,
    Negative,
}

/// The arithmetic layout of a gadget: module ranges, arc directions at
/// module level, and the designated vertex. Materializing the actual
/// tournament is a separate (size-capped) step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPlan {
    params: ReductionParams,
    modules: Vec<ModuleSpec>,
    /// `occurrence[j][i]` is how variable `i + 1` occurs in clause `j`.
    occurrence: Vec<Vec<Occurrence>>,
    designated: u128,
}

impl GadgetPlan {
    /// Lays out the gadget for `inst`, whose distinguished variable must be
    /// the last one (use the reindexing pre-pass otherwise).
    pub fn new(inst: &MaxModelInstance, params: ReductionParams) -> Result<Self, GadgetError> {
        let check = check_params(&params);
        if !check.ok {
            return Err(GadgetError::InfeasibleParams(Box::new(check.slack)));
        }
        let cnf = inst.cnf();
        let (n, m) = (params.n, params.m);
        if cnf.num_vars() != n || cnf.num_clauses() != m {
            return Err(GadgetError::WrongDimensions {
                expected_vars: n,
                expected_clauses: m,
                got_vars: cnf.num_vars(),
                got_clauses: cnf.num_clauses(),
            });
        }
        if inst.dvar() != n {
            return Err(GadgetError::DvarNotLast {
                dvar: inst.dvar(),
                num_vars: n,
            });
        }
        let mut occurrence = vec![vec![Occurrence::Absent; n]; m];
        for (j, clause) in cnf.clauses().iter().enumerate() {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                let slot = &mut occurrence[j][var - 1];
                if *slot != Occurrence::Absent {
                    return Err(GadgetError::RepeatedVariable { clause: j, var });
                }
                *slot = if lit > 0 {
                    Occurrence::Positive
                } else {
                    Occurrence::Negative
                };
            }
        }

        let (s1, s2) = (params.s1, params.s2);
        let mut modules = Vec::with_capacity(6 * n + m);
        let mut cursor: u128 = 0;
        for i in 1..=n {
            for role in ModuleRole::SECTION_ROLES {
                let size = match role {
                    ModuleRole::E if i < n => s1 + 2,
                    ModuleRole::E => s1 + 3,
                    _ => s1,
                };
                modules.push(ModuleSpec {
                    role,
                    index: i,
                    start: cursor,
                    end: cursor + size,
                });
                cursor += size;
            }
        }
        for j in 1..=m {
            modules.push(ModuleSpec {
                role: ModuleRole::Clause,
                index: j,
                start: cursor,
                end: cursor + s2,
            });
            cursor += s2;
        }
        // The designated vertex is the sink of F_n's internal transitive
        // tournament, i.e. the largest id in its range.
        let f_n = &modules[6 * n - 1];
        debug_assert_eq!(f_n.role, ModuleRole::F);
        let designated = f_n.end - 1;
        Ok(GadgetPlan {
            params,
            modules,
            occurrence,
            designated,
        })
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    pub fn modules(&self) -> &[ModuleSpec] {
        &self.modules
    }

    pub fn module_count(&self) -> usize {
        self.modules.len()
    }

    pub fn total_vertices(&self) -> u128 {
        self.modules.last().map_or(0, |m| m.end)
    }

    pub fn designated(&self) -> u128 {
        self.designated
    }

    /// Module index of `(role, section i)` in layout order.
    pub fn section_module(&self, i: usize, role: ModuleRole) -> usize {
        let offset = ModuleRole::SECTION_ROLES
            .iter()
            .position(|&r| r == role)
            .unwrap();
        6 * (i - 1) + offset
    }

    /// Module index of `T_j`.
    pub fn clause_module(&self, j: usize) -> usize {
        6 * self.params.n + j - 1
    }

    pub fn occurrence(&self, clause_j: usize, var_i: usize) -> Occurrence {
        self.occurrence[clause_j - 1][var_i - 1]
    }

    /// Direction of the arcs between two distinct modules: true iff they
    /// point from `a` to `b`.
    pub fn module_arc(&self, a: usize, b: usize) -> bool {
        assert_ne!(a, b);
        let ma = &self.modules[a];
        let mb = &self.modules[b];
        match (ma.role, mb.role) {
            (ModuleRole::Clause, ModuleRole::Clause) => ma.index < mb.index,
            (ModuleRole::Clause, _) => !self.arc_section_to_clause(mb, ma.index),
            (_, ModuleRole::Clause) => self.arc_section_to_clause(ma, mb.index),
            _ => {
                if ma.index != mb.index {
                    return ma.index < mb.index;
                }
                match (ma.role, mb.role) {
                    (ModuleRole::D, ModuleRole::F) => false,
                    (ModuleRole::F, ModuleRole::D) => true,
                    (x, y) => {
                        let pos = |r| {
                            ModuleRole::SECTION_ROLES
                                .iter()
                                .position(|&q| q == r)
                                .unwrap()
                        };
                        pos(x) < pos(y)
                    }
                }
            }
        }
    }

    /// True iff the arcs between section module `sm` and `T_j` point from
    /// the section module to the clause module.
    fn arc_section_to_clause(&self, sm: &ModuleSpec, j: usize) -> bool {
        let towards_clause: &[ModuleRole] = match self.occurrence(j, sm.index) {
            Occurrence::Absent => &[ModuleRole::D, ModuleRole::E, ModuleRole::F],
            Occurrence::Positive => &[ModuleRole::C, ModuleRole::D, ModuleRole::E],
            Occurrence::Negative => &[ModuleRole::B, ModuleRole::E, ModuleRole::F],
        };
        towards_clause.contains(&sm.role)
    }

    /// Weighted quotient digraph: one node per module, arc weight the
    /// product of the module sizes.
    pub fn quotient(&self) -> Result<WeightedDigraph, GadgetError> {
        let k = self.module_count();
        let mut g = WeightedDigraph::new(k);
        for a in 0..k {
            for b in (a + 1)..k {
                let weight128 = self.modules[a].size() * self.modules[b].size();
                let weight = u64::try_from(weight128).map_err(|_| GadgetError::WeightOverflow)?;
                if self.module_arc(a, b) {
                    g.set_weight(a, b, weight);
                } else {
                    g.set_weight(b, a, weight);
                }
            }
        }
        Ok(g)
    }

    /// `vertex_module()[v]` is the module index of vertex `v`; only for
    /// materializable plans.
    fn vertex_module(&self) -> Vec<u32> {
        let total = self.total_vertices() as usize;
        let mut map = vec![0u32; total];
        for (idx, spec) in self.modules.iter().enumerate() {
            map[spec.start as usize..spec.end as usize].fill(idx as u32);
        }
        map
    }
}

/// A fully materialized gadget: the tournament, its module partition, the
/// plan, and the source instance.
#[derive(Debug, Clone)]
pub struct GadgetLayout {
    pub plan: GadgetPlan,
    pub tournament: Tournament,
    pub partition: ModulePartition,
    pub source: MaxModelInstance,
}

impl GadgetLayout {
    pub fn designated(&self) -> u32 {
        self.plan.designated() as u32
    }
}

/// Builds the gadget tournament for `inst` at parameters `p`. Vertices are
/// laid out `A_1 B_1 .. F_1 A_2 .. F_n T_1 .. T_m` in ascending id ranges,
/// each module internally transitive with arcs `u -> v` for `u < v`.
pub fn cnf_to_tournament(
    inst: &MaxModelInstance,
    p: &ReductionParams,
) -> Result<GadgetLayout, GadgetError> {
    let plan = GadgetPlan::new(inst, *p)?;
    let total = plan.total_vertices();
    if total > MATERIALIZE_CAP {
        return Err(GadgetError::TooLarge {
            vertices: total,
            cap: MATERIALIZE_CAP,
        });
    }
    let owner = plan.vertex_module();
    let tournament = Tournament::from_fn(total as usize, |u, v| {
        let (mu, mv) = (owner[u as usize] as usize, owner[v as usize] as usize);
        if mu == mv {
            true // internal arcs ascend
        } else {
            plan.module_arc(mu, mv)
        }
    });
    let classes: Vec<Vec<u32>> = plan
        .modules()
        .iter()
        .map(|m| (m.start as u32..m.end as u32).collect())
        .collect();
    let partition =
        ModulePartition::new(total as usize, classes).expect("ranges tile the vertex set");
    Ok(GadgetLayout {
        plan,
        tournament,
        partition,
        source: inst.clone(),
    })
}

/// Reads an assignment off a quotient ordering: `x_i` is true exactly when
/// `D_i` precedes `E_i` precedes `F_i`.
pub fn ordering_to_assignment(plan: &GadgetPlan, ord: &LinearOrder) -> Assignment {
    assert_eq!(ord.len(), plan.module_count());
    let pos = ord.positions();
    let bits = (1..=plan.params().n)
        .map(|i| {
            let d = pos[plan.section_module(i, ModuleRole::D)];
            let e = pos[plan.section_module(i, ModuleRole::E)];
            let f = pos[plan.section_module(i, ModuleRole::F)];
            d < e && e < f
        })
        .collect();
    Assignment::new(bits)
}

/// Cost ceiling for the ordering constructed from a satisfying assignment
/// `a` with Hamming weight `k`:
///
/// `n*s1^2 + 2(n-k)*s1 + [x_n false]*s1 + (3n-1)m*s1*s2 + m^2*s2^2 + 9m(n-1)*s2`
///
/// The first three terms count the per-section cost of the `D/E/F` pattern
/// exactly (false sections pay the `E` surplus, the last section one more);
/// the rest bounds clause-module placement and clause-to-clause noise.
pub fn bound_for_assignment(p: &ReductionParams, a: &Assignment) -> u128 {
    let n = p.n as u128;
    let m = p.m as u128;
    let k = a.weight() as u128;
    let dvar_false = if a.value(p.n) { 0 } else { 1 };
    n * p.s1 * p.s1
        + 2 * (n - k) * p.s1
        + dvar_false * p.s1
        + (3 * n - 1) * m * p.s1 * p.s2
        + m * m * p.s2 * p.s2
        + 9 * m * (n - 1) * p.s2
}

/// The coarser baseline ceiling `n*s1^2 + (3n-1)m*s1*s2 + 3n*s1 + m^2*s2^2
/// + 9m(n-1)*s2`, which over-counts every `E_i` at its maximum size. It
/// exceeds [`bound_for_assignment`] of the all-false assignment by exactly
/// `(n-1)*s1`.
pub fn baseline_bound(p: &ReductionParams) -> u128 {
    let n = p.n as u128;
    let m = p.m as u128;
    n * p.s1 * p.s1
        + (3 * n - 1) * m * p.s1 * p.s2
        + 3 * n * p.s1
        + m * m * p.s2 * p.s2
        + 9 * m * (n - 1) * p.s2
}

#[derive(Debug, Clone)]
pub struct PlacedOrdering {
    /// Quotient ordering: sections ascending, `D/E/F` patterned by the
    /// assignment, each clause module hosted by its first satisfying
    /// variable's section.
    pub order: LinearOrder,
    /// Weighted quotient cost of the ordering.
    pub fas: u64,
    /// The ceiling the cost was checked against.
    pub bound: u128,
}

/// Builds the quotient ordering encoding a satisfying assignment `a`.
///
/// Sections ascend; inside section `i` the tail is `D E F` when `a(x_i)`
/// and `E F D` otherwise. Each `T_j` lands immediately before the last
/// module of the section of the smallest-index variable whose literal in
/// clause `j` is satisfied; co-hosted clause modules keep ascending clause
/// order. The resulting cost is checked against [`bound_for_assignment`].
pub fn assignment_to_ordering(
    plan: &GadgetPlan,
    a: &Assignment,
) -> Result<PlacedOrdering, GadgetError> {
    let n = plan.params().n;
    let m = plan.params().m;
    if a.len() != n {
        return Err(GadgetError::WrongArity {
            got: a.len(),
            expected: n,
        });
    }
    let mut hosted: Vec<Vec<usize>> = vec![Vec::new(); n + 1]; // section -> clause js
    for j in 1..=m {
        let host = (1..=n)
            .find(|&i| match plan.occurrence(j, i) {
                Occurrence::Positive => a.value(i),
                Occurrence::Negative => !a.value(i),
                Occurrence::Absent => false,
            })
            .ok_or(GadgetError::UnsatisfiedClause { clause: j - 1 })?;
        hosted[host].push(j);
    }

    let mut seq: Vec<u32> = Vec::with_capacity(plan.module_count());
    for (i, hosted_js) in hosted.iter().enumerate().skip(1) {
        use ModuleRole::{A, B, C, D, E, F};
        for role in [A, B, C] {
            seq.push(plan.section_module(i, role) as u32);
        }
        let tail = if a.value(i) { [D, E, F] } else { [E, F, D] };
        seq.push(plan.section_module(i, tail[0]) as u32);
        seq.push(plan.section_module(i, tail[1]) as u32);
        for &j in hosted_js {
            seq.push(plan.clause_module(j) as u32);
        }
        seq.push(plan.section_module(i, tail[2]) as u32);
    }
    let order = LinearOrder::new(seq, plan.module_count()).expect("each module placed once");
    let fas = plan.quotient()?.fas_weight_of_ordering(&order);
    let bound = bound_for_assignment(plan.params(), a);
    if u128::from(fas) > bound {
        return Err(GadgetError::BoundViolated { fas, bound });
    }
    Ok(PlacedOrdering { order, fas, bound })
}

/// Everything the end-to-end decision produces.
#[derive(Debug, Clone)]
pub struct DesignatedReport {
    /// Whether the designated vertex is a Slater winner.
    pub winner: bool,
    pub designated: u32,
    /// Unconstrained minimum weighted quotient cost (the tournament's
    /// minimum feedback arc set, since all classes are transitive).
    pub optimal: u64,
    /// Minimum with the designated vertex forced last.
    pub constrained: u64,
    /// Lexicographically smallest optimal quotient ordering.
    pub optimal_order: LinearOrder,
    /// Assignment read off that ordering.
    pub extracted: Assignment,
}

/// Builds the gadget and decides whether its designated vertex is a Slater
/// winner, which holds exactly when some maximum-weight model of the source
/// formula sets the distinguished variable to true.
pub fn decide_designated(
    inst: &MaxModelInstance,
    p: &ReductionParams,
) -> Result<DesignatedReport, GadgetError> {
    let layout = cnf_to_tournament(inst, p)?;
    let designated = layout.designated();
    let analysis = solver::slater_analyze(&layout.tournament, Some(&layout.partition))?;
    let constrained = analysis.scores[designated as usize];
    let winner = constrained == analysis.min_fas;
    let quotient = layout.plan.quotient()?;
    let opt = solver::min_fas_dp(&quotient, None)?;
    debug_assert_eq!(opt.value, analysis.min_fas);
    let extracted = ordering_to_assignment(&layout.plan, &opt.order);
    Ok(DesignatedReport {
        winner,
        designated,
        optimal: opt.value,
        constrained,
        optimal_order: opt.order,
        extracted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{max_model_decide, Cnf};

    fn inst(num_vars: usize, clauses: &[&[i32]], dvar: usize) -> MaxModelInstance {
        let cnf = Cnf::new(num_vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap();
        MaxModelInstance::new(cnf, dvar).unwrap()
    }

    #[test]
    fn check_params_examples() {
        assert!(
            check_params(&ReductionParams {
                n: 2,
                m: 1,
                s1: 113,
                s2: 7
            })
            .ok
        );
        let bad = check_params(&ReductionParams {
            n: 1,
            m: 1,
            s1: 6,
            s2: 1,
        });
        assert!(!bad.ok);
        // Inequality (2): 6*1 = 6 vs 3*6 + 1 = 19.
        assert_eq!(bad.slack[1], BigInt::from(6 - 19));
    }

    #[test]
    fn paper_default_parameters_feasible() {
        // s2 = (n+m)^5, s1 = s2^5; comfortably feasible once n + m >= 2.
        // The slack arithmetic is exact (s1^2 here reaches ~10^50).
        for n in 1..=5usize {
            for m in 0..=5usize {
                if n + m < 2 {
                    continue;
                }
                let s2 = (n as u128 + m as u128).pow(5);
                let s1 = s2.pow(5);
                assert!(
                    check_params(&ReductionParams { n, m, s1, s2 }).ok,
                    "paper defaults infeasible at n={n}, m={m}"
                );
            }
        }
    }

    #[test]
    fn find_min_params_known_values() {
        let p = find_min_params(1, 1);
        assert_eq!((p.s1, p.s2), (17, 4));
        assert_eq!(6 * p.s1 + 3 + p.s2, 109);
        let p = find_min_params(2, 1);
        assert_eq!((p.s1, p.s2), (113, 7));
        assert_eq!(12 * p.s1 + 5 + p.s2, 1368);
    }

    #[test]
    fn find_min_params_always_feasible() {
        for n in 1..=4 {
            for m in 0..=4 {
                let p = find_min_params(n, m);
                assert!(check_params(&p).ok, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn implication_gadget_layout() {
        let implication = inst(2, &[&[-1, 2]], 2);
        let p = ReductionParams {
            n: 2,
            m: 1,
            s1: 113,
            s2: 7,
        };
        let layout = cnf_to_tournament(&implication, &p).unwrap();
        assert_eq!(layout.tournament.n(), 1368);
        assert_eq!(layout.plan.module_count(), 13);
        assert_eq!(layout.designated(), 1360, "sink of F_2");

        let plan = &layout.plan;
        let q = plan.quotient().unwrap();
        let f1 = plan.section_module(1, ModuleRole::F);
        let d1 = plan.section_module(1, ModuleRole::D);
        let f2 = plan.section_module(2, ModuleRole::F);
        let d2 = plan.section_module(2, ModuleRole::D);
        let e2 = plan.section_module(2, ModuleRole::E);
        assert_eq!(q.weight(f1, d1), 113 * 113);
        assert_eq!(q.weight(f2, d2), 113 * 113);
        assert_eq!(q.weight(e2, f2), 116 * 113);

        // x1 appears negative in the clause: T -> A, C, D and B, E, F -> T.
        let t1 = plan.clause_module(1);
        for (role, towards_section) in [
            (ModuleRole::A, false),
            (ModuleRole::B, true),
            (ModuleRole::C, false),
            (ModuleRole::D, false),
            (ModuleRole::E, true),
            (ModuleRole::F, true),
        ] {
            let sm = plan.section_module(1, role);
            assert_eq!(plan.module_arc(sm, t1), towards_section, "role {role:?}");
        }
        // x2 appears positive: T -> A, B, F and C, D, E -> T.
        for (role, towards_section) in [
            (ModuleRole::A, false),
            (ModuleRole::B, false),
            (ModuleRole::C, true),
            (ModuleRole::D, true),
            (ModuleRole::E, true),
            (ModuleRole::F, false),
        ] {
            let sm = plan.section_module(2, role);
            assert_eq!(plan.module_arc(sm, t1), towards_section, "role {role:?}");
        }

        // The materialized tournament induces exactly the plan's quotient.
        let q2 = crate::modules::quotient(&layout.tournament, &layout.partition).unwrap();
        assert_eq!(q2.digraph, q);
        assert!(q2.internal_min_fas.iter().all(|&f| f == 0));
    }

    #[test]
    fn dvar_must_be_last() {
        let bad = inst(2, &[&[-2, 1]], 1);
        let p = find_min_params(2, 1);
        assert!(matches!(
            GadgetPlan::new(&bad, p),
            Err(GadgetError::DvarNotLast {
                dvar: 1,
                num_vars: 2
            })
        ));
    }

    #[test]
    fn assignment_round_trip() {
        let implication = inst(2, &[&[-1, 2]], 2);
        let p = ReductionParams {
            n: 2,
            m: 1,
            s1: 113,
            s2: 7,
        };
        let plan = GadgetPlan::new(&implication, p).unwrap();
        for bits in [[false, false], [true, true]] {
            let a = Assignment::new(bits.to_vec());
            let placed = assignment_to_ordering(&plan, &a).unwrap();
            assert_eq!(ordering_to_assignment(&plan, &placed.order), a);
        }
        // (T, F) falsifies the clause.
        let bad = Assignment::new(vec![true, false]);
        assert!(matches!(
            assignment_to_ordering(&plan, &bad),
            Err(GadgetError::UnsatisfiedClause { clause: 0 })
        ));
    }

    #[test]
    fn baseline_ordering_and_bound() {
        let implication = inst(2, &[&[-1, 2]], 2);
        let p = ReductionParams {
            n: 2,
            m: 1,
            s1: 113,
            s2: 7,
        };
        let plan = GadgetPlan::new(&implication, p).unwrap();
        let all_false = Assignment::all_false(2);
        let placed = assignment_to_ordering(&plan, &all_false).unwrap();
        // Baseline shape: A B C E F D per section, T_1 hosted by x1 (its
        // negative literal satisfies the clause) just before D_1.
        use ModuleRole::{A, B, C, D, E, F};
        let expect: Vec<u32> = [
            plan.section_module(1, A),
            plan.section_module(1, B),
            plan.section_module(1, C),
            plan.section_module(1, E),
            plan.section_module(1, F),
            plan.clause_module(1),
            plan.section_module(1, D),
            plan.section_module(2, A),
            plan.section_module(2, B),
            plan.section_module(2, C),
            plan.section_module(2, E),
            plan.section_module(2, F),
            plan.section_module(2, D),
        ]
        .iter()
        .map(|&x| x as u32)
        .collect();
        assert_eq!(placed.order.as_slice(), expect.as_slice());
        assert!(u128::from(placed.fas) <= placed.bound);
        // The coarse baseline ceiling sits exactly (n - 1) * s1 above.
        assert_eq!(baseline_bound(&p) - placed.bound, 113);
    }

    #[test]
    fn decide_known_answer_pair() {
        let yes = inst(2, &[&[-1, 2]], 2);
        let p = find_min_params(2, 1);
        let report = decide_designated(&yes, &p).unwrap();
        assert!(report.winner);
        assert_eq!(report.extracted.bits(), &[true, true]);
        assert_eq!(
            max_model_decide(&yes).unwrap().max_weight,
            report.extracted.weight()
        );

        let no = inst(2, &[&[-1, 2], &[-2]], 2);
        let p = find_min_params(2, 2);
        let report = decide_designated(&no, &p).unwrap();
        assert!(!report.winner);
        assert_eq!(report.extracted.bits(), &[false, false]);
    }

    #[test]
    fn frozen_optimal_costs() {
        // Hand-checked optima. For (!x1 | x2) at s1=113, s2=7 the ordering
        // A1 B1 C1 D1 E1 F1 A2 B2 C2 D2 E2 T1 F2 costs
        //   2 * 113^2            (F_i -> D_i per section)
        // + 3 * 7 * 113          (T1 -> A1, C1, D1 backward)
        // + 2 * 7 * 113          (T1 -> A2, B2 backward)
        // = 29493.
        let yes = inst(2, &[&[-1, 2]], 2);
        let report = decide_designated(&yes, &find_min_params(2, 1)).unwrap();
        assert_eq!(report.optimal, 29493);

        // For (!x1 | x2) & (!x2) at s1=323, s2=7 the all-false baseline
        // ordering (E F D tails, T1 hosted by x1, T2 by x2) costs
        //   323*325 + 323*326    (D_i -> E_i per section)
        // + 2 * 7 * 323 * 2      (each T_j -> A, C of its host section)
        // + (2*323 + 326) * 7    (C2, D2, E2 -> T1 from behind)
        // + 3 * 7 * 323          (T2 -> A1, B1, C1 backward)
        // = 232904.
        let no = inst(2, &[&[-1, 2], &[-2]], 2);
        let report = decide_designated(&no, &find_min_params(2, 2)).unwrap();
        assert_eq!(report.optimal, 232904);
        assert_eq!(
            bound_for_assignment(&find_min_params(2, 2), &report.extracted),
            233205
        );
    }

    #[test]
    fn decide_no_clause_instance() {
        let free = inst(1, &[], 1);
        let p = find_min_params(1, 0);
        let report = decide_designated(&free, &p).unwrap();
        assert!(report.winner, "the only maximum model is all-true");
        assert_eq!(report.extracted.bits(), &[true]);
    }

    #[test]
    fn optimal_cost_at_least_n_s1_squared() {
        let yes = inst(2, &[&[-1, 2]], 2);
        let p = find_min_params(2, 1);
        let report = decide_designated(&yes, &p).unwrap();
        assert!(report.optimal as u128 >= 2 * p.s1 * p.s1);
        let bound = bound_for_assignment(&p, &report.extracted);
        assert!(u128::from(report.optimal) <= bound);
    }
}
