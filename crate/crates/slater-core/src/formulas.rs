//! CNF formulas, graphs, assignments, and the brute-force decision oracles.
//!
//! Everything downstream is verified against the two oracles here, so they
//! stay as plain exhaustive enumerations: [`max_model_decide`] scans every
//! assignment of a capped CNF, and [`max_independent_set_parity`] scans
//! every vertex subset of a capped graph.
//!
//! Variables are 1-based (matching DIMACS); a literal is a nonzero signed
//! integer whose sign is its polarity. Candidates elsewhere in the crate
//! are 0-based; the conversion happens only in `io`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("literal 0 is not allowed")]
    ZeroLiteral,
    #[error("literal {0} references a variable beyond {1}")]
    LiteralOutOfRange(i32, usize),
    #[error("clause {0} has {1} literals; clauses must have 1 to 3")]
    BadClauseSize(usize, usize),
    #[error("distinguished variable {0} out of range 1..={1}")]
    DvarOutOfRange(usize, usize),
    #[error("the all-false assignment does not satisfy clause {0}")]
    AllFalseUnsatisfied(usize),
    #[error("assignment covers {got} variables, formula has {expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("{nodes} exceeds the enumeration cap of {cap}")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("clause side tags cover {got} clauses, formula has {expected}")]
    SideCountMismatch { got: usize, expected: usize },
    #[error("variable {var} occurs in more than one left-side clause")]
    VariableTwiceInLeft { var: usize },
    #[error("literal {lit} occurs in more than one {side}-side clause")]
    LiteralTwicePerSide { lit: i32, side: char },
    #[error("edge ({0}, {1}) is invalid for {2} vertices")]
    BadEdge(u32, u32, usize),
}

/// Variable cap for [`max_model_decide`].
pub const MAX_MODEL_CAP: usize = 26;
/// Vertex cap for [`max_independent_set_parity`].
pub const INDEPENDENT_SET_CAP: usize = 20;

/// A CNF with clauses of size one to three. Literals are signed 1-based
/// variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, FormulaError> {
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > 3 {
                return Err(FormulaError::BadClauseSize(ci, clause.len()));
            }
            for &lit in clause {
                if lit == 0 {
                    return Err(FormulaError::ZeroLiteral);
                }
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(FormulaError::LiteralOutOfRange(lit, num_vars));
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

/// A truth assignment; `bits[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn all_false(num_vars: usize) -> Self {
        Assignment {
            bits: vec![false; num_vars],
        }
    }

    pub fn from_mask(mask: u64, num_vars: usize) -> Self {
        Assignment {
            bits: (0..num_vars).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of 1-based variable `var`.
    pub fn value(&self, var: usize) -> bool {
        self.bits[var - 1]
    }

    /// Hamming weight: the number of variables set to true.
    pub fn weight(&self) -> u32 {
        self.bits.iter().filter(|&&b| b).count() as u32
    }
}

/// True iff every clause contains a literal satisfied by `a`.
pub fn evaluate(cnf: &Cnf, a: &Assignment) -> Result<bool, FormulaError> {
    if a.len() != cnf.num_vars() {
        return Err(FormulaError::ArityMismatch {
            got: a.len(),
            expected: cnf.num_vars(),
        });
    }
    Ok(cnf.clauses().iter().all(|clause| {
        clause.iter().any(|&lit| {
            let value = a.value(lit.unsigned_abs() as usize);
            if lit > 0 {
                value
            } else {
                !value
            }
        })
    }))
}

/// A satisfiable CNF with a distinguished variable; construction checks the
/// standing invariant that the all-false assignment is a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxModelInstance {
    cnf: Cnf,
    dvar: usize,
}

impl MaxModelInstance {
    pub fn new(cnf: Cnf, dvar: usize) -> Result<Self, FormulaError> {
        if dvar == 0 || dvar > cnf.num_vars() {
            return Err(FormulaError::DvarOutOfRange(dvar, cnf.num_vars()));
        }
        let all_false = Assignment::all_false(cnf.num_vars());
        // Clauses with no negative literal are exactly the ones the
        // all-false assignment misses.
        for (ci, clause) in cnf.clauses().iter().enumerate() {
            if !clause.iter().any(|&lit| lit < 0) {
                return Err(FormulaError::AllFalseUnsatisfied(ci));
            }
        }
        debug_assert!(evaluate(&cnf, &all_false).unwrap());
        Ok(MaxModelInstance { cnf, dvar })
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn dvar(&self) -> usize {
        self.dvar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseSide {
    Left,
    Right,
}

/// A Max Model instance whose clauses are split into a left and a right
/// set, such that each variable occurs in at most one left clause and each
/// literal occurs at most once per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedCnf {
    instance: MaxModelInstance,
    sides: Vec<ClauseSide>,
}

impl PartitionedCnf {
    pub fn new(instance: MaxModelInstance, sides: Vec<ClauseSide>) -> Result<Self, FormulaError> {
        let cnf = instance.cnf();
        if sides.len() != cnf.num_clauses() {
            return Err(FormulaError::SideCountMismatch {
                got: sides.len(),
                expected: cnf.num_clauses(),
            });
        }
        let nv = cnf.num_vars();
        let mut var_in_left = vec![false; nv + 1];
        let mut lit_seen = [vec![false; 2 * nv + 2], vec![false; 2 * nv + 2]];
        for (clause, &side) in cnf.clauses().iter().zip(&sides) {
            let side_idx = match side {
                ClauseSide::Left => 0,
                ClauseSide::Right => 1,
            };
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if side == ClauseSide::Left {
                    if var_in_left[var] {
                        return Err(FormulaError::VariableTwiceInLeft { var });
                    }
                    var_in_left[var] = true;
                }
                let key = 2 * var + (lit < 0) as usize;
                if lit_seen[side_idx][key] {
                    return Err(FormulaError::LiteralTwicePerSide {
                        lit,
                        side: if side == ClauseSide::Left { 'L' } else { 'R' },
                    });
                }
                lit_seen[side_idx][key] = true;
            }
        }
        Ok(PartitionedCnf { instance, sides })
    }

    pub fn instance(&self) -> &MaxModelInstance {
        &self.instance
    }

    pub fn sides(&self) -> &[ClauseSide] {
        &self.sides
    }

    pub fn clause_indices(&self, side: ClauseSide) -> Vec<usize> {
        self.sides
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == side)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxModelVerdict {
    /// Maximum Hamming weight over satisfying assignments.
    pub max_weight: u32,
    /// Whether some maximum-weight satisfying assignment sets the
    /// distinguished variable to true.
    pub dvar_true_at_max: bool,
    /// A maximum-weight model; one setting the distinguished variable when
    /// such a model exists.
    pub witness: Assignment,
}

/// Decides Max Model by enumerating every assignment. The instance
/// invariant guarantees at least the all-false model, so the maximum is
/// well defined.
pub fn max_model_decide(inst: &MaxModelInstance) -> Result<MaxModelVerdict, FormulaError> {
    let cnf = inst.cnf();
    let n = cnf.num_vars();
    if n > MAX_MODEL_CAP {
        return Err(FormulaError::CapExceeded {
            nodes: n,
            cap: MAX_MODEL_CAP,
        });
    }
    // Positive/negative masks per clause make the inner check branch-free.
    let masks: Vec<(u64, u64)> = cnf
        .clauses()
        .iter()
        .map(|clause| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for &lit in clause {
                let bit = 1u64 << (lit.unsigned_abs() - 1);
                if lit > 0 {
                    pos |= bit;
                } else {
                    neg |= bit;
                }
            }
            (pos, neg)
        })
        .collect();
    let dbit = 1u64 << (inst.dvar() - 1);

    let mut max_weight = 0u32;
    let mut dvar_true_at_max = false;
    let mut witness = 0u64;
    for a in 0u64..(1u64 << n) {
        if masks
            .iter()
            .any(|&(pos, neg)| a & pos == 0 && !a & neg == 0)
        {
            continue;
        }
        let w = a.count_ones();
        let d = a & dbit != 0;
        if w > max_weight {
            max_weight = w;
            dvar_true_at_max = d;
            witness = a;
        } else if w == max_weight && !dvar_true_at_max && d {
            dvar_true_at_max = true;
            witness = a;
        }
    }
    Ok(MaxModelVerdict {
        max_weight,
        dvar_true_at_max,
        witness: Assignment::from_mask(witness, n),
    })
}

/// An undirected simple graph; edges are stored normalized `(min, max)` and
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self, FormulaError> {
        let mut normalized: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a as usize >= n || b as usize >= n {
                return Err(FormulaError::BadEdge(a, b, n));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for window in normalized.windows(2) {
            if window[0] == window[1] {
                return Err(FormulaError::BadEdge(window[0].0, window[0].1, n));
            }
        }
        Ok(Graph {
            n,
            edges: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceReport {
    pub max_size: u32,
    pub odd: bool,
}

/// Exact maximum independent set size and its parity, by enumerating every
/// vertex subset.
pub fn max_independent_set_parity(g: &Graph) -> Result<IndependenceReport, FormulaError> {
    if g.n() > INDEPENDENT_SET_CAP {
        return Err(FormulaError::CapExceeded {
            nodes: g.n(),
            cap: INDEPENDENT_SET_CAP,
        });
    }
    let mut adj = vec![0u32; g.n()];
    for &(a, b) in g.edges() {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    let mut max_size = 0u32;
    for s in 0u32..(1u32 << g.n()) {
        let mut ok = true;
        let mut members = s;
        while members != 0 {
            let v = members.trailing_zeros() as usize;
            members &= members - 1;
            if adj[v] & s != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            max_size = max_size.max(s.count_ones());
        }
    }
    Ok(IndependenceReport {
        max_size,
        odd: max_size % 2 == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(num_vars: usize, clauses: &[&[i32]], dvar: usize) -> MaxModelInstance {
        let cnf = Cnf::new(num_vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap();
        MaxModelInstance::new(cnf, dvar).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let cnf = Cnf::new(2, vec![vec![-1, 2]]).unwrap();
        assert!(evaluate(&cnf, &Assignment::all_false(2)).unwrap());
        let contradiction = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
        for mask in 0..2 {
            assert!(!evaluate(&contradiction, &Assignment::from_mask(mask, 1)).unwrap());
        }
        assert!(evaluate(&cnf, &Assignment::all_false(1)).is_err());
    }

    #[test]
    fn max_model_implication() {
        // (!x1 | x2), distinguished x2: the heaviest model is (T, T).
        let v = max_model_decide(&inst(2, &[&[-1, 2]], 2)).unwrap();
        assert!(v.dvar_true_at_max);
        assert_eq!(v.max_weight, 2);
        assert_eq!(v.witness.bits(), &[true, true]);
    }

    #[test]
    fn max_model_forced_false() {
        // (!x1 | x2) & (!x2): only the all-false assignment survives.
        let v = max_model_decide(&inst(2, &[&[-1, 2], &[-2]], 2)).unwrap();
        assert!(!v.dvar_true_at_max);
        assert_eq!(v.max_weight, 0);
        assert_eq!(v.witness.bits(), &[false, false]);
    }

    #[test]
    fn max_model_empty_clause_list() {
        let v = max_model_decide(&inst(1, &[], 1)).unwrap();
        assert!(v.dvar_true_at_max);
        assert_eq!(v.max_weight, 1);
        assert_eq!(v.witness.bits(), &[true]);
    }

    #[test]
    fn max_model_witness_is_a_model_of_reported_weight() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for _ in 0..100 {
            let inst = crate::verify::random_all_false_instance(&mut rng, 4, 4);
            let v = max_model_decide(&inst).unwrap();
            assert!(evaluate(inst.cnf(), &v.witness).unwrap());
            assert_eq!(v.witness.weight(), v.max_weight);
            if v.dvar_true_at_max {
                assert!(v.witness.value(inst.dvar()));
            }
        }
    }

    #[test]
    fn all_false_invariant_enforced() {
        let cnf = Cnf::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(
            MaxModelInstance::new(cnf, 1).unwrap_err(),
            FormulaError::AllFalseUnsatisfied(0)
        );
    }

    #[test]
    fn clause_size_limits() {
        assert!(Cnf::new(4, vec![vec![1, -2, 3, -4]]).is_err());
        assert!(Cnf::new(1, vec![vec![]]).is_err());
        assert!(Cnf::new(1, vec![vec![2]]).is_err());
        assert!(Cnf::new(1, vec![vec![0]]).is_err());
    }

    #[test]
    fn partitioned_cnf_invariants() {
        use ClauseSide::{Left, Right};
        let mk = |clauses: &[&[i32]]| {
            let cnf = Cnf::new(3, clauses.iter().map(|c| c.to_vec()).collect()).unwrap();
            MaxModelInstance::new(cnf, 3).unwrap()
        };
        // Valid split.
        let ok = mk(&[&[-1, 2], &[-2]]);
        assert!(PartitionedCnf::new(ok, vec![Right, Left]).is_ok());
        // Variable twice in left clauses.
        let bad = mk(&[&[-1, 2], &[-2, 3]]);
        assert_eq!(
            PartitionedCnf::new(bad, vec![Left, Left]).unwrap_err(),
            FormulaError::VariableTwiceInLeft { var: 2 }
        );
        // Same literal twice on the right side.
        let bad = mk(&[&[-1, 2], &[-1, 3]]);
        assert_eq!(
            PartitionedCnf::new(bad, vec![Right, Right]).unwrap_err(),
            FormulaError::LiteralTwicePerSide { lit: -1, side: 'R' }
        );
        // Same variable, opposite polarity, same side: allowed.
        let ok = mk(&[&[-1, 2], &[1, -3]]);
        assert!(PartitionedCnf::new(ok, vec![Right, Right]).is_ok());
    }

    #[test]
    fn independent_set_small_graphs() {
        let single = Graph::new(1, &[]).unwrap();
        let r = max_independent_set_parity(&single).unwrap();
        assert_eq!((r.max_size, r.odd), (1, true));

        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let r = max_independent_set_parity(&k2).unwrap();
        assert_eq!((r.max_size, r.odd), (1, true));

        let empty2 = Graph::new(2, &[]).unwrap();
        let r = max_independent_set_parity(&empty2).unwrap();
        assert_eq!((r.max_size, r.odd), (2, false));
    }

    /// Independent cross-check: a simple branching algorithm must agree with
    /// the subset enumeration.
    fn mis_branch_and_bound(g: &Graph, verts: &mut Vec<u32>) -> u32 {
        match verts.last().copied() {
            None => 0,
            Some(v) => {
                verts.pop();
                let skip = mis_branch_and_bound(g, verts);
                let saved = verts.clone();
                verts.retain(|&u| !g.has_edge(u, v));
                let take = 1 + mis_branch_and_bound(g, verts);
                *verts = saved;
                verts.push(v);
                skip.max(take)
            }
        }
    }

    #[test]
    fn parity_oracle_vs_branch_and_bound() {
        let mut rng = crate::rng::SplitMix64::new(17);
        for _ in 0..30 {
            let n = (rng.below(9) + 1) as usize;
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for b in (a + 1)..n as u32 {
                    if rng.chance() {
                        edges.push((a, b));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let enumerated = max_independent_set_parity(&g).unwrap();
            let mut verts: Vec<u32> = (0..n as u32).collect();
            let branched = mis_branch_and_bound(&g, &mut verts);
            assert_eq!(enumerated.max_size, branched);
        }
    }
}
