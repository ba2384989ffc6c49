//! The two CNF-level reductions feeding the gadget construction.
//!
//! [`graph_to_maxmodel`] turns independent-set parity on a graph into a Max
//! Model instance: `n + 1` copies per vertex kept consistent by implication
//! clauses, pairwise-exclusion clauses per edge, and a parity chain over
//! the first copies whose last bit is the distinguished variable.
//!
//! [`maxmodel_to_restricted`] rewrites a Max Model instance so the clause
//! set splits into a right part (per-variable implication cycles over `m`
//! fresh copies) and a left part (the original clauses, with the clause-j
//! occurrence of a variable replaced by its j-th copy); each variable then
//! occurs in at most one left clause and each literal at most once per
//! side, which the seven-voter construction needs. Consistent assignments
//! scale Hamming weight by exactly `m`.
//!
//! Both emit clauses in a fixed documented order, so downstream gadget
//! layouts and files are byte-reproducible.

use thiserror::Error;

use crate::formulas::{ClauseSide, Cnf, FormulaError, Graph, MaxModelInstance, PartitionedCnf};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("the graph must have at least one vertex")]
    EmptyGraph,
    #[error("the formula must have at least one clause to be restricted")]
    NoClauses,
    #[error("clause {clause} repeats variable {var}")]
    DuplicateVariable { clause: usize, var: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Output of the graph encoding: the instance plus name maps from the
/// construction's variables to CNF indices.
#[derive(Debug, Clone)]
pub struct GraphEncoding {
    pub instance: MaxModelInstance,
    /// `copy_var[i][j]` is the variable holding copy `j + 1` of vertex `i`.
    pub copy_var: Vec<Vec<usize>>,
    /// `parity_var[i]` tracks the parity of the selection among the first
    /// `i + 1` vertices; the last one is the distinguished variable.
    pub parity_var: Vec<usize>,
}

/// Encodes "does some maximum independent set of `g` have odd size" as a
/// Max Model instance satisfied by the all-false assignment.
///
/// Clause order: per-vertex copy-consistency implications (ordered pairs
/// `j != k`), then per-edge exclusions (edges sorted, all copy pairs), then
/// the parity chain: two clauses tying the first parity bit to the first
/// copy of vertex 0, then four clauses per later vertex encoding the XOR
/// update.
pub fn graph_to_maxmodel(g: &Graph) -> Result<GraphEncoding, PipelineError> {
    let n = g.n();
    if n == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    let copies = n + 1;
    let copy_var: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..copies).map(|j| i * copies + j + 1).collect())
        .collect();
    let parity_var: Vec<usize> = (0..n).map(|i| n * copies + i + 1).collect();
    let num_vars = n * copies + n;

    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for x in &copy_var {
        for j in 0..copies {
            for k in 0..copies {
                if j != k {
                    clauses.push(vec![-(x[j] as i32), x[k] as i32]);
                }
            }
        }
    }
    for &(a, b) in g.edges() {
        for j in 0..copies {
            for k in 0..copies {
                clauses.push(vec![
                    -(copy_var[a as usize][j] as i32),
                    -(copy_var[b as usize][k] as i32),
                ]);
            }
        }
    }
    // Parity chain. y_0 mirrors the first copy of vertex 0; afterwards each
    // bit is the previous one xor the vertex's first copy.
    let y0 = parity_var[0] as i32;
    let x0 = copy_var[0][0] as i32;
    clauses.push(vec![-y0, x0]);
    clauses.push(vec![y0, -x0]);
    for i in 1..n {
        let y = parity_var[i] as i32;
        let p = parity_var[i - 1] as i32;
        let x = copy_var[i][0] as i32;
        clauses.push(vec![-y, p, x]);
        clauses.push(vec![-y, -p, -x]);
        clauses.push(vec![y, -p, x]);
        clauses.push(vec![y, p, -x]);
    }

    let cnf = Cnf::new(num_vars, clauses)?;
    let instance = MaxModelInstance::new(cnf, parity_var[n - 1])?;
    Ok(GraphEncoding {
        instance,
        copy_var,
        parity_var,
    })
}

/// Output of the clause-splitting restriction.
#[derive(Debug, Clone)]
pub struct RestrictedEncoding {
    pub pcnf: PartitionedCnf,
    /// `copy_var[i][j]` is the variable holding copy `j + 1` of input
    /// variable `i + 1`.
    pub copy_var: Vec<Vec<usize>>,
    /// For each left clause, in order, the index of the input clause it
    /// came from.
    pub origin: Vec<usize>,
}

/// Splits an instance into the left/right restricted form over `n * m`
/// copy variables.
///
/// Right clauses first: for each variable, the implication chain over its
/// copies followed by the cycle-closing clause (dropped entirely when
/// `m == 1`, where it would be a tautology). Then the left clauses in input
/// order. The distinguished variable becomes copy 1 of the input's.
pub fn maxmodel_to_restricted(
    inst: &MaxModelInstance,
) -> Result<RestrictedEncoding, PipelineError> {
    let cnf = inst.cnf();
    let n = cnf.num_vars();
    let m = cnf.num_clauses();
    if m == 0 {
        return Err(PipelineError::NoClauses);
    }
    for (ci, clause) in cnf.clauses().iter().enumerate() {
        for (a, &la) in clause.iter().enumerate() {
            for &lb in &clause[a + 1..] {
                if la.unsigned_abs() == lb.unsigned_abs() {
                    return Err(PipelineError::DuplicateVariable {
                        clause: ci,
                        var: la.unsigned_abs() as usize,
                    });
                }
            }
        }
    }

    let copy_var: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..m).map(|j| i * m + j + 1).collect())
        .collect();

    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut sides: Vec<ClauseSide> = Vec::new();
    if m > 1 {
        for x in &copy_var {
            for j in 0..m - 1 {
                clauses.push(vec![-(x[j] as i32), x[j + 1] as i32]);
                sides.push(ClauseSide::Right);
            }
            clauses.push(vec![-(x[m - 1] as i32), x[0] as i32]);
            sides.push(ClauseSide::Right);
        }
    }
    let mut origin = Vec::with_capacity(m);
    for (j, clause) in cnf.clauses().iter().enumerate() {
        let rewritten: Vec<i32> = clause
            .iter()
            .map(|&lit| {
                let copy = copy_var[lit.unsigned_abs() as usize - 1][j] as i32;
                if lit > 0 {
                    copy
                } else {
                    -copy
                }
            })
            .collect();
        clauses.push(rewritten);
        sides.push(ClauseSide::Left);
        origin.push(j);
    }

    let out_cnf = Cnf::new(n * m, clauses)?;
    let out_dvar = copy_var[inst.dvar() - 1][0];
    let out_inst = MaxModelInstance::new(out_cnf, out_dvar)?;
    let pcnf = PartitionedCnf::new(out_inst, sides)?;
    Ok(RestrictedEncoding {
        pcnf,
        copy_var,
        origin,
    })
}

/// Renames variables so the distinguished one becomes the last (index `n`),
/// keeping the relative order of all others and the clause list unchanged.
/// Returns the renamed instance and the old-to-new variable map.
pub fn reindex_dvar_last(inst: &MaxModelInstance) -> (MaxModelInstance, Vec<usize>) {
    let n = inst.cnf().num_vars();
    let dvar = inst.dvar();
    let mut map = vec![0usize; n + 1];
    for (v, slot) in map.iter_mut().enumerate().skip(1) {
        *slot = match v.cmp(&dvar) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => n,
            std::cmp::Ordering::Greater => v - 1,
        };
    }
    let clauses: Vec<Vec<i32>> = inst
        .cnf()
        .clauses()
        .iter()
        .map(|clause| {
            clause
                .iter()
                .map(|&lit| {
                    let renamed = map[lit.unsigned_abs() as usize] as i32;
                    if lit > 0 {
                        renamed
                    } else {
                        -renamed
                    }
                })
                .collect()
        })
        .collect();
    let cnf = Cnf::new(n, clauses).expect("renaming preserves validity");
    let renamed = MaxModelInstance::new(cnf, n).expect("renaming preserves the all-false model");
    (renamed, map)
}

/// [`reindex_dvar_last`] lifted to a partitioned instance; side tags are
/// untouched (renaming variables cannot break the occurrence limits).
pub fn reindex_pcnf_dvar_last(pcnf: &PartitionedCnf) -> (PartitionedCnf, Vec<usize>) {
    let (inst, map) = reindex_dvar_last(pcnf.instance());
    let out = PartitionedCnf::new(inst, pcnf.sides().to_vec())
        .expect("renaming preserves the side invariants");
    (out, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{evaluate, max_independent_set_parity, max_model_decide, Assignment};

    #[test]
    fn one_vertex_graph_encoding_is_exact() {
        let g = Graph::new(1, &[]).unwrap();
        let enc = graph_to_maxmodel(&g).unwrap();
        let cnf = enc.instance.cnf();
        assert_eq!(cnf.num_vars(), 3);
        assert_eq!(
            cnf.clauses(),
            &[vec![-1, 2], vec![-2, 1], vec![-3, 1], vec![3, -1]]
        );
        assert_eq!(enc.instance.dvar(), 3);
        // All-true satisfies it too.
        assert!(evaluate(cnf, &Assignment::new(vec![true; 3])).unwrap());
        let v = max_model_decide(&enc.instance).unwrap();
        assert!(v.dvar_true_at_max);
    }

    #[test]
    fn k2_encoding_counts() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let enc = graph_to_maxmodel(&g).unwrap();
        let cnf = enc.instance.cnf();
        assert_eq!(cnf.num_vars(), 8);
        // 2 vertices * 3 * 2 implications + 9 exclusions + 2 + 4 parity.
        assert_eq!(cnf.num_clauses(), 27);
        let v = max_model_decide(&enc.instance).unwrap();
        assert!(
            v.dvar_true_at_max,
            "max independent set of K2 has size 1, odd"
        );
    }

    #[test]
    fn empty_two_vertex_graph_decides_false() {
        let g = Graph::new(2, &[]).unwrap();
        let enc = graph_to_maxmodel(&g).unwrap();
        let v = max_model_decide(&enc.instance).unwrap();
        assert!(!v.dvar_true_at_max, "max independent set has size 2, even");
    }

    #[test]
    fn graph_encoding_matches_parity_oracle_exhaustively() {
        // Every graph on up to 3 vertices.
        for n in 1..=3usize {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|a| ((a + 1)..n as u32).map(move |b| (a, b)))
                .collect();
            for mask in 0..(1u32 << pairs.len()) {
                let edges: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                let enc = graph_to_maxmodel(&g).unwrap();
                let verdict = max_model_decide(&enc.instance).unwrap();
                let parity = max_independent_set_parity(&g).unwrap();
                assert_eq!(verdict.dvar_true_at_max, parity.odd, "n={n} mask={mask}");
            }
        }
    }

    fn inst(num_vars: usize, clauses: &[&[i32]], dvar: usize) -> MaxModelInstance {
        let cnf = Cnf::new(num_vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap();
        MaxModelInstance::new(cnf, dvar).unwrap()
    }

    #[test]
    fn restriction_two_clause_example() {
        let enc = maxmodel_to_restricted(&inst(2, &[&[-1, 2], &[-2]], 2)).unwrap();
        let cnf = enc.pcnf.instance().cnf();
        assert_eq!(cnf.num_vars(), 4);
        assert_eq!(
            cnf.clauses(),
            &[
                vec![-1, 2],
                vec![-2, 1],
                vec![-3, 4],
                vec![-4, 3],
                vec![-1, 3],
                vec![-4],
            ]
        );
        use ClauseSide::{Left, Right};
        assert_eq!(enc.pcnf.sides(), &[Right, Right, Right, Right, Left, Left]);
        assert_eq!(enc.pcnf.instance().dvar(), 3);
        assert_eq!(enc.origin, vec![0, 1]);

        let vin = max_model_decide(&inst(2, &[&[-1, 2], &[-2]], 2)).unwrap();
        let vout = max_model_decide(enc.pcnf.instance()).unwrap();
        assert_eq!(vin.dvar_true_at_max, vout.dvar_true_at_max);
        assert_eq!(vout.max_weight, 2 * vin.max_weight);
    }

    #[test]
    fn restriction_single_clause_drops_cycle() {
        let enc = maxmodel_to_restricted(&inst(2, &[&[-1, 2]], 2)).unwrap();
        let cnf = enc.pcnf.instance().cnf();
        assert_eq!(cnf.num_vars(), 2);
        assert_eq!(cnf.clauses(), &[vec![-1, 2]]);
        assert_eq!(enc.pcnf.sides(), &[ClauseSide::Left]);
        let vout = max_model_decide(enc.pcnf.instance()).unwrap();
        assert!(vout.dvar_true_at_max);
        assert_eq!(vout.max_weight, 2);
    }

    #[test]
    fn restriction_rejects_duplicate_variables() {
        let cnf = Cnf::new(2, vec![vec![-1, 1, 2]]).unwrap();
        let inst = MaxModelInstance::new(cnf, 2).unwrap();
        assert_eq!(
            maxmodel_to_restricted(&inst).unwrap_err(),
            PipelineError::DuplicateVariable { clause: 0, var: 1 }
        );
    }

    #[test]
    fn restriction_weight_scaling_randomized() {
        let mut rng = crate::rng::SplitMix64::new(23);
        for _ in 0..60 {
            let input = crate::verify::random_all_false_instance(&mut rng, 4, 4);
            let m = input.cnf().num_clauses() as u32;
            let enc = maxmodel_to_restricted(&input).unwrap();
            let vin = max_model_decide(&input).unwrap();
            let vout = max_model_decide(enc.pcnf.instance()).unwrap();
            assert_eq!(vin.dvar_true_at_max, vout.dvar_true_at_max);
            assert_eq!(vout.max_weight, m * vin.max_weight);
        }
    }

    #[test]
    fn reindex_moves_dvar_last() {
        let original = inst(3, &[&[-2, 3], &[-1]], 2);
        let (renamed, map) = reindex_dvar_last(&original);
        assert_eq!(renamed.dvar(), 3);
        assert_eq!(map[2], 3);
        assert_eq!(map[1], 1);
        assert_eq!(map[3], 2);
        assert_eq!(renamed.cnf().clauses(), &[vec![-3, 2], vec![-1]]);
        let a = max_model_decide(&original).unwrap();
        let b = max_model_decide(&renamed).unwrap();
        assert_eq!(a.max_weight, b.max_weight);
        assert_eq!(a.dvar_true_at_max, b.dvar_true_at_max);
    }
}
