//! Module partitions and quotient digraphs.
//!
//! A module is a vertex set whose members look identical from outside: every
//! external vertex either beats all of the module or loses to all of it.
//! When a tournament is partitioned into modules, any module-contiguous
//! ordering decomposes its feedback arc set into a weighted quotient part
//! (arc weight = product of the two module sizes) plus per-module internal
//! parts, which is what the solver exploits.

use thiserror::Error;

use crate::solver;
use crate::tournament::{LinearOrder, Tournament};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("vertex {0} appears in more than one class")]
    Overlap(u32),
    #[error("vertex {0} is not covered by any class")]
    Gap(u32),
    #[error("vertex {0} out of range for {1} candidates")]
    OutOfRange(u32, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("partition is over {partition} candidates but tournament has {tournament}")]
    SizeMismatch { partition: usize, tournament: usize },
    /// `x, y` are in the same class but `z` distinguishes them.
    #[error("class members {x} and {y} disagree about outside vertex {z}")]
    Violation { x: u32, y: u32, z: u32 },
}

/// A partition of `0..n` into nonempty classes. Whether each class is in
/// fact a module of a given tournament is checked by [`verify_modules`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePartition {
    n: usize,
    classes: Vec<Vec<u32>>,
}

impl ModulePartition {
    /// Validates disjointness and coverage; members of each class are kept
    /// sorted, class order is preserved as given.
    pub fn new(n: usize, classes: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        let mut owner = vec![usize::MAX; n];
        for (ci, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(PartitionError::EmptyClass(ci));
            }
            for &v in class {
                if v as usize >= n {
                    return Err(PartitionError::OutOfRange(v, n));
                }
                if owner[v as usize] != usize::MAX {
                    return Err(PartitionError::Overlap(v));
                }
                owner[v as usize] = ci;
            }
        }
        if let Some(v) = owner.iter().position(|&c| c == usize::MAX) {
            return Err(PartitionError::Gap(v as u32));
        }
        let mut classes = classes;
        for class in &mut classes {
            class.sort_unstable();
        }
        Ok(ModulePartition { n, classes })
    }

    pub fn singletons(n: usize) -> Self {
        ModulePartition {
            n,
            classes: (0..n as u32).map(|v| vec![v]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[u32] {
        &self.classes[i]
    }

    /// `class_map()[v]` is the index of the class containing `v`.
    pub fn class_map(&self) -> Vec<usize> {
        let mut map = vec![0usize; self.n];
        for (ci, class) in self.classes.iter().enumerate() {
            for &v in class {
                map[v as usize] = ci;
            }
        }
        map
    }
}

/// Checks that every class of `mp` is a module of `t`, reporting the first
/// violating triple `(x, y, z)` in class order otherwise.
pub fn verify_modules(t: &Tournament, mp: &ModulePartition) -> Result<(), ModuleError> {
    if mp.n() != t.n() {
        return Err(ModuleError::SizeMismatch {
            partition: mp.n(),
            tournament: t.n(),
        });
    }
    let class_map = mp.class_map();
    for class in mp.classes() {
        let x = class[0];
        for &y in &class[1..] {
            for z in 0..t.n() as u32 {
                if class_map[z as usize] == class_map[x as usize] {
                    continue;
                }
                if t.arc(x, z) != t.arc(y, z) {
                    return Err(ModuleError::Violation { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// Digraph with nonnegative integer arc weights; zero weight means no arc.
/// Antiparallel arc pairs are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    k: usize,
    w: Vec<u64>,
}

impl WeightedDigraph {
    pub fn new(k: usize) -> Self {
        WeightedDigraph {
            k,
            w: vec![0; k * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        self.w[u * self.k + v]
    }

    /// Sets the weight of `u -> v`; self-loops are rejected.
    pub fn set_weight(&mut self, u: usize, v: usize, weight: u64) {
        assert!(u != v, "self-loop");
        self.w[u * self.k + v] = weight;
    }

    /// Unit-weight digraph mirroring a tournament's arcs; equals the
    /// quotient by the singleton partition.
    pub fn from_tournament(t: &Tournament) -> Self {
        let mut g = WeightedDigraph::new(t.n());
        for (u, v) in t.arcs() {
            g.set_weight(u as usize, v as usize, 1);
        }
        g
    }

    /// Total weight of arcs whose head precedes their tail in `ord`.
    pub fn fas_weight_of_ordering(&self, ord: &LinearOrder) -> u64 {
        assert_eq!(ord.len(), self.k);
        let pos = ord.positions();
        let mut total = 0u64;
        for u in 0..self.k {
            for v in 0..self.k {
                if u != v && pos[v] < pos[u] {
                    total += self.weight(u, v);
                }
            }
        }
        total
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error(transparent)]
    Modules(#[from] ModuleError),
    #[error("class {class} of size {size} is not transitive and exceeds the internal solver cap")]
    InternalTooLarge { class: usize, size: usize },
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub digraph: WeightedDigraph,
    /// Minimum feedback arc set size inside each class; zero for transitive
    /// classes.
    pub internal_min_fas: Vec<u64>,
}

/// Contracts each class to one node. The arc `i -> j` gets weight
/// `|M_i| * |M_j|` when all arcs point from class `i` to class `j` (the
/// module property makes the direction uniform per class pair).
pub fn quotient(t: &Tournament, mp: &ModulePartition) -> Result<Quotient, QuotientError> {
    verify_modules(t, mp)?;
    let k = mp.len();
    let mut digraph = WeightedDigraph::new(k);
    for i in 0..k {
        for j in (i + 1)..k {
            let u = mp.class(i)[0];
            let v = mp.class(j)[0];
            let weight = (mp.class(i).len() * mp.class(j).len()) as u64;
            if t.arc(u, v) {
                digraph.set_weight(i, j, weight);
            } else {
                digraph.set_weight(j, i, weight);
            }
        }
    }
    let mut internal_min_fas = Vec::with_capacity(k);
    for (ci, class) in mp.classes().iter().enumerate() {
        let sub = t.induced(class);
        if sub.is_transitive() {
            internal_min_fas.push(0);
        } else if sub.n() <= solver::SUBSET_DP_CAP {
            let unit = WeightedDigraph::from_tournament(&sub);
            let res = solver::min_fas_dp(&unit, None).expect("class size within the subset DP cap");
            internal_min_fas.push(res.value);
        } else {
            return Err(QuotientError::InternalTooLarge {
                class: ci,
                size: sub.n(),
            });
        }
    }
    Ok(Quotient {
        digraph,
        internal_min_fas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::three_cycle;

    #[test]
    fn singleton_partition_always_modules() {
        let t = three_cycle();
        let mp = ModulePartition::singletons(3);
        assert!(verify_modules(&t, &mp).is_ok());
    }

    #[test]
    fn whole_set_partition_is_a_module() {
        let t = three_cycle();
        let mp = ModulePartition::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(verify_modules(&t, &mp).is_ok());
    }

    #[test]
    fn three_cycle_pair_class_violates() {
        let t = three_cycle();
        let mp = ModulePartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(
            verify_modules(&t, &mp).unwrap_err(),
            ModuleError::Violation { x: 0, y: 1, z: 2 }
        );
    }

    #[test]
    fn partition_validation() {
        assert!(ModulePartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(ModulePartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(ModulePartition::new(3, vec![vec![0, 1], vec![]]).is_err());
        assert!(ModulePartition::new(2, vec![vec![0], vec![5]]).is_err());
    }

    #[test]
    fn quotient_of_singletons_mirrors_arcs() {
        let t = three_cycle();
        let q = quotient(&t, &ModulePartition::singletons(3)).unwrap();
        assert_eq!(q.digraph.weight(0, 1), 1);
        assert_eq!(q.digraph.weight(1, 2), 1);
        assert_eq!(q.digraph.weight(2, 0), 1);
        assert_eq!(q.digraph.weight(1, 0), 0);
        assert_eq!(q.internal_min_fas, vec![0, 0, 0]);
    }

    #[test]
    fn quotient_weight_is_size_product() {
        // Transitive 5-block before transitive 3-block, all arcs forward.
        let t = Tournament::transitive(8);
        let mp = ModulePartition::new(8, vec![(0..5).collect(), (5..8).collect()]).unwrap();
        let q = quotient(&t, &mp).unwrap();
        assert_eq!(q.digraph.weight(0, 1), 15);
        assert_eq!(q.digraph.weight(1, 0), 0);
        assert_eq!(q.internal_min_fas, vec![0, 0]);
    }

    #[test]
    fn quotient_reports_internal_fas_of_cyclic_class() {
        // A 3-cycle inside a class, with one external vertex beating it.
        let t = Tournament::new(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]).unwrap();
        let mp = ModulePartition::new(4, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let q = quotient(&t, &mp).unwrap();
        assert_eq!(q.digraph.weight(0, 1), 3);
        assert_eq!(q.internal_min_fas, vec![1, 0]);
    }
}
