//! Exact minimum feedback arc set and Slater computations.
//!
//! Two exact engines are provided: a permutation brute force used as the
//! testing oracle, and a subset DP over vertex sets. The DP builds orders
//! left to right; placing `x` last within a chosen set `S` adds the weight
//! of the arcs from `x` into `S \ {x}` (exactly the arcs that end up
//! backward). Both engines break ties toward the lexicographically smallest
//! optimal permutation so results are reproducible.
//!
//! The Slater score of `v` is the minimum implied feedback arc set over
//! orderings placing `v` last; `v` is a Slater winner when its score equals
//! the tournament's minimum feedback arc set. With a module partition whose
//! classes are internally transitive, scores are computed on the weighted
//! quotient: constrain `v`'s class to be last and add the internal cost
//! `k - 1 - r` of forcing `v` last inside its class of size `k`, where `r`
//! is `v`'s rank in the class's transitive order. A vertex is a winner
//! exactly when this constrained value meets the unconstrained quotient
//! optimum: winners always admit a module-contiguous winning ordering, so
//! the decision is exact, even though for non-winners the constrained value
//! can exceed the true score.

use thiserror::Error;

use crate::modules::{verify_modules, ModuleError, ModulePartition, WeightedDigraph};
use crate::tournament::{LinearOrder, Tournament};

/// Node-count cap for [`min_fas_bruteforce`].
pub const BRUTE_FORCE_CAP: usize = 10;
/// Node-count cap for the subset DP (table memory doubles per node).
pub const SUBSET_DP_CAP: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{nodes} nodes exceeds the cap of {cap} for this solver")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error(transparent)]
    Modules(#[from] ModuleError),
    #[error("class {0} does not induce a transitive subtournament")]
    NontransitiveClass(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    BruteForce,
    SubsetDp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Minimum (weighted) feedback arc set size.
    pub value: u64,
    /// One optimal ordering; the lexicographically smallest among optimal
    /// ones, restricted to the forced-last constraint when one was given.
    pub order: LinearOrder,
    pub method: SolveMethod,
}

/// Minimum weighted feedback arc set by enumerating all permutations in
/// lexicographic order, keeping the first optimum.
pub fn min_fas_bruteforce(g: &WeightedDigraph) -> Result<SolveResult, SolveError> {
    min_fas_bruteforce_capped(g, BRUTE_FORCE_CAP)
}

pub fn min_fas_bruteforce_capped(
    g: &WeightedDigraph,
    cap: usize,
) -> Result<SolveResult, SolveError> {
    let k = g.k();
    if k > cap {
        return Err(SolveError::CapExceeded { nodes: k, cap });
    }
    let mut perm: Vec<u32> = (0..k as u32).collect();
    let mut best: Option<(u64, Vec<u32>)> = None;
    loop {
        let ord = LinearOrder::new(perm.clone(), k).expect("permutation");
        let cost = g.fas_weight_of_ordering(&ord);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (value, seq) = best.expect("at least the empty permutation");
    Ok(SolveResult {
        value,
        order: LinearOrder::new(seq, k).expect("permutation"),
        method: SolveMethod::BruteForce,
    })
}

/// Convenience wrapper treating a tournament as a unit-weight digraph.
pub fn min_fas_bruteforce_tournament(t: &Tournament) -> Result<SolveResult, SolveError> {
    min_fas_bruteforce(&WeightedDigraph::from_tournament(t))
}

/// Brute force restricted to orderings placing `last` last.
pub fn min_fas_bruteforce_forced(
    g: &WeightedDigraph,
    last: usize,
) -> Result<SolveResult, SolveError> {
    let k = g.k();
    if k > BRUTE_FORCE_CAP {
        return Err(SolveError::CapExceeded {
            nodes: k,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if last >= k {
        return Err(SolveError::NodeOutOfRange(last));
    }
    let mut perm: Vec<u32> = (0..k as u32).filter(|&v| v != last as u32).collect();
    let mut best: Option<(u64, Vec<u32>)> = None;
    loop {
        let mut seq = perm.clone();
        seq.push(last as u32);
        let ord = LinearOrder::new(seq.clone(), k).expect("permutation");
        let cost = g.fas_weight_of_ordering(&ord);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, seq));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (value, seq) = best.expect("at least one ordering");
    Ok(SolveResult {
        value,
        order: LinearOrder::new(seq, k).expect("permutation"),
        method: SolveMethod::BruteForce,
    })
}

fn next_permutation(perm: &mut [u32]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Subset DP table: `cost[s]` is the minimum weight of backward arcs among
/// orderings of the vertex set `s`, counting only arcs with both ends in
/// `s` (arcs crossing a prefix/suffix split have fixed status, so the table
/// answers both prefix and suffix queries).
pub struct FasTable {
    k: usize,
    w: Vec<u64>,
    cost: Vec<u64>,
}

impl FasTable {
    pub fn build(g: &WeightedDigraph) -> Result<Self, SolveError> {
        Self::build_capped(g, SUBSET_DP_CAP)
    }

    pub fn build_capped(g: &WeightedDigraph, cap: usize) -> Result<Self, SolveError> {
        let k = g.k();
        if k > cap || k >= usize::BITS as usize {
            return Err(SolveError::CapExceeded { nodes: k, cap });
        }
        let mut w = vec![0u64; k * k];
        for u in 0..k {
            for v in 0..k {
                if u != v {
                    w[u * k + v] = g.weight(u, v);
                }
            }
        }
        let mut cost = vec![0u64; 1usize << k];
        for s in 1..(1usize << k) {
            let mut best = u64::MAX;
            let mut members = s;
            while members != 0 {
                let x = members.trailing_zeros() as usize;
                members &= members - 1;
                let rest = s & !(1 << x);
                // Arcs from x into the vertices placed before it.
                let mut add = 0u64;
                let mut others = rest;
                while others != 0 {
                    let y = others.trailing_zeros() as usize;
                    others &= others - 1;
                    add += w[x * k + y];
                }
                let cand = cost[rest] + add;
                if cand < best {
                    best = cand;
                }
            }
            cost[s] = best;
        }
        Ok(FasTable { k, w, cost })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn full(&self) -> usize {
        (1usize << self.k) - 1
    }

    /// Minimum weighted feedback arc set of the whole digraph.
    pub fn min_fas(&self) -> u64 {
        self.cost[self.full()]
    }

    /// Minimum over orderings placing `x` last: arcs out of `x` all become
    /// backward, the rest is the optimum on the remaining set.
    pub fn min_fas_with_last(&self, x: usize) -> u64 {
        let rest = self.full() & !(1 << x);
        self.cost[rest] + self.out_weight(x, rest)
    }

    fn out_weight(&self, x: usize, set: usize) -> u64 {
        let mut total = 0;
        let mut others = set;
        while others != 0 {
            let y = others.trailing_zeros() as usize;
            others &= others - 1;
            total += self.w[x * self.k + y];
        }
        total
    }

    fn in_weight(&self, x: usize, set: usize) -> u64 {
        let mut total = 0;
        let mut others = set;
        while others != 0 {
            let y = others.trailing_zeros() as usize;
            others &= others - 1;
            total += self.w[y * self.k + x];
        }
        total
    }

    /// Reconstructs the lexicographically smallest optimal ordering of the
    /// vertex set `s` by choosing the earliest feasible front element:
    /// placing `v` first makes exactly the arcs into `v` backward.
    fn reconstruct(&self, mut s: usize, out: &mut Vec<u32>) {
        while s != 0 {
            let mut members = s;
            while members != 0 {
                let v = members.trailing_zeros() as usize;
                members &= members - 1;
                let rest = s & !(1 << v);
                if self.in_weight(v, rest) + self.cost[rest] == self.cost[s] {
                    out.push(v as u32);
                    s = rest;
                    break;
                }
            }
        }
    }
}

/// Minimum weighted feedback arc set via the subset DP; with `forced_last`
/// the minimum is over orderings placing that node last.
pub fn min_fas_dp(
    g: &WeightedDigraph,
    forced_last: Option<usize>,
) -> Result<SolveResult, SolveError> {
    min_fas_dp_capped(g, forced_last, SUBSET_DP_CAP)
}

pub fn min_fas_dp_capped(
    g: &WeightedDigraph,
    forced_last: Option<usize>,
    cap: usize,
) -> Result<SolveResult, SolveError> {
    if let Some(x) = forced_last {
        if x >= g.k() {
            return Err(SolveError::NodeOutOfRange(x));
        }
    }
    let table = FasTable::build_capped(g, cap)?;
    let mut seq = Vec::with_capacity(table.k());
    let value = match forced_last {
        None => {
            table.reconstruct(table.full(), &mut seq);
            table.min_fas()
        }
        Some(x) => {
            table.reconstruct(table.full() & !(1 << x), &mut seq);
            seq.push(x as u32);
            table.min_fas_with_last(x)
        }
    };
    Ok(SolveResult {
        value,
        order: LinearOrder::new(seq, g.k()).expect("permutation"),
        method: SolveMethod::SubsetDp,
    })
}

/// Per-vertex Slater data computed from one DP pass.
struct SlaterContext {
    /// Quotient (or unit) DP table.
    table: FasTable,
    /// For each vertex: its class index and the internal cost of forcing it
    /// last within its class.
    vertex_class: Vec<usize>,
    vertex_internal_cost: Vec<u64>,
}

impl SlaterContext {
    fn plain(t: &Tournament) -> Result<Self, SolveError> {
        let table = FasTable::build(&WeightedDigraph::from_tournament(t))?;
        Ok(SlaterContext {
            table,
            vertex_class: (0..t.n()).collect(),
            vertex_internal_cost: vec![0; t.n()],
        })
    }

    /// Quotient route: requires every class to induce a transitive
    /// subtournament, so internal minimum costs are zero and the internal
    /// cost of forcing `v` last in its size-`k` class at transitive rank
    /// `r` is `k - 1 - r`.
    fn with_modules(t: &Tournament, mp: &ModulePartition) -> Result<Self, SolveError> {
        verify_modules(t, mp)?;
        let k = mp.len();
        let mut g = WeightedDigraph::new(k);
        for i in 0..k {
            for j in (i + 1)..k {
                let weight = (mp.class(i).len() * mp.class(j).len()) as u64;
                if t.arc(mp.class(i)[0], mp.class(j)[0]) {
                    g.set_weight(i, j, weight);
                } else {
                    g.set_weight(j, i, weight);
                }
            }
        }
        let mut vertex_class = vec![0usize; t.n()];
        let mut vertex_internal_cost = vec![0u64; t.n()];
        for (ci, class) in mp.classes().iter().enumerate() {
            let sub = t.induced(class);
            let order = sub
                .transitive_order()
                .ok_or(SolveError::NontransitiveClass(ci))?;
            for (rank, &local) in order.as_slice().iter().enumerate() {
                let v = class[local as usize];
                vertex_class[v as usize] = ci;
                vertex_internal_cost[v as usize] = (class.len() - 1 - rank) as u64;
            }
        }
        let table = FasTable::build(&g)?;
        Ok(SlaterContext {
            table,
            vertex_class,
            vertex_internal_cost,
        })
    }

    fn score(&self, v: u32) -> u64 {
        self.table.min_fas_with_last(self.vertex_class[v as usize])
            + self.vertex_internal_cost[v as usize]
    }

    fn min_fas(&self) -> u64 {
        self.table.min_fas()
    }
}

fn context(t: &Tournament, mp: Option<&ModulePartition>) -> Result<SlaterContext, SolveError> {
    match mp {
        None => SlaterContext::plain(t),
        Some(mp) => SlaterContext::with_modules(t, mp),
    }
}

/// Per-vertex Slater scores and the minimum feedback arc set from a single
/// DP pass; winners are the vertices whose score equals `min_fas`.
#[derive(Debug, Clone)]
pub struct SlaterAnalysis {
    pub scores: Vec<u64>,
    pub min_fas: u64,
}

impl SlaterAnalysis {
    pub fn winners(&self) -> Vec<u32> {
        (0..self.scores.len() as u32)
            .filter(|&v| self.scores[v as usize] == self.min_fas)
            .collect()
    }
}

pub fn slater_analyze(
    t: &Tournament,
    mp: Option<&ModulePartition>,
) -> Result<SlaterAnalysis, SolveError> {
    let ctx = context(t, mp)?;
    Ok(SlaterAnalysis {
        scores: (0..t.n() as u32).map(|v| ctx.score(v)).collect(),
        min_fas: ctx.min_fas(),
    })
}

/// Minimum feedback arc set over orderings placing `v` last.
pub fn slater_score(
    t: &Tournament,
    v: u32,
    mp: Option<&ModulePartition>,
) -> Result<u64, SolveError> {
    if v as usize >= t.n() {
        return Err(SolveError::VertexOutOfRange(v));
    }
    Ok(context(t, mp)?.score(v))
}

/// All per-vertex Slater scores from a single DP pass.
pub fn slater_scores(t: &Tournament, mp: Option<&ModulePartition>) -> Result<Vec<u64>, SolveError> {
    let ctx = context(t, mp)?;
    Ok((0..t.n() as u32).map(|v| ctx.score(v)).collect())
}

/// All vertices whose Slater score equals the tournament's minimum feedback
/// arc set, along with that common score. Never empty.
pub fn slater_winners(
    t: &Tournament,
    mp: Option<&ModulePartition>,
) -> Result<(Vec<u32>, u64), SolveError> {
    let ctx = context(t, mp)?;
    let min = ctx.min_fas();
    let winners: Vec<u32> = (0..t.n() as u32).filter(|&v| ctx.score(v) == min).collect();
    debug_assert!(!winners.is_empty());
    Ok((winners, min))
}

pub fn is_slater_winner(
    t: &Tournament,
    v: u32,
    mp: Option<&ModulePartition>,
) -> Result<bool, SolveError> {
    if v as usize >= t.n() {
        return Err(SolveError::VertexOutOfRange(v));
    }
    let ctx = context(t, mp)?;
    Ok(ctx.score(v) == ctx.min_fas())
}

/// One rewrite step of [`contiguize`]: a same-class pair `x < y` in distinct
/// blocks with the gap `Z` between them, the shared per-vertex degrees of
/// the class toward `Z`, and the exact cost deltas of the two candidate
/// block moves. At least one of the deltas is never positive.
#[derive(Debug, Clone)]
pub struct BlockMove {
    pub class: usize,
    pub x: u32,
    pub y: u32,
    pub gap: Vec<u32>,
    pub din_gap: u64,
    pub dout_gap: u64,
    /// Cost change of moving x's whole block to just after the gap.
    pub delta_shift_x: i64,
    /// Cost change of moving y's whole block to just before the gap.
    pub delta_shift_y: i64,
    /// Delta of the move actually applied.
    pub delta: i64,
}

/// Rewrites `ord` so every class of `mp` is contiguous, without ever
/// increasing the implied feedback arc set.
///
/// Repeatedly pick the same-class pair `x` before `y` in distinct blocks
/// minimizing the gap `Z` between them (ties: smallest `x`, then smallest
/// `y`). All class members share their in/out degree toward `Z`, so moving
/// x's block to just after `Z` changes the cost by `|X| * (dout - din)` and
/// moving y's block to just before `Z` by `|Y| * (din - dout)`; apply the
/// cheaper move (ties: x's block). Each step fuses the two blocks, so the
/// block count strictly decreases.
pub fn contiguize(
    t: &Tournament,
    mp: &ModulePartition,
    ord: &LinearOrder,
) -> Result<LinearOrder, SolveError> {
    contiguize_with_trace(t, mp, ord).map(|(ord, _)| ord)
}

pub fn contiguize_with_trace(
    t: &Tournament,
    mp: &ModulePartition,
    ord: &LinearOrder,
) -> Result<(LinearOrder, Vec<BlockMove>), SolveError> {
    verify_modules(t, mp)?;
    if ord.len() != t.n() {
        return Err(SolveError::VertexOutOfRange(ord.len() as u32));
    }
    let class_map = mp.class_map();
    let mut seq: Vec<u32> = ord.as_slice().to_vec();
    let mut trace = Vec::new();

    loop {
        // Maximal runs of same-class vertices.
        let mut blocks: Vec<(usize, usize)> = Vec::new(); // (start, end) positions
        let mut start = 0;
        for i in 1..=seq.len() {
            if i == seq.len() || class_map[seq[i] as usize] != class_map[seq[start] as usize] {
                blocks.push((start, i));
                start = i;
            }
        }
        if blocks.len() == mp.len() {
            break;
        }

        // Closest split pair: consecutive blocks of the same class.
        let mut choice: Option<(usize, u32, u32, usize, usize)> = None; // (|Z|, x, y, bx, by)
        for (bi, &(bs, be)) in blocks.iter().enumerate() {
            let class = class_map[seq[bs] as usize];
            for (bj, &(cs, _)) in blocks.iter().enumerate().skip(bi + 1) {
                if class_map[seq[cs] as usize] != class {
                    continue;
                }
                let x = seq[be - 1];
                let y = seq[cs];
                let gap_len = cs - be;
                let cand = (gap_len, x, y, bi, bj);
                if choice.is_none_or(|c| (cand.0, cand.1, cand.2) < (c.0, c.1, c.2)) {
                    choice = Some(cand);
                }
                break; // only the nearest following block of this class matters
            }
        }
        let (_, x, y, bx, by) = choice.expect("a split class exists while blocks > classes");
        let (xs, xe) = blocks[bx];
        let (ys, ye) = blocks[by];
        let gap: Vec<u32> = seq[xe..ys].to_vec();

        let mut dout = 0u64; // arcs x -> z
        let mut din = 0u64; // arcs z -> x
        for &z in &gap {
            if t.arc(x, z) {
                dout += 1;
            } else {
                din += 1;
            }
        }
        let x_len = (xe - xs) as i64;
        let y_len = (ye - ys) as i64;
        let delta_shift_x = x_len * (dout as i64 - din as i64);
        let delta_shift_y = y_len * (din as i64 - dout as i64);

        let mut next = Vec::with_capacity(seq.len());
        let applied;
        if delta_shift_x <= delta_shift_y {
            applied = delta_shift_x;
            // X slides to just after the gap: prefix, gap, X, Y, rest.
            next.extend_from_slice(&seq[..xs]);
            next.extend_from_slice(&seq[xe..ys]);
            next.extend_from_slice(&seq[xs..xe]);
            next.extend_from_slice(&seq[ys..]);
        } else {
            applied = delta_shift_y;
            // Y slides to just before the gap: prefix, X, Y, gap, rest.
            next.extend_from_slice(&seq[..xe]);
            next.extend_from_slice(&seq[ys..ye]);
            next.extend_from_slice(&seq[xe..ys]);
            next.extend_from_slice(&seq[ye..]);
        }
        trace.push(BlockMove {
            class: class_map[x as usize],
            x,
            y,
            gap,
            din_gap: din,
            dout_gap: dout,
            delta_shift_x,
            delta_shift_y,
            delta: applied,
        });
        seq = next;
    }

    let out = LinearOrder::new(seq, t.n()).expect("rearranged permutation");
    Ok((out, trace))
}

/// True iff every class of `mp` occupies consecutive positions in `ord`.
pub fn is_contiguous(mp: &ModulePartition, ord: &LinearOrder) -> bool {
    let class_map = mp.class_map();
    let mut seen = vec![false; mp.len()];
    let mut prev = usize::MAX;
    for &v in ord.as_slice() {
        let c = class_map[v as usize];
        if c != prev {
            if seen[c] {
                return false;
            }
            seen[c] = true;
            prev = c;
        }
    }
    true
}
