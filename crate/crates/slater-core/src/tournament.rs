//! Tournaments, linear orders, and voter profiles.
//!
//! The arc convention is fixed once for the whole crate: candidates are the
//! dense integers `0..n`, and the arc `(u, v)` means that `v` wins against
//! `u` (arcs point loser to winner). A [`LinearOrder`] lists candidates in
//! ascending preference, so its last element is the favorite, and an arc
//! agrees with an order exactly when its tail comes earlier. The feedback
//! arc set implied by an order is the set of arcs that disagree with it.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TournamentError {
    #[error("candidate {0} out of range for {1} candidates")]
    CandidateOutOfRange(u32, usize),
    #[error("self-arc on candidate {0}")]
    SelfArc(u32),
    #[error("both arcs present between {0} and {1}")]
    BothDirections(u32, u32),
    #[error("no arc between {0} and {1}")]
    MissingPair(u32, u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("order has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("candidate {0} repeated or out of range")]
    NotAPermutation(u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile must contain at least one voter")]
    Empty,
    #[error("voter {voter}: {source}")]
    BadVoter { voter: usize, source: OrderError },
}

/// The pair named by the error is tied under the profile's majority relation.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("majority tie between candidates {0} and {1}")]
pub struct TieError(pub u32, pub u32);

/// Complete antisymmetric arc relation over `n` candidates, stored as one
/// bit row per tail vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Tournament {
    /// Builds a tournament from an explicit arc list, checking completeness
    /// and antisymmetry.
    pub fn new(n: usize, arcs: &[(u32, u32)]) -> Result<Self, TournamentError> {
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for &(u, v) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(TournamentError::CandidateOutOfRange(u.max(v), n));
            }
            if u == v {
                return Err(TournamentError::SelfArc(u));
            }
            rows[u as usize * words + (v as usize >> 6)] |= 1u64 << (v & 63);
        }
        let t = Tournament { n, words, rows };
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                match (t.arc(u, v), t.arc(v, u)) {
                    (true, true) => return Err(TournamentError::BothDirections(u, v)),
                    (false, false) => return Err(TournamentError::MissingPair(u, v)),
                    _ => {}
                }
            }
        }
        Ok(t)
    }

    /// Builds a tournament by asking, for every pair `u < v`, whether the arc
    /// points `u -> v`. Total by construction, so no validation is needed.
    pub fn from_fn(n: usize, mut arc_uv: impl FnMut(u32, u32) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                let (tail, head) = if arc_uv(u, v) { (u, v) } else { (v, u) };
                rows[tail as usize * words + (head as usize >> 6)] |= 1u64 << (head & 63);
            }
        }
        Tournament { n, words, rows }
    }

    /// The transitive tournament with arcs `(u, v)` for `u < v`; candidate
    /// `n - 1` is the sink (the winner).
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff the arc `(u, v)` is present, i.e. `v` wins against `u`.
    #[inline]
    pub fn arc(&self, u: u32, v: u32) -> bool {
        self.rows[u as usize * self.words + (v as usize >> 6)] >> (v & 63) & 1 == 1
    }

    /// All arcs, in ascending `(min, max)` pair order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            ((u + 1)..self.n as u32).map(move |v| if self.arc(u, v) { (u, v) } else { (v, u) })
        })
    }

    /// Number of candidates that beat `v`.
    pub fn losses(&self, v: u32) -> usize {
        (0..self.n as u32)
            .filter(|&u| u != v && self.arc(v, u))
            .count()
    }

    /// Number of candidates that `v` beats.
    pub fn wins(&self, v: u32) -> usize {
        (0..self.n as u32)
            .filter(|&u| u != v && self.arc(u, v))
            .count()
    }

    /// Subtournament induced by `verts`; vertex `i` of the result is
    /// `verts[i]`.
    pub fn induced(&self, verts: &[u32]) -> Tournament {
        Tournament::from_fn(verts.len(), |a, b| {
            self.arc(verts[a as usize], verts[b as usize])
        })
    }

    /// Relabels candidates: vertex `v` becomes `map[v]`.
    pub fn relabel(&self, map: &[u32]) -> Tournament {
        let mut inv = vec![0u32; self.n];
        for (old, &new) in map.iter().enumerate() {
            inv[new as usize] = old as u32;
        }
        Tournament::from_fn(self.n, |a, b| self.arc(inv[a as usize], inv[b as usize]))
    }

    /// True iff the tournament is acyclic.
    pub fn is_transitive(&self) -> bool {
        self.transitive_order().is_some()
    }

    /// The unique order implying an empty feedback arc set, if one exists.
    pub fn transitive_order(&self) -> Option<LinearOrder> {
        let mut seq: Vec<u32> = (0..self.n as u32).collect();
        seq.sort_by_key(|&v| self.wins(v));
        let ord = LinearOrder::new(seq, self.n).expect("sorted permutation");
        if fas_size_of_ordering(self, &ord).expect("order matches tournament") == 0 {
            Some(ord)
        } else {
            None
        }
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Tournament(n={}, arcs={:?})",
            self.n,
            self.arcs().collect::<Vec<_>>()
        )
    }
}

/// A permutation of `0..n` in ascending preference: position 0 is the least
/// preferred candidate and the last position is the favorite (the sink of
/// the transitive tournament the order describes).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    seq: Vec<u32>,
}

impl LinearOrder {
    pub fn new(seq: Vec<u32>, n: usize) -> Result<Self, OrderError> {
        if seq.len() != n {
            return Err(OrderError::WrongLength {
                got: seq.len(),
                expected: n,
            });
        }
        let mut seen = vec![false; n];
        for &v in &seq {
            if v as usize >= n || seen[v as usize] {
                return Err(OrderError::NotAPermutation(v));
            }
            seen[v as usize] = true;
        }
        Ok(LinearOrder { seq })
    }

    pub fn identity(n: usize) -> Self {
        LinearOrder {
            seq: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.seq
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.seq
    }

    pub fn last(&self) -> Option<u32> {
        self.seq.last().copied()
    }

    pub fn reversed(&self) -> LinearOrder {
        let mut seq = self.seq.clone();
        seq.reverse();
        LinearOrder { seq }
    }

    /// `positions()[c]` is the position of candidate `c`.
    pub fn positions(&self) -> Vec<u32> {
        let mut pos = vec![0u32; self.seq.len()];
        for (i, &v) in self.seq.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        pos
    }
}

impl std::fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.seq)
    }
}

/// The feedback arc set implied by an ordering: all arcs whose head comes
/// before their tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpliedFas {
    /// Backward arcs in ascending `(min, max)` pair order.
    pub arcs: Vec<(u32, u32)>,
}

impl ImpliedFas {
    pub fn size(&self) -> usize {
        self.arcs.len()
    }
}

/// Collects the arcs `(x, y)` of `t` with `y` earlier than `x` in `ord`.
pub fn fas_of_ordering(t: &Tournament, ord: &LinearOrder) -> Result<ImpliedFas, OrderError> {
    if ord.len() != t.n() {
        return Err(OrderError::WrongLength {
            got: ord.len(),
            expected: t.n(),
        });
    }
    let pos = ord.positions();
    let mut arcs = Vec::new();
    for u in 0..t.n() as u32 {
        for v in (u + 1)..t.n() as u32 {
            let (tail, head) = if t.arc(u, v) { (u, v) } else { (v, u) };
            if pos[head as usize] < pos[tail as usize] {
                arcs.push((tail, head));
            }
        }
    }
    Ok(ImpliedFas { arcs })
}

/// Size-only variant of [`fas_of_ordering`]; avoids materializing the arc
/// set on gadget-scale tournaments.
pub fn fas_size_of_ordering(t: &Tournament, ord: &LinearOrder) -> Result<u64, OrderError> {
    if ord.len() != t.n() {
        return Err(OrderError::WrongLength {
            got: ord.len(),
            expected: t.n(),
        });
    }
    let pos = ord.positions();
    let mut count = 0u64;
    for u in 0..t.n() as u32 {
        for v in (u + 1)..t.n() as u32 {
            let backward = if t.arc(u, v) {
                pos[v as usize] < pos[u as usize]
            } else {
                pos[u as usize] < pos[v as usize]
            };
            count += backward as u64;
        }
    }
    Ok(count)
}

/// A list of voters, each a total order over the same candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    n: usize,
    voters: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(n: usize, voters: Vec<LinearOrder>) -> Result<Self, ProfileError> {
        if voters.is_empty() {
            return Err(ProfileError::Empty);
        }
        for (i, v) in voters.iter().enumerate() {
            if v.len() != n {
                return Err(ProfileError::BadVoter {
                    voter: i,
                    source: OrderError::WrongLength {
                        got: v.len(),
                        expected: n,
                    },
                });
            }
        }
        Ok(Profile { n, voters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn voters(&self) -> &[LinearOrder] {
        &self.voters
    }

    /// Drops voter `i`; used by the profile-minimality sanity checks.
    pub fn without_voter(&self, i: usize) -> Result<Profile, ProfileError> {
        let mut voters = self.voters.clone();
        voters.remove(i);
        Profile::new(self.n, voters)
    }
}

/// Pairwise victory margins of a profile, computed on demand from voter
/// positions so gadget-scale profiles stay cheap to hold.
#[derive(Debug, Clone)]
pub struct Margins {
    positions: Vec<Vec<u32>>,
}

impl Margins {
    /// `(#voters with u before v) - (#voters with v before u)`; positive
    /// exactly when `v` is the majority's choice, i.e. when the arc `(u, v)`
    /// is present in the aggregated tournament.
    pub fn margin(&self, u: u32, v: u32) -> i64 {
        let mut m = 0i64;
        for pos in &self.positions {
            if pos[u as usize] < pos[v as usize] {
                m += 1;
            } else {
                m -= 1;
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct MajorityOutcome {
    pub tournament: Tournament,
    pub margins: Margins,
}

/// Aggregates a profile into the majority tournament: the arc `(a, b)` is
/// present iff strictly more voters place `a` before `b` than `b` before
/// `a`. Any tied pair is an error naming the pair; ties cannot occur when
/// the voter count is odd.
pub fn aggregate_majority(p: &Profile) -> Result<MajorityOutcome, TieError> {
    let positions: Vec<Vec<u32>> = p.voters().iter().map(|v| v.positions()).collect();
    let n = p.n();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            let mut m = 0i64;
            for pos in &positions {
                if pos[u as usize] < pos[v as usize] {
                    m += 1;
                } else {
                    m -= 1;
                }
            }
            if m == 0 {
                return Err(TieError(u, v));
            }
        }
    }
    let tournament = Tournament::from_fn(n, |u, v| {
        let mut m = 0i64;
        for pos in &positions {
            if pos[u as usize] < pos[v as usize] {
                m += 1;
            } else {
                m -= 1;
            }
        }
        m > 0
    });
    Ok(MajorityOutcome {
        tournament,
        margins: Margins { positions },
    })
}

/// The 3-cycle `0 -> 1 -> 2 -> 0`; the smallest tournament without a
/// Condorcet winner. Handy in tests.
pub fn three_cycle() -> Tournament {
    Tournament::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_fas_single_backward_arc() {
        let t = three_cycle();
        let ord = LinearOrder::new(vec![0, 1, 2], 3).unwrap();
        let fas = fas_of_ordering(&t, &ord).unwrap();
        assert_eq!(fas.arcs, vec![(2, 0)]);
        assert_eq!(fas.size(), 1);
    }

    #[test]
    fn transitive_identity_order_empty_fas() {
        for n in 1..=6 {
            let t = Tournament::transitive(n);
            let ord = LinearOrder::identity(n);
            assert_eq!(fas_of_ordering(&t, &ord).unwrap().size(), 0);
        }
    }

    #[test]
    fn transitive_reversed_order_all_arcs_backward() {
        let n = 5;
        let t = Tournament::transitive(n);
        let ord = LinearOrder::identity(n).reversed();
        assert_eq!(fas_of_ordering(&t, &ord).unwrap().size(), n * (n - 1) / 2);
    }

    #[test]
    fn fas_of_ordering_rejects_non_permutation() {
        let t = three_cycle();
        assert!(LinearOrder::new(vec![0, 0, 2], 3).is_err());
        let short = LinearOrder::identity(2);
        assert!(fas_of_ordering(&t, &short).is_err());
    }

    #[test]
    fn is_transitive_examples() {
        assert!(!three_cycle().is_transitive());
        let t = Tournament::transitive(4);
        assert_eq!(t.transitive_order().unwrap().as_slice(), &[0, 1, 2, 3]);
        let t1 = Tournament::transitive(1);
        assert_eq!(t1.transitive_order().unwrap().as_slice(), &[0]);
    }

    #[test]
    fn reversing_fas_arcs_yields_transitive_with_that_order() {
        // Flipping every backward arc makes the ordering the unique
        // transitive order.
        let t = three_cycle();
        let ord = LinearOrder::new(vec![2, 0, 1], 3).unwrap();
        let fas = fas_of_ordering(&t, &ord).unwrap();
        let flipped = Tournament::from_fn(3, |u, v| {
            let backward = fas.arcs.contains(&(u, v)) || fas.arcs.contains(&(v, u));
            if backward {
                !t.arc(u, v)
            } else {
                t.arc(u, v)
            }
        });
        assert_eq!(flipped.transitive_order().unwrap(), ord);
    }

    #[test]
    fn aggregate_three_voter_cycle() {
        // Condorcet's example: three voters, cyclic majority.
        let voters = vec![
            LinearOrder::new(vec![2, 1, 0], 3).unwrap(),
            LinearOrder::new(vec![0, 2, 1], 3).unwrap(),
            LinearOrder::new(vec![1, 0, 2], 3).unwrap(),
        ];
        let p = Profile::new(3, voters).unwrap();
        let out = aggregate_majority(&p).unwrap();
        let expect = Tournament::new(3, &[(1, 0), (2, 1), (0, 2)]).unwrap();
        assert_eq!(out.tournament, expect);
        assert_eq!(out.margins.margin(1, 0), 1);
        assert_eq!(out.margins.margin(2, 1), 1);
        assert_eq!(out.margins.margin(0, 2), 1);
    }

    #[test]
    fn aggregate_single_voter_is_their_order() {
        let p = Profile::new(3, vec![LinearOrder::new(vec![0, 1, 2], 3).unwrap()]).unwrap();
        let out = aggregate_majority(&p).unwrap();
        assert_eq!(out.tournament, Tournament::transitive(3));
    }

    #[test]
    fn aggregate_seven_identical_voters() {
        let voters = vec![LinearOrder::new(vec![0, 1, 2], 3).unwrap(); 7];
        let p = Profile::new(3, voters).unwrap();
        let out = aggregate_majority(&p).unwrap();
        assert_eq!(out.tournament, Tournament::transitive(3));
        assert_eq!(out.margins.margin(0, 1), 7);
        assert_eq!(out.margins.margin(1, 2), 7);
    }

    #[test]
    fn aggregate_tie_is_an_error() {
        let voters = vec![
            LinearOrder::new(vec![0, 1], 2).unwrap(),
            LinearOrder::new(vec![1, 0], 2).unwrap(),
        ];
        let p = Profile::new(2, voters).unwrap();
        assert_eq!(aggregate_majority(&p).unwrap_err(), TieError(0, 1));
    }

    #[test]
    fn tournament_validation() {
        assert!(Tournament::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Tournament::new(2, &[]).is_err());
        assert!(Tournament::new(2, &[(0, 0), (0, 1)]).is_err());
        assert!(Tournament::new(2, &[(0, 2)]).is_err());
        assert!(Tournament::new(2, &[(0, 1)]).is_ok());
    }
}
