//! Seven voter orders whose majority aggregation is exactly a gadget
//! tournament built from a left/right-restricted instance.
//!
//! Voter 1 lists the sections ascending (`A_i` through `F_i`), then the
//! clause modules ascending. Voters 2 and 3 agree on precisely the pair set
//! `X0` (every clause module before every `A/B/C`, and `F_i` before `D_i`
//! per section) and disagree on everything else, which flips the `F -> D`
//! arcs and points clause modules at the `A/B/C` groups. After these three
//! voters, every clause module relates to every section as if its variable
//! did not occur in the clause, and all inter-module margins are one.
//!
//! Voters 4/5 and 6/7 each agree on exactly one star-shaped pair set (`X1`
//! from the right-side clause occurrences and left-side attachments, `X2`
//! with the sides swapped), overriding the margin-one arcs they cover: each
//! occurrence of `x_i` in clause `j` needs two fixes (`T_j` before `F_i` or
//! `D_i`, and `C_i` or `B_i` before `T_j`), one supplied by each pair. The
//! left/right occurrence limits guarantee every active module attaches to
//! exactly one clause module, and no clause module needs attachments on
//! both sides.
//!
//! All seven voters rank each module's vertices in ascending id order, so
//! intra-module arcs are unanimous.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formulas::{ClauseSide, PartitionedCnf};
use crate::gadget::{GadgetLayout, GadgetPlan, ModuleRole, Occurrence};
use crate::tournament::{LinearOrder, OrderError, Profile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VoterError {
    #[error("layout was not built from this partitioned instance")]
    SourceMismatch,
    #[error("module {module} would attach to two clause modules")]
    AmbiguousAttachment { module: usize },
    #[error("clause module {t_module} needs attachments on both sides")]
    TwoSidedSlot { t_module: usize },
}

/// Which side of its clause module an active module sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    /// Module index of the clause module `T_j`.
    pub t_module: u32,
    /// Before the clause module (`B`/`C` roles) or after it (`D`/`F`).
    pub before: bool,
}

/// The module-level construction behind the seven voters.
#[derive(Debug, Clone)]
pub struct SevenVoterPlan {
    /// Module-index orders of the seven voters.
    pub module_orders: [LinearOrder; 7],
    /// Pairs both of voters 2 and 3 agree on.
    pub x0: BTreeSet<(u32, u32)>,
    /// Pairs both of voters 4 and 5 agree on.
    pub x1: BTreeSet<(u32, u32)>,
    /// Pairs both of voters 6 and 7 agree on.
    pub x2: BTreeSet<(u32, u32)>,
    /// Active-module attachments realizing `x1`.
    pub active1: BTreeMap<u32, Attachment>,
    /// Active-module attachments realizing `x2`.
    pub active2: BTreeMap<u32, Attachment>,
}

/// All ordered pairs `(u, v)` with `u` before `v` in both orders.
pub fn induced_pairs(a: &LinearOrder, b: &LinearOrder) -> Result<BTreeSet<(u32, u32)>, OrderError> {
    if a.len() != b.len() {
        return Err(OrderError::WrongLength {
            got: b.len(),
            expected: a.len(),
        });
    }
    let pos_b = b.positions();
    let mut pairs = BTreeSet::new();
    let seq = a.as_slice();
    for (i, &u) in seq.iter().enumerate() {
        for &v in &seq[i + 1..] {
            if pos_b[u as usize] < pos_b[v as usize] {
                pairs.insert((u, v));
            }
        }
    }
    Ok(pairs)
}

/// Builds the seven vertex-level voters realizing `layout.tournament`,
/// together with the module-level plan.
pub fn build_seven_voters(
    layout: &GadgetLayout,
    pcnf: &PartitionedCnf,
) -> Result<(Profile, SevenVoterPlan), VoterError> {
    if layout.source != *pcnf.instance() {
        return Err(VoterError::SourceMismatch);
    }
    let plan = &layout.plan;
    let n = plan.params().n;
    let m = plan.params().m;

    let sec = |i: usize, role: ModuleRole| plan.section_module(i, role) as u32;
    let clause = |j: usize| plan.clause_module(j) as u32;

    // Voter 1: sections ascending, then clause modules ascending.
    let mut v1: Vec<u32> = Vec::new();
    for i in 1..=n {
        for role in ModuleRole::SECTION_ROLES {
            v1.push(sec(i, role));
        }
    }
    v1.extend((1..=m).map(clause));

    // Voters 2 and 3 induce X0.
    let mut v2: Vec<u32> = Vec::new();
    v2.extend((1..=n).map(|i| sec(i, ModuleRole::E)));
    for i in 1..=n {
        v2.push(sec(i, ModuleRole::F));
        v2.push(sec(i, ModuleRole::D));
    }
    v2.extend((1..=m).map(clause));
    for i in 1..=n {
        v2.push(sec(i, ModuleRole::A));
        v2.push(sec(i, ModuleRole::B));
        v2.push(sec(i, ModuleRole::C));
    }

    let mut v3: Vec<u32> = Vec::new();
    v3.extend((1..=m).rev().map(clause));
    for i in (1..=n).rev() {
        v3.push(sec(i, ModuleRole::C));
        v3.push(sec(i, ModuleRole::B));
        v3.push(sec(i, ModuleRole::A));
    }
    for i in (1..=n).rev() {
        v3.push(sec(i, ModuleRole::F));
        v3.push(sec(i, ModuleRole::D));
    }
    v3.extend((1..=n).rev().map(|i| sec(i, ModuleRole::E)));

    let mut x0 = BTreeSet::new();
    for j in 1..=m {
        for i in 1..=n {
            for role in [ModuleRole::A, ModuleRole::B, ModuleRole::C] {
                x0.insert((clause(j), sec(i, role)));
            }
        }
    }
    for i in 1..=n {
        x0.insert((sec(i, ModuleRole::F), sec(i, ModuleRole::D)));
    }

    // Attachments: an occurrence of x_i in clause j contributes, depending
    // on the clause's side, T_j -> F_i/D_i to one pair set and
    // C_i/B_i -> T_j to the other.
    let mut active1: BTreeMap<u32, Attachment> = BTreeMap::new();
    let mut active2: BTreeMap<u32, Attachment> = BTreeMap::new();
    let mut x1 = BTreeSet::new();
    let mut x2 = BTreeSet::new();
    for j in 1..=m {
        let side = pcnf.sides()[j - 1];
        for i in 1..=n {
            let occ = plan.occurrence(j, i);
            if occ == Occurrence::Absent {
                continue;
            }
            // The module that receives arcs from T_j, and the one that
            // sends arcs to T_j.
            let after_role = if occ == Occurrence::Positive {
                ModuleRole::F
            } else {
                ModuleRole::D
            };
            let before_role = if occ == Occurrence::Positive {
                ModuleRole::C
            } else {
                ModuleRole::B
            };
            let (after_set, before_set) = match side {
                ClauseSide::Right => (&mut x1, &mut x2),
                ClauseSide::Left => (&mut x2, &mut x1),
            };
            after_set.insert((clause(j), sec(i, after_role)));
            before_set.insert((sec(i, before_role), clause(j)));
            let (after_map, before_map) = match side {
                ClauseSide::Right => (&mut active1, &mut active2),
                ClauseSide::Left => (&mut active2, &mut active1),
            };
            let after = after_map.insert(
                sec(i, after_role),
                Attachment {
                    t_module: clause(j),
                    before: false,
                },
            );
            if after.is_some() {
                return Err(VoterError::AmbiguousAttachment {
                    module: sec(i, after_role) as usize,
                });
            }
            let before = before_map.insert(
                sec(i, before_role),
                Attachment {
                    t_module: clause(j),
                    before: true,
                },
            );
            if before.is_some() {
                return Err(VoterError::AmbiguousAttachment {
                    module: sec(i, before_role) as usize,
                });
            }
        }
    }

    let (v4, v5) = star_pair(plan, &active1)?;
    let (v6, v7) = star_pair(plan, &active2)?;

    let k = plan.module_count();
    let module_orders = [
        LinearOrder::new(v1, k).expect("voter 1 covers every module"),
        LinearOrder::new(v2, k).expect("voter 2 covers every module"),
        LinearOrder::new(v3, k).expect("voter 3 covers every module"),
        LinearOrder::new(v4, k).expect("voter 4 covers every module"),
        LinearOrder::new(v5, k).expect("voter 5 covers every module"),
        LinearOrder::new(v6, k).expect("voter 6 covers every module"),
        LinearOrder::new(v7, k).expect("voter 7 covers every module"),
    ];

    let voters: Vec<LinearOrder> = module_orders
        .iter()
        .map(|mo| expand_to_vertices(plan, mo))
        .collect();
    let profile = Profile::new(layout.tournament.n(), voters).expect("seven full voters");

    let vplan = SevenVoterPlan {
        module_orders,
        x0,
        x1,
        x2,
        active1,
        active2,
    };
    Ok((profile, vplan))
}

/// The two voters realizing one star-shaped pair set: voter A runs the
/// inactive modules ascending and then each clause slot (attached-before
/// modules, the clause module, attached-after modules) by clause index;
/// voter B reverses the slot order and every within-group order while
/// keeping each attachment glued to its clause module, and pushes the
/// inactive modules to the end reversed. The pairs the two agree on are
/// exactly the attachment pairs.
fn star_pair(
    plan: &GadgetPlan,
    actives: &BTreeMap<u32, Attachment>,
) -> Result<(Vec<u32>, Vec<u32>), VoterError> {
    let n = plan.params().n;
    let m = plan.params().m;
    let mut before: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    let mut after: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for (&module, attachment) in actives {
        let j = attachment.t_module as usize - 6 * n + 1;
        if attachment.before {
            before[j].push(module);
        } else {
            after[j].push(module);
        }
    }
    for j in 1..=m {
        if !before[j].is_empty() && !after[j].is_empty() {
            return Err(VoterError::TwoSidedSlot {
                t_module: plan.clause_module(j),
            });
        }
    }
    let inactive: Vec<u32> = (0..6 * n as u32)
        .filter(|idx| !actives.contains_key(idx))
        .collect();

    let mut a: Vec<u32> = inactive.clone();
    for j in 1..=m {
        a.extend(before[j].iter());
        a.push(plan.clause_module(j) as u32);
        a.extend(after[j].iter());
    }

    let mut b: Vec<u32> = Vec::new();
    for j in (1..=m).rev() {
        b.extend(before[j].iter().rev());
        b.push(plan.clause_module(j) as u32);
        b.extend(after[j].iter().rev());
    }
    b.extend(inactive.iter().rev());

    Ok((a, b))
}

/// Expands a module-level order to vertex level, every module internally
/// ascending (agreeing with its transitive arcs).
fn expand_to_vertices(plan: &GadgetPlan, module_order: &LinearOrder) -> LinearOrder {
    let total = plan.total_vertices() as usize;
    let mut seq: Vec<u32> = Vec::with_capacity(total);
    for &mi in module_order.as_slice() {
        let spec = &plan.modules()[mi as usize];
        seq.extend(spec.start as u32..spec.end as u32);
    }
    LinearOrder::new(seq, total).expect("modules tile the vertex set")
}
