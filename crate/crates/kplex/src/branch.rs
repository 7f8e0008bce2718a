//! The recursive branch-and-bound search over one task.
//!
//! Each step refines the candidate and exclusion sets against the current
//! plex, picks a pivot, and splits the space into an include branch and an
//! exclude branch. Three sound prunings keep the tree small: an early exit
//! when the whole pool is already a k-plex, a support-based size upper bound
//! on the include branch, and pair co-occurrence filtering.
//!
//! The exclude branch is executed in place as a loop (it never needs the
//! parent state again), so recursion depth is bounded by plex growth.

use crate::bitset::{and_assign, iter_and, BitSet};
use crate::graph::Graph;
use crate::seed::{PairMatrix, SeedSubgraph};
use crate::state::{SearchState, Task};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// How the search splits when the pivot lands inside the plex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Re-pick the pivot among the candidate non-neighbors and branch
    /// include/exclude with upper-bound pruning. The default.
    Ours,
    /// Produce `support + 1` branches that move successive non-neighbors of
    /// the pivot into the plex.
    OursP,
    /// Pivot selection without the saturation tie-break; include/exclude
    /// branching as in [`Variant::Ours`].
    Basic,
}

/// Search parameters shared by every task of a run.
#[derive(Clone, Debug)]
pub struct BranchConfig {
    pub k: usize,
    pub q: usize,
    pub variant: Variant,
    /// Apply the size upper bound before entering an include branch.
    pub use_ub: bool,
    /// Apply pair co-occurrence filtering during generation and refinement.
    pub use_pair_prune: bool,
    /// Per-task time budget; a task past its budget packages outstanding
    /// branches as fresh tasks instead of recursing.
    pub deadline: Option<Duration>,
}

impl BranchConfig {
    pub fn new(k: usize, q: usize) -> BranchConfig {
        BranchConfig {
            k,
            q,
            variant: Variant::Ours,
            use_ub: true,
            use_pair_prune: true,
            deadline: None,
        }
    }
}

/// A selected pivot and where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PivotChoice {
    pub vertex: u32,
    pub from_plex: bool,
}

pub(crate) struct BranchCtx<'a> {
    pub g: &'a Graph,
    pub cfg: &'a BranchConfig,
    /// Expensive from-scratch state validation after every refinement;
    /// enabled by internal tests only.
    pub validate: bool,
}

/// Runs one task to completion, emitting every maximal k-plex of size at
/// least `q` reachable in its scope exactly once.
///
/// `emit` receives the members as ascending local ids; `respawn` receives
/// follow-up tasks when the task exceeds its time budget.
pub fn run_task(
    g: &Graph,
    task: Task,
    cfg: &BranchConfig,
    emit: &mut dyn FnMut(&SeedSubgraph, &[u32]),
    respawn: &mut dyn FnMut(Task),
) {
    let ctx = BranchCtx {
        g,
        cfg,
        validate: false,
    };
    run_task_impl(&ctx, task, emit, respawn);
}

pub(crate) fn run_task_impl(
    ctx: &BranchCtx<'_>,
    task: Task,
    emit: &mut dyn FnMut(&SeedSubgraph, &[u32]),
    respawn: &mut dyn FnMut(Task),
) {
    let Task {
        subgraph,
        pair_matrix,
        mut state,
        mut pending_filter,
        created_at,
    } = task;
    chain(
        ctx,
        &subgraph,
        &pair_matrix,
        &mut state,
        &mut pending_filter,
        created_at,
        emit,
        respawn,
    );
}

/// One include/exclude chain: the exclude branch loops in place, include
/// branches recurse on a cloned state.
#[allow(clippy::too_many_arguments)]
fn chain(
    ctx: &BranchCtx<'_>,
    sg: &Arc<SeedSubgraph>,
    pm: &Arc<PairMatrix>,
    state: &mut SearchState,
    pending: &mut Vec<u32>,
    created_at: Instant,
    emit: &mut dyn FnMut(&SeedSubgraph, &[u32]),
    respawn: &mut dyn FnMut(Task),
) {
    let cfg = ctx.cfg;
    let (k, q) = (cfg.k, cfg.q);
    let mut needs_refine = true;
    loop {
        if needs_refine || !pending.is_empty() {
            refine(ctx, sg, pm, state, pending);
            pending.clear();
            needs_refine = false;
            if ctx.validate {
                state
                    .validate(sg, k, true)
                    .expect("state invariant broken after refinement");
            }
        }

        if state.cand_mask().is_empty() {
            if state.plex_len() >= q && state.excl_is_empty() {
                let mut members: Vec<u32> = state.plex().to_vec();
                members.sort_unstable();
                debug_assert!(plex_degrees_ok(sg, &members, k));
                emit(sg, &members);
            }
            return;
        }

        let pivot = select_pivot(state, cfg);
        let (plen, clen) = (state.plex_len(), state.cand_len());

        // When even the pool's minimum degree meets the budget, the whole
        // pool is a k-plex; report it if nothing in X extends it.
        if state.deg_in_pool(pivot.vertex) as i64 >= plen as i64 + clen as i64 - k as i64 {
            if plen + clen >= q {
                let mut pool = state.plex_mask().clone();
                pool.union_with(state.cand_mask());
                if pool_is_maximal(ctx, sg, state, &pool) {
                    let members: Vec<u32> = pool.iter().map(|v| v as u32).collect();
                    debug_assert!(plex_degrees_ok(sg, &members, k));
                    emit(sg, &members);
                }
            }
            return;
        }

        let branch_vertex = if pivot.from_plex {
            if cfg.variant == Variant::OursP {
                match plex_pivot_branches(ctx, sg, pm, state, pivot.vertex, created_at, emit, respawn)
                {
                    TailBranch::Continue => {
                        continue;
                    }
                    TailBranch::Respawned => return,
                }
            }
            repick(state, sg, pivot.vertex, cfg)
        } else {
            pivot.vertex
        };

        // Include branch, guarded by the size upper bound.
        let include =
            !cfg.use_ub || compute_ub(state, sg, branch_vertex, pivot.vertex, k) >= q as i64;
        if include {
            let mut child = state.clone();
            child.promote(sg, branch_vertex);
            if past_deadline(cfg, created_at) {
                respawn(Task::new(
                    sg.clone(),
                    pm.clone(),
                    child,
                    vec![branch_vertex],
                ));
            } else {
                let mut child_pending = vec![branch_vertex];
                chain(
                    ctx,
                    sg,
                    pm,
                    &mut child,
                    &mut child_pending,
                    created_at,
                    emit,
                    respawn,
                );
            }
        }

        // Exclude branch in place; the plex is unchanged so no refinement is
        // needed before the next iteration.
        state.exclude(sg, branch_vertex);
        if past_deadline(cfg, created_at) {
            respawn(Task::new(sg.clone(), pm.clone(), state.clone(), Vec::new()));
            return;
        }
    }
}

#[inline]
fn past_deadline(cfg: &BranchConfig, created_at: Instant) -> bool {
    cfg.deadline
        .map(|d| created_at.elapsed() > d)
        .unwrap_or(false)
}

enum TailBranch {
    /// The caller should continue its loop: the first branch (exclude `w_1`)
    /// has been applied to the state in place.
    Continue,
    /// The remaining state was respawned as a task; stop here.
    Respawned,
}

/// Multi-way branching on a plex pivot: with `s` spare budget and candidate
/// non-neighbors `w_1..w_l`, produce branches that exclude `w_1`; include
/// `w_1..w_{i-1}` and exclude `w_i` for `i = 2..=s`; and include `w_1..w_s`
/// while dropping the rest. Extending a branch whose prefix is no longer a
/// valid plex is skipped, along with all later branches, since they contain
/// the same prefix.
#[allow(clippy::too_many_arguments)]
fn plex_pivot_branches(
    ctx: &BranchCtx<'_>,
    sg: &Arc<SeedSubgraph>,
    pm: &Arc<PairMatrix>,
    state: &mut SearchState,
    pivot: u32,
    created_at: Instant,
    emit: &mut dyn FnMut(&SeedSubgraph, &[u32]),
    respawn: &mut dyn FnMut(Task),
) -> TailBranch {
    let cfg = ctx.cfg;
    let k = cfg.k;
    let nonneighbors: Vec<u32> = state
        .cand_mask()
        .iter()
        .map(|v| v as u32)
        .filter(|&v| !sg.adjacent(pivot, v))
        .collect();
    debug_assert!(
        !nonneighbors.is_empty(),
        "a plex pivot below the pool test must have candidate non-neighbors"
    );
    let support = state.support(pivot, k).max(0) as usize;

    if support == 0 {
        // No non-neighbor can ever join; push them all to the exclusion side.
        for &w in &nonneighbors {
            state.exclude(sg, w);
        }
        if past_deadline(cfg, created_at) {
            respawn(Task::new(sg.clone(), pm.clone(), state.clone(), Vec::new()));
            return TailBranch::Respawned;
        }
        return TailBranch::Continue;
    }
    debug_assert!(support <= nonneighbors.len());

    'branches: for i in 2..=support + 1 {
        let last = i == support + 1;
        let take = if last { support } else { i - 1 };
        let mut child = state.clone();
        let mut added = Vec::with_capacity(take);
        for &w in &nonneighbors[..take] {
            if !child.can_join(sg, w, k) {
                // Every later branch shares this prefix.
                break 'branches;
            }
            child.promote(sg, w);
            added.push(w);
        }
        if last {
            for &w in &nonneighbors[take..] {
                child.drop_candidate(sg, w);
            }
        } else {
            child.exclude(sg, nonneighbors[i - 1]);
        }
        if past_deadline(cfg, created_at) {
            respawn(Task::new(sg.clone(), pm.clone(), child, added));
        } else {
            let mut child_pending = added;
            chain(
                ctx,
                sg,
                pm,
                &mut child,
                &mut child_pending,
                created_at,
                emit,
                respawn,
            );
        }
    }

    // First branch, in place: exclude w_1 and keep searching.
    state.exclude(sg, nonneighbors[0]);
    if past_deadline(cfg, created_at) {
        respawn(Task::new(sg.clone(), pm.clone(), state.clone(), Vec::new()));
        return TailBranch::Respawned;
    }
    TailBranch::Continue
}

/// Selects the pool vertex with minimum pool degree; ties prefer the vertex
/// with the most missing links in the plex (skipped by
/// [`Variant::Basic`]), then plex members over candidates, then the smallest
/// local id.
pub fn select_pivot(state: &SearchState, cfg: &BranchConfig) -> PivotChoice {
    let use_missing = cfg.variant != Variant::Basic;
    let key = |v: u32| -> (i32, i32, u32) {
        let miss = if use_missing { -state.missing(v) } else { 0 };
        (state.deg_in_pool(v), miss, v)
    };
    let best_plex = state.plex().iter().map(|&v| key(v)).min();
    let best_cand = state.cand_mask().iter().map(|v| key(v as u32)).min();
    match (best_plex, best_cand) {
        (Some(p), Some(c)) => {
            if (p.0, p.1) <= (c.0, c.1) {
                PivotChoice {
                    vertex: p.2,
                    from_plex: true,
                }
            } else {
                PivotChoice {
                    vertex: c.2,
                    from_plex: false,
                }
            }
        }
        (Some(p), None) => PivotChoice {
            vertex: p.2,
            from_plex: true,
        },
        (None, Some(c)) => PivotChoice {
            vertex: c.2,
            from_plex: false,
        },
        (None, None) => unreachable!("pivot requested on empty pool"),
    }
}

/// Re-picks the branch vertex among the candidate non-neighbors of a plex
/// pivot, by the same rules as [`select_pivot`].
pub fn repick(state: &SearchState, sg: &SeedSubgraph, pivot: u32, cfg: &BranchConfig) -> u32 {
    let use_missing = cfg.variant != Variant::Basic;
    let best = state
        .cand_mask()
        .iter()
        .map(|v| v as u32)
        .filter(|&v| !sg.adjacent(pivot, v))
        .map(|v| {
            let miss = if use_missing { -state.missing(v) } else { 0 };
            (state.deg_in_pool(v), miss, v)
        })
        .min();
    best.expect("plex pivot must have candidate non-neighbors").2
}

/// Upper bound on the size of any k-plex that can grow from
/// `members ∪ {branch_vertex}`.
///
/// Support-based part: each plex member has `k - missing` spare budget; a
/// candidate neighbor of the branch vertex only counts if its least-flexible
/// non-neighbor in the plex still has budget, which it then consumes. The
/// bound is capped by the branch pivot's frozen subgraph degree plus `k`
/// (`ub_pivot` is the original minimum-degree pivot, which is always inside
/// the bounded set).
pub fn compute_ub(
    state: &SearchState,
    sg: &SeedSubgraph,
    branch_vertex: u32,
    ub_pivot: u32,
    k: usize,
) -> i64 {
    let plen = state.plex_len() as i64;
    let sup_new = k as i64 - (plen - state.deg_in_plex(branch_vertex) as i64);
    let mut bound = plen + sup_new;
    let members = state.plex();
    let mut sups: Vec<i32> = members.iter().map(|&u| state.support(u, k)).collect();
    for w in iter_and(sg.adj_row(branch_vertex), state.cand_mask().words()) {
        let w = w as u32;
        let mut tightest: Option<usize> = None;
        for (idx, &u) in members.iter().enumerate() {
            if !sg.adjacent(u, w) && tightest.is_none_or(|t| sups[idx] < sups[t]) {
                tightest = Some(idx);
            }
        }
        match tightest {
            // No member constrains w at all.
            None => bound += 1,
            Some(t) if sups[t] > 0 => {
                sups[t] -= 1;
                bound += 1;
            }
            _ => {}
        }
    }
    bound.min(sg.degree(ub_pivot) as i64 + k as i64)
}

/// Tightens candidates and exclusions against the current plex: survivors
/// must be adjacent to every budget-exhausted member, have enough neighbors
/// inside the plex to join, and pass the pair filter rows of the vertices in
/// `pending` (earlier-ordered exclusions skip the pair filter and are checked
/// through the full graph's adjacency).
fn refine(
    ctx: &BranchCtx<'_>,
    sg: &SeedSubgraph,
    pm: &PairMatrix,
    state: &mut SearchState,
    pending: &[u32],
) {
    let k = ctx.cfg.k;
    let plen = state.plex_len() as i64;
    let need = plen + 1 - k as i64;
    let saturated: Vec<u32> = state
        .plex()
        .iter()
        .copied()
        .filter(|&u| state.missing(u) == k as i32)
        .collect();

    let words = sg.adj_row(0).len();
    let mut allowed = vec![!0u64; words];
    for &u in &saturated {
        and_assign(&mut allowed, sg.adj_row(u));
    }
    if ctx.cfg.use_pair_prune {
        for &a in pending {
            and_assign(&mut allowed, pm.allowed_row(a));
        }
    }
    let passes = |v: u32, st: &SearchState| -> bool {
        st.deg_in_plex(v) as i64 >= need && allowed[v as usize / 64] >> (v % 64) & 1 == 1
    };

    let doomed: Vec<u32> = state
        .cand_mask()
        .iter()
        .map(|v| v as u32)
        .filter(|&v| !passes(v, state))
        .collect();
    for v in doomed {
        state.drop_candidate(sg, v);
    }

    let doomed: Vec<u32> = state
        .excl_local()
        .iter()
        .map(|v| v as u32)
        .filter(|&v| !passes(v, state))
        .collect();
    for v in doomed {
        state.remove_excluded(v);
    }

    if !state.excl_before().is_empty() {
        let doomed: Vec<usize> = state
            .excl_before()
            .iter()
            .filter(|&idx| {
                let x = sg.excluded_before()[idx];
                !global_can_join(ctx.g, sg, state, &saturated, x, need)
            })
            .collect();
        for idx in doomed {
            state.remove_excluded_before(idx);
        }
    }
}

/// Join test for an earlier-ordered vertex known only by global id.
fn global_can_join(
    g: &Graph,
    sg: &SeedSubgraph,
    state: &SearchState,
    saturated: &[u32],
    x: u32,
    need: i64,
) -> bool {
    let deg = state
        .plex()
        .iter()
        .filter(|&&u| g.has_edge(x, sg.global(u)))
        .count() as i64;
    deg >= need && saturated.iter().all(|&u| g.has_edge(x, sg.global(u)))
}

/// Does any excluded vertex extend the whole pool to a larger k-plex?
fn pool_is_maximal(
    ctx: &BranchCtx<'_>,
    sg: &SeedSubgraph,
    state: &SearchState,
    pool: &BitSet,
) -> bool {
    let k = ctx.cfg.k;
    let size = pool.len();
    let mut saturated_mask = BitSet::new(sg.len());
    let mut saturated_globals: Vec<u32> = Vec::new();
    for v in pool.iter() {
        let missing = size as i64 - pool.intersection_len(sg.adj_row(v as u32)) as i64;
        debug_assert!(missing <= k as i64, "pool must be a k-plex here");
        if missing == k as i64 {
            saturated_mask.insert(v);
            saturated_globals.push(sg.global(v as u32));
        }
    }
    let need = size as i64 + 1 - k as i64;
    for x in state.excl_local().iter() {
        let deg = pool.intersection_len(sg.adj_row(x as u32)) as i64;
        if deg >= need && saturated_mask.is_subset_of(sg.adj_row(x as u32)) {
            return false;
        }
    }
    for idx in state.excl_before().iter() {
        let x = sg.excluded_before()[idx];
        let deg = pool
            .iter()
            .filter(|&v| ctx.g.has_edge(x, sg.global(v as u32)))
            .count() as i64;
        if deg >= need
            && saturated_globals
                .iter()
                .all(|&u| ctx.g.has_edge(x, u))
        {
            return false;
        }
    }
    true
}

/// Debug check: every member has at most `k` missing links inside the set.
fn plex_degrees_ok(sg: &SeedSubgraph, members: &[u32], k: usize) -> bool {
    let mut mask = BitSet::new(sg.len());
    for &v in members {
        mask.insert(v as usize);
    }
    members.iter().all(|&v| {
        mask.intersection_len(sg.adj_row(v)) as i64 >= members.len() as i64 - k as i64
    })
}
