//! Decomposition of one seed's search into independent tasks.
//!
//! Any qualifying result rooted at the seed contains some subset `S` of the
//! seed's two-hop vertices with `|S| <= k-1` — a larger `S` would overdraw
//! the seed's own non-neighbor budget. Each such subset becomes one task
//! whose plex starts as `{seed} ∪ S`, whose candidates are (surviving)
//! neighbors of the seed, and whose exclusion set holds the earlier-ordered
//! ball plus the two-hop vertices outside `S`. Subsets are enumerated in
//! ascending local order so each one is generated exactly once.

use crate::bitset::BitSet;
use crate::seed::{PairMatrix, SeedSubgraph};
use crate::state::{SearchState, Task};
use std::sync::Arc;

/// Degree-based size cap: any k-plex containing all of `members` has at most
/// `min degree + k` vertices, taking degrees frozen in the seed subgraph.
pub fn degree_bound(sg: &SeedSubgraph, members: &[u32], k: usize) -> i64 {
    members
        .iter()
        .map(|&v| sg.degree(v) as i64 + k as i64)
        .min()
        .unwrap_or(i64::MAX)
}

/// Upper bound on the size of any k-plex reachable by a fresh task with the
/// given starting plex and candidate pool.
///
/// Counts how many candidates can join before every plex member's budget is
/// exhausted: each candidate charges the least-flexible plex member it is
/// not adjacent to, and is discarded once that member has no budget left.
/// The seed contributes no budget of its own because every candidate is its
/// neighbor. Combined with [`degree_bound`].
pub fn initial_bound(sg: &SeedSubgraph, members: &[u32], cands: &BitSet, k: usize) -> i64 {
    let plen = members.len() as i64;
    let mut sups: Vec<i64> = members
        .iter()
        .map(|&u| {
            let deg_in = members.iter().filter(|&&v| sg.adjacent(u, v)).count() as i64;
            k as i64 - (plen - deg_in)
        })
        .collect();
    sups[0] = 0; // the seed: no non-neighbor of it sits in the pool
    let mut joinable = 0i64;
    for w in cands.iter() {
        let w = w as u32;
        let mut tightest: Option<usize> = None;
        for (idx, &u) in members.iter().enumerate() {
            if !sg.adjacent(u, w) && tightest.is_none_or(|t| sups[idx] < sups[t]) {
                tightest = Some(idx);
            }
        }
        match tightest {
            None => joinable += 1,
            Some(t) if sups[t] > 0 => {
                sups[t] -= 1;
                joinable += 1;
            }
            _ => {}
        }
    }
    (plen + joinable).min(degree_bound(sg, members, k))
}

/// Emits one task per surviving subset of the seed's two-hop vertices.
///
/// While a subset grows, extension candidates and the one-hop pool are
/// filtered through the pair matrix (when `use_pair_prune` is set), growing
/// the plex past anyone's budget prunes the whole subtree, and tasks whose
/// [`initial_bound`] falls below `q` are not emitted.
pub fn generate_tasks(
    sg: &Arc<SeedSubgraph>,
    pm: &Arc<PairMatrix>,
    k: usize,
    q: usize,
    use_pair_prune: bool,
    emit: &mut dyn FnMut(Task),
) {
    let two_hops = sg.two_hop_list();
    let mut chosen: Vec<u32> = Vec::new();
    // Missing-link count of each chosen vertex within {seed} ∪ chosen,
    // counting itself and the seed.
    let mut missing: Vec<i64> = Vec::new();
    let cands = sg.one_hop().clone();
    let mut members = vec![0u32];
    subsets(
        sg,
        pm,
        k,
        q,
        use_pair_prune,
        &two_hops,
        &mut chosen,
        &mut missing,
        &mut members,
        cands,
        emit,
    );
}

#[allow(clippy::too_many_arguments)]
fn subsets(
    sg: &Arc<SeedSubgraph>,
    pm: &Arc<PairMatrix>,
    k: usize,
    q: usize,
    use_pair_prune: bool,
    ext: &[u32],
    chosen: &mut Vec<u32>,
    missing: &mut Vec<i64>,
    members: &mut Vec<u32>,
    cands: BitSet,
    emit: &mut dyn FnMut(Task),
) {
    if initial_bound(sg, members, &cands, k) >= q as i64 {
        let n = sg.len();
        let mut excl_local = sg.two_hop().clone();
        for &s in chosen.iter() {
            excl_local.remove(s as usize);
        }
        let excl_before = BitSet::full(sg.excluded_before().len());
        let state = SearchState::new(sg, members.clone(), cands.clone(), excl_local, excl_before);
        debug_assert!(state.plex_mask().len() <= n);
        emit(Task::new(sg.clone(), pm.clone(), state, Vec::new()));
    }
    if chosen.len() + 1 >= k {
        return;
    }
    for (i, &u) in ext.iter().enumerate() {
        // {seed} ∪ chosen ∪ {u} must stay a k-plex: u misses the seed and
        // itself, plus its non-neighbors among the chosen.
        let mut miss_u = 2i64;
        let mut ok = true;
        for (idx, &s) in chosen.iter().enumerate() {
            if !sg.adjacent(u, s) {
                miss_u += 1;
                if missing[idx] + 1 > k as i64 {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || miss_u > k as i64 {
            continue;
        }
        let rest: Vec<u32> = ext[i + 1..]
            .iter()
            .copied()
            .filter(|&v| !use_pair_prune || pm.allowed(u, v))
            .collect();
        let mut next_cands = cands.clone();
        if use_pair_prune {
            next_cands.intersect_with_words(pm.allowed_row(u));
        }
        for (idx, &s) in chosen.iter().enumerate() {
            if !sg.adjacent(u, s) {
                missing[idx] += 1;
            }
        }
        chosen.push(u);
        missing.push(miss_u);
        members.push(u);
        subsets(
            sg,
            pm,
            k,
            q,
            use_pair_prune,
            &rest,
            chosen,
            missing,
            members,
            next_cands,
            emit,
        );
        members.pop();
        missing.pop();
        chosen.pop();
        for (idx, &s) in chosen.iter().enumerate() {
            if !sg.adjacent(u, s) {
                missing[idx] -= 1;
            }
        }
    }
}
