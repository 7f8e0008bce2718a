//! Search state for one branch of the enumeration: the current plex, the
//! candidate set, the exclusion set, and incrementally maintained degree
//! counters.

use crate::bitset::BitSet;
use crate::seed::{PairMatrix, SeedSubgraph};
use std::sync::Arc;
use std::time::Instant;

/// The `(members, candidates, excluded)` triple over one seed subgraph.
///
/// * `members` can still miss up to `k` links per vertex;
/// * every candidate and excluded vertex could individually join `members`
///   and keep it a valid k-plex (restored by refinement after every change);
/// * excluded vertices exist purely to reject non-maximal output.
///
/// `deg_in_plex` is kept correct for every local vertex. `deg_in_pool`
/// (degree within members ∪ candidates) is only meaningful for vertices that
/// are still in that pool; it goes stale for vertices that left it.
#[derive(Clone)]
pub struct SearchState {
    plex: Vec<u32>,
    plex_mask: BitSet,
    cand_mask: BitSet,
    excl_local: BitSet,
    /// Active entries of `SeedSubgraph::excluded_before`, by index.
    excl_before: BitSet,
    deg_in_plex: Vec<i32>,
    deg_in_pool: Vec<i32>,
}

impl SearchState {
    /// Assembles a state from explicit set contents and computes both degree
    /// tables from scratch.
    pub fn new(
        sg: &SeedSubgraph,
        plex: Vec<u32>,
        cand_mask: BitSet,
        excl_local: BitSet,
        excl_before: BitSet,
    ) -> SearchState {
        let n = sg.len();
        let mut plex_mask = BitSet::new(n);
        for &v in &plex {
            plex_mask.insert(v as usize);
        }
        let mut pool = plex_mask.clone();
        pool.union_with(&cand_mask);
        let deg_in_plex = (0..n)
            .map(|v| plex_mask.intersection_len(sg.adj_row(v as u32)) as i32)
            .collect();
        let deg_in_pool = (0..n)
            .map(|v| pool.intersection_len(sg.adj_row(v as u32)) as i32)
            .collect();
        SearchState {
            plex,
            plex_mask,
            cand_mask,
            excl_local,
            excl_before,
            deg_in_plex,
            deg_in_pool,
        }
    }

    #[inline]
    pub fn plex(&self) -> &[u32] {
        &self.plex
    }

    #[inline]
    pub fn plex_len(&self) -> usize {
        self.plex.len()
    }

    #[inline]
    pub fn plex_mask(&self) -> &BitSet {
        &self.plex_mask
    }

    #[inline]
    pub fn cand_mask(&self) -> &BitSet {
        &self.cand_mask
    }

    #[inline]
    pub fn cand_len(&self) -> usize {
        self.cand_mask.len()
    }

    #[inline]
    pub fn excl_local(&self) -> &BitSet {
        &self.excl_local
    }

    #[inline]
    pub fn excl_before(&self) -> &BitSet {
        &self.excl_before
    }

    #[inline]
    pub fn in_plex(&self, v: u32) -> bool {
        self.plex_mask.contains(v as usize)
    }

    #[inline]
    pub fn in_cands(&self, v: u32) -> bool {
        self.cand_mask.contains(v as usize)
    }

    #[inline]
    pub fn deg_in_plex(&self, v: u32) -> i32 {
        self.deg_in_plex[v as usize]
    }

    /// Degree within members ∪ candidates; valid only for pool vertices.
    #[inline]
    pub fn deg_in_pool(&self, v: u32) -> i32 {
        self.deg_in_pool[v as usize]
    }

    /// Non-neighbor count within the plex, counting `v` itself when it is a
    /// member.
    #[inline]
    pub fn missing(&self, v: u32) -> i32 {
        self.plex.len() as i32 - self.deg_in_plex[v as usize]
    }

    /// Remaining non-neighbor budget of `v` under parameter `k`.
    #[inline]
    pub fn support(&self, v: u32, k: usize) -> i32 {
        k as i32 - self.missing(v)
    }

    pub fn excl_is_empty(&self) -> bool {
        self.excl_local.is_empty() && self.excl_before.is_empty()
    }

    /// Moves candidate `v` into the plex. Pool membership is unchanged, so
    /// only `deg_in_plex` moves.
    pub fn promote(&mut self, sg: &SeedSubgraph, v: u32) {
        debug_assert!(self.in_cands(v));
        self.cand_mask.remove(v as usize);
        self.plex_mask.insert(v as usize);
        self.plex.push(v);
        for u in sg.iter_adj(v) {
            self.deg_in_plex[u] += 1;
        }
    }

    /// Moves candidate `v` into the local exclusion set.
    pub fn exclude(&mut self, sg: &SeedSubgraph, v: u32) {
        self.drop_candidate(sg, v);
        self.excl_local.insert(v as usize);
    }

    /// Removes candidate `v` entirely (it leaves the pool).
    pub fn drop_candidate(&mut self, sg: &SeedSubgraph, v: u32) {
        debug_assert!(self.in_cands(v));
        self.cand_mask.remove(v as usize);
        for u in sg.iter_adj(v) {
            self.deg_in_pool[u] -= 1;
        }
    }

    /// Drops a vertex from the local exclusion set.
    pub fn remove_excluded(&mut self, v: u32) {
        self.excl_local.remove(v as usize);
    }

    /// Deactivates entry `idx` of the earlier-ordered exclusion list.
    pub fn remove_excluded_before(&mut self, idx: usize) {
        self.excl_before.remove(idx);
    }

    /// Can `v` join the plex without breaking anyone's budget? True iff
    /// `members ∪ {v}` is a k-plex: `v` needs enough members adjacent to it
    /// and every member that is already out of budget must be its neighbor.
    pub fn can_join(&self, sg: &SeedSubgraph, v: u32, k: usize) -> bool {
        if (self.deg_in_plex[v as usize] as i64) < self.plex.len() as i64 + 1 - k as i64 {
            return false;
        }
        self.plex
            .iter()
            .all(|&u| self.missing(u) < k as i32 || sg.adjacent(u, v))
    }

    /// From-scratch consistency check used by tests: set disjointness,
    /// counter accuracy, the plex property, and (optionally) that every
    /// candidate/excluded vertex can still join.
    pub fn validate(&self, sg: &SeedSubgraph, k: usize, strict_sets: bool) -> Result<(), String> {
        let n = sg.len();
        for v in 0..n {
            let p = self.plex_mask.contains(v) as u8;
            let c = self.cand_mask.contains(v) as u8;
            let x = self.excl_local.contains(v) as u8;
            if p + c + x > 1 {
                return Err(format!("vertex {v} in more than one set"));
            }
        }
        let mut pool = self.plex_mask.clone();
        pool.union_with(&self.cand_mask);
        for v in 0..n as u32 {
            let dp = self.plex_mask.intersection_len(sg.adj_row(v)) as i32;
            if dp != self.deg_in_plex[v as usize] {
                return Err(format!(
                    "deg_in_plex[{v}] = {} but recount gives {dp}",
                    self.deg_in_plex[v as usize]
                ));
            }
            if pool.contains(v as usize) {
                let dq = pool.intersection_len(sg.adj_row(v)) as i32;
                if dq != self.deg_in_pool[v as usize] {
                    return Err(format!(
                        "deg_in_pool[{v}] = {} but recount gives {dq}",
                        self.deg_in_pool[v as usize]
                    ));
                }
            }
        }
        for &u in &self.plex {
            if self.missing(u) > k as i32 {
                return Err(format!("member {u} exceeds its budget"));
            }
        }
        if strict_sets {
            for v in self.cand_mask.iter().chain(self.excl_local.iter()) {
                if !self.can_join(sg, v as u32, k) {
                    return Err(format!("vertex {v} retained but cannot join"));
                }
            }
        }
        Ok(())
    }
}

/// A self-contained unit of search work: a state snapshot over a shared seed
/// subgraph. Any worker thread may execute it.
pub struct Task {
    pub subgraph: Arc<SeedSubgraph>,
    pub pair_matrix: Arc<PairMatrix>,
    pub state: SearchState,
    /// Vertices promoted into the plex by the parent step whose pair-matrix
    /// rows still need to be applied to the candidate and exclusion sets.
    pub pending_filter: Vec<u32>,
    pub created_at: Instant,
}

impl Task {
    pub fn new(
        subgraph: Arc<SeedSubgraph>,
        pair_matrix: Arc<PairMatrix>,
        state: SearchState,
        pending_filter: Vec<u32>,
    ) -> Task {
        Task {
            subgraph,
            pair_matrix,
            state,
            pending_filter,
            created_at: Instant::now(),
        }
    }
}
