//! Brute-force reference enumerator.
//!
//! `enumerate_naive` scans every vertex subset of a small graph and keeps the
//! maximal k-plexes of size at least `q`. It shares no code with the search
//! engine and serves as the ground truth in tests, plus stand-alone validity
//! checks for emitted results.

use crate::graph::Graph;
use std::fmt;

/// Maximum vertex count the subset scan will accept.
pub const ORACLE_MAX_N: usize = 25;

/// Canonical result collection: each set sorted ascending by original id, the
/// list of sets sorted lexicographically, no duplicates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlexSet(Vec<Vec<u64>>);

impl PlexSet {
    pub fn from_sets(sets: impl IntoIterator<Item = Vec<u64>>) -> PlexSet {
        let mut list: Vec<Vec<u64>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        list.sort();
        list.dedup();
        PlexSet(list)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sets(&self) -> &[Vec<u64>] {
        &self.0
    }
}

impl fmt::Display for PlexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            let line: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum OracleError {
    /// The subset scan is exponential; refuse anything past [`ORACLE_MAX_N`].
    TooLarge { n: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n } => {
                write!(f, "oracle rejects n={n} > {ORACLE_MAX_N} vertices")
            }
        }
    }
}

impl std::error::Error for OracleError {}

fn adjacency_rows(g: &Graph) -> Vec<u32> {
    let mut rows = vec![0u32; g.n()];
    for v in 0..g.n() as u32 {
        for &u in g.neighbors(v) {
            rows[v as usize] |= 1 << u;
        }
    }
    rows
}

fn is_kplex(rows: &[u32], mask: u32, k: usize) -> bool {
    let size = mask.count_ones() as usize;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if ((rows[v] & mask).count_ones() as usize) + k < size {
            return false;
        }
    }
    true
}

/// Enumerates all maximal k-plexes with at least `q` vertices by scanning all
/// `2^n` vertex subsets. Maximality is a single-vertex test, which suffices
/// because every subset of a k-plex is itself a k-plex.
pub fn enumerate_naive(g: &Graph, k: usize, q: usize) -> Result<PlexSet, OracleError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge { n });
    }
    let rows = adjacency_rows(g);
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut found = Vec::new();
    for mask in 1u32..=all {
        if (mask.count_ones() as usize) < q || !is_kplex(&rows, mask, k) {
            continue;
        }
        let mut maximal = true;
        let mut outside = all & !mask;
        while outside != 0 {
            let v = outside.trailing_zeros();
            outside &= outside - 1;
            if is_kplex(&rows, mask | (1 << v), k) {
                maximal = false;
                break;
            }
        }
        if maximal {
            let members: Vec<u64> = (0..n as u32)
                .filter(|&v| mask >> v & 1 == 1)
                .map(|v| g.original_id(v))
                .collect();
            found.push(members);
        }
    }
    Ok(PlexSet::from_sets(found))
}

/// Reusable checker for emitted results; builds the original-id lookup once.
pub struct PlexChecker<'g> {
    g: &'g Graph,
    k: usize,
    q: usize,
    by_original: std::collections::HashMap<u64, u32>,
}

impl<'g> PlexChecker<'g> {
    pub fn new(g: &'g Graph, k: usize, q: usize) -> Self {
        let by_original = g
            .id_map()
            .iter()
            .enumerate()
            .map(|(v, &o)| (o, v as u32))
            .collect();
        PlexChecker {
            g,
            k,
            q,
            by_original,
        }
    }

    /// Full validity check of one emitted result against the original graph:
    /// degree bound, size bound, single-vertex maximality over all of `g`,
    /// and a connected induced subgraph of diameter at most 2.
    ///
    /// `plex` holds original ids. Returns the first violation found.
    pub fn check(&self, plex: &[u64]) -> Result<(), String> {
        let (g, k) = (self.g, self.k);
        if plex.len() < self.q {
            return Err(format!("size {} below threshold {}", plex.len(), self.q));
        }
        let mut internal = Vec::with_capacity(plex.len());
        for &orig in plex {
            match self.by_original.get(&orig) {
                Some(&v) => internal.push(v),
                None => return Err(format!("vertex {orig} not in graph")),
            }
        }
        let mut inside = vec![false; g.n()];
        for &v in &internal {
            inside[v as usize] = true;
        }
        let deg_in =
            |v: u32| g.neighbors(v).iter().filter(|&&u| inside[u as usize]).count();
        let degs: Vec<usize> = internal.iter().map(|&v| deg_in(v)).collect();
        for (&v, &dv) in internal.iter().zip(&degs) {
            if dv + k < plex.len() {
                return Err(format!(
                    "vertex {} has {} neighbors inside, needs {}",
                    g.original_id(v),
                    dv,
                    plex.len() as i64 - k as i64
                ));
            }
        }
        // Single-vertex maximality against the whole graph.
        for x in 0..g.n() as u32 {
            if inside[x as usize] {
                continue;
            }
            let dx = deg_in(x);
            if dx + k < plex.len() + 1 {
                continue;
            }
            let extends = internal.iter().zip(&degs).all(|(&v, &dv)| {
                dv + usize::from(g.has_edge(v, x)) + k > plex.len()
            });
            if extends {
                return Err(format!("extendable by vertex {}", g.original_id(x)));
            }
        }
        // Connectivity and diameter <= 2 within the induced subgraph: the
        // two-hop ball from each member must cover all members.
        for &v in &internal {
            let mut seen = vec![false; g.n()];
            seen[v as usize] = true;
            let mut covered = 1;
            let mut frontier = vec![v];
            for _ in 0..2 {
                let mut next = Vec::new();
                for &w in &frontier {
                    for &u in g.neighbors(w) {
                        if inside[u as usize] && !seen[u as usize] {
                            seen[u as usize] = true;
                            covered += 1;
                            next.push(u);
                        }
                    }
                }
                frontier = next;
            }
            if covered != internal.len() {
                return Err(format!(
                    "diameter exceeds 2 from vertex {}",
                    g.original_id(v)
                ));
            }
        }
        Ok(())
    }
}

/// One-shot form of [`PlexChecker::check`].
pub fn check_plex(g: &Graph, k: usize, q: usize, plex: &[u64]) -> Result<(), String> {
    PlexChecker::new(g, k, q).check(plex)
}
