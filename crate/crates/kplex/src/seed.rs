//! Seed subgraphs and the pair co-occurrence matrix.
//!
//! For a seed vertex `v` at position `i` of the degeneracy order, the search
//! for all maximal k-plexes whose order-minimum vertex is `v` only needs the
//! subgraph induced by the vertices at or after position `i` that lie within
//! two hops of `v`. Such results have diameter at most 2 once they reach the
//! size threshold, which also caps how far candidates can sit from the seed.
//!
//! The builder applies a common-neighbor filter: a vertex adjacent to the
//! seed must share at least `q - 2k` neighbors with it inside the subgraph,
//! and a non-adjacent vertex at least `q - 2k + 2`, or it cannot appear in
//! any qualifying result rooted at this seed. Removals can invalidate other
//! vertices, so the filter runs to fixpoint.

use crate::bitset::{count_and3, BitMatrix, BitSet};
use crate::graph::{DegeneracyOrder, Graph};
use std::collections::HashMap;

/// Distance class of a subgraph vertex relative to the seed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Hop {
    Seed,
    One,
    Two,
}

/// Dense view of one seed's search subgraph.
///
/// Local ids index into `verts`; local 0 is always the seed and the remaining
/// vertices appear in ascending internal-id order. `excluded_before` holds
/// the earlier-ordered vertices within two hops of the seed; they are only
/// ever consulted for maximality and keep their global ids.
pub struct SeedSubgraph {
    verts: Vec<u32>,
    adj: BitMatrix,
    hop: Vec<Hop>,
    degrees: Vec<u32>,
    one_hop: BitSet,
    two_hop: BitSet,
    excluded_before: Vec<u32>,
}

impl SeedSubgraph {
    /// Number of local vertices.
    #[inline]
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    #[inline]
    pub fn seed_global(&self) -> u32 {
        self.verts[0]
    }

    /// Global (internal graph) id of a local vertex.
    #[inline]
    pub fn global(&self, local: u32) -> u32 {
        self.verts[local as usize]
    }

    #[inline]
    pub fn adj_row(&self, local: u32) -> &[u64] {
        self.adj.row(local as usize)
    }

    #[inline]
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        self.adj.get(a as usize, b as usize)
    }

    /// Ascending iterator over the local neighbors of `v`.
    #[inline]
    pub fn iter_adj(&self, v: u32) -> crate::bitset::SetBits<'_> {
        self.adj.iter_row(v as usize)
    }

    #[inline]
    pub fn hop(&self, local: u32) -> Hop {
        self.hop[local as usize]
    }

    /// Degree within the subgraph, frozen at construction time.
    #[inline]
    pub fn degree(&self, local: u32) -> u32 {
        self.degrees[local as usize]
    }

    /// Neighbors of the seed (the base candidate pool).
    #[inline]
    pub fn one_hop(&self) -> &BitSet {
        &self.one_hop
    }

    /// Non-neighbors of the seed within the subgraph.
    #[inline]
    pub fn two_hop(&self) -> &BitSet {
        &self.two_hop
    }

    /// Earlier-ordered vertices within two hops, as global ids.
    #[inline]
    pub fn excluded_before(&self) -> &[u32] {
        &self.excluded_before
    }

    pub fn two_hop_list(&self) -> Vec<u32> {
        self.two_hop.iter().map(|v| v as u32).collect()
    }

    /// Builds a subgraph covering the whole graph with `seed` as local 0 and
    /// no pruning or order filtering. Intended for tests and examples that
    /// drive the search machinery on a hand-made instance.
    pub fn whole_graph(g: &Graph, seed: u32) -> SeedSubgraph {
        let mut verts = vec![seed];
        verts.extend((0..g.n() as u32).filter(|&v| v != seed));
        verts[1..].sort_unstable();
        finish(g, verts)
    }
}

/// Outcome of building one seed subgraph.
pub enum SeedBuild {
    Built(SeedSubgraph),
    /// Fewer than `q` vertices survived; the seed generates no tasks.
    Skip,
}

/// Builds the pruned seed subgraph for the seed at position `pos` of `ord`.
///
/// Starts from the seed, its later-ordered neighbors, and later-ordered
/// vertices two hops away, then applies the common-neighbor filter to
/// fixpoint. Returns [`SeedBuild::Skip`] when fewer than `q` vertices remain.
pub fn build_seed_subgraph(
    g: &Graph,
    ord: &DegeneracyOrder,
    pos: usize,
    k: usize,
    q: usize,
) -> SeedBuild {
    let seed = ord.order[pos];
    let rank = &ord.rank;
    let seed_rank = rank[seed as usize];

    // Gather the two-hop ball around the seed, split by order position.
    // Witnesses for two-hop membership may have any rank.
    let mut later: Vec<u32> = Vec::new();
    let mut earlier: Vec<u32> = Vec::new();
    let mut mark: HashMap<u32, ()> = HashMap::new();
    let visit = |v: u32, later: &mut Vec<u32>, earlier: &mut Vec<u32>, mark: &mut HashMap<u32, ()>| {
        if v == seed || mark.contains_key(&v) {
            return;
        }
        mark.insert(v, ());
        if rank[v as usize] > seed_rank {
            later.push(v);
        } else {
            earlier.push(v);
        }
    };
    for &w in g.neighbors(seed) {
        visit(w, &mut later, &mut earlier, &mut mark);
    }
    for &w in g.neighbors(seed) {
        for &u in g.neighbors(w) {
            visit(u, &mut later, &mut earlier, &mut mark);
        }
    }
    later.sort_unstable();
    earlier.sort_unstable();

    let mut verts = Vec::with_capacity(later.len() + 1);
    verts.push(seed);
    verts.extend(later);
    let mut sg = finish(g, verts);
    sg.excluded_before = earlier;

    prune_common_neighbors(&mut sg, g, k, q);
    if sg.len() < q {
        SeedBuild::Skip
    } else {
        SeedBuild::Built(sg)
    }
}

/// Induces the dense subgraph over `verts` (seed first, rest sorted).
fn finish(g: &Graph, verts: Vec<u32>) -> SeedSubgraph {
    let n = verts.len();
    let mut local_of: HashMap<u32, u32> = HashMap::with_capacity(n);
    for (i, &v) in verts.iter().enumerate() {
        local_of.insert(v, i as u32);
    }
    let mut adj = BitMatrix::new(n);
    for (i, &v) in verts.iter().enumerate() {
        for &u in g.neighbors(v) {
            if let Some(&j) = local_of.get(&u) {
                adj.set(i, j as usize);
            }
        }
    }
    let mut one_hop = BitSet::new(n);
    let mut two_hop = BitSet::new(n);
    let mut hop = vec![Hop::Seed; n];
    for (i, h) in hop.iter_mut().enumerate().skip(1) {
        if adj.get(0, i) {
            *h = Hop::One;
            one_hop.insert(i);
        } else {
            *h = Hop::Two;
            two_hop.insert(i);
        }
    }
    let degrees = (0..n).map(|i| adj.row_len(i) as u32).collect();
    SeedSubgraph {
        verts,
        adj,
        hop,
        degrees,
        one_hop,
        two_hop,
        excluded_before: Vec::new(),
    }
}

/// Removes vertices whose common-neighbor count with the seed is below the
/// qualifying threshold, repeating until stable, then re-compacts.
fn prune_common_neighbors(sg: &mut SeedSubgraph, g: &Graph, k: usize, q: usize) {
    let thr_one = q as i64 - 2 * k as i64;
    let thr_two = q as i64 - 2 * k as i64 + 2;
    let n = sg.len();
    let mut live = BitSet::full(n);
    loop {
        let mut removed_any = false;
        let seed_row = sg.adj.row(0);
        for v in 1..n {
            if !live.contains(v) {
                continue;
            }
            let common = count_and3(sg.adj.row(v), seed_row, live.words()) as i64;
            let thr = match sg.hop[v] {
                Hop::One => thr_one,
                Hop::Two => thr_two,
                Hop::Seed => unreachable!(),
            };
            if common < thr {
                live.remove(v);
                removed_any = true;
            }
        }
        if !removed_any {
            break;
        }
    }
    if live.len() == n {
        return;
    }
    let keep: Vec<u32> = live.iter().map(|v| sg.verts[v]).collect();
    let excluded = std::mem::take(&mut sg.excluded_before);
    *sg = finish(g, keep);
    sg.excluded_before = excluded;
}

/// Per-pair co-occurrence table over a seed subgraph.
///
/// `allowed(a, b)` is false only when a counting argument on common neighbors
/// inside the seed's candidate pool proves that `a` and `b` cannot appear
/// together in any k-plex of size at least `q` rooted at this seed. The
/// diagonal is true and the table is symmetric.
pub struct PairMatrix {
    t: BitMatrix,
}

impl PairMatrix {
    #[inline]
    pub fn allowed(&self, a: u32, b: u32) -> bool {
        self.t.get(a as usize, b as usize)
    }

    /// Row of vertices allowed to co-occur with `a`.
    #[inline]
    pub fn allowed_row(&self, a: u32) -> &[u64] {
        self.t.row(a as usize)
    }

    /// A matrix that allows every pair (used when pair pruning is disabled).
    pub fn all_true(n: usize) -> PairMatrix {
        let mut t = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                t.set(i, j);
            }
        }
        PairMatrix { t }
    }
}

/// Builds the pair table for `sg`.
///
/// The common-neighbor count for a pair is taken inside the seed's neighbor
/// pool. The minimum count required for the pair to survive depends on how
/// many non-neighbor slots the pair already consumes, which differs by hop
/// class and by whether the two vertices are adjacent:
///
/// | pair classes | adjacent            | non-adjacent                        |
/// |--------------|---------------------|-------------------------------------|
/// | two, two     | q-k-2*max(k-2,0)    | q-k-2*max(k-3,0)                    |
/// | two, one     | q-2k-max(k-2,0)     | q-k-max(k-2,0)-max(k-2,1)           |
/// | one, one     | q-3k                | q-k-2*max(k-1,1)                    |
///
/// A count below the threshold marks the pair as forbidden. Thresholds that
/// are not positive never fire, since counts are non-negative.
pub fn build_pair_matrix(sg: &SeedSubgraph, k: usize, q: usize) -> PairMatrix {
    let n = sg.len();
    let (k, q) = (k as i64, q as i64);
    let max0 = |x: i64| x.max(0);
    let thr = |a: Hop, b: Hop, adjacent: bool| -> i64 {
        match (a, b) {
            (Hop::Two, Hop::Two) => {
                if adjacent {
                    q - k - 2 * max0(k - 2)
                } else {
                    q - k - 2 * max0(k - 3)
                }
            }
            (Hop::Two, Hop::One) | (Hop::One, Hop::Two) => {
                if adjacent {
                    q - 2 * k - max0(k - 2)
                } else {
                    q - k - max0(k - 2) - (k - 2).max(1)
                }
            }
            (Hop::One, Hop::One) => {
                if adjacent {
                    q - 3 * k
                } else {
                    q - k - 2 * (k - 1).max(1)
                }
            }
            _ => unreachable!("seed has no pair row"),
        }
    };
    let mut t = BitMatrix::new(n);
    for i in 0..n {
        t.set(i, i);
        t.set_sym(0, i);
    }
    let pool = sg.one_hop.words();
    for a in 1..n {
        for b in a + 1..n {
            let adjacent = sg.adj.get(a, b);
            let common = count_and3(sg.adj.row(a), sg.adj.row(b), pool) as i64;
            if common >= thr(sg.hop[a], sg.hop[b], adjacent) {
                t.set_sym(a, b);
            }
        }
    }
    PairMatrix { t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degeneracy_order, DegeneracyOrder, Graph};

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// The seven-vertex illustration used across the search tests: vertex 0
    /// (v1) has neighbors {1, 4, 6}; vertex 2 (v3) has neighbors {1, 3}.
    pub(crate) fn toy_graph() -> Graph {
        // v1=0, v2=1, v3=2, v4=3, v5=4, v6=5, v7=6
        Graph::from_edges(
            7,
            &[(0, 1), (0, 4), (0, 6), (4, 6), (1, 2), (1, 4), (2, 3), (3, 4)],
        )
    }

    #[test]
    fn clique_seed_keeps_everything() {
        let g = complete(5);
        let ord = degeneracy_order(&g);
        match build_seed_subgraph(&g, &ord, 0, 1, 3) {
            SeedBuild::Built(sg) => {
                assert_eq!(sg.len(), 5);
                assert_eq!(sg.one_hop().len(), 4);
                assert!(sg.two_hop().is_empty());
                for v in 0..5 {
                    assert_eq!(sg.degree(v), 4);
                }
            }
            SeedBuild::Skip => panic!("clique must not be skipped"),
        }
    }

    #[test]
    fn star_seed_is_skipped() {
        // K_{1,5} with the center first: leaves share no neighbor with the
        // center, so they all fall to the one-hop filter at q=3, k=1.
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let ord = DegeneracyOrder::identity(&star);
        assert!(matches!(
            build_seed_subgraph(&star, &ord, 0, 1, 3),
            SeedBuild::Skip
        ));
    }

    #[test]
    fn toy_seed_neighborhood() {
        let g = toy_graph();
        let ord = DegeneracyOrder::identity(&g);
        // q=3 keeps the full two-hop ball: seed 0 plus {1,2,3,4,6}.
        match build_seed_subgraph(&g, &ord, 0, 2, 3) {
            SeedBuild::Built(sg) => {
                assert_eq!(sg.len(), 6);
                assert_eq!(sg.one_hop().len(), 3);
                assert_eq!(sg.degree(0), 3);
                // v3 keeps both its neighbors (v2 and v4) inside the ball.
                let local_v3 = (0..sg.len() as u32).find(|&l| sg.global(l) == 2).unwrap();
                assert_eq!(sg.degree(local_v3), 2);
            }
            SeedBuild::Skip => panic!("q=3 keeps the toy ball"),
        }
        // q=5 prunes both two-hop vertices (one common neighbor each, need
        // 3), dropping the ball below the size threshold.
        assert!(matches!(
            build_seed_subgraph(&g, &ord, 0, 2, 5),
            SeedBuild::Skip
        ));
    }

    #[test]
    fn pruning_cascades_to_fixpoint() {
        // Seed 0 sits in a solid block {0,7,8,9} and also touches a gadget
        // {1,2,3} where 2 and 3 lean on 1 alone. At k=1, q=4 the one-hop
        // threshold is 2: vertices 2 and 3 die in the first pass, which
        // starves vertex 1 (its common neighbors with the seed were exactly
        // {2,3}), so a second pass must remove it. A single-pass filter
        // would leave 1 in place.
        let g = Graph::from_edges(
            10,
            &[
                (0, 7),
                (0, 8),
                (0, 9),
                (7, 8),
                (7, 9),
                (8, 9),
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
            ],
        );
        let ord = DegeneracyOrder::identity(&g);
        let SeedBuild::Built(sg) = build_seed_subgraph(&g, &ord, 0, 1, 4) else {
            panic!("block {{0,7,8,9}} must survive")
        };
        let mut globals: Vec<u32> = (0..sg.len() as u32).map(|l| sg.global(l)).collect();
        globals.sort_unstable();
        assert_eq!(globals, vec![0, 7, 8, 9]);
    }

    #[test]
    fn order_filter_limits_to_later_vertices() {
        let g = complete(4);
        let ord = degeneracy_order(&g); // order = [0,1,2,3]
        match build_seed_subgraph(&g, &ord, 2, 1, 2) {
            SeedBuild::Built(sg) => {
                assert_eq!(sg.len(), 2);
                assert_eq!(sg.seed_global(), 2);
                assert_eq!(sg.excluded_before(), &[0, 1]);
            }
            SeedBuild::Skip => panic!(),
        }
    }

    #[test]
    fn clique_pairs_all_allowed() {
        let g = complete(6);
        let ord = degeneracy_order(&g);
        let SeedBuild::Built(sg) = build_seed_subgraph(&g, &ord, 0, 2, 5) else {
            panic!()
        };
        let pm = build_pair_matrix(&sg, 2, 5);
        for a in 0..sg.len() as u32 {
            for b in 0..sg.len() as u32 {
                assert!(pm.allowed(a, b), "pair ({a},{b}) wrongly forbidden");
            }
        }
    }

    #[test]
    fn sparse_one_hop_pair_forbidden() {
        // u1=1 and u2=2 are adjacent to each other and to the seed only.
        // With k=1, q=4 an adjacent one-hop pair needs q-3k = 1 common
        // neighbor in the candidate pool and this one has none.
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let sg = SeedSubgraph::whole_graph(&g, 0);
        let pm = build_pair_matrix(&sg, 1, 4);
        assert!(!pm.allowed(1, 2));
        assert!(!pm.allowed(2, 1));
        assert!(pm.allowed(1, 1));
        // At q=3 the threshold drops to 0 and the pair survives.
        let pm = build_pair_matrix(&sg, 1, 3);
        assert!(pm.allowed(1, 2));
    }

    #[test]
    fn adjacency_invariants_hold_after_pruning() {
        let g = toy_graph();
        let ord = DegeneracyOrder::identity(&g);
        let SeedBuild::Built(sg) = build_seed_subgraph(&g, &ord, 0, 2, 4) else {
            panic!()
        };
        for a in 0..sg.len() as u32 {
            assert!(!sg.adjacent(a, a), "diagonal must be empty");
            assert_eq!(sg.degree(a) as usize, sg.adj_row(a).iter().map(|w| w.count_ones() as usize).sum::<usize>());
            for b in 0..sg.len() as u32 {
                assert_eq!(sg.adjacent(a, b), sg.adjacent(b, a));
                assert_eq!(
                    sg.adjacent(a, b),
                    g.has_edge(sg.global(a), sg.global(b)),
                    "induced adjacency must match the graph"
                );
            }
        }
        // Every two-hop survivor shares a neighbor with the seed inside.
        for v in sg.two_hop().iter() {
            assert!(crate::bitset::count_and(sg.adj_row(v as u32), sg.adj_row(0)) >= 1);
        }
    }
}
