//! Compressed undirected graphs, edge-list parsing, core reduction and
//! degeneracy ordering.
//!
//! Vertices are dense `u32` ids assigned in first-appearance order of the
//! original labels; every later stage of the pipeline works on these internal
//! ids and maps back through [`Graph::original_id`] only when emitting
//! results.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

/// Immutable simple undirected graph in CSR form.
///
/// Invariants: adjacency is symmetric, has no self-loops or duplicates, and
/// every neighbor list is sorted ascending.
#[derive(Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    id_map: Vec<u64>,
}

impl Graph {
    /// Builds a graph over `n` vertices with identity labels from an edge
    /// list. Self-loops and duplicate edges are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        Self::build(n, edges, (0..n as u64).collect())
    }

    fn build(n: usize, edges: &[(u32, u32)], id_map: Vec<u64>) -> Graph {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            if u != v {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut neighbors = vec![0u32; offsets[n]];
        let mut cursor = offsets.clone();
        for &(u, v) in edges {
            if u != v {
                neighbors[cursor[u as usize]] = v;
                cursor[u as usize] += 1;
                neighbors[cursor[v as usize]] = u;
                cursor[v as usize] += 1;
            }
        }
        // Sort each list and strip duplicate edges, then re-compact.
        let mut out_neighbors = Vec::with_capacity(neighbors.len());
        let mut out_offsets = vec![0usize; n + 1];
        for v in 0..n {
            let list = &mut neighbors[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            let mut prev = None;
            for &u in list.iter() {
                if prev != Some(u) {
                    out_neighbors.push(u);
                    prev = Some(u);
                }
            }
            out_offsets[v + 1] = out_neighbors.len();
        }
        Graph {
            offsets: out_offsets,
            neighbors: out_neighbors,
            id_map,
        }
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// The label this vertex carried in the input.
    #[inline]
    pub fn original_id(&self, v: u32) -> u64 {
        self.id_map[v as usize]
    }

    pub fn id_map(&self) -> &[u64] {
        &self.id_map
    }

    /// Edges as internal-id pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.m())
    }
}

/// Error while reading an edge list.
#[derive(Debug)]
pub enum ParseError {
    Io(io::Error),
    /// A data line that does not consist of two unsigned integer tokens.
    Malformed { line: usize, content: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Io(e) => write!(f, "i/o error: {e}"),
            ParseError::Malformed { line, content } => {
                write!(f, "line {line}: malformed edge line {content:?}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

impl From<io::Error> for ParseError {
    fn from(e: io::Error) -> Self {
        ParseError::Io(e)
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments and blank lines are skipped.
/// Every data line holds two non-negative integer endpoints; token order does
/// not matter ("1 0" and "0 1" are the same edge). Self-loops are dropped and
/// duplicate edges collapse. Empty input yields the empty graph.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut id_map: Vec<u64> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let intern = |orig: u64, ids: &mut HashMap<u64, u32>, id_map: &mut Vec<u64>| -> u32 {
        *ids.entry(orig).or_insert_with(|| {
            id_map.push(orig);
            (id_map.len() - 1) as u32
        })
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b, rest) = (tokens.next(), tokens.next(), tokens.next());
        let (Some(a), Some(b), None) = (a, b, rest) else {
            return Err(ParseError::Malformed {
                line: idx + 1,
                content: trimmed.to_string(),
            });
        };
        let parse = |tok: &str| -> Result<u64, ParseError> {
            tok.parse::<u64>().map_err(|_| ParseError::Malformed {
                line: idx + 1,
                content: trimmed.to_string(),
            })
        };
        let u = intern(parse(a)?, &mut ids, &mut id_map);
        let v = intern(parse(b)?, &mut ids, &mut id_map);
        edges.push((u, v));
    }
    Ok(Graph::build(id_map.len(), &edges, id_map))
}

/// Writes the graph back out as one `u v` line per edge using original ids.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", g.original_id(u), g.original_id(v))?;
    }
    Ok(())
}

/// Returns the maximal induced subgraph in which every vertex has degree at
/// least `c`, obtained by repeatedly removing vertices of smaller degree.
///
/// The result is re-compacted; its id map still points at the original input
/// labels. The result may be empty.
pub fn reduce_to_core(g: &Graph, c: usize) -> Graph {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] < c).collect();
    while let Some(v) = queue.pop() {
        if removed[v as usize] {
            continue;
        }
        removed[v as usize] = true;
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                deg[u as usize] -= 1;
                if deg[u as usize] < c {
                    queue.push(u);
                }
            }
        }
    }
    // Survivors keep their relative order, so first-appearance numbering is
    // preserved through the compaction.
    let mut new_id = vec![u32::MAX; n];
    let mut id_map = Vec::new();
    for v in 0..n {
        if !removed[v] {
            new_id[v] = id_map.len() as u32;
            id_map.push(g.original_id(v as u32));
        }
    }
    let edges: Vec<(u32, u32)> = g
        .edges()
        .filter(|&(u, v)| !removed[u as usize] && !removed[v as usize])
        .map(|(u, v)| (new_id[u as usize], new_id[v as usize]))
        .collect();
    Graph::build(id_map.len(), &edges, id_map)
}

/// A peeling order of the vertices together with the degeneracy.
#[derive(Clone, Debug)]
pub struct DegeneracyOrder {
    /// Vertices in removal order.
    pub order: Vec<u32>,
    /// `rank[v]` is the position of `v` in `order`.
    pub rank: Vec<u32>,
    /// Largest minimum degree observed while peeling.
    pub degeneracy: usize,
}

impl DegeneracyOrder {
    /// An identity ordering, useful when the caller wants to pin seed
    /// positions explicitly (tests, toy inputs).
    pub fn identity(g: &Graph) -> DegeneracyOrder {
        let order: Vec<u32> = (0..g.n() as u32).collect();
        let rank = order.clone();
        let degeneracy = order
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&u| u > v).count())
            .max()
            .unwrap_or(0);
        DegeneracyOrder {
            order,
            rank,
            degeneracy,
        }
    }
}

/// Computes a degeneracy ordering by repeatedly removing a vertex of minimum
/// current degree, breaking ties by ascending vertex id so the order is
/// deterministic.
pub fn degeneracy_order(g: &Graph) -> DegeneracyOrder {
    let n = g.n();
    let mut deg: Vec<u32> = (0..n as u32).map(|v| g.degree(v) as u32).collect();
    // (current degree, vertex id); BTreeSet gives min-degree with id tie-break.
    let mut live: std::collections::BTreeSet<(u32, u32)> =
        (0..n as u32).map(|v| (deg[v as usize], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut rank = vec![0u32; n];
    let mut degeneracy = 0usize;
    while let Some(&(d, v)) = live.iter().next() {
        live.remove(&(d, v));
        removed[v as usize] = true;
        degeneracy = degeneracy.max(d as usize);
        rank[v as usize] = order.len() as u32;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                let du = deg[u as usize];
                live.remove(&(du, u));
                deg[u as usize] = du - 1;
                live.insert((du - 1, u));
            }
        }
    }
    DegeneracyOrder {
        order,
        rank,
        degeneracy,
    }
}
