//! Enumeration of all maximal k-plexes with at least `q` vertices.
//!
//! A k-plex relaxes the clique requirement: every member may miss links to
//! up to `k` members of the set, itself included. This crate enumerates all
//! maximal k-plexes that reach a size threshold `q >= 2k - 1` (which also
//! guarantees results are connected with diameter at most 2), using a
//! branch-and-bound search over per-seed subgraphs that can run on any
//! number of threads without changing the result set.
//!
//! The pipeline:
//!
//! 1. [`graph::parse_edge_list`] loads a simple undirected graph;
//! 2. [`graph::reduce_to_core`] shrinks it to its `(q - k)`-core, which must
//!    contain every qualifying result;
//! 3. [`graph::degeneracy_order`] fixes the seed order;
//! 4. [`scheduler::run`] builds one [`seed::SeedSubgraph`] per seed,
//!    decomposes it into [`state::Task`]s, and drives the
//!    [`branch`] search across worker threads with work stealing.
//!
//! ```
//! use kplex::graph::Graph;
//! use kplex::scheduler::{run, CollectSink, RunConfig};
//!
//! // Two triangles sharing an edge: one maximal 2-plex of size >= 4.
//! let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
//! let sink = CollectSink::new();
//! let stats = run(&g, &RunConfig::new(2, 4), &sink);
//! assert_eq!(stats.plex_count, 1);
//! assert_eq!(sink.into_results(), vec![vec![0, 1, 2, 3]]);
//! ```
//!
//! The independent brute-force checker in [`oracle`] exists so results can
//! be verified against something the search shares no code with.

pub mod bitset;
pub mod branch;
pub mod graph;
pub mod oracle;
pub mod scheduler;
pub mod seed;
pub mod state;
pub mod tasks;

pub use branch::{BranchConfig, Variant};
pub use graph::{degeneracy_order, parse_edge_list, reduce_to_core, DegeneracyOrder, Graph};
pub use oracle::{enumerate_naive, PlexSet};
pub use scheduler::{run, CollectSink, LineSink, Mode, NullSink, PlexSink, RunConfig, RunStats};

#[cfg(doctest)]
mod book_doctests;
