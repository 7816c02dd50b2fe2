//! Simple undirected graphs, BFS distances and the path-length metrics used to
//! rank interconnection topologies.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Largest vertex count for which adjacency is also kept as `u64` bitsets.
pub const BITSET_LIMIT: usize = 64;

/// Hop count used for vertices that cannot be reached from the source.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// A simple undirected graph on the vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Neighbor lists are
/// derived from the edge set, and for graphs with at most 64 vertices every
/// vertex also carries a neighbor bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    bits: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from an arbitrary list of vertex pairs. Duplicate pairs
    /// (in either orientation) are collapsed.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Graph::from_sorted_edges(n, edges))
    }

    /// Builds a graph from neighbor bitsets (`n <= 64`). The bitsets must be
    /// symmetric and loop-free; this is checked in debug builds only.
    pub fn from_bitsets(rows: &[u64]) -> Graph {
        let n = rows.len();
        assert!((1..=BITSET_LIMIT).contains(&n));
        let mut edges = Vec::new();
        for (u, &row) in rows.iter().enumerate() {
            debug_assert_eq!(row >> u & 1, 0);
            let mut later = if u + 1 < 64 { row & (!0u64 << (u + 1)) } else { 0 };
            while later != 0 {
                let v = later.trailing_zeros() as usize;
                debug_assert_eq!(rows[v] >> u & 1, 1);
                edges.push((u, v));
                later &= later - 1;
            }
        }
        Graph::from_sorted_edges(n, edges)
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let bits = (n <= BITSET_LIMIT)
            .then(|| adj.iter().map(|list| list.iter().fold(0u64, |acc, &v| acc | 1 << v)).collect());
        Graph { n, edges, adj, bits }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.bits {
            Some(bits) => bits[u] >> v & 1 == 1,
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Neighbor bitsets, present when the graph has at most 64 vertices.
    pub fn adjacency_bits(&self) -> Option<&[u64]> {
        self.bits.as_deref()
    }

    /// Returns `(is_regular, k)`; `k` is the common degree when regular.
    pub fn degree_profile(&self) -> (bool, Option<usize>) {
        let k = self.degree(0);
        if self.adj.iter().all(|l| l.len() == k) {
            (true, Some(k))
        } else {
            (false, None)
        }
    }

    /// Relabels the graph so that vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v]));
        Graph::from_edges(self.n, edges).expect("a permutation preserves validity")
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).dist.iter().all(|&d| d != UNREACHABLE)
    }

    /// Unweighted single-source shortest path lengths.
    pub fn bfs_distances(&self, source: usize) -> DistanceRow {
        assert!(source < self.n, "source vertex out of range");
        let mut dist = vec![UNREACHABLE; self.n];
        dist[source] = 0;
        match &self.bits {
            Some(bits) => {
                let mut seen = 1u64 << source;
                let mut frontier = seen;
                let mut level = 0;
                while frontier != 0 {
                    level += 1;
                    let mut next = 0u64;
                    let mut f = frontier;
                    while f != 0 {
                        next |= bits[f.trailing_zeros() as usize];
                        f &= f - 1;
                    }
                    next &= !seen;
                    seen |= next;
                    frontier = next;
                    while next != 0 {
                        dist[next.trailing_zeros() as usize] = level;
                        next &= next - 1;
                    }
                }
            }
            None => {
                let mut queue = VecDeque::from([source]);
                while let Some(u) = queue.pop_front() {
                    for &v in &self.adj[u] {
                        if dist[v] == UNREACHABLE {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        DistanceRow { source, dist }
    }

    /// Diameter, total distance and mean path length from `n` BFS runs.
    pub fn metrics(&self) -> Metrics {
        let mut diameter = 0u32;
        let mut distance_sum = 0u64;
        let mut connected = true;
        for s in 0..self.n {
            for &d in &self.bfs_distances(s).dist {
                if d == UNREACHABLE {
                    connected = false;
                } else {
                    diameter = diameter.max(d);
                    distance_sum += u64::from(d);
                }
            }
        }
        Metrics { n: self.n, diameter: connected.then_some(diameter), distance_sum, connected }
    }

    /// Cartesian product. Vertex `(u, v)` of the result is `u * h.order() + v`.
    pub fn cartesian_product(&self, h: &Graph) -> Graph {
        let m = h.n;
        let mut edges = Vec::with_capacity(self.n * h.edge_count() + m * self.edge_count());
        for u in 0..self.n {
            for &(a, b) in &h.edges {
                edges.push((u * m + a, u * m + b));
            }
        }
        for &(a, b) in &self.edges {
            for v in 0..m {
                edges.push((a * m + v, b * m + v));
            }
        }
        edges.sort_unstable();
        Graph::from_sorted_edges(self.n * m, edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

/// Hop counts from one source vertex; [`UNREACHABLE`] marks other components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    pub source: usize,
    pub dist: Vec<u32>,
}

/// Exact distance statistics of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Metrics {
    pub n: usize,
    /// `None` when the graph is disconnected.
    pub diameter: Option<u32>,
    /// Sum of `d(u, v)` over ordered pairs of distinct, mutually reachable vertices.
    pub distance_sum: u64,
    pub connected: bool,
}

impl Metrics {
    /// Number of ordered pairs of distinct vertices, `n(n-1)`.
    pub fn pair_count(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1)
    }

    /// Mean path length as a reduced fraction; `None` if disconnected or `n = 1`.
    pub fn mpl(&self) -> Option<Ratio<u64>> {
        (self.connected && self.n > 1).then(|| Ratio::new(self.distance_sum, self.pair_count()))
    }
}

/// Formats a non-negative fraction with four decimals, rounding half up.
pub fn format_ratio4(r: &Ratio<u64>) -> String {
    let (num, den) = (u128::from(*r.numer()), u128::from(*r.denom()));
    let scaled = (num * 10_000 * 2 + den) / (den * 2);
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// Standard graph families used as fixtures and as product factors.
pub mod families {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, pairs).expect("valid complete graph")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::from_edges(a + b, pairs).expect("valid complete bipartite graph")
    }

    /// Outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram on `5..10`.
    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, pairs).expect("valid Petersen graph")
    }

    /// Point-line incidence graph of the Fano plane: points `0..7`, line `i`
    /// is vertex `7 + i` and contains the points `i, i+1, i+3 (mod 7)`.
    pub fn heawood() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..7 {
            for off in [0, 1, 3] {
                pairs.push(((i + off) % 7, 7 + i));
            }
        }
        Graph::from_edges(14, pairs).expect("valid Heawood graph")
    }

    /// Möbius ladder on 8 vertices: an 8-cycle plus its four long diagonals.
    pub fn wagner() -> Graph {
        let mut pairs: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        pairs.extend((0..4).map(|i| (i, i + 4)));
        Graph::from_edges(8, pairs).expect("valid Wagner graph")
    }

    /// The 4-regular Brinkmann graph on 21 vertices (girth 5, |Aut| = 14).
    pub fn brinkmann() -> Graph {
        const ADJ: [&[usize]; 18] = [
            &[2, 5, 7, 13],
            &[3, 6, 7, 8],
            &[4, 8, 9],
            &[5, 9, 10],
            &[6, 10, 11],
            &[11, 12],
            &[12, 13],
            &[15, 20],
            &[14, 16],
            &[15, 17],
            &[16, 18],
            &[17, 19],
            &[18, 20],
            &[14, 19],
            &[17, 18],
            &[18, 19],
            &[19, 20],
            &[20],
        ];
        let pairs = ADJ.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)));
        Graph::from_edges(21, pairs).expect("valid Brinkmann graph")
    }

    /// The `d`-dimensional hypercube as an iterated product of `K2`.
    pub fn hypercube(d: u32) -> Graph {
        let k2 = complete(2);
        let mut g = complete(1);
        for _ in 0..d {
            g = g.cartesian_product(&k2);
        }
        g
    }

    /// Kneser graph K(5, 2): 2-subsets of a 5-set, adjacent when disjoint.
    pub fn kneser_5_2() -> Graph {
        let subsets: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let mut pairs = Vec::new();
        for (i, &(a, b)) in subsets.iter().enumerate() {
            for (j, &(c, d)) in subsets.iter().enumerate().skip(i + 1) {
                if a != c && a != d && b != c && b != d {
                    pairs.push((i, j));
                }
            }
        }
        Graph::from_edges(10, pairs).expect("valid Kneser graph")
    }
}
