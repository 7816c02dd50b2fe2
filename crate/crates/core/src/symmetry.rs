//! Canonical labeling and automorphism groups by individualization-refinement.
//!
//! The search tree is the usual one: the root is the equitable refinement of
//! the unit partition, children individualize one vertex of the first
//! non-singleton cell and refine again, and leaves are discrete partitions,
//! i.e. relabelings. The canonical leaf maximizes the pair (sequence of node
//! invariants, relabeled adjacency matrix). Two leaves with the same pair
//! differ by an automorphism; those automorphisms prune equivalent subtrees
//! and together generate the full group, whose order comes from a
//! stabilizer chain.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, BITSET_LIMIT};
use crate::group::{self, Perm, StabilizerChain, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("graph has {0} vertices; at most 64 are supported")]
    TooLarge(usize),
}

/// Relabeling-invariant certificate: the vertex count followed by the rows of
/// the canonically relabeled adjacency matrix, eight bytes per row.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm(")?;
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Automorphism group of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryResult {
    pub order: BigUint,
    /// Each generator is an image array: vertex `v` maps to `g[v]`.
    pub generators: Vec<Perm>,
    pub orbits: Vec<Vec<usize>>,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
}

impl SymmetryResult {
    pub fn edge_orbit_count(&self, g: &Graph) -> usize {
        edge_orbits(g, &self.generators).len()
    }
}

/// Canonical labeling of a graph: `labeling[p]` is the original vertex placed
/// at canonical position `p`.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub labeling: Vec<usize>,
    pub form: CanonicalForm,
    pub generators: Vec<Perm>,
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, SymmetryError> {
    Ok(canonicalize(g)?.form)
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool, SymmetryError> {
    if g.order() > BITSET_LIMIT {
        return Err(SymmetryError::TooLarge(g.order()));
    }
    if h.order() > BITSET_LIMIT {
        return Err(SymmetryError::TooLarge(h.order()));
    }
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

pub fn automorphisms(g: &Graph) -> Result<SymmetryResult, SymmetryError> {
    Ok(analyze(g)?.1)
}

/// Canonical form and automorphism group from a single search.
pub fn analyze(g: &Graph) -> Result<(CanonicalForm, SymmetryResult), SymmetryError> {
    let canon = canonicalize(g)?;
    let form = canon.form;
    let n = g.order();
    let chain = StabilizerChain::new(n, &canon.generators);
    let orbits = group::orbits(n, &canon.generators);
    let edge_transitive = edge_orbits(g, &canon.generators).len() <= 1;
    let result = SymmetryResult {
        order: chain.order(),
        vertex_transitive: orbits.len() == 1,
        orbits,
        edge_transitive,
        generators: canon.generators,
    };
    Ok((form, result))
}

/// Orbits of the induced action on edges, as lists of edge indices.
pub fn edge_orbits(g: &Graph, generators: &[Perm]) -> Vec<Vec<usize>> {
    let edges = g.edges();
    let mut uf = UnionFind::new(edges.len());
    for gen in generators {
        for (i, &(u, v)) in edges.iter().enumerate() {
            let (a, b) = (gen[u], gen[v]);
            let image = (a.min(b), a.max(b));
            let j = edges.binary_search(&image).expect("generator preserves adjacency");
            uf.union(i, j);
        }
    }
    uf.classes()
}

pub fn canonicalize(g: &Graph) -> Result<Canonical, SymmetryError> {
    let adj = g.adjacency_bits().ok_or(SymmetryError::TooLarge(g.order()))?.to_vec();
    let n = adj.len();
    let mut search = Search { n, adj, first: None, best: None, generators: Vec::new() };
    let all = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut cells = vec![all];
    let root_inv = refine(&search.adj, &mut cells, VecDeque::from([all]));
    let mut path = Vec::new();
    let mut invs = vec![root_inv];
    search.visit(&cells, &mut path, &mut invs);
    let best = search.best.expect("search reaches at least one leaf");
    let mut bytes = Vec::with_capacity(1 + 8 * n);
    bytes.push(n as u8);
    for row in &best.cert {
        bytes.extend_from_slice(&row.to_be_bytes());
    }
    Ok(Canonical { labeling: best.lab, form: CanonicalForm { bytes }, generators: search.generators })
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0100_0000_01b3).rotate_left(29) ^ 0x9e37_79b9_7f4a_7c15
}

/// Refines an ordered partition (cells as vertex bitsets) to the coarsest
/// equitable partition finer than it, splitting only against the queued cells
/// and what they break into. Fragments are ordered by ascending neighbor
/// count. Returns a hash of the split events, which depends only on cell
/// positions and sizes, never on vertex labels.
fn refine(adj: &[u64], cells: &mut Vec<u64>, mut queue: VecDeque<u64>) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    let mut counts = [0u32; 64];
    while let Some(splitter) = queue.pop_front() {
        let mut ci = 0;
        while ci < cells.len() {
            let cell = cells[ci];
            if cell & (cell - 1) == 0 {
                ci += 1;
                continue;
            }
            let mut present = 0u128;
            let mut rest = cell;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                let c = (adj[v] & splitter).count_ones();
                counts[v] = c;
                present |= 1 << c;
                rest &= rest - 1;
            }
            if present.count_ones() == 1 {
                ci += 1;
                continue;
            }
            let mut fragments = Vec::new();
            let mut values = present;
            while values != 0 {
                let c = values.trailing_zeros();
                let mut frag = 0u64;
                let mut rest = cell;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    if counts[v] == c {
                        frag |= 1 << v;
                    }
                    rest &= rest - 1;
                }
                h = mix(h, (u64::from(c) << 32) | u64::from(frag.count_ones()));
                fragments.push(frag);
                values &= values - 1;
            }
            h = mix(h, ci as u64);
            let len = fragments.len();
            queue.extend(fragments.iter().copied());
            cells.splice(ci..=ci, fragments);
            ci += len;
        }
    }
    mix(h, cells.len() as u64)
}

struct Leaf {
    lab: Vec<usize>,
    cert: Vec<u64>,
    invs: Vec<u64>,
    path: Vec<usize>,
}

struct Search {
    n: usize,
    adj: Vec<u64>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Perm>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search {
    /// Explores the subtree below the node given by `cells`. A returned
    /// `Some(level)` asks every node deeper than `level` to abandon its
    /// remaining children.
    fn visit(&mut self, cells: &[u64], path: &mut Vec<usize>, invs: &mut Vec<u64>) -> Option<usize> {
        if cells.len() == self.n {
            return self.leaf(cells, path, invs);
        }
        let level = path.len();
        let ti =
            cells.iter().position(|c| c.count_ones() > 1).expect("non-discrete partition has a non-singleton cell");
        let target = cells[ti];
        let mut explored: Vec<usize> = Vec::new();
        let mut rest = target;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !explored.is_empty() && self.equivalent_to_explored(path, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = cells.to_vec();
            child[ti] &= !(1u64 << v);
            child.insert(ti, 1u64 << v);
            let inv = mix(refine(&self.adj, &mut child, VecDeque::from([1u64 << v])), ti as u64);
            path.push(v);
            invs.push(inv);
            let jump = if self.viable(invs) { self.visit(&child, path, invs) } else { None };
            path.pop();
            invs.pop();
            if let Some(l) = jump {
                if l < level {
                    return Some(l);
                }
            }
        }
        None
    }

    /// Whether `v` lies in the orbit of an explored sibling under the
    /// automorphisms found so far that fix the current path pointwise.
    fn equivalent_to_explored(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        let stabilizing: Vec<&Perm> = self.generators.iter().filter(|g| path.iter().all(|&p| g[p] == p)).collect();
        if stabilizing.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.n);
        for g in stabilizing {
            for (x, &y) in g.iter().enumerate() {
                uf.union(x, y);
            }
        }
        let root = uf.find(v);
        explored.iter().any(|&u| uf.find(u) == root)
    }

    /// A node survives if its invariants match the first path (it may lead to
    /// an automorphism) or are not below the best path (it may be canonical).
    fn viable(&self, invs: &[u64]) -> bool {
        let (Some(first), Some(best)) = (&self.first, &self.best) else {
            return true;
        };
        if first.invs.len() >= invs.len() && first.invs[..invs.len()] == *invs {
            return true;
        }
        compare_invs(invs, &best.invs) != Ordering::Less
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize], invs: &[u64]) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut pos = vec![0usize; self.n];
        for (p, &v) in lab.iter().enumerate() {
            pos[v] = p;
        }
        let cert: Vec<u64> = lab
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                let mut nb = self.adj[v];
                while nb != 0 {
                    row |= 1 << pos[nb.trailing_zeros() as usize];
                    nb &= nb - 1;
                }
                row
            })
            .collect();
        let leaf = Leaf { lab, cert, invs: invs.to_vec(), path: path.to_vec() };

        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                cert: leaf.cert.clone(),
                invs: leaf.invs.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.invs == leaf.invs && first.cert == leaf.cert {
            let gamma = mapping(&first.lab, &leaf.lab);
            let jump = common_prefix(&leaf.path, &first.path);
            self.add_generator(gamma);
            return Some(jump);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match compare_invs(&leaf.invs, &best.invs).then_with(|| leaf.cert.cmp(&best.cert)) {
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => {
                let gamma = mapping(&best.lab, &leaf.lab);
                let jump = common_prefix(&leaf.path, &best.path);
                self.add_generator(gamma);
                Some(jump)
            }
            Ordering::Less => None,
        }
    }

    fn add_generator(&mut self, gamma: Perm) {
        debug_assert!((0..self.n).all(|u| {
            let mut nb = self.adj[u];
            let mut ok = true;
            while nb != 0 {
                let v = nb.trailing_zeros() as usize;
                ok &= self.adj[gamma[u]] >> gamma[v] & 1 == 1;
                nb &= nb - 1;
            }
            ok
        }));
        if !group::is_identity(&gamma) && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }
}

fn compare_invs(a: &[u64], b: &[u64]) -> Ordering {
    let common = a.len().min(b.len());
    a[..common].cmp(&b[..common]).then(a.len().cmp(&b.len()))
}

/// The permutation sending the vertex at each position of `from` to the vertex
/// at the same position of `to`.
fn mapping(from: &[usize], to: &[usize]) -> Perm {
    let mut gamma = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Counts automorphisms by extending partial maps vertex by vertex and
    /// checking adjacency against every already-mapped vertex.
    fn brute_force_aut_count(g: &Graph) -> u64 {
        fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
            let i = map.len();
            if i == g.order() {
                return 1;
            }
            let mut total = 0;
            for cand in 0..g.order() {
                if used[cand] || g.degree(cand) != g.degree(i) {
                    continue;
                }
                if (0..i).all(|j| g.has_edge(i, j) == g.has_edge(cand, map[j])) {
                    map.push(cand);
                    used[cand] = true;
                    total += extend(g, map, used);
                    used[cand] = false;
                    map.pop();
                }
            }
            total
        }
        extend(g, &mut Vec::new(), &mut vec![false; g.order()])
    }

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    }

    #[test]
    fn fixture_orders() {
        let cases = [
            (complete(4), 24u64),
            (cycle(5), 10),
            (petersen(), 120),
            (complete_bipartite(3, 3), 72),
            (heawood(), 336),
            (hypercube(3), 48),
            (brinkmann(), 14),
        ];
        for (g, order) in cases {
            let s = automorphisms(&g).unwrap();
            assert_eq!(s.order, BigUint::from(order), "{g:?}");
        }
    }

    #[test]
    fn petersen_is_transitive() {
        let s = automorphisms(&petersen()).unwrap();
        assert!(s.vertex_transitive);
        assert!(s.edge_transitive);
        assert_eq!(s.orbits.len(), 1);
        assert_eq!(s.edge_orbit_count(&petersen()), 1);
    }

    #[test]
    fn path_orbits() {
        let s = automorphisms(&path(4)).unwrap();
        assert_eq!(s.orbits, vec![vec![0, 3], vec![1, 2]]);
        assert!(!s.vertex_transitive);
        assert!(!s.edge_transitive);
        assert_eq!(s.order, BigUint::from(2u32));
    }

    #[test]
    fn generators_preserve_adjacency() {
        for g in [petersen(), heawood(), brinkmann(), hypercube(4)] {
            for gen in automorphisms(&g).unwrap().generators {
                for &(u, v) in g.edges() {
                    assert!(g.has_edge(gen[u], gen[v]));
                }
            }
        }
    }

    #[test]
    fn certificates_are_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = canonical_form(&petersen()).unwrap();
        for _ in 0..100 {
            let p = random_perm(10, &mut rng);
            assert_eq!(canonical_form(&petersen().permute(&p)).unwrap(), base);
        }
    }

    #[test]
    fn distinguishes_non_isomorphic_pairs() {
        let k33 = complete_bipartite(3, 3);
        let prism = cycle(3).cartesian_product(&complete(2));
        assert_ne!(canonical_form(&k33).unwrap(), canonical_form(&prism).unwrap());
        assert!(!is_isomorphic(&k33, &prism).unwrap());
        assert!(!is_isomorphic(&complete(4), &cycle(4)).unwrap());
        assert!(is_isomorphic(&petersen(), &kneser_5_2()).unwrap());
    }

    #[test]
    fn orders_match_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::Rng;
        for n in 1..=8 {
            for _ in 0..40 {
                let density: f64 = rng.gen_range(0.1..0.9);
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(density)).collect();
                let g = Graph::from_edges(n, pairs).unwrap();
                let s = automorphisms(&g).unwrap();
                assert_eq!(s.order, BigUint::from(brute_force_aut_count(&g)), "{g:?}");
            }
        }
    }

    #[test]
    fn too_large_is_rejected() {
        assert_eq!(canonical_form(&cycle(65)), Err(SymmetryError::TooLarge(65)));
        assert!(canonical_form(&cycle(64)).is_ok());
    }

    #[test]
    fn hypercube_q5_and_multipartite() {
        assert_eq!(automorphisms(&hypercube(5)).unwrap().order, BigUint::from(3840u32));
        // K_{4,4,4}: (4!)^3 * 3!
        let mut pairs = Vec::new();
        for u in 0..12 {
            for v in u + 1..12 {
                if u / 4 != v / 4 {
                    pairs.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(12, pairs).unwrap();
        assert_eq!(automorphisms(&g).unwrap().order, BigUint::from(82944u32));
    }
}
