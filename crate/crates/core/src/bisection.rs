//! Minimum bisection width: an exact branch-and-bound solver and a
//! Kernighan-Lin local search that seeds it with an upper bound.
//!
//! A bisection splits the vertices into two parts whose sizes differ by at
//! most one; its width is the number of edges crossing between the parts.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Restarts used by [`min_bisection`] to obtain its initial incumbent.
const SEED_RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisectionResult {
    pub width: usize,
    /// `witness[v]` is 0 when `v` is in the first part (the one holding
    /// vertex 0) and 1 otherwise.
    pub witness: Vec<u8>,
    /// True when `width` is certified minimal.
    pub exact: bool,
}

impl BisectionResult {
    pub fn parts(&self) -> (Vec<usize>, Vec<usize>) {
        let first = (0..self.witness.len()).filter(|&v| self.witness[v] == 0).collect();
        let second = (0..self.witness.len()).filter(|&v| self.witness[v] == 1).collect();
        (first, second)
    }
}

/// Number of edges whose endpoints lie on different sides.
pub fn cut_size(g: &Graph, side: &[u8]) -> usize {
    g.edges().iter().filter(|&&(u, v)| side[u] != side[v]).count()
}

pub fn is_balanced(side: &[u8]) -> bool {
    let ones = side.iter().filter(|&&s| s == 1).count();
    let zeros = side.len() - ones;
    zeros.abs_diff(ones) <= 1
}

/// Exact minimum bisection. Among all optimal bisections the witness is the
/// lexicographically least side vector, which puts vertex 0 in the first part.
pub fn min_bisection(g: &Graph) -> BisectionResult {
    let n = g.order();
    if n == 1 {
        return BisectionResult { width: 0, witness: vec![0], exact: true };
    }
    let seed = heuristic_bisection(g, SEED_RESTARTS, 0);
    let order = attachment_order(g);
    let mut solver = BranchAndBound::new(g, order, seed.width + 1);
    solver.run(true);
    let width = solver.best;

    let mut witness_search = BranchAndBound::new(g, (0..n).collect(), width + 1);
    witness_search.run(false);
    let witness = witness_search.witness.expect("an optimal bisection exists");
    debug_assert_eq!(cut_size(g, &witness), width);
    BisectionResult { width, witness, exact: true }
}

/// Vertex 0 first, then repeatedly the vertex with the most neighbors already
/// placed (lowest index on ties).
fn attachment_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut placed = vec![false; n];
    let mut attach = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut next = 0;
    for _ in 0..n {
        placed[next] = true;
        order.push(next);
        for &w in g.neighbors(next) {
            attach[w] += 1;
        }
        if let Some(v) = (0..n).filter(|&v| !placed[v]).max_by_key(|&v| (attach[v], std::cmp::Reverse(v))) {
            next = v;
        }
    }
    order
}

struct BranchAndBound<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    capacity: usize,
    side: Vec<u8>,
    /// `toward[v][s]`: neighbors of `v` already assigned to side `s`.
    toward: Vec<[usize; 2]>,
    sizes: [usize; 2],
    /// Searches for cuts strictly below this value.
    best: usize,
    witness: Option<Vec<u8>>,
}

const UNASSIGNED: u8 = 2;

impl<'a> BranchAndBound<'a> {
    fn new(g: &'a Graph, order: Vec<usize>, limit: usize) -> BranchAndBound<'a> {
        let n = g.order();
        BranchAndBound {
            g,
            order,
            capacity: n.div_ceil(2),
            side: vec![UNASSIGNED; n],
            toward: vec![[0, 0]; n],
            sizes: [0, 0],
            best: limit,
            witness: None,
        }
    }

    /// With `improve`, keeps tightening `best` and ends with the optimum in
    /// `best`. Without it, stops at the first bisection cutting fewer than
    /// `best` edges, exploring side 0 before side 1 in `order`.
    fn run(&mut self, improve: bool) {
        let first = self.order[0];
        self.assign(first, 0);
        self.search(1, 0, improve);
        if improve && self.witness.is_none() {
            // the seed was already optimal; `best` was set one above it
            self.best -= 1;
        }
    }

    fn assign(&mut self, v: usize, s: u8) {
        self.side[v] = s;
        self.sizes[s as usize] += 1;
        for &w in self.g.neighbors(v) {
            self.toward[w][s as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let s = self.side[v];
        self.side[v] = UNASSIGNED;
        self.sizes[s as usize] -= 1;
        for &w in self.g.neighbors(v) {
            self.toward[w][s as usize] -= 1;
        }
    }

    /// Edges that must cross once every open vertex is placed: each open vertex
    /// cuts at least its edges to the side it does not join, and a full side
    /// forces the choice.
    fn forced(&self, depth: usize) -> usize {
        let full = [self.sizes[0] == self.capacity, self.sizes[1] == self.capacity];
        self.order[depth..]
            .iter()
            .map(|&v| {
                let [a, b] = self.toward[v];
                match full {
                    [true, _] => a,
                    [_, true] => b,
                    _ => a.min(b),
                }
            })
            .sum()
    }

    fn search(&mut self, depth: usize, cut: usize, improve: bool) -> bool {
        if cut + self.forced(depth) >= self.best {
            return false;
        }
        if depth == self.order.len() {
            self.best = cut;
            self.witness = Some(self.side.clone());
            return !improve;
        }
        let v = self.order[depth];
        let sides: [u8; 2] = if improve && self.toward[v][1] > self.toward[v][0] { [1, 0] } else { [0, 1] };
        for s in sides {
            if self.sizes[s as usize] == self.capacity {
                continue;
            }
            let extra = self.toward[v][1 - s as usize];
            self.assign(v, s);
            let done = self.search(depth + 1, cut + extra, improve);
            self.unassign(v);
            if done {
                return true;
            }
        }
        false
    }
}

/// Kernighan-Lin local search from `restarts` random balanced starts. The
/// result is an upper bound on the bisection width and depends only on the
/// graph, `restarts` and `seed`.
pub fn heuristic_bisection(g: &Graph, restarts: usize, seed: u64) -> BisectionResult {
    assert!(restarts >= 1, "at least one restart is required");
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<u8>)> = None;
    for _ in 0..restarts {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut side = vec![1u8; n];
        for &v in &perm[..n.div_ceil(2)] {
            side[v] = 0;
        }
        kernighan_lin(g, &mut side);
        let cut = cut_size(g, &side);
        if best.as_ref().is_none_or(|(w, _)| cut < *w) {
            best = Some((cut, side));
        }
    }
    let (width, mut witness) = best.expect("restarts >= 1");
    if witness[0] == 1 {
        for s in &mut witness {
            *s ^= 1;
        }
    }
    BisectionResult { width, witness, exact: false }
}

/// Repeated Kernighan-Lin passes: tentatively swap the best unlocked pair
/// until one side is exhausted, then keep the prefix with the largest total
/// gain. Stops when a pass gains nothing.
fn kernighan_lin(g: &Graph, side: &mut [u8]) {
    let n = g.order();
    loop {
        let mut d: Vec<i64> =
            (0..n).map(|v| g.neighbors(v).iter().map(|&w| if side[w] != side[v] { 1 } else { -1 }).sum()).collect();
        let mut locked = vec![false; n];
        let mut trial = side.to_vec();
        let mut swaps = Vec::new();
        let mut total = 0i64;
        let mut best_total = 0i64;
        let mut best_len = 0;
        let pairs = trial.iter().filter(|&&s| s == 0).count().min(trial.iter().filter(|&&s| s == 1).count());
        for _ in 0..pairs {
            let mut pick: Option<(i64, usize, usize)> = None;
            for a in (0..n).filter(|&a| !locked[a] && trial[a] == 0) {
                for b in (0..n).filter(|&b| !locked[b] && trial[b] == 1) {
                    let gain = d[a] + d[b] - if g.has_edge(a, b) { 2 } else { 0 };
                    if pick.is_none_or(|(best, _, _)| gain > best) {
                        pick = Some((gain, a, b));
                    }
                }
            }
            let Some((gain, a, b)) = pick else { break };
            locked[a] = true;
            locked[b] = true;
            for x in (0..n).filter(|&x| !locked[x]) {
                let wa = i64::from(g.has_edge(x, a));
                let wb = i64::from(g.has_edge(x, b));
                if trial[x] == 0 {
                    d[x] += 2 * wa - 2 * wb;
                } else {
                    d[x] += 2 * wb - 2 * wa;
                }
            }
            trial[a] = 1;
            trial[b] = 0;
            swaps.push((a, b));
            total += gain;
            if total > best_total {
                best_total = total;
                best_len = swaps.len();
            }
        }
        if best_total <= 0 {
            return;
        }
        for &(a, b) in &swaps[..best_len] {
            side[a] = 1;
            side[b] = 0;
        }
    }
}
