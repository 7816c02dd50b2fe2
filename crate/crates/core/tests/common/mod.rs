//! Naive reference implementations shared by the integration and acceptance
//! tests. None of them reuse the library's search code.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regnet::bisection::min_bisection;
use regnet::bounds;
use regnet::enumerate;
use regnet::graph::{families, Graph};
use regnet::pipeline::{self, OptimalSet, Score};
use regnet::symmetry;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.order();
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Counts the bijections `g -> h` preserving adjacency, stopping at `limit`.
fn count_isomorphisms(g: &Graph, h: &Graph, limit: u64) -> u64 {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return 0;
    }
    let (a, b) = (adjacency(g), adjacency(h));
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(v: usize, a: &[Vec<bool>], b: &[Vec<bool>], image: &mut [usize], used: &mut [bool], limit: u64) -> u64 {
        let n = a.len();
        if v == n {
            return 1;
        }
        let mut found = 0;
        for w in 0..n {
            if used[w] || a[v].iter().filter(|&&x| x).count() != b[w].iter().filter(|&&x| x).count() {
                continue;
            }
            if (0..v).any(|u| a[v][u] != b[w][image[u]]) {
                continue;
            }
            image[v] = w;
            used[w] = true;
            found += go(v + 1, a, b, image, used, limit - found);
            used[w] = false;
            if found >= limit {
                break;
            }
        }
        found
    }
    go(0, &a, &b, &mut image, &mut used, limit)
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    count_isomorphisms(g, h, 1) == 1
}

pub fn brute_aut_order(g: &Graph) -> u64 {
    count_isomorphisms(g, g, u64::MAX)
}

/// Minimum cut over every balanced bipartition.
pub fn brute_bisection(g: &Graph) -> usize {
    let n = g.order();
    let half = n / 2;
    let mut best = usize::MAX;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != half {
            continue;
        }
        let cut = g.edges().iter().filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count();
        best = best.min(cut);
    }
    best
}

/// Every connected labeled `k`-regular graph on `n` vertices in which vertex 0
/// is adjacent to exactly `1..=k`. Every isomorphism class has such a labeling.
pub fn labeled_regular(n: usize, k: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    if n * k % 2 == 1 || k >= n {
        return out;
    }
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    for v in 1..=k {
        adj[0][v] = true;
        adj[v][0] = true;
        deg[v] = 1;
    }
    deg[0] = k;
    fn fill(u: usize, n: usize, k: usize, adj: &mut Vec<Vec<bool>>, deg: &mut Vec<usize>, out: &mut Vec<Graph>) {
        if u == n {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let g = Graph::from_edges(n, pairs.filter(|&(a, b)| adj[a][b]).collect::<Vec<_>>()).unwrap();
            if g.is_connected() {
                out.push(g);
            }
            return;
        }
        let need = k - deg[u];
        let open: Vec<usize> = (u + 1..n).filter(|&v| deg[v] < k).collect();
        if open.len() < need {
            return;
        }
        let mut chosen = Vec::with_capacity(need);
        choose(u, 0, need, &open, &mut chosen, n, k, adj, deg, out);
    }
    #[allow(clippy::too_many_arguments)]
    fn choose(
        u: usize,
        from: usize,
        need: usize,
        open: &[usize],
        chosen: &mut Vec<usize>,
        n: usize,
        k: usize,
        adj: &mut Vec<Vec<bool>>,
        deg: &mut Vec<usize>,
        out: &mut Vec<Graph>,
    ) {
        if chosen.len() == need {
            for &v in chosen.iter() {
                adj[u][v] = true;
                adj[v][u] = true;
                deg[v] += 1;
            }
            deg[u] = k;
            fill(u + 1, n, k, adj, deg, out);
            for &v in chosen.iter() {
                adj[u][v] = false;
                adj[v][u] = false;
                deg[v] -= 1;
            }
            deg[u] = k - need;
            return;
        }
        for i in from..open.len() {
            chosen.push(open[i]);
            choose(u, i + 1, need, open, chosen, n, k, adj, deg, out);
            chosen.pop();
        }
    }
    fill(1, n, k, &mut adj, &mut deg, &mut out);
    out
}

/// Sorted per-vertex distance histograms: equal for isomorphic graphs.
fn invariant(g: &Graph) -> Vec<Vec<usize>> {
    let mut rows: Vec<Vec<usize>> = (0..g.order())
        .map(|v| {
            let d = g.bfs_distances(v).dist;
            let mut hist = vec![0; g.order()];
            for x in d {
                hist[x as usize] += 1;
            }
            hist
        })
        .collect();
    rows.sort();
    rows
}

/// One representative per isomorphism class, by labeled generation and
/// pairwise isomorphism tests.
pub fn oracle_classes(n: usize, k: usize) -> Vec<Graph> {
    let mut buckets: HashMap<Vec<Vec<usize>>, Vec<Graph>> = HashMap::new();
    let mut reps = Vec::new();
    for g in labeled_regular(n, k) {
        let bucket = buckets.entry(invariant(&g)).or_default();
        if bucket.iter().all(|h| !brute_isomorphic(&g, h)) {
            bucket.push(g.clone());
            reps.push(g);
        }
    }
    reps
}

/// A uniformly relabeled random `k`-regular graph on `n` vertices, by the
/// pairing model with rejection of loops and multi-edges.
pub fn random_regular(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
        points.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        if pairs.iter().any(|&(u, v)| u == v) {
            continue;
        }
        pairs.sort();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::from_edges(n, pairs).unwrap();
    }
}

pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn all_graphs(n: usize, k: usize) -> Vec<Graph> {
    let mut v = Vec::new();
    enumerate::enumerate(n, k, |g| v.push(g.clone())).unwrap();
    v
}

/// Scores every enumerated graph with all four criteria, sorts, and keeps the
/// best, deduplicated by canonical form. Returns `(score, forms)`.
pub fn reference_optimum(n: usize, k: usize) -> (Score, Vec<symmetry::CanonicalForm>) {
    let graphs = if k == 2 { vec![families::cycle(n)] } else { all_graphs(n, k) };
    let mut scored: Vec<(Score, symmetry::CanonicalForm)> = graphs
        .iter()
        .map(|g| {
            let m = g.metrics();
            let score = Score {
                n,
                diameter: m.diameter.unwrap(),
                distance_sum: m.distance_sum,
                bisection: brute_bisection(g),
                aut_order: BigUint::from(brute_aut_order(g)),
            };
            (score, symmetry::canonical_form(g).unwrap())
        })
        .collect();
    scored.sort();
    let best = scored[0].0.clone();
    let mut forms: Vec<_> = scored.into_iter().take_while(|(s, _)| *s == best).map(|(_, f)| f).collect();
    forms.sort();
    forms.dedup();
    (best, forms)
}

/// Bound consistency of an optimal set: achieved values never beat the
/// bounds, and each flag is set exactly when its bound is attained.
pub fn check_bound_flags(set: &OptimalSet) -> Result<(), String> {
    let b = &set.bounds;
    for m in &set.graphs {
        let s = &m.score;
        if s.diameter < b.d_min || s.mpl() < b.mpl_min {
            return Err(format!("({},{}) beats its lower bound", set.n, set.k));
        }
        if (s.diameter == b.d_min) != set.diameter_meets_bound || (s.mpl() == b.mpl_min) != set.mpl_meets_bound {
            return Err(format!("({},{}) flags disagree with the bounds", set.n, set.k));
        }
    }
    Ok(())
}

/// Relabeling invariance of metrics, bisection width, group order and
/// canonical form.
pub fn check_relabeling_invariance(graphs: &[Graph], perms_per_graph: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for (i, g) in graphs.iter().enumerate() {
        let m = g.metrics();
        let width = min_bisection(g).width;
        let sym = symmetry::automorphisms(g).unwrap();
        let form = symmetry::canonical_form(g).unwrap();
        for _ in 0..perms_per_graph {
            let p = random_permutation(g.order(), &mut rng);
            let h = g.permute(&p);
            let hm = h.metrics();
            if (hm.diameter, hm.distance_sum) != (m.diameter, m.distance_sum) {
                return Err(format!("graph {i}: distances changed under {p:?}"));
            }
            if min_bisection(&h).width != width {
                return Err(format!("graph {i}: bisection changed under {p:?}"));
            }
            let hs = symmetry::automorphisms(&h).unwrap();
            if hs.order != sym.order || hs.orbits.len() != sym.orbits.len() {
                return Err(format!("graph {i}: group changed under {p:?}"));
            }
            if symmetry::canonical_form(&h).unwrap() != form {
                return Err(format!("graph {i}: canonical form changed under {p:?}"));
            }
        }
    }
    Ok(())
}

/// Small connected graphs used as product factors: all connected regular
/// graphs on at most 8 vertices plus paths, stars and a few irregular ones.
pub fn small_factors() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(families::path(n));
    }
    for n in 3..=8 {
        for k in 2..n {
            if n * k % 2 == 0 {
                out.extend(all_graphs(n, k));
            }
        }
    }
    out.push(families::complete_bipartite(1, 4));
    out.push(families::complete_bipartite(2, 3));
    out.push(Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap());
    out
}

/// d_{G x H}((u,v),(u',v')) = d_G(u,u') + d_H(v,v') for every factor pair.
pub fn check_product_additivity(factors: &[Graph]) -> Result<usize, String> {
    let mut pairs = 0;
    for g in factors {
        let dg: Vec<Vec<u32>> = (0..g.order()).map(|u| g.bfs_distances(u).dist).collect();
        for h in factors {
            let dh: Vec<Vec<u32>> = (0..h.order()).map(|v| h.bfs_distances(v).dist).collect();
            let p = g.cartesian_product(h);
            let m = h.order();
            for a in 0..p.order() {
                let row = p.bfs_distances(a).dist;
                for (b, &d) in row.iter().enumerate() {
                    if d != dg[a / m][b / m] + dh[a % m][b % m] {
                        return Err(format!("{}x{} vertices: distance {a}->{b} is {d}", g.order(), m));
                    }
                }
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// `diameter_lower_bound` inverts `moore_bound`: a Moore-size graph needs
/// diameter `d`, one more vertex needs `d + 1`.
pub fn check_moore_round_trip() -> Result<(), String> {
    for k in 3..=16 {
        for d in 1..=8u32 {
            let m = bounds::moore_bound(k, d).map_err(|e| e.to_string())?;
            let n = m as usize;
            if bounds::diameter_lower_bound(k, n).map_err(|e| e.to_string())? != d {
                return Err(format!("k={k} d={d}: Moore size {n} not mapped back to {d}"));
            }
            if bounds::diameter_lower_bound(k, n + 1).map_err(|e| e.to_string())? != d + 1 {
                return Err(format!("k={k} d={d}: {} vertices should need diameter {}", n + 1, d + 1));
            }
        }
    }
    Ok(())
}

/// The integer search agrees with the logarithmic closed form
/// `ceil(log_{k-1}((n(k-2)+2)/k))`, evaluated where floating point is
/// unambiguous.
pub fn check_log_closed_form(max_n: usize) -> Result<usize, String> {
    let mut checked = 0;
    for k in 3..=16usize {
        for n in k + 1..=max_n {
            let x = ((n * (k - 2) + 2) as f64 / k as f64).ln() / ((k - 1) as f64).ln();
            if (x - x.round()).abs() < 1e-9 {
                continue;
            }
            let closed = x.ceil().max(1.0) as u32;
            let searched = bounds::diameter_lower_bound(k, n).map_err(|e| e.to_string())?;
            if closed != searched {
                return Err(format!("k={k} n={n}: closed form {closed}, search {searched}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Random graphs of mixed degree for bisection and symmetry checks.
pub fn random_regular_batch(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(4..=max_n);
        let k = rng.gen_range(2..n.min(7));
        if n * k % 2 == 1 {
            continue;
        }
        out.push(random_regular(n, k, &mut rng));
    }
    out
}

pub fn quiet_options(jobs: usize) -> pipeline::OptimizeOptions {
    pipeline::OptimizeOptions { jobs, record_timing: false, ..Default::default() }
}
