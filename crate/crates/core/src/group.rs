//! Permutation groups given by generators: a stabilizer chain built with the
//! Schreier-Sims algorithm, used for exact group orders and membership tests.
//!
//! Permutations are image arrays: `p[x]` is the image of point `x`.
//! Products are applied left to right, so `compose(a, b)[x] = b[a[x]]`.

use num_bigint::BigUint;

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// `a` followed by `b`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

struct Level {
    base: usize,
    /// `transversal[y]` maps the base point to `y`, for `y` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

/// A base and strong generating set for the group generated by some permutations.
pub struct StabilizerChain {
    n: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(n: usize, generators: &[Perm]) -> StabilizerChain {
        let mut chain = StabilizerChain { n, strong: Vec::new(), levels: Vec::new() };
        for g in generators {
            assert_eq!(g.len(), n, "generator degree mismatch");
            if !is_identity(g) && !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        if chain.strong.is_empty() {
            return chain;
        }
        for g in chain.strong.clone() {
            if chain.levels.iter().all(|l| g[l.base] == l.base) {
                let moved = (0..n).find(|&x| g[x] != x).expect("non-identity");
                chain.push_level(moved);
            }
        }
        chain.complete();
        chain
    }

    fn push_level(&mut self, base: usize) {
        self.levels.push(Level { base, transversal: Vec::new(), orbit: Vec::new() });
    }

    /// Strong generators fixing the first `i` base points.
    fn level_generators(&self, i: usize) -> Vec<&Perm> {
        let fixed: Vec<usize> = self.levels[..i].iter().map(|l| l.base).collect();
        self.strong.iter().filter(|g| fixed.iter().all(|&b| g[b] == b)).collect()
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens: Vec<Perm> = self.level_generators(i).into_iter().cloned().collect();
        let base = self.levels[i].base;
        let mut transversal: Vec<Option<Perm>> = vec![None; self.n];
        transversal[base] = Some(identity(self.n));
        let mut orbit = vec![base];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &gens {
                let y = g[x];
                if transversal[y].is_none() {
                    let t = compose(transversal[x].as_ref().unwrap(), g);
                    transversal[y] = Some(t);
                    orbit.push(y);
                }
            }
        }
        let level = &mut self.levels[i];
        level.transversal = transversal;
        level.orbit = orbit;
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for i in from..self.levels.len() {
            let level = &self.levels[i];
            let y = g[level.base];
            match &level.transversal[y] {
                Some(t) => g = compose(&g, &inverse(t)),
                None => return (g, i),
            }
        }
        let len = self.levels.len();
        (g, len)
    }

    fn complete(&mut self) {
        for i in 0..self.levels.len() {
            self.rebuild_orbit(i);
        }
        let mut i = self.levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let gens: Vec<Perm> = self.level_generators(lvl).into_iter().cloned().collect();
            let orbit = self.levels[lvl].orbit.clone();
            for &x in &orbit {
                for s in &gens {
                    let ux = self.levels[lvl].transversal[x].as_ref().unwrap();
                    let uy = self.levels[lvl].transversal[s[x]].as_ref().unwrap();
                    let schreier = compose(&compose(ux, s), &inverse(uy));
                    if is_identity(&schreier) {
                        continue;
                    }
                    let (h, j) = self.sift(schreier, lvl + 1);
                    if is_identity(&h) {
                        continue;
                    }
                    if j == self.levels.len() {
                        let moved = (0..self.n).find(|&p| h[p] != p).expect("non-identity");
                        self.push_level(moved);
                    }
                    self.strong.push(h);
                    for l in lvl + 1..=j {
                        self.rebuild_orbit(l);
                    }
                    i = j + 1;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        g.len() == self.n && is_identity(&self.sift(g.to_vec(), 0).0)
    }
}

/// Orbits of the group generated by `generators`, each sorted, listed by least element.
pub fn orbits(n: usize, generators: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for g in generators {
        for (x, &y) in g.iter().enumerate() {
            uf.union(x, y);
        }
    }
    uf.classes()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes keeping the smaller representative.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}
