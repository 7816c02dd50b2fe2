//! Isomorph-free generation of connected `k`-regular graphs.
//!
//! Orderly generation over the adjacency matrix, filled one complete row at a
//! time. A graph is emitted only in its canonical labeling: the one whose
//! matrix, read row by row with column 0 most significant, is lexicographically
//! largest. Every prefix of rows is checked against relabelings that keep the
//! compared rows fully determined, so each isomorphism class is reached along
//! exactly one path of the search tree and no global table is needed.
//!
//! Three facts about the maximal matrix keep the tree small:
//!
//! * Vertices after the current row that agree on every decided row form a
//!   contiguous cell, and a row always takes the *first* few vertices of each
//!   cell as its new neighbors.
//! * In a connected graph every vertex other than 0 has a smaller neighbor, so
//!   vertex `i + 1` must already be adjacent to something once row `i` is done.
//! * Residual degrees must remain satisfiable by the vertices still open.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, BITSET_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("no {k}-regular graph on {n} vertices exists: n*k is odd")]
    ParityViolation { n: usize, k: usize },
    #[error("degree {k} is invalid for {n} vertices (need 1 <= k < n)")]
    InvalidDegree { n: usize, k: usize },
    #[error("generation supports at most 64 vertices, got {0}")]
    TooLarge(usize),
    #[error("malformed task record: {0}")]
    BadTask(String),
}

/// Counters reported by a generation run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenStats {
    /// Non-isomorphic connected `k`-regular graphs emitted.
    pub generated: u64,
    /// Search nodes (accepted row prefixes) visited.
    pub visited: u64,
    /// Row prefixes rejected because a relabeling gives a larger matrix.
    pub rejected_iso: u64,
}

impl GenStats {
    pub fn merge(&mut self, other: &GenStats) {
        self.generated += other.generated;
        self.visited += other.visited;
        self.rejected_iso += other.rejected_iso;
    }
}

/// An independent subtree of the generation search: the first `rows`
/// adjacency rows are decided and given by `edges`.
///
/// The text record is `n k rows u-v u-v ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenTask {
    pub n: usize,
    pub k: usize,
    pub rows: usize,
    pub edges: Vec<(usize, usize)>,
}

impl fmt::Display for GenTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.n, self.k, self.rows)?;
        for (u, v) in &self.edges {
            write!(f, " {u}-{v}")?;
        }
        Ok(())
    }
}

impl FromStr for GenTask {
    type Err = EnumerateError;

    fn from_str(s: &str) -> Result<GenTask, EnumerateError> {
        let bad = || EnumerateError::BadTask(s.to_string());
        let mut parts = s.split_whitespace();
        let mut num = || -> Result<usize, EnumerateError> { parts.next().ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let (n, k, rows) = (num()?, num()?, num()?);
        let edges = s
            .split_whitespace()
            .skip(3)
            .map(|e| {
                let (u, v) = e.split_once('-').ok_or_else(bad)?;
                Ok((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?))
            })
            .collect::<Result<Vec<_>, EnumerateError>>()?;
        check_params(n, k)?;
        if rows > n || edges.iter().any(|&(u, v)| u >= v || v >= n) {
            return Err(bad());
        }
        Ok(GenTask { n, k, rows, edges })
    }
}

fn check_params(n: usize, k: usize) -> Result<(), EnumerateError> {
    if n > BITSET_LIMIT {
        return Err(EnumerateError::TooLarge(n));
    }
    if k == 0 || k >= n {
        return Err(EnumerateError::InvalidDegree { n, k });
    }
    if n * k % 2 == 1 {
        return Err(EnumerateError::ParityViolation { n, k });
    }
    Ok(())
}

/// Calls `consumer` once per isomorphism class of connected `k`-regular
/// graphs on `n` vertices, each in its canonical (lexicographically maximal)
/// labeling.
pub fn enumerate<F>(n: usize, k: usize, mut consumer: F) -> Result<GenStats, EnumerateError>
where
    F: FnMut(&Graph),
{
    check_params(n, k)?;
    let mut gen = Generator::new(n, k);
    gen.descend(0, None, &mut |g| consumer(g), &mut |_| {});
    Ok(gen.stats)
}

/// Splits the search into independent tasks rooted `split_depth` rows deep.
/// Running every task reproduces `enumerate` exactly, in the same order.
pub fn split_tasks(n: usize, k: usize, split_depth: usize) -> Result<Vec<GenTask>, EnumerateError> {
    Ok(split_tasks_counted(n, k, split_depth)?.0)
}

/// Like [`split_tasks`], also returning the statistics of the search above the
/// split. Adding the statistics of every task gives those of `enumerate`.
pub fn split_tasks_counted(n: usize, k: usize, split_depth: usize) -> Result<(Vec<GenTask>, GenStats), EnumerateError> {
    check_params(n, k)?;
    let mut gen = Generator::new(n, k);
    let mut tasks = Vec::new();
    gen.descend(0, Some(split_depth.min(n)), &mut |_| {}, &mut |t| tasks.push(t));
    Ok((tasks, gen.stats))
}

/// Runs one task produced by [`split_tasks`].
pub fn run_task<F>(task: &GenTask, mut consumer: F) -> Result<GenStats, EnumerateError>
where
    F: FnMut(&Graph),
{
    check_params(task.n, task.k)?;
    let mut gen = Generator::new(task.n, task.k);
    for &(u, v) in &task.edges {
        gen.adj[u] |= 1 << v;
        gen.adj[v] |= 1 << u;
        gen.deg[u] += 1;
        gen.deg[v] += 1;
    }
    gen.descend(task.rows, None, &mut |g| consumer(g), &mut |_| {});
    // the task root was already counted when the task was split off
    gen.stats.visited -= 1;
    Ok(gen.stats)
}

struct Generator {
    n: usize,
    k: usize,
    adj: Vec<u64>,
    deg: Vec<usize>,
    stats: GenStats,
}

impl Generator {
    fn new(n: usize, k: usize) -> Generator {
        Generator { n, k, adj: vec![0; n], deg: vec![0; n], stats: GenStats::default() }
    }

    fn snapshot(&self, rows: usize) -> GenTask {
        let mut edges = Vec::new();
        for u in 0..self.n {
            let mut later = self.adj[u] & !low_mask(u + 1);
            while later != 0 {
                edges.push((u, later.trailing_zeros() as usize));
                later &= later - 1;
            }
        }
        GenTask { n: self.n, k: self.k, rows, edges }
    }

    /// Cells of the vertices `from..n`: maximal runs agreeing on rows `< from`.
    fn cells(&self, from: usize) -> Vec<(usize, usize)> {
        let mask = low_mask(from);
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for p in from..self.n {
            match cells.last_mut() {
                Some((start, len)) if self.adj[*start] & mask == self.adj[p] & mask => *len += 1,
                _ => cells.push((p, 1)),
            }
        }
        cells
    }

    /// Rows `0..row` are decided and accepted.
    fn descend(
        &mut self,
        row: usize,
        split: Option<usize>,
        emit: &mut dyn FnMut(&Graph),
        collect: &mut dyn FnMut(GenTask),
    ) {
        self.stats.visited += 1;
        if split == Some(row) {
            collect(self.snapshot(row));
            return;
        }
        if row == self.n {
            self.stats.generated += 1;
            emit(&Graph::from_bitsets(&self.adj));
            return;
        }
        let need = self.k - self.deg[row];
        let mut cells = self.cells(row);
        // the row's own vertex leaves its cell
        cells[0].0 += 1;
        cells[0].1 -= 1;
        if cells[0].1 == 0 {
            cells.remove(0);
        }
        let mut counts = vec![0usize; cells.len()];
        self.choose(row, &cells, 0, need, &mut counts, split, emit, collect);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        row: usize,
        cells: &[(usize, usize)],
        idx: usize,
        need: usize,
        counts: &mut Vec<usize>,
        split: Option<usize>,
        emit: &mut dyn FnMut(&Graph),
        collect: &mut dyn FnMut(GenTask),
    ) {
        if need == 0 {
            let chosen: u64 = cells
                .iter()
                .zip(counts.iter())
                .take(idx)
                .fold(0, |acc, (&(start, _), &c)| acc | (low_mask(start + c) & !low_mask(start)));
            self.apply(row, chosen, split, emit, collect);
            return;
        }
        if idx == cells.len() {
            return;
        }
        let remaining: usize = cells[idx..].iter().map(|c| c.1).sum();
        if remaining < need {
            return;
        }
        let (start, len) = cells[idx];
        let max = if self.deg[start] < self.k { len.min(need) } else { 0 };
        for c in (0..=max).rev() {
            counts[idx] = c;
            self.choose(row, cells, idx + 1, need - c, counts, split, emit, collect);
        }
        counts[idx] = 0;
    }

    fn apply(
        &mut self,
        row: usize,
        chosen: u64,
        split: Option<usize>,
        emit: &mut dyn FnMut(&Graph),
        collect: &mut dyn FnMut(GenTask),
    ) {
        let mut bits = chosen;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            self.adj[v] |= 1 << row;
            self.deg[v] += 1;
            bits &= bits - 1;
        }
        self.adj[row] |= chosen;
        self.deg[row] = self.k;

        if self.feasible(row) {
            if self.beaten(row + 1) {
                self.stats.rejected_iso += 1;
            } else {
                self.descend(row + 1, split, emit, collect);
            }
        }

        self.adj[row] &= !chosen;
        self.deg[row] -= chosen.count_ones() as usize;
        let mut bits = chosen;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            self.adj[v] &= !(1 << row);
            self.deg[v] -= 1;
            bits &= bits - 1;
        }
    }

    /// Degree and connectivity conditions once row `row` is complete.
    fn feasible(&self, row: usize) -> bool {
        let next = row + 1;
        if next == self.n {
            return true;
        }
        if self.deg[next] == 0 {
            return false;
        }
        let others = self.n - next - 1;
        let mut total = 0;
        for v in next..self.n {
            let need = self.k - self.deg[v];
            if need > others {
                return false;
            }
            total += need;
        }
        total % 2 == 0
    }

    /// Whether some relabeling makes the first `known` rows strictly larger,
    /// using only relabelings whose compared rows come from decided vertices.
    fn beaten(&self, known: usize) -> bool {
        let all = low_mask(self.n);
        self.beats_from(0, &[all], known)
    }

    fn beats_from(&self, pos: usize, cells: &[u64], known: usize) -> bool {
        let decided = low_mask(known);
        let target = self.adj[pos] & !low_mask(pos + 1);
        let mut candidates = cells[0] & decided;
        let mut tried = 0u64;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let nb = self.adj[v];
            // swapping twins is an automorphism fixing every placed vertex,
            // so a twin of a tried vertex leads to an identical subtree
            let is_twin = |u: usize| {
                let pair = 1u64 << u | 1 << v;
                self.adj[u] & !pair == nb & !pair
            };
            if bits(tried).any(is_twin) {
                continue;
            }
            tried |= 1 << v;
            let mut row = 0u64;
            let mut at = pos + 1;
            let mut next_cells = Vec::with_capacity(cells.len() + 4);
            for (i, &cell) in cells.iter().enumerate() {
                let cell = if i == 0 { cell & !(1 << v) } else { cell };
                if cell == 0 {
                    continue;
                }
                let inside = cell & nb;
                let outside = cell & !nb;
                let c = inside.count_ones() as usize;
                row |= low_mask(at + c) & !low_mask(at);
                at += cell.count_ones() as usize;
                if inside != 0 {
                    next_cells.push(inside);
                }
                if outside != 0 {
                    next_cells.push(outside);
                }
            }
            let diff = row ^ target;
            if diff != 0 {
                if row & (diff & diff.wrapping_neg()) != 0 {
                    return true;
                }
                continue;
            }
            if pos + 1 < known && self.beats_from(pos + 1, &next_cells, known) {
                return true;
            }
        }
        false
    }
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (set != 0).then(|| {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            v
        })
    })
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, k: usize) -> u64 {
        enumerate(n, k, |_| {}).unwrap().generated
    }

    #[test]
    fn small_cubic_counts() {
        assert_eq!(count(4, 3), 1);
        assert_eq!(count(6, 3), 2);
        assert_eq!(count(8, 3), 5);
        assert_eq!(count(10, 3), 19);
    }

    #[test]
    fn degenerate_degrees() {
        assert_eq!(count(2, 1), 1);
        assert_eq!(count(4, 1), 0);
        for n in 3..12 {
            assert_eq!(count(n, 2), 1, "n = {n}");
            assert_eq!(count(n, n - 1), 1, "n = {n}");
        }
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(enumerate(5, 3, |_| {}).unwrap_err(), EnumerateError::ParityViolation { n: 5, k: 3 });
        assert_eq!(enumerate(4, 4, |_| {}).unwrap_err(), EnumerateError::InvalidDegree { n: 4, k: 4 });
        assert_eq!(enumerate(66, 3, |_| {}).unwrap_err(), EnumerateError::TooLarge(66));
    }

    #[test]
    fn k4_is_emitted_canonically() {
        let mut seen = Vec::new();
        enumerate(4, 3, |g| seen.push(g.clone())).unwrap();
        assert_eq!(seen, vec![crate::graph::families::complete(4)]);
    }

    #[test]
    fn emitted_graphs_are_connected_regular() {
        enumerate(10, 4, |g| {
            assert_eq!(g.degree_profile(), (true, Some(4)));
            assert!(g.is_connected());
        })
        .unwrap();
    }

    #[test]
    fn task_records_round_trip() {
        for task in split_tasks(10, 3, 3).unwrap() {
            let text = task.to_string();
            assert_eq!(text.parse::<GenTask>().unwrap(), task);
        }
        assert!("10 3".parse::<GenTask>().is_err());
        assert!("10 3 2 0-0".parse::<GenTask>().is_err());
        assert!("9 3 0".parse::<GenTask>().is_err());
    }

    #[test]
    fn depth_zero_is_a_single_task() {
        let tasks = split_tasks(6, 3, 0).unwrap();
        assert_eq!(tasks.len(), 1);
        let mut n = 0;
        run_task(&tasks[0], |_| n += 1).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn stats_are_consistent() {
        let stats = enumerate(10, 3, |_| {}).unwrap();
        assert!(stats.generated <= stats.visited);
        assert!(stats.rejected_iso > 0);
        let mut split = GenStats::default();
        let tasks = split_tasks(10, 3, 4).unwrap();
        let mut prefix = Generator::new(10, 3);
        prefix.descend(0, Some(4), &mut |_| {}, &mut |_| {});
        split.visited += prefix.stats.visited;
        split.rejected_iso += prefix.stats.rejected_iso;
        for t in &tasks {
            split.merge(&run_task(t, |_| {}).unwrap());
        }
        assert_eq!(split, stats);
    }
}
