//! Moore bound, minimal diameter and minimal mean path length of regular graphs.

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("degree {0} is below the supported minimum")]
    DegreeTooSmall(usize),
    #[error("{n} vertices cannot host a {k}-regular graph (need n > k)")]
    TooFewVertices { n: usize, k: usize },
    #[error("Moore bound overflows for k = {k}, d = {d}")]
    Overflow { k: usize, d: u32 },
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph is disconnected")]
    Disconnected,
}

/// Theoretical limits for connected `k`-regular graphs on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundsRecord {
    pub n: usize,
    pub k: usize,
    /// Moore bound evaluated at `d_min`.
    pub moore_at_dmin: u64,
    pub d_min: u32,
    pub mpl_min: Ratio<u64>,
}

impl BoundsRecord {
    pub fn new(n: usize, k: usize) -> Result<BoundsRecord, BoundsError> {
        let d_min = diameter_lower_bound(k, n)?;
        Ok(BoundsRecord { n, k, moore_at_dmin: moore_bound(k, d_min)?, d_min, mpl_min: mpl_lower_bound(k, n)? })
    }
}

/// `1 + k * sum_{i=1..d} (k-1)^(i-1)`: the most vertices a graph of maximum
/// degree `k` and diameter `d` can have.
pub fn moore_bound(k: usize, d: u32) -> Result<u64, BoundsError> {
    if k < 2 {
        return Err(BoundsError::DegreeTooSmall(k));
    }
    let overflow = || BoundsError::Overflow { k, d };
    let k = k as u64;
    let mut layer = k;
    let mut total = 1u64;
    for i in 0..d {
        if i > 0 {
            layer = layer.checked_mul(k - 1).ok_or_else(overflow)?;
        }
        total = total.checked_add(layer).ok_or_else(overflow)?;
    }
    Ok(total)
}

fn check_regular_params(k: usize, n: usize) -> Result<(), BoundsError> {
    if k < 3 {
        return Err(BoundsError::DegreeTooSmall(k));
    }
    if n < k + 1 {
        return Err(BoundsError::TooFewVertices { n, k });
    }
    Ok(())
}

/// Smallest `d` with `moore_bound(k, d) >= n`.
pub fn diameter_lower_bound(k: usize, n: usize) -> Result<u32, BoundsError> {
    check_regular_params(k, n)?;
    let mut d = 1;
    while moore_bound(k, d)? < n as u64 {
        d += 1;
    }
    Ok(d)
}

/// Lower bound on the mean path length of a `k`-regular graph on `n` vertices:
/// every vertex sees a perfect `(k-1)`-ary BFS tree up to depth `d_min - 1`,
/// and the remaining vertices sit at depth `d_min`.
pub fn mpl_lower_bound(k: usize, n: usize) -> Result<Ratio<u64>, BoundsError> {
    let d = diameter_lower_bound(k, n)?;
    let moore = moore_bound(k, d)?;
    let (k, n) = (k as u64, n as u64);
    let mut layer = k;
    let mut weighted = 0u64;
    for i in 1..=u64::from(d) {
        if i > 1 {
            layer *= k - 1;
        }
        weighted += layer * i;
    }
    let per_vertex = weighted - (moore - n) * u64::from(d);
    Ok(Ratio::new(per_vertex, n - 1))
}

/// True iff a connected regular graph attains the mean path length bound.
pub fn is_generalized_moore(g: &Graph) -> Result<bool, BoundsError> {
    let k = g.degree_profile().1.ok_or(BoundsError::NotRegular)?;
    let m = g.metrics();
    let mpl = m.mpl().ok_or(BoundsError::Disconnected)?;
    Ok(mpl == mpl_lower_bound(k, g.order())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::format_ratio4;

    /// Counts the vertices of a BFS tree whose root has `k` children and every
    /// other internal node `k - 1`, truncated at depth `d`.
    fn bfs_tree_size(k: u64, d: u32) -> u64 {
        let mut level = vec![k];
        for _ in 1..d {
            let next = *level.last().unwrap() * (k - 1);
            level.push(next);
        }
        1 + level.iter().sum::<u64>()
    }

    #[test]
    fn moore_bound_values() {
        assert_eq!(moore_bound(2, 5), Ok(11));
        assert_eq!(moore_bound(3, 2), Ok(10));
        assert_eq!(moore_bound(3, 3), Ok(22));
        assert_eq!(moore_bound(4, 3), Ok(53));
        assert_eq!(moore_bound(1, 3), Err(BoundsError::DegreeTooSmall(1)));
        for k in 3..10u64 {
            for d in 1..7 {
                assert_eq!(moore_bound(k as usize, d).unwrap(), bfs_tree_size(k, d));
            }
        }
    }

    #[test]
    fn moore_bound_overflow_is_reported() {
        assert!(matches!(moore_bound(1000, 40), Err(BoundsError::Overflow { .. })));
    }

    #[test]
    fn diameter_bound_values() {
        assert_eq!(diameter_lower_bound(3, 10), Ok(2));
        assert_eq!(diameter_lower_bound(3, 16), Ok(3));
        assert_eq!(diameter_lower_bound(4, 21), Ok(3));
        assert_eq!(diameter_lower_bound(4, 5), Ok(1));
        assert_eq!(diameter_lower_bound(2, 10), Err(BoundsError::DegreeTooSmall(2)));
        assert_eq!(diameter_lower_bound(5, 5), Err(BoundsError::TooFewVertices { n: 5, k: 5 }));
    }

    #[test]
    fn mpl_bound_table_values() {
        assert_eq!(mpl_lower_bound(3, 16), Ok(Ratio::new(33, 15)));
        assert_eq!(format_ratio4(&mpl_lower_bound(3, 16).unwrap()), "2.2000");
        assert_eq!(format_ratio4(&mpl_lower_bound(4, 21).unwrap()), "2.0000");
        assert_eq!(mpl_lower_bound(4, 32), Ok(Ratio::new(73, 31)));
        assert_eq!(format_ratio4(&mpl_lower_bound(4, 32).unwrap()), "2.3548");
    }

    #[test]
    fn mpl_bound_is_one_exactly_for_complete_graphs() {
        for k in 3..12 {
            assert_eq!(mpl_lower_bound(k, k + 1), Ok(Ratio::from_integer(1)));
            for n in k + 2..k + 30 {
                assert!(mpl_lower_bound(k, n).unwrap() > Ratio::from_integer(1));
            }
        }
    }

    #[test]
    fn generalized_moore_fixtures() {
        assert_eq!(is_generalized_moore(&petersen()), Ok(true));
        assert_eq!(is_generalized_moore(&hypercube(3)), Ok(false));
        assert_eq!(is_generalized_moore(&complete(4)), Ok(true));
        assert_eq!(is_generalized_moore(&path(4)), Err(BoundsError::NotRegular));
        let two_k4 = complete(4).cartesian_product(&Graph::from_edges(2, []).unwrap());
        assert_eq!(is_generalized_moore(&two_k4), Err(BoundsError::Disconnected));
    }

    #[test]
    fn record_invariants() {
        for k in 3..8 {
            for n in k + 1..60 {
                let r = BoundsRecord::new(n, k).unwrap();
                let below = if r.d_min > 1 { moore_bound(k, r.d_min - 1).unwrap() } else { 1 };
                assert!(below < n as u64 && n as u64 <= r.moore_at_dmin);
            }
        }
    }
}
