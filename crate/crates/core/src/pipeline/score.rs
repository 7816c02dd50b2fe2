use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::Ratio;

/// The four ranking criteria of a graph.
///
/// `Ord` puts better graphs first: smaller diameter, then smaller total
/// distance, then larger bisection width, then larger automorphism group.
/// For a fixed vertex count the total distance orders graphs exactly as the
/// mean path length does.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Score {
    pub n: usize,
    pub diameter: u32,
    pub distance_sum: u64,
    pub bisection: usize,
    pub aut_order: BigUint,
}

impl Score {
    pub fn mpl(&self) -> Ratio<u64> {
        let n = self.n as u64;
        Ratio::new(self.distance_sum, n * (n - 1))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Score) -> Ordering {
        self.diameter
            .cmp(&other.diameter)
            .then(self.distance_sum.cmp(&other.distance_sum))
            .then(other.bisection.cmp(&self.bisection))
            .then(other.aut_order.cmp(&self.aut_order))
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Score) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn score() -> impl Strategy<Value = Score> {
        (1u32..5, 0u64..50, 0usize..10, 1u64..30).prop_map(|(d, s, b, a)| Score {
            n: 10,
            diameter: d,
            distance_sum: s,
            bisection: b,
            aut_order: BigUint::from(a),
        })
    }

    #[test]
    fn criteria_priority() {
        let base = Score { n: 10, diameter: 2, distance_sum: 150, bisection: 5, aut_order: BigUint::from(10u32) };
        let mut wider = base.clone();
        wider.bisection = 6;
        wider.aut_order = BigUint::from(1u32);
        assert!(wider < base);
        let mut shorter = base.clone();
        shorter.distance_sum = 149;
        shorter.bisection = 0;
        assert!(shorter < wider);
        let mut smaller_diameter = base.clone();
        smaller_diameter.diameter = 1;
        smaller_diameter.distance_sum = 1000;
        assert!(smaller_diameter < shorter);
        let mut more_symmetric = base.clone();
        more_symmetric.aut_order = BigUint::from(11u32);
        assert!(more_symmetric < base);
    }

    proptest! {
        #[test]
        fn total_and_antisymmetric(a in score(), b in score(), c in score()) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }
    }
}
