//! Exhaustive search for `N_m = F_n F_k` in a box of indices.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::sequences::{fibonacci, narayana, SequenceKind};

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub value: BigInt,
}

impl SolutionTriple {
    /// Recheck `N_m = F_n F_k` from scratch.
    pub fn verify(&self) -> bool {
        let lhs = narayana(self.m);
        lhs == self.value && lhs == fibonacci(self.n) * fibonacci(self.k)
    }
}

/// Every `(m, n, k)` with `1 <= m <= m_max`, `1 <= n <= n_max`,
/// `n <= k <= k_max` and `N_m = F_n F_k`, sorted. With `both_orders`, the
/// swapped triple `(m, k, n)` is emitted too when `n != k`, without the
/// `n <= n_max` restriction applying to the swapped copy.
pub fn find_products(m_max: u64, n_max: u64, k_max: u64, both_orders: bool) -> Vec<SolutionTriple> {
    if m_max == 0 || n_max == 0 || k_max == 0 {
        return Vec::new();
    }
    let fib = SequenceKind::Fibonacci.terms(k_max.max(n_max) as usize);
    // value -> every index in 1..=k_max carrying it
    let mut index_of: HashMap<&BigInt, Vec<u64>> = HashMap::new();
    for (i, f) in fib.iter().enumerate().skip(1).take(k_max as usize) {
        index_of.entry(f).or_default().push(i as u64);
    }
    let nar = SequenceKind::Narayana.terms(m_max as usize);

    let mut out: Vec<SolutionTriple> = (1..=m_max)
        .into_par_iter()
        .flat_map_iter(|m| {
            let value = &nar[m as usize];
            let mut found = Vec::new();
            for n in 1..=n_max {
                let f_n = &fib[n as usize];
                if f_n > value {
                    break;
                }
                let (quot, rem) = value.div_rem(f_n);
                if !rem.is_zero() {
                    continue;
                }
                for &k in index_of.get(&quot).into_iter().flatten() {
                    if k >= n {
                        found.push(SolutionTriple {
                            m,
                            n,
                            k,
                            value: value.clone(),
                        });
                        if both_orders && k != n {
                            found.push(SolutionTriple {
                                m,
                                n: k,
                                k: n,
                                value: value.clone(),
                            });
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(SolutionTriple::verify));
    out
}

/// The triples of [`find_products`] with `n = k`.
pub fn find_squares(m_max: u64, n_max: u64) -> Vec<SolutionTriple> {
    find_products(m_max, n_max, n_max, false)
        .into_iter()
        .filter(|t| t.n == t.k)
        .collect()
}

pub fn distinct_values(triples: &[SolutionTriple]) -> Vec<BigInt> {
    triples
        .iter()
        .map(|t| t.value.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Direct triple loop over the same box, for cross-checking.
pub fn naive_products(m_max: u64, n_max: u64, k_max: u64) -> Vec<SolutionTriple> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let v = narayana(m);
        for n in 1..=n_max {
            for k in n..=k_max {
                if fibonacci(n) * fibonacci(k) == v {
                    out.push(SolutionTriple {
                        m,
                        n,
                        k,
                        value: v.clone(),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(v: &[SolutionTriple]) -> Vec<(u64, u64, u64)> {
        v.iter().map(|t| (t.m, t.n, t.k)).collect()
    }

    #[test]
    fn full_range_gives_eighteen() {
        let sols = find_products(438, 86, 174, false);
        assert_eq!(
            triples(&sols),
            vec![
                (1, 1, 1),
                (1, 1, 2),
                (1, 2, 2),
                (2, 1, 1),
                (2, 1, 2),
                (2, 2, 2),
                (3, 1, 1),
                (3, 1, 2),
                (3, 2, 2),
                (4, 1, 3),
                (4, 2, 3),
                (5, 1, 4),
                (5, 2, 4),
                (6, 3, 3),
                (7, 3, 4),
                (8, 4, 4),
                (9, 1, 7),
                (9, 2, 7),
            ]
        );
        let values: Vec<BigInt> = [1, 2, 3, 4, 6, 9, 13].map(BigInt::from).to_vec();
        assert_eq!(distinct_values(&sols), values);
    }

    #[test]
    fn tiny_ranges() {
        let sols = find_products(3, 2, 2, false);
        assert!(sols.iter().all(|t| t.value == BigInt::from(1)));
        assert_eq!(sols.len(), 9);
        assert_eq!(triples(&find_products(1, 1, 1, false)), vec![(1, 1, 1)]);
        assert!(find_products(0, 5, 5, false).is_empty());
    }

    #[test]
    fn squares() {
        let sq = find_squares(438, 86);
        let values: Vec<BigInt> = [1, 4, 9].map(BigInt::from).to_vec();
        assert_eq!(distinct_values(&sq), values);
        assert!(triples(&sq).contains(&(6, 3, 3)));
        assert!(triples(&sq).contains(&(8, 4, 4)));
    }

    #[test]
    fn both_orders_adds_swaps() {
        let one = find_products(60, 30, 30, false);
        let both = find_products(60, 30, 30, true);
        let off_diagonal = one.iter().filter(|t| t.n != t.k).count();
        assert_eq!(both.len(), one.len() + off_diagonal);
        assert!(triples(&both).contains(&(9, 7, 1)));
    }

    #[test]
    fn matches_naive_loop() {
        assert_eq!(find_products(60, 30, 30, false), naive_products(60, 30, 30));
    }
}
