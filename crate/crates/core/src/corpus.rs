//! Seeded instance generators shared by tests, the acceptance suite, and
//! the experiment commands. Everything here is deterministic in the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::{FiniteMetricSpace, Norm};

/// Random symmetric matrix with entries in [0.5, 2), repaired into a metric
/// by taking the all-pairs shortest-path closure. The repair keeps entries
/// positive and symmetric and enforces the triangle inequality.
pub fn random_repaired_metric(seed: u64, n: usize) -> FiniteMetricSpace {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = rng.random_range(0.5..2.0);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    // Floyd-Warshall closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let via = m[i][k] + m[k][j];
                    if via < m[i][j] {
                        m[i][j] = via;
                    }
                }
            }
        }
    }
    // the closure of a symmetric matrix stays symmetric up to evaluation
    // order; force exact symmetry before construction
    for i in 0..n {
        for j in (i + 1)..n {
            let d = m[i][j].min(m[j][i]);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    let space = FiniteMetricSpace::from_matrix(&m).expect("generated matrix is well formed");
    debug_assert!(space.verify_metric_axioms().is_metric());
    space
}

/// `n` uniform points in the unit cube [0,1)^dim.
pub fn random_cloud(seed: u64, n: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect()
}

/// Euclidean space over a seeded cloud.
pub fn random_cloud_space(seed: u64, n: usize, dim: usize) -> FiniteMetricSpace {
    FiniteMetricSpace::euclidean(&random_cloud(seed, n, dim), Norm::Euclidean)
        .expect("cloud is well formed")
}

/// Left endpoints of the level-`level` intervals of the middle-thirds
/// Cantor construction: the 2^level sums of 2 * 3^{-i} over chosen digit
/// positions, in increasing order. Numerators are exact integers below
/// 3^level, so each coordinate rounds only once.
pub fn cantor_endpoints(level: u32) -> Vec<f64> {
    assert!(level >= 1 && level <= 20, "desk-scale levels only");
    let denom = 3f64.powi(level as i32);
    let count = 1usize << level;
    let mut out = Vec::with_capacity(count);
    for mask in 0..count {
        let mut num: u64 = 0;
        for pos in 0..level {
            // bit 0 of the mask is the most significant ternary digit
            if mask & (1 << (level - 1 - pos)) != 0 {
                num += 2 * 3u64.pow(level - 1 - pos);
            }
        }
        out.push(num as f64 / denom);
    }
    out
}

/// Cantor endpoint space under the Euclidean line metric.
pub fn cantor_space(level: u32) -> FiniteMetricSpace {
    let pts: Vec<Vec<f64>> = cantor_endpoints(level).into_iter().map(|x| vec![x]).collect();
    FiniteMetricSpace::euclidean(&pts, Norm::Euclidean).expect("cantor cloud is well formed")
}

/// q-quantile of the multiset of pairwise distances; a convenient way to
/// pick epsilons that scale with the instance.
pub fn distance_quantile(space: &FiniteMetricSpace, q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q));
    let n = space.n();
    let mut dists: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(space.dist(i, j));
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((dists.len() - 1) as f64 * q).round() as usize;
    dists[idx]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repaired_metric_satisfies_axioms() {
        for seed in 0..10 {
            let s = random_repaired_metric(seed, 9);
            assert!(s.verify_metric_axioms().is_metric());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_repaired_metric(7, 8);
        let b = random_repaired_metric(7, 8);
        assert_eq!(a, b);
        assert_eq!(random_cloud(3, 5, 2), random_cloud(3, 5, 2));
    }

    #[test]
    fn cantor_endpoints_level_two() {
        let pts = cantor_endpoints(2);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts, vec![0.0, 2.0 / 9.0, 6.0 / 9.0, 8.0 / 9.0]);
    }

    #[test]
    fn cantor_separation_structure() {
        // at eps = 3^-k the separated classes are exactly the level-k
        // cylinders: distances within a cylinder stay below 3^-k, distances
        // across exceed it
        let level = 6;
        let pts = cantor_endpoints(level);
        let n = pts.len();
        for k in 1..=5u32 {
            let eps = 1.0 / 3f64.powi(k as i32);
            for i in 0..n {
                for j in (i + 1)..n {
                    let same_prefix = (i >> (level - k as u32)) == (j >> (level - k as u32));
                    let d = (pts[i] - pts[j]).abs();
                    if same_prefix {
                        assert!(d < eps, "within-cylinder pair at {d} >= {eps}");
                    } else {
                        assert!(d >= eps, "cross-cylinder pair at {d} < {eps}");
                    }
                }
            }
        }
    }
}
