//! Finite metric spaces: construction, validation, balls, Bowen distances,
//! and disjoint unions.
//!
//! Distances are plain `f64` values compared exactly; the symmetry of the
//! distance function is enforced structurally by storing only the upper
//! triangle.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for accepting m[i][j] vs m[j][i] when reading a full matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A finite set of points with a symmetric positive distance function.
///
/// Immutable after construction; all operations on it are pure, so values
/// can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    // Upper triangle, row-major: entry for (i, j) with i < j.
    tri: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// Norm used when building a space from a point cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    Max,
}

impl FiniteMetricSpace {
    fn tri_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Builds a space by evaluating `f(i, j)` for every pair i < j.
    /// Entries must be finite and nonnegative; nothing else is checked here.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut tri = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                if !d.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                if d < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j, value: d });
                }
                tri.push(d);
            }
        }
        Ok(Self { n, tri, labels: None })
    }

    /// Reads a full n x n distance matrix.
    ///
    /// Rejects non-square input, non-finite or negative entries, asymmetry
    /// beyond [`SYMMETRY_TOLERANCE`], and a nonzero diagonal. The metric
    /// axioms (positivity off the diagonal, triangle inequality) are *not*
    /// verified here; see [`FiniteMetricSpace::verify_metric_axioms`].
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquareMatrix { rows: n, cols: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j, value: v });
                }
            }
            if row[i] != 0.0 {
                return Err(Error::NonzeroDiagonal { index: i, value: row[i] });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = (rows[i][j] - rows[j][i]).abs();
                if delta > SYMMETRY_TOLERANCE {
                    return Err(Error::AsymmetricEntry { row: i, col: j, delta });
                }
            }
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    /// Builds a space from coordinate vectors under the chosen norm.
    pub fn euclidean(points: &[Vec<f64>], norm: Norm) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0, row: 0 });
        }
        for (r, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len(), row: r });
            }
            for (c, &v) in p.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { row: r, col: c });
                }
            }
        }
        Self::from_fn(points.len(), |i, j| {
            let a = &points[i];
            let b = &points[j];
            match norm {
                Norm::Euclidean => a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt(),
                Norm::Max => a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else if i < j {
            self.tri[self.tri_index(i, j)]
        } else {
            self.tri[self.tri_index(j, i)]
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
                row: 0,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Largest pairwise distance (0 for a singleton).
    pub fn diameter(&self) -> f64 {
        self.tri.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest strictly positive pairwise distance, if any.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.tri
            .iter()
            .copied()
            .filter(|&d| d > 0.0)
            .fold(None, |acc, d| Some(acc.map_or(d, |m: f64| m.min(d))))
    }

    /// Open ball `O_eps(x) = { y : d(x, y) < eps }`. Membership is strict;
    /// the center is always a member.
    pub fn ball(&self, x: usize, eps: f64) -> Result<Ball> {
        check_point(x, self.n)?;
        check_eps(eps)?;
        let members = (0..self.n).filter(|&y| self.dist(x, y) < eps).collect();
        Ok(Ball { center: x, radius: eps, members })
    }

    /// Reports every violated metric axiom: zero distances off the diagonal
    /// and broken triangle inequalities. Empty report = valid metric. O(n^3).
    pub fn verify_metric_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.dist(i, j) == 0.0 {
                    report.zero_off_diagonal.push((i, j));
                }
            }
        }
        for i in 0..self.n {
            for k in (i + 1)..self.n {
                let dik = self.dist(i, k);
                for j in 0..self.n {
                    if j == i || j == k {
                        continue;
                    }
                    if dik > self.dist(i, j) + self.dist(j, k) {
                        report.triangle_violations.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    /// True iff the strong triangle inequality
    /// `d(x, z) <= max(d(x, y), d(y, z))` holds for every triple.
    pub fn is_ultrametric(&self) -> bool {
        for i in 0..self.n {
            for k in (i + 1)..self.n {
                let dik = self.dist(i, k);
                for j in 0..self.n {
                    if j == i || j == k {
                        continue;
                    }
                    if dik > self.dist(i, j).max(self.dist(j, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bowen distance space: `d'(x, y) = max_{0 <= i < steps} d(f^i x, f^i y)`.
    /// `steps = 1` (or an identity map) reproduces the original distances.
    pub fn bowen_space(&self, map: &PointMap, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::ZeroIterations);
        }
        map.check_total(self.n)?;
        // orbit[t][x] = f^t(x)
        let mut orbit = Vec::with_capacity(steps);
        orbit.push((0..self.n).collect::<Vec<_>>());
        for t in 1..steps {
            let prev = &orbit[t - 1];
            orbit.push(prev.iter().map(|&x| map.apply(x)).collect());
        }
        let mut out = Self::from_fn(self.n, |i, j| {
            orbit
                .iter()
                .map(|o| self.dist(o[i], o[j]))
                .fold(0.0, f64::max)
        })?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Disjoint union with a constant cross distance between the parts.
    ///
    /// Requires `cross >= max(diam A, diam B)` so that the result is always
    /// a metric and ultrametricity of the parts is preserved.
    pub fn disjoint_union(a: &Self, b: &Self, cross: f64) -> Result<Self> {
        check_eps(cross)?;
        let required = a.diameter().max(b.diameter());
        if cross < required {
            return Err(Error::CrossDistanceTooSmall { cross, required });
        }
        let na = a.n;
        let mut out = Self::from_fn(na + b.n, |i, j| {
            if j < na {
                a.dist(i, j)
            } else if i >= na {
                b.dist(i - na, j - na)
            } else {
                cross
            }
        })?;
        if let (Some(la), Some(lb)) = (&a.labels, &b.labels) {
            let mut labels = la.clone();
            labels.extend(lb.iter().cloned());
            out.labels = Some(labels);
        }
        Ok(out)
    }
}

/// Open ball around a point with its member list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
    pub members: Vec<usize>,
}

impl Ball {
    pub fn contains(&self, y: usize) -> bool {
        self.members.binary_search(&y).is_ok()
    }
}

/// Result of a metric-axiom scan. An empty report means the space is a
/// genuine metric.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Pairs (i, j), i < j, with d(i, j) = 0.
    pub zero_off_diagonal: Vec<(usize, usize)>,
    /// Triples (i, j, k) with d(i, k) > d(i, j) + d(j, k).
    pub triangle_violations: Vec<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn is_metric(&self) -> bool {
        self.zero_off_diagonal.is_empty() && self.triangle_violations.is_empty()
    }
}

/// A total self-map of a space's points, optionally certified as an
/// eps0-isometry: the forward map is then a bijection and every pair at
/// distance <= eps0 keeps its distance exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMap {
    forward: Vec<usize>,
    isometry_radius: Option<f64>,
}

impl PointMap {
    pub fn identity(n: usize) -> Self {
        Self { forward: (0..n).collect(), isometry_radius: None }
    }

    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        for &t in &forward {
            check_point(t, n)?;
        }
        Ok(Self { forward, isometry_radius: None })
    }

    /// Attaches a claimed isometry radius; requires the map to be a bijection.
    pub fn with_isometry_radius(forward: Vec<usize>, radius: f64) -> Result<Self> {
        check_eps(radius)?;
        let map = Self::new(forward)?;
        if !map.is_bijection() {
            return Err(Error::NotABijection);
        }
        Ok(Self { isometry_radius: Some(radius), ..map })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn isometry_radius(&self) -> Option<f64> {
        self.isometry_radius
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.forward.len()];
        for &t in &self.forward {
            if seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }

    /// Inverse map; carries over the isometry radius (the inverse of a
    /// finite eps0-isometry is again an eps0-isometry).
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_bijection() {
            return Err(Error::NotABijection);
        }
        let mut inv = vec![0usize; self.forward.len()];
        for (x, &t) in self.forward.iter().enumerate() {
            inv[t] = x;
        }
        Ok(Self { forward: inv, isometry_radius: self.isometry_radius })
    }

    /// Image of a point set under the forward map.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }

    fn check_total(&self, n: usize) -> Result<()> {
        if self.forward.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.forward.len(),
                row: 0,
            });
        }
        Ok(())
    }

    /// Exhaustively validates the stored isometry radius against a space:
    /// bijectivity plus exact distance preservation on every pair at
    /// distance <= radius.
    pub fn validate_isometry(&self, space: &FiniteMetricSpace) -> Result<()> {
        self.check_total(space.n())?;
        let radius = self.isometry_radius.ok_or(Error::NoIsometryRadius)?;
        if !self.is_bijection() {
            return Err(Error::NotABijection);
        }
        for i in 0..space.n() {
            for j in (i + 1)..space.n() {
                let before = space.dist(i, j);
                if before <= radius {
                    let after = space.dist(self.apply(i), self.apply(j));
                    if after != before {
                        return Err(Error::IsometryViolation { x: i, y: j, before, after });
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest achieved distance r such that every pair at distance <= r is
    /// mapped to a pair at exactly the same distance. `None` when even the
    /// closest distance class contains a moved pair. O(n^2).
    pub fn max_isometry_radius(forward: &[usize], space: &FiniteMetricSpace) -> Option<f64> {
        let n = space.n();
        assert_eq!(forward.len(), n, "map must be total on the space");
        let mut min_broken: Option<f64> = None;
        let mut distances: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let before = space.dist(i, j);
                distances.push(before);
                if space.dist(forward[i], forward[j]) != before {
                    min_broken = Some(min_broken.map_or(before, |m: f64| m.min(before)));
                }
            }
        }
        match min_broken {
            None => Some(space.diameter()),
            Some(bad) => distances
                .into_iter()
                .filter(|&d| d < bad)
                .fold(None, |acc, d| Some(acc.map_or(d, |m: f64| m.max(d)))),
        }
    }
}

pub(crate) fn check_point(index: usize, n: usize) -> Result<()> {
    if index >= n {
        return Err(Error::PointOutOfRange { index, n });
    }
    Ok(())
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidEpsilon { eps });
    }
    Ok(())
}

/// Line space over the given coordinates; handy in tests and experiments.
pub fn line_space(coords: &[f64]) -> Result<FiniteMetricSpace> {
    let pts: Vec<Vec<f64>> = coords.iter().map(|&x| vec![x]).collect();
    FiniteMetricSpace::euclidean(&pts, Norm::Euclidean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_line(n: usize) -> FiniteMetricSpace {
        line_space(&(0..n).map(|i| i as f64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn from_matrix_singleton_and_pair() {
        let s = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        assert_eq!(s.n(), 1);
        let s = FiniteMetricSpace::from_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(s.dist(0, 1), 1.0);
        assert_eq!(s.dist(1, 0), 1.0);
    }

    #[test]
    fn from_matrix_rejects_bad_input() {
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&[vec![0.0, 1.0]]),
            Err(Error::NonSquareMatrix { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(Error::NegativeEntry { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&[vec![0.0, 1.0], vec![1.5, 0.0]]),
            Err(Error::AsymmetricEntry { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&[vec![0.5, 1.0], vec![1.0, 0.0]]),
            Err(Error::NonzeroDiagonal { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&[vec![0.0, f64::NAN], vec![1.0, 0.0]]),
            Err(Error::NonFiniteEntry { .. })
        ));
        assert!(matches!(FiniteMetricSpace::from_matrix(&[]), Err(Error::EmptySpace)));
    }

    #[test]
    fn line_space_distances() {
        let s = int_line(5);
        assert_eq!(s.dist(0, 4), 4.0);
        assert_eq!(s.dist(2, 3), 1.0);
        assert!(s.verify_metric_axioms().is_metric());
    }

    #[test]
    fn euclidean_345_triangle() {
        let s = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0]], Norm::Euclidean)
            .unwrap();
        assert_eq!(s.dist(0, 1), 5.0);
        let s = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0]], Norm::Max).unwrap();
        assert_eq!(s.dist(0, 1), 4.0);
    }

    #[test]
    fn euclidean_rejects_mismatched_dims() {
        assert!(matches!(
            FiniteMetricSpace::euclidean(&[vec![0.0], vec![1.0, 2.0]], Norm::Euclidean),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::euclidean(&[], Norm::Euclidean),
            Err(Error::EmptySpace)
        ));
    }

    #[test]
    fn axiom_report_flags_forced_violation() {
        // d(0,2) = 5 but d(0,1) = d(1,2) = 1.
        let s = FiniteMetricSpace::from_matrix(&[
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        let report = s.verify_metric_axioms();
        assert!(report.triangle_violations.contains(&(0, 1, 2)));
        assert!(!report.is_metric());
    }

    #[test]
    fn ball_is_strict() {
        let s = int_line(5);
        let b = s.ball(2, 1.5).unwrap();
        assert_eq!(b.members, vec![1, 2, 3]);
        // eps exactly at a distance excludes the boundary point
        let b = s.ball(2, 1.0).unwrap();
        assert_eq!(b.members, vec![2]);
        // eps above the diameter captures everything
        let b = s.ball(2, 100.0).unwrap();
        assert_eq!(b.members, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn line_is_not_ultrametric() {
        let s = int_line(3);
        assert!(!s.is_ultrametric()); // d(0,2) = 2 > max(1, 1)
    }

    #[test]
    fn bowen_identity_and_single_step() {
        let s = int_line(4);
        let id = PointMap::identity(4);
        let b = s.bowen_space(&id, 5).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b.dist(i, j), s.dist(i, j));
            }
        }
        let perm = PointMap::new(vec![1, 2, 3, 0]).unwrap();
        let b1 = s.bowen_space(&perm, 1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b1.dist(i, j), s.dist(i, j));
            }
        }
        assert!(matches!(s.bowen_space(&perm, 0), Err(Error::ZeroIterations)));
    }

    #[test]
    fn bowen_matches_direct_orbit_maximum() {
        // doubling-type permutation on 8 points
        let s = int_line(8);
        let fwd: Vec<usize> = (0..8).map(|x| (2 * x) % 8 + usize::from(x >= 4)).collect();
        let map = PointMap::new(fwd.clone()).unwrap();
        let steps = 3;
        let b = s.bowen_space(&map, steps).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let mut x = i;
                let mut y = j;
                let mut expect: f64 = 0.0;
                for _ in 0..steps {
                    expect = expect.max(s.dist(x, y));
                    x = fwd[x];
                    y = fwd[y];
                }
                assert_eq!(b.dist(i, j), expect);
            }
        }
        // distances are monotone nondecreasing in the number of steps
        let b2 = s.bowen_space(&map, 2).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert!(b.dist(i, j) >= b2.dist(i, j));
            }
        }
    }

    #[test]
    fn disjoint_union_of_singletons() {
        let a = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        let b = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        let u = FiniteMetricSpace::disjoint_union(&a, &b, 1.0).unwrap();
        assert_eq!(u.n(), 2);
        assert_eq!(u.dist(0, 1), 1.0);
        assert!(u.verify_metric_axioms().is_metric());
    }

    #[test]
    fn disjoint_union_validates_cross_distance() {
        let a = line_space(&[0.0, 0.5]).unwrap();
        let b = line_space(&[0.0, 0.5]).unwrap();
        let u = FiniteMetricSpace::disjoint_union(&a, &b, 1.0).unwrap();
        assert!(u.verify_metric_axioms().is_metric());
        assert!(matches!(
            FiniteMetricSpace::disjoint_union(&a, &b, 0.4),
            Err(Error::CrossDistanceTooSmall { .. })
        ));
    }

    #[test]
    fn point_map_inverse_and_isometry_validation() {
        let s = int_line(4);
        // reversal is a global isometry of the line
        let rev = PointMap::with_isometry_radius(vec![3, 2, 1, 0], 3.0).unwrap();
        rev.validate_isometry(&s).unwrap();
        let inv = rev.inverse().unwrap();
        assert_eq!(inv.forward(), &[3, 2, 1, 0]);
        // a non-isometric map is rejected
        let swap = PointMap::with_isometry_radius(vec![1, 0, 2, 3], 3.0).unwrap();
        assert!(matches!(swap.validate_isometry(&s), Err(Error::IsometryViolation { .. })));
    }

    #[test]
    fn max_isometry_radius_detects_threshold() {
        let s = int_line(4);
        assert_eq!(PointMap::max_isometry_radius(&[3, 2, 1, 0], &s), Some(3.0));
        // swapping the two middle points already breaks a distance-1 pair
        assert_eq!(PointMap::max_isometry_radius(&[0, 2, 1, 3], &s), None);
        // swapping adjacent pairs breaks (1,2) at distance 1 as well
        assert_eq!(PointMap::max_isometry_radius(&[1, 0, 3, 2], &s), None);
        // a map breaking only the diameter pair keeps everything below it
        let sq = line_space(&[0.0, 1.0, 2.0, 4.0]).unwrap();
        let r = PointMap::max_isometry_radius(&[0, 1, 2, 3], &sq);
        assert_eq!(r, Some(4.0)); // identity preserves all
    }
}
