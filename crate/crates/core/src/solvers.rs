//! Exact and greedy computation of the packing number C_eps (maximum
//! eps-separated set) and the covering number R_eps (minimum eps-net),
//! plus the derived local quantities k and b_eps and subadditivity checks.
//!
//! C_eps is a maximum independent set of the conflict graph (edge iff
//! dist < eps), solved by branch and bound with a greedy clique-cover
//! bound. R_eps is a minimum set cover by open balls, solved by branch
//! and bound with a disjoint-target lower bound. Both solvers return the
//! lexicographically smallest optimal witness under the requested point
//! ordering, so repeated runs are reproducible bit for bit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{check_eps, check_point, FiniteMetricSpace};

/// Solver limits. `exact_cap` bounds the instance size the exact solvers
/// accept; larger instances must go through the greedy routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    pub exact_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { exact_cap: 64 }
    }
}

impl SolverConfig {
    pub fn with_cap(exact_cap: usize) -> Self {
        Self { exact_cap }
    }
}

/// Which optimum a witness certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The witness attains the true optimum.
    Exact,
    /// Maximal separated set: size <= C_eps.
    GreedyLowerBound,
    /// Feasible net: size >= R_eps.
    GreedyUpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Separated,
    Net,
}

/// Point ordering used for deterministic tie-breaking among optima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    Forward,
    Reverse,
}

/// One solved packing or covering instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityResult {
    pub eps: f64,
    pub kind: WitnessKind,
    pub size: usize,
    /// Witness points (original indices, sorted ascending).
    pub witness: Vec<usize>,
    pub certificate: Certificate,
}

impl ComplexityResult {
    pub fn is_exact(&self) -> bool {
        self.certificate == Certificate::Exact
    }

    /// Checks the witness against the spaces's distance function, restricted
    /// to `targets`: a separated witness must be pairwise >= eps, a net
    /// witness must cover every target with an open eps-ball.
    pub fn validate_on(&self, space: &FiniteMetricSpace, targets: &[usize]) -> Result<()> {
        for &w in &self.witness {
            check_point(w, space.n())?;
        }
        match self.kind {
            WitnessKind::Separated => {
                for (idx, &a) in self.witness.iter().enumerate() {
                    for &b in &self.witness[idx + 1..] {
                        let d = space.dist(a, b);
                        if d < self.eps {
                            return Err(Error::NotSeparated { a, b, dist: d, eps: self.eps });
                        }
                    }
                }
            }
            WitnessKind::Net => {
                for &t in targets {
                    if !self.witness.iter().any(|&w| space.dist(w, t) < self.eps) {
                        return Err(Error::NotANet { uncovered: t });
                    }
                }
            }
        }
        Ok(())
    }

    /// Whole-space witness validation.
    pub fn validate(&self, space: &FiniteMetricSpace) -> Result<()> {
        let all: Vec<usize> = space.points().collect();
        self.validate_on(space, &all)
    }
}

// ---------------------------------------------------------------------------
// Bit sets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64)] }
    }

    fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn subtract(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn intersection_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> BitIter<'_> {
        BitIter { words: &self.words, word_idx: 0, current: self.words.first().copied().unwrap_or(0) }
    }
}

struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

// ---------------------------------------------------------------------------
// Maximum independent set on the conflict graph
// ---------------------------------------------------------------------------

struct MisInstance {
    m: usize,
    adj: Vec<BitSet>,
}

impl MisInstance {
    /// `locals[l]` is the original point id of local vertex l; the local
    /// ordering encodes the tie-break direction.
    fn build(space: &FiniteMetricSpace, locals: &[usize], eps: f64) -> Self {
        let m = locals.len();
        let mut adj = vec![BitSet::new(m); m];
        for a in 0..m {
            for b in (a + 1)..m {
                if space.dist(locals[a], locals[b]) < eps {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        Self { m, adj }
    }

    fn greedy(&self, cand: &BitSet) -> usize {
        let mut cand = cand.clone();
        let mut size = 0;
        while let Some(v) = cand.first() {
            size += 1;
            cand.remove(v);
            cand.subtract(&self.adj[v]);
        }
        size
    }

    /// Greedy clique cover of `cand`; its cardinality bounds the MIS above.
    fn clique_cover_bound(&self, cand: &BitSet) -> usize {
        let mut remaining = cand.clone();
        let mut cliques = 0;
        while let Some(v) = remaining.first() {
            remaining.remove(v);
            cliques += 1;
            let mut common = remaining.clone();
            common.intersect_with(&self.adj[v]);
            while let Some(u) = common.first() {
                remaining.remove(u);
                common.remove(u);
                common.intersect_with(&self.adj[u]);
            }
        }
        cliques
    }

    fn search(&self, cand: &BitSet, current: usize, best: &mut usize) {
        if current > *best {
            *best = current;
        }
        if cand.is_empty() {
            return;
        }
        if current + self.clique_cover_bound(cand) <= *best {
            return;
        }
        let mut rest = cand.clone();
        while let Some(v) = rest.first() {
            rest.remove(v);
            let mut sub = rest.clone();
            sub.subtract(&self.adj[v]);
            self.search(&sub, current + 1, best);
            if current + 1 + rest.count() <= *best {
                break;
            }
        }
    }

    fn best_size(&self) -> usize {
        let full = BitSet::full(self.m);
        let mut best = self.greedy(&full);
        self.search(&full, 0, &mut best);
        best
    }

    /// Is there an independent subset of `cand` of at least `need` vertices?
    fn exists(&self, cand: &BitSet, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if cand.count() < need {
            return false;
        }
        if self.greedy(cand) >= need {
            return true;
        }
        if self.clique_cover_bound(cand) < need {
            return false;
        }
        let mut rest = cand.clone();
        while let Some(v) = rest.first() {
            rest.remove(v);
            if 1 + rest.count() < need {
                return false;
            }
            let mut sub = rest.clone();
            sub.subtract(&self.adj[v]);
            if self.exists(&sub, need - 1) {
                return true;
            }
        }
        false
    }

    /// Lexicographically smallest independent set of the given optimal size,
    /// in local vertex order.
    fn lex_smallest(&self, size: usize) -> Vec<usize> {
        let mut picked = Vec::with_capacity(size);
        let mut cand = BitSet::full(self.m);
        while picked.len() < size {
            let v = cand
                .first()
                .expect("optimal size certified feasible; candidates cannot run out");
            let mut with_v = cand.clone();
            with_v.remove(v);
            with_v.subtract(&self.adj[v]);
            if self.exists(&with_v, size - picked.len() - 1) {
                picked.push(v);
                cand = with_v;
            } else {
                cand.remove(v);
            }
        }
        picked
    }
}

// ---------------------------------------------------------------------------
// Minimum set cover by open balls
// ---------------------------------------------------------------------------

struct CoverInstance {
    t: usize,
    m: usize,
    /// covers[c] = targets within eps of candidate c.
    covers: Vec<BitSet>,
    /// coverers[k] = candidates within eps of target k.
    coverers: Vec<BitSet>,
    max_cover: usize,
}

impl CoverInstance {
    fn build(
        space: &FiniteMetricSpace,
        targets: &[usize],
        cand_locals: &[usize],
        eps: f64,
    ) -> Self {
        let t = targets.len();
        let m = cand_locals.len();
        let mut covers = vec![BitSet::new(t); m];
        let mut coverers = vec![BitSet::new(m); t];
        for (c, &cp) in cand_locals.iter().enumerate() {
            for (k, &tp) in targets.iter().enumerate() {
                if space.dist(cp, tp) < eps {
                    covers[c].insert(k);
                    coverers[k].insert(c);
                }
            }
        }
        let max_cover = covers.iter().map(BitSet::count).max().unwrap_or(0).max(1);
        Self { t, m, covers, coverers, max_cover }
    }

    fn uncoverable_target(&self) -> Option<usize> {
        (0..self.t).find(|&k| self.coverers[k].is_empty())
    }

    /// Greedy cover restricted to `allowed`; `None` if the budget runs out
    /// or some target is uncoverable.
    fn greedy_cover(&self, uncovered: &BitSet, allowed: &BitSet, budget: usize) -> Option<usize> {
        let mut unc = uncovered.clone();
        let mut used = 0;
        while !unc.is_empty() {
            if used == budget {
                return None;
            }
            let mut best_v = None;
            let mut best_gain = 0;
            for v in allowed.iter() {
                let gain = self.covers[v].intersection_count(&unc);
                if gain > best_gain {
                    best_gain = gain;
                    best_v = Some(v);
                }
            }
            unc.subtract(&self.covers[best_v?]);
            used += 1;
        }
        Some(used)
    }

    /// Greedy family of uncovered targets whose allowed coverer sets are
    /// mutually disjoint; any cover needs at least that many sets.
    fn disjoint_targets_bound(&self, uncovered: &BitSet, allowed: &BitSet) -> usize {
        let mut lb = 0;
        let mut blocked = BitSet::new(self.m);
        for k in uncovered.iter() {
            let mut cov = self.coverers[k].clone();
            cov.intersect_with(allowed);
            if !cov.intersects(&blocked) {
                lb += 1;
                blocked.union_with(&cov);
            }
        }
        lb
    }

    fn branch_target(&self, uncovered: &BitSet, allowed: &BitSet) -> Option<(usize, usize)> {
        uncovered
            .iter()
            .map(|k| (k, self.coverers[k].intersection_count(allowed)))
            .min_by_key(|&(_, c)| c)
            .map(|(k, c)| (k, c))
    }

    fn search(&self, uncovered: &BitSet, allowed: &BitSet, chosen: usize, best: &mut usize) {
        if uncovered.is_empty() {
            if chosen < *best {
                *best = chosen;
            }
            return;
        }
        let lb1 = uncovered.count().div_ceil(self.max_cover);
        if chosen + lb1 >= *best {
            return;
        }
        if chosen + self.disjoint_targets_bound(uncovered, allowed) >= *best {
            return;
        }
        let Some((k, options)) = self.branch_target(uncovered, allowed) else {
            return;
        };
        if options == 0 {
            return;
        }
        let mut al = allowed.clone();
        let mut opts = self.coverers[k].clone();
        opts.intersect_with(allowed);
        for v in opts.iter() {
            al.remove(v);
            let mut unc = uncovered.clone();
            unc.subtract(&self.covers[v]);
            self.search(&unc, &al, chosen + 1, best);
        }
    }

    fn best_size(&self) -> Option<usize> {
        let full_t = BitSet::full(self.t);
        let full_m = BitSet::full(self.m);
        let mut best = self.greedy_cover(&full_t, &full_m, usize::MAX)?;
        self.search(&full_t, &full_m, 0, &mut best);
        Some(best)
    }

    fn exists_cover(&self, uncovered: &BitSet, allowed: &BitSet, budget: usize) -> bool {
        if uncovered.is_empty() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        if uncovered.count().div_ceil(self.max_cover) > budget {
            return false;
        }
        if self.greedy_cover(uncovered, allowed, budget).is_some() {
            return true;
        }
        if self.disjoint_targets_bound(uncovered, allowed) > budget {
            return false;
        }
        let Some((k, options)) = self.branch_target(uncovered, allowed) else {
            return false;
        };
        if options == 0 {
            return false;
        }
        let mut al = allowed.clone();
        let mut opts = self.coverers[k].clone();
        opts.intersect_with(allowed);
        for v in opts.iter() {
            al.remove(v);
            let mut unc = uncovered.clone();
            unc.subtract(&self.covers[v]);
            if self.exists_cover(&unc, &al, budget - 1) {
                return true;
            }
        }
        false
    }

    fn lex_smallest(&self, size: usize) -> Vec<usize> {
        let mut picked = Vec::with_capacity(size);
        let mut uncovered = BitSet::full(self.t);
        let mut allowed = BitSet::full(self.m);
        for v in 0..self.m {
            if picked.len() == size {
                break;
            }
            if !allowed.contains(v) {
                continue;
            }
            allowed.remove(v);
            // a minimum cover never contains a set adding nothing
            if !self.covers[v].intersects(&uncovered) {
                continue;
            }
            let mut unc = uncovered.clone();
            unc.subtract(&self.covers[v]);
            if self.exists_cover(&unc, &allowed, size - picked.len() - 1) {
                picked.push(v);
                uncovered = unc;
            }
        }
        assert_eq!(picked.len(), size, "optimal cover size certified feasible");
        picked
    }
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

fn sorted_unique(points: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut pts = points.to_vec();
    for &p in &pts {
        check_point(p, n)?;
    }
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

fn local_order(points: &[usize], tie: TieBreak) -> Vec<usize> {
    match tie {
        TieBreak::Forward => points.to_vec(),
        TieBreak::Reverse => points.iter().rev().copied().collect(),
    }
}

/// Exact C_eps on the subspace induced by `points`, with the given
/// tie-break ordering among optimal witnesses.
pub fn max_separated_exact_on(
    space: &FiniteMetricSpace,
    points: &[usize],
    eps: f64,
    cfg: &SolverConfig,
    tie: TieBreak,
) -> Result<ComplexityResult> {
    check_eps(eps)?;
    let pts = sorted_unique(points, space.n())?;
    if pts.len() > cfg.exact_cap {
        return Err(Error::ExactCapExceeded { n: pts.len(), cap: cfg.exact_cap });
    }
    let locals = local_order(&pts, tie);
    let inst = MisInstance::build(space, &locals, eps);
    let size = inst.best_size();
    let mut witness: Vec<usize> = inst.lex_smallest(size).iter().map(|&l| locals[l]).collect();
    witness.sort_unstable();
    let result = ComplexityResult {
        eps,
        kind: WitnessKind::Separated,
        size,
        witness,
        certificate: Certificate::Exact,
    };
    debug_assert!(result.validate_on(space, &pts).is_ok());
    Ok(result)
}

/// Exact C_eps of the whole space (forward tie-break).
pub fn max_separated_exact(
    space: &FiniteMetricSpace,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<ComplexityResult> {
    let all: Vec<usize> = space.points().collect();
    max_separated_exact_on(space, &all, eps, cfg, TieBreak::Forward)
}

/// Exact R_eps: minimum subset of `candidates` whose open eps-balls cover
/// every point of `targets`.
pub fn min_net_exact_on(
    space: &FiniteMetricSpace,
    targets: &[usize],
    candidates: &[usize],
    eps: f64,
    cfg: &SolverConfig,
    tie: TieBreak,
) -> Result<ComplexityResult> {
    check_eps(eps)?;
    let tgts = sorted_unique(targets, space.n())?;
    let cands = sorted_unique(candidates, space.n())?;
    if tgts.len().max(cands.len()) > cfg.exact_cap {
        return Err(Error::ExactCapExceeded {
            n: tgts.len().max(cands.len()),
            cap: cfg.exact_cap,
        });
    }
    if tgts.is_empty() {
        return Ok(ComplexityResult {
            eps,
            kind: WitnessKind::Net,
            size: 0,
            witness: Vec::new(),
            certificate: Certificate::Exact,
        });
    }
    let locals = local_order(&cands, tie);
    let inst = CoverInstance::build(space, &tgts, &locals, eps);
    if let Some(k) = inst.uncoverable_target() {
        return Err(Error::NotANet { uncovered: tgts[k] });
    }
    let size = inst
        .best_size()
        .ok_or_else(|| Error::Internal("greedy cover failed on coverable instance".into()))?;
    let mut witness: Vec<usize> = inst.lex_smallest(size).iter().map(|&l| locals[l]).collect();
    witness.sort_unstable();
    let result = ComplexityResult {
        eps,
        kind: WitnessKind::Net,
        size,
        witness,
        certificate: Certificate::Exact,
    };
    debug_assert!(result.validate_on(space, &tgts).is_ok());
    Ok(result)
}

/// Exact R_eps of the whole space (forward tie-break).
pub fn min_net_exact(
    space: &FiniteMetricSpace,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<ComplexityResult> {
    let all: Vec<usize> = space.points().collect();
    min_net_exact_on(space, &all, &all, eps, cfg, TieBreak::Forward)
}

/// Greedy maximal eps-separated set scanned in the given point order.
/// Its size is a lower bound for C_eps.
pub fn max_separated_greedy(
    space: &FiniteMetricSpace,
    eps: f64,
    order: &[usize],
) -> Result<ComplexityResult> {
    check_eps(eps)?;
    let mut seen = vec![false; space.n()];
    for &p in order {
        check_point(p, space.n())?;
        if seen[p] {
            return Err(Error::NotAPermutation);
        }
        seen[p] = true;
    }
    if order.len() != space.n() {
        return Err(Error::NotAPermutation);
    }
    let mut witness: Vec<usize> = Vec::new();
    for &p in order {
        if witness.iter().all(|&w| space.dist(w, p) >= eps) {
            witness.push(p);
        }
    }
    witness.sort_unstable();
    let result = ComplexityResult {
        eps,
        kind: WitnessKind::Separated,
        size: witness.len(),
        witness,
        certificate: Certificate::GreedyLowerBound,
    };
    debug_assert!(result.validate(space).is_ok());
    Ok(result)
}

/// Greedy net: repeatedly picks the ball covering the most uncovered
/// points (ties by lowest index). Its size is an upper bound for R_eps.
pub fn min_net_greedy(space: &FiniteMetricSpace, eps: f64) -> Result<ComplexityResult> {
    check_eps(eps)?;
    let n = space.n();
    let mut covered = vec![false; n];
    let mut witness = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let mut best = 0usize;
        let mut best_gain = 0usize;
        for c in 0..n {
            let gain = (0..n)
                .filter(|&y| !covered[y] && space.dist(c, y) < eps)
                .count();
            if gain > best_gain {
                best_gain = gain;
                best = c;
            }
        }
        debug_assert!(best_gain > 0, "every point covers itself");
        witness.push(best);
        for y in 0..n {
            if !covered[y] && space.dist(best, y) < eps {
                covered[y] = true;
                remaining -= 1;
            }
        }
    }
    witness.sort_unstable();
    let result = ComplexityResult {
        eps,
        kind: WitnessKind::Net,
        size: witness.len(),
        witness,
        certificate: Certificate::GreedyUpperBound,
    };
    debug_assert!(result.validate(space).is_ok());
    Ok(result)
}

// ---------------------------------------------------------------------------
// Profiles and derived quantities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub eps: f64,
    pub separated: ComplexityResult,
    pub net: ComplexityResult,
}

/// Per-epsilon packing/covering table, sorted by decreasing epsilon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityProfile {
    pub entries: Vec<ProfileEntry>,
}

impl ComplexityProfile {
    /// Checks the structural inequalities among exact entries:
    /// monotonicity in eps, R <= C at each eps, and C_eps <= R_{eps/2}
    /// whenever both scales are present.
    pub fn verify(&self) -> Result<()> {
        let exact: Vec<&ProfileEntry> = self
            .entries
            .iter()
            .filter(|e| e.separated.is_exact() && e.net.is_exact())
            .collect();
        for e in &exact {
            if e.net.size > e.separated.size {
                return Err(Error::Internal(format!(
                    "R_eps {} > C_eps {} at eps {}",
                    e.net.size, e.separated.size, e.eps
                )));
            }
        }
        for pair in exact.windows(2) {
            // entries sorted by decreasing eps: counts must not decrease
            if pair[1].separated.size < pair[0].separated.size
                || pair[1].net.size < pair[0].net.size
            {
                return Err(Error::Internal(format!(
                    "complexity decreased as eps shrank from {} to {}",
                    pair[0].eps, pair[1].eps
                )));
            }
        }
        for big in &exact {
            for small in &exact {
                if small.eps == big.eps / 2.0 && small.net.size < big.separated.size {
                    return Err(Error::Internal(format!(
                        "R_{{eps/2}} {} < C_eps {} at eps {}",
                        small.net.size, big.separated.size, big.eps
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Solves C and R on a grid of epsilons. Exact when the space fits the cap,
/// greedy (with the certificate marked) otherwise.
pub fn complexity_profile(
    space: &FiniteMetricSpace,
    eps_list: &[f64],
    cfg: &SolverConfig,
) -> Result<ComplexityProfile> {
    let mut grid = eps_list.to_vec();
    for &eps in &grid {
        check_eps(eps)?;
    }
    grid.sort_by(|a, b| b.partial_cmp(a).unwrap());
    grid.dedup();
    let natural: Vec<usize> = space.points().collect();
    let mut entries = Vec::with_capacity(grid.len());
    for eps in grid {
        let (separated, net) = if space.n() <= cfg.exact_cap {
            (
                max_separated_exact(space, eps, cfg)?,
                min_net_exact(space, eps, cfg)?,
            )
        } else {
            (
                max_separated_greedy(space, eps, &natural)?,
                min_net_greedy(space, eps)?,
            )
        };
        entries.push(ProfileEntry { eps, separated, net });
    }
    let profile = ComplexityProfile { entries };
    profile.verify()?;
    Ok(profile)
}

/// k = max over x of C_eps(O_eps(x)), the local packing bound of the
/// comparison theorem. 1 on every ultrametric space.
pub fn local_packing_bound(
    space: &FiniteMetricSpace,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<usize> {
    check_eps(eps)?;
    let mut k = 0;
    for x in space.points() {
        let ball = space.ball(x, eps)?;
        let r = max_separated_exact_on(space, &ball.members, eps, cfg, TieBreak::Forward)?;
        k = k.max(r.size);
    }
    Ok(k)
}

/// b_eps = max over x of R_{eps/2}(O_eps(x)), computed on the induced
/// subspace of each ball. For point sets in R^d the value is bounded by
/// 2^d (2^d + 1).
pub fn b_eps(space: &FiniteMetricSpace, eps: f64, cfg: &SolverConfig) -> Result<usize> {
    check_eps(eps)?;
    let mut b = 0;
    for x in space.points() {
        let ball = space.ball(x, eps)?;
        let r = min_net_exact_on(
            space,
            &ball.members,
            &ball.members,
            eps / 2.0,
            cfg,
            TieBreak::Forward,
        )?;
        b = b.max(r.size);
    }
    Ok(b)
}

/// C and R subadditivity data for a two-part split of a subspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubadditivityReport {
    pub eps: f64,
    pub c_union: usize,
    pub c_part_a: usize,
    pub c_part_b: usize,
    pub r_union: usize,
    pub r_part_a: usize,
    pub r_part_b: usize,
    pub c_holds: bool,
    pub r_holds: bool,
}

/// Computes C and R on `part_a`, `part_b`, and their union (induced
/// semantics: net centers come from the queried subset itself) and checks
/// `union <= part_a + part_b` for both quantities.
pub fn check_subadditivity(
    space: &FiniteMetricSpace,
    part_a: &[usize],
    part_b: &[usize],
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SubadditivityReport> {
    check_eps(eps)?;
    let a = sorted_unique(part_a, space.n())?;
    let b = sorted_unique(part_b, space.n())?;
    let mut union = a.clone();
    union.extend_from_slice(&b);
    let union = sorted_unique(&union, space.n())?;
    let c_union = max_separated_exact_on(space, &union, eps, cfg, TieBreak::Forward)?.size;
    let c_a = max_separated_exact_on(space, &a, eps, cfg, TieBreak::Forward)?.size;
    let c_b = max_separated_exact_on(space, &b, eps, cfg, TieBreak::Forward)?.size;
    let r_union = min_net_exact_on(space, &union, &union, eps, cfg, TieBreak::Forward)?.size;
    let r_a = min_net_exact_on(space, &a, &a, eps, cfg, TieBreak::Forward)?.size;
    let r_b = min_net_exact_on(space, &b, &b, eps, cfg, TieBreak::Forward)?.size;
    let report = SubadditivityReport {
        eps,
        c_union,
        c_part_a: c_a,
        c_part_b: c_b,
        r_union,
        r_part_a: r_a,
        r_part_b: r_b,
        c_holds: c_union <= c_a + c_b,
        r_holds: r_union <= r_a + r_b,
    };
    debug_assert!(report.c_holds && report.r_holds);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::line_space;

    fn int_line(n: usize) -> FiniteMetricSpace {
        line_space(&(0..n).map(|i| i as f64).collect::<Vec<_>>()).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    // Exhaustive oracles over all subsets; independent of the solver path.
    fn brute_separated(space: &FiniteMetricSpace, eps: f64) -> (usize, Vec<usize>) {
        let n = space.n();
        assert!(n <= 20);
        let mut best_size = 0;
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u32..(1 << n) {
            let pts: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let ok = pts
                .iter()
                .enumerate()
                .all(|(idx, &a)| pts[idx + 1..].iter().all(|&b| space.dist(a, b) >= eps));
            if ok && (pts.len() > best_size || (pts.len() == best_size && pts < best)) {
                best_size = pts.len();
                best = pts;
            }
        }
        (best_size, best)
    }

    fn brute_net(space: &FiniteMetricSpace, eps: f64) -> (usize, Vec<usize>) {
        let n = space.n();
        assert!(n <= 20);
        let mut best_size = usize::MAX;
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u32..(1 << n) {
            let pts: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let covers = (0..n).all(|y| pts.iter().any(|&c| space.dist(c, y) < eps));
            if covers && (pts.len() < best_size || (pts.len() == best_size && pts < best)) {
                best_size = pts.len();
                best = pts;
            }
        }
        (best_size, best)
    }

    #[test]
    fn line_separated_matches_brute_force() {
        let s = int_line(5);
        let (size, lex) = brute_separated(&s, 2.0);
        assert_eq!(size, 3);
        assert_eq!(lex, vec![0, 2, 4]);
        let r = max_separated_exact(&s, 2.0, &cfg()).unwrap();
        assert_eq!(r.size, 3);
        assert_eq!(r.witness, vec![0, 2, 4]);
        assert_eq!(r.certificate, Certificate::Exact);
    }

    #[test]
    fn singleton_complexities() {
        let s = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        assert_eq!(max_separated_exact(&s, 0.5, &cfg()).unwrap().size, 1);
        assert_eq!(min_net_exact(&s, 0.5, &cfg()).unwrap().size, 1);
    }

    #[test]
    fn line_net_matches_brute_force() {
        let s = int_line(5);
        let (size, lex) = brute_net(&s, 1.5);
        assert_eq!(size, 2);
        let r = min_net_exact(&s, 1.5, &cfg()).unwrap();
        assert_eq!(r.size, 2);
        assert_eq!(r.witness, lex);
        r.validate(&s).unwrap();
    }

    #[test]
    fn exact_cap_is_enforced() {
        let s = int_line(5);
        let tight = SolverConfig::with_cap(4);
        assert!(matches!(
            max_separated_exact(&s, 2.0, &tight),
            Err(Error::ExactCapExceeded { .. })
        ));
        assert!(matches!(
            min_net_exact(&s, 2.0, &tight),
            Err(Error::ExactCapExceeded { .. })
        ));
    }

    #[test]
    fn invalid_eps_rejected() {
        let s = int_line(3);
        assert!(matches!(max_separated_exact(&s, 0.0, &cfg()), Err(Error::InvalidEpsilon { .. })));
        assert!(matches!(min_net_greedy(&s, -1.0), Err(Error::InvalidEpsilon { .. })));
    }

    #[test]
    fn greedy_separated_examples() {
        let s = int_line(5);
        let natural: Vec<usize> = (0..5).collect();
        let g = max_separated_greedy(&s, 2.0, &natural).unwrap();
        assert_eq!(g.witness, vec![0, 2, 4]);
        assert_eq!(g.certificate, Certificate::GreedyLowerBound);
        // eps below the minimum gap keeps everything
        let g = max_separated_greedy(&s, 0.5, &natural).unwrap();
        assert_eq!(g.size, 5);
        // eps above the diameter keeps a single point
        let g = max_separated_greedy(&s, 10.0, &natural).unwrap();
        assert_eq!(g.size, 1);
    }

    #[test]
    fn greedy_net_examples() {
        let s = int_line(5);
        assert_eq!(min_net_greedy(&s, 1.5).unwrap().size, 2);
        assert_eq!(min_net_greedy(&s, 10.0).unwrap().size, 1);
        // eps at or below the minimum positive distance isolates every point
        assert_eq!(min_net_greedy(&s, 1.0).unwrap().size, 5);
    }

    #[test]
    fn reverse_tie_break_picks_the_other_optimum() {
        let s = int_line(6);
        let all: Vec<usize> = (0..6).collect();
        let fwd = max_separated_exact_on(&s, &all, 2.0, &cfg(), TieBreak::Forward).unwrap();
        let rev = max_separated_exact_on(&s, &all, 2.0, &cfg(), TieBreak::Reverse).unwrap();
        assert_eq!(fwd.size, 3);
        assert_eq!(rev.size, 3);
        assert_eq!(fwd.witness, vec![0, 2, 4]);
        assert_eq!(rev.witness, vec![1, 3, 5]);
    }

    #[test]
    fn profile_matches_solver_examples() {
        let s = int_line(5);
        let p = complexity_profile(&s, &[2.0, 1.5], &cfg()).unwrap();
        assert_eq!(p.entries.len(), 2);
        assert_eq!(p.entries[0].eps, 2.0);
        assert_eq!(p.entries[0].separated.size, 3);
        assert_eq!(p.entries[0].net.size, 2);
        assert_eq!(p.entries[1].separated.size, 3);
        assert_eq!(p.entries[1].net.size, 2);
        p.verify().unwrap();
    }

    #[test]
    fn profile_goes_greedy_above_cap() {
        let s = int_line(10);
        let tight = SolverConfig::with_cap(8);
        let p = complexity_profile(&s, &[2.0], &tight).unwrap();
        assert_eq!(p.entries[0].separated.certificate, Certificate::GreedyLowerBound);
        assert_eq!(p.entries[0].net.certificate, Certificate::GreedyUpperBound);
    }

    #[test]
    fn local_packing_bound_examples() {
        // all three points inside every 1.0-ball, but pairwise closer than 1
        let s = line_space(&[0.0, 0.4, 0.8]).unwrap();
        assert_eq!(local_packing_bound(&s, 1.0, &cfg()).unwrap(), 1);
        let s = int_line(5);
        let k = local_packing_bound(&s, 2.0, &cfg()).unwrap();
        // O_2(2) = {1,2,3}: pairs at distance 2 are separated, e.g. {1,3}
        assert_eq!(k, 2);
    }

    #[test]
    fn b_eps_singleton_is_one() {
        let s = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        assert_eq!(b_eps(&s, 1.0, &cfg()).unwrap(), 1);
    }

    #[test]
    fn subadditivity_trivial_cases() {
        let s = FiniteMetricSpace::from_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let rep = check_subadditivity(&s, &[0], &[1], 0.5, &cfg()).unwrap();
        assert_eq!((rep.c_union, rep.c_part_a, rep.c_part_b), (2, 1, 1));
        assert!(rep.c_holds && rep.r_holds);
        // A = B = whole space: C <= 2C trivially
        let s = int_line(5);
        let all: Vec<usize> = (0..5).collect();
        let rep = check_subadditivity(&s, &all, &all, 2.0, &cfg()).unwrap();
        assert_eq!(rep.c_union, rep.c_part_a);
        assert!(rep.c_holds && rep.r_holds);
    }

    #[test]
    fn optimal_separated_witness_is_a_net() {
        for eps in [0.7, 1.0, 1.5, 2.0, 3.0] {
            let s = int_line(7);
            let c = max_separated_exact(&s, eps, &cfg()).unwrap();
            let as_net = ComplexityResult { kind: WitnessKind::Net, ..c };
            as_net.validate(&s).unwrap();
        }
    }

    #[test]
    fn oracle_equivalence_on_small_random_spaces() {
        use crate::corpus::random_repaired_metric;
        for seed in 0..25u64 {
            let n = 3 + (seed as usize % 8);
            let s = random_repaired_metric(seed, n);
            for q in [0.25, 0.5, 0.75] {
                let eps = crate::corpus::distance_quantile(&s, q);
                let c = max_separated_exact(&s, eps, &cfg()).unwrap();
                let r = min_net_exact(&s, eps, &cfg()).unwrap();
                let (bc, blex) = brute_separated(&s, eps);
                let (br, brlex) = brute_net(&s, eps);
                assert_eq!(c.size, bc, "C mismatch seed {seed} eps {eps}");
                assert_eq!(c.witness, blex, "C lex mismatch seed {seed}");
                assert_eq!(r.size, br, "R mismatch seed {seed} eps {eps}");
                assert_eq!(r.witness, brlex, "R lex mismatch seed {seed}");
                assert!(r.size <= c.size);
                let r_half = min_net_exact(&s, eps / 2.0, &cfg()).unwrap();
                assert!(r_half.size >= c.size, "R_eps/2 >= C_eps violated");
            }
        }
    }

    #[test]
    fn greedy_brackets_exact() {
        use crate::corpus::random_repaired_metric;
        for seed in 40..60u64 {
            let n = 4 + (seed as usize % 7);
            let s = random_repaired_metric(seed, n);
            let natural: Vec<usize> = (0..n).collect();
            let eps = crate::corpus::distance_quantile(&s, 0.4);
            let exact_c = max_separated_exact(&s, eps, &cfg()).unwrap().size;
            let exact_r = min_net_exact(&s, eps, &cfg()).unwrap().size;
            assert!(max_separated_greedy(&s, eps, &natural).unwrap().size <= exact_c);
            assert!(min_net_greedy(&s, eps).unwrap().size >= exact_r);
        }
    }
}
