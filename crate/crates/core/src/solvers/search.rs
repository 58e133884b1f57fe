//! Exact minimum covers and partitions by memoized branch and bound.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::certificate::PieceCertificate;
use super::pieces::{distance_matrix, maximal_pieces_within, pieces_containing_within, Budget};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, PieceKind};
use crate::invariant::{Invariant, Mode};

const MEMO_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub time_budget: Duration,
    /// A known upper bound on the optimum, used to tighten the first bound.
    pub upper_bound_seed: Option<usize>,
    pub parallel: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            time_budget: Duration::from_secs(60),
            upper_bound_seed: None,
            parallel: false,
        }
    }
}

impl SolveConfig {
    pub fn with_budget(secs: f64) -> Result<Self> {
        if !(secs > 0.0 && secs.is_finite()) {
            return Err(Error::BadParameter(format!(
                "time budget must be positive, got {secs}"
            )));
        }
        Ok(SolveConfig {
            time_budget: Duration::from_secs_f64(secs),
            ..Default::default()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    /// The budget ran out; the certificate is the best one found.
    Timeout,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub certificate: PieceCertificate,
    pub status: SolveStatus,
    /// Proven lower bound on the optimum.
    pub lower_bound: usize,
    pub nodes: u64,
}

impl Solution {
    pub fn value(&self) -> usize {
        self.certificate.value
    }
}

struct Aborted;

/// One search over a fixed graph, kind and mode.
struct Searcher<'a> {
    g: &'a Graph,
    kind: PieceKind,
    mode: Mode,
    maximal: Vec<VertexSet>,
    /// Indices into `maximal` of the pieces containing each vertex.
    by_vertex: Vec<Vec<usize>>,
    dist: Option<Vec<Vec<usize>>>,
    /// Exact value, or a lower bound when the flag is false.
    memo: HashMap<VertexSet, (usize, bool)>,
    deadline: Instant,
    /// Shares `deadline` with the piece enumerations.
    budget: Budget,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(
        g: &'a Graph,
        kind: PieceKind,
        mode: Mode,
        deadline: Instant,
    ) -> std::result::Result<Self, Aborted> {
        let budget = Budget::until(deadline);
        let maximal = maximal_pieces_within(g, kind, &g.vertex_set(), &budget).ok_or(Aborted)?;
        let mut by_vertex = vec![Vec::new(); g.order()];
        for (i, s) in maximal.iter().enumerate() {
            for v in s.iter() {
                by_vertex[v].push(i);
            }
        }
        let dist = (kind == PieceKind::IsometricPath).then(|| distance_matrix(g));
        Ok(Searcher {
            g,
            kind,
            mode,
            maximal,
            by_vertex,
            dist,
            memo: HashMap::new(),
            deadline,
            budget,
            nodes: 0,
        })
    }

    /// Fractional bound: each vertex pays `1 / (largest piece through it)`.
    fn lower_bound(&self, u: &VertexSet) -> usize {
        let mut total = 0.0f64;
        for v in u.iter() {
            let best = self.by_vertex[v]
                .iter()
                .map(|&i| self.maximal[i].intersection(u).len())
                .max()
                .unwrap_or(1);
            total += 1.0 / best as f64;
        }
        (total - 1e-9).ceil().max(0.0) as usize
    }

    /// Branches at `u`: (child state, piece to record), largest pieces first.
    fn branches(&self, u: &VertexSet) -> std::result::Result<Vec<(VertexSet, VertexSet)>, Aborted> {
        let pivot = u.first().unwrap();
        let out = match self.mode {
            Mode::Cover => {
                let mut cands: Vec<(VertexSet, VertexSet)> = self.by_vertex[pivot]
                    .iter()
                    .map(|&i| (self.maximal[i].intersection(u), self.maximal[i]))
                    .collect();
                cands.sort_by_key(|(r, s)| (std::cmp::Reverse(r.len()), *r, *s));
                cands.dedup_by_key(|(r, _)| *r);
                // Drop pieces whose uncovered part is inside another's.
                let mut kept: Vec<(VertexSet, VertexSet)> = Vec::with_capacity(cands.len());
                for (r, s) in cands {
                    if !kept.iter().any(|(k, _)| r.is_subset(k)) {
                        kept.push((r, s));
                    }
                }
                kept.into_iter()
                    .map(|(r, s)| (u.difference(&r), s))
                    .collect()
            }
            Mode::Partition => self
                .partition_pieces(u, pivot)?
                .into_iter()
                .map(|s| (u.difference(&s), s))
                .collect(),
        };
        Ok(out)
    }

    fn partition_pieces(
        &self,
        u: &VertexSet,
        pivot: usize,
    ) -> std::result::Result<Vec<VertexSet>, Aborted> {
        let pieces = pieces_containing_within(
            self.g,
            self.kind,
            u,
            pivot,
            self.dist.as_deref(),
            &self.budget,
        );
        if self.budget.expired() {
            return Err(Aborted);
        }
        Ok(pieces)
    }

    /// Returns the exact optimum of `u` if it is below `ub`, otherwise some
    /// lower bound that is at least `ub`.
    fn search(&mut self, u: VertexSet, ub: usize) -> std::result::Result<usize, Aborted> {
        if u.is_empty() {
            return Ok(0);
        }
        if let Some(&(v, exact)) = self.memo.get(&u) {
            if exact || v >= ub {
                return Ok(v);
            }
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
            return Err(Aborted);
        }
        let lb = self
            .lower_bound(&u)
            .max(self.memo.get(&u).map_or(0, |e| e.0));
        if lb >= ub {
            self.store(u, lb, false);
            return Ok(lb);
        }
        let mut best = ub;
        let mut found = false;
        for (child, _) in self.branches(&u)? {
            let r = self.search(child, best - 1)?;
            if r + 1 < best {
                best = r + 1;
                found = true;
                if best <= lb {
                    break;
                }
            }
        }
        self.store(u, best, found);
        Ok(best)
    }

    fn store(&mut self, u: VertexSet, v: usize, exact: bool) {
        if self.memo.len() < MEMO_LIMIT || self.memo.contains_key(&u) {
            self.memo.insert(u, (v, exact));
        }
    }

    /// Rebuilds an optimal piece list for `u` whose value is known to be `val`.
    fn reconstruct(
        &mut self,
        mut u: VertexSet,
        mut val: usize,
    ) -> std::result::Result<Vec<VertexSet>, Aborted> {
        let mut out = Vec::new();
        while !u.is_empty() {
            let mut next = None;
            for (child, piece) in self.branches(&u)? {
                if self.search(child, val)? + 1 == val {
                    next = Some((child, piece));
                    break;
                }
            }
            let (child, piece) = next.expect("optimal branch exists");
            out.push(piece);
            u = child;
            val -= 1;
        }
        Ok(out)
    }

    fn greedy(&self) -> std::result::Result<Vec<VertexSet>, Aborted> {
        let mut u = self.g.vertex_set();
        let mut out = Vec::new();
        while let Some(pivot) = u.first() {
            let piece = match self.mode {
                Mode::Cover => *self
                    .maximal
                    .iter()
                    .max_by_key(|s| (s.intersection(&u).len(), std::cmp::Reverse(**s)))
                    .filter(|s| !s.is_disjoint(&u))
                    .unwrap_or(&self.maximal[self.by_vertex[pivot][0]]),
                Mode::Partition => self.partition_pieces(&u, pivot)?[0],
            };
            out.push(piece);
            u = u.difference(&piece);
        }
        Ok(out)
    }
}

fn solve(g: &Graph, kind: PieceKind, mode: Mode, cfg: &SolveConfig) -> Result<Solution> {
    if g.order() == 0 {
        return Err(Error::BadInput("graph has no vertices".into()));
    }
    let deadline = Instant::now() + cfg.time_budget;
    // Out of time before any incumbent exists: singletons are always valid.
    let trivial = || Solution {
        certificate: PieceCertificate::singletons(g, mode, kind),
        status: SolveStatus::Timeout,
        lower_bound: 1,
        nodes: 0,
    };
    let Ok(mut s) = Searcher::new(g, kind, mode, deadline) else {
        return Ok(trivial());
    };
    let Ok(incumbent) = s.greedy() else {
        return Ok(trivial());
    };
    let all = g.vertex_set();
    let root_lb = s.lower_bound(&all);
    let timeout = |s: &Searcher, lb: usize| Solution {
        certificate: PieceCertificate::new(g, mode, kind, incumbent.clone()),
        status: SolveStatus::Timeout,
        lower_bound: lb,
        nodes: s.nodes,
    };

    let mut ub = incumbent.len();
    if let Some(seed) = cfg.upper_bound_seed {
        ub = ub.min(seed + 1);
    } else if cfg.parallel && incumbent.len() > root_lb {
        match parallel_value(g, kind, mode, deadline, incumbent.len()) {
            Some(v) => ub = ub.min(v + 1),
            None => return Ok(timeout(&s, root_lb)),
        }
    }

    let mut value = match s.search(all, ub) {
        Ok(v) => v,
        Err(Aborted) => return Ok(timeout(&s, root_lb)),
    };
    if value >= ub && ub < incumbent.len() {
        // The seed was too optimistic; search again from the incumbent.
        value = match s.search(all, incumbent.len()) {
            Ok(v) => v,
            Err(Aborted) => return Ok(timeout(&s, root_lb.max(ub))),
        };
    }
    let pieces = if value < incumbent.len() {
        match s.reconstruct(all, value) {
            Ok(p) => p,
            Err(Aborted) => return Ok(timeout(&s, value)),
        }
    } else {
        incumbent.clone()
    };
    let certificate = PieceCertificate::new(g, mode, kind, pieces);
    Ok(Solution {
        lower_bound: certificate.value,
        certificate,
        status: SolveStatus::Optimal,
        nodes: s.nodes,
    })
}

/// Optimum value found by exploring the root branches on separate threads,
/// or `None` on timeout.
fn parallel_value(
    g: &Graph,
    kind: PieceKind,
    mode: Mode,
    deadline: Instant,
    ub: usize,
) -> Option<usize> {
    let root = Searcher::new(g, kind, mode, deadline).ok()?;
    let branches = root.branches(&g.vertex_set()).ok()?;
    let results: Vec<Option<usize>> = branches
        .par_iter()
        .map(|(child, _)| {
            let mut s = Searcher::new(g, kind, mode, deadline).ok()?;
            s.search(*child, ub - 1).ok().map(|r| r + 1)
        })
        .collect();
    results
        .into_iter()
        .try_fold(ub, |acc, r| r.map(|r| acc.min(r)))
}

/// Minimum induced cover by pieces of the given kind.
pub fn min_cover(g: &Graph, kind: PieceKind, cfg: &SolveConfig) -> Result<Solution> {
    solve(g, kind, Mode::Cover, cfg)
}

/// Minimum induced partition into pieces of the given kind.
pub fn min_partition(g: &Graph, kind: PieceKind, cfg: &SolveConfig) -> Result<Solution> {
    solve(g, kind, Mode::Partition, cfg)
}

pub fn solve_invariant(g: &Graph, inv: Invariant, cfg: &SolveConfig) -> Result<Solution> {
    solve(g, inv.kind(), inv.mode(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, generate, path, star};
    use crate::naive;
    use crate::solvers::validate_certificate;

    fn named(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn cover(g: &Graph, kind: PieceKind) -> usize {
        let s = min_cover(g, kind, &SolveConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!(validate_certificate(g, &s.certificate).pass);
        s.value()
    }

    fn partition(g: &Graph, kind: PieceKind) -> usize {
        let s = min_partition(g, kind, &SolveConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!(validate_certificate(g, &s.certificate).pass);
        s.value()
    }

    #[test]
    fn cover_examples() {
        assert_eq!(cover(&complete(5), PieceKind::SPAny), 3);
        assert_eq!(cover(&path(9), PieceKind::SPAny), 1);
        assert_eq!(cover(&named("sstar:4"), PieceKind::SPAny), 2);
        assert_eq!(cover(&star(6), PieceKind::Path), 3);
        assert_eq!(cover(&path(7), PieceKind::Star), 3);
        assert_eq!(cover(&cycle(5), PieceKind::SPAny), 2);
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition(&named("stilde:4"), PieceKind::SPAny), 5);
        assert_eq!(partition(&path(5), PieceKind::SPAny), 1);
        assert_eq!(partition(&cycle(4), PieceKind::SPAny), 2);
    }

    #[test]
    fn rejects_empty_graph() {
        let g = Graph::empty(0).unwrap();
        assert!(matches!(
            min_cover(&g, PieceKind::Star, &SolveConfig::default()),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn zero_budget_times_out_with_valid_incumbent() {
        let g = named("h3:3,3");
        let cfg = SolveConfig {
            time_budget: Duration::ZERO,
            ..Default::default()
        };
        let s = min_cover(&g, PieceKind::SPAny, &cfg).unwrap();
        assert!(validate_certificate(&g, &s.certificate).pass);
        assert!(s.lower_bound <= s.value());
    }

    #[test]
    fn parallel_and_seeded_agree() {
        let g = named("h1:3,3");
        let base = min_cover(&g, PieceKind::SPAny, &SolveConfig::default()).unwrap();
        let par = min_cover(
            &g,
            PieceKind::SPAny,
            &SolveConfig {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(base.certificate, par.certificate);
        for seed in [1, base.value(), base.value() + 3] {
            let cfg = SolveConfig {
                upper_bound_seed: Some(seed),
                ..Default::default()
            };
            let s = min_cover(&g, PieceKind::SPAny, &cfg).unwrap();
            assert_eq!(s.value(), base.value());
            assert_eq!(s.status, SolveStatus::Optimal);
        }
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 150 {
            let n = rng.gen_range(2..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            for kind in PieceKind::ALL {
                assert_eq!(
                    cover(&g, kind),
                    naive::min_cover_value(&g, kind),
                    "{g:?} {kind:?}"
                );
                assert_eq!(
                    partition(&g, kind),
                    naive::min_partition_value(&g, kind),
                    "{g:?} {kind:?}"
                );
            }
            done += 1;
        }
    }

    #[test]
    fn budget_covers_piece_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 60;
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let cfg = SolveConfig::with_budget(0.2).unwrap();
        let start = Instant::now();
        let s = min_partition(&g, PieceKind::Path, &cfg).unwrap();
        assert!(start.elapsed().as_secs_f64() < 5.0);
        assert_eq!(s.status, SolveStatus::Timeout);
        assert!(validate_certificate(&g, &s.certificate).pass);
    }
}
