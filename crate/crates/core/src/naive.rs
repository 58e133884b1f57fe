//! Brute-force reference computations for small graphs.
//!
//! Everything here enumerates vertex subsets directly and re-checks piece
//! shapes from first principles, so it shares no search code with
//! [`crate::solvers`]. Intended for graphs on at most about 12 vertices.

use std::collections::HashSet;

use crate::bitset::VertexSet;
use crate::graph::{Graph, PieceKind};

fn subset(mask: u32) -> VertexSet {
    (0..32).filter(|v| mask >> v & 1 == 1).collect()
}

fn is_star(g: &Graph, s: &[usize]) -> bool {
    let k = s.len();
    if k == 1 {
        return true;
    }
    let deg: Vec<usize> = s
        .iter()
        .map(|&u| s.iter().filter(|&&w| g.has_edge(u, w)).count())
        .collect();
    let edges: usize = deg.iter().sum::<usize>() / 2;
    if edges != k - 1 {
        return false;
    }
    // A tree with a vertex adjacent to all others.
    deg.iter().any(|&d| d == k - 1)
}

fn is_path(g: &Graph, s: &[usize]) -> bool {
    let k = s.len();
    let deg: Vec<usize> = s
        .iter()
        .map(|&u| s.iter().filter(|&&w| g.has_edge(u, w)).count())
        .collect();
    let edges: usize = deg.iter().sum::<usize>() / 2;
    edges == k - 1 && deg.iter().all(|&d| d <= 2) && connected(g, s)
}

fn connected(g: &Graph, s: &[usize]) -> bool {
    let mut seen = vec![s[0]];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &w in s {
            if g.has_edge(u, w) && !seen.contains(&w) {
                seen.push(w);
            }
        }
        i += 1;
    }
    seen.len() == s.len()
}

/// Floyd–Warshall distances.
fn floyd(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in 0..n {
            if g.has_edge(u, v) {
                d[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn is_isometric(g: &Graph, s: &[usize], d: &[Vec<usize>]) -> bool {
    if !is_path(g, s) {
        return false;
    }
    let k = s.len();
    // The endpoints are the vertices of degree at most one inside s.
    let ends: Vec<usize> = s
        .iter()
        .copied()
        .filter(|&u| s.iter().filter(|&&w| g.has_edge(u, w)).count() <= 1)
        .collect();
    k == 1 || d[ends[0]][ends[1]] == k - 1
}

/// Every vertex set of `g` inducing a piece of the given kind.
pub fn all_pieces(g: &Graph, kind: PieceKind) -> Vec<VertexSet> {
    let n = g.order();
    assert!(n <= 16, "naive enumeration is for small graphs");
    let d = floyd(g);
    (1u32..1 << n)
        .filter_map(|mask| {
            let s: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let ok = match kind {
                PieceKind::Star => is_star(g, &s),
                PieceKind::Path => is_path(g, &s),
                PieceKind::IsometricPath => is_isometric(g, &s, &d),
                PieceKind::SPAny => is_star(g, &s) || is_path(g, &s),
            };
            ok.then(|| subset(mask))
        })
        .collect()
}

fn min_pieces(g: &Graph, kind: PieceKind, disjoint: bool) -> usize {
    let n = g.order();
    let full: u32 = (1u32 << n) - 1;
    let pieces: Vec<u32> = all_pieces(g, kind)
        .iter()
        .map(|s| s.iter().fold(0u32, |m, v| m | 1 << v))
        .collect();
    let mut frontier: HashSet<u32> = HashSet::from([0]);
    let mut seen = frontier.clone();
    for k in 1..=n {
        let mut next = HashSet::new();
        for &m in &frontier {
            for &p in &pieces {
                if disjoint && m & p != 0 {
                    continue;
                }
                let u = m | p;
                if u == full {
                    return k;
                }
                if seen.insert(u) {
                    next.insert(u);
                }
            }
        }
        frontier = next;
    }
    unreachable!("singletons always cover")
}

/// Minimum number of pieces whose union is `V(g)`.
pub fn min_cover_value(g: &Graph, kind: PieceKind) -> usize {
    if g.order() == 0 {
        return 0;
    }
    min_pieces(g, kind, false)
}

/// Minimum number of pairwise disjoint pieces whose union is `V(g)`.
pub fn min_partition_value(g: &Graph, kind: PieceKind) -> usize {
    if g.order() == 0 {
        return 0;
    }
    min_pieces(g, kind, true)
}

/// Chromatic number as the least number of independent sets covering `V(g)`.
pub fn chromatic_by_independent_sets(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let full: u32 = (1u32 << n) - 1;
    let indep: Vec<u32> = (1u32..=full)
        .filter(|&m| {
            (0..n).all(|u| m >> u & 1 == 0 || (0..n).all(|v| m >> v & 1 == 0 || !g.has_edge(u, v)))
        })
        .collect();
    let mut reach = vec![false; 1 << n];
    reach[0] = true;
    let mut frontier = vec![0u32];
    for k in 1..=n {
        let mut next = Vec::new();
        for &m in &frontier {
            for &p in &indep {
                let u = (m | p) as usize;
                if u as u32 == full {
                    return k;
                }
                if !reach[u] {
                    reach[u] = true;
                    next.push(u as u32);
                }
            }
        }
        frontier = next;
    }
    n
}

/// Size of a minimum dominating set by subset enumeration.
pub fn domination_number(g: &Graph) -> usize {
    let n = g.order();
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, w| m | 1 << w))
        .collect();
    let full: u32 = (1u32 << n) - 1;
    (0u32..=full)
        .filter(|&m| {
            (0..n)
                .filter(|v| m >> v & 1 == 1)
                .fold(0, |acc, v| acc | closed[v])
                == full
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Largest clique size by subset enumeration.
pub fn clique_number(g: &Graph) -> usize {
    let n = g.order();
    (0u32..1 << n)
        .filter(|&m| {
            (0..n)
                .all(|u| m >> u & 1 == 0 || (u + 1..n).all(|v| m >> v & 1 == 0 || g.has_edge(u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
