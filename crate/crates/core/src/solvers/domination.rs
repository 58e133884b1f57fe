//! Exact minimum dominating set as set cover over closed neighbourhoods.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn closed(g: &Graph, v: usize) -> VertexSet {
    let mut s = *g.neighbors(v);
    s.insert(v);
    s
}

struct Dom<'a> {
    g: &'a Graph,
    closed: Vec<VertexSet>,
    best: VertexSet,
}

impl Dom<'_> {
    /// Undominated vertices with pairwise disjoint closed neighbourhoods
    /// need distinct dominators.
    fn packing_bound(&self, undominated: &VertexSet) -> usize {
        let mut blocked = VertexSet::new();
        let mut count = 0;
        for u in undominated.iter() {
            if self.closed[u].is_disjoint(&blocked) {
                count += 1;
                blocked = blocked.union(&self.closed[u]);
            }
        }
        count
    }

    fn volume_bound(&self, undominated: &VertexSet) -> usize {
        let max = (0..self.g.order())
            .map(|w| self.closed[w].intersection(undominated).len())
            .max()
            .unwrap_or(1)
            .max(1);
        undominated.len().div_ceil(max)
    }

    fn run(&mut self, chosen: VertexSet, undominated: VertexSet) {
        let Some(_) = undominated.first() else {
            if chosen.len() < self.best.len() {
                self.best = chosen;
            }
            return;
        };
        let lb = self
            .packing_bound(&undominated)
            .max(self.volume_bound(&undominated));
        if chosen.len() + lb >= self.best.len() {
            return;
        }
        // Branch on the undominated vertex with the fewest dominator choices.
        let u = undominated
            .iter()
            .min_by_key(|&u| (self.closed[u].len(), u))
            .unwrap();
        let mut options: Vec<usize> = self.closed[u].iter().collect();
        options.sort_by_key(|&w| {
            (
                std::cmp::Reverse(self.closed[w].intersection(&undominated).len()),
                w,
            )
        });
        // Skip options whose new coverage is inside another option's.
        let gains: Vec<VertexSet> = options
            .iter()
            .map(|&w| self.closed[w].intersection(&undominated))
            .collect();
        for (i, &w) in options.iter().enumerate() {
            let dominated = (0..i).any(|j| gains[i].is_subset(&gains[j]));
            if dominated {
                continue;
            }
            let mut next = chosen;
            next.insert(w);
            self.run(next, undominated.difference(&self.closed[w]));
        }
    }
}

/// A minimum dominating set; the least one found by a deterministic search.
pub fn min_dominating_set(g: &Graph) -> Result<VertexSet> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(min_dominating_set_unchecked(g))
}

/// As [`min_dominating_set`] without the connectivity requirement.
pub fn min_dominating_set_unchecked(g: &Graph) -> VertexSet {
    let closed: Vec<VertexSet> = (0..g.order()).map(|v| closed(g, v)).collect();
    // Greedy incumbent.
    let mut undominated = g.vertex_set();
    let mut greedy = VertexSet::new();
    while !undominated.is_empty() {
        let w = (0..g.order())
            .max_by_key(|&w| {
                (
                    closed[w].intersection(&undominated).len(),
                    std::cmp::Reverse(w),
                )
            })
            .unwrap();
        greedy.insert(w);
        undominated = undominated.difference(&closed[w]);
    }
    let mut d = Dom {
        g,
        closed,
        best: greedy,
    };
    d.run(VertexSet::new(), g.vertex_set());
    d.best
}

pub fn is_dominating(g: &Graph, set: &VertexSet) -> bool {
    let mut covered = *set;
    for v in set.iter() {
        covered = covered.union(g.neighbors(v));
    }
    covered == g.vertex_set()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, generate, path};
    use crate::naive;

    #[test]
    fn examples() {
        for n in 1..6 {
            assert_eq!(min_dominating_set(&complete(n)).unwrap().len(), 1);
        }
        assert_eq!(min_dominating_set(&path(6)).unwrap().len(), 2);
        let s = generate(&"sstar:3".parse().unwrap()).unwrap();
        assert_eq!(min_dominating_set(&s).unwrap(), [1, 2, 3].iter().collect());
        let two = Graph::empty(2).unwrap();
        assert!(matches!(min_dominating_set(&two), Err(Error::Disconnected)));
        assert_eq!(min_dominating_set(&path(40)).unwrap().len(), 14);
    }

    #[test]
    fn matches_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let d = min_dominating_set_unchecked(&g);
            assert!(is_dominating(&g, &d));
            assert_eq!(d.len(), naive::domination_number(&g));
        }
    }
}
