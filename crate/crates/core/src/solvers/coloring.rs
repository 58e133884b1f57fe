//! Exact chromatic number, clique number and independence number.

use crate::bitset::VertexSet;
use crate::generators::complement;
use crate::graph::Graph;

/// A maximum clique, found by branch and bound with a greedy colouring
/// bound.
pub fn max_clique(g: &Graph) -> VertexSet {
    fn color_order(g: &Graph, p: &VertexSet) -> Vec<(usize, usize)> {
        // (vertex, colour number) with colours 1.. assigned greedily.
        let mut out = Vec::with_capacity(p.len());
        let mut uncolored = *p;
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored;
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail = avail.difference(g.neighbors(v));
                uncolored.remove(v);
                out.push((v, color));
            }
        }
        out
    }
    fn expand(g: &Graph, r: &mut Vec<usize>, p: VertexSet, best: &mut Vec<usize>) {
        let order = color_order(g, &p);
        let mut p = p;
        for &(v, c) in order.iter().rev() {
            if r.len() + c <= best.len() {
                return;
            }
            r.push(v);
            let np = p.intersection(g.neighbors(v));
            if np.is_empty() {
                if r.len() > best.len() {
                    *best = r.clone();
                }
            } else {
                expand(g, r, np, best);
            }
            r.pop();
            p.remove(v);
        }
    }
    let mut best = Vec::new();
    expand(g, &mut Vec::new(), g.vertex_set(), &mut best);
    best.into_iter().collect()
}

pub fn clique_number(g: &Graph) -> usize {
    max_clique(g).len()
}

pub fn max_independent_set(g: &Graph) -> VertexSet {
    max_clique(&complement(g))
}

pub fn independence_number(g: &Graph) -> usize {
    max_independent_set(g).len()
}

/// An optimal proper colouring, colours numbered from 0.
pub fn optimal_coloring(g: &Graph) -> Vec<usize> {
    let n = g.order();
    if n == 0 {
        return Vec::new();
    }
    let clique = max_clique(g);
    let mut colors = vec![usize::MAX; n];
    for (i, v) in clique.iter().enumerate() {
        colors[v] = i;
    }
    let mut best = dsatur_greedy(g, colors.clone());
    let best_count = best.iter().max().unwrap() + 1;
    if best_count > clique.len() {
        let mut search = Dsatur {
            g,
            best_count,
            best: best.clone(),
            lower: clique.len(),
        };
        let used = clique.len();
        search.run(&mut colors, used, n - clique.len());
        best = search.best;
    }
    best
}

pub fn chromatic_number(g: &Graph) -> usize {
    optimal_coloring(g).iter().max().map_or(0, |c| c + 1)
}

fn saturation(g: &Graph, colors: &[usize], v: usize) -> VertexSet {
    g.neighbors(v)
        .iter()
        .filter(|&w| colors[w] != usize::MAX)
        .map(|w| colors[w])
        .collect()
}

fn pick_vertex(g: &Graph, colors: &[usize]) -> usize {
    (0..g.order())
        .filter(|&v| colors[v] == usize::MAX)
        .max_by_key(|&v| {
            let uncolored_deg = g
                .neighbors(v)
                .iter()
                .filter(|&w| colors[w] == usize::MAX)
                .count();
            (
                saturation(g, colors, v).len(),
                uncolored_deg,
                std::cmp::Reverse(v),
            )
        })
        .unwrap()
}

fn dsatur_greedy(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let left = colors.iter().filter(|&&c| c == usize::MAX).count();
    for _ in 0..left {
        let v = pick_vertex(g, &colors);
        let sat = saturation(g, &colors, v);
        colors[v] = (0..).find(|c| !sat.contains(*c)).unwrap();
    }
    colors
}

struct Dsatur<'a> {
    g: &'a Graph,
    best_count: usize,
    best: Vec<usize>,
    lower: usize,
}

impl Dsatur<'_> {
    fn run(&mut self, colors: &mut Vec<usize>, used: usize, left: usize) {
        if self.best_count == self.lower {
            return;
        }
        if left == 0 {
            if used < self.best_count {
                self.best_count = used;
                self.best = colors.clone();
            }
            return;
        }
        let v = pick_vertex(self.g, colors);
        let sat = saturation(self.g, colors, v);
        for c in 0..=used {
            if sat.contains(c) {
                continue;
            }
            let new_used = used.max(c + 1);
            if new_used >= self.best_count {
                break;
            }
            colors[v] = c;
            self.run(colors, new_used, left - 1);
            colors[v] = usize::MAX;
        }
    }
}
