//! Simple undirected graphs with bitset adjacency, metric queries and the
//! star/path piece predicates.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::{VertexSet, MAX_ORDER};
use crate::error::{Error, Result};

/// An undirected simple graph on the vertices `0..order`.
///
/// Equality compares adjacency only; the label is informational.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<VertexSet>,
    label: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// The edgeless graph on `order` vertices.
    pub fn empty(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        Ok(Graph {
            adj: vec![VertexSet::new(); order],
            label: None,
        })
    }

    /// Builds a graph from an edge list. Duplicate and reversed pairs are
    /// coalesced.
    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(order)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let order = self.order();
        for x in [u, v] {
            if x >= order {
                return Err(Error::IndexOutOfRange { index: x, order });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Degrees in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::prefix(self.order())
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for u in 0..self.order() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter()
            .map(|v| self.adj[v].intersection(set).len())
            .sum::<usize>()
            / 2
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set))
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| {
            let mut rest = *set;
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        })
    }

    /// Induced subgraph on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut h = Graph {
            adj: vec![VertexSet::new(); vertices.len()],
            label: None,
        };
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    h.adj[i].insert(j);
                    h.adj[j].insert(i);
                }
            }
        }
        h
    }

    /// Graph with `vertices` deleted, remaining vertices relabelled in
    /// ascending order.
    pub fn delete_vertices(&self, vertices: &VertexSet) -> Graph {
        let keep: Vec<usize> = (0..self.order())
            .filter(|v| !vertices.contains(*v))
            .collect();
        self.induced(&keep)
    }

    /// Breadth-first distances from `root`; `None` marks unreachable vertices.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.adj[u].iter() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(u)[v]
    }

    /// Breadth-first layering from `root`.
    pub fn bfs_layering(&self, root: usize) -> Result<BfsLayering> {
        if root >= self.order() {
            return Err(Error::IndexOutOfRange {
                index: root,
                order: self.order(),
            });
        }
        let dist = self.distances_from(root);
        let depth = dist.iter().flatten().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); depth + 1];
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                layers[*d].push(v);
            }
        }
        Ok(BfsLayering { root, layers, dist })
    }

    pub fn eccentricity(&self, v: usize) -> Option<usize> {
        let dist = self.distances_from(v);
        dist.iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn diameter(&self) -> Diameter {
        let mut best = 0;
        for v in 0..self.order() {
            match self.eccentricity(v) {
                Some(e) => best = best.max(e),
                None => return Diameter::Disconnected,
            }
        }
        Diameter::Finite(best)
    }

    /// Connected components, each sorted, ordered by least element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in 0..self.order() {
            if seen.contains(v) {
                continue;
            }
            let comp = self.component_within(v, &self.vertex_set());
            seen = seen.union(&comp);
            out.push(comp.to_vec());
        }
        out
    }

    /// The component of `start` in `self[within]`.
    pub fn component_within(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::new();
            for u in frontier.iter() {
                next = next.union(&self.adj[u]);
            }
            next = next.intersection(within).difference(&comp);
            comp = comp.union(&next);
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.component_within(0, &self.vertex_set()).len() == self.order()
    }

    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        match set.first() {
            None => true,
            Some(v) => self.component_within(v, set) == *set,
        }
    }

    /// If `g[set]` is a star, its center (the least one when ambiguous).
    pub fn star_center(&self, set: &VertexSet) -> Option<usize> {
        match set.len() {
            0 => None,
            1 | 2 => {
                if self.is_connected_set(set) {
                    set.first()
                } else {
                    None
                }
            }
            k => set.iter().find(|&c| {
                let mut leaves = *set;
                leaves.remove(c);
                self.adj[c].intersection(set).len() == k - 1 && self.is_independent(&leaves)
            }),
        }
    }

    pub fn is_star_set(&self, set: &VertexSet) -> bool {
        self.star_center(set).is_some()
    }

    /// If `g[set]` is a path, its vertices listed from the smaller endpoint
    /// to the other.
    pub fn path_order(&self, set: &VertexSet) -> Option<Vec<usize>> {
        let k = set.len();
        if k == 0 {
            return None;
        }
        if k == 1 {
            return Some(set.to_vec());
        }
        if self.edges_within(set) != k - 1 {
            return None;
        }
        let mut start = None;
        for v in set.iter() {
            match self.adj[v].intersection(set).len() {
                0 => return None,
                1 => {
                    if start.is_none() {
                        start = Some(v);
                    }
                }
                2 => {}
                _ => return None,
            }
        }
        let mut order = Vec::with_capacity(k);
        let mut prev = usize::MAX;
        let mut cur = start?;
        loop {
            order.push(cur);
            let next = self.adj[cur].intersection(set).iter().find(|&w| w != prev);
            match next {
                Some(w) if order.len() < k => {
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        (order.len() == k).then_some(order)
    }

    pub fn is_path_set(&self, set: &VertexSet) -> bool {
        self.path_order(set).is_some()
    }

    pub fn is_isometric_path_set(&self, set: &VertexSet) -> bool {
        match self.path_order(set) {
            Some(p) if p.len() <= 3 => true,
            Some(p) => self.distance(p[0], *p.last().unwrap()) == Some(p.len() - 1),
            None => false,
        }
    }

    /// Whether `g[vertices]` is a piece of the given kind.
    pub fn piece_shape(&self, vertices: &VertexSet, kind: PieceKind) -> Result<bool> {
        if vertices.is_empty() {
            return Err(Error::EmptyPiece);
        }
        if let Some(v) = vertices.last().filter(|&v| v >= self.order()) {
            return Err(Error::IndexOutOfRange {
                index: v,
                order: self.order(),
            });
        }
        Ok(self.is_piece(vertices, kind))
    }

    /// [`Graph::piece_shape`] without argument checks.
    pub fn is_piece(&self, vertices: &VertexSet, kind: PieceKind) -> bool {
        match kind {
            PieceKind::Star => self.is_star_set(vertices),
            PieceKind::Path => self.is_path_set(vertices),
            PieceKind::IsometricPath => self.is_isometric_path_set(vertices),
            PieceKind::SPAny => self.is_star_set(vertices) || self.is_path_set(vertices),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("order", &self.order())
            .field("edges", &self.edges())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    order: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            order: self.order(),
            edges: self.edges(),
            label: self.label.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let g = Graph::from_edges(repr.order, &repr.edges).map_err(serde::de::Error::custom)?;
        Ok(match repr.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    Disconnected,
}

/// Distance layers `X_0 = {root}, X_1, .., X_d` of the root's component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsLayering {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
    pub dist: Vec<Option<usize>>,
}

impl BfsLayering {
    /// Index of the last layer, i.e. the root's eccentricity in its component.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer_set(&self, i: usize) -> VertexSet {
        self.layers
            .get(i)
            .map(|l| l.iter().collect())
            .unwrap_or_default()
    }

    /// Shortest root-to-`target` path, choosing the least-index predecessor
    /// at every step. Listed from the root.
    pub fn shortest_path_to(&self, g: &Graph, target: usize) -> Option<Vec<usize>> {
        let mut d = self.dist[target]?;
        let mut path = vec![target];
        let mut cur = target;
        while d > 0 {
            cur = g
                .neighbors(cur)
                .iter()
                .find(|&w| self.dist[w] == Some(d - 1))?;
            path.push(cur);
            d -= 1;
        }
        path.reverse();
        Some(path)
    }
}

/// Piece families: stars, paths, isometric paths, or stars-or-paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceKind {
    Star,
    Path,
    IsometricPath,
    #[serde(rename = "SP")]
    SPAny,
}

impl PieceKind {
    pub const ALL: [PieceKind; 4] = [
        PieceKind::Star,
        PieceKind::Path,
        PieceKind::IsometricPath,
        PieceKind::SPAny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Star => "star",
            PieceKind::Path => "path",
            PieceKind::IsometricPath => "isometric-path",
            PieceKind::SPAny => "sp",
        }
    }
}
