//! Piece enumeration for the cover and partition searches.

use std::cell::Cell;
use std::collections::HashSet;
use std::time::Instant;

use crate::bitset::VertexSet;
use crate::graph::{Graph, PieceKind};

/// Cooperative deadline for the enumerations. Once expired, every
/// enumerator unwinds early and its caller discards the partial output.
pub(crate) struct Budget {
    deadline: Option<Instant>,
    ticks: Cell<u32>,
    expired: Cell<bool>,
}

impl Budget {
    pub(crate) fn unlimited() -> Self {
        Budget {
            deadline: None,
            ticks: Cell::new(0),
            expired: Cell::new(false),
        }
    }

    pub(crate) fn until(deadline: Instant) -> Self {
        Budget {
            deadline: Some(deadline),
            ..Budget::unlimited()
        }
    }

    /// Counts one step; true once the deadline has passed.
    pub(crate) fn tick(&self) -> bool {
        if self.expired.get() {
            return true;
        }
        let t = self.ticks.get().wrapping_add(1);
        self.ticks.set(t);
        if t.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.expired.set(true);
        }
        self.expired.get()
    }

    pub(crate) fn expired(&self) -> bool {
        self.expired.get()
    }
}

/// All-pairs distances, `usize::MAX` for unreachable pairs.
pub(crate) fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.order())
        .map(|v| {
            g.distances_from(v)
                .into_iter()
                .map(|d| d.unwrap_or(usize::MAX))
                .collect()
        })
        .collect()
}

/// Maximal independent subsets of `set` (Bron–Kerbosch on the complement).
pub fn maximal_independent_sets(g: &Graph, set: &VertexSet) -> Vec<VertexSet> {
    mis_within(g, set, &Budget::unlimited())
}

fn mis_within(g: &Graph, set: &VertexSet, budget: &Budget) -> Vec<VertexSet> {
    fn rec(
        g: &Graph,
        r: VertexSet,
        p: VertexSet,
        x: VertexSet,
        out: &mut Vec<VertexSet>,
        budget: &Budget,
    ) {
        if budget.tick() {
            return;
        }
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        // Pivot: the vertex of p ∪ x with most non-neighbours in p.
        let pu = p.union(&x);
        let pivot = pu
            .iter()
            .max_by_key(|&u| p.difference(g.neighbors(u)).len())
            .unwrap();
        let mut branch = p.intersection(g.neighbors(pivot));
        if p.contains(pivot) {
            branch.insert(pivot);
        }
        let (mut p, mut x) = (p, x);
        for v in branch.iter() {
            let mut r2 = r;
            r2.insert(v);
            let nv = g.neighbors(v);
            let mut p2 = p.difference(nv);
            p2.remove(v);
            let mut x2 = x.difference(nv);
            x2.remove(v);
            rec(g, r2, p2, x2, out, budget);
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    if set.is_empty() {
        return out;
    }
    rec(
        g,
        VertexSet::new(),
        *set,
        VertexSet::new(),
        &mut out,
        budget,
    );
    out.sort();
    out
}

/// Removes duplicates and sets strictly contained in another set.
fn keep_inclusion_maximal(mut sets: Vec<VertexSet>, budget: &Budget) -> Vec<VertexSet> {
    sets.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
    sets.dedup();
    let mut kept: Vec<VertexSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if budget.tick() {
            break;
        }
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept
}

/// Calls `f` once for every induced path of `g[within]`, listed so that the
/// first vertex is at most the last. `isometric` restricts to paths that are
/// shortest paths of `g`.
fn for_each_induced_path(
    g: &Graph,
    within: &VertexSet,
    dist: Option<&[Vec<usize>]>,
    budget: &Budget,
    f: &mut dyn FnMut(&[usize]),
) {
    fn grow(
        g: &Graph,
        within: &VertexSet,
        dist: Option<&[Vec<usize>]>,
        path: &mut Vec<usize>,
        blocked: VertexSet,
        budget: &Budget,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if budget.tick() {
            return;
        }
        let first = path[0];
        let last = *path.last().unwrap();
        if path.len() == 1 || first < last {
            f(path);
        }
        let cand = g.neighbors(last).intersection(within).difference(&blocked);
        for w in cand.iter() {
            if let Some(d) = dist {
                if d[first][w] != path.len() {
                    continue;
                }
            }
            // w must see no path vertex besides `last`.
            let mut nb = blocked.union(g.neighbors(last));
            nb.insert(w);
            path.push(w);
            grow(g, within, dist, path, nb, budget, f);
            path.pop();
        }
    }
    for s in within.iter() {
        let mut path = vec![s];
        grow(
            g,
            within,
            dist,
            &mut path,
            VertexSet::singleton(s),
            budget,
            f,
        );
    }
}

/// Induced (or isometric) paths of `g[within]` through `v`, each once.
fn paths_through(
    g: &Graph,
    within: &VertexSet,
    v: usize,
    dist: Option<&[Vec<usize>]>,
    budget: &Budget,
) -> Vec<Vec<usize>> {
    // Arms: induced paths of g[within] starting at v.
    fn arms(
        g: &Graph,
        allowed: &VertexSet,
        dist: Option<&[Vec<usize>]>,
        arm: &mut Vec<usize>,
        blocked: VertexSet,
        out: &mut Vec<Vec<usize>>,
        budget: &Budget,
    ) {
        if budget.tick() {
            return;
        }
        out.push(arm.clone());
        let last = *arm.last().unwrap();
        let cand = g.neighbors(last).intersection(allowed).difference(&blocked);
        for w in cand.iter() {
            if let Some(d) = dist {
                if d[arm[0]][w] != arm.len() {
                    continue;
                }
            }
            let mut nb = blocked.union(g.neighbors(last));
            nb.insert(w);
            arm.push(w);
            arms(g, allowed, dist, arm, nb, out, budget);
            arm.pop();
        }
    }
    let mut left = Vec::new();
    arms(
        g,
        within,
        dist,
        &mut vec![v],
        VertexSet::singleton(v),
        &mut left,
        budget,
    );
    let mut out = Vec::new();
    for a in &left {
        if budget.expired() {
            break;
        }
        // The right arm avoids the left arm and its neighbourhood, except v.
        let tail: VertexSet = a[1..].iter().collect();
        let mut tail_nb = VertexSet::new();
        for &u in &a[1..] {
            tail_nb = tail_nb.union(g.neighbors(u));
        }
        let mut allowed = within.difference(&tail).difference(&tail_nb);
        allowed.insert(v);
        let mut right = Vec::new();
        arms(
            g,
            &allowed,
            dist,
            &mut vec![v],
            VertexSet::singleton(v),
            &mut right,
            budget,
        );
        for b in right {
            // With v interior, the right arm starts above the left one.
            if a.len() > 1 && (b.len() == 1 || b[1] < a[1]) {
                continue;
            }
            let mut p: Vec<usize> = a.iter().rev().copied().collect();
            p.extend_from_slice(&b[1..]);
            if let Some(d) = dist {
                if d[p[0]][*p.last().unwrap()] != p.len() - 1 {
                    continue;
                }
            }
            out.push(p);
        }
    }
    out
}

/// Induced stars of `g[within]` containing `v`.
fn stars_through(g: &Graph, within: &VertexSet, v: usize, budget: &Budget) -> Vec<VertexSet> {
    let mut out = Vec::new();
    // v as centre: v plus any independent subset of its neighbourhood.
    let nv = g.neighbors(v).intersection(within);
    for_each_independent_subset(g, &nv, budget, &mut |leaves| {
        let mut s = leaves;
        s.insert(v);
        out.push(s);
    });
    // v as a leaf of centre c, with at least one other leaf.
    for c in nv.iter() {
        let others = g
            .neighbors(c)
            .intersection(within)
            .difference(g.neighbors(v));
        let mut others = others;
        others.remove(v);
        for_each_independent_subset(g, &others, budget, &mut |leaves| {
            if !leaves.is_empty() {
                let mut s = leaves;
                s.insert(v);
                s.insert(c);
                out.push(s);
            }
        });
    }
    out
}

/// Calls `f` with every independent subset of `set`, including the empty one.
fn for_each_independent_subset(
    g: &Graph,
    set: &VertexSet,
    budget: &Budget,
    f: &mut dyn FnMut(VertexSet),
) {
    fn rec(
        g: &Graph,
        chosen: VertexSet,
        rest: VertexSet,
        budget: &Budget,
        f: &mut dyn FnMut(VertexSet),
    ) {
        if budget.tick() {
            return;
        }
        match rest.first() {
            None => f(chosen),
            Some(u) => {
                let mut without = rest;
                without.remove(u);
                rec(g, chosen, without, budget, f);
                let mut with = chosen;
                with.insert(u);
                rec(g, with, without.difference(g.neighbors(u)), budget, f);
            }
        }
    }
    rec(g, VertexSet::new(), *set, budget, f);
}

/// All pieces of the given kind inside `within` that contain `v`, largest
/// first, ties broken by set order.
pub fn pieces_containing(
    g: &Graph,
    kind: PieceKind,
    within: &VertexSet,
    v: usize,
    dist: Option<&[Vec<usize>]>,
) -> Vec<VertexSet> {
    pieces_containing_within(g, kind, within, v, dist, &Budget::unlimited())
}

/// [`pieces_containing`] under a budget; the output is partial once the
/// budget has expired.
pub(crate) fn pieces_containing_within(
    g: &Graph,
    kind: PieceKind,
    within: &VertexSet,
    v: usize,
    dist: Option<&[Vec<usize>]>,
    budget: &Budget,
) -> Vec<VertexSet> {
    let mut set = HashSet::new();
    if matches!(kind, PieceKind::Star | PieceKind::SPAny) {
        set.extend(stars_through(g, within, v, budget));
    }
    match kind {
        PieceKind::Path | PieceKind::SPAny => {
            set.extend(
                paths_through(g, within, v, None, budget)
                    .iter()
                    .map(|p| p.iter().collect::<VertexSet>()),
            );
        }
        PieceKind::IsometricPath => {
            let owned;
            let d = match dist {
                Some(d) => d,
                None => {
                    owned = distance_matrix(g);
                    &owned
                }
            };
            set.extend(
                paths_through(g, within, v, Some(d), budget)
                    .iter()
                    .map(|p| p.iter().collect::<VertexSet>()),
            );
        }
        PieceKind::Star => {}
    }
    let mut out: Vec<VertexSet> = set.into_iter().collect();
    out.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
    out
}

fn maximal_stars(g: &Graph, within: &VertexSet, budget: &Budget) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for c in within.iter() {
        let nc = g.neighbors(c).intersection(within);
        if nc.is_empty() {
            out.push(VertexSet::singleton(c));
            continue;
        }
        for mut s in mis_within(g, &nc, budget) {
            s.insert(c);
            out.push(s);
        }
    }
    out
}

fn maximal_paths(
    g: &Graph,
    within: &VertexSet,
    dist: Option<&[Vec<usize>]>,
    budget: &Budget,
) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for_each_induced_path(g, within, dist, budget, &mut |p| {
        out.push(p.iter().collect::<VertexSet>());
    });
    out
}

/// The inclusion-maximal pieces of the given kind inside `within`, sorted by
/// size descending then by set order.
pub fn enumerate_maximal_pieces(g: &Graph, kind: PieceKind, within: &VertexSet) -> Vec<VertexSet> {
    maximal_pieces_within(g, kind, within, &Budget::unlimited()).expect("unlimited budget")
}

/// [`enumerate_maximal_pieces`] under a budget; `None` once it expires.
pub(crate) fn maximal_pieces_within(
    g: &Graph,
    kind: PieceKind,
    within: &VertexSet,
    budget: &Budget,
) -> Option<Vec<VertexSet>> {
    let all = match kind {
        PieceKind::Star => maximal_stars(g, within, budget),
        PieceKind::Path => maximal_paths(g, within, None, budget),
        PieceKind::IsometricPath => {
            let d = distance_matrix(g);
            maximal_paths(g, within, Some(&d), budget)
        }
        PieceKind::SPAny => {
            let mut v = maximal_stars(g, within, budget);
            v.extend(maximal_paths(g, within, None, budget));
            v
        }
    };
    let kept = keep_inclusion_maximal(all, budget);
    (!budget.expired()).then_some(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, empty, generate, path};
    use crate::naive;
    use proptest::prelude::*;

    #[test]
    fn maximal_examples() {
        let k3 = complete(3);
        assert_eq!(
            enumerate_maximal_pieces(&k3, PieceKind::Star, &k3.vertex_set()).len(),
            3
        );
        let e3 = empty(3);
        let p = enumerate_maximal_pieces(&e3, PieceKind::Path, &e3.vertex_set());
        assert_eq!(
            p,
            vec![
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::singleton(2)
            ]
        );
        let c5 = cycle(5);
        let p = enumerate_maximal_pieces(&c5, PieceKind::Path, &c5.vertex_set());
        assert_eq!(p.len(), 5);
        assert!(p.iter().all(|s| s.len() == 4));
        // In C_5 the isometric paths have at most 3 vertices.
        let p = enumerate_maximal_pieces(&c5, PieceKind::IsometricPath, &c5.vertex_set());
        assert_eq!(p.len(), 5);
        assert!(p.iter().all(|s| s.len() == 3));
        let p9 = path(9);
        assert_eq!(
            enumerate_maximal_pieces(&p9, PieceKind::SPAny, &p9.vertex_set()),
            vec![p9.vertex_set()]
        );
        let s = generate(&"sstar:3".parse().unwrap()).unwrap();
        let m = enumerate_maximal_pieces(&s, PieceKind::Star, &s.vertex_set());
        assert!(m.contains(&[0, 1, 2, 3].iter().collect()));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn pieces_match_brute_force(g in arb_graph(7), within_bits in any::<u8>(), kind_ix in 0usize..4) {
            let kind = PieceKind::ALL[kind_ix];
            let n = g.order();
            let within: VertexSet = (0..n).filter(|v| within_bits >> v & 1 == 1).collect();
            let all = naive::all_pieces(&g, kind);
            let inside: Vec<VertexSet> = all.iter().filter(|s| s.is_subset(&within)).copied().collect();
            for v in within.iter() {
                let mut expect: Vec<VertexSet> = inside.iter().filter(|s| s.contains(v)).copied().collect();
                expect.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
                prop_assert_eq!(pieces_containing(&g, kind, &within, v, None), expect);
            }
            let mut expect_max: Vec<VertexSet> = inside
                .iter()
                .filter(|s| !inside.iter().any(|t| t != *s && s.is_subset(t)))
                .copied()
                .collect();
            expect_max.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
            prop_assert_eq!(enumerate_maximal_pieces(&g, kind, &within), expect_max);
        }
    }
}
