//! Induced subgraph containment, family freeness, the `≤` order on
//! forbidden families and the characterization search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariant::Invariant;

/// An induced embedding: `map[p]` is the host image of pattern vertex `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and two-way adjacency preservation.
    pub fn is_valid(&self, host: &Graph, pattern: &Graph) -> bool {
        let k = pattern.order();
        if self.map.len() != k || self.map.iter().any(|&h| h >= host.order()) {
            return false;
        }
        let image: VertexSet = self.map.iter().collect();
        if image.len() != k {
            return false;
        }
        (0..k).all(|p| {
            (p + 1..k).all(|q| pattern.has_edge(p, q) == host.has_edge(self.map[p], self.map[q]))
        })
    }

    pub fn image(&self) -> VertexSet {
        self.map.iter().collect()
    }
}

/// A finite family of forbidden graphs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ForbiddenFamily {
    pub members: Vec<Graph>,
    pub name: Option<String>,
}

impl ForbiddenFamily {
    pub fn new(members: Vec<Graph>) -> Self {
        ForbiddenFamily {
            members,
            name: None,
        }
    }

    pub fn named(members: Vec<Graph>, name: impl Into<String>) -> Self {
        ForbiddenFamily {
            members,
            name: Some(name.into()),
        }
    }

    pub fn max_order(&self) -> usize {
        self.members.iter().map(Graph::order).max().unwrap_or(0)
    }
}

struct Matcher<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    /// Pattern vertices in search order.
    order: Vec<usize>,
    /// Host vertices by descending degree, ties by index.
    host_order: Vec<usize>,
    /// Host vertices whose degree admits pattern vertex `p`.
    degree_ok: Vec<VertexSet>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph, lexicographic: bool) -> Self {
        let k = pattern.order();
        let order = if lexicographic {
            (0..k).collect()
        } else {
            search_order(pattern)
        };
        let mut host_order: Vec<usize> = (0..host.order()).collect();
        if !lexicographic {
            host_order.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
        }
        let degree_ok = (0..k)
            .map(|p| {
                (0..host.order())
                    .filter(|&h| host.degree(h) >= pattern.degree(p))
                    .collect()
            })
            .collect();
        Matcher {
            host,
            pattern,
            order,
            host_order,
            degree_ok,
        }
    }

    fn candidates(&self, depth: usize, map: &[usize], used: &VertexSet) -> VertexSet {
        let p = self.order[depth];
        let mut cand = self.degree_ok[p].difference(used);
        for &q in &self.order[..depth] {
            let image = self.host.neighbors(map[q]);
            cand = if self.pattern.has_edge(p, q) {
                cand.intersection(image)
            } else {
                cand.difference(image)
            };
            if cand.is_empty() {
                break;
            }
        }
        cand
    }

    fn extend(&self, depth: usize, map: &mut Vec<usize>, used: &mut VertexSet) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let cand = self.candidates(depth, map, used);
        if cand.is_empty() {
            return false;
        }
        let p = self.order[depth];
        for &h in self.host_order.iter().filter(|&&h| cand.contains(h)) {
            map[p] = h;
            used.insert(h);
            if self.extend(depth + 1, map, used) {
                return true;
            }
            used.remove(h);
        }
        false
    }

    fn run_from(&self, first: Option<usize>) -> Option<Embedding> {
        let k = self.order.len();
        let mut map = vec![usize::MAX; k];
        let mut used = VertexSet::new();
        let ok = match first {
            None => self.extend(0, &mut map, &mut used),
            Some(h) => {
                if !self.degree_ok[self.order[0]].contains(h) {
                    return None;
                }
                map[self.order[0]] = h;
                used.insert(h);
                self.extend(1, &mut map, &mut used)
            }
        };
        ok.then_some(Embedding { map })
    }
}

/// Orders pattern vertices so that each one after the first of its component
/// is adjacent to an earlier one, starting from the highest degree.
fn search_order(pattern: &Graph) -> Vec<usize> {
    let k = pattern.order();
    let mut placed = VertexSet::new();
    let mut order = Vec::with_capacity(k);
    while order.len() < k {
        let start = (0..k)
            .filter(|&v| !placed.contains(v))
            .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed.insert(start);
        order.push(start);
        loop {
            // Most constrained next: most already-placed neighbours, then degree.
            let next = (0..k)
                .filter(|&v| !placed.contains(v) && !pattern.neighbors(v).is_disjoint(&placed))
                .max_by_key(|&v| {
                    (
                        pattern.neighbors(v).intersection(&placed).len(),
                        pattern.degree(v),
                        std::cmp::Reverse(v),
                    )
                });
            match next {
                Some(v) => {
                    placed.insert(v);
                    order.push(v);
                }
                None => break,
            }
        }
    }
    order
}

fn quick_reject(host: &Graph, pattern: &Graph) -> bool {
    if pattern.order() > host.order() || pattern.size() > host.size() {
        return true;
    }
    let hd = host.degree_sequence();
    let pd = pattern.degree_sequence();
    pd.iter().zip(&hd).any(|(p, h)| p > h)
}

/// Finds an induced copy of `pattern` in `host`.
///
/// Host candidates are tried by descending degree, so the result is
/// deterministic.
pub fn contains_induced(host: &Graph, pattern: &Graph) -> Option<Embedding> {
    if pattern.order() == 0 {
        return Some(Embedding { map: Vec::new() });
    }
    if quick_reject(host, pattern) {
        return None;
    }
    Matcher::new(host, pattern, false).run_from(None)
}

/// The lexicographically least induced embedding of `pattern` in `host`.
pub fn least_embedding(host: &Graph, pattern: &Graph) -> Option<Embedding> {
    if pattern.order() == 0 {
        return Some(Embedding { map: Vec::new() });
    }
    if quick_reject(host, pattern) {
        return None;
    }
    Matcher::new(host, pattern, true).run_from(None)
}

/// Parallel containment test over the top-level branching. The embedding
/// returned is canonicalized to the lexicographically least one.
pub fn contains_induced_parallel(host: &Graph, pattern: &Graph) -> Option<Embedding> {
    if pattern.order() == 0 || quick_reject(host, pattern) {
        return contains_induced(host, pattern);
    }
    let matcher = Matcher::new(host, pattern, false);
    let found = matcher
        .host_order
        .par_iter()
        .any(|&h| matcher.run_from(Some(h)).is_some());
    if found {
        least_embedding(host, pattern)
    } else {
        None
    }
}

/// Isomorphism test for small graphs.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.size() == b.size()
        && a.degree_sequence() == b.degree_sequence()
        && contains_induced(a, b).is_some()
}

/// True iff `g` contains no induced copy of any member.
pub fn is_family_free(g: &Graph, family: &ForbiddenFamily) -> bool {
    find_forbidden(g, family).is_none()
}

/// The first member (by index) with an induced copy in `g`, with its
/// embedding.
pub fn find_forbidden(g: &Graph, family: &ForbiddenFamily) -> Option<(usize, Embedding)> {
    family
        .members
        .iter()
        .enumerate()
        .find_map(|(i, h)| contains_induced(g, h).map(|e| (i, e)))
}

/// `f1 ≤ f2`: every member of `f2` contains an induced copy of some member
/// of `f1`.
pub fn family_leq(f1: &ForbiddenFamily, f2: &ForbiddenFamily) -> bool {
    f2.members.iter().all(|h2| {
        f1.members
            .iter()
            .any(|h1| contains_induced(h2, h1).is_some())
    })
}

/// Search limit for [`characterize`]: `max(4, p + 2)` where `p` is the
/// largest member order.
pub fn characterize_cutoff(family: &ForbiddenFamily) -> usize {
    (family.max_order() + 2).max(4)
}

/// The least `n` in `4..=cutoff` with `family ≤ target(n)` for the
/// invariant's characterizing family, or `None` if there is none up to the
/// cutoff.
pub fn characterize(family: &ForbiddenFamily, invariant: Invariant) -> Result<Option<usize>> {
    if family.members.is_empty() {
        return Err(Error::BadInput("empty forbidden family".into()));
    }
    if let Some(i) = family.members.iter().position(|h| !h.is_connected()) {
        return Err(Error::DisconnectedMember(i));
    }
    let cutoff = characterize_cutoff(family);
    Ok((4..=cutoff).find(|&n| family_leq(family, &invariant.target(n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, empty, generate, path, star};

    fn named(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn brute_force_contains(host: &Graph, pattern: &Graph) -> bool {
        let n = host.order();
        let k = pattern.order();
        fn rec(host: &Graph, pattern: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let p = map.len();
            if p == pattern.order() {
                return true;
            }
            for h in 0..host.order() {
                if used[h] {
                    continue;
                }
                if (0..p).all(|q| pattern.has_edge(p, q) == host.has_edge(h, map[q])) {
                    used[h] = true;
                    map.push(h);
                    if rec(host, pattern, map, used) {
                        return true;
                    }
                    map.pop();
                    used[h] = false;
                }
            }
            false
        }
        k <= n && rec(host, pattern, &mut Vec::new(), &mut vec![false; n])
    }

    #[test]
    fn containment_examples() {
        let e = contains_induced(&cycle(4), &path(3)).unwrap();
        assert!(e.is_valid(&cycle(4), &path(3)));
        assert!(contains_induced(&complete(4), &star(3)).is_none());
        for n in 2..=5 {
            let f3 = named(&format!("f3:{n}"));
            let f4 = named(&format!("f4:{n}"));
            let e = contains_induced(&f3, &f4).unwrap();
            assert!(e.is_valid(&f3, &f4));
        }
    }

    #[test]
    fn freeness_examples() {
        let fam = |v: Vec<Graph>| ForbiddenFamily::new(v);
        assert!(is_family_free(&cycle(5), &fam(vec![complete(3)])));
        assert!(!is_family_free(&complete(5), &fam(vec![complete(4)])));
        let target = Invariant::Inspc.target(4);
        assert!(is_family_free(&path(9), &target));
    }

    #[test]
    fn leq_examples() {
        let fam = |v: Vec<Graph>| ForbiddenFamily::new(v);
        assert!(family_leq(
            &fam(vec![complete(2)]),
            &fam(vec![complete(4), named("sstar:4")])
        ));
        assert!(!family_leq(&fam(vec![path(4)]), &fam(vec![complete(5)])));
        let t = Invariant::Inspp.target(4);
        assert!(family_leq(&t, &t));
    }

    #[test]
    fn characterize_examples() {
        let t4 = Invariant::Inspc.target(4);
        assert_eq!(characterize(&t4, Invariant::Inspc).unwrap(), Some(4));
        let k2 = ForbiddenFamily::new(vec![complete(2)]);
        assert_eq!(characterize(&k2, Invariant::Inspc).unwrap(), Some(4));
        let p4 = ForbiddenFamily::new(vec![path(4)]);
        assert_eq!(characterize(&p4, Invariant::Inspc).unwrap(), None);
        let bad = ForbiddenFamily::new(vec![path(3), empty(2)]);
        assert!(matches!(
            characterize(&bad, Invariant::Inspc),
            Err(Error::DisconnectedMember(1))
        ));
    }

    #[test]
    fn self_complementary_c5() {
        assert!(isomorphic(
            &crate::generators::complement(&cycle(5)),
            &cycle(5)
        ));
        assert!(!isomorphic(
            &cycle(6),
            &crate::generators::complement(&cycle(6))
        ));
    }

    #[test]
    fn parallel_returns_least_embedding() {
        let host = named("f3:4");
        let pat = named("f4:4");
        let par = contains_induced_parallel(&host, &pat).unwrap();
        assert_eq!(Some(par.clone()), least_embedding(&host, &pat));
        assert!(par.is_valid(&host, &pat));
        assert!(contains_induced_parallel(&complete(4), &star(3)).is_none());
    }

    fn graph_from_bits(n: usize, bits: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3000 {
            let n = rng.gen_range(1..=8);
            let k = rng.gen_range(1..=n.min(5));
            let host = graph_from_bits(n, rng.gen());
            let pattern = graph_from_bits(k, rng.gen());
            let expected = brute_force_contains(&host, &pattern);
            let got = contains_induced(&host, &pattern);
            assert_eq!(got.is_some(), expected, "{host:?} {pattern:?}");
            if let Some(e) = got {
                assert!(e.is_valid(&host, &pattern));
            }
        }
    }

    #[test]
    fn leq_reflexive_and_transitive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let random_family = |rng: &mut rand_chacha::ChaCha8Rng| {
            let count = rng.gen_range(1..=3);
            ForbiddenFamily::new(
                (0..count)
                    .map(|_| {
                        let n = rng.gen_range(2..=5);
                        graph_from_bits(n, rng.gen())
                    })
                    .collect(),
            )
        };
        for _ in 0..300 {
            let a = random_family(&mut rng);
            let b = random_family(&mut rng);
            let c = random_family(&mut rng);
            assert!(family_leq(&a, &a));
            if family_leq(&a, &b) && family_leq(&b, &c) {
                assert!(family_leq(&a, &c));
            }
        }
    }

    #[test]
    fn leq_transfers_freeness() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let small = [path(3), complete(3), star(3), path(4), cycle(4)];
        for _ in 0..200 {
            let g = graph_from_bits(rng.gen_range(3..=9), rng.gen());
            for a in &small {
                for b in &small {
                    let f1 = ForbiddenFamily::new(vec![a.clone()]);
                    let f2 = ForbiddenFamily::new(vec![b.clone()]);
                    if family_leq(&f1, &f2) && is_family_free(&g, &f1) {
                        assert!(is_family_free(&g, &f2));
                    }
                }
            }
        }
    }
}
