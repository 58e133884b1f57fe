#![allow(dead_code)]

use coverlab::Graph;
use proptest::prelude::*;

/// Graph on `n` vertices from the upper-triangle bits of `bits`.
pub fn from_bits(n: usize, bits: &[bool]) -> Graph {
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
}

pub fn graph(orders: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    orders.prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2)
            .prop_map(move |b| from_bits(n, &b))
    })
}

pub fn connected_graph(orders: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    graph(orders).prop_filter("connected", |g| g.is_connected())
}

/// `g` with vertex `v` renamed `perm[v]`.
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (perm[u], perm[v]))
        .collect();
    Graph::from_edges(g.order(), &edges).unwrap()
}

/// Connected graphs with edges only between vertices at index distance at
/// most 2. Such graphs are `K_4`-free and path-like.
pub fn banded_graph(orders: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    orders
        .prop_flat_map(|n| {
            proptest::collection::vec(0u8..4, 2 * n).prop_map(move |b| banded_from(n, &b))
        })
        .prop_filter("connected", |g| g.is_connected())
}

pub fn banded_from(n: usize, choice: &[u8]) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        let c = choice[i % choice.len()];
        if i + 1 < n && c != 0 {
            edges.push((i, i + 1));
        }
        if i + 2 < n && c >= 2 {
            edges.push((i, i + 2));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}
