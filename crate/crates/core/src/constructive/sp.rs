//! Layered SP-cover and SP-partition from a BFS root `x_0`.
//!
//! Short eccentricity delegates to the bounded star constructions. Otherwise
//! shortest paths `Q_1, .., Q_{h0}` are chosen greedily from the deepest
//! layers, the layer indices are split into blocks `I'_h` (covered by stars
//! on a forest decomposition) and runs `J'_h` (covered by paths woven
//! through the slices `X^(l)_i`), and the structural invariants are asserted along
//! the way.

use serde_json::{json, Value};

use super::star::{star_cover_core, star_partition_core, BlockRun};
use super::{
    broken, exact_u64, family, require_free, require_n, sets_json, ClaimedBound, ConstructOptions,
    ConstructionTrace, Sub, TraceStage,
};
use crate::bitset::VertexSet;
use crate::bounds::{c1, c2, cover_constants, nu_value};
use crate::error::{Error, Result};
use crate::graph::{Graph, PieceKind};
use crate::invariant::{Invariant, Mode};
use crate::solvers::PieceCertificate;

/// Induced SP-cover of a connected `{K_n, S*_n, F1_n, F2_n, F3_n}`-free
/// graph, rooted at vertex 0.
pub fn sp_cover_construct(g: &Graph, n: usize) -> Result<ConstructionTrace> {
    sp_cover_construct_with(g, n, &ConstructOptions::default())
}

pub fn sp_cover_construct_with(
    g: &Graph,
    n: usize,
    opts: &ConstructOptions,
) -> Result<ConstructionTrace> {
    construct(g, n, opts, Mode::Cover)
}

/// Induced SP-partition of a connected
/// `{K_n, S*_n, S̃_n, F1_n, F2_n, F4_n, F5_n}`-free graph, rooted at vertex 0.
pub fn sp_partition_construct(g: &Graph, n: usize) -> Result<ConstructionTrace> {
    sp_partition_construct_with(g, n, &ConstructOptions::default())
}

pub fn sp_partition_construct_with(
    g: &Graph,
    n: usize,
    opts: &ConstructOptions,
) -> Result<ConstructionTrace> {
    construct(g, n, opts, Mode::Partition)
}

type Range = Option<(usize, usize)>;

fn range(lo: usize, hi: usize) -> Range {
    (lo <= hi).then_some((lo, hi))
}

fn indices(r: Range) -> std::ops::RangeInclusive<usize> {
    match r {
        Some((lo, hi)) => lo..=hi,
        #[allow(clippy::reversed_empty_ranges)]
        None => 1..=0,
    }
}

fn range_json(r: Range) -> Value {
    r.map_or(Value::Null, |(lo, hi)| json!([lo, hi]))
}

fn block_core(g: &Graph, within: &VertexSet, n: usize, mode: Mode) -> Result<BlockRun> {
    match mode {
        Mode::Cover => star_cover_core(g, within, n),
        Mode::Partition => star_partition_core(g, within, n),
    }
}

fn union_of(layers: &[VertexSet], r: std::ops::RangeInclusive<usize>) -> VertexSet {
    r.fold(VertexSet::new(), |acc, i| acc.union(&layers[i]))
}

fn ecc_within(g: &Graph, within: &VertexSet, root: usize) -> Option<usize> {
    let sub = Sub::new(g, within);
    let local = sub.verts.binary_search(&root).ok()?;
    sub.graph.eccentricity(local)
}

fn construct(
    g: &Graph,
    n: usize,
    opts: &ConstructOptions,
    mode: Mode,
) -> Result<ConstructionTrace> {
    require_n(n, 4)?;
    if g.order() == 0 {
        return Err(Error::BadInput("empty graph".into()));
    }
    let x0 = opts.root;
    if x0 >= g.order() {
        return Err(Error::IndexOutOfRange {
            index: x0,
            order: g.order(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (inv, algorithm) = match mode {
        Mode::Cover => (Invariant::Inspc, "sp_cover_construct"),
        Mode::Partition => (Invariant::Inspp, "sp_partition_construct"),
    };
    require_free(g, &family(inv.target_families(), n))?;
    let constants = cover_constants(n, opts.c_chi)?;
    let claimed = match mode {
        Mode::Cover => ClaimedBound::AffineInChi(constants.c_inspc.clone()),
        Mode::Partition => ClaimedBound::Value(constants.c_inspp.clone()),
    };

    let lay = g.bfs_layering(x0)?;
    let d = lay.depth();
    let layers: Vec<VertexSet> = (0..=d).map(|i| lay.layer_set(i)).collect();
    let threshold = n * n + 2 * n;
    let mut stages = vec![TraceStage::new(
        "layering",
        json!({"root": x0, "depth": d, "layer_sizes": layers.iter().map(VertexSet::len).collect::<Vec<_>>()}),
    )];

    let pieces = if d < threshold {
        stages.push(TraceStage::new(
            "branch",
            json!({"long": false, "depth": d, "threshold": threshold}),
        ));
        let run = block_core(g, &g.vertex_set(), n, mode)?;
        stages.push(TraceStage::new("block", run.log));
        run.pieces
    } else {
        stages.push(TraceStage::new(
            "branch",
            json!({"long": true, "depth": d, "threshold": threshold}),
        ));
        long_branch(g, n, opts, mode, &lay, &layers, &mut stages)?
    };

    let cert = PieceCertificate::new(g, mode, PieceKind::SPAny, pieces);
    for (p, &label) in cert.pieces.iter().zip(&cert.labels) {
        if label == PieceKind::Path && !g.is_isometric_path_set(p) {
            return Err(broken(format!(
                "path piece {:?} is not isometric",
                p.to_vec()
            )));
        }
    }
    ConstructionTrace::finish(g, algorithm, n, stages, cert, claimed, opts.c_chi)
}

fn long_branch(
    g: &Graph,
    n: usize,
    opts: &ConstructOptions,
    mode: Mode,
    lay: &crate::graph::BfsLayering,
    layers: &[VertexSet],
    stages: &mut Vec<TraceStage>,
) -> Result<Vec<VertexSet>> {
    let d = lay.depth();
    let x0 = lay.root;
    let nu = exact_u64(&nu_value(n));
    let shortest = |w: usize| {
        lay.shortest_path_to(g, w)
            .ok_or_else(|| broken("unreachable vertex"))
    };

    // Q_h selection; q[h][i] is the vertex of Q_{h+1} in layer i.
    let mut ks = vec![d];
    let w1 = layers[d]
        .first()
        .ok_or_else(|| broken("empty last layer"))?;
    let mut qs: Vec<Vec<usize>> = vec![shortest(w1)?];
    let mut selection = vec![json!({"h": 1, "k": d, "w": w1, "path": qs[0]})];
    loop {
        let kprev = *ks.last().unwrap();
        if kprev < 3 * n + 2 {
            break;
        }
        let on: VertexSet = qs.iter().flatten().collect();
        let near = on.iter().fold(on, |acc, v| acc.union(g.neighbors(v)));
        let found = (2 * n + 1..=kprev - n - 1)
            .rev()
            .find_map(|i| layers[i].difference(&near).first().map(|w| (i, w)));
        let Some((k, w)) = found else { break };
        ks.push(k);
        qs.push(shortest(w)?);
        selection.push(json!({"h": qs.len(), "k": k, "w": w, "path": qs.last().unwrap()}));
    }
    let h0 = qs.len();
    ks.push(2 * n);
    // ks[h-1] = k_h for 1 <= h <= h0+1
    let k = |h: usize| ks[h - 1];
    stages.push(TraceStage::new(
        "paths",
        json!({"h0": h0, "selection": selection, "K": ks}),
    ));

    let mut claims = Vec::new();
    // A layer-i vertex touching Q sees Q's vertices in the adjacent
    // layers, for n+1 <= i <= k-n-1.
    for (h, q) in qs.iter().enumerate() {
        let on: VertexSet = q.iter().collect();
        let kq = q.len() - 1;
        for i in n + 1..=kq.saturating_sub(n + 1) {
            for y in layers[i].iter() {
                if g.neighbors(y).is_disjoint(&on) {
                    continue;
                }
                if !(g.has_edge(y, q[i - 1]) && g.has_edge(y, q[i + 1])) {
                    return Err(broken(format!("vertex {y} of layer {i} touches Q_{} but misses a neighbouring path vertex", h + 1)));
                }
            }
        }
    }
    claims.push("touching vertices see adjacent path vertices");
    for a in 0..h0 {
        for b in a + 1..h0 {
            let va: VertexSet = qs[a][1..].iter().collect();
            let vb: VertexSet = qs[b][1..].iter().collect();
            let cross = va.iter().any(|v| !g.neighbors(v).is_disjoint(&vb));
            if !va.is_disjoint(&vb) || cross {
                return Err(broken(format!(
                    "Q_{} and Q_{} meet or are joined off the root",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    claims.push("paths meet only at the root");
    if h0 > n - 1 {
        return Err(broken(format!("h0 = {h0} exceeds n-1")));
    }
    claims.push("h0 <= n-1");

    // Index sets. m[h-1] = m_h.
    let m: Vec<usize> = (1..=h0)
        .map(|h| {
            if h < h0 {
                k(h) - n
            } else {
                (2 * n + 1).max(k(h0) - n)
            }
        })
        .collect();
    let i_sets: Vec<Range> = (1..=h0)
        .map(|h| range(m[h - 1], k(h)))
        .chain([range(0, 2 * n)])
        .collect();
    let j_sets: Vec<Range> = (1..=h0)
        .map(|h| range(k(h + 1) + 1, m[h - 1] - 1))
        .collect();
    let mut count = vec![0usize; d + 1];
    for r in i_sets.iter().chain(&j_sets) {
        for i in indices(*r) {
            count[i] += 1;
        }
    }
    if count.iter().any(|&c| c != 1) {
        return Err(broken("I_h and J_h do not partition the layer indices"));
    }
    claims.push("I_h and J_h partition 0..=d");
    let i_len = |r: &Range| indices(*r).count();
    if i_sets[..h0].iter().any(|r| i_len(r) > n + 1)
        || i_sets.iter().map(i_len).sum::<usize>() > n * n + 2 * n
    {
        return Err(broken("index blocks I_h too long"));
    }
    claims.push("|I_h| <= n+1 and sum <= n^2+2n");

    // Slices X^(l)_i for i in J_h, l <= h. slices[h-1][i - lo][l-1].
    let q_sets: Vec<VertexSet> = qs.iter().map(|q| q.iter().collect()).collect();
    let mut slices: Vec<Vec<Vec<VertexSet>>> = Vec::new();
    let mut slice_log = Vec::new();
    for h in 1..=h0 {
        let mut per_layer = Vec::new();
        for i in indices(j_sets[h - 1]) {
            let xs: Vec<VertexSet> = (0..h)
                .map(|l| {
                    layers[i]
                        .iter()
                        .filter(|&y| !g.neighbors(y).is_disjoint(&q_sets[l]))
                        .collect()
                })
                .collect();
            let union = xs.iter().fold(VertexSet::new(), |acc, s| acc.union(s));
            if union != layers[i] {
                return Err(broken(format!(
                    "a vertex of layer {i} has no neighbour on Q_1..Q_{h}"
                )));
            }
            if xs.iter().map(VertexSet::len).sum::<usize>() != layers[i].len() {
                return Err(broken(format!("slices of layer {i} overlap")));
            }
            if let Some(nu) = nu {
                if xs.iter().any(|s| s.len() as u64 > nu) || layers[i].len() as u64 > h as u64 * nu
                {
                    return Err(broken(format!("slices of layer {i} exceed ν")));
                }
            }
            if mode == Mode::Partition {
                let on = q_sets[..h]
                    .iter()
                    .fold(VertexSet::new(), |acc, s| acc.union(s));
                if !layers[i].is_subset(&on) {
                    return Err(broken(format!(
                        "layer {i} is not inside the paths Q_1..Q_{h}"
                    )));
                }
            }
            slice_log.push(json!({"h": h, "i": i, "slices": sets_json(&xs)}));
            per_layer.push(xs);
        }
        for w in per_layer.windows(2) {
            for l in 0..h {
                for a in w[0][l].iter() {
                    if !w[1][l].is_subset(g.neighbors(a)) {
                        return Err(broken(format!(
                            "slice {} is not complete to the next layer at {a}",
                            l + 1
                        )));
                    }
                }
            }
        }
        slices.push(per_layer);
    }
    claims.push("J_h layers are dominated by earlier paths");
    claims.push("slices partition each J_h layer");
    claims.push("consecutive slices are complete");
    claims.push("|X^(l)_i| <= nu and |X_i| <= h nu");
    if mode == Mode::Partition {
        claims.push("J_h layers lie on the paths");
    }

    let big_l: Vec<usize> = (1..=h0).filter(|&h| j_sets[h - 1].is_some()).collect();
    if big_l.is_empty() {
        return Err(broken("every J_h is empty despite the long eccentricity"));
    }
    let r = big_l.len();
    let p = |t: usize| if t == 0 { 0 } else { big_l[t - 1] };
    let i_prime: Vec<Range> = (1..=r)
        .map(|t| range(m[p(t) - 1] - 1, k(p(t - 1) + 1)))
        .chain([range(0, k(p(r) + 1))])
        .collect();
    let j_prime: Vec<Range> = (1..=r)
        .map(|t| range(k(p(t) + 1) + 1, m[p(t) - 1] - 2))
        .collect();
    let mut count = vec![0usize; d + 1];
    for rg in i_prime.iter().chain(&j_prime) {
        for i in indices(*rg) {
            count[i] += 1;
        }
    }
    if count.iter().any(|&c| c != 1) {
        return Err(broken("I'_h and J'_h do not partition the layer indices"));
    }
    claims.push("I'_h and J'_h partition 0..=d");
    stages.push(TraceStage::new(
        "index_sets",
        json!({
            "m": m,
            "I": i_sets.iter().map(|r| range_json(*r)).collect::<Vec<_>>(),
            "J": j_sets.iter().map(|r| range_json(*r)).collect::<Vec<_>>(),
            "L": big_l,
            "I_prime": i_prime.iter().map(|r| range_json(*r)).collect::<Vec<_>>(),
            "J_prime": j_prime.iter().map(|r| range_json(*r)).collect::<Vec<_>>(),
        }),
    ));
    stages.push(TraceStage::new("slices", Value::Array(slice_log)));

    let mut pieces = Vec::new();
    // Paths through the J'_{p_t} runs.
    let mut path_log = Vec::new();
    for (t, jp) in j_prime.iter().enumerate() {
        let h = p(t + 1);
        let Some((lo, hi)) = *jp else { continue };
        let j_lo = j_sets[h - 1].unwrap().0;
        let mut run_paths = Vec::new();
        for l in 0..h {
            match mode {
                Mode::Cover => {
                    let cols: Vec<Vec<usize>> = (lo..=hi)
                        .map(|i| slices[h - 1][i - j_lo][l].to_vec())
                        .collect();
                    let width = cols.iter().map(Vec::len).max().unwrap_or(0);
                    for j in 0..width {
                        run_paths.push(
                            cols.iter()
                                .map(|c| c[j.min(c.len() - 1)])
                                .collect::<VertexSet>(),
                        );
                    }
                }
                Mode::Partition => {
                    run_paths.push((lo..=hi).map(|i| qs[l][i]).collect::<VertexSet>())
                }
            }
        }
        if let Some(nu) = nu {
            if run_paths.len() as u64 > h as u64 * nu {
                return Err(broken(format!(
                    "{} paths on J'_{h} exceed h ν",
                    run_paths.len()
                )));
            }
        }
        if mode == Mode::Partition
            && run_paths.iter().map(VertexSet::len).sum::<usize>()
                != union_of(layers, lo..=hi).len()
        {
            return Err(broken(format!(
                "path segments on J'_{h} do not partition the layers"
            )));
        }
        path_log.push(json!({"h": h, "layers": [lo, hi], "paths": sets_json(&run_paths)}));
        pieces.extend(run_paths);
    }
    stages.push(TraceStage::new("path_pieces", Value::Array(path_log)));

    // Stars on the I'_h blocks.
    let short_l0 = n * n - 1;
    let long_l0 = n * n + 2 * n - 1;
    let block_limit = |l0: usize| match mode {
        Mode::Cover => c1(n, l0).evaluate(opts.c_chi).as_ref().and_then(exact_u64),
        Mode::Partition => exact_u64(&c2(n, l0)),
    };
    let (short_limit, long_limit) = (block_limit(short_l0), block_limit(long_l0));
    let mut block_log = Vec::new();
    for (t, ip) in i_prime.iter().enumerate().take(r) {
        let (lo, hi) = ip.ok_or_else(|| broken("empty I' block"))?;
        let mut root = vec![usize::MAX; g.order()];
        for u in layers[lo].iter() {
            root[u] = u;
        }
        let mut parents = Vec::new();
        for i in lo + 1..=hi {
            for x in layers[i].iter() {
                let u = g
                    .neighbors(x)
                    .intersection(&layers[i - 1])
                    .first()
                    .ok_or_else(|| broken("no parent"))?;
                root[x] = root[u];
                parents.push(json!([x, u]));
            }
        }
        let q = layers[lo].len();
        if let Some(nu) = nu {
            if q as u64 > p(t + 1) as u64 * nu || q as u64 > (n as u64 - 1) * nu {
                return Err(broken(format!("{q} forest components exceed the bound")));
            }
        }
        let block = union_of(layers, lo..=hi);
        let mut comps = Vec::new();
        for u in layers[lo].iter() {
            let comp: VertexSet = block.iter().filter(|&v| root[v] == u).collect();
            let ecc =
                ecc_within(g, &comp, u).ok_or_else(|| broken("forest component disconnected"))?;
            if ecc > short_l0 {
                return Err(broken(format!(
                    "component rooted at {u} has eccentricity {ecc} > n^2-1"
                )));
            }
            let run = block_core(g, &comp, n, mode)?;
            if let Some(b) = short_limit {
                if run.pieces.len() as u64 > b {
                    return Err(broken(format!(
                        "component rooted at {u} used {} stars above {b}",
                        run.pieces.len()
                    )));
                }
            }
            comps.push(json!({"root": u, "vertices": comp.to_vec(), "eccentricity": ecc, "stars": run.pieces.len(), "log": run.log}));
            pieces.extend(run.pieces);
        }
        block_log
            .push(json!({"t": t + 1, "layers": [lo, hi], "forest": parents, "components": comps}));
    }
    let (lo, hi) = i_prime[r].ok_or_else(|| broken("empty final block"))?;
    let block = union_of(layers, lo..=hi);
    let ecc = ecc_within(g, &block, x0).ok_or_else(|| broken("final block disconnected"))?;
    if ecc > long_l0 {
        return Err(broken(format!("final block eccentricity {ecc} > n^2+2n-1")));
    }
    let run = block_core(g, &block, n, mode)?;
    if let Some(b) = long_limit {
        if run.pieces.len() as u64 > b {
            return Err(broken(format!(
                "final block used {} stars above {b}",
                run.pieces.len()
            )));
        }
    }
    block_log.push(json!({"t": r + 1, "layers": [lo, hi], "eccentricity": ecc, "stars": run.pieces.len(), "log": run.log}));
    pieces.extend(run.pieces);
    claims.push("forest components have eccentricity <= n^2-1");
    stages.push(TraceStage::new("star_blocks", Value::Array(block_log)));
    stages.push(TraceStage::new("claims", json!(claims)));

    if mode == Mode::Cover {
        pieces.sort_by_key(|s| (s.first(), *s));
        pieces.dedup();
    }
    Ok(pieces)
}
