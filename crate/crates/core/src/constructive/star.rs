//! Star partitions of a neighbourhood, and bounded star covers/partitions
//! from a minimum dominating set.

use serde_json::{json, Value};

use super::{
    broken, exact_u64, family, require_free, require_n, sets_json, ClaimedBound, ConstructOptions,
    ConstructionTrace, Sub, TraceStage,
};
use crate::bitset::VertexSet;
use crate::bounds::{c1, c2, domination_bound, nu_value, xi_value};
use crate::error::{Error, Result};
use crate::generators::Family;
use crate::graph::{Diameter, Graph, PieceKind};
use crate::invariant::Mode;
use crate::solvers::{min_dominating_set_unchecked, optimal_coloring, PieceCertificate};

/// Pieces of the neighbourhood recursion plus its log.
pub(super) struct NeighborhoodRun {
    pub pieces: Vec<VertexSet>,
    pub depth: usize,
    pub stages: Vec<Value>,
}

fn dominated_by(g: &Graph, set: &VertexSet, targets: &VertexSet) -> bool {
    targets.iter().all(|t| !g.neighbors(t).is_disjoint(set))
}

/// The recursion on `{x} ∪ xs` with `xs ⊆ N(x)`. Freeness is assumed; the
/// bounds it implies are checked.
pub(super) fn neighborhood_core(
    g: &Graph,
    x: usize,
    xs: VertexSet,
    n: usize,
) -> Result<NeighborhoodRun> {
    let nu = exact_u64(&nu_value(n));
    let mut pieces = Vec::new();
    let mut stages = Vec::new();
    // (apex u_Y, block Y)
    let mut blocks: Vec<(usize, VertexSet)> = vec![(x, xs)];
    let mut depth = 0;
    if xs.is_empty() {
        pieces.push(VertexSet::singleton(x));
        blocks.clear();
    }
    while !blocks.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        let mut records = Vec::new();
        let (mut i_p, mut j_p) = (VertexSet::new(), VertexSet::new());
        for &(apex, y) in &blocks {
            let mut j_y = VertexSet::new();
            for v in y.iter() {
                if g.neighbors(v).is_disjoint(&j_y) {
                    j_y.insert(v);
                }
            }
            let rest = y.difference(&j_y);
            let mut i_y = j_y;
            for v in j_y.to_vec().into_iter().rev() {
                let mut smaller = i_y;
                smaller.remove(v);
                if dominated_by(g, &smaller, &rest) {
                    i_y = smaller;
                }
            }
            if let Some(nu) = nu {
                if i_y.len() as u64 > nu {
                    return Err(broken(format!(
                        "|I_Y| = {} exceeds R(n-1,n)-1 = {nu}",
                        i_y.len()
                    )));
                }
            }
            let mut star = j_y.difference(&i_y);
            star.insert(apex);
            pieces.push(star);
            let mut children: Vec<(usize, VertexSet)> =
                i_y.iter().map(|u| (u, VertexSet::new())).collect();
            for r in rest.iter() {
                let u = g
                    .neighbors(r)
                    .intersection(&i_y)
                    .first()
                    .ok_or_else(|| broken("undominated vertex"))?;
                children
                    .iter_mut()
                    .find(|(w, _)| *w == u)
                    .unwrap()
                    .1
                    .insert(r);
            }
            if let Some((u, _)) = children.iter().find(|(_, s)| s.is_empty()) {
                return Err(broken(format!("dominator {u} has no private neighbour")));
            }
            records.push(json!({
                "apex": apex,
                "block": y.to_vec(),
                "independent": j_y.to_vec(),
                "dominators": i_y.to_vec(),
                "star": star.to_vec(),
                "children": children.iter().map(|(u, s)| json!({"apex": u, "block": s.to_vec()})).collect::<Vec<_>>(),
            }));
            i_p = i_p.union(&i_y);
            j_p = j_p.union(&j_y);
            next.extend(children);
        }
        if let Some(nu) = nu {
            if (i_p.len() as f64) > (nu as f64).powi(depth as i32) {
                return Err(broken(format!(
                    "|I_{depth}| = {} exceeds ν^{depth}",
                    i_p.len()
                )));
            }
        }
        let x_p: VertexSet = next
            .iter()
            .fold(VertexSet::new(), |acc, (_, s)| acc.union(s));
        stages.push(json!({
            "p": depth,
            "blocks": records,
            "I": i_p.to_vec(),
            "J": j_p.to_vec(),
            "X": x_p.to_vec(),
        }));
        blocks = next;
    }
    if depth > n - 2 {
        return Err(broken(format!(
            "recursion depth {depth} exceeds n-2 = {}",
            n - 2
        )));
    }
    Ok(NeighborhoodRun {
        pieces,
        depth,
        stages,
    })
}

/// An induced star partition of `g[{x} ∪ xs]` by the layered recursion on
/// maximal independent sets and their minimal dominating subsets.
pub fn star_partition_neighborhood(
    g: &Graph,
    x: usize,
    xs: &VertexSet,
    n: usize,
) -> Result<ConstructionTrace> {
    require_n(n, 3)?;
    if x >= g.order() {
        return Err(Error::IndexOutOfRange {
            index: x,
            order: g.order(),
        });
    }
    if !xs.is_subset(g.neighbors(x)) {
        return Err(Error::BadInput(format!(
            "{:?} is not inside the neighbourhood of {x}",
            xs.to_vec()
        )));
    }
    require_free(g, &family(&[Family::Complete, Family::STilde], n))?;
    let run = neighborhood_core(g, x, *xs, n)?;
    let xi = xi_value(n, n - 2);
    if let Some(b) = exact_u64(&xi) {
        if run.pieces.len() as u64 > b {
            return Err(broken(format!("{} stars exceed ξ = {b}", run.pieces.len())));
        }
    }
    let mut within = *xs;
    within.insert(x);
    let sub = Sub::new(g, &within);
    let local: Vec<VertexSet> = run
        .pieces
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| sub.verts.binary_search(&v).unwrap())
                .collect()
        })
        .collect();
    let local_cert = PieceCertificate::new(&sub.graph, Mode::Partition, PieceKind::Star, local);
    let stages = vec![
        TraceStage::new(
            "input",
            json!({"x": x, "X": xs.to_vec(), "vertices": sub.verts}),
        ),
        TraceStage::new("recursion", Value::Array(run.stages)),
        TraceStage::new("depth", json!(run.depth)),
    ];
    let mut trace = ConstructionTrace::finish(
        &sub.graph,
        "star_partition_neighborhood",
        n,
        stages,
        local_cert,
        ClaimedBound::Value(xi),
        None,
    )?;
    trace.vertices = Some(sub.verts);
    Ok(trace)
}

/// Recursion depth recorded in a [`star_partition_neighborhood`] trace.
pub fn recursion_depth(trace: &ConstructionTrace) -> Option<usize> {
    trace
        .stages
        .iter()
        .find(|s| s.stage == "depth")
        .and_then(|s| s.data.as_u64())
        .map(|d| d as usize)
}

/// Dominating set of `g[within]`, its diameter, and the bucket of each
/// dominator.
struct Domination {
    dominators: Vec<usize>,
    buckets: Vec<VertexSet>,
    diameter: usize,
    bound: Option<u64>,
}

fn dominate(g: &Graph, within: &VertexSet, n: usize) -> Result<Domination> {
    let sub = Sub::new(g, within);
    let diameter = match sub.graph.diameter() {
        Diameter::Finite(d) => d,
        Diameter::Disconnected => return Err(Error::Disconnected),
    };
    let u = sub.lift(&min_dominating_set_unchecked(&sub.graph));
    let bound = exact_u64(&domination_bound(n, diameter));
    if let Some(b) = bound {
        if u.len() as u64 > b {
            return Err(broken(format!(
                "dominating set of size {} exceeds {b}",
                u.len()
            )));
        }
    }
    let dominators = u.to_vec();
    let mut buckets = vec![VertexSet::new(); dominators.len()];
    for v in within.difference(&u).iter() {
        let x = g
            .neighbors(v)
            .intersection(&u)
            .first()
            .ok_or_else(|| broken("vertex not dominated"))?;
        buckets[dominators.binary_search(&x).unwrap()].insert(v);
    }
    Ok(Domination {
        dominators,
        buckets,
        diameter,
        bound,
    })
}

fn domination_json(d: &Domination) -> Value {
    json!({
        "dominating_set": d.dominators,
        "buckets": sets_json(&d.buckets),
        "diameter": d.diameter,
        "dominating_bound": d.bound,
    })
}

pub(super) struct BlockRun {
    pub pieces: Vec<VertexSet>,
    pub diameter: usize,
    pub log: Value,
}

/// Star cover of the connected graph `g[within]`: one star per colour class
/// of each dominator's bucket.
pub(super) fn star_cover_core(g: &Graph, within: &VertexSet, n: usize) -> Result<BlockRun> {
    let d = dominate(g, within, n)?;
    let mut pieces = Vec::new();
    let mut colors_used = Vec::new();
    for (&x, bucket) in d.dominators.iter().zip(&d.buckets) {
        if bucket.is_empty() {
            pieces.push(VertexSet::singleton(x));
            colors_used.push(0);
            continue;
        }
        let sub = Sub::new(g, bucket);
        let coloring = optimal_coloring(&sub.graph);
        let k = coloring.iter().max().map_or(0, |c| c + 1);
        for c in 0..k {
            let mut star: VertexSet = (0..coloring.len())
                .filter(|&i| coloring[i] == c)
                .map(|i| sub.verts[i])
                .collect();
            star.insert(x);
            pieces.push(star);
        }
        colors_used.push(k);
    }
    let mut log = domination_json(&d);
    log["colors"] = json!(colors_used);
    Ok(BlockRun {
        pieces,
        diameter: d.diameter,
        log,
    })
}

/// Star partition of the connected graph `g[within]`: the neighbourhood
/// recursion on each dominator's bucket.
pub(super) fn star_partition_core(g: &Graph, within: &VertexSet, n: usize) -> Result<BlockRun> {
    let d = dominate(g, within, n)?;
    let xi = exact_u64(&xi_value(n, n - 2));
    let mut pieces = Vec::new();
    let mut runs = Vec::new();
    for (&x, bucket) in d.dominators.iter().zip(&d.buckets) {
        let run = neighborhood_core(g, x, *bucket, n)?;
        if let Some(b) = xi {
            if run.pieces.len() as u64 > b {
                return Err(broken(format!(
                    "{} stars at dominator {x} exceed ξ = {b}",
                    run.pieces.len()
                )));
            }
        }
        runs.push(
            json!({"x": x, "depth": run.depth, "stars": run.pieces.len(), "recursion": run.stages}),
        );
        pieces.extend(run.pieces);
    }
    let mut log = domination_json(&d);
    log["neighborhoods"] = Value::Array(runs);
    Ok(BlockRun {
        pieces,
        diameter: d.diameter,
        log,
    })
}

fn require_connected(h: &Graph) -> Result<()> {
    if h.order() == 0 {
        return Err(Error::BadInput("empty graph".into()));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Induced star cover from a minimum dominating set and optimal colourings
/// of the dominators' buckets.
pub fn insc_bounded(h: &Graph, n: usize) -> Result<ConstructionTrace> {
    insc_bounded_with(h, n, &ConstructOptions::default())
}

pub fn insc_bounded_with(
    h: &Graph,
    n: usize,
    opts: &ConstructOptions,
) -> Result<ConstructionTrace> {
    require_n(n, 3)?;
    require_connected(h)?;
    require_free(
        h,
        &family(&[Family::Complete, Family::SStar, Family::F1], n),
    )?;
    let run = star_cover_core(h, &h.vertex_set(), n)?;
    let cert = PieceCertificate::new(h, Mode::Cover, PieceKind::Star, run.pieces);
    let bound = ClaimedBound::AffineInChi(c1(n, run.diameter));
    let stages = vec![TraceStage::new("domination", run.log)];
    ConstructionTrace::finish(h, "insc_bounded", n, stages, cert, bound, opts.c_chi)
}

/// Induced star partition from a minimum dominating set and the
/// neighbourhood recursion on each bucket.
pub fn insp_bounded(h: &Graph, n: usize) -> Result<ConstructionTrace> {
    insp_bounded_with(h, n, &ConstructOptions::default())
}

pub fn insp_bounded_with(
    h: &Graph,
    n: usize,
    opts: &ConstructOptions,
) -> Result<ConstructionTrace> {
    require_n(n, 3)?;
    require_connected(h)?;
    require_free(
        h,
        &family(&[Family::Complete, Family::SStar, Family::STilde], n),
    )?;
    let run = star_partition_core(h, &h.vertex_set(), n)?;
    let cert = PieceCertificate::new(h, Mode::Partition, PieceKind::Star, run.pieces);
    let bound = ClaimedBound::Value(c2(n, run.diameter));
    let stages = vec![TraceStage::new("domination", run.log)];
    ConstructionTrace::finish(h, "insp_bounded", n, stages, cert, bound, opts.c_chi)
}
