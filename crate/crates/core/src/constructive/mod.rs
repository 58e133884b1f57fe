//! Executable versions of the bounded-cover constructions: star partitions
//! of a neighbourhood, bounded star covers and partitions, the layered
//! SP-cover and SP-partition, and conversions between piece kinds.

mod convert;
mod sp;
mod star;

use serde::Serialize;
use serde_json::Value;

use crate::bitset::VertexSet;
use crate::bounds::{AffineBound, BoundValue};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, NamedGraphSpec};
use crate::graph::Graph;
use crate::iso::{find_forbidden, ForbiddenFamily};
use crate::solvers::{validate_certificate, PieceCertificate};

pub use convert::{cover_to_path_cover, cover_to_star_cover};
pub use sp::{
    sp_cover_construct, sp_cover_construct_with, sp_partition_construct,
    sp_partition_construct_with,
};
pub use star::{
    insc_bounded, insc_bounded_with, insp_bounded, insp_bounded_with, recursion_depth,
    star_partition_neighborhood,
};

/// Knobs shared by the constructions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstructOptions {
    /// The BFS root `x_0` of the layered constructions.
    pub root: usize,
    /// A numeric value for the colouring constant `c_χ(n)`, if one is to be
    /// assumed when evaluating bounds.
    pub c_chi: Option<u64>,
}

/// One record of a construction log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStage {
    pub stage: String,
    pub data: Value,
}

impl TraceStage {
    pub fn new(stage: impl Into<String>, data: Value) -> Self {
        TraceStage {
            stage: stage.into(),
            data,
        }
    }
}

/// The bound a construction promises, either a number or affine in `c_χ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClaimedBound {
    Value(BoundValue),
    AffineInChi(AffineBound),
}

impl ClaimedBound {
    pub fn evaluate(&self, c_chi: Option<u64>) -> Option<BoundValue> {
        match self {
            ClaimedBound::Value(v) => Some(v.clone()),
            ClaimedBound::AffineInChi(a) => a.evaluate(c_chi),
        }
    }
}

/// Result of a construction together with its log.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionTrace {
    pub algorithm: String,
    pub n: usize,
    pub stages: Vec<TraceStage>,
    pub result: PieceCertificate,
    pub claimed_bound: ClaimedBound,
    pub realized: usize,
    /// When the certified graph is an induced subgraph of the input, the
    /// input index of each of its vertices.
    pub vertices: Option<Vec<usize>>,
    /// `Some(true)` when the bound evaluates to an exact number and the
    /// result is within it; `None` when it is not computable.
    pub within_bound: Option<bool>,
    pub valid: bool,
}

impl ConstructionTrace {
    fn finish(
        g: &Graph,
        algorithm: &str,
        n: usize,
        stages: Vec<TraceStage>,
        result: PieceCertificate,
        claimed_bound: ClaimedBound,
        c_chi: Option<u64>,
    ) -> Result<Self> {
        let report = validate_certificate(g, &result);
        if !report.pass {
            return Err(broken(format!(
                "{algorithm} produced an invalid certificate: {:?}",
                report.failures()
            )));
        }
        let within_bound = exact_limit(&claimed_bound, c_chi).map(|b| result.value as u64 <= b);
        if within_bound == Some(false) {
            return Err(broken(format!(
                "{algorithm} realized {} above the exact bound",
                result.value
            )));
        }
        Ok(ConstructionTrace {
            algorithm: algorithm.to_string(),
            n,
            stages,
            realized: result.value,
            result,
            claimed_bound,
            within_bound,
            vertices: None,
            valid: true,
        })
    }

    /// Deterministic key-sorted JSON.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

fn exact_limit(bound: &ClaimedBound, c_chi: Option<u64>) -> Option<u64> {
    let v = bound.evaluate(c_chi)?;
    if v.is_computable() {
        v.to_u64()
    } else {
        None
    }
}

/// A bound value as a machine integer when its status is exact.
fn exact_u64(v: &BoundValue) -> Option<u64> {
    if v.is_computable() {
        v.to_u64()
    } else {
        None
    }
}

fn broken(msg: impl Into<String>) -> Error {
    Error::InternalInvariantBroken(msg.into())
}

fn family(families: &[Family], n: usize) -> ForbiddenFamily {
    let members = families
        .iter()
        .map(|&f| generate(&NamedGraphSpec::new(f, n)).expect("valid parameter"))
        .collect();
    ForbiddenFamily::new(members)
}

fn require_free(g: &Graph, fam: &ForbiddenFamily) -> Result<()> {
    match find_forbidden(g, fam) {
        Some((i, embedding)) => {
            let name = fam.members[i]
                .label()
                .unwrap_or("forbidden graph")
                .to_string();
            Err(Error::FreenessViolated { name, embedding })
        }
        None => Ok(()),
    }
}

fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::BadParameter(format!(
            "n must be at least {min}, got {n}"
        )));
    }
    Ok(())
}

/// `g[verts]` with the map back to `g`'s indices.
struct Sub {
    verts: Vec<usize>,
    graph: Graph,
}

impl Sub {
    fn new(g: &Graph, within: &VertexSet) -> Self {
        let verts = within.to_vec();
        let graph = g.induced(&verts);
        Sub { verts, graph }
    }

    fn lift(&self, local: &VertexSet) -> VertexSet {
        local.iter().map(|v| self.verts[v]).collect()
    }
}

fn sets_json(sets: &[VertexSet]) -> Value {
    Value::Array(sets.iter().map(|s| serde_json::json!(s.to_vec())).collect())
}
