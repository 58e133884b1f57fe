//! Converting SP-covers into star covers or path covers by exploding the
//! pieces of the other shape into singletons.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, PieceKind};
use crate::invariant::Mode;
use crate::solvers::{validate_certificate, PieceCertificate};

fn checked(g: &Graph, cert: &PieceCertificate) -> Result<()> {
    let report = validate_certificate(g, cert);
    if !report.pass {
        return Err(Error::BadInput(format!(
            "certificate does not validate: {:?}",
            report.failures()
        )));
    }
    Ok(())
}

fn assemble(
    g: &Graph,
    mode: Mode,
    kind: PieceKind,
    mut pieces: Vec<VertexSet>,
) -> PieceCertificate {
    if mode == Mode::Cover {
        pieces.sort_by_key(|s| (s.first(), *s));
        pieces.dedup();
    }
    PieceCertificate::new(g, mode, kind, pieces)
}

/// Star cover from an SP-cover of a `P_n`-free graph: path pieces become
/// singletons. Pieces that are both stars and paths are kept.
pub fn cover_to_star_cover(
    g: &Graph,
    cert: &PieceCertificate,
    n: usize,
) -> Result<PieceCertificate> {
    checked(g, cert)?;
    let mut pieces = Vec::new();
    for p in &cert.pieces {
        if g.is_star_set(p) {
            pieces.push(*p);
        } else if p.len() >= n {
            return Err(Error::PathTooLong { len: p.len(), n });
        } else {
            pieces.extend(p.iter().map(VertexSet::singleton));
        }
    }
    Ok(assemble(g, cert.mode, PieceKind::Star, pieces))
}

/// Path cover from an SP-cover of a `K_{1,n}`-free graph: star pieces that
/// are not paths become singletons.
pub fn cover_to_path_cover(
    g: &Graph,
    cert: &PieceCertificate,
    n: usize,
) -> Result<PieceCertificate> {
    checked(g, cert)?;
    let mut pieces = Vec::new();
    for p in &cert.pieces {
        if g.is_path_set(p) {
            pieces.push(*p);
        } else if p.len() > n + 1 {
            return Err(Error::StarTooLarge {
                len: p.len(),
                limit: n + 1,
            });
        } else {
            pieces.extend(p.iter().map(VertexSet::singleton));
        }
    }
    Ok(assemble(g, cert.mode, PieceKind::Path, pieces))
}
