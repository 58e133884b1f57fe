use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::graph::{Graph, PieceKind};
use crate::invariant::Mode;

/// A cover or partition of a graph into pieces, with a shape label per
/// piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceCertificate {
    pub mode: Mode,
    pub kind: PieceKind,
    pub pieces: Vec<VertexSet>,
    /// Concrete shape of each piece: `Star`, `Path` or `IsometricPath`.
    pub labels: Vec<PieceKind>,
    pub value: usize,
}

impl PieceCertificate {
    /// Builds a certificate, labelling each piece by the first shape of
    /// `kind` it satisfies (stars before paths).
    pub fn new(g: &Graph, mode: Mode, kind: PieceKind, mut pieces: Vec<VertexSet>) -> Self {
        pieces.sort_by_key(|s| (s.first(), *s));
        let labels = pieces.iter().map(|s| label_for(g, kind, s)).collect();
        let value = pieces.len();
        PieceCertificate {
            mode,
            kind,
            pieces,
            labels,
            value,
        }
    }

    /// Every vertex of `g` as its own piece.
    pub fn singletons(g: &Graph, mode: Mode, kind: PieceKind) -> Self {
        Self::new(
            g,
            mode,
            kind,
            (0..g.order()).map(VertexSet::singleton).collect(),
        )
    }
}

fn label_for(g: &Graph, kind: PieceKind, s: &VertexSet) -> PieceKind {
    match kind {
        PieceKind::SPAny => {
            if g.is_star_set(s) {
                PieceKind::Star
            } else {
                PieceKind::Path
            }
        }
        k => k,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceCheck {
    pub index: usize,
    pub size: usize,
    pub shape_ok: bool,
    pub label_ok: bool,
}

/// Outcome of [`validate_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pieces: Vec<PieceCheck>,
    pub in_range: bool,
    pub uncovered: Vec<usize>,
    /// Index pairs of overlapping pieces (partition mode only).
    pub overlaps: Vec<(usize, usize)>,
    pub value_matches: bool,
    pub pass: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.in_range {
            out.push("piece vertex out of range or empty piece".to_string());
        }
        for p in &self.pieces {
            if !p.shape_ok {
                out.push(format!("piece {} has the wrong shape", p.index));
            } else if !p.label_ok {
                out.push(format!("piece {} is mislabelled", p.index));
            }
        }
        if !self.uncovered.is_empty() {
            out.push(format!("uncovered vertices {:?}", self.uncovered));
        }
        for (i, j) in &self.overlaps {
            out.push(format!("pieces {i} and {j} overlap"));
        }
        if !self.value_matches {
            out.push("value differs from the number of pieces".to_string());
        }
        out
    }
}

/// Checks piece shapes, coverage, disjointness (for partitions) and the
/// stated value.
pub fn validate_certificate(g: &Graph, cert: &PieceCertificate) -> ValidationReport {
    let all = g.vertex_set();
    let in_range = cert
        .pieces
        .iter()
        .all(|s| !s.is_empty() && s.is_subset(&all));
    let pieces = cert
        .pieces
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let ok_set = !s.is_empty() && s.is_subset(&all);
            let shape_ok = ok_set && g.is_piece(s, cert.kind);
            let label_ok = match cert.labels.get(index) {
                Some(&l) => ok_set && (l == cert.kind || g.is_piece(s, l)),
                None => false,
            };
            PieceCheck {
                index,
                size: s.len(),
                shape_ok,
                label_ok,
            }
        })
        .collect::<Vec<_>>();
    let covered = cert
        .pieces
        .iter()
        .fold(VertexSet::new(), |acc, s| acc.union(s));
    let uncovered = all.difference(&covered).to_vec();
    let mut overlaps = Vec::new();
    if cert.mode == Mode::Partition {
        for i in 0..cert.pieces.len() {
            for j in i + 1..cert.pieces.len() {
                if !cert.pieces[i].is_disjoint(&cert.pieces[j]) {
                    overlaps.push((i, j));
                }
            }
        }
    }
    let value_matches = cert.value == cert.pieces.len() && cert.labels.len() == cert.pieces.len();
    let pass = in_range
        && pieces.iter().all(|p| p.shape_ok && p.label_ok)
        && uncovered.is_empty()
        && overlaps.is_empty()
        && value_matches;
    ValidationReport {
        pieces,
        in_range,
        uncovered,
        overlaps,
        value_matches,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};

    #[test]
    fn validation_examples() {
        let c4 = cycle(4);
        for mode in [Mode::Cover, Mode::Partition] {
            for kind in PieceKind::ALL {
                assert!(
                    validate_certificate(&c4, &PieceCertificate::singletons(&c4, mode, kind)).pass
                );
            }
        }
        let whole =
            PieceCertificate::new(&c4, Mode::Cover, PieceKind::SPAny, vec![c4.vertex_set()]);
        let r = validate_certificate(&c4, &whole);
        assert!(!r.pass);
        assert!(!r.pieces[0].shape_ok);

        let p4 = path(4);
        let overlapping = PieceCertificate::new(
            &p4,
            Mode::Partition,
            PieceKind::Path,
            vec![[0, 1, 2].iter().collect(), [2, 3].iter().collect()],
        );
        let r = validate_certificate(&p4, &overlapping);
        assert_eq!(r.overlaps, vec![(0, 1)]);
        let as_cover = PieceCertificate {
            mode: Mode::Cover,
            ..overlapping
        };
        assert!(validate_certificate(&p4, &as_cover).pass);

        let mut short = PieceCertificate::singletons(&p4, Mode::Cover, PieceKind::Star);
        short.pieces.pop();
        short.labels.pop();
        short.value -= 1;
        assert_eq!(validate_certificate(&p4, &short).uncovered, vec![3]);
    }
}
