//! Exact solvers for the cover and partition invariants and for the
//! auxiliary invariants used by the constructions.

mod certificate;
mod coloring;
mod domination;
mod pieces;
mod search;

pub use certificate::{validate_certificate, PieceCertificate, PieceCheck, ValidationReport};
pub use coloring::{
    chromatic_number, clique_number, independence_number, max_clique, max_independent_set,
    optimal_coloring,
};
pub use domination::{is_dominating, min_dominating_set, min_dominating_set_unchecked};
pub use pieces::{enumerate_maximal_pieces, maximal_independent_sets, pieces_containing};
pub use search::{min_cover, min_partition, solve_invariant, Solution, SolveConfig, SolveStatus};
