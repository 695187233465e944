//! Undirected reflexive quantum graphs on `M₂`: the canonical graphs for the
//! trace and for the Powers states, the continuous tracial families, their
//! conjugation unitaries, and a numerical solver that recovers the list.

mod canonical;
mod solver;

pub use canonical::{
    classify_tracial, conjugation_unitary, m2_schur_coordinates, nontracial_canonical, nontracial_spectrum,
    tracial_canonical, tracial_family, tracial_spectrum, weighted_reality_residual, ConjugationKind,
    NontracialSolution, TracialFamilyParams, SPECTRUM_TOL,
};
pub use solver::{canonical_distance, evaluate_candidate, solve_m2, CandidateVerdict, ClassificationRecord, GridSpec};
