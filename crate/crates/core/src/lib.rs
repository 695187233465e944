//! Finite quantum sets, quantum graphs on them, and checks for the
//! classification of quantum graphs on `M₂`, quantum isomorphism witnesses
//! and quantum automorphism relations.
//!
//! Everything is computed on explicit coordinate matrices in the canonical
//! orthonormal basis described in [`quantum_set`].

pub mod atlas;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod quantum_set;
pub mod qaut;
pub mod report;
pub mod structure;
pub mod witness;

pub use atlas::{
    classify_tracial, nontracial_canonical, solve_m2, tracial_canonical, tracial_family, ClassificationRecord, GridSpec,
    TracialFamilyParams,
};
pub use error::{AtlasError, GraphError, IoError, MatrixError, SetError, WitnessError};
pub use graph::{
    choi_cp_check, graph_axiom_report, graph_transpose, reflexive_complement, regularity, schur_product, spectrum,
    standard_graph, to_irreflexive, to_reflexive, ChoiResult, GraphKind, QuantumGraph, RegularityResult,
};
pub use matrix::{spectrum_distance, ComplexMatrix};
pub use num_complex::Complex64;
pub use qaut::{
    so3_point_matrix, soq3_relation_residuals, torus_automorphism, verify_classical_automorphism, SO3Point, SOq3Generators,
};
pub use quantum_set::{make_quantum_set, plancherel_set, powers_m2, QuantumSet, DEFAULT_TOL};
pub use report::AxiomReport;
pub use structure::{modular_map, star_map, structure_maps, verify_set_axioms, StarMap, StructureMaps};
pub use witness::{
    bigalois_relation_residuals, builtin_representation, verify_m2_c4_isomorphism, verify_witness, IsoWitness,
    PartialIsometryTuple,
};
