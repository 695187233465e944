//! Quantum graphs as adjacency coordinate matrices, with every predicate,
//! constructor and transformation on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::matrix::{re, sort_spectrum, ComplexMatrix, C0};
use crate::quantum_set::{BlockElement, QuantumSet, DEFAULT_TOL};
use crate::report::AxiomReport;
use crate::structure::star_map;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraph {
    pub set: QuantumSet,
    pub adjacency: ComplexMatrix,
}

impl QuantumGraph {
    /// Checks only that the adjacency is `|B| × |B|`.
    pub fn new(set: QuantumSet, adjacency: ComplexMatrix) -> Result<Self, GraphError> {
        let dim = set.dim();
        if adjacency.shape() != (dim, dim) {
            return Err(GraphError::DimensionMismatch { dim, got: adjacency.shape() });
        }
        Ok(Self { set, adjacency })
    }

    /// Like [`QuantumGraph::new`], additionally requiring Schur idempotence.
    pub fn validated(set: QuantumSet, adjacency: ComplexMatrix, tol: f64) -> Result<Self, GraphError> {
        let g = Self::new(set, adjacency)?;
        let residual = schur_residual(&g);
        if residual >= tol {
            return Err(GraphError::NotSchurIdempotent { residual });
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Trivial,
    Complete,
    Classical,
}

/// Trivial graph `id`, complete graph `δ²ψ(·)1`, or a classical 0/1
/// adjacency on `(ℂⁿ, Tr/n)` taken verbatim.
pub fn standard_graph(kind: GraphKind, set: &QuantumSet, classical: Option<&ComplexMatrix>) -> Result<QuantumGraph, GraphError> {
    let n = set.dim();
    let adjacency = match kind {
        GraphKind::Trivial => ComplexMatrix::identity(n),
        GraphKind::Complete => complete_adjacency(set),
        GraphKind::Classical => {
            if !set.is_uniform_commutative(DEFAULT_TOL) {
                return Err(GraphError::KindMismatch);
            }
            let a = classical.ok_or(GraphError::MissingClassicalAdjacency)?;
            if a.shape() != (n, n) {
                return Err(GraphError::DimensionMismatch { dim: n, got: a.shape() });
            }
            for i in 0..n {
                for j in 0..n {
                    if a[(i, j)] != C0 && a[(i, j)] != re(1.0) {
                        return Err(GraphError::NotZeroOne { row: i, col: j });
                    }
                }
            }
            a.clone()
        }
    };
    QuantumGraph::new(set.clone(), adjacency)
}

/// `δ² · 1 ψ` as a coordinate matrix.
pub fn complete_adjacency(set: &QuantumSet) -> ComplexMatrix {
    let maps = set.maps();
    maps.unit_column().matmul(&maps.counit_row()).scale_re(set.delta_sq())
}

/// `f • g = m(f ⊗ g)m† / δ²`.
pub fn schur_product(set: &QuantumSet, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix, GraphError> {
    let dim = set.dim();
    for m in [f, g] {
        if m.shape() != (dim, dim) {
            return Err(GraphError::DimensionMismatch { dim, got: m.shape() });
        }
    }
    Ok(set.maps().sandwich(f, g).scale_re(1.0 / set.delta_sq()))
}

/// `‖m(A⊗A)m† − δ²A‖`.
pub fn schur_residual(graph: &QuantumGraph) -> f64 {
    let a = &graph.adjacency;
    let lhs = graph.set.maps().sandwich(a, a);
    lhs.max_abs_diff(&a.scale_re(graph.set.delta_sq()))
}

/// `‖star ∘ A ∘ star − A‖`.
pub fn reality_residual(set: &QuantumSet, a: &ComplexMatrix) -> f64 {
    star_map(set).conjugate_map(a).max_abs_diff(a)
}

/// `m(A ⊗ id)m†`, which is `δ²·id` for reflexive and `0` for irreflexive graphs.
fn reflexivity_image(set: &QuantumSet, a: &ComplexMatrix) -> ComplexMatrix {
    set.maps().sandwich(a, &ComplexMatrix::identity(set.dim()))
}

pub fn graph_axiom_report(graph: &QuantumGraph, tol: f64) -> AxiomReport {
    let set = &graph.set;
    let a = &graph.adjacency;
    let mut r = AxiomReport::new(tol);
    r.check("schur_idempotent", schur_residual(graph));
    let refl = reflexivity_image(set, a);
    r.check("reflexive", refl.max_abs_diff(&ComplexMatrix::identity(set.dim()).scale_re(set.delta_sq())));
    r.check("irreflexive", refl.max_abs());
    let sa = a.max_abs_diff(&a.adjoint());
    let real = reality_residual(set, a);
    r.check("self_adjoint", sa);
    r.check("real", real);
    let st = match graph_transpose(graph) {
        Ok(t) => t.max_abs_diff(a),
        Err(_) => f64::INFINITY,
    };
    r.check("self_transpose", st);
    r.check("undirected", sa.max(real));
    r
}

/// `(C ⊗ id)(id ⊗ A ⊗ id)(id ⊗ U)` with cap `C_{ab} = ψ(ẽ_a ẽ_b)` and cup
/// `U = C⁻¹`, the unique inverse making the snake equation hold.
pub fn graph_transpose(graph: &QuantumGraph) -> Result<ComplexMatrix, GraphError> {
    let cap = graph.set.maps().cap();
    let cup = cap.try_inverse().ok_or(GraphError::SingularPairing)?;
    Ok(cap.matmul(&graph.adjacency).matmul(&cup).transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityResult {
    pub regular: bool,
    pub degree: Option<f64>,
    /// Estimate `⟨1, A1⟩ / ⟨1, 1⟩`, reported even when irregular.
    pub estimate: f64,
    pub unit_residual: f64,
    pub counit_residual: f64,
}

pub fn regularity(graph: &QuantumGraph, tol: f64) -> RegularityResult {
    let maps = graph.set.maps();
    let a = &graph.adjacency;
    let unit = &maps.unit_vec;
    let counit = &maps.counit_vec;
    let au = a.apply(unit);
    let dot = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<Complex64>();
    let d = dot(unit, &au) / dot(unit, unit);
    let unit_residual = au.iter().zip(unit).fold(0.0f64, |m, (x, u)| m.max((x - d * u).norm()));
    let psi_a = maps.counit_row().matmul(a);
    let counit_residual = psi_a.as_slice().iter().zip(counit).fold(0.0f64, |m, (x, c)| m.max((x - d * c).norm()));
    let regular = unit_residual < tol && counit_residual < tol && d.im.abs() < tol;
    RegularityResult { regular, degree: regular.then_some(d.re), estimate: d.re, unit_residual, counit_residual }
}

fn require_real(graph: &QuantumGraph, tol: f64) -> Result<AxiomReport, GraphError> {
    let r = graph_axiom_report(graph, tol);
    if !r.flag("real") {
        return Err(GraphError::NotRealReflexive { real: r.residual("real"), reflexive: r.residual("reflexive") });
    }
    Ok(r)
}

/// `A^c = id + δ²ψ(·)1 − A` for a real reflexive graph.
pub fn reflexive_complement(graph: &QuantumGraph, tol: f64) -> Result<QuantumGraph, GraphError> {
    let r = require_real(graph, tol)?;
    if !r.flag("reflexive") {
        return Err(GraphError::NotRealReflexive { real: r.residual("real"), reflexive: r.residual("reflexive") });
    }
    let id = ComplexMatrix::identity(graph.dim());
    let adjacency = &(&id + &complete_adjacency(&graph.set)) - &graph.adjacency;
    QuantumGraph::new(graph.set.clone(), adjacency)
}

pub fn to_irreflexive(graph: &QuantumGraph, tol: f64) -> Result<QuantumGraph, GraphError> {
    let r = graph_axiom_report(graph, tol);
    if !(r.flag("real") && r.flag("reflexive")) {
        return Err(GraphError::WrongReflexivityClass("expected a real reflexive graph"));
    }
    let adjacency = &graph.adjacency - &ComplexMatrix::identity(graph.dim());
    QuantumGraph::new(graph.set.clone(), adjacency)
}

pub fn to_reflexive(graph: &QuantumGraph, tol: f64) -> Result<QuantumGraph, GraphError> {
    let r = graph_axiom_report(graph, tol);
    if !(r.flag("real") && r.flag("irreflexive")) {
        return Err(GraphError::WrongReflexivityClass("expected a real irreflexive graph"));
    }
    let adjacency = &graph.adjacency + &ComplexMatrix::identity(graph.dim());
    QuantumGraph::new(graph.set.clone(), adjacency)
}

/// Eigenvalues sorted by real part, then imaginary part, descending. A
/// Hermitian adjacency goes through the symmetric solver.
pub fn spectrum(graph: &QuantumGraph) -> Result<Vec<Complex64>, GraphError> {
    let a = &graph.adjacency;
    let mut values: Vec<Complex64> = if a.hermitian_residual() < DEFAULT_TOL {
        a.hermitian_eigenvalues()?.into_iter().map(re).collect()
    } else {
        a.eigenvalues()?
    };
    sort_spectrum(&mut values);
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoiResult {
    pub cp: bool,
    pub min_eigenvalue: f64,
    pub hermitian_residual: f64,
}

/// Choi matrix `Σ_{ij} e_{ij} ⊗ A(e_{ij})` on a single block `M_n`.
pub fn choi_matrix(graph: &QuantumGraph) -> Result<ComplexMatrix, GraphError> {
    let set = &graph.set;
    if set.blocks().len() != 1 {
        return Err(GraphError::MultiBlockUnsupported { blocks: set.blocks().len() });
    }
    let n = set.blocks()[0];
    let mut choi = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let img = apply_to_element(set, &graph.adjacency, &set.matrix_unit(0, i, j));
            for k in 0..n {
                for l in 0..n {
                    choi[(i * n + k, j * n + l)] = img[0][(k, l)];
                }
            }
        }
    }
    Ok(choi)
}

/// Completely positive iff the Choi matrix is Hermitian and its spectrum
/// is above `−tol`.
pub fn choi_cp_check(graph: &QuantumGraph, tol: f64) -> Result<ChoiResult, GraphError> {
    let choi = choi_matrix(graph)?;
    let hermitian_residual = choi.hermitian_residual();
    let min_eigenvalue = choi.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0);
    Ok(ChoiResult { cp: hermitian_residual < tol && min_eigenvalue > -tol, min_eigenvalue, hermitian_residual })
}

/// Applies a coordinate matrix to an element of `B`.
pub fn apply_to_element(set: &QuantumSet, a: &ComplexMatrix, x: &[ComplexMatrix]) -> BlockElement {
    set.element(&a.apply(&set.coordinates(x)))
}

/// Coordinate matrix of a linear map given on elements of `B`.
pub fn coordinate_matrix(set: &QuantumSet, f: impl Fn(&BlockElement) -> BlockElement) -> ComplexMatrix {
    let n = set.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for b in 0..n {
        let img = set.coordinates(&f(&set.basis_element(b)));
        for (a, v) in img.into_iter().enumerate() {
            out[(a, b)] = v;
        }
    }
    out
}

/// The blockwise transpose `x ↦ xᵀ` in coordinates.
pub fn transpose_map(set: &QuantumSet) -> ComplexMatrix {
    coordinate_matrix(set, |x| x.iter().map(ComplexMatrix::transpose).collect())
}
