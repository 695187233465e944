//! Finite quantum sets `(B, ψ)` with `B = ⊕ M_{n_s}` and `ψ = Tr(Q ·)` for a
//! diagonal density `Q`.
//!
//! The canonical orthonormal basis of `L²(B, ψ)` is `ẽ_{ij,s} = e_{ij,s} Q_s^{-1/2}`,
//! ordered by block, then row-major inside each block: for `M₂` this is
//! `(ẽ₁₁, ẽ₁₂, ẽ₂₁, ẽ₂₂)`. Every coordinate matrix in the crate uses this
//! order, and two-leg tensors use `(a, b) ↦ a·|B| + b`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::SetError;
use crate::matrix::{re, ComplexMatrix, C0};
use crate::structure::StructureMaps;

/// Default absolute tolerance for validation and checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Position of a basis vector `ẽ_{ij,s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// An element of `B`, stored as one square matrix per block.
pub type BlockElement = Vec<ComplexMatrix>;

#[derive(Debug, Clone)]
pub struct QuantumSet {
    blocks: Vec<usize>,
    q_diag: Vec<Vec<f64>>,
    delta_sq: f64,
    offsets: Vec<usize>,
    dim: usize,
    maps: OnceLock<StructureMaps>,
}

impl PartialEq for QuantumSet {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks && self.q_diag == other.q_diag && self.delta_sq == other.delta_sq
    }
}

/// Validated construction from block sizes and the diagonal of `Q`.
///
/// `δ²` is read off block 0 and every other block is checked against it.
pub fn make_quantum_set(blocks: &[usize], q_diag: &[Vec<f64>], tol: f64) -> Result<QuantumSet, SetError> {
    if blocks.is_empty() {
        return Err(SetError::Empty);
    }
    if q_diag.len() != blocks.len() {
        return Err(SetError::WeightCount { block: q_diag.len().min(blocks.len()), n: 0, got: q_diag.len() });
    }
    for (s, (&n, w)) in blocks.iter().zip(q_diag).enumerate() {
        if n == 0 {
            return Err(SetError::ZeroBlock { block: s });
        }
        if w.len() != n {
            return Err(SetError::WeightCount { block: s, n, got: w.len() });
        }
        if let Some((i, &v)) = w.iter().enumerate().find(|(_, &v)| !(v > 0.0) || !v.is_finite()) {
            return Err(SetError::NonPositiveWeight { block: s, index: i, value: v });
        }
    }
    let total: f64 = q_diag.iter().flatten().sum();
    if (total - 1.0).abs() > tol {
        return Err(SetError::NotAState { total, residual: (total - 1.0).abs() });
    }
    let inv_trace = |w: &[f64]| w.iter().map(|v| 1.0 / v).sum::<f64>();
    let delta_sq = inv_trace(&q_diag[0]);
    for (s, w) in q_diag.iter().enumerate().skip(1) {
        let t = inv_trace(w);
        if (t - delta_sq).abs() > tol {
            return Err(SetError::NotDeltaForm { block: s, trace: t, expected: delta_sq, residual: (t - delta_sq).abs() });
        }
    }
    Ok(QuantumSet::from_parts_unchecked(blocks.to_vec(), q_diag.to_vec(), delta_sq))
}

/// The unique tracial δ-form, `Q_s = (n_s/|B|)·I`, `δ² = |B|`.
pub fn plancherel_set(blocks: &[usize]) -> Result<QuantumSet, SetError> {
    if blocks.is_empty() {
        return Err(SetError::Empty);
    }
    if let Some(s) = blocks.iter().position(|&n| n == 0) {
        return Err(SetError::ZeroBlock { block: s });
    }
    let dim: usize = blocks.iter().map(|n| n * n).sum();
    let q_diag = blocks.iter().map(|&n| vec![n as f64 / dim as f64; n]).collect();
    Ok(QuantumSet::from_parts_unchecked(blocks.to_vec(), q_diag, dim as f64))
}

/// The Powers state on `M₂`: `Q = diag(1, q²)/(1+q²)`, a `(q + q⁻¹)`-form.
pub fn powers_m2(q: f64) -> Result<QuantumSet, SetError> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(SetError::OutOfRange { name: "q", value: q, range: "(0, 1]" });
    }
    let norm = 1.0 + q * q;
    let delta = q + 1.0 / q;
    Ok(QuantumSet::from_parts_unchecked(vec![2], vec![vec![1.0 / norm, q * q / norm]], delta * delta))
}

impl QuantumSet {
    /// Builds a set without checking any invariant. Only useful for
    /// exercising the axiom checks on deliberately broken data.
    pub fn from_parts_unchecked(blocks: Vec<usize>, q_diag: Vec<Vec<f64>>, delta_sq: f64) -> Self {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for &n in &blocks {
            offsets.push(dim);
            dim += n * n;
        }
        Self { blocks, q_diag, delta_sq, offsets, dim, maps: OnceLock::new() }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn q_diag(&self) -> &[Vec<f64>] {
        &self.q_diag
    }

    pub fn delta_sq(&self) -> f64 {
        self.delta_sq
    }

    pub fn delta(&self) -> f64 {
        self.delta_sq.sqrt()
    }

    /// `|B| = Σ n_s²`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_single_block(&self, n: usize) -> bool {
        self.blocks == [n]
    }

    /// True when every block has scalar `Q_s`.
    pub fn is_tracial(&self, tol: f64) -> bool {
        self.q_diag.iter().all(|w| w.iter().all(|&v| (v - w[0]).abs() <= tol))
    }

    /// True for `(ℂⁿ, Tr/n)`.
    pub fn is_uniform_commutative(&self, tol: f64) -> bool {
        let n = self.blocks.len() as f64;
        self.blocks.iter().all(|&b| b == 1) && self.q_diag.iter().all(|w| (w[0] - 1.0 / n).abs() <= tol)
    }

    pub fn index(&self, block: usize, row: usize, col: usize) -> usize {
        debug_assert!(row < self.blocks[block] && col < self.blocks[block]);
        self.offsets[block] + row * self.blocks[block] + col
    }

    pub fn basis_index(&self, a: usize) -> BasisIndex {
        let block = match self.offsets.binary_search(&a) {
            Ok(s) => s,
            Err(s) => s - 1,
        };
        let n = self.blocks[block];
        let local = a - self.offsets[block];
        BasisIndex { block, row: local / n, col: local % n }
    }

    /// Weight `(Q_s)_{ii}`.
    pub fn weight(&self, block: usize, i: usize) -> f64 {
        self.q_diag[block][i]
    }

    /// Closed-form structure maps, computed once per set.
    pub fn maps(&self) -> &StructureMaps {
        self.maps.get_or_init(|| StructureMaps::closed_form(self))
    }

    pub fn zero_element(&self) -> BlockElement {
        self.blocks.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect()
    }

    /// The matrix unit `e_{ij,s}` as an element of `B`.
    pub fn matrix_unit(&self, block: usize, row: usize, col: usize) -> BlockElement {
        let mut x = self.zero_element();
        x[block][(row, col)] = re(1.0);
        x
    }

    /// Basis vector `ẽ_a = e_{ij,s} Q_s^{-1/2}` as an element of `B`.
    pub fn basis_element(&self, a: usize) -> BlockElement {
        let BasisIndex { block, row, col } = self.basis_index(a);
        let mut x = self.zero_element();
        x[block][(row, col)] = re(self.weight(block, col).powf(-0.5));
        x
    }

    /// `ψ(x) = Σ_s Tr(Q_s x_s)`.
    pub fn state(&self, x: &[ComplexMatrix]) -> Complex64 {
        x.iter()
            .enumerate()
            .map(|(s, xs)| (0..self.blocks[s]).map(|i| xs[(i, i)] * self.weight(s, i)).sum::<Complex64>())
            .sum()
    }

    /// `⟨x, y⟩_ψ = ψ(x* y)`.
    pub fn inner(&self, x: &[ComplexMatrix], y: &[ComplexMatrix]) -> Complex64 {
        let prod: BlockElement = x.iter().zip(y).map(|(a, b)| a.adjoint().matmul(b)).collect();
        self.state(&prod)
    }

    /// Coordinates of `x` in the canonical basis, `⟨ẽ_a, x⟩_ψ`, computed by
    /// explicit trace pairing.
    pub fn coordinates(&self, x: &[ComplexMatrix]) -> Vec<Complex64> {
        (0..self.dim).map(|a| self.inner(&self.basis_element(a), x)).collect()
    }

    /// Element with the given coordinates.
    pub fn element(&self, coords: &[Complex64]) -> BlockElement {
        assert_eq!(coords.len(), self.dim);
        let mut x = self.zero_element();
        for (a, &c) in coords.iter().enumerate() {
            if c == C0 {
                continue;
            }
            let BasisIndex { block, row, col } = self.basis_index(a);
            x[block][(row, col)] += c * self.weight(block, col).powf(-0.5);
        }
        x
    }

    pub fn multiply(x: &[ComplexMatrix], y: &[ComplexMatrix]) -> BlockElement {
        x.iter().zip(y).map(|(a, b)| a.matmul(b)).collect()
    }

    pub fn star(x: &[ComplexMatrix]) -> BlockElement {
        x.iter().map(ComplexMatrix::adjoint).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn powers_half_via_validated_constructor() {
        let set = make_quantum_set(&[2], &[vec![0.8, 0.2]], DEFAULT_TOL).unwrap();
        // Tr(Q⁻¹) = 1.25 + 5
        assert!(close(set.delta_sq(), 6.25));
    }

    #[test]
    fn classical_four_point_set() {
        let set = make_quantum_set(&[1, 1, 1, 1], &vec![vec![0.25]; 4], DEFAULT_TOL).unwrap();
        assert!(close(set.delta_sq(), 4.0));
        assert!(set.is_uniform_commutative(1e-12));
    }

    #[test]
    fn mismatched_blocks_are_not_a_delta_form() {
        let err = make_quantum_set(&[2, 1], &[vec![0.25, 0.25], vec![0.5]], DEFAULT_TOL).unwrap_err();
        match err {
            SetError::NotDeltaForm { block, trace, expected, .. } => {
                assert_eq!(block, 1);
                assert!(close(trace, 2.0));
                assert!(close(expected, 8.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            make_quantum_set(&[2], &[vec![0.9, 0.2]], DEFAULT_TOL),
            Err(SetError::NotAState { .. })
        ));
        assert!(matches!(
            make_quantum_set(&[2], &[vec![1.0, 0.0]], DEFAULT_TOL),
            Err(SetError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(make_quantum_set(&[], &[], DEFAULT_TOL), Err(SetError::Empty)));
        assert!(matches!(
            make_quantum_set(&[2], &[vec![1.0]], DEFAULT_TOL),
            Err(SetError::WeightCount { .. })
        ));
    }

    #[test]
    fn plancherel_examples() {
        let m2 = plancherel_set(&[2]).unwrap();
        assert_eq!(m2.q_diag(), &[vec![0.5, 0.5]]);
        assert_eq!(m2.delta_sq(), 4.0);

        let c4 = plancherel_set(&[1, 1, 1, 1]).unwrap();
        assert_eq!(c4.delta_sq(), 4.0);
        assert!(c4.q_diag().iter().all(|w| w == &[0.25]));

        let s = plancherel_set(&[2, 1]).unwrap();
        assert_eq!(s.delta_sq(), 5.0);
        assert!(close(s.weight(0, 0), 0.4) && close(s.weight(1, 0), 0.2));
        // Tr_s(Q_s⁻¹) = 5 in both blocks
        assert!(close(2.0 / 0.4, 5.0) && close(1.0 / 0.2, 5.0));
        assert!(make_quantum_set(s.blocks(), s.q_diag(), 1e-12).is_ok());
    }

    #[test]
    fn powers_examples() {
        let half = powers_m2(0.5).unwrap();
        assert!(close(half.weight(0, 0), 0.8) && close(half.weight(0, 1), 0.2));
        assert!(close(half.delta_sq(), 6.25));
        let one = powers_m2(1.0).unwrap();
        assert_eq!(one, plancherel_set(&[2]).unwrap());
        assert!(matches!(powers_m2(1.5), Err(SetError::OutOfRange { .. })));
        assert!(powers_m2(0.0).is_err());
    }

    #[test]
    fn delta_squared_bounds_dimension() {
        for q in [0.2, 0.5, 0.9] {
            let s = powers_m2(q).unwrap();
            assert!(s.delta_sq() > s.dim() as f64);
        }
        let s = plancherel_set(&[3, 1, 2]).unwrap();
        assert_eq!(s.delta_sq(), s.dim() as f64);
    }

    #[test]
    fn basis_is_orthonormal_under_state_pairing() {
        let set = plancherel_set(&[2, 1]).unwrap();
        let powers = powers_m2(0.3).unwrap();
        for set in [set, powers] {
            for a in 0..set.dim() {
                let ea = set.basis_element(a);
                for b in 0..set.dim() {
                    let g = set.inner(&ea, &set.basis_element(b));
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((g - re(expect)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let set = plancherel_set(&[2, 1, 3]).unwrap();
        for a in 0..set.dim() {
            let BasisIndex { block, row, col } = set.basis_index(a);
            assert_eq!(set.index(block, row, col), a);
        }
    }
}
