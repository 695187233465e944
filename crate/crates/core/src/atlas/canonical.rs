use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AtlasError;
use crate::graph::{complete_adjacency, graph_axiom_report, regularity, spectrum, QuantumGraph};
use crate::matrix::{re, spectrum_distance, ComplexMatrix, C0};
use crate::quantum_set::{plancherel_set, powers_m2, QuantumSet};

/// Per-eigenvalue tolerance when comparing a spectrum with a table entry.
pub const SPECTRUM_TOL: f64 = 1e-7;

const PARAM_SLACK: f64 = 1e-12;

fn tracial_m2() -> QuantumSet {
    plancherel_set(&[2]).expect("M2 is a valid block structure")
}

/// Spectrum of the canonical degree-`d` graph on `(M₂, τ)`, descending.
pub fn tracial_spectrum(d: u8) -> Result<Vec<f64>, AtlasError> {
    Ok(match d {
        1 => vec![1., 1., 1., 1.],
        2 => vec![2., 2., 0., 0.],
        3 => vec![3., 1., 1., -1.],
        4 => vec![4., 0., 0., 0.],
        _ => return Err(AtlasError::BadDegree(d.into())),
    })
}

/// The four reflexive undirected graphs on `(M₂, τ)`, one per degree.
pub fn tracial_canonical(d: i64) -> Result<QuantumGraph, AtlasError> {
    let a = match d {
        1 => ComplexMatrix::identity(4),
        2 => ComplexMatrix::diag(&[re(2.), C0, C0, re(2.)]),
        3 => ComplexMatrix::from_real_rows(&[&[1., 0., 0., 2.], &[0., 1., 0., 0.], &[0., 0., 1., 0.], &[2., 0., 0., 1.]]),
        4 => ComplexMatrix::from_real_rows(&[&[2., 0., 0., 2.], &[0.; 4], &[0.; 4], &[2., 0., 0., 2.]]),
        _ => return Err(AtlasError::BadDegree(d)),
    };
    Ok(QuantumGraph::new(tracial_m2(), a)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracialFamilyParams {
    pub d: u8,
    pub p: f64,
    pub theta: Complex64,
}

impl TracialFamilyParams {
    pub fn new(d: u8, p: f64, theta: Complex64) -> Self {
        Self { d, p, theta }
    }

    fn validate(&self) -> Result<(), AtlasError> {
        if !(self.d == 2 || self.d == 3) {
            return Err(AtlasError::BadParams(format!("family degree {} is not 2 or 3", self.d)));
        }
        if !(self.p >= 1.0 - PARAM_SLACK && self.p <= 2.0 + PARAM_SLACK) {
            return Err(AtlasError::BadParams(format!("p = {} outside [1, 2]", self.p)));
        }
        check_unit(self.theta, "theta")
    }

    /// `|y| = √((p−1)(2−p))`.
    pub fn y_abs(&self) -> f64 {
        ((self.p - 1.0) * (2.0 - self.p)).max(0.0).sqrt()
    }
}

fn check_unit(z: Complex64, name: &str) -> Result<(), AtlasError> {
    if (z.norm() - 1.0).abs() > 1e-9 {
        return Err(AtlasError::BadParams(format!("|{name}| = {} is not 1", z.norm())));
    }
    Ok(())
}

/// `A^{(d)}_{p,θ}` on `(M₂, τ)`.
pub fn tracial_family(params: TracialFamilyParams) -> Result<QuantumGraph, AtlasError> {
    params.validate()?;
    let TracialFamilyParams { d, p, theta } = params;
    let y = theta * params.y_abs();
    let yb = y.conj();
    let x = re(f64::from(d) - p);
    let z = theta * theta * (4.0 - f64::from(d) - p);
    let s = re(2.0 - p);
    let p = re(p);
    let a = ComplexMatrix::from_rows(&[
        vec![p, yb, y, x],
        vec![y, s, z, -y],
        vec![yb, z.conj(), s, -yb],
        vec![x, -yb, -y, p],
    ]);
    Ok(QuantumGraph::new(tracial_m2(), a)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum ConjugationKind {
    UTheta(Complex64),
    VP(f64),
}

/// Coordinate matrix of `ad(u)` for `u_θ = diag(1, θ)` or the real rotation `v_p`.
pub fn conjugation_unitary(kind: ConjugationKind) -> Result<ComplexMatrix, AtlasError> {
    match kind {
        ConjugationKind::UTheta(theta) => {
            check_unit(theta, "theta")?;
            Ok(ComplexMatrix::diag(&[re(1.0), theta.conj(), theta, re(1.0)]))
        }
        ConjugationKind::VP(p) => {
            if !(1.0 - PARAM_SLACK..=2.0 + PARAM_SLACK).contains(&p) {
                return Err(AtlasError::BadParams(format!("p = {p} outside [1, 2]")));
            }
            let a = (2.0 - p).max(0.0).sqrt();
            let b = (p - 1.0).max(0.0).sqrt();
            let (s, t) = (1.0 + a, 1.0 - a);
            Ok(ComplexMatrix::from_real_rows(&[&[s, b, b, t], &[-b, s, -t, b], &[-b, -t, s, b], &[t, -b, -b, s]])
                .scale_re(0.5))
        }
    }
}

fn check_q(q: f64) -> Result<(), AtlasError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(AtlasError::BadParams(format!("q = {q} outside (0, 1)")));
    }
    Ok(())
}

/// Spectrum of the nontracial graph with the given label on `powers_m2(q)`.
pub fn nontracial_spectrum(q: f64, label: u8) -> Result<Vec<f64>, AtlasError> {
    check_q(q)?;
    let d = q + 1.0 / q;
    Ok(match label {
        1 => vec![1., 1., 1., 1.],
        2 => vec![d / q, q * d, 0., 0.],
        3 => vec![1. + d, 1., 1., 1. - d],
        4 => vec![d * d, 0., 0., 0.],
        _ => return Err(AtlasError::BadDegree(label.into())),
    })
}

/// The four reflexive undirected graphs on `(M₂, ω_q)`, `0 < q < 1`.
pub fn nontracial_canonical(q: f64, label: i64) -> Result<QuantumGraph, AtlasError> {
    check_q(q)?;
    let set = powers_m2(q)?;
    let (w1, w2) = (set.weight(0, 0), set.weight(0, 1));
    let id = ComplexMatrix::identity(4);
    let a2 = ComplexMatrix::diag(&[re(1.0 / w2), C0, C0, re(1.0 / w1)]);
    let a = match label {
        1 => id,
        2 => a2,
        3 => &(&id + &complete_adjacency(&set)) - &a2,
        4 => complete_adjacency(&set),
        _ => return Err(AtlasError::BadDegree(label)),
    };
    Ok(QuantumGraph::new(set, a)?)
}

/// Diagonal-shape parameters of an undirected reflexive graph on `(M₂, ω_q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NontracialSolution {
    pub p: f64,
    pub t: f64,
    pub p_prime: f64,
    pub x: f64,
    pub q: f64,
}

impl NontracialSolution {
    /// The four solutions, ordered by label.
    pub fn all(q: f64) -> Result<[Self; 4], AtlasError> {
        check_q(q)?;
        let d = q + 1.0 / q;
        let s = |p, t, p_prime, x| Self { p, t, p_prime, x, q };
        Ok([s(1., 1., 1., 0.), s(d / q, 0., q * d, 0.), s(1., 1., 1., d), s(d / q, 0., q * d, d)])
    }

    pub fn adjacency(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            &[self.p, 0., 0., self.x],
            &[0., self.t, 0., 0.],
            &[0., 0., self.t, 0.],
            &[self.x, 0., 0., self.p_prime],
        ])
    }

    /// Label 1..4 if the parameters are one of the four solutions within `tol`.
    pub fn label(&self, tol: f64) -> Option<u8> {
        let all = Self::all(self.q).ok()?;
        all.iter()
            .position(|s| {
                (s.p - self.p).abs() < tol
                    && (s.t - self.t).abs() < tol
                    && (s.p_prime - self.p_prime).abs() < tol
                    && (s.x - self.x).abs() < tol
            })
            .map(|i| i as u8 + 1)
    }
}

fn require_m2(set: &QuantumSet) -> Result<(), AtlasError> {
    if set.is_single_block(2) {
        Ok(())
    } else {
        Err(AtlasError::NotM2)
    }
}

fn m2_index(i: usize, j: usize) -> usize {
    2 * i + j
}

/// Coefficient `A_{ij}^{kl} = ⟨ẽ_{kl}, A ẽ_{ij}⟩`, zero-based.
fn coef(a: &ComplexMatrix, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
    a[(m2_index(k, l), m2_index(i, j))]
}

/// Reality via the weighted coefficient identity
/// `A_{ij}^{kl} = conj(A_{ji}^{lk}) Q_ii^{1/2} Q_jj^{-1/2} Q_kk^{-1/2} Q_ll^{1/2}`.
pub fn weighted_reality_residual(set: &QuantumSet, a: &ComplexMatrix) -> Result<f64, AtlasError> {
    require_m2(set)?;
    let w = |i| set.weight(0, i).sqrt();
    let mut res = 0.0f64;
    for (i, j, k, l) in quads() {
        let rhs = coef(a, j, i, l, k).conj() * (w(i) * w(l) / (w(j) * w(k)));
        res = res.max((coef(a, i, j, k, l) - rhs).norm());
    }
    Ok(res)
}

/// `Σ_{uv} Q_uu^{-1/2} Q_vv^{-1/2} A_{iu}^{kv} A_{uj}^{vl}`, which equals `δ² A`
/// exactly when `A` is Schur idempotent.
pub fn m2_schur_coordinates(set: &QuantumSet, a: &ComplexMatrix) -> Result<ComplexMatrix, AtlasError> {
    require_m2(set)?;
    let w = |i| set.weight(0, i).powf(-0.5);
    let mut out = ComplexMatrix::zeros(4, 4);
    for (i, j, k, l) in quads() {
        let mut s = C0;
        for u in 0..2 {
            for v in 0..2 {
                s += coef(a, i, u, k, v) * coef(a, u, j, v, l) * (w(u) * w(v));
            }
        }
        out[(m2_index(k, l), m2_index(i, j))] = s;
    }
    Ok(out)
}

fn quads() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| (n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1))
}

/// Degree label 1..4 of an undirected reflexive graph on `(M₂, τ)`, with the
/// spectrum confirmed against the table.
pub fn classify_tracial(graph: &QuantumGraph, tol: f64) -> Result<u8, AtlasError> {
    require_m2(&graph.set)?;
    if !graph.set.is_tracial(1e-12) {
        return Err(AtlasError::NotClassifiable("state is not the trace".into()));
    }
    let r = graph_axiom_report(graph, tol);
    for flag in ["schur_idempotent", "reflexive", "undirected"] {
        if !r.flag(flag) {
            return Err(AtlasError::NotClassifiable(format!("{flag} fails with residual {:e}", r.residual(flag))));
        }
    }
    let reg = regularity(graph, tol);
    let d = reg.degree.ok_or_else(|| AtlasError::NotClassifiable("graph is not regular".into()))?;
    let label = d.round();
    if !(1.0..=4.0).contains(&label) || (d - label).abs() > 1e-6 {
        return Err(AtlasError::NotClassifiable(format!("degree {d} is not one of 1..4")));
    }
    let label = label as u8;
    let expected: Vec<Complex64> = tracial_spectrum(label)?.into_iter().map(re).collect();
    let dist = spectrum_distance(&spectrum(graph)?, &expected);
    if dist > SPECTRUM_TOL {
        return Err(AtlasError::NotClassifiable(format!("spectrum is {dist:e} away from the degree-{label} table entry")));
    }
    Ok(label)
}
