//! Numerical rediscovery of the undirected reflexive quantum graphs on `M₂`.
//!
//! The adjacency is written as `A(θ) = A₀ + Σ_j θ_j E_j` over a real
//! parameter vector that already encodes self-adjointness and reality. The
//! Schur and reflexivity residuals are then exactly quadratic in `θ`, so a box
//! can be discarded as soon as the Taylor lower bound on some residual entry
//! is positive. Surviving boxes at grid resolution are polished with
//! Gauss–Newton and the results are grouped by spectrum.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::canonical::{classify_tracial, nontracial_canonical, nontracial_spectrum, tracial_canonical, SPECTRUM_TOL};
use crate::error::AtlasError;
use crate::graph::{graph_axiom_report, regularity, spectrum, QuantumGraph};
use crate::matrix::{re, spectrum_distance, ComplexMatrix};
use crate::quantum_set::QuantumSet;
use crate::report::AxiomReport;

const MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Edge length of the smallest boxes.
    pub step: f64,
    /// Per-parameter search interval; defaults depend on the ansatz.
    pub bounds: Option<Vec<[f64; 2]>>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { step: 0.05, bounds: None }
    }
}

impl GridSpec {
    pub fn with_step(step: f64) -> Self {
        Self { step, bounds: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    /// Degree for the trace, theorem label for Powers states; `None` if the
    /// solution matches no table entry.
    pub label: Option<u8>,
    pub canonical: Option<ComplexMatrix>,
    pub representative: ComplexMatrix,
    pub parameter_names: Vec<String>,
    pub parameters: Vec<f64>,
    /// Sorted eigenvalues as `[re, im]`.
    pub spectrum: Vec<[f64; 2]>,
    pub regular: bool,
    pub degree: Option<f64>,
    pub residuals: AxiomReport,
    /// Number of polished boxes that landed in this spectrum class.
    pub merged: usize,
}

/// Verdict on a single candidate adjacency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateVerdict {
    pub accepted: bool,
    pub schur_residual: f64,
    pub report: AxiomReport,
}

const REQUIRED: [&str; 3] = ["schur_idempotent", "reflexive", "undirected"];

/// Accepts `a` iff it is an undirected reflexive Schur-idempotent map within `tol`.
pub fn evaluate_candidate(set: &QuantumSet, a: &ComplexMatrix, tol: f64) -> Result<CandidateVerdict, AtlasError> {
    let graph = QuantumGraph::new(set.clone(), a.clone())?;
    let report = graph_axiom_report(&graph, tol);
    Ok(CandidateVerdict { accepted: report.all(&REQUIRED), schur_residual: report.residual("schur_idempotent"), report })
}

struct Ansatz {
    base: ComplexMatrix,
    dirs: Vec<ComplexMatrix>,
    names: Vec<&'static str>,
    bounds: Vec<[f64; 2]>,
}

impl Ansatz {
    fn matrix(&self, theta: &[f64]) -> ComplexMatrix {
        let mut a = self.base.clone();
        for (e, &t) in self.dirs.iter().zip(theta) {
            a = &a + &e.scale_re(t);
        }
        a
    }

    /// Self-adjoint real shape on `(M₂, τ)` in `(p, x, Re y, Im y, Re z, Im z)`.
    fn tracial(delta_sq: f64) -> Self {
        let i = Complex64::i();
        let pat = |entries: &[(usize, usize, Complex64)]| {
            let mut m = ComplexMatrix::zeros(4, 4);
            for &(r, c, v) in entries {
                m[(r, c)] = v;
            }
            m
        };
        let one = re(1.0);
        let base = pat(&[(1, 1, re(2.0)), (2, 2, re(2.0))]);
        let e_p = pat(&[(0, 0, one), (3, 3, one), (1, 1, -one), (2, 2, -one)]);
        let e_x = pat(&[(0, 3, one), (3, 0, one)]);
        // y sits at (0,2), (1,0) and with a minus sign at (1,3), (3,2); ȳ at the transposed slots
        let y_dir = |w: Complex64| {
            pat(&[
                (0, 2, w),
                (1, 0, w),
                (1, 3, -w),
                (3, 2, -w),
                (0, 1, w.conj()),
                (2, 0, w.conj()),
                (2, 3, -w.conj()),
                (3, 1, -w.conj()),
            ])
        };
        let z_dir = |w: Complex64| pat(&[(1, 2, w), (2, 1, w.conj())]);
        let b = [-delta_sq, delta_sq];
        Self {
            base,
            dirs: vec![e_p, e_x, y_dir(one), y_dir(i), z_dir(one), z_dir(i)],
            names: vec!["p", "x", "re_y", "im_y", "re_z", "im_z"],
            // conjugation by diag(1, θ) rotates y to θy, so y ≥ 0 loses no spectrum class
            bounds: vec![b, b, [0.0, delta_sq], [0.0, 0.0], b, b],
        }
    }

    /// Diagonal shape on `(M₂, ω_q)` in `(p, t, p', x)`.
    fn nontracial(delta_sq: f64) -> Self {
        let unit = |cells: &[(usize, usize)]| {
            let mut m = ComplexMatrix::zeros(4, 4);
            for &(r, c) in cells {
                m[(r, c)] = re(1.0);
            }
            m
        };
        let b = [-delta_sq, delta_sq];
        Self {
            base: ComplexMatrix::zeros(4, 4),
            dirs: vec![unit(&[(0, 0)]), unit(&[(1, 1), (2, 2)]), unit(&[(3, 3)]), unit(&[(0, 3), (3, 0)])],
            names: vec!["p", "t", "p_prime", "x"],
            bounds: vec![b; 4],
        }
    }
}

/// Residual `F(θ) = F₀ + Σ L_j θ_j + Σ H_{jk} θ_j θ_k`, stacking the Schur
/// residual `m(A⊗A)m† − δ²A` over the reflexivity residual `m(A⊗I)m† − δ²I`.
struct QuadraticModel {
    np: usize,
    nc: usize,
    f0: Vec<Complex64>,
    lin: Vec<Vec<Complex64>>,
    quad: Vec<Vec<Complex64>>,
    quad_abs: Vec<Vec<f64>>,
}

impl QuadraticModel {
    fn new(set: &QuantumSet, ansatz: &Ansatz) -> Self {
        let maps = set.maps();
        let d2 = set.delta_sq();
        let id = ComplexMatrix::identity(4);
        let stack = |schur: ComplexMatrix, refl: ComplexMatrix| -> Vec<Complex64> {
            schur.as_slice().iter().chain(refl.as_slice()).copied().collect()
        };
        let a0 = &ansatz.base;
        let f0 = stack(
            &maps.sandwich(a0, a0) - &a0.scale_re(d2),
            &maps.sandwich(a0, &id) - &id.scale_re(d2),
        );
        let lin = ansatz
            .dirs
            .iter()
            .map(|e| stack(&(&maps.sandwich(a0, e) + &maps.sandwich(e, a0)) - &e.scale_re(d2), maps.sandwich(e, &id)))
            .collect();
        let np = ansatz.dirs.len();
        let zero = ComplexMatrix::zeros(4, 4);
        let mut quad = Vec::with_capacity(np * np);
        for ej in &ansatz.dirs {
            for ek in &ansatz.dirs {
                quad.push(stack(maps.sandwich(ej, ek), zero.clone()));
            }
        }
        let quad_abs = quad.iter().map(|v: &Vec<Complex64>| v.iter().map(|z| z.norm()).collect()).collect();
        Self { np, nc: f0.len(), f0, lin, quad, quad_abs }
    }

    fn value(&self, t: &[f64]) -> Vec<Complex64> {
        let mut f = self.f0.clone();
        for j in 0..self.np {
            if t[j] == 0.0 {
                continue;
            }
            for (fi, l) in f.iter_mut().zip(&self.lin[j]) {
                *fi += l * t[j];
            }
            for k in 0..self.np {
                let w = t[j] * t[k];
                if w != 0.0 {
                    for (fi, h) in f.iter_mut().zip(&self.quad[j * self.np + k]) {
                        *fi += h * w;
                    }
                }
            }
        }
        f
    }

    /// `∂F/∂θ_j` at `t`.
    fn gradient(&self, t: &[f64]) -> Vec<Vec<Complex64>> {
        (0..self.np)
            .map(|j| {
                let mut g = self.lin[j].clone();
                for k in 0..self.np {
                    if t[k] == 0.0 {
                        continue;
                    }
                    let (hjk, hkj) = (&self.quad[j * self.np + k], &self.quad[k * self.np + j]);
                    for i in 0..self.nc {
                        g[i] += (hjk[i] + hkj[i]) * t[k];
                    }
                }
                g
            })
            .collect()
    }

    /// True if some residual entry is provably above `tol` on the whole box.
    fn excludes(&self, center: &[f64], half: &[f64], tol: f64) -> bool {
        let f = self.value(center);
        let g = self.gradient(center);
        (0..self.nc).any(|i| {
            let mut slack = 0.0;
            for j in 0..self.np {
                slack += g[j][i].norm() * half[j];
                for k in 0..self.np {
                    slack += self.quad_abs[j * self.np + k][i] * half[j] * half[k];
                }
            }
            f[i].norm() - slack > tol
        })
    }

    fn max_residual(&self, t: &[f64]) -> f64 {
        self.value(t).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn sq_norm(f: &[Complex64]) -> f64 {
        f.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Gauss–Newton with a vanishing Levenberg shift, which approximates the
    /// minimum-norm step when the Jacobian is rank deficient. A step that does
    /// not decrease the residual is halved.
    fn polish(&self, start: &[f64], tol: f64) -> Vec<f64> {
        let np = self.np;
        let mut t = start.to_vec();
        let mut f = self.value(&t);
        let mut norm = Self::sq_norm(&f);
        for _ in 0..MAX_ITER {
            if f.iter().all(|z| z.norm() < tol * 1e-3) {
                break;
            }
            let g = self.gradient(&t);
            let mut jtj = DMatrix::<f64>::zeros(np, np);
            let mut jtr = DVector::<f64>::zeros(np);
            for a in 0..np {
                for b in a..np {
                    let v: f64 = g[a].iter().zip(&g[b]).map(|(x, y)| x.re * y.re + x.im * y.im).sum();
                    jtj[(a, b)] = v;
                    jtj[(b, a)] = v;
                }
                jtr[a] = -g[a].iter().zip(&f).map(|(x, y)| x.re * y.re + x.im * y.im).sum::<f64>();
            }
            let shift = 1e-12 * (1.0 + jtj.trace());
            for a in 0..np {
                jtj[(a, a)] += shift;
            }
            let Some(chol) = jtj.cholesky() else { break };
            let step = chol.solve(&jtr);
            let mut scale = 1.0;
            let mut improved = false;
            for _ in 0..MAX_HALVINGS {
                let trial: Vec<f64> = t.iter().zip(step.iter()).map(|(a, s)| a + scale * s).collect();
                let ft = self.value(&trial);
                let nt = Self::sq_norm(&ft);
                if nt < norm {
                    t = trial;
                    f = ft;
                    norm = nt;
                    improved = true;
                    break;
                }
                scale *= 0.5;
            }
            if !improved {
                break;
            }
        }
        t
    }
}

struct SearchBox {
    center: Vec<f64>,
    half: Vec<f64>,
}

impl SearchBox {
    fn split(self) -> [SearchBox; 2] {
        let j = (0..self.half.len()).max_by(|&a, &b| self.half[a].total_cmp(&self.half[b])).expect("nonempty box");
        let h = self.half[j] / 2.0;
        let mut half = self.half;
        half[j] = h;
        let mut lo = self.center.clone();
        let mut hi = self.center;
        lo[j] -= h;
        hi[j] += h;
        [SearchBox { center: lo, half: half.clone() }, SearchBox { center: hi, half }]
    }
}

/// Polished parameter vectors of every surviving leaf box.
fn branch_and_bound(model: &QuadraticModel, bounds: &[[f64; 2]], step: f64, tol: f64) -> Vec<Vec<f64>> {
    // Each nondegenerate side is padded to step·2^k so that leaves have side `step`.
    let padded_half = |w: f64| {
        if w == 0.0 {
            0.0
        } else {
            let k = (w / step).log2().ceil().max(0.0);
            0.5 * step * k.exp2()
        }
    };
    let root = SearchBox {
        center: bounds.iter().map(|b| 0.5 * (b[0] + b[1])).collect(),
        half: bounds.iter().map(|b| padded_half(b[1] - b[0])).collect(),
    };
    let leaf = |b: &SearchBox| b.half.iter().all(|&h| h <= 0.5 * step * (1.0 + 1e-9));
    let mut seeds = vec![root];
    for _ in 0..bounds.len() {
        seeds = seeds.into_iter().flat_map(|b| if leaf(&b) { vec![b] } else { b.split().into() }).collect();
    }
    seeds
        .into_par_iter()
        .flat_map_iter(|seed| {
            let mut out = Vec::new();
            let mut stack = vec![seed];
            while let Some(b) = stack.pop() {
                if model.excludes(&b.center, &b.half, tol) {
                    continue;
                }
                if leaf(&b) {
                    let t = model.polish(&b.center, tol);
                    if model.max_residual(&t) < tol {
                        out.push(t);
                    }
                } else {
                    stack.extend(b.split());
                }
            }
            out
        })
        .collect()
}

fn spectrum_key(s: &[Complex64]) -> Vec<(i64, i64)> {
    let r = |x: f64| {
        let v = (x * 1e6).round() as i64;
        if v == 0 { 0 } else { v }
    };
    s.iter().map(|z| (r(z.re), r(z.im))).collect()
}

/// Searches the undirected reflexive ansatz on a single `M₂` block and
/// returns one record per spectrum class.
pub fn solve_m2(set: &QuantumSet, grid: &GridSpec, tol: f64) -> Result<Vec<ClassificationRecord>, AtlasError> {
    if !set.is_single_block(2) {
        return Err(AtlasError::NotM2);
    }
    if !(grid.step > 0.0) {
        return Err(AtlasError::BadParams(format!("grid step {} must be positive", grid.step)));
    }
    let tracial = set.is_tracial(1e-12);
    let mut ansatz = if tracial { Ansatz::tracial(set.delta_sq()) } else { Ansatz::nontracial(set.delta_sq()) };
    if let Some(b) = &grid.bounds {
        if b.len() != ansatz.names.len() || b.iter().any(|[lo, hi]| !(lo <= hi)) {
            return Err(AtlasError::BadParams(format!("expected {} ordered bounds", ansatz.names.len())));
        }
        ansatz.bounds = b.clone();
    }
    let model = QuadraticModel::new(set, &ansatz);
    let found = branch_and_bound(&model, &ansatz.bounds, grid.step, tol);

    let q = (set.weight(0, 1) / set.weight(0, 0)).sqrt();
    let mut classes: BTreeMap<Vec<(i64, i64)>, ClassificationRecord> = BTreeMap::new();
    for t in found {
        let a = ansatz.matrix(&t);
        let graph = QuantumGraph::new(set.clone(), a.clone())?;
        let report = graph_axiom_report(&graph, tol);
        if !report.all(&REQUIRED) {
            continue;
        }
        let spec = spectrum(&graph)?;
        let key = spectrum_key(&spec);
        if let Some(rec) = classes.get_mut(&key) {
            rec.merged += 1;
            continue;
        }
        let (label, canonical) = if tracial {
            match classify_tracial(&graph, tol) {
                Ok(l) => (Some(l), Some(tracial_canonical(l.into())?.adjacency)),
                Err(_) => (None, None),
            }
        } else {
            let label = (1..=4u8).find(|&l| {
                let expect: Vec<Complex64> = nontracial_spectrum(q, l).map(|v| v.into_iter().map(re).collect()).unwrap_or_default();
                spectrum_distance(&spec, &expect) < SPECTRUM_TOL
            });
            match label {
                Some(l) => (Some(l), Some(nontracial_canonical(q, l.into())?.adjacency)),
                None => (None, None),
            }
        };
        let reg = regularity(&graph, tol.max(1e-9));
        classes.insert(
            key,
            ClassificationRecord {
                label,
                canonical,
                representative: a,
                parameter_names: ansatz.names.iter().map(|s| s.to_string()).collect(),
                parameters: t,
                spectrum: spec.iter().map(|z| [z.re, z.im]).collect(),
                regular: reg.regular,
                degree: reg.degree,
                residuals: report,
                merged: 1,
            },
        );
    }
    let mut records: Vec<ClassificationRecord> = classes.into_values().collect();
    records.sort_by_key(|r| r.label.unwrap_or(u8::MAX));
    Ok(records)
}

/// Entrywise distance between a record's representative and its canonical matrix.
pub fn canonical_distance(record: &ClassificationRecord) -> f64 {
    record.canonical.as_ref().map_or(f64::INFINITY, |c| c.max_abs_diff(&record.representative))
}
