//! Quantum automorphisms at concrete points: the fundamental representation
//! of `SO(3)` acting on `M₂`, the Podleś relations of `SO_q(3)` on explicit
//! operators, and the torus acting on the nontracial graphs.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atlas::nontracial_canonical;
use crate::error::WitnessError;
use crate::graph::QuantumGraph;
use crate::matrix::{re, ComplexMatrix, C1};
use crate::report::AxiomReport;
use crate::witness::{verify_witness, IsoWitness};

/// A point of `SO(3)` in the coordinates `st = −r²`, `|s| + |t| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SO3Point {
    pub s: Complex64,
    pub t: Complex64,
    pub r: Complex64,
}

impl SO3Point {
    pub fn new(s: Complex64, t: Complex64, r: Complex64, tol: f64) -> Result<Self, WitnessError> {
        let p = Self { s, t, r };
        let (prod, norm) = p.constraint_residuals();
        if !(prod < tol && norm < tol) {
            return Err(WitnessError::InvalidPoint(format!("|st + r²| = {prod:e}, ||s| + |t| − 1| = {norm:e}")));
        }
        Ok(p)
    }

    /// `(|st + r²|, ||s| + |t| − 1|)`.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        ((self.s * self.t + self.r * self.r).norm(), (self.s.norm() + self.t.norm() - 1.0).abs())
    }

    pub fn k(&self) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr()
    }

    pub fn c(&self) -> Complex64 {
        self.s * self.r.conj() - self.r * self.t.conj()
    }

    /// Builds the point with `|r| = radius`, `arg r = phase_r` and `arg s = phase_s`.
    /// `|s|` is the larger root of `X² − X + |r|²` unless `swap` is set.
    pub fn from_polar(radius: f64, phase_r: f64, phase_s: f64, swap: bool) -> Result<Self, WitnessError> {
        if !(0.0..=0.5).contains(&radius) {
            return Err(WitnessError::InvalidPoint(format!("|r| = {radius} is outside [0, 1/2]")));
        }
        let disc = (1.0 - 4.0 * radius * radius).max(0.0).sqrt();
        let (big, small) = ((1.0 + disc) / 2.0, (1.0 - disc) / 2.0);
        let (s_abs, t_abs) = if swap { (small, big) } else { (big, small) };
        let phase_t = PI + 2.0 * phase_r - phase_s;
        Ok(Self {
            s: Complex64::from_polar(s_abs, phase_s),
            t: Complex64::from_polar(t_abs, phase_t),
            r: Complex64::from_polar(radius, phase_r),
        })
    }
}

/// `count` points with `|r|` uniform on `[0, 1/2]`, seeded and reproducible.
pub fn sample_so3_points(seed: u64, count: usize) -> Vec<SO3Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let radius = rng.gen_range(0.0..=0.5);
            let phase_r = rng.gen_range(0.0..2.0 * PI);
            let phase_s = rng.gen_range(0.0..2.0 * PI);
            SO3Point::from_polar(radius, phase_r, phase_s, rng.gen()).expect("radius sampled in range")
        })
        .collect()
}

/// Fundamental representation of `SO(3)` on `M₂` evaluated at `p`.
pub fn so3_point_matrix(p: &SO3Point, tol: f64) -> Result<ComplexMatrix, WitnessError> {
    let p = SO3Point::new(p.s, p.t, p.r, tol)?;
    let k = re(p.k());
    let one_k = re(1.0 - p.k());
    let (s, t, r, c) = (p.s, p.t, p.r, p.c());
    Ok(ComplexMatrix::from_rows(&[
        vec![one_k, -r, -r.conj(), k],
        vec![c, s, t.conj(), -c],
        vec![c.conj(), t, s.conj(), -c.conj()],
        vec![k, r, r.conj(), one_k],
    ]))
}

/// Runs [`verify_witness`] on `u` as a scalar witness from `graph` to itself.
pub fn verify_classical_automorphism(u: &ComplexMatrix, graph: &QuantumGraph, tol: f64) -> Result<AxiomReport, WitnessError> {
    if u.shape() != (4, 4) || graph.dim() != 4 {
        return Err(WitnessError::DimensionMismatch(format!("expected 4x4 matrix on a 4-dimensional graph, got {:?}", u.shape())));
    }
    let w = IsoWitness::from_scalar_matrix(graph.clone(), graph.clone(), u)?;
    verify_witness(&w, tol)
}

/// `‖Au − uA‖` as the largest entry.
pub fn commutator_norm(u: &ComplexMatrix, graph: &QuantumGraph) -> f64 {
    graph.adjacency.matmul(u).max_abs_diff(&u.matmul(&graph.adjacency))
}

/// Operators `A, G, L` with deformation parameter `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SOq3Generators {
    pub q: f64,
    pub a: ComplexMatrix,
    pub g: ComplexMatrix,
    pub l: ComplexMatrix,
}

impl SOq3Generators {
    pub fn new(q: f64, a: ComplexMatrix, g: ComplexMatrix, l: ComplexMatrix) -> Result<Self, WitnessError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(WitnessError::BadParams(format!("q = {q} is not in (0, 1)")));
        }
        let k = a.rows();
        if [&a, &g, &l].iter().any(|m| m.shape() != (k, k)) {
            return Err(WitnessError::DimensionMismatch("A, G, L must share one square shape".into()));
        }
        Ok(Self { q, a, g, l })
    }

    /// The one-dimensional representation `A = G = 0`, `L = z`.
    pub fn scalar(q: f64, z: Complex64) -> Result<Self, WitnessError> {
        let zero = ComplexMatrix::zeros(1, 1);
        Self::new(q, zero.clone(), zero, ComplexMatrix::diag(&[z]))
    }

    pub fn k(&self) -> ComplexMatrix {
        &self.a.adjoint().matmul(&self.a) + &self.g.adjoint().matmul(&self.g)
    }

    pub fn c(&self) -> ComplexMatrix {
        let q = self.q;
        &self.l.matmul(&self.a.adjoint()).scale_re(1.0 / q) + &self.a.matmul(&self.g.adjoint()).scale_re(q * q)
    }

    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        let ud = u.adjoint();
        let ad = |m: &ComplexMatrix| ud.matmul(m).matmul(u);
        Self { q: self.q, a: ad(&self.a), g: ad(&self.g), l: ad(&self.l) }
    }
}

/// Residual of every Podleś relation, keyed by a short name.
pub fn soq3_relation_residuals(gens: &SOq3Generators) -> BTreeMap<String, f64> {
    let q = gens.q;
    let (a, g, l) = (&gens.a, &gens.g, &gens.l);
    let (k, c) = (gens.k(), gens.c());
    let (ad, gd, ld, cd) = (a.adjoint(), g.adjoint(), l.adjoint(), c.adjoint());
    let id = ComplexMatrix::identity(a.rows());
    let affine = |s: f64| &id - &k.scale_re(s);
    let k2 = k.matmul(&k);
    let mm = |x: &ComplexMatrix, y: &ComplexMatrix| x.matmul(y);
    let qs = |x: &ComplexMatrix, s: f64| x.scale_re(s);

    let rels: [(&str, ComplexMatrix, ComplexMatrix); 19] = [
        ("l_star_l", mm(&ld, l), mm(&affine(1.0), &affine(q.powi(-2)))),
        ("l_l_star", mm(l, &ld), mm(&affine(q * q), &affine(q.powi(4)))),
        ("g_star_g", mm(&gd, g), k2.clone()),
        ("g_g_star", mm(g, &gd), k2.clone()),
        ("a_star_a", mm(&ad, a), &k - &k2),
        ("c_star_c", mm(&cd, &c), &k - &k2),
        ("a_a_star", mm(a, &ad), &qs(&k, q * q) - &qs(&k2, q.powi(4))),
        ("c_c_star", mm(&c, &cd), &qs(&k, q * q) - &qs(&k2, q.powi(4))),
        ("a_squared", mm(a, a), qs(&mm(l, g), 1.0 / q)),
        ("l_g", mm(l, g), qs(&mm(g, l), q.powi(4))),
        ("l_a", mm(l, a), qs(&mm(a, l), q * q)),
        ("a_g", mm(a, g), qs(&mm(g, a), q * q)),
        ("l_g_star", mm(l, &gd), qs(&mm(&gd, l), q.powi(4))),
        ("a_star_l", mm(&ad, l), qs(&mm(&affine(1.0), &c), 1.0 / q)),
        ("l_k", mm(l, &k), qs(&mm(&k, l), q.powi(4))),
        ("g_k", mm(g, &k), mm(&k, g)),
        ("a_k", mm(a, &k), qs(&mm(&k, a), q * q)),
        ("c_k", mm(&c, &k), qs(&mm(&k, &c), q * q)),
        ("a_c", mm(a, &c), mm(&c, a)),
    ];
    rels.iter()
        .map(|(n, x, y)| ((*n).to_owned(), x.max_abs_diff(y)))
        .collect()
}

/// `diag(1, z, z̄, 1)`.
pub fn torus_matrix(z: Complex64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C1, z, z.conj(), C1])
}

/// Verifies `diag(1, z, z̄, 1)` as an automorphism of the nontracial `𝒢₂` and
/// `𝒢₃` on `(M₂, ψ_q)`; flags carry prefixes `g2.` and `g3.`.
pub fn torus_automorphism(z: Complex64, q: f64, tol: f64) -> Result<AxiomReport, WitnessError> {
    if !z.is_finite() {
        return Err(WitnessError::BadParams("z must be finite".into()));
    }
    let u = torus_matrix(z);
    let mut out = AxiomReport::new(tol);
    for label in [2, 3] {
        let g = nontracial_canonical(q, label)?;
        let r = verify_classical_automorphism(&u, &g, tol)?;
        out.merge_prefixed(&format!("g{label}"), &r);
    }
    out.check("unit_modulus", (z.norm() - 1.0).abs());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::tracial_canonical;
    use crate::witness::witness_passes;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(s: Complex64, t: Complex64, r: Complex64) -> ComplexMatrix {
        so3_point_matrix(&SO3Point::new(s, t, r, 1e-12).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn point_matrix_examples() {
        assert_eq!(point(C1, c(0., 0.), c(0., 0.)), ComplexMatrix::identity(4));
        let anti = ComplexMatrix::from_fn(4, 4, |i, j| re(if i + j == 3 { 1.0 } else { 0.0 }));
        assert_eq!(point(c(0., 0.), C1, c(0., 0.)), anti);
        let u = point(c(0.5, 0.), c(0.5, 0.), c(0., 0.5));
        assert!(u.as_slice().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
        assert!(u.unitarity_residual() < 1e-15);
        let p = SO3Point::new(c(0.5, 0.), c(0.5, 0.), c(0., 0.5), 1e-12).unwrap();
        assert_eq!((p.k(), p.c()), (0.5, c(0., -0.5)));
    }

    #[test]
    fn invalid_points() {
        assert!(matches!(SO3Point::new(C1, C1, c(0., 0.), 1e-9), Err(WitnessError::InvalidPoint(_))));
        assert!(matches!(SO3Point::from_polar(0.6, 0., 0., false), Err(WitnessError::InvalidPoint(_))));
    }

    #[test]
    fn sampled_points_are_automorphisms_of_g1_and_g4() {
        let g1 = tracial_canonical(1).unwrap();
        let g4 = tracial_canonical(4).unwrap();
        let g2 = tracial_canonical(2).unwrap();
        for p in sample_so3_points(7, 100) {
            let u = so3_point_matrix(&p, 1e-12).unwrap();
            assert!(u.unitarity_residual() < 1e-12);
            for g in [&g1, &g4] {
                let r = verify_classical_automorphism(&u, g, 1e-9).unwrap();
                assert!(witness_passes(&r), "{p:?}\n{r}");
            }
            if p.r.norm() >= 0.1 {
                assert!(commutator_norm(&u, &g2) > 0.01);
                assert!(!verify_classical_automorphism(&u, &g2, 1e-9).unwrap().flag("intertwining"));
            }
        }
    }

    #[test]
    fn r_zero_points_preserve_g2_and_g3() {
        for g in [tracial_canonical(2).unwrap(), tracial_canonical(3).unwrap()] {
            for phase in [0.0, 1.0, 2.5] {
                for swap in [false, true] {
                    let u = so3_point_matrix(&SO3Point::from_polar(0.0, 0.3, phase, swap).unwrap(), 1e-12).unwrap();
                    assert!(witness_passes(&verify_classical_automorphism(&u, &g, 1e-9).unwrap()));
                }
            }
        }
        let flip = point(c(0., 0.), C1, c(0., 0.));
        assert!(witness_passes(&verify_classical_automorphism(&flip, &tracial_canonical(2).unwrap(), 1e-9).unwrap()));
        let u = point(c(0.5, 0.), c(0.5, 0.), c(0., 0.5));
        assert!(commutator_norm(&u, &tracial_canonical(2).unwrap()) > 0.01);
    }

    #[test]
    fn podles_examples() {
        let res = soq3_relation_residuals(&SOq3Generators::scalar(0.5, Complex64::from_polar(1.0, 0.7)).unwrap());
        assert!(res.values().all(|&v| v < 1e-15), "{res:?}");
        let zero = soq3_relation_residuals(&SOq3Generators::scalar(0.5, c(0., 0.)).unwrap());
        assert_eq!(zero["l_star_l"], 1.0);
        let big = soq3_relation_residuals(&SOq3Generators::scalar(0.5, c(1.1, 0.)).unwrap());
        assert!((big["l_star_l"] - 0.21).abs() < 1e-12);
        assert_eq!(res.len(), 19);
    }

    #[test]
    fn generator_validation() {
        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(SOq3Generators::new(1.0, z.clone(), z.clone(), z.clone()), Err(WitnessError::BadParams(_))));
        assert!(matches!(
            SOq3Generators::new(0.5, z.clone(), z, ComplexMatrix::zeros(3, 3)),
            Err(WitnessError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn torus_points() {
        for q in [0.3, 0.5, 0.9] {
            for n in 0..16 {
                let z = Complex64::from_polar(1.0, 2.0 * PI * n as f64 / 16.0);
                assert!(torus_automorphism(z, q, 1e-9).unwrap().all_flags());
                assert!(!torus_automorphism(z * 1.01, q, 1e-9).unwrap().all_flags());
            }
        }
        let (z, w) = (Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, -1.3));
        assert!(torus_matrix(z).matmul(&torus_matrix(w)).max_abs_diff(&torus_matrix(z * w)) < 1e-15);
        assert!(torus_automorphism(c(0., 1.), 0.5, 1e-9).unwrap().all_flags());
    }
}
