//! Frobenius structure of a quantum set as coordinate matrices: unit,
//! counit, multiplication `m`, comultiplication `m†`, the involution and the
//! modular map `x ↦ Q⁻¹xQ`.

use num_complex::Complex64;

use crate::error::SetError;
use crate::matrix::{re, ComplexMatrix, C0};
use crate::quantum_set::QuantumSet;
use crate::report::AxiomReport;

/// Two routes must agree to this accuracy or the construction is rejected.
const ROUTE_AGREEMENT: f64 = 1e-10;

/// One nonzero structure constant: `m(ẽ_left ⊗ ẽ_right) ∋ coef · ẽ_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultTerm {
    pub out: usize,
    pub left: usize,
    pub right: usize,
    pub coef: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureMaps {
    pub dim: usize,
    pub delta_sq: f64,
    /// Coordinates of `1_B`.
    pub unit_vec: Vec<Complex64>,
    /// `ψ(ẽ_a)` for each basis vector.
    pub counit_vec: Vec<Complex64>,
    /// `|B| × |B|²`.
    pub mult: ComplexMatrix,
    /// `|B|² × |B|`.
    pub comult: ComplexMatrix,
    terms: Vec<MultTerm>,
}

impl StructureMaps {
    /// Structure constants from the closed forms for diagonal `Q`:
    /// `m(ẽ_{ij,s} ⊗ ẽ_{kl,r}) = δ_{rs} δ_{jk} q_{s,j}^{-1/2} ẽ_{il,s}`,
    /// `m†(ẽ_{ij,s}) = Σ_u q_{s,u}^{-1/2} ẽ_{iu,s} ⊗ ẽ_{uj,s}` and
    /// `1 = Σ q_{s,i}^{1/2} ẽ_{ii,s}`, `ψ(ẽ_{ij,s}) = δ_{ij} q_{s,i}^{1/2}`.
    pub fn closed_form(set: &QuantumSet) -> Self {
        let dim = set.dim();
        let mut unit_vec = vec![C0; dim];
        let mut terms = Vec::new();
        let mut comult = ComplexMatrix::zeros(dim * dim, dim);
        for (s, &n) in set.blocks().iter().enumerate() {
            for i in 0..n {
                unit_vec[set.index(s, i, i)] = re(set.weight(s, i).sqrt());
                for j in 0..n {
                    let w = re(set.weight(s, j).powf(-0.5));
                    for l in 0..n {
                        terms.push(MultTerm {
                            out: set.index(s, i, l),
                            left: set.index(s, i, j),
                            right: set.index(s, j, l),
                            coef: w,
                        });
                        // m†: ẽ_{il} ↦ Σ_j q_j^{-1/2} ẽ_{ij} ⊗ ẽ_{jl}
                        comult[(set.index(s, i, j) * dim + set.index(s, j, l), set.index(s, i, l))] = w;
                    }
                }
            }
        }
        let mut mult = ComplexMatrix::zeros(dim, dim * dim);
        for t in &terms {
            mult[(t.out, t.left * dim + t.right)] += t.coef;
        }
        Self { dim, delta_sq: set.delta_sq(), counit_vec: unit_vec.clone(), unit_vec, mult, comult, terms }
    }

    /// Structure constants by multiplying the block matrices of the basis
    /// elements and expanding with `⟨ẽ_c, x⟩_ψ = Tr(Q ẽ_c* x)`.
    pub fn explicit(set: &QuantumSet) -> Self {
        let dim = set.dim();
        let basis: Vec<_> = (0..dim).map(|a| set.basis_element(a)).collect();
        let one: Vec<ComplexMatrix> = set.blocks().iter().map(|&n| ComplexMatrix::identity(n)).collect();
        let unit_vec = set.coordinates(&one);
        let counit_vec: Vec<Complex64> = basis.iter().map(|e| set.state(e)).collect();
        let mut mult = ComplexMatrix::zeros(dim, dim * dim);
        let mut comult = ComplexMatrix::zeros(dim * dim, dim);
        let mut terms = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                let prod = QuantumSet::multiply(&basis[a], &basis[b]);
                for c in 0..dim {
                    let v = set.inner(&basis[c], &prod);
                    mult[(c, a * dim + b)] = v;
                    comult[(a * dim + b, c)] = set.inner(&prod, &basis[c]);
                    if v.norm() > 1e-300 {
                        terms.push(MultTerm { out: c, left: a, right: b, coef: v });
                    }
                }
            }
        }
        Self { dim, delta_sq: set.delta_sq(), unit_vec, counit_vec, mult, comult, terms }
    }

    /// Largest entry difference across unit, counit, `m` and `m†`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let v = |a: &[Complex64], b: &[Complex64]| {
            if a.len() != b.len() {
                return f64::INFINITY;
            }
            a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).norm()))
        };
        v(&self.unit_vec, &other.unit_vec)
            .max(v(&self.counit_vec, &other.counit_vec))
            .max(self.mult.max_abs_diff(&other.mult))
            .max(self.comult.max_abs_diff(&other.comult))
    }

    pub fn terms(&self) -> &[MultTerm] {
        &self.terms
    }

    pub fn unit_column(&self) -> ComplexMatrix {
        ComplexMatrix::column(&self.unit_vec)
    }

    pub fn counit_row(&self) -> ComplexMatrix {
        ComplexMatrix::row(&self.counit_vec)
    }

    /// `m (f ⊗ g) m†`, contracted over the sparse structure constants.
    pub fn sandwich(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            for u in &self.terms {
                let fg = f[(t.left, u.left)] * g[(t.right, u.right)];
                if fg != C0 {
                    out[(t.out, u.out)] += t.coef * u.coef.conj() * fg;
                }
            }
        }
        out
    }

    /// Cap pairing `C[a][b] = ψ(ẽ_a ẽ_b)`.
    pub fn cap(&self) -> ComplexMatrix {
        let mut c = ComplexMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            c[(t.left, t.right)] += self.counit_vec[t.out] * t.coef;
        }
        c
    }

    /// Cup `m†(1)` reshaped to a `|B| × |B|` matrix.
    pub fn cup(&self) -> ComplexMatrix {
        let v = self.comult.apply(&self.unit_vec);
        ComplexMatrix::from_vec(self.dim, self.dim, v).expect("square reshape")
    }
}

/// Closed-form structure maps, cross-checked against explicit block
/// multiplication.
pub fn structure_maps(set: &QuantumSet) -> Result<StructureMaps, SetError> {
    let closed = StructureMaps::closed_form(set);
    let explicit = StructureMaps::explicit(set);
    let residual = closed.max_diff(&explicit);
    if residual > ROUTE_AGREEMENT {
        return Err(SetError::InternalMismatch { residual });
    }
    Ok(closed)
}

/// The involution in coordinates: `star(x) = J · conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarMap {
    pub j: ComplexMatrix,
}

impl StarMap {
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let conj: Vec<_> = x.iter().map(|z| z.conj()).collect();
        self.j.apply(&conj)
    }

    /// Coordinate matrix of the linear map `star ∘ f ∘ star`.
    pub fn conjugate_map(&self, f: &ComplexMatrix) -> ComplexMatrix {
        self.j.matmul(&f.conj()).matmul(&self.j.conj())
    }
}

/// `star(ẽ_{ij,s}) = q_{s,j}^{-1/2} q_{s,i}^{1/2} ẽ_{ji,s}`.
pub fn star_map(set: &QuantumSet) -> StarMap {
    let mut j = ComplexMatrix::zeros(set.dim(), set.dim());
    for (s, &n) in set.blocks().iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let coef = (set.weight(s, r) / set.weight(s, c)).sqrt();
                j[(set.index(s, c, r), set.index(s, r, c))] = re(coef);
            }
        }
    }
    StarMap { j }
}

/// `x ↦ Q⁻¹ x Q`; diagonal with entry `q_{s,j}/q_{s,i}` at `ẽ_{ij,s}`.
pub fn modular_map(set: &QuantumSet) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(set.dim(), set.dim());
    for (s, &n) in set.blocks().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let a = set.index(s, i, j);
                m[(a, a)] = re(set.weight(s, j) / set.weight(s, i));
            }
        }
    }
    m
}

/// Residuals of every Frobenius-algebra identity; passes iff each is below `tol`.
pub fn verify_set_axioms(set: &QuantumSet, tol: f64) -> AxiomReport {
    let maps = StructureMaps::closed_form(set);
    let n = maps.dim;
    let id = ComplexMatrix::identity(n);
    let m = &maps.mult;
    let md = &maps.comult;
    let unit = maps.unit_column();
    let counit = maps.counit_row();
    let mut r = AxiomReport::new(tol);

    r.check("comult_is_adjoint", md.max_abs_diff(&m.adjoint()));
    r.check("specialty", m.matmul(md).max_abs_diff(&id.scale_re(maps.delta_sq)));
    r.check("associativity", m.matmul(&m.kron(&id)).max_abs_diff(&m.matmul(&id.kron(m))));
    r.check("unit_left", m.matmul(&unit.kron(&id)).max_abs_diff(&id));
    r.check("unit_right", m.matmul(&id.kron(&unit)).max_abs_diff(&id));
    r.check("counit_left", counit.kron(&id).matmul(md).max_abs_diff(&id));
    r.check("counit_right", id.kron(&counit).matmul(md).max_abs_diff(&id));

    let cap = counit.matmul(m); // 1 × n²
    let cup = md.matmul(&unit); // n² × 1
    r.check("snake_left", cap.kron(&id).matmul(&id.kron(&cup)).max_abs_diff(&id));
    r.check("snake_right", id.kron(&cap).matmul(&cup.kron(&id)).max_abs_diff(&id));

    let middle = md.matmul(m);
    r.check("frobenius_left", m.kron(&id).matmul(&id.kron(md)).max_abs_diff(&middle));
    r.check("frobenius_right", id.kron(m).matmul(&md.kron(&id)).max_abs_diff(&middle));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_set::{plancherel_set, powers_m2};

    fn corpus() -> Vec<QuantumSet> {
        let mut v = vec![
            plancherel_set(&[1, 1, 1, 1]).unwrap(),
            plancherel_set(&[2]).unwrap(),
            plancherel_set(&[2, 1]).unwrap(),
        ];
        v.extend([0.3, 0.5, 0.9, 1.0].map(|q| powers_m2(q).unwrap()));
        v
    }

    #[test]
    fn routes_agree_on_corpus() {
        for set in corpus() {
            let a = StructureMaps::closed_form(&set);
            let b = StructureMaps::explicit(&set);
            assert!(a.max_diff(&b) < 1e-12, "{:?}", set.blocks());
            assert!(structure_maps(&set).is_ok());
        }
    }

    #[test]
    fn commutative_two_point_products() {
        // ẽ_i = √2 e_i and e_i e_j = δ_ij e_i
        let set = plancherel_set(&[1, 1]).unwrap();
        let m = &set.maps().mult;
        let s2 = 2f64.sqrt();
        assert!((m[(0, 0)] - re(s2)).norm() < 1e-14);
        assert!(m[(1, 0)].norm() < 1e-14);
        assert!(m[(0, 1)].norm() < 1e-14 && m[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn powers_structure_constants() {
        for q in [0.3, 0.5, 0.9] {
            let set = powers_m2(q).unwrap();
            let delta = q + 1.0 / q;
            let maps = set.maps();
            // m(ẽ₁₂ ⊗ ẽ₂₁) = (q⁻¹δ)^{1/2} ẽ₁₁
            let col = 4 + 2;
            assert!((maps.mult[(0, col)] - re((delta / q).sqrt())).norm() < 1e-12);
            for c in 1..4 {
                assert!(maps.mult[(c, col)].norm() < 1e-14);
            }
            let expect = [(q * delta).powf(-0.5), 0.0, 0.0, (delta / q).powf(-0.5)];
            for (u, e) in maps.unit_vec.iter().zip(expect) {
                assert!((u - re(e)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn axioms_hold_on_corpus() {
        for set in corpus() {
            let r = verify_set_axioms(&set, 1e-10);
            assert!(r.all_flags(), "{:?}\n{r}", set.blocks());
        }
        let r = verify_set_axioms(&powers_m2(0.5).unwrap(), 1e-12);
        assert!(r.all_flags(), "{r}");
    }

    #[test]
    fn broken_delta_form_fails_specialty() {
        let set = QuantumSet::from_parts_unchecked(vec![2, 1], vec![vec![0.25, 0.25], vec![0.5]], 8.0);
        let r = verify_set_axioms(&set, 1e-9);
        assert!(!r.flag("specialty"));
        assert!(r.residual("specialty") > 0.1);
    }

    #[test]
    fn star_examples() {
        let tr = star_map(&plancherel_set(&[2]).unwrap());
        let e12 = [C0, re(1.0), C0, C0];
        assert_eq!(tr.apply(&e12), vec![C0, C0, re(1.0), C0]);

        for q in [0.3, 0.5] {
            let set = powers_m2(q).unwrap();
            let star = star_map(&set);
            let img = star.apply(&e12);
            assert!((img[2] - re(1.0 / q)).norm() < 1e-12);
            // oracle: conjugate transpose of the explicit 2x2 element
            let x = set.basis_element(1);
            let oracle = set.coordinates(&QuantumSet::star(&x));
            for (a, b) in img.iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn star_fixes_unit_and_is_involutive() {
        for set in corpus() {
            let star = star_map(&set);
            let unit = &set.maps().unit_vec;
            let img = star.apply(unit);
            assert!(img.iter().zip(unit).all(|(a, b)| (a - b).norm() < 1e-12));
            let x: Vec<Complex64> = (0..set.dim()).map(|k| Complex64::new(k as f64 * 0.7 - 1.0, 0.3 * k as f64)).collect();
            let back = star.apply(&star.apply(&x));
            assert!(back.iter().zip(&x).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn modular_map_examples() {
        assert_eq!(modular_map(&plancherel_set(&[2, 1]).unwrap()), ComplexMatrix::identity(5));
        let q = 0.5;
        let m = modular_map(&powers_m2(q).unwrap());
        assert!((m[(1, 1)] - re(q * q)).norm() < 1e-12);
        assert!((m[(2, 2)] - re(1.0 / (q * q))).norm() < 1e-12);
        // oracle: Q⁻¹ e₁₂ Q on explicit matrices
        let set = powers_m2(q).unwrap();
        let x = set.basis_element(1);
        let qm = ComplexMatrix::diag(&[re(set.weight(0, 0)), re(set.weight(0, 1))]);
        let y = vec![qm.try_inverse().unwrap().matmul(&x[0]).matmul(&qm)];
        let c = set.coordinates(&y);
        assert!((c[1] - re(q * q)).norm() < 1e-12);
    }

    #[test]
    fn modular_map_is_identity_iff_tracial() {
        for set in corpus() {
            let id = modular_map(&set).max_abs_diff(&ComplexMatrix::identity(set.dim())) < 1e-12;
            assert_eq!(id, set.is_tracial(1e-12), "{:?}", set.q_diag());
        }
    }

    #[test]
    fn sandwich_matches_kron_contraction() {
        for set in corpus() {
            let n = set.dim();
            let f = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64)));
            let g = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(((i + 2 * j) % 5) as f64, 0.25));
            let maps = set.maps();
            let direct = maps.mult.matmul(&f.kron(&g)).matmul(&maps.comult);
            assert!(maps.sandwich(&f, &g).max_abs_diff(&direct) < 1e-11);
        }
    }
}
