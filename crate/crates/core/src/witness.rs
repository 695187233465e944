//! Quantum isomorphism witnesses at the coefficient level, the relation sets
//! of the bigalois algebras between `M₂` and `ℂ⁴`, and the two explicit
//! representations `π` (on `ℂ²`) and `ρ` (on `ℂ⁴`).
//!
//! A witness carries coefficients `P_i^j ∈ M_k` with
//! `P̃(ẽ_i) = Σ_j e'_j ⊗ P_i^j`, where `i` runs over the basis of the source
//! (domain of `P̃`) and `j` over the basis of the target.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atlas::tracial_canonical;
use crate::error::WitnessError;
use crate::graph::{standard_graph, GraphKind, QuantumGraph};
use crate::matrix::{re, ComplexMatrix, C0};
use crate::quantum_set::plancherel_set;
use crate::report::AxiomReport;
use crate::structure::star_map;

/// The five defining conditions of a quantum isomorphism.
pub const WITNESS_CONDITIONS: [&str; 5] = ["unital", "multiplicative", "star_preserving", "unitary", "intertwining"];

#[derive(Debug, Clone, PartialEq)]
pub struct IsoWitness {
    pub source: QuantumGraph,
    pub target: QuantumGraph,
    pub k: usize,
    /// `blocks[j][i] = P_i^j`: one row per target basis vector.
    pub blocks: Vec<Vec<ComplexMatrix>>,
}

impl IsoWitness {
    pub fn new(
        source: QuantumGraph,
        target: QuantumGraph,
        k: usize,
        blocks: Vec<Vec<ComplexMatrix>>,
    ) -> Result<Self, WitnessError> {
        let w = Self { source, target, k, blocks };
        w.check_dims()?;
        Ok(w)
    }

    /// Witness with `k = 1` whose scalar coefficients are the entries of `u`.
    pub fn from_scalar_matrix(source: QuantumGraph, target: QuantumGraph, u: &ComplexMatrix) -> Result<Self, WitnessError> {
        let blocks = (0..u.rows())
            .map(|j| (0..u.cols()).map(|i| ComplexMatrix::diag(&[u[(j, i)]])).collect())
            .collect();
        Self::new(source, target, 1, blocks)
    }

    /// `P_i^j = δ_ij I_k` from a graph to itself.
    pub fn identity(graph: QuantumGraph) -> Self {
        let m = graph.dim();
        Self::from_scalar_matrix(graph.clone(), graph, &ComplexMatrix::identity(m)).expect("square identity")
    }

    fn check_dims(&self) -> Result<(), WitnessError> {
        let (m, n) = (self.source.dim(), self.target.dim());
        if self.k == 0 {
            return Err(WitnessError::DimensionMismatch("k must be positive".into()));
        }
        if self.blocks.len() != n {
            return Err(WitnessError::DimensionMismatch(format!("{} block rows, target has dimension {n}", self.blocks.len())));
        }
        for (j, row) in self.blocks.iter().enumerate() {
            if row.len() != m {
                return Err(WitnessError::DimensionMismatch(format!("block row {j} has {} entries, source has dimension {m}", row.len())));
            }
            if let Some((i, b)) = row.iter().enumerate().find(|(_, b)| b.shape() != (self.k, self.k)) {
                return Err(WitnessError::DimensionMismatch(format!("block ({j}, {i}) is {:?}, expected {}x{}", b.shape(), self.k, self.k)));
            }
        }
        Ok(())
    }

    fn p(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[j][i]
    }

    /// The `(n·k) × (m·k)` operator with the basis leg major and the `H` leg minor.
    pub fn big_matrix(&self) -> ComplexMatrix {
        let (m, n, k) = (self.source.dim(), self.target.dim(), self.k);
        ComplexMatrix::from_fn(n * k, m * k, |r, c| self.blocks[r / k][c / k][(r % k, c % k)])
    }

    /// Every block replaced by `v† P v`.
    pub fn conjugated(&self, v: &ComplexMatrix) -> Self {
        let vd = v.adjoint();
        let blocks = self.blocks.iter().map(|row| row.iter().map(|b| vd.matmul(b).matmul(v)).collect()).collect();
        Self { blocks, ..self.clone() }
    }
}

fn combine<'a>(k: usize, terms: impl Iterator<Item = (Complex64, &'a ComplexMatrix)>) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(k, k);
    for (c, b) in terms {
        if c != C0 {
            out = &out + &b.scale(c);
        }
    }
    out
}

/// Coefficient-level checks of unitality, multiplicativity, the involution,
/// block unitarity, counit and comultiplication, and intertwining.
pub fn verify_witness(w: &IsoWitness, tol: f64) -> Result<AxiomReport, WitnessError> {
    w.check_dims()?;
    let (m, n, k) = (w.source.dim(), w.target.dim(), w.k);
    let src = w.source.set.maps();
    let tgt = w.target.set.maps();
    let id_k = ComplexMatrix::identity(k);
    let mut r = AxiomReport::new(tol);

    let unital = (0..n)
        .map(|j| combine(k, (0..m).map(|i| (src.unit_vec[i], w.p(i, j)))).max_abs_diff(&id_k.scale(tgt.unit_vec[j])))
        .fold(0.0, f64::max);
    r.check("unital", unital);

    // products P_a^k P_b^l, indexed by target terms of m'
    let mut multiplicative = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let mut lhs = vec![ComplexMatrix::zeros(k, k); n];
            for t in src.terms().iter().filter(|t| t.left == a && t.right == b) {
                for (j, l) in lhs.iter_mut().enumerate() {
                    *l = &*l + &w.p(t.out, j).scale(t.coef);
                }
            }
            let mut rhs = vec![ComplexMatrix::zeros(k, k); n];
            for t in tgt.terms() {
                rhs[t.out] = &rhs[t.out] + &w.p(a, t.left).matmul(w.p(b, t.right)).scale(t.coef);
            }
            for (x, y) in lhs.iter().zip(&rhs) {
                multiplicative = multiplicative.max(x.max_abs_diff(y));
            }
        }
    }
    r.check("multiplicative", multiplicative);

    let js = star_map(&w.source.set).j;
    let jt = star_map(&w.target.set).j;
    let mut star = 0.0f64;
    for a in 0..m {
        for j in 0..n {
            let lhs = combine(k, (0..m).map(|c| (js[(c, a)], w.p(c, j))));
            let rhs = (0..n).fold(ComplexMatrix::zeros(k, k), |acc, l| &acc + &w.p(a, l).adjoint().scale(jt[(j, l)]));
            star = star.max(lhs.max_abs_diff(&rhs));
        }
    }
    r.check("star_preserving", star);

    let big = w.big_matrix();
    r.check("unitary", big.unitarity_residual());

    let counit = (0..m)
        .map(|i| combine(k, (0..n).map(|j| (tgt.counit_vec[j], w.p(i, j)))).max_abs_diff(&id_k.scale(src.counit_vec[i])))
        .fold(0.0, f64::max);
    r.check("counit", counit);

    // (m'† ⊗ id) P̃ = (P̃ ⊗ P̃) m†, using m†[(a,b)][c] = conj(m[c][(a,b)])
    let mut comult = 0.0f64;
    for i in 0..m {
        let mut lhs = vec![ComplexMatrix::zeros(k, k); n * n];
        for t in tgt.terms() {
            let idx = t.left * n + t.right;
            lhs[idx] = &lhs[idx] + &w.p(i, t.out).scale(t.coef.conj());
        }
        let mut rhs = vec![ComplexMatrix::zeros(k, k); n * n];
        for t in src.terms().iter().filter(|t| t.out == i) {
            for kk in 0..n {
                for ll in 0..n {
                    let prod = w.p(t.left, kk).matmul(w.p(t.right, ll));
                    rhs[kk * n + ll] = &rhs[kk * n + ll] + &prod.scale(t.coef.conj());
                }
            }
        }
        for (x, y) in lhs.iter().zip(&rhs) {
            comult = comult.max(x.max_abs_diff(y));
        }
    }
    r.check("comultiplication", comult);
    let bijection = r.flag("counit") && r.flag("comultiplication");
    r.set_flag("bijection_checks_agree", bijection == r.flag("unitary"));

    r.check("intertwining", intertwining_residual(w));
    Ok(r)
}

/// `‖P̃∘A − (A'⊗I)∘P̃‖` on coefficients.
pub fn intertwining_residual(w: &IsoWitness) -> f64 {
    let (m, n, k) = (w.source.dim(), w.target.dim(), w.k);
    let a = &w.source.adjacency;
    let at = &w.target.adjacency;
    let mut res = 0.0f64;
    for i in 0..m {
        for j in 0..n {
            let lhs = combine(k, (0..m).map(|c| (a[(c, i)], w.p(c, j))));
            let rhs = combine(k, (0..n).map(|l| (at[(j, l)], w.p(i, l))));
            res = res.max(lhs.max_abs_diff(&rhs));
        }
    }
    res
}

/// True iff the five defining conditions hold and the two bijection checks agree.
pub fn witness_passes(report: &AxiomReport) -> bool {
    report.all(&WITNESS_CONDITIONS) && report.flag("bijection_checks_agree")
}

/// Four `k × k` operators `S₁..S₄`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialIsometryTuple {
    pub s: [ComplexMatrix; 4],
}

impl PartialIsometryTuple {
    pub fn new(s: [ComplexMatrix; 4]) -> Result<Self, WitnessError> {
        let k = s[0].rows();
        if k == 0 || s.iter().any(|m| m.shape() != (k, k)) {
            return Err(WitnessError::DimensionMismatch("S_1..S_4 must share one square shape".into()));
        }
        Ok(Self { s })
    }

    pub fn k(&self) -> usize {
        self.s[0].rows()
    }

    pub fn zeros(k: usize) -> Self {
        Self { s: std::array::from_fn(|_| ComplexMatrix::zeros(k, k)) }
    }

    /// `u† S_r u` for every `r`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        let ud = u.adjoint();
        Self { s: std::array::from_fn(|r| ud.matmul(&self.s[r]).matmul(u)) }
    }

    /// Rescaled coefficients `P̂_{ij}^r = √2 P_{ij}^r` in basis order `11, 12, 21, 22`.
    fn scaled_coefficients(&self) -> [[ComplexMatrix; 4]; 4] {
        std::array::from_fn(|r| {
            let s = &self.s[r];
            let sd = s.adjoint();
            [s.matmul(&sd), s.clone(), sd.clone(), sd.matmul(s)]
        })
    }
}

/// Classical adjacency `A'_d` of the regular reflexive graphs on four vertices.
pub fn table1_adjacency(d: u8) -> Result<ComplexMatrix, WitnessError> {
    let rows: [[f64; 4]; 4] = match d {
        1 => [[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.]],
        2 => [[1., 1., 0., 0.], [1., 1., 0., 0.], [0., 0., 1., 1.], [0., 0., 1., 1.]],
        3 => [[1., 0., 1., 1.], [0., 1., 1., 1.], [1., 1., 1., 0.], [1., 1., 0., 1.]],
        4 => [[1.; 4]; 4],
        _ => return Err(WitnessError::BadParams(format!("degree {d} is not in 1..=4"))),
    };
    Ok(ComplexMatrix::from_fn(4, 4, |i, j| re(rows[i][j])))
}

/// `𝒢'_d` on `(ℂ⁴, Tr/4)`.
pub fn classical_graph(d: u8) -> Result<QuantumGraph, WitnessError> {
    let set = plancherel_set(&[1, 1, 1, 1]).expect("valid block structure");
    Ok(standard_graph(GraphKind::Classical, &set, Some(&table1_adjacency(d)?))?)
}

fn check_degree(d: u8) -> Result<(), WitnessError> {
    if (1..=4).contains(&d) {
        Ok(())
    } else {
        Err(WitnessError::BadParams(format!("degree {d} is not in 1..=4")))
    }
}

/// Residuals of the presentation of `𝒪_d`, followed by the unreduced
/// coefficient equations it was derived from (prefixed `source.`).
pub fn bigalois_relation_residuals(s: &PartialIsometryTuple, d: u8) -> Result<BTreeMap<String, f64>, WitnessError> {
    check_degree(d)?;
    let k = s.k();
    let id = ComplexMatrix::identity(k);
    let two = id.scale_re(2.0);
    let sd: Vec<ComplexMatrix> = s.s.iter().map(ComplexMatrix::adjoint).collect();
    let src: Vec<ComplexMatrix> = (0..4).map(|r| sd[r].matmul(&s.s[r])).collect();
    let rng: Vec<ComplexMatrix> = (0..4).map(|r| s.s[r].matmul(&sd[r])).collect();
    let sum = |v: &[ComplexMatrix]| v.iter().fold(ComplexMatrix::zeros(k, k), |a, b| &a + b);
    let mut out = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        out.insert(name.to_owned(), v);
    };

    put("partial_isometry", (0..4).map(|r| rng[r].matmul(&s.s[r]).max_abs_diff(&s.s[r])).fold(0.0, f64::max));
    put("orthocomplement", (0..4).map(|r| (&rng[r] + &src[r]).max_abs_diff(&id)).fold(0.0, f64::max));
    put("sum_source_projections", sum(&src).max_abs_diff(&two));
    put("sum_range_projections", sum(&rng).max_abs_diff(&two));
    put("sum_zero", sum(&s.s).max_abs());
    let mut mixed = 0.0f64;
    for r in 0..4 {
        for t in (0..4).filter(|&t| t != r) {
            let lhs = sd[t].matmul(&s.s[r]);
            let rhs = -&src[t].matmul(&src[r]);
            mixed = mixed.max(lhs.max_abs_diff(&rhs));
        }
    }
    put("mixed", mixed);
    if d == 2 || d == 3 {
        put("s1_plus_s2", (&s.s[0] + &s.s[1]).max_abs());
        put("s3_plus_s4", (&s.s[2] + &s.s[3]).max_abs());
        put("s1_source_plus_s3_source", (&src[0] + &src[2]).max_abs_diff(&id));
    }

    let p = s.scaled_coefficients();
    let ij = |a: usize| (a / 2, a % 2);
    let idx = |i: usize, j: usize| 2 * i + j;
    put("source.unit", (0..4).map(|r| (&p[r][0] + &p[r][3]).max_abs_diff(&id)).fold(0.0, f64::max));
    let mut mult = 0.0f64;
    let mut comult = 0.0f64;
    let mut invol = 0.0f64;
    for r in 0..4 {
        for a in 0..4 {
            let (i, j) = ij(a);
            invol = invol.max(p[r][idx(j, i)].adjoint().max_abs_diff(&p[r][a]));
            for b in 0..4 {
                let (kk, l) = ij(b);
                let lhs = if j == kk { p[r][idx(i, l)].clone() } else { ComplexMatrix::zeros(k, k) };
                mult = mult.max(lhs.max_abs_diff(&p[r][a].matmul(&p[r][b])));
            }
            for t in 0..4 {
                let rhs = (0..2).fold(ComplexMatrix::zeros(k, k), |acc, u| &acc + &p[r][idx(i, u)].matmul(&p[t][idx(u, j)]));
                let lhs = if r == t { p[r][a].scale_re(2.0) } else { ComplexMatrix::zeros(k, k) };
                comult = comult.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    put("source.multiplication", mult);
    put("source.involution", invol);
    put("source.comultiplication", comult);
    let counit = (0..4)
        .map(|a| {
            let (i, j) = ij(a);
            let total = (0..4).fold(ComplexMatrix::zeros(k, k), |acc, r| &acc + &p[r][a]);
            total.max_abs_diff(&if i == j { two.clone() } else { ComplexMatrix::zeros(k, k) })
        })
        .fold(0.0, f64::max);
    put("source.counit", counit);

    // Σ_c A[c][a] P̂_c^r = Σ_t A'[r][t] P̂_a^t, with integer adjacencies
    let a = tracial_canonical(d.into())?.adjacency;
    let at = table1_adjacency(d)?;
    let mut adj = 0.0f64;
    for r in 0..4 {
        for col in 0..4 {
            let lhs = (0..4).fold(ComplexMatrix::zeros(k, k), |acc, c| &acc + &p[r][c].scale(a[(c, col)]));
            let rhs = (0..4).fold(ComplexMatrix::zeros(k, k), |acc, t| &acc + &p[t][col].scale(at[(r, t)]));
            adj = adj.max(lhs.max_abs_diff(&rhs));
        }
    }
    put("source.adjacency", adj);
    Ok(out)
}

/// Witness from `M₂` (domain of `P̃`) to `ℂ⁴` with
/// `P_{11}^r = S_rS_r*/√2`, `P_{12}^r = S_r/√2`, `P_{21}^r = S_r*/√2`, `P_{22}^r = S_r*S_r/√2`.
///
/// The returned witness has `source = tracial` and `target = classical`.
pub fn witness_from_partial_isometries(
    s: &PartialIsometryTuple,
    classical: &QuantumGraph,
    tracial: &QuantumGraph,
) -> Result<IsoWitness, WitnessError> {
    if classical.dim() != 4 || tracial.dim() != 4 {
        return Err(WitnessError::DimensionMismatch("both graphs must have dimension 4".into()));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let p = s.scaled_coefficients();
    let blocks = (0..4).map(|r| p[r].iter().map(|b| b.scale_re(scale)).collect()).collect();
    IsoWitness::new(tracial.clone(), classical.clone(), s.k(), blocks)
}

/// Rank-two factors `ρ(S_r) = w_r e_r† + w⊥_r e⊥_r†`, normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoFactors {
    pub w: [[f64; 4]; 4],
    pub e: [[f64; 4]; 4],
    pub w_perp: [[f64; 4]; 4],
    pub e_perp: [[f64; 4]; 4],
}

impl RhoFactors {
    pub fn builtin() -> Self {
        let norm = |v: [f64; 4]| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        };
        let w = [[0., -1., 0., 1.], [1., 0., -1., 0.], [0., 1., 0., 1.], [-1., 0., -1., 0.]];
        let w_perp = [[0., -1., 2., -1.], [-1., 0., -1., -2.], [2., 1., 0., -1.], [-1., 2., 1., 0.]];
        let e_perp = [[0., 1., 1., 1.], [1., 0., 1., -1.], [1., -1., 0., 1.], [1., 1., -1., 0.]];
        let e = [[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.]];
        Self { w: w.map(norm), e, w_perp: w_perp.map(norm), e_perp: e_perp.map(norm) }
    }

    fn outer(u: &[f64; 4], v: &[f64; 4]) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| re(u[i] * v[j]))
    }

    pub fn operator(&self, r: usize) -> ComplexMatrix {
        &Self::outer(&self.w[r], &self.e[r]) + &Self::outer(&self.w_perp[r], &self.e_perp[r])
    }

    /// Largest deviation of `(w_r, e_r, w⊥_r, e⊥_r)` from an orthonormal family.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut res = 0.0f64;
        for r in 0..4 {
            let vs = [self.w[r], self.e[r], self.w_perp[r], self.e_perp[r]];
            for a in 0..4 {
                for b in 0..4 {
                    let dot: f64 = vs[a].iter().zip(&vs[b]).map(|(x, y)| x * y).sum();
                    res = res.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        res
    }

    /// Largest entry difference between the factorization and the dense matrices.
    pub fn factorization_residual(&self, tuple: &PartialIsometryTuple) -> f64 {
        (0..4).map(|r| self.operator(r).max_abs_diff(&tuple.s[r])).fold(0.0, f64::max)
    }
}

/// `π` on `ℂ²` or `ρ` on `ℂ⁴`.
pub fn builtin_representation(name: &str) -> Result<PartialIsometryTuple, WitnessError> {
    match name {
        "pi" => Ok(PartialIsometryTuple {
            s: [
                ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]),
                ComplexMatrix::from_real_rows(&[&[0., -1.], &[0., 0.]]),
                ComplexMatrix::from_real_rows(&[&[0., 0.], &[1., 0.]]),
                ComplexMatrix::from_real_rows(&[&[0., 0.], &[-1., 0.]]),
            ],
        }),
        "rho" => {
            let c = std::f64::consts::SQRT_2 / 6.0;
            let m = |rows: [[f64; 4]; 4]| ComplexMatrix::from_fn(4, 4, |i, j| re(c * rows[i][j]));
            let tuple = PartialIsometryTuple {
                s: [
                    m([[0., 0., 0., 0.], [-3., -1., -1., -1.], [0., 2., 2., 2.], [3., -1., -1., -1.]]),
                    m([[-1., 3., -1., 1.], [0., 0., 0., 0.], [-1., -3., -1., 1.], [-2., 0., -2., 2.]]),
                    m([[2., -2., 0., 2.], [1., -1., 3., 1.], [0., 0., 0., 0.], [-1., 1., 3., -1.]]),
                    m([[-1., -1., 1., -3.], [2., 2., -2., 0.], [1., 1., -1., -3.], [0., 0., 0., 0.]]),
                ],
            };
            let factors = RhoFactors::builtin();
            let residual = factors.factorization_residual(&tuple).max(factors.orthonormality_residual());
            if residual > 1e-12 {
                return Err(WitnessError::BadParams(format!("rank-two factors of rho disagree by {residual:e}")));
            }
            Ok(tuple)
        }
        other => Err(WitnessError::UnknownName(other.to_owned())),
    }
}

/// Witness report for `𝒢_d` on `(M₂, τ)` against `𝒢'_d` on `ℂ⁴` built from
/// the named representation. `ρ` with `d ∈ {2, 3}` yields a failing report.
pub fn verify_m2_c4_isomorphism(d: u8, rep: &str, tol: f64) -> Result<AxiomReport, WitnessError> {
    check_degree(d)?;
    let tuple = builtin_representation(rep)?;
    let tracial = tracial_canonical(d.into())?;
    let classical = classical_graph(d)?;
    let w = witness_from_partial_isometries(&tuple, &classical, &tracial)?;
    verify_witness(&w, tol)
}
