//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qgraph-core --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use qgraph_core::atlas::{
    canonical_distance, conjugation_unitary, nontracial_spectrum, tracial_spectrum, ConjugationKind, TracialFamilyParams,
};
use qgraph_core::graph::{choi_cp_check, schur_residual, transpose_map};
use qgraph_core::qaut::{commutator_norm, sample_so3_points, torus_automorphism};
use qgraph_core::structure::StructureMaps;
use qgraph_core::witness::{witness_passes, RhoFactors};
use qgraph_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNDIRECTED_FLAGS: [&str; 6] = ["schur_idempotent", "reflexive", "self_adjoint", "real", "self_transpose", "undirected"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::from(x)).collect()
}

fn roots8() -> Vec<Complex64> {
    (0..8).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0)).collect()
}

fn p_grid() -> Vec<f64> {
    (0..=10).map(|k| 1.0 + k as f64 / 10.0).collect()
}

fn set_corpus() -> Vec<(String, QuantumSet)> {
    let mut v = vec![
        ("C^4".to_owned(), plancherel_set(&[1, 1, 1, 1]).unwrap()),
        ("M2".to_owned(), plancherel_set(&[2]).unwrap()),
        ("M2+C".to_owned(), plancherel_set(&[2, 1]).unwrap()),
    ];
    v.extend([0.3, 0.5, 0.9, 1.0].map(|q| (format!("powers({q})"), powers_m2(q).unwrap())));
    v
}

fn structure_identities() -> Outcome {
    let names = [
        "specialty", "associativity", "unit_left", "unit_right", "counit_left", "counit_right", "snake_left",
        "snake_right", "frobenius_left", "frobenius_right",
    ];
    let mut worst = 0.0f64;
    let mut ok = true;
    for (_, set) in set_corpus() {
        let r = verify_set_axioms(&set, 1e-10);
        ok &= r.all(&names);
        worst = worst.max(names.iter().map(|n| r.residual(n)).fold(0.0, f64::max));
    }
    outcome(ok && worst < 1e-10, format!("max residual {worst:.2e} over 7 sets"))
}

fn tracial_classification() -> Outcome {
    let mut ok = true;
    let mut worst_spec = 0.0f64;
    for d in 1..=4 {
        let g = tracial_canonical(d).unwrap();
        ok &= graph_axiom_report(&g, 1e-9).all(&UNDIRECTED_FLAGS);
        let dist = spectrum_distance(&spectrum(&g).unwrap(), &reals(&tracial_spectrum(d as u8).unwrap()));
        worst_spec = worst_spec.max(dist);
    }
    ok &= worst_spec < 1e-7;

    let mut members = 0;
    let mut worst_conj = 0.0f64;
    let mut worst_compl = 0.0f64;
    for d in [2u8, 3] {
        for &p in &p_grid() {
            let base = tracial_family(TracialFamilyParams::new(d, p, Complex64::from(1.0))).unwrap().adjacency;
            for &theta in &roots8() {
                let g = tracial_family(TracialFamilyParams::new(d, p, theta)).unwrap();
                let reg = regularity(&g, 1e-9);
                let degree_ok = reg.degree.is_some_and(|x| (x - f64::from(d)).abs() < 1e-9);
                let x = g.adjacency[(0, 3)].re;
                ok &= graph_axiom_report(&g, 1e-9).all(&UNDIRECTED_FLAGS) && degree_ok && (p + x - f64::from(d)).abs() < 1e-12;
                members += 1;

                let u = conjugation_unitary(ConjugationKind::UTheta(theta)).unwrap();
                worst_conj = worst_conj.max(u.adjoint().matmul(&base).matmul(&u).max_abs_diff(&g.adjacency));

                let compl = reflexive_complement(&g, 1e-9).unwrap();
                let expect = tracial_family(TracialFamilyParams::new(5 - d, 3.0 - p, -theta)).unwrap();
                worst_compl = worst_compl.max(compl.adjacency.max_abs_diff(&expect.adjacency));
            }
        }
    }
    let a3_11 = tracial_family(TracialFamilyParams::new(3, 1.0, Complex64::from(1.0))).unwrap().adjacency;
    for &p in &p_grid() {
        let v = conjugation_unitary(ConjugationKind::VP(p)).unwrap();
        let a3 = tracial_family(TracialFamilyParams::new(3, p, Complex64::from(1.0))).unwrap().adjacency;
        worst_conj = worst_conj.max(v.adjoint().matmul(&a3).matmul(&v).max_abs_diff(&a3_11));
    }
    ok &= worst_conj < 1e-9 && worst_compl < 1e-9 && members == 176;
    outcome(
        ok,
        format!("spectra {worst_spec:.1e}, {members} family members, conjugation {worst_conj:.1e}, complement {worst_compl:.1e}"),
    )
}

fn nontracial_classification() -> Outcome {
    let mut ok = true;
    let mut worst_spec = 0.0f64;
    let mut solver_worst = 0.0f64;
    for q in [0.3, 0.5, 0.9] {
        let delta = q + 1.0 / q;
        for label in 1..=4u8 {
            let g = nontracial_canonical(q, label.into()).unwrap();
            ok &= graph_axiom_report(&g, 1e-9).all(&UNDIRECTED_FLAGS);
            let expect = match label {
                1 => vec![1., 1., 1., 1.],
                2 => vec![delta / q, q * delta, 0., 0.],
                3 => vec![1. + delta, 1., 1., 1. - delta],
                _ => vec![delta * delta, 0., 0., 0.],
            };
            let table = nontracial_spectrum(q, label).unwrap();
            worst_spec = worst_spec
                .max(spectrum_distance(&spectrum(&g).unwrap(), &reals(&expect)))
                .max(spectrum_distance(&reals(&table), &reals(&expect)));
            let reg = regularity(&g, 1e-9);
            ok &= match label {
                1 => reg.degree.is_some_and(|d| (d - 1.0).abs() < 1e-9),
                4 => reg.degree.is_some_and(|d| (d - delta * delta).abs() < 1e-9),
                _ => !reg.regular,
            };
        }
        let records = solve_m2(&powers_m2(q).unwrap(), &GridSpec::with_step(0.05), 1e-8).unwrap();
        let labels: Vec<Option<u8>> = records.iter().map(|r| r.label).collect();
        ok &= labels == [Some(1), Some(2), Some(3), Some(4)];
        solver_worst = records.iter().map(canonical_distance).fold(solver_worst, f64::max);
    }
    ok &= worst_spec < 1e-7 && solver_worst < 1e-7;
    outcome(ok, format!("spectra {worst_spec:.1e}, solver found 4 classes per q, max distance {solver_worst:.1e}"))
}

fn bigalois_representations() -> Outcome {
    let pi = builtin_representation("pi").unwrap();
    let pi_max = [1, 2]
        .iter()
        .flat_map(|&d| bigalois_relation_residuals(&pi, d).unwrap().into_values())
        .fold(0.0, f64::max);
    let rho = builtin_representation("rho").unwrap();
    let rho_max = bigalois_relation_residuals(&rho, 1).unwrap().into_values().fold(0.0, f64::max);
    let ortho = RhoFactors::builtin().orthonormality_residual();
    let extra = bigalois_relation_residuals(&rho, 2).unwrap()["s1_plus_s2"];
    outcome(
        pi_max == 0.0 && rho_max < 1e-12 && ortho < 1e-12 && extra >= 0.5,
        format!("pi {pi_max:.1e}, rho {rho_max:.1e}, rho factors {ortho:.1e}, rho S1+S2 {extra:.3}"),
    )
}

fn quantum_isomorphisms() -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    for (rep, degrees) in [("pi", vec![1u8, 2, 3, 4]), ("rho", vec![1, 4])] {
        for d in degrees {
            let r = verify_m2_c4_isomorphism(d, rep, 1e-9).unwrap();
            ok &= witness_passes(&r);
            worst = worst.max(witness::WITNESS_CONDITIONS.iter().map(|n| r.residual(n)).fold(0.0, f64::max));
        }
    }
    outcome(ok && worst < 1e-9, format!("6 witnesses, max residual {worst:.1e}"))
}

/// `x ↦ τ(x)·a` for a non-self-adjoint idempotent `a`, scaled to be Schur idempotent.
fn non_real_schur_idempotent(set: &QuantumSet) -> ComplexMatrix {
    let a = [Complex64::from(1.0), Complex64::from(1.0), Complex64::from(0.0), Complex64::from(0.0)];
    let coords = set.coordinates(&[ComplexMatrix::from_vec(2, 2, a.to_vec()).unwrap()]);
    let counit = &set.maps().counit_vec;
    let f = ComplexMatrix::from_fn(4, 4, |i, j| coords[i] * counit[j]);
    let ff = qgraph_core::graph::schur_product(set, &f, &f).unwrap();
    let (i, j) = (0..16).map(|k| (k / 4, k % 4)).max_by(|x, y| f[*x].norm().total_cmp(&f[*y].norm())).unwrap();
    f.scale(f[(i, j)] / ff[(i, j)])
}

fn real_iff_cp() -> Outcome {
    let mut graphs: Vec<QuantumGraph> = (1..=4).map(|d| tracial_canonical(d).unwrap()).collect();
    for q in [0.3, 0.5, 0.9] {
        graphs.extend((1..=4).map(|l| nontracial_canonical(q, l).unwrap()));
    }
    for d in [2u8, 3] {
        for &p in &p_grid() {
            graphs.extend(roots8().into_iter().map(|t| tracial_family(TracialFamilyParams::new(d, p, t)).unwrap()));
        }
    }
    let mut min_real = f64::INFINITY;
    let mut ok = true;
    for g in &graphs {
        let choi = choi_cp_check(g, 1e-10).unwrap();
        min_real = min_real.min(choi.min_eigenvalue);
        ok &= choi.cp && choi.min_eigenvalue > -1e-10;
    }

    let tracial = plancherel_set(&[2]).unwrap();
    let transpose = QuantumGraph::new(tracial.clone(), transpose_map(&tracial)).unwrap();
    let t_choi = choi_cp_check(&transpose, 1e-10).unwrap();
    let t_report = graph_axiom_report(&transpose, 1e-9);
    ok &= !t_choi.cp && (t_choi.min_eigenvalue + 1.0).abs() < 1e-10;

    let mut tests: Vec<QuantumGraph> = graphs.clone();
    tests.push(QuantumGraph::new(tracial.clone(), non_real_schur_idempotent(&tracial)).unwrap());
    tests.push(transpose.clone());
    let mut agree = 0;
    let mut checked = 0;
    let mut non_real_seen = false;
    for g in &tests {
        let r = graph_axiom_report(g, 1e-9);
        if !r.flag("schur_idempotent") {
            continue;
        }
        checked += 1;
        non_real_seen |= !r.flag("real");
        if r.flag("real") == choi_cp_check(g, 1e-10).unwrap().cp {
            agree += 1;
        }
    }
    ok &= agree == checked && non_real_seen;
    outcome(
        ok,
        format!(
            "{} real graphs CP (min eigenvalue {min_real:.1e}); transpose Choi min {:.3} non-CP, real={}, Schur residual {:.2}; real<=>CP on {agree}/{checked} Schur-idempotent maps",
            graphs.len(),
            t_choi.min_eigenvalue,
            t_report.flag("real"),
            schur_residual(&transpose)
        ),
    )
}

fn automorphism_points() -> Outcome {
    let g1 = tracial_canonical(1).unwrap();
    let g2 = tracial_canonical(2).unwrap();
    let g4 = tracial_canonical(4).unwrap();
    let mut ok = true;
    let mut min_comm = f64::INFINITY;
    for p in sample_so3_points(0, 100) {
        let u = so3_point_matrix(&p, 1e-12).unwrap();
        ok &= u.unitarity_residual() < 1e-9;
        for g in [&g1, &g4] {
            ok &= witness_passes(&verify_classical_automorphism(&u, g, 1e-9).unwrap());
        }
        if p.r.norm() >= 0.1 {
            let c = commutator_norm(&u, &g2);
            min_comm = min_comm.min(c);
            ok &= c > 0.01 && !witness_passes(&verify_classical_automorphism(&u, &g2, 1e-9).unwrap());
        }
    }
    for phase in [0.0, 0.7, 2.0, 4.4] {
        for swap in [false, true] {
            let u = so3_point_matrix(&SO3Point::from_polar(0.0, 0.0, phase, swap).unwrap(), 1e-12).unwrap();
            ok &= witness_passes(&verify_classical_automorphism(&u, &g2, 1e-9).unwrap());
        }
    }
    let mut torus = 0;
    for q in [0.3, 0.5, 0.9] {
        for n in 0..16 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * n as f64 / 16.0);
            ok &= torus_automorphism(z, q, 1e-9).unwrap().all_flags();
            torus += 1;
        }
    }
    let podles = soq3_relation_residuals(&SOq3Generators::scalar(0.5, Complex64::from_polar(1.0, 0.9)).unwrap())
        .into_values()
        .fold(0.0, f64::max);
    ok &= podles < 1e-15;
    outcome(
        ok,
        format!("100 SO(3) points, min commutator at |r|>=0.1 {min_comm:.3}, {torus} torus points, Podles residual {podles:.1e}"),
    )
}

fn oracle_cross_checks() -> Outcome {
    let routes = set_corpus()
        .iter()
        .map(|(_, s)| StructureMaps::closed_form(s).max_diff(&StructureMaps::explicit(s)))
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rand_matrix = |n: usize| ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let c4 = plancherel_set(&[1, 1, 1, 1]).unwrap();
    let mut schur = 0.0f64;
    for _ in 0..50 {
        let (f, g) = (rand_matrix(4), rand_matrix(4));
        let entrywise = ComplexMatrix::from_fn(4, 4, |i, j| f[(i, j)] * g[(i, j)]);
        schur = schur.max(qgraph_core::graph::schur_product(&c4, &f, &g).unwrap().max_abs_diff(&entrywise));
    }
    let mut transpose = 0.0f64;
    for n in 1..=6 {
        let a = rand_matrix(n);
        let g = QuantumGraph::new(plancherel_set(&vec![1; n]).unwrap(), a.clone()).unwrap();
        transpose = transpose.max(graph_transpose(&g).unwrap().max_abs_diff(&a.transpose()));
    }
    outcome(
        routes < 1e-12 && schur < 1e-10 && transpose < 1e-12,
        format!("routes {routes:.1e}, Schur vs entrywise {schur:.1e}, transpose {transpose:.1e}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("structure identities", structure_identities),
        ("tracial classification", tracial_classification),
        ("nontracial classification", nontracial_classification),
        ("bigalois representations", bigalois_representations),
        ("quantum isomorphisms", quantum_isomorphisms),
        ("real iff CP on M2", real_iff_cp),
        ("automorphism points", automorphism_points),
        ("oracle cross-checks", oracle_cross_checks),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} ({:.2}s)", i + 1, out.detail, t.elapsed().as_secs_f64());
        if !out.pass {
            failed.push(i + 1);
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!("acceptance: {}/8 passed in {total:.2}s", 8 - failed.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(total < 30.0, "suite took {total:.1}s");
}
