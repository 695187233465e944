use qgraph_core::atlas::canonical_distance;
use qgraph_core::*;

#[test]
fn tracial_search_finds_exactly_the_four_degrees() {
    let records = solve_m2(&plancherel_set(&[2]).unwrap(), &GridSpec::with_step(0.05), 1e-8).unwrap();
    let labels: Vec<Option<u8>> = records.iter().map(|r| r.label).collect();
    assert_eq!(labels, [Some(1), Some(2), Some(3), Some(4)]);
    for r in &records {
        let d = f64::from(r.label.unwrap());
        assert!(r.degree.is_some_and(|x| (x - d).abs() < 1e-9));
        assert!(r.residuals.all(&["schur_idempotent", "reflexive", "undirected"]));
    }
}

#[test]
fn powers_search_labels_match_canonical_matrices() {
    for q in [0.3, 0.5, 0.9] {
        let records = solve_m2(&powers_m2(q).unwrap(), &GridSpec::default(), 1e-8).unwrap();
        assert_eq!(records.len(), 4);
        for r in &records {
            assert!(canonical_distance(r) < 1e-7, "q={q} label={:?}", r.label);
        }
        assert!(records[0].regular && records[3].regular);
        assert!(!records[1].regular && !records[2].regular);
    }
}

#[test]
fn custom_bounds_must_match_the_ansatz() {
    let grid = GridSpec { step: 0.05, bounds: Some(vec![[0.0, 1.0]; 2]) };
    assert!(matches!(solve_m2(&powers_m2(0.5).unwrap(), &grid, 1e-8), Err(AtlasError::BadParams(_))));
    assert!(matches!(solve_m2(&plancherel_set(&[2]).unwrap(), &GridSpec::with_step(0.0), 1e-8), Err(AtlasError::BadParams(_))));
}
