//! JSON schemas for quantum sets, graphs, witnesses and `SO_q(3)` generators.
//!
//! Floats are written with shortest round-trip formatting, so reading back
//! an emitted document reproduces every finite double exactly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::graph::QuantumGraph;
use crate::matrix::ComplexMatrix;
use crate::qaut::SOq3Generators;
use crate::quantum_set::{make_quantum_set, QuantumSet, DEFAULT_TOL};
use crate::witness::IsoWitness;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDto {
    pub n: usize,
    pub q_diag: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDto {
    pub blocks: Vec<BlockDto>,
}

impl SetDto {
    pub fn from_set(set: &QuantumSet) -> Self {
        let blocks = set.blocks().iter().zip(set.q_diag()).map(|(&n, q)| BlockDto { n, q_diag: q.clone() }).collect();
        Self { blocks }
    }

    pub fn to_set(&self) -> Result<QuantumSet, IoError> {
        let sizes: Vec<usize> = self.blocks.iter().map(|b| b.n).collect();
        let qs: Vec<Vec<f64>> = self.blocks.iter().map(|b| b.q_diag.clone()).collect();
        Ok(make_quantum_set(&sizes, &qs, DEFAULT_TOL)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDto {
    pub set: SetDto,
    pub adjacency: ComplexMatrix,
}

impl GraphDto {
    pub fn from_graph(g: &QuantumGraph) -> Self {
        Self { set: SetDto::from_set(&g.set), adjacency: g.adjacency.clone() }
    }

    /// Checks dimensions only; graph axioms are left to the caller.
    pub fn to_graph(&self) -> Result<QuantumGraph, IoError> {
        Ok(QuantumGraph::new(self.set.to_set()?, self.adjacency.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDto {
    pub k: usize,
    pub blocks: Vec<Vec<ComplexMatrix>>,
    pub source: GraphDto,
    pub target: GraphDto,
}

impl WitnessDto {
    pub fn from_witness(w: &IsoWitness) -> Self {
        Self {
            k: w.k,
            blocks: w.blocks.clone(),
            source: GraphDto::from_graph(&w.source),
            target: GraphDto::from_graph(&w.target),
        }
    }

    pub fn to_witness(&self) -> Result<IsoWitness, IoError> {
        Ok(IsoWitness::new(self.source.to_graph()?, self.target.to_graph()?, self.k, self.blocks.clone())?)
    }
}

pub fn parse_set(json: &str) -> Result<QuantumSet, IoError> {
    serde_json::from_str::<SetDto>(json)?.to_set()
}

pub fn parse_graph(json: &str) -> Result<QuantumGraph, IoError> {
    serde_json::from_str::<GraphDto>(json)?.to_graph()
}

pub fn parse_witness(json: &str) -> Result<IsoWitness, IoError> {
    serde_json::from_str::<WitnessDto>(json)?.to_witness()
}

pub fn parse_generators(json: &str) -> Result<SOq3Generators, IoError> {
    let g: SOq3Generators = serde_json::from_str(json)?;
    Ok(SOq3Generators::new(g.q, g.a, g.g, g.l)?)
}

pub fn from_json<T: DeserializeOwned>(json: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(json)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{nontracial_canonical, tracial_canonical};
    use crate::witness::{builtin_representation, classical_graph, witness_from_partial_isometries};
    use num_complex::Complex64;

    #[test]
    fn set_schema() {
        let set = parse_set(r#"{"blocks":[{"n":2,"q_diag":[0.8,0.2]}]}"#).unwrap();
        assert_eq!(set.blocks(), &[2]);
        assert!(matches!(parse_set(r#"{"blocks":[{"n":2}]}"#), Err(IoError::Json(_))));
        assert!(matches!(parse_set(r#"{"blocks":[{"n":2,"q_diag":[0.5,0.1]}]}"#), Err(IoError::Set(_))));
        assert!(matches!(parse_set(r#"{"blocks":[],"extra":1}"#), Err(IoError::Json(_))));
    }

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| Complex64::new(0.1 * i as f64 + 1e-300, (j as f64).sqrt() / 3.0));
        let back: ComplexMatrix = from_json(&to_json(&m)).unwrap();
        assert_eq!(back, m);
        assert!(from_json::<ComplexMatrix>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
    }

    #[test]
    fn graph_and_witness_round_trip() {
        let g = nontracial_canonical(0.3, 2).unwrap();
        let json = to_json(&GraphDto::from_graph(&g));
        let back = parse_graph(&json).unwrap();
        assert_eq!((back.set.q_diag(), &back.adjacency), (g.set.q_diag(), &g.adjacency));
        assert!((back.set.delta_sq() - g.set.delta_sq()).abs() < 1e-12);
        assert_eq!(to_json(&GraphDto::from_graph(&back)), json);
        let w = witness_from_partial_isometries(
            &builtin_representation("rho").unwrap(),
            &classical_graph(4).unwrap(),
            &tracial_canonical(4).unwrap(),
        )
        .unwrap();
        assert_eq!(parse_witness(&to_json(&WitnessDto::from_witness(&w))).unwrap(), w);
    }

    #[test]
    fn generators_schema() {
        let g = SOq3Generators::scalar(0.5, Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(parse_generators(&to_json(&g)).unwrap(), g);
        let bad = to_json(&SOq3Generators { q: 2.0, ..g });
        assert!(matches!(parse_generators(&bad), Err(IoError::Witness(_))));
    }
}
