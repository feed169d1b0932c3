//! Built-in fixtures and input loading.

use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::complex::{ComplexError, ComplexSpec, LatticeComplex};
use crate::geometry::{pyramid, GeometryError, Polytope, PolytopeSpec};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        const FIXTURES: &[(&str, &str)] = &[$(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*];
    };
}

fixtures!(
    "segment",
    "segment-1-2",
    "segment-1-3",
    "simplex-1",
    "simplex-2",
    "simplex-3",
    "unit-square",
    "unit-cube",
    "reflexive-square",
    "reflexive-cube",
    "triangle-2",
    "reeve-2",
    "reeve-3",
    "coarsen-triangle",
);

/// Name of the sphere `∂ pyr [0,2]`, built rather than read.
pub const PYRAMID_SPHERE: &str = "pyramid-sphere";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown fixture {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// A parsed input file: either a single polytope or an explicit complex.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Polytope(PolytopeSpec),
    Complex(ComplexSpec),
}

#[derive(Clone, Debug)]
pub enum Input {
    Polytope(PolytopeSpec, Polytope),
    Complex(Arc<LatticeComplex>),
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Polytope(s, _) => &s.name,
            Input::Complex(c) => c.name(),
        }
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match self {
            Input::Polytope(_, p) => Some(p),
            Input::Complex(_) => None,
        }
    }

    /// `(P, ∂P)` for a polytope, or the complex with its boundary as given.
    pub fn pair(&self) -> Arc<LatticeComplex> {
        match self {
            Input::Polytope(_, p) => Arc::new(LatticeComplex::from_polytope(p, true)),
            Input::Complex(c) => c.clone(),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, InputError> {
    if text.trim().is_empty() {
        return Err(InputError::Parse { line: 1, column: 0, message: "empty input".into() });
    }
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("points").is_some() {
        let spec: ComplexSpec = serde_json::from_value(value).map_err(|e| parse_at(text, e))?;
        return Ok(Input::Complex(Arc::new(LatticeComplex::from_spec(&spec)?)));
    }
    let spec: PolytopeSpec = serde_json::from_value(value).map_err(|e| parse_at(text, e))?;
    let p = spec.build()?;
    Ok(Input::Polytope(spec, p))
}

// Values carry no position; re-parse the text as the typed record to recover one.
fn parse_at(text: &str, e: serde_json::Error) -> InputError {
    match serde_json::from_str::<InputSpec>(text) {
        Err(typed) if typed.line() > 0 => typed.into(),
        _ => InputError::Parse { line: 1, column: 0, message: e.to_string() },
    }
}

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n).chain(std::iter::once(PYRAMID_SPHERE))
}

pub fn fixture(name: &str) -> Result<Input, InputError> {
    if name == PYRAMID_SPHERE {
        return Ok(Input::Complex(Arc::new(pyramid_sphere())));
    }
    let (_, text) = FIXTURES.iter().find(|(n, _)| *n == name).ok_or_else(|| InputError::Unknown(name.into()))?;
    parse_input(text)
}

/// `∂ pyr [0,2]` as a lattice sphere without boundary.
pub fn pyramid_sphere() -> LatticeComplex {
    let seg = Polytope::new("segment", vec![vec![0], vec![2]]).expect("segment");
    LatticeComplex::boundary_complex(&pyramid(&seg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for name in fixture_names() {
            let input = fixture(name).unwrap();
            assert_eq!(input.name(), if name == PYRAMID_SPHERE { input.name() } else { name });
        }
        assert!(matches!(fixture("nope"), Err(InputError::Unknown(_))));
    }

    #[test]
    fn parse_errors_have_positions() {
        assert!(matches!(parse_input(""), Err(InputError::Parse { .. })));
        match parse_input("{\"name\": \"x\",\n \"vertices\": [[0], [1]\n") {
            Err(InputError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_input("{\"name\": \"x\",\n \"vertices\": 4}") {
            Err(InputError::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complex_input() {
        let text = r#"{"points": {"a": [0], "b": [1], "c": [2]},
                       "cells": [{"vertices": ["a", "b"]}, {"vertices": ["b", "c"]}]}"#;
        let Input::Complex(c) = parse_input(text).unwrap() else { panic!() };
        assert_eq!(c.cells().len(), 2);
        assert!(!c.has_boundary());
    }
}
