//! JSON model files.
//!
//! Bodies:
//!
//! ```json
//! {"type": "polytope", "halfspaces": [{"a": [1, 0], "b": 1}, ...]}
//! {"type": "ellipsoid", "Q": [[1, 0], [0, 4]], "center": [0, 0]}
//! {"type": "smooth", "kind": "superellipse", "params": {"semi_axes": [1, 1], "exponent": 4}}
//! ```
//!
//! Models wrap a body: `{"model": "elliptictube", "body": {...}}`. The
//! fixtures `{"model": "counter-field", "field": "sum-of-squares", "dim": 2}`
//! and `{"model": "counter-field", "field": "corrupted", "weight": 0.1,
//! "base": {...}}` exist so that the verifiers can be seen to fail.

use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::convex::{ConvexBody, Ellipsoid, Gauge, Halfspace, Polytope, RealVector};
use crate::error::{Error, Result};
use crate::levi::CounterField;
use crate::models::Model;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyFile {
    Polytope {
        halfspaces: Vec<HalfspaceFile>,
    },
    Ellipsoid {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Smooth {
        kind: String,
        params: SuperellipseParams,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct HalfspaceFile {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SuperellipseParams {
    pub semi_axes: Vec<f64>,
    pub exponent: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelFile {
    Strip1d,
    Disc1d,
    Striptube {
        body: BodyFile,
    },
    Elliptictube {
        body: BodyFile,
    },
    #[serde(rename = "counter-field")]
    CounterField(CounterFile),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "field", rename_all = "kebab-case")]
pub enum CounterFile {
    SumOfSquares { dim: usize },
    Corrupted { weight: f64, base: Box<ModelFile> },
}

/// What a model file describes: a catalog model or a counter-test field.
#[derive(Debug, Clone)]
pub enum Subject {
    Model(Model),
    Counter(CounterField),
}

impl Subject {
    pub fn name(&self) -> String {
        match self {
            Subject::Model(m) => m.name().to_string(),
            Subject::Counter(c) => crate::levi::ScalarField::label(c),
        }
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Subject::Model(m) => Some(m),
            Subject::Counter(_) => None,
        }
    }
}

impl BodyFile {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodyFile::Polytope { halfspaces } => {
                let hs = halfspaces
                    .iter()
                    .map(|h| Halfspace::new(RealVector::from_vec(h.a.clone()), h.b))
                    .collect();
                Ok(Polytope::new(hs)?.into())
            }
            BodyFile::Ellipsoid { q, center } => {
                let n = q.len();
                if n == 0 || q.iter().any(|row| row.len() != n) {
                    return Err(Error::Config("Q must be a non-empty square matrix".into()));
                }
                let shape = DMatrix::from_row_iterator(n, n, q.iter().flatten().copied());
                let center = match center {
                    Some(c) => RealVector::from_vec(c.clone()),
                    None => RealVector::zeros(n),
                };
                Ok(Ellipsoid::new(shape, center)?.into())
            }
            BodyFile::Smooth { kind, params } => match kind.as_str() {
                "superellipse" => ConvexBody::superellipse(params.semi_axes.clone(), params.exponent),
                other => Err(Error::Config(format!("unknown smooth family {other:?}"))),
            },
        }
    }
}

impl ModelFile {
    pub fn build(&self) -> Result<Subject> {
        Ok(match self {
            ModelFile::Strip1d => Subject::Model(Model::Strip1D),
            ModelFile::Disc1d => Subject::Model(Model::Disc1D),
            ModelFile::Striptube { body } => Subject::Model(Model::StripTube(Gauge::new(body.build()?)?)),
            ModelFile::Elliptictube { body } => Subject::Model(Model::EllipticTube(body.build()?)),
            ModelFile::CounterField(CounterFile::SumOfSquares { dim }) => {
                if *dim == 0 {
                    return Err(Error::Config("dim must be positive".into()));
                }
                Subject::Counter(CounterField::SumOfSquares { dim: *dim })
            }
            ModelFile::CounterField(CounterFile::Corrupted { weight, base }) => {
                let Subject::Model(model) = base.build()? else {
                    return Err(Error::Config(
                        "the base of a corrupted field must be a model".into(),
                    ));
                };
                Subject::Counter(CounterField::Corrupted {
                    model,
                    weight: *weight,
                })
            }
        })
    }
}

pub fn parse_body(text: &str) -> Result<ConvexBody> {
    serde_json::from_str::<BodyFile>(text)
        .map_err(|e| Error::Config(e.to_string()))?
        .build()
}

pub fn parse_subject(text: &str) -> Result<Subject> {
    serde_json::from_str::<ModelFile>(text)
        .map_err(|e| Error::Config(e.to_string()))?
        .build()
}

pub fn load_subject(path: &Path) -> Result<Subject> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_subject(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_body_kind() {
        let square = parse_body(
            r#"{"type":"polytope","halfspaces":[{"a":[1,0],"b":1},{"a":[-1,0],"b":1},{"a":[0,1],"b":1},{"a":[0,-1],"b":1}]}"#,
        )
        .unwrap();
        assert_eq!((square.kind(), square.dim()), ("polytope", 2));
        let e = parse_body(r#"{"type":"ellipsoid","Q":[[1,0],[0,4]]}"#).unwrap();
        assert_eq!(e.kind(), "ellipsoid");
        let s = parse_body(
            r#"{"type":"smooth","kind":"superellipse","params":{"semi_axes":[1,2],"exponent":4}}"#,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn parses_models_and_fixtures() {
        let m = parse_subject(r#"{"model":"elliptictube","body":{"type":"ellipsoid","Q":[[1]]}}"#).unwrap();
        assert_eq!(m.name(), "elliptictube");
        assert!(matches!(
            parse_subject(r#"{"model":"strip1d"}"#).unwrap(),
            Subject::Model(Model::Strip1D)
        ));
        let c = parse_subject(r#"{"model":"counter-field","field":"sum-of-squares","dim":2}"#).unwrap();
        assert!(matches!(
            c,
            Subject::Counter(CounterField::SumOfSquares { dim: 2 })
        ));
        let c = parse_subject(
            r#"{"model":"counter-field","field":"corrupted","weight":0.1,"base":{"model":"disc1d"}}"#,
        )
        .unwrap();
        assert!(matches!(c, Subject::Counter(CounterField::Corrupted { .. })));
    }

    #[test]
    fn malformed_files_are_config_errors() {
        for bad in [
            "not json",
            r#"{"model":"torus"}"#,
            r#"{"model":"striptube"}"#,
            r#"{"model":"elliptictube","body":{"type":"ellipsoid","Q":[[1,0]]}}"#,
            r#"{"model":"elliptictube","body":{"type":"smooth","kind":"blob","params":{"semi_axes":[1],"exponent":2}}}"#,
        ] {
            assert!(matches!(parse_subject(bad), Err(Error::Config(_))), "{bad}");
        }
        // geometric problems surface as body errors
        let open = r#"{"model":"elliptictube","body":{"type":"polytope","halfspaces":[{"a":[1],"b":1}]}}"#;
        assert!(matches!(parse_subject(open), Err(Error::InvalidBody(_))));
    }
}
