//! Model file format (JSON, version 1).
//!
//! ```json
//! {
//!   "format": 1,
//!   "kind": "hmm",
//!   "states": ["1", "2", "3"],
//!   "transition": [[0.9, 0.1, 0.0], [0.0, 0.4, 0.6], [0.0, 0.6, 0.4]],
//!   "initial": [0.333333333333, 0.333333333333, 0.333333333334],
//!   "observation_map": ["a", "b", "a"]
//! }
//! ```
//!
//! `kind` is `"markov"` (no observation fields) or `"hmm"` (exactly one of
//! `emission` or `observation_map`). `observations` is required alongside
//! `emission` and optional alongside `observation_map`. Unknown fields are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    deterministic_observation, identity_observation, HiddenMarkovModel, MarkovChain, ObservationMap,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Markov,
    Hmm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: u32,
    pub kind: ModelKind,
    pub states: Vec<String>,
    pub transition: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observation_map: Option<Vec<String>>,
}

/// A validated model.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Markov(MarkovChain),
    Hidden(HiddenMarkovModel),
    Noiseless {
        chain: MarkovChain,
        map: ObservationMap,
    },
}

impl Model {
    pub fn chain(&self) -> &MarkovChain {
        match self {
            Model::Markov(c) => c,
            Model::Hidden(h) => h.chain(),
            Model::Noiseless { chain, .. } => chain,
        }
    }

    /// The model as an HMM (a visible chain observes itself).
    pub fn to_hmm(&self) -> Result<HiddenMarkovModel> {
        match self {
            Model::Markov(c) => Ok(identity_observation(c)),
            Model::Hidden(h) => Ok(h.clone()),
            Model::Noiseless { chain, map } => deterministic_observation(chain, map),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Markov(_) => ModelKind::Markov,
            _ => ModelKind::Hmm,
        }
    }
}

fn forbid<T>(field: &Option<T>, name: &str, kind: &str) -> Result<()> {
    if field.is_some() {
        return Err(Error::Format(format!(
            "field `{name}` is not allowed for kind \"{kind}\""
        )));
    }
    Ok(())
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model file serializes");
        s.push('\n');
        s
    }

    pub fn to_model(&self) -> Result<Model> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                self.format
            )));
        }
        let chain = MarkovChain::new(self.states.clone(), &self.transition, &self.initial)?;
        match self.kind {
            ModelKind::Markov => {
                forbid(&self.observations, "observations", "markov")?;
                forbid(&self.emission, "emission", "markov")?;
                forbid(&self.observation_map, "observation_map", "markov")?;
                Ok(Model::Markov(chain))
            }
            ModelKind::Hmm => match (&self.emission, &self.observation_map) {
                (Some(e), None) => {
                    let obs = self.observations.clone().ok_or_else(|| {
                        Error::Format("`observations` is required with `emission`".into())
                    })?;
                    Ok(Model::Hidden(HiddenMarkovModel::new(chain, obs, e)?))
                }
                (None, Some(m)) => {
                    if m.len() != self.states.len() {
                        return Err(Error::DimensionMismatch {
                            what: "observation_map",
                            expected: self.states.len(),
                            found: m.len(),
                        });
                    }
                    let map = match &self.observations {
                        Some(obs) => ObservationMap::with_alphabet(obs.clone(), m)?,
                        None => ObservationMap::from_labels(m),
                    };
                    Ok(Model::Noiseless { chain, map })
                }
                (Some(_), Some(_)) => Err(Error::Format(
                    "`emission` and `observation_map` are mutually exclusive".into(),
                )),
                (None, None) => Err(Error::Format(
                    "kind \"hmm\" needs `emission` or `observation_map`".into(),
                )),
            },
        }
    }

    pub fn from_model(model: &Model) -> Self {
        let chain = model.chain();
        let mut file = ModelFile {
            format: FORMAT_VERSION,
            kind: model.kind(),
            states: chain.states().to_vec(),
            transition: chain.transition().to_dense(),
            initial: chain.initial().to_vec(),
            observations: None,
            emission: None,
            observation_map: None,
        };
        match model {
            Model::Markov(_) => {}
            Model::Hidden(h) => {
                file.observations = Some(h.observations().to_vec());
                file.emission = Some(h.emission().to_dense());
            }
            Model::Noiseless { map, .. } => {
                file.observations = Some(map.labels().to_vec());
                file.observation_map = Some(
                    map.image()
                        .iter()
                        .map(|&z| map.labels()[z].clone())
                        .collect(),
                );
            }
        }
        file
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<Model> {
    ModelFile::parse(text)?.to_model()
}
