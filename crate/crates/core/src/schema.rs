//! JSON document format for problem instances.
//!
//! ```json
//! {"R": [1, 2], "C": [2, 1], "K": {"kappa": 2}}
//! {"R": [1, 2], "C": [2, 1], "K": [[1, "inf"], [2, 0]]}
//! ```
//!
//! `K` is either a full cap matrix or `{"kappa": v}` for uniform caps, with
//! `"inf"` spelling the unbounded case. Writers emit the same schema, using
//! the `kappa` form whenever the caps are uniform.

use crate::tables::{BoundsMatrix, Cap, MarginPair};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapSpec {
    Num(u64),
    Word(String),
}

impl CapSpec {
    fn to_cap(&self) -> Result<Cap> {
        match self {
            CapSpec::Num(k) => Ok(Cap::Finite(*k)),
            CapSpec::Word(w) if w == "inf" => Ok(Cap::Unbounded),
            CapSpec::Word(w) => Err(Error::Parse(format!("bad cap {w:?}: expected integer or \"inf\""))),
        }
    }

    fn from_cap(cap: Cap) -> CapSpec {
        match cap {
            Cap::Finite(k) => CapSpec::Num(k),
            Cap::Unbounded => CapSpec::Word("inf".into()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Uniform { kappa: CapSpec },
    Matrix(Vec<Vec<CapSpec>>),
}

/// Wire form of a problem instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDoc {
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    #[serde(rename = "K")]
    pub k: KSpec,
}

impl TableDoc {
    pub fn parse(text: &str) -> Result<TableDoc> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_instance(&self) -> Result<(MarginPair, BoundsMatrix)> {
        let margins = MarginPair::new(self.r.clone(), self.c.clone())?;
        let bounds = match &self.k {
            KSpec::Uniform { kappa } => BoundsMatrix::uniform(margins.m(), margins.n(), kappa.to_cap()?),
            KSpec::Matrix(rows) => {
                let rows: Result<Vec<Vec<Cap>>> =
                    rows.iter().map(|r| r.iter().map(CapSpec::to_cap).collect()).collect();
                BoundsMatrix::from_rows(rows?)?
            }
        };
        if !bounds.matches(&margins) {
            return Err(Error::Parse(format!(
                "K is {}x{} but margins are {}x{}",
                bounds.m(),
                bounds.n(),
                margins.m(),
                margins.n()
            )));
        }
        Ok((margins, bounds))
    }

    pub fn from_instance(margins: &MarginPair, bounds: &BoundsMatrix) -> TableDoc {
        let k = match bounds.uniform_cap() {
            Some(cap) => KSpec::Uniform { kappa: CapSpec::from_cap(cap) },
            None => KSpec::Matrix(
                (0..bounds.m())
                    .map(|i| (0..bounds.n()).map(|j| CapSpec::from_cap(bounds.get(i, j))).collect())
                    .collect(),
            ),
        };
        TableDoc { r: margins.r().to_vec(), c: margins.c().to_vec(), k }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("doc serializes")
    }
}

/// Parse an instance straight from JSON text.
pub fn read_instance(text: &str) -> Result<(MarginPair, BoundsMatrix)> {
    TableDoc::parse(text)?.to_instance()
}

/// Emit an instance as JSON text.
pub fn write_instance(margins: &MarginPair, bounds: &BoundsMatrix) -> String {
    TableDoc::from_instance(margins, bounds).to_json()
}
