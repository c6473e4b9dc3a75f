//! JSON state documents.
//!
//! `{"version": "v1", "d": 3, "n": 1, "V": [[1, 0]], "w": [0, 0]}`. The
//! version field may be omitted on input. Output lists V in Howell order
//! with every entry reduced.

use serde::{Deserialize, Serialize};

use crate::epistemic::{EpistemicState, PhaseSpace};
use crate::error::{Error, Result};
use crate::zmod::{ModVector, Submodule};

pub const VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    #[serde(default = "default_version")]
    pub version: String,
    pub d: u64,
    pub n: usize,
    #[serde(rename = "V")]
    pub known: Vec<Vec<i64>>,
    pub w: Vec<i64>,
}

fn default_version() -> String {
    VERSION.to_string()
}

impl StateDocument {
    pub fn from_state(state: &EpistemicState) -> StateDocument {
        let to_i64 = |v: &ModVector| v.entries().iter().map(|&e| e as i64).collect();
        StateDocument {
            version: VERSION.to_string(),
            d: state.space().d(),
            n: state.space().n(),
            known: state.known().rows().iter().map(to_i64).collect(),
            w: to_i64(state.shift()),
        }
    }

    pub fn to_state(&self) -> Result<EpistemicState> {
        if self.version != VERSION {
            return Err(Error::Document(format!("unsupported version {:?}", self.version)));
        }
        let space = PhaseSpace::new(self.d, self.n)?;
        let check_len = |len: usize| {
            if len == space.dim() {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: len,
                })
            }
        };
        let mut rows = Vec::with_capacity(self.known.len());
        for r in &self.known {
            check_len(r.len())?;
            rows.push(ModVector::new(self.d, r.iter().copied())?);
        }
        check_len(self.w.len())?;
        let known = Submodule::howell_form(self.d, space.dim(), &rows)?;
        EpistemicState::new(space, known, ModVector::new(self.d, self.w.iter().copied())?)
    }
}

pub fn read_state(text: &str) -> Result<EpistemicState> {
    let doc: StateDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_state()
}

pub fn write_state(state: &EpistemicState) -> String {
    serde_json::to_string(&StateDocument::from_state(state)).expect("documents serialize")
}
