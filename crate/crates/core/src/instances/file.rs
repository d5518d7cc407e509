//! JSON instance files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "family": "hypercube-walk",
//!   "params": {"n": 3, "d": null, "m": 2, "r": null, "seed": 7},
//!   "T": 1,
//!   "start": [1, 1, 1],
//!   "step_sequence": [0, 1],
//!   "endpoint": [2, 2, 2]
//! }
//! ```
//!
//! Vertices use 1-based coordinates. `step_sequence` holds flip coordinates
//! (`0..m`) for hypercubes and `+1`/`-1` for grid families. Readers replay
//! the steps and reject files whose `T`, `start` or `endpoint` disagree with
//! the replay, and files with any other `format_version`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Family, InstanceParams, Steps, WalkInstance};
use crate::{Error, Result, Vertex};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub family: Family,
    pub params: InstanceParams,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub start: Vertex,
    pub step_sequence: Vec<i64>,
    pub endpoint: Vertex,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        // Check the version before the full schema so that future files fail
        // with a version error rather than a field error.
        let raw: serde_json::Value = serde_json::from_str(text)?;
        match raw.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(FORMAT_VERSION) => {}
            Some(v) => {
                return Err(Error::InstanceFormat(format!(
                    "unsupported format_version {v}"
                )))
            }
            None => return Err(Error::InstanceFormat("missing format_version".into())),
        }
        Ok(serde_json::from_value(raw)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn into_instance(self) -> Result<WalkInstance> {
        let steps = match self.family {
            Family::HypercubeWalk => Steps::Flips(
                self.step_sequence
                    .iter()
                    .map(|&s| {
                        u32::try_from(s).map_err(|_| Error::InstanceFormat(format!("bad flip {s}")))
                    })
                    .collect::<Result<_>>()?,
            ),
            Family::GridWalk | Family::GridBlocks => Steps::Signs(
                self.step_sequence
                    .iter()
                    .map(|&s| match s {
                        1 => Ok(1),
                        -1 => Ok(-1),
                        other => Err(Error::InstanceFormat(format!("bad sign {other}"))),
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        let inst = WalkInstance::from_steps(self.family, self.params, steps)
            .map_err(|e| Error::InstanceFormat(format!("replay failed: {e}")))?;
        if inst.horizon() != self.horizon {
            return Err(Error::InstanceFormat(format!(
                "T = {} but replay gives {}",
                self.horizon,
                inst.horizon()
            )));
        }
        if inst.start() != &self.start {
            return Err(Error::InstanceFormat(format!(
                "start {} but replay gives {}",
                self.start,
                inst.start()
            )));
        }
        if inst.endpoint() != self.endpoint {
            return Err(Error::InstanceFormat(format!(
                "endpoint {} but replay gives {}",
                self.endpoint,
                inst.endpoint()
            )));
        }
        Ok(inst)
    }
}

impl WalkInstance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            format_version: FORMAT_VERSION,
            family: self.family,
            params: self.params.clone(),
            horizon: self.horizon,
            start: self.start.clone(),
            step_sequence: self.steps.to_values(),
            endpoint: self.endpoint(),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_file().to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        InstanceFile::from_json(&fs::read_to_string(path)?)?.into_instance()
    }
}
