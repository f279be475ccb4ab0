use std::fs;
use std::path::Path;

use fbm_records::experiments::{ExperimentConfig, SCHEMA_VERSION};
use fbm_records::{GeneratorId, HurstParameter};
use serde::{Deserialize, Serialize};

use crate::output::{CliError, Format};

/// A fully resolved job. Worker count is deliberately absent: it never affects results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "config", rename_all = "kebab-case")]
pub enum Job {
    Generate { hurst: HurstParameter, n: usize, seed: u64, generator: GeneratorId },
    Dim(ExperimentConfig),
    Sweep(ExperimentConfig),
    Argmax(ExperimentConfig),
    Survival(ExperimentConfig),
    Recprob(ExperimentConfig),
    Tail(ExperimentConfig),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Generate { .. } => "generate",
            Job::Dim(_) => "dim",
            Job::Sweep(_) => "sweep",
            Job::Argmax(_) => "argmax",
            Job::Survival(_) => "survival",
            Job::Recprob(_) => "recprob",
            Job::Tail(_) => "tail",
        }
    }

    pub fn master_seed(&self) -> u64 {
        match self {
            Job::Generate { seed, .. } => *seed,
            Job::Dim(c) | Job::Sweep(c) | Job::Argmax(c) | Job::Survival(c) | Job::Recprob(c) | Job::Tail(c) => {
                c.master_seed
            }
        }
    }

    /// Base names of the CSV and JSON data files.
    pub fn file_stems(&self) -> (&'static str, &'static str) {
        match self {
            Job::Generate { .. } => ("path", "path"),
            Job::Dim(_) => ("boxcount", "dim"),
            other => (other.name(), other.name()),
        }
    }
}

/// Everything needed to reproduce a run byte-for-byte; written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub version: String,
    #[serde(flatten)]
    pub job: Job,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Data files, relative to the manifest's directory.
    pub outputs: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunManifest {
    pub fn new(job: Job, format: Option<Format>) -> Self {
        let (csv, json) = job.file_stems();
        let mut outputs = Vec::new();
        if format != Some(Format::Json) {
            outputs.push(format!("{csv}.csv"));
        }
        if format != Some(Format::Csv) {
            outputs.push(format!("{json}.json"));
        }
        Self {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: job.master_seed(),
            job,
            format,
            outputs,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let manifest: RunManifest = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: not a run manifest: {e}", path.display())))?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "{}: schema version {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                manifest.schema_version
            )));
        }
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let cfg = ExperimentConfig::new(HurstParameter::new(0.3).unwrap(), 1 << 10, 50, 9).with_eps_exps(vec![2, 3, 4, 5]);
        for format in [None, Some(Format::Csv), Some(Format::Json)] {
            let m = RunManifest::new(Job::Argmax(cfg.clone()), format);
            let text = serde_json::to_string(&m).unwrap();
            assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
        }
    }

    #[test]
    fn outputs_follow_format() {
        let job = Job::Generate {
            hurst: HurstParameter::new(0.5).unwrap(),
            n: 8,
            seed: 1,
            generator: GeneratorId::CirculantEmbedding,
        };
        assert_eq!(RunManifest::new(job.clone(), None).outputs, ["path.csv", "path.json"]);
        assert_eq!(RunManifest::new(job.clone(), Some(Format::Csv)).outputs, ["path.csv"]);
        assert_eq!(RunManifest::new(job, Some(Format::Json)).outputs, ["path.json"]);
    }
}
