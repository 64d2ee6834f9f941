//! Experiment configuration: a TOML file with top-level family fields,
//! shared `[policy]` and `[output]` tables, and one table per subcommand.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use mvbv_core::sequences::FamilyDescriptor;
use mvbv_core::synthesis::PlanPolicy;
use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckMvbv,
    Kernels,
    Converge,
    Rate,
    Modulus,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckMvbv => "check-mvbv",
            Command::Kernels => "kernels",
            Command::Converge => "converge",
            Command::Rate => "rate",
            Command::Modulus => "modulus",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nref_ratio: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_ratio: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// JSON summary.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Directory receiving `<command>.csv` and `<command>.json`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvbvSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<GridSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_lower_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_per_panel: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<GridSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    /// Derivative order; when set, `ψ` comes from the modulus of `f^(r)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSection {
    /// Partial-sum order whose reference samples are shifted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub policy: PolicySection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputSection,
    #[serde(default, rename = "check-mvbv", skip_serializing_if = "is_default")]
    pub check_mvbv: MvbvSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub kernels: KernelsSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub converge: ConvergeSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub rate: RateSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub modulus: ModulusSection,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_owned(),
            source: e,
        })?;
        Self::from_toml(&text)
    }

    pub fn descriptor(&self) -> Result<FamilyDescriptor, HarnessError> {
        let id = self.family.as_deref().ok_or_else(|| {
            HarnessError::Config("no family given (use --family or `family = ...`)".into())
        })?;
        let mut desc = FamilyDescriptor::new(id);
        desc.params = self.params.clone();
        desc.coeffs = self.coeffs.clone();
        Ok(desc)
    }

    pub fn plan_policy(&self) -> PlanPolicy {
        let mut p = PlanPolicy::default();
        if let Some(mu) = self.policy.mu {
            p.mu = mu;
        }
        if let Some(r) = self.policy.nref_ratio {
            p.nref_ratio = r;
        }
        if let Some(r) = self.policy.m_ratio {
            p.m_ratio = r;
        }
        p
    }
}
