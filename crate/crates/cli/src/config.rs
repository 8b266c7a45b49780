//! Run configuration: a TOML file with a `[theory]` section and optional
//! `[check]` and `[basis]` sections. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use qgv_core::symmetry::GroupKind;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub theory: Theory,
    pub seed: Option<u64>,
    /// Output directory, relative to the working directory.
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub check: CheckSection,
    pub basis: Option<BasisSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Theory {
    Free(FreeTheory),
    Lattice(LatticeTheory),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeField {
    Scalar,
    ChargedScalar,
    Maxwell,
    FeynmanPhoton,
    Spinor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    #[default]
    Standard,
    SignFlipped,
    TimeReflected,
    ConstantShift,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeTheory {
    pub field: FreeField,
    pub mass: Option<f64>,
    #[serde(default)]
    pub variant: VariantName,
    /// Constant added to the kernel by the `constant_shift` variant.
    pub shift: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupName {
    U1,
    Su2,
    Su3,
}

impl From<GroupName> for GroupKind {
    fn from(g: GroupName) -> Self {
        match g {
            GroupName::U1 => GroupKind::U1,
            GroupName::Su2 => GroupKind::SU2,
            GroupName::Su3 => GroupKind::SU3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartName {
    #[default]
    Hot,
    Cold,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeTheory {
    pub group: GroupName,
    pub dims: Vec<usize>,
    pub beta: f64,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    pub configs: usize,
    /// Fixed thermalization length; adaptive when absent.
    pub thermalization: Option<usize>,
    #[serde(default = "one")]
    pub sweeps_per_config: usize,
    #[serde(default)]
    pub start: StartName,
    /// Read this ensemble instead of generating one.
    pub ensemble: Option<PathBuf>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    pub axioms: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    /// Gaussian test functions as `[t, x, y, z, width]`.
    pub tests: Vec<[f64; 5]>,
    /// Degree of the Schwinger functions entering the Gram; vectors carry at
    /// most `degree / 2` fields.
    #[serde(default = "two")]
    pub degree: usize,
    #[serde(default)]
    pub backend: BackendName,
    #[serde(default)]
    pub composites: bool,
}

fn two() -> usize {
    2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    #[default]
    Eigen,
    PivotedCholesky,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        match &self.theory {
            Theory::Free(f) => {
                let needs_mass = matches!(f.field, FreeField::Scalar | FreeField::ChargedScalar | FreeField::Spinor);
                match (needs_mass, f.mass) {
                    (true, None) => return bad("missing field `mass`"),
                    (true, Some(m)) if !(m > 0.0 && m.is_finite()) => return bad("`mass` must be positive"),
                    (false, Some(_)) => return bad("`mass` is not used by this field"),
                    _ => {}
                }
                if f.variant != VariantName::Standard && f.field != FreeField::Scalar {
                    return bad("`variant` applies to the scalar field only");
                }
                match (f.variant, f.shift) {
                    (VariantName::ConstantShift, None) => return bad("missing field `shift`"),
                    (VariantName::ConstantShift, Some(_)) | (_, None) => {}
                    (_, Some(_)) => return bad("`shift` needs variant = \"constant_shift\""),
                }
            }
            Theory::Lattice(l) => {
                if l.kappa.is_some() != l.lambda.is_some() {
                    return bad("`kappa` and `lambda` must be given together");
                }
                if l.dims.is_empty() || l.configs == 0 || l.sweeps_per_config == 0 {
                    return bad("`dims`, `configs` and `sweeps_per_config` must be non-empty and positive");
                }
            }
        }
        if let Some(b) = &self.basis {
            if b.tests.is_empty() {
                return bad("`basis.tests` is empty");
            }
            if b.degree == 0 || b.degree % 2 == 1 {
                return bad("`basis.degree` must be even and positive");
            }
        }
        Ok(())
    }

    pub fn out_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf).or_else(|| self.out.clone()).unwrap_or_else(|| PathBuf::from("qgv-out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FREE: &str = "[theory]\nkind = \"free\"\nfield = \"scalar\"\nmass = 1.0\n";

    #[test]
    fn parses_a_free_theory() {
        let cfg = RunConfig::parse(FREE).unwrap();
        assert!(matches!(cfg.theory, Theory::Free(FreeTheory { field: FreeField::Scalar, .. })));
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = RunConfig::parse(&format!("{FREE}colour = 3\n")).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err = RunConfig::parse("seed = 1\nfrobnicate = true\n[theory]\nkind = \"free\"\nfield = \"maxwell\"\n").unwrap_err();
        assert!(err.to_string().contains("frobnicate"), "{err}");
    }

    #[test]
    fn names_missing_keys() {
        let err = RunConfig::parse("[theory]\nkind = \"lattice\"\ngroup = \"u1\"\nbeta = 1.0\nconfigs = 4\n").unwrap_err();
        assert!(err.to_string().contains("dims"), "{err}");
        let err = RunConfig::parse("[theory]\nkind = \"free\"\nfield = \"scalar\"\n").unwrap_err();
        assert!(err.to_string().contains("mass"), "{err}");
    }

    #[test]
    fn shift_requires_its_variant() {
        assert!(RunConfig::parse(&format!("{FREE}variant = \"constant_shift\"\n")).is_err());
        assert!(RunConfig::parse(&format!("{FREE}variant = \"constant_shift\"\nshift = 0.1\n")).is_ok());
        assert!(RunConfig::parse(&format!("{FREE}shift = 0.1\n")).is_err());
    }
}
