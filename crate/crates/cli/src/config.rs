//! The JSON run configuration. Every module precondition is validated before
//! any simulation starts, and seeds are mandatory: there is no wall-clock
//! default anywhere.

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use truncstable::geom::{BallShape, DomainSpec, Point, Shape};
use truncstable::process::{ProcessKind, ProcessSpec};
use truncstable::rngutil::scoped_substream;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub d: usize,
    pub alpha: f64,
    pub kind: ProcessKind,
    #[serde(default = "one")]
    pub truncation_radius: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ProcessConfig {
    fn default() -> Self {
        ProcessConfig {
            d: 2,
            alpha: 1.0,
            kind: ProcessKind::Truncated,
            truncation_radius: 1.0,
        }
    }
}

/// Domain selection: a named preset or an explicit shape with its declared
/// fatness characteristics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainConfig {
    Preset { preset: String },
    Explicit {
        shape: Shape,
        r_fat: f64,
        kappa: f64,
        label: String,
    },
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig::Preset {
            preset: "ball".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub dt: f64,
    pub eps: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig { dt: 1e-3, eps: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub n: usize,
    #[serde(default)]
    pub process: ProcessConfig,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub scheme: SchemeConfig,
    pub suites: Vec<String>,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub emit_samples: bool,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

pub fn preset_domain(name: &str, d: usize) -> anyhow::Result<DomainSpec> {
    let mk = |x: f64| {
        let mut p = Point::zeros(d);
        p.set(0, x);
        p
    };
    let dom = match name {
        "ball" => DomainSpec::new(
            Shape::Ball(BallShape::new(Point::zeros(d), 1.0)),
            "ball",
            0.9,
            0.5,
        ),
        "dumbbell-gap05" => DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![
                    BallShape::new(Point::zeros(d), 1.0),
                    BallShape::new(mk(2.5), 1.0),
                ],
            },
            "dumbbell-gap05",
            0.9,
            0.5,
        ),
        "dumbbell-gap2" => DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![
                    BallShape::new(Point::zeros(d), 1.0),
                    BallShape::new(mk(4.0), 1.0),
                ],
            },
            "dumbbell-gap2",
            0.9,
            0.5,
        ),
        "box" => {
            let mut minc = Point::zeros(d);
            let mut maxc = Point::zeros(d);
            for i in 0..d {
                minc.set(i, -0.5);
                maxc.set(i, 0.5);
            }
            DomainSpec::new(Shape::Box { min: minc, max: maxc }, "box", 0.4, 0.25)
        }
        "shell" => DomainSpec::new(
            Shape::BallMinusBall {
                outer: BallShape::new(Point::zeros(d), 1.0),
                inner: BallShape::new(Point::zeros(d), 0.25),
            },
            "shell",
            0.3,
            0.3,
        ),
        other => bail!("unknown domain preset '{other}'"),
    };
    dom.map_err(|e| anyhow!("{e}"))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn process_spec(&self) -> anyhow::Result<ProcessSpec> {
        ProcessSpec::new(
            self.process.d,
            self.process.alpha,
            self.process.kind,
            self.process.truncation_radius,
        )
        .map_err(|e| anyhow!("process: {e}"))
    }

    pub fn domain_spec(&self) -> anyhow::Result<DomainSpec> {
        match &self.domain {
            DomainConfig::Preset { preset } => preset_domain(preset, self.process.d),
            DomainConfig::Explicit {
                shape,
                r_fat,
                kappa,
                label,
            } => DomainSpec::new(shape.clone(), label.clone(), *r_fat, *kappa)
                .map_err(|e| anyhow!("domain: {e}")),
        }
    }

    /// Validate every module precondition before any simulation starts,
    /// including a quick certificate probe of the declared `(R, kappa)`.
    pub fn validate(&self) -> anyhow::Result<(ProcessSpec, DomainSpec)> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            );
        }
        if self.n == 0 {
            bail!("n: path count must be at least 1");
        }
        let spec = self.process_spec()?;
        let domain = self.domain_spec()?;
        if domain.dim() != spec.d {
            bail!(
                "domain dimension {} disagrees with process dimension {}",
                domain.dim(),
                spec.d
            );
        }
        truncstable::simulate::SchemeParams::new(&spec, self.scheme.dt, self.scheme.eps)
            .map_err(|e| anyhow!("scheme: {e}"))?;
        for s in &self.suites {
            if !crate::suites::SUITE_NAMES.contains(&s.as_str()) && s != "all" {
                bail!(
                    "suites: unknown suite '{s}' (known: {}, all)",
                    crate::suites::SUITE_NAMES.join(", ")
                );
            }
        }
        // quick certificate probe: a handful of boundary points
        let mut rng = scoped_substream(self.seed, "certificate-probe", 0);
        domain
            .certify(&mut rng, 5)
            .map_err(|e| anyhow!("certificate probe: {e}"))?;
        Ok((spec, domain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_roundtrip_is_field_identical() {
        let text = r#"{
            "schema_version": 1,
            "seed": 7,
            "n": 1000,
            "process": {"d": 2, "alpha": 1.0, "kind": "truncated", "truncation_radius": 1.0},
            "domain": {"preset": "ball"},
            "scheme": {"dt": 0.001, "eps": 0.05},
            "suites": ["harnack"],
            "out_dir": "out",
            "emit_samples": false
        }"#;
        let parsed: RunConfig = serde_json::from_str(text).unwrap();
        let serialized = serde_json::to_string(&parsed).unwrap();
        let reparsed: RunConfig = serde_json::from_str(&serialized).unwrap();
        assert_eq!(parsed, reparsed);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut cfg = RunConfig {
            schema_version: SCHEMA_VERSION,
            seed: 1,
            n: 100,
            process: ProcessConfig::default(),
            domain: DomainConfig::default(),
            scheme: SchemeConfig::default(),
            suites: vec!["harnack".into()],
            out_dir: "out".into(),
            emit_samples: false,
        };
        cfg.validate().unwrap();
        cfg.process.alpha = 2.5;
        assert!(cfg.validate().is_err());
        cfg.process.alpha = 1.0;
        cfg.suites = vec!["nope".into()];
        assert!(cfg.validate().is_err());
        cfg.suites = vec!["harnack".into()];
        cfg.schema_version = 99;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn explicit_domain_config_parses() {
        let text = r#"{
            "schema_version": 1, "seed": 3, "n": 10,
            "domain": {"shape": {"type": "ball", "center": [0.0, 0.0], "radius": 1.0},
                        "r_fat": 0.9, "kappa": 0.5, "label": "custom"},
            "suites": []
        }"#;
        let parsed: RunConfig = serde_json::from_str(text).unwrap();
        let dom = parsed.domain_spec().unwrap();
        assert_eq!(dom.label, "custom");
    }
}
