//! TOML run configuration. Every section is optional; the defaults give the
//! free-plus-gauge model Dirac system in signature (1,3) with `t₂`, the
//! identity tetrad and one active axis.

use crate::clifford::{Multivector, Parity, Signature};
use crate::error::{Error, Result};
use crate::genform::Tetrad;
use crate::models::{
    CovectorField, DiracModelSpec, EquippedSystemSpec, GenformField, HestenesModelSpec, Profile,
    TheoremTolerances,
};
use crate::solver::{Axis, Grid, StencilOrder};
use crate::spinor_ideals::{canonical, HermitianIdempotent, CANONICAL_NAMES};
use nalgebra::DMatrix;
use serde::Deserialize;
use std::path::Path;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub signature: SignatureConfig,
    pub tetrad: TetradConfig,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub initial: InitialConfig,
    pub dispersion: DispersionConfig,
    pub validate: ValidateConfig,
    pub tolerances: ToleranceConfig,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignatureConfig {
    pub r: usize,
    pub s: usize,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        Self { r: 1, s: 3 }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostConfig {
    pub axis: usize,
    pub rapidity: f64,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TetradConfig {
    /// Rows `y^μ_a`; identity when absent.
    pub rows: Option<Vec<Vec<f64>>>,
    pub boost: Option<BoostConfig>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Dirac,
    Hestenes,
    Equipped,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeEntry {
    /// Coordinate index `μ`, 1-based.
    pub mu: usize,
    pub value: String,
    #[serde(default = "constant_profile")]
    pub profile: Profile,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldEntry {
    pub value: String,
    #[serde(default = "constant_profile")]
    pub profile: Profile,
}

fn constant_profile() -> Profile {
    Profile::Constant
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub mass: f64,
    /// Canonical name (`t0`…`t4`) or a multivector literal.
    pub idempotent: String,
    pub gauge: Vec<GaugeEntry>,
    pub k: String,
    /// Parity of the unknown for `hestenes` (default even) and `equipped`
    /// (default: full algebra).
    pub parity: Option<Parity>,
    pub covector: Vec<f64>,
    pub covector_profile: Profile,
    pub terms: Vec<TermEntry>,
    pub source: Option<FieldEntry>,
}

impl ModelConfig {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModelKind::Dirac => "dirac",
            ModelKind::Hestenes => "hestenes",
            ModelKind::Equipped => "equipped",
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            kind: ModelKind::Dirac,
            mass: 1.0,
            idempotent: "t2".into(),
            gauge: Vec::new(),
            k: "-e^23".into(),
            parity: None,
            covector: Vec::new(),
            covector_profile: Profile::Constant,
            terms: Vec::new(),
            source: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub index: usize,
    pub points: usize,
    pub length: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub axes: Vec<AxisConfig>,
    pub cfl: f64,
    pub steps: usize,
    /// Explicit time step; otherwise the CFL limit (or `final_time / steps`
    /// rounded up to respect it).
    pub dt: Option<f64>,
    pub final_time: Option<f64>,
    pub order: u32,
    /// Write every `sample_every`-th slice (0: initial and final only).
    pub sample_every: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            axes: vec![AxisConfig {
                index: 2,
                points: 256,
                length: 1.0,
            }],
            cfl: 0.4,
            steps: 500,
            dt: None,
            final_time: None,
            order: 2,
            sample_every: 0,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    /// Multivector literal; `"t"` is the configured idempotent. Defaults to
    /// `t` for `dirac` and to `e` or `e^1` by parity otherwise.
    pub value: Option<String>,
    pub profile: Profile,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            value: None,
            profile: Profile::Gaussian {
                width: 0.05,
                center: None,
            },
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionPair {
    pub mass: f64,
    pub k: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseConfig {
    pub axis: usize,
    pub q: i64,
    pub length: f64,
    pub final_time: f64,
    pub levels: Vec<usize>,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            axis: 2,
            q: 1,
            length: 1.0,
            final_time: 0.25,
            levels: vec![128, 256, 512],
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionConfig {
    pub pairs: Vec<DispersionPair>,
    /// Extra pairs drawn from the seed, `m ∈ [0, max_mass]`,
    /// `k_i ∈ [−max_k, max_k]`.
    pub random_pairs: usize,
    pub max_mass: f64,
    pub max_k: f64,
    /// Time-domain refinement study; `None` skips it.
    pub phase: Option<PhaseConfig>,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            pairs: Vec::new(),
            random_pairs: 20,
            max_mass: 2.0,
            max_k: 3.0,
            phase: Some(PhaseConfig::default()),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    /// Normals `τ` for the boundary flux check; `(1,0,…,0)` when empty.
    pub normals: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub theorem: TheoremTolerances,
    pub dispersion: f64,
    pub min_order: f64,
    pub energy_drift: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            theorem: TheoremTolerances::default(),
            dispersion: 1e-10,
            min_order: 1.9,
            energy_drift: 1e-6,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn signature(&self) -> Result<Signature> {
        Signature::new(self.signature.r, self.signature.s).map_err(|e| config_err(e.to_string()))
    }

    pub fn multivector(&self, text: &str) -> Result<Multivector> {
        Multivector::parse(self.signature()?, text)
            .map_err(|e| config_err(format!("cannot parse multivector '{text}': {e}")))
    }

    pub fn tetrad(&self) -> Result<Tetrad> {
        let sig = self.signature()?;
        match (&self.tetrad.rows, &self.tetrad.boost) {
            (Some(_), Some(_)) => Err(config_err("tetrad: give either rows or boost, not both")),
            (Some(rows), None) => {
                let n = sig.dim();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(config_err(format!("tetrad rows must form a {n}x{n} matrix")));
                }
                Tetrad::new(sig, DMatrix::from_fn(n, n, |i, j| rows[i][j]))
            }
            (None, Some(b)) => Tetrad::boost(sig, b.axis, b.rapidity),
            (None, None) => Ok(Tetrad::identity(sig)),
        }
    }

    pub fn idempotent(&self) -> Result<HermitianIdempotent> {
        let sig = self.signature()?;
        let name = self.model.idempotent.trim();
        if CANONICAL_NAMES.contains(&name) {
            return canonical(sig, name).map_err(|e| config_err(e.to_string()));
        }
        HermitianIdempotent::new(self.multivector(name)?)
    }

    fn field(&self, value: &str, profile: &Profile) -> Result<GenformField> {
        Ok(GenformField {
            profile: profile.clone(),
            value: self.multivector(value)?,
        })
    }

    pub fn dirac_spec(&self) -> Result<DiracModelSpec> {
        let tetrad = self.tetrad()?;
        let n = tetrad.signature().dim();
        let mut gauge = Vec::new();
        if !self.model.gauge.is_empty() {
            gauge = vec![GenformField::zero(tetrad.signature()); n];
            for g in &self.model.gauge {
                if !(1..=n).contains(&g.mu) {
                    return Err(config_err(format!("gauge index mu = {} outside 1..={n}", g.mu)));
                }
                gauge[g.mu - 1] = self.field(&g.value, &g.profile)?;
            }
        }
        Ok(DiracModelSpec {
            tetrad,
            idempotent: self.idempotent()?,
            gauge,
            mass: self.model.mass,
        })
    }

    pub fn hestenes_spec(&self) -> Result<HestenesModelSpec> {
        let sig = self.signature()?;
        if sig.r() != 1 || sig.s() != 3 {
            return Err(config_err(format!("hestenes requires signature (1,3), got {sig}")));
        }
        let components = if self.model.covector.is_empty() {
            vec![0.0; 4]
        } else {
            self.model.covector.clone()
        };
        if components.len() != 4 {
            return Err(config_err("covector needs 4 components"));
        }
        Ok(HestenesModelSpec {
            tetrad: self.tetrad()?,
            covector: CovectorField {
                profile: self.model.covector_profile.clone(),
                components,
            },
            k: self.multivector(&self.model.k)?,
            mass: self.model.mass,
            parity: self.model.parity.unwrap_or(Parity::Even),
        })
    }

    pub fn equipped_spec(&self) -> Result<EquippedSystemSpec> {
        let sig = self.signature()?;
        let terms = self
            .model
            .terms
            .iter()
            .map(|t| Ok((self.multivector(&t.a)?, self.multivector(&t.b)?)))
            .collect::<Result<Vec<_>>>()?;
        let source = match &self.model.source {
            Some(f) => self.field(&f.value, &f.profile)?,
            None => GenformField::zero(sig),
        };
        Ok(EquippedSystemSpec {
            tetrad: self.tetrad()?,
            terms,
            source,
            parity: self.model.parity,
        })
    }

    /// Spatial grid without a time step.
    pub fn grid(&self) -> Result<Grid> {
        let n = self.signature()?.dim();
        let axes = self
            .grid
            .axes
            .iter()
            .map(|a| Axis {
                index: a.index,
                points: a.points,
                length: a.length,
            })
            .collect();
        if !(self.grid.cfl > 0.0 && self.grid.cfl.is_finite()) {
            return Err(config_err(format!("cfl must be positive, got {}", self.grid.cfl)));
        }
        let order = StencilOrder::from_order(self.grid.order).map_err(|e| config_err(e.to_string()))?;
        Ok(Grid::new(n, axes)
            .map_err(|e| config_err(e.to_string()))?
            .with_cfl(self.grid.cfl)
            .with_order(order))
    }

    pub fn initial(&self) -> Result<GenformField> {
        let default = match self.model.kind {
            ModelKind::Dirac => "t",
            _ => match self.model.parity {
                Some(Parity::Odd) => "e^1",
                _ => "e",
            },
        };
        let text = self.initial.value.as_deref().unwrap_or(default).trim();
        let value = if text == "t" {
            self.idempotent()?.element().clone()
        } else {
            self.multivector(text)?
        };
        Ok(GenformField {
            profile: self.initial.profile.clone(),
            value,
        })
    }

    pub fn seed(&self, cli: Option<u64>) -> u64 {
        cli.or(self.seed).unwrap_or(0)
    }
}
