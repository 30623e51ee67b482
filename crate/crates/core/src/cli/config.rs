use super::Failure;
use crate::duality::{map_curved, map_euclidean, DualPair};
use crate::models::{
    CoulombLike, EuclideanCoulomb, EuclideanOscillator, Family, ModelSpec, NonlinearOscillator,
    PdmOrdering, QuantumNumbers,
};
use crate::oracle::Picture;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Osc,
    Coulomb,
    Nlo,
    Clike,
    PdmOsc,
    PdmCoulomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PictureFlag {
    Weighted,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every setting of a run. Flags override values loaded with `--config`.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Subcommand name; only meaningful in a config file, where it must match.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    /// JSON file with settings (same names as the flags).
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    /// Oscillator dimension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Coulomb dimension.
    #[arg(long = "D")]
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub dim: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Coulomb coupling.
    #[arg(long = "Q", allow_negative_numbers = true)]
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Oscillator angular number.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    /// Coulomb angular number (half-integers allowed).
    #[arg(long = "L")]
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub big_l: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_r: Option<u32>,
    /// Largest n = 2 n_r + l (oscillators) or nu = n_r + L (Coulomb problems).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    /// Number of lowest states to verify.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// bd, mm or vonroos:xi,eta,zeta.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picture: Option<PictureFlag>,
    /// Oracle grid sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grids: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Keep only normalizable states.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub bound_only: bool,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

pub(crate) fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub(crate) fn model_error(e: crate::Error) -> Failure {
    Failure::Usage(e.to_string())
}

impl RunConfig {
    /// Fill unset flags from the `--config` file, then check the file's command name.
    pub(crate) fn merged(self, command: &str) -> Result<Self, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: RunConfig = serde_json::from_str(&text)
            .map_err(|e| usage(format!("bad config {}: {e}", path.display())))?;
        if let Some(c) = &file.command {
            if c != command {
                return Err(usage(format!("config is for command {c:?}, not {command:?}")));
            }
        }
        Ok(RunConfig {
            command: Some(command.to_string()),
            config: None,
            model: self.model.or(file.model),
            d: self.d.or(file.d),
            dim: self.dim.or(file.dim),
            lambda: self.lambda.or(file.lambda),
            beta: self.beta.or(file.beta),
            omega: self.omega.or(file.omega),
            q: self.q.or(file.q),
            l: self.l.or(file.l),
            big_l: self.big_l.or(file.big_l),
            n_r: self.n_r.or(file.n_r),
            n_max: self.n_max.or(file.n_max),
            k: self.k.or(file.k),
            ordering: self.ordering.or(file.ordering),
            picture: self.picture.or(file.picture),
            grids: self.grids.or(file.grids),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            bound_only: self.bound_only || file.bound_only,
            x_min: self.x_min.or(file.x_min),
            x_max: self.x_max.or(file.x_max),
            points: self.points.or(file.points),
        })
    }

    /// Reject settings that `command` does not read.
    pub(crate) fn check_unused(&self, command: &str, allowed: &[&str]) -> Result<(), Failure> {
        let set = [
            ("n-r", self.n_r.is_some()),
            ("n-max", self.n_max.is_some()),
            ("k", self.k.is_some()),
            ("ordering", self.ordering.is_some()),
            ("picture", self.picture.is_some()),
            ("grids", self.grids.is_some()),
            ("bound-only", self.bound_only),
            ("x-min", self.x_min.is_some()),
            ("x-max", self.x_max.is_some()),
            ("points", self.points.is_some()),
        ];
        match set.iter().find(|(name, on)| *on && !allowed.contains(name)) {
            Some((name, _)) => Err(usage(format!("--{name} is not used by {command}"))),
            None => Ok(()),
        }
    }

    pub(crate) fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    fn require<T: Copy>(value: Option<T>, flag: &str, model: ModelKind) -> Result<T, Failure> {
        value.ok_or_else(|| usage(format!("model {} needs --{flag}", model_name(model))))
    }

    pub(crate) fn model_kind(&self) -> Result<ModelKind, Failure> {
        self.model.ok_or_else(|| usage("--model is required"))
    }

    /// Build the model, rejecting parameters that belong to a different model.
    pub(crate) fn model(&self) -> Result<ModelSpec, Failure> {
        let kind = self.model_kind()?;
        let oscillator = matches!(kind, ModelKind::Osc | ModelKind::Nlo | ModelKind::PdmOsc);
        let curved = !matches!(kind, ModelKind::Osc | ModelKind::Coulomb);
        let stray = [
            ("d", self.d.is_some() && !oscillator),
            ("l", self.l.is_some() && !oscillator),
            ("D", self.dim.is_some() && oscillator),
            ("L", self.big_l.is_some() && oscillator),
            ("Q", self.q.is_some() && oscillator),
            ("omega", self.omega.is_some() && kind != ModelKind::Osc),
            ("beta", self.beta.is_some() && !(oscillator && curved)),
            ("lambda", self.lambda.is_some() && !curved),
        ];
        if let Some((flag, _)) = stray.iter().find(|s| s.1) {
            return Err(usage(format!("--{flag} does not apply to model {}", model_name(kind))));
        }
        let spec = match kind {
            ModelKind::Osc => EuclideanOscillator::new(
                Self::require(self.d, "d", kind)?,
                Self::require(self.omega, "omega", kind)?,
            )
            .map(ModelSpec::Oscillator),
            ModelKind::Coulomb => EuclideanCoulomb::new(
                Self::require(self.dim, "D", kind)?,
                Self::require(self.q, "Q", kind)?,
            )
            .map(ModelSpec::Coulomb),
            ModelKind::Nlo | ModelKind::PdmOsc => NonlinearOscillator::new(
                Self::require(self.d, "d", kind)?,
                Self::require(self.lambda, "lambda", kind)?,
                Self::require(self.beta, "beta", kind)?,
            )
            .map(|m| if kind == ModelKind::Nlo { ModelSpec::Nonlinear(m) } else { ModelSpec::PdmOscillator(m) }),
            ModelKind::Clike | ModelKind::PdmCoulomb => CoulombLike::new(
                Self::require(self.dim, "D", kind)?,
                Self::require(self.lambda, "lambda", kind)?,
                Self::require(self.q, "Q", kind)?,
            )
            .map(|m| if kind == ModelKind::Clike { ModelSpec::CoulombLike(m) } else { ModelSpec::PdmCoulomb(m) }),
        };
        spec.map_err(model_error)
    }

    /// Angular number from `--l` or `--L`, if given.
    pub(crate) fn ang(&self) -> Result<Option<f64>, Failure> {
        match (self.l, self.big_l) {
            (Some(l), None) => Ok(Some(l as f64)),
            (None, Some(big_l)) => {
                QuantumNumbers::new(0, big_l).map_err(model_error)?;
                Ok(Some(big_l))
            }
            (None, None) => Ok(None),
            (Some(_), Some(_)) => Err(usage("give either --l or --L, not both")),
        }
    }

    pub(crate) fn ordering(&self, model: &ModelSpec) -> Result<Option<PdmOrdering>, Failure> {
        let Some(text) = &self.ordering else {
            return Ok(None);
        };
        if model.pdm().is_none() {
            return Err(usage(format!("--ordering applies only to pdm-osc and pdm-coulomb, not {}", model.name())));
        }
        text.parse().map(Some).map_err(model_error)
    }

    /// Oracle picture: an ordering selects the flat picture unless `--picture weighted`.
    pub(crate) fn picture(&self, model: &ModelSpec) -> Result<Picture, Failure> {
        let ordering = self.ordering(model)?;
        match (self.picture, ordering) {
            (Some(PictureFlag::Weighted), None) | (None, None) => Ok(Picture::Weighted),
            (Some(PictureFlag::Flat) | None, Some(o)) => Ok(Picture::PdmFlat(o)),
            (Some(PictureFlag::Flat), None) => Err(usage("--picture flat needs --ordering")),
            (Some(PictureFlag::Weighted), Some(_)) => {
                Err(usage("--ordering has no effect in the weighted picture"))
            }
        }
    }

    pub(crate) fn dual_pair(&self) -> Result<DualPair, Failure> {
        let kind = self.model_kind()?;
        let model = self.model()?;
        let l = self.l.unwrap_or(0);
        let n_r = self.n_r.unwrap_or(0);
        let pair = match model {
            ModelSpec::Oscillator(m) => map_euclidean(m.d(), l, m.omega(), n_r),
            ModelSpec::Nonlinear(m) => map_curved(m.d(), l, m.lambda(), m.beta(), n_r),
            _ => return Err(usage(format!("duality maps osc or nlo states, not {}", model_name(kind)))),
        };
        pair.map_err(model_error)
    }
}

pub(crate) fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Osc => "osc",
        ModelKind::Coulomb => "coulomb",
        ModelKind::Nlo => "nlo",
        ModelKind::Clike => "clike",
        ModelKind::PdmOsc => "pdm-osc",
        ModelKind::PdmCoulomb => "pdm-coulomb",
    }
}

pub(crate) fn is_oscillator(model: &ModelSpec) -> bool {
    model.family() == Family::Oscillator
}
