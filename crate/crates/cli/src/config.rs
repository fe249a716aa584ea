//! Run configuration: JSON config files, command-line overrides and the
//! resolved form recorded in every output header.

use std::path::{Path, PathBuf};

use optobessel::attractor::AttractorParams;
use optobessel::cycles::CycleParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Every parameter any subcommand reads. Absent keys take the subcommand's
/// default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ParamSet {
    /// Cavity decay rate kappa.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Laser detuning Delta (bare).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning: Option<f64>,
    /// Frequency pull per unit displacement G.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    /// Mechanical frequency (Omega_m, omega_m).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mech_freq: Option<f64>,
    /// Resonant intracavity photon number |alpha_max|^2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_photons: Option<f64>,
    /// Mechanical damping rate (Gamma_M, gamma).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mech_damping: Option<f64>,
    /// Mechanical damping in units of g0 E^2 / omega_m^2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_over_gamma0: Option<f64>,
    /// Mean mirror displacement xbar.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xbar: Option<f64>,
    /// Mirror oscillation amplitude A.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Stiffness scale of the force balance.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Single-photon coupling g0.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    /// Drive strength E.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drive: Option<f64>,
    /// Thermal occupation nbar.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nbar: Option<f64>,
    /// Kerr strength K; defaults to g0^2 / omega_m.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kerr: Option<f64>,
    /// Effective detuning Delta_eff; defaults to the bare detuning.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_eff: Option<f64>,
    /// Fluctuation detuning; defaults to Delta_eff.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_tilde_eff: Option<f64>,
    /// Oscillator amplitude r.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Lower end of the limit-cycle search.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    /// Upper end of the limit-cycle search.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    /// Stability-bound prefactor G |alpha_max|^2 / Omega_m.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability_coupling: Option<f64>,
    /// Use the near-resonance approximation where one exists.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<bool>,
    /// Solve the Kerr detuning at every amplitude.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamical: Option<bool>,
    /// Solve the force balance for xbar in each sweep cell.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_consistent: Option<bool>,
    /// Quantity compared by `asymptote`: force, power, drift or delta-eff.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantity: Option<String>,
    /// Validation suite name.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl ParamSet {
    /// `self` with every key set in `top` replaced.
    pub fn overlaid(mut self, top: &ParamSet) -> ParamSet {
        overlay!(
            self,
            top,
            kappa,
            detuning,
            coupling,
            mech_freq,
            max_photons,
            mech_damping,
            gamma_over_gamma0,
            xbar,
            amplitude,
            mass,
            g0,
            drive,
            nbar,
            kerr,
            delta_eff,
            delta_tilde_eff,
            r,
            r_min,
            r_max,
            stability_coupling,
            approx,
            dynamical,
            self_consistent,
            quantity,
            suite
        );
        self
    }

    pub fn attractor(&self) -> Result<AttractorParams, CliError> {
        let d = AttractorParams::default();
        let p = AttractorParams {
            cavity_decay: self.kappa.unwrap_or(d.cavity_decay),
            detuning: self.detuning.unwrap_or(d.detuning),
            coupling: self.coupling.unwrap_or(d.coupling),
            mech_freq: self.mech_freq.unwrap_or(d.mech_freq),
            max_photons: self.max_photons.unwrap_or(d.max_photons),
            mech_damping: self.mech_damping.unwrap_or(d.mech_damping),
            mean_position: self.xbar.unwrap_or(d.mean_position),
            amplitude: self.amplitude.unwrap_or(d.amplitude),
            mass: self.mass.unwrap_or(d.mass),
        };
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn cycle(&self) -> Result<CycleParams, CliError> {
        let d = CycleParams::default();
        let mech_freq = self.mech_freq.unwrap_or(d.mech_freq);
        let g0 = self.g0.unwrap_or(d.single_photon_coupling);
        let drive = self.drive.unwrap_or(d.drive);
        let eff = self.delta_eff.or(self.detuning).unwrap_or(d.eff_detuning);
        let damping = match (self.mech_damping, self.gamma_over_gamma0) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "mech_damping and gamma_over_gamma0 are mutually exclusive".into(),
                ))
            }
            (Some(g), None) => g,
            (None, Some(x)) => x * g0 * drive * drive / (mech_freq * mech_freq),
            (None, None) => d.mech_damping,
        };
        let p = CycleParams {
            mech_freq,
            cavity_decay: self.kappa.unwrap_or(d.cavity_decay),
            detuning: self.detuning.unwrap_or(eff),
            single_photon_coupling: g0,
            drive,
            mech_damping: damping,
            thermal_occupation: self.nbar.unwrap_or(d.thermal_occupation),
            kerr: self.kerr.unwrap_or(g0 * g0 / mech_freq),
            eff_detuning: eff,
            fluct_detuning: self.delta_tilde_eff.unwrap_or(eff),
        };
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    /// Parses `name:start:stop:count[:linear|log]`.
    pub fn parse(s: &str) -> Result<Axis, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(CliError::Config(format!(
                "grid axis `{s}` must be name:start:stop:count[:linear|log]"
            )));
        }
        let num = |v: &str, what: &str| {
            v.parse::<f64>()
                .map_err(|_| CliError::Config(format!("grid axis `{s}`: bad {what} `{v}`")))
        };
        let count = parts[3]
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("grid axis `{s}`: bad count `{}`", parts[3])))?;
        let spacing = match parts.get(4) {
            None | Some(&"linear") => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "grid axis `{s}`: unknown spacing `{other}`"
                )))
            }
        };
        let axis = Axis {
            name: parts[0].to_string(),
            start: num(parts[1], "start")?,
            stop: num(parts[2], "stop")?,
            count,
            spacing,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Config(format!(
                "grid axis `{}`: count must be >= 1",
                self.name
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Config(format!(
                "grid axis `{}`: endpoints must be finite",
                self.name
            )));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(CliError::Config(format!(
                "grid axis `{}`: log spacing needs positive endpoints",
                self.name
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Pass thresholds of the validation report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_eff: Option<f64>,
}

/// Contents of a `--config` file, and the resolved configuration echoed in
/// output headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default)]
    pub params: ParamSet,
    #[serde(default)]
    pub grid: Vec<Axis>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn empty() -> RunConfig {
        RunConfig {
            schema: SCHEMA_VERSION,
            mode: None,
            params: ParamSet::default(),
            grid: Vec::new(),
            output: OutputSpec::default(),
            tolerances: Tolerances::default(),
        }
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        match raw.get("schema").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => {
                return Err(CliError::Config(format!(
                    "config: unsupported schema {v}, expected {SCHEMA_VERSION}"
                )))
            }
            None => {
                return Err(CliError::Config(
                    "config: missing integer key `schema`".into(),
                ))
            }
        }
        let cfg: RunConfig =
            serde_json::from_value(raw).map_err(|e| CliError::Config(format!("config: {e}")))?;
        for axis in &cfg.grid {
            axis.validate()?;
        }
        Ok(cfg)
    }

    /// The axis named `name`, if any.
    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.grid.iter().find(|a| a.name == name)
    }

    /// Rejects grid axes the subcommand does not sweep.
    pub fn check_axes(&self, allowed: &[&str]) -> Result<(), CliError> {
        for a in &self.grid {
            if !allowed.contains(&a.name.as_str()) {
                return Err(CliError::Config(format!(
                    "grid axis `{}` is not swept by this subcommand (allowed: {})",
                    a.name,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }
}
