//! Scenario files: TOML, or JSON when the file ends in `.json`.
//!
//! ```toml
//! protocol = "method1"
//!
//! [addressing]
//! delta_mhz = 4.0
//! omega_scale = 0.73
//! ```
//!
//! Frequencies are ordinary frequencies in MHz, times in µs unless the field
//! name says `_ns`, lengths in µm.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use orir_core::addressing::{
    microwave_echo_schedule, microwave_echo_schedule_with_rabi, AddressingParams, EchoTiming, Protocol,
    DEFAULT_RYDBERG_LIFETIME, METHOD1_RABI_RATIO, METHOD2_RABI_RATIO,
};
use orir_core::gate::{GateParams, GateScheme};
use orir_core::orir::{DriveKind, OrirDriveSpec};
use orir_core::units::{mhz, ns};
use orir_core::{EdgeShape, IntegratorConfig, PulseEdge};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::figures::{DEFAULT_EDGE, FIG7_SIGMAS_NS, MICROWAVE_KAPPA, NONTARGET_SCALE};
use crate::output::Artifacts;
use crate::scenarios::{self, AddressingRun, BeamChoice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    OrirTwoLevel,
    Method1,
    Method2,
    Method2Microwave,
    GateStep2,
    GateSweep,
    GateTiming,
    Geometry,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::OrirTwoLevel => "orir-two-level",
            ScenarioKind::Method1 => "method1",
            ScenarioKind::Method2 => "method2",
            ScenarioKind::Method2Microwave => "method2-microwave",
            ScenarioKind::GateStep2 => "gate-step2",
            ScenarioKind::GateSweep => "gate-sweep",
            ScenarioKind::GateTiming => "gate-timing",
            ScenarioKind::Geometry => "geometry",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub sample_interval_us: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrirSection {
    pub kind: DriveKind,
    pub delta_mhz: Option<f64>,
    pub omega_over_delta: Option<f64>,
    /// Defaults to π/Δ.
    pub duration_us: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddressingSection {
    pub delta_mhz: Option<f64>,
    /// Defaults to π/4 (Method I) or 1.2247 (Method II).
    pub omega_over_delta: Option<f64>,
    /// Rabi scale of the nontarget atoms.
    pub omega_scale: Option<f64>,
    pub t_mu_us: Option<f64>,
    pub stage2_phase: Option<f64>,
    pub tau_us: Option<f64>,
    pub kappa: Option<f64>,
    /// Without it the microwave fills the whole echo window.
    pub omega_mu_mhz: Option<f64>,
    pub timing: Option<EchoTiming>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSection {
    pub scheme: Option<GateScheme>,
    pub omega_mhz: Option<f64>,
    pub v0_over_omega: Option<f64>,
    pub v_over_v0: Option<f64>,
    pub duration_us: Option<f64>,
    pub ramp_ns: Option<f64>,
    pub edge: Option<EdgeShape>,
    pub interval: Option<[f64; 2]>,
    pub points: Option<usize>,
    pub sigma_ns: Option<Vec<f64>>,
    pub t_star_ns: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub lattice_constant_um: Option<f64>,
    pub wavelength_um: Option<f64>,
    pub r_perp0_um: Option<f64>,
    pub beam_direction: Option<[i32; 3]>,
    pub waist_um: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub protocol: ScenarioKind,
    /// Output directory; the `--out` flag and `ORIR_OUT_DIR` take precedence.
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub integrator: IntegratorSection,
    pub orir: Option<OrirSection>,
    pub addressing: Option<AddressingSection>,
    pub gate: Option<GateSection>,
    pub geometry: Option<GeometrySection>,
}

fn require<T: Copy>(v: Option<T>, field: &str, kind: ScenarioKind) -> Result<T> {
    v.ok_or_else(|| CliError::validation(format!("`{field}` is required for protocol {}", kind.name())))
}

fn positive(v: f64, field: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(format!("`{field}` must be finite and > 0, got {v}")))
    }
}

fn section<'a, T>(s: &'a Option<T>, name: &str, kind: ScenarioKind) -> Result<&'a T> {
    s.as_ref()
        .ok_or_else(|| CliError::validation(format!("section [{name}] is required for protocol {}", kind.name())))
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        let cfg: Self = parsed.map_err(|msg| CliError::Parse {
            path: path.to_path_buf(),
            msg,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The integrator settings, starting from `base`.
    pub fn integrator(&self, base: IntegratorConfig) -> Result<IntegratorConfig> {
        let s = &self.integrator;
        let rtol = s.rtol.map_or(Ok(base.rtol), |v| positive(v, "integrator.rtol"))?;
        let atol = s.atol.map_or(Ok(base.atol), |v| positive(v, "integrator.atol"))?;
        let mut cfg = base.with_tolerances(rtol, atol);
        if let Some(dt) = s.sample_interval_us {
            cfg = cfg.with_sample_interval(positive(dt, "integrator.sample_interval_us")?);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that the protocol's parameters are present and sane without
    /// running anything.
    pub fn validate(&self) -> Result<()> {
        self.integrator(IntegratorConfig::default())?;
        match self.protocol {
            ScenarioKind::OrirTwoLevel => self.orir_spec().map(|_| ()),
            ScenarioKind::Method1 | ScenarioKind::Method2 | ScenarioKind::Method2Microwave => {
                self.addressing_run().map(|_| ())
            }
            ScenarioKind::GateStep2 | ScenarioKind::GateSweep | ScenarioKind::GateTiming => {
                self.gate_params().map(|_| ())
            }
            ScenarioKind::Geometry => self.geometry_inputs().map(|_| ()),
        }
    }

    fn orir_spec(&self) -> Result<(OrirDriveSpec, f64)> {
        let k = self.protocol;
        let s = section(&self.orir, "orir", k)?;
        let delta = mhz(positive(require(s.delta_mhz, "orir.delta_mhz", k)?, "orir.delta_mhz")?);
        let ratio = require(s.omega_over_delta, "orir.omega_over_delta", k)?;
        let spec = OrirDriveSpec::new(ratio * delta, delta, s.kind);
        spec.validate()?;
        let duration = positive(s.duration_us.unwrap_or(PI / delta), "orir.duration_us")?;
        Ok((spec, duration))
    }

    fn addressing_run(&self) -> Result<AddressingRun> {
        let k = self.protocol;
        let s = section(&self.addressing, "addressing", k)?;
        let delta = mhz(positive(require(s.delta_mhz, "addressing.delta_mhz", k)?, "addressing.delta_mhz")?);
        let (protocol, mut params, ratio) = match k {
            ScenarioKind::Method1 => (Protocol::Method1, AddressingParams::method1(delta), METHOD1_RABI_RATIO),
            ScenarioKind::Method2 => (Protocol::Method2, AddressingParams::method2(delta), METHOD2_RABI_RATIO),
            _ => (Protocol::Method2Microwave, AddressingParams::method2(delta), METHOD2_RABI_RATIO),
        };
        params.omega = s.omega_over_delta.unwrap_or(ratio) * delta;
        params.tau = positive(s.tau_us.unwrap_or(DEFAULT_RYDBERG_LIFETIME), "addressing.tau_us")?;
        if let Some(t) = s.t_mu_us {
            params.t_mu = t;
        }
        params.stage2_phase = s.stage2_phase;
        params.validate(protocol)?;
        let scale = s.omega_scale.unwrap_or(NONTARGET_SCALE);
        if !(0.0..=1.0).contains(&scale) {
            return Err(CliError::validation(format!("`addressing.omega_scale` must lie in [0, 1], got {scale}")));
        }
        let microwave = if protocol == Protocol::Method2Microwave {
            let kappa = s.kappa.unwrap_or(MICROWAVE_KAPPA);
            let sched = match s.omega_mu_mhz {
                Some(om) => microwave_echo_schedule_with_rabi(
                    kappa,
                    delta,
                    mhz(positive(om, "addressing.omega_mu_mhz")?),
                    s.timing.unwrap_or_default(),
                )?,
                None => microwave_echo_schedule(kappa, delta)?,
            };
            Some(sched)
        } else {
            None
        };
        Ok(AddressingRun {
            protocol,
            params,
            scale,
            microwave,
        })
    }

    fn gate_params(&self) -> Result<(GateParams, PulseEdge, &GateSection)> {
        let k = self.protocol;
        let s = section(&self.gate, "gate", k)?;
        let omega = mhz(positive(require(s.omega_mhz, "gate.omega_mhz", k)?, "gate.omega_mhz")?);
        let v0 = positive(s.v0_over_omega.unwrap_or(12.0), "gate.v0_over_omega")? * omega;
        let v = positive(s.v_over_v0.unwrap_or(1.0), "gate.v_over_v0")? * v0;
        let default_scheme = if k == ScenarioKind::GateStep2 { None } else { Some(GateScheme::Orir) };
        let scheme = match s.scheme.or(default_scheme) {
            Some(x) => x,
            None => require(s.scheme, "gate.scheme", k)?,
        };
        let mut params = GateParams::new(scheme, omega, v0, v);
        if let Some(t) = s.duration_us {
            params = params.with_duration(positive(t, "gate.duration_us")?);
        }
        params.validate()?;
        let ramp = s.ramp_ns.unwrap_or(if k == ScenarioKind::GateTiming { 20.0 } else { 0.0 });
        let edge = PulseEdge::ramps_ns(ramp, s.edge.unwrap_or(DEFAULT_EDGE))?;
        if let Some(sig) = &s.sigma_ns {
            if sig.is_empty() {
                return Err(CliError::validation("`gate.sigma_ns` must not be empty"));
            }
            for &x in sig {
                positive(x, "gate.sigma_ns")?;
            }
        }
        if k == ScenarioKind::GateSweep && s.points.is_some_and(|n| n < 2) {
            return Err(CliError::validation("`gate.points` must be >= 2"));
        }
        Ok((params, edge, s))
    }

    fn geometry_inputs(&self) -> Result<(f64, f64, Option<f64>, Option<BeamChoice>)> {
        let k = self.protocol;
        let s = section(&self.geometry, "geometry", k)?;
        let c = positive(require(s.lattice_constant_um, "geometry.lattice_constant_um", k)?, "geometry.lattice_constant_um")?;
        let lambda = positive(require(s.wavelength_um, "geometry.wavelength_um", k)?, "geometry.wavelength_um")?;
        let beam = match (s.beam_direction, s.waist_um) {
            (Some(direction), Some(w)) => Some(BeamChoice {
                direction,
                waist: positive(w, "geometry.waist_um")?,
            }),
            (None, None) => None,
            _ => {
                return Err(CliError::validation(
                    "`geometry.beam_direction` and `geometry.waist_um` must be given together",
                ))
            }
        };
        Ok((c, lambda, s.r_perp0_um, beam))
    }

    pub fn run(&self, base: IntegratorConfig) -> Result<Artifacts> {
        let cfg = self.integrator(base)?;
        let name = self.protocol.name();
        match self.protocol {
            ScenarioKind::OrirTwoLevel => {
                let (spec, duration) = self.orir_spec()?;
                scenarios::two_level(name, &spec, duration, &cfg)
            }
            ScenarioKind::Method1 | ScenarioKind::Method2 | ScenarioKind::Method2Microwave => {
                scenarios::addressing(name, &self.addressing_run()?, &cfg)
            }
            ScenarioKind::GateStep2 => {
                let (params, edge, _) = self.gate_params()?;
                scenarios::gate_step2(name, &params, edge, &cfg)
            }
            ScenarioKind::GateSweep => {
                let (params, edge, s) = self.gate_params()?;
                let [lo, hi] = s.interval.unwrap_or([-0.25, 0.25]);
                scenarios::gate_sweep(name, params.omega, params.v0, (lo, hi), s.points.unwrap_or(201), edge, &cfg)
            }
            ScenarioKind::GateTiming => {
                let (params, edge, s) = self.gate_params()?;
                let sigmas: Vec<f64> = s.sigma_ns.clone().unwrap_or(FIG7_SIGMAS_NS.to_vec()).into_iter().map(ns).collect();
                scenarios::gate_timing(name, &params, edge, &sigmas, s.t_star_ns.map(ns), &cfg)
            }
            ScenarioKind::Geometry => {
                let (c, lambda, r0, beam) = self.geometry_inputs()?;
                scenarios::geometry(name, c, lambda, r0, beam, &cfg)
            }
        }
    }
}
