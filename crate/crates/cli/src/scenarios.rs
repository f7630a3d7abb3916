//! Parameterized runs shared by the figure commands and config scenarios.

use std::f64::consts::PI;

use orir_core::addressing::{
    method1_sequence, method2_microwave_sequence, method2_sequence, simulate_role, AddressingParams,
    AddressingSequence, AtomRole, EchoReport, MicrowaveEchoParams, Protocol,
};
use orir_core::gate::{
    blockade_sweep, leakage_trajectory, optimize_duration, step2_leakages, timing_error_average, GateParams,
    GateScheme, TimingOffsets,
};
use orir_core::geometry::{
    distance_bound, max_addressable_lattice, rabi_scale, rayleigh_length, BeamSpec, LatticeSpec,
};
use orir_core::orir::{analytic_amplitudes, simulate_orir, single_detuned_ceiling, DriveKind, OrirDriveSpec};
use orir_core::units::{to_mhz, to_ns};
use orir_core::{IntegratorConfig, PulseEdge};
use serde_json::json;

use crate::error::{CliError, Result};
use crate::output::{Artifacts, Table};
use crate::report::MetricsReport;

/// Number of intervals in fixed-grid trajectory tables.
pub const TABLE_INTERVALS: usize = 400;

pub fn two_level(name: &str, spec: &OrirDriveSpec, duration: f64, cfg: &IntegratorConfig) -> Result<Artifacts> {
    spec.validate()?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(CliError::validation(format!("duration must be > 0, got {duration}")));
    }
    let traj = simulate_orir(spec, duration, &cfg.with_sample_interval(duration / TABLE_INTERVALS as f64))?;
    let (pg, pe) = (traj.populations("g")?, traj.populations("e")?);
    let mut table = Table::new(name, &["t_us", "t_norm", "pop_g", "pop_e"]);
    for (i, &t) in traj.times().iter().enumerate() {
        table.push(vec![t, t * spec.delta / PI, pg[i], pe[i]]);
    }
    let inputs = json!({
        "kind": spec.kind,
        "omega_mhz": to_mhz(spec.omega),
        "delta_mhz": to_mhz(spec.delta),
        "duration_us": duration,
    });
    let mut report = MetricsReport::new(name, inputs, cfg);
    report.insert("final_pop_e", *pe.last().expect("nonempty"));
    report.insert("peak_pop_e", pe.iter().copied().fold(0.0, f64::max));
    report.insert("max_norm_error", traj.max_norm_error());
    match spec.kind {
        DriveKind::SingleDetunedPlus | DriveKind::SingleDetunedMinus => {
            report.insert("ceiling", single_detuned_ceiling(spec.omega, spec.delta)?);
        }
        DriveKind::CosPair => {
            let mut worst = 0.0f64;
            for (i, &t) in traj.times().iter().enumerate() {
                let (cg, ce) = analytic_amplitudes(spec.omega, spec.delta, t)?;
                let a = traj.amplitudes(i);
                worst = worst.max((a[0] - cg).norm()).max((a[1] - ce).norm());
            }
            report.insert("max_analytic_error", worst);
        }
        DriveKind::SinPair => {}
    }
    Ok(Artifacts {
        tables: vec![table],
        report,
    })
}

/// One addressing protocol evaluated for the target and a nontarget atom on
/// each beam path.
#[derive(Debug, Clone, Copy)]
pub struct AddressingRun {
    pub protocol: Protocol,
    pub params: AddressingParams,
    /// Rabi scale of the nontarget atoms.
    pub scale: f64,
    pub microwave: Option<MicrowaveEchoParams>,
}

impl AddressingRun {
    pub fn sequence(&self) -> Result<AddressingSequence> {
        Ok(match self.protocol {
            Protocol::Method1 => method1_sequence(&self.params)?,
            Protocol::Method2 => method2_sequence(&self.params)?,
            Protocol::Method2Microwave => {
                let sched = self
                    .microwave
                    .ok_or_else(|| CliError::validation("the microwave protocol needs a microwave schedule"))?;
                method2_microwave_sequence(&self.params, &sched)?
            }
        })
    }
}

pub const ROLES: [(AtomRole, &str); 3] = [
    (AtomRole::Target, "target"),
    (AtomRole::NontargetPerpendicular, "nontarget_perp"),
    (AtomRole::NontargetParallel, "nontarget_par"),
];

fn echo_metrics(report: &mut MetricsReport, prefix: &str, r: &EchoReport) {
    report.insert(&format!("{prefix}_restoration"), r.restoration_fidelity);
    report.insert(&format!("{prefix}_t_de_us"), r.t_de);
    report.insert(&format!("{prefix}_decay_error"), r.decay_error);
    report.insert(&format!("{prefix}_peak_rydberg"), r.peak_rydberg);
    if let Some(w) = r.wait_rydberg {
        report.insert(&format!("{prefix}_wait_rydberg"), w);
    }
    report.insert(&format!("{prefix}_amplitude_abs"), r.target_amplitude.norm());
    report.insert(&format!("{prefix}_amplitude_arg"), r.target_amplitude.arg());
}

pub fn addressing(name: &str, run: &AddressingRun, cfg: &IntegratorConfig) -> Result<Artifacts> {
    let seq = run.sequence()?;
    let levels = run.protocol.levels();
    let inputs = json!({
        "protocol": run.protocol,
        "delta_mhz": to_mhz(run.params.delta),
        "omega_mhz": to_mhz(run.params.omega),
        "t_mu_us": run.params.t_mu,
        "stage2_phase": run.params.stage2_phase(),
        "tau_us": run.params.tau,
        "omega_scale": run.scale,
        "microwave": run.microwave,
    });
    let mut report = MetricsReport::new(name, inputs, cfg);
    let mut tables = Vec::new();
    for (role, tag) in ROLES {
        let scale = if role.is_target() { 1.0 } else { run.scale };
        let (traj, echo) = simulate_role(&seq, role, scale, cfg)?;
        echo_metrics(&mut report, tag, &echo);
        tables.push(Table::from_trajectory(format!("{name}_{tag}"), &traj, levels)?);
    }
    report.insert("sequence_duration_us", seq.sequence.duration());
    if let Some(s) = run.microwave {
        report.insert("microwave_t_mu_us", s.t_mu);
        report.insert("microwave_t_w_us", s.t_w);
        report.insert("microwave_omega_mhz", to_mhz(s.omega_mu));
        report.insert("microwave_n", f64::from(s.n));
        report.insert("second_pulse_phase", s.phase);
    }
    Ok(Artifacts { tables, report })
}

fn gate_inputs(params: &GateParams, edge: &PulseEdge) -> serde_json::Value {
    json!({
        "scheme": params.scheme,
        "omega_mhz": to_mhz(params.omega),
        "delta_mhz": to_mhz(params.delta),
        "v0_mhz": to_mhz(params.v0),
        "v_mhz": to_mhz(params.v),
        "duration_us": params.duration,
        "edge": edge,
    })
}

/// Time-resolved input-11 leakage plus both final leakages.
pub fn gate_step2(name: &str, params: &GateParams, edge: PulseEdge, cfg: &IntegratorConfig) -> Result<Artifacts> {
    let curve = leakage_trajectory(params, edge, cfg)?;
    let (l01, lr1) = step2_leakages(params, edge, &TimingOffsets::ZERO, cfg)?;
    let mut table = Table::new(name, &["t_us", "t_over_T", "leakage"]);
    for (&t, &l) in curve.times.iter().zip(&curve.leakage) {
        table.push(vec![t, t / params.duration, l]);
    }
    let mut report = MetricsReport::new(name, gate_inputs(params, &edge), cfg);
    report.insert("leakage_01", l01);
    report.insert("leakage_r1", lr1);
    report.insert("endpoint_leakage", curve.endpoint());
    report.insert("peak_leakage", curve.peak());
    Ok(Artifacts {
        tables: vec![table],
        report,
    })
}

/// Blockade-error sweep of both schemes over `(V − V₀)/V₀ ∈ interval`.
pub fn gate_sweep(
    name: &str,
    omega: f64,
    v0: f64,
    interval: (f64, f64),
    points: usize,
    edge: PulseEdge,
    cfg: &IntegratorConfig,
) -> Result<Artifacts> {
    let orir = blockade_sweep(&GateParams::orir(omega, v0, v0), edge, interval, points, cfg)?;
    let trad = blockade_sweep(&GateParams::traditional(omega, v0, v0), edge, interval, points, cfg)?;
    let mut table = Table::new(
        name,
        &["v_rel", "leakage_orir", "leakage_traditional", "leak_orir_log10", "leak_trad_log10"],
    );
    for i in 0..points {
        let (a, b) = (orir.leakage_r1[i], trad.leakage_r1[i]);
        table.push(vec![orir.v_rel[i], a, b, a.log10(), b.log10()]);
    }
    let inputs = json!({
        "omega_mhz": to_mhz(omega),
        "v0_over_omega": v0 / omega,
        "interval": [interval.0, interval.1],
        "points": points,
        "edge": edge,
    });
    let mut report = MetricsReport::new(name, inputs, cfg);
    report.insert("average_orir", orir.average);
    report.insert("average_traditional", trad.average);
    report.insert("advantage", trad.average / orir.average);
    Ok(Artifacts {
        tables: vec![table],
        report,
    })
}

/// Duration optimum (unless `t_star` is given) and timing-error averages at
/// each `sigma` (µs).
pub fn gate_timing(
    name: &str,
    params: &GateParams,
    edge: PulseEdge,
    sigmas: &[f64],
    t_star: Option<f64>,
    cfg: &IntegratorConfig,
) -> Result<Artifacts> {
    if params.scheme != GateScheme::Orir {
        return Err(CliError::validation("timing-error averages apply to the orir scheme"));
    }
    if sigmas.is_empty() {
        return Err(CliError::validation("at least one σ_t is required"));
    }
    let mut report = MetricsReport::new(name, gate_inputs(params, &edge), cfg);
    let t_star = match t_star {
        Some(t) => t,
        None => {
            let opt = optimize_duration(params, edge, cfg)?;
            report.insert("leakage_01_at_t_star", opt.leakage_01);
            report.insert("leakage_r1_at_t_star", opt.leakage_r1);
            opt.t_star
        }
    };
    report.insert("t_star_ns", to_ns(t_star));
    let mut table = Table::new(name, &["sigma_t_ns", "avg_leak_01", "avg_leak_r1"]);
    for &sigma in sigmas {
        let avg = timing_error_average(params, edge, t_star, sigma, cfg)?;
        table.push(vec![to_ns(sigma), avg.leakage_01, avg.leakage_r1]);
    }
    report.insert("sigma_t_ns", table.column("sigma_t_ns").expect("column"));
    report.insert("avg_leak_01", table.column("avg_leak_01").expect("column"));
    report.insert("avg_leak_r1", table.column("avg_leak_r1").expect("column"));
    Ok(Artifacts {
        tables: vec![table],
        report,
    })
}

/// A beam focused on the center of the largest addressable lattice.
#[derive(Debug, Clone, Copy)]
pub struct BeamChoice {
    pub direction: [i32; 3],
    pub waist: f64,
}

pub fn geometry(
    name: &str,
    constant: f64,
    wavelength: f64,
    r_perp0: Option<f64>,
    beam: Option<BeamChoice>,
    cfg: &IntegratorConfig,
) -> Result<Artifacts> {
    let (dims, n) = max_addressable_lattice(constant, wavelength)?;
    let inputs = json!({
        "lattice_constant_um": constant,
        "wavelength_um": wavelength,
        "r_perp0_um": r_perp0,
        "beam": beam.map(|b| json!({"direction": b.direction, "waist_um": b.waist})),
    });
    let mut report = MetricsReport::new(name, inputs, cfg);
    report.insert("dims", dims.map(|d| d as f64).to_vec());
    report.insert("n", n as f64);
    report.insert("distance_bound_um", distance_bound(constant, wavelength, r_perp0)?);
    let mut tables = Vec::new();
    if let Some(b) = beam {
        let lattice = LatticeSpec::new(constant, dims)?;
        let spec = BeamSpec::new(b.direction, b.waist, wavelength, lattice.center())?;
        report.insert("rayleigh_length_um", rayleigh_length(b.waist, wavelength));
        let mut table = Table::new(name, &["ix", "iy", "iz", "x_um", "y_um", "z_um", "rabi_scale"]);
        let mut strongest = 0.0f64;
        let center = lattice.center();
        for idx in lattice.indices() {
            let site = lattice.position(idx);
            let s = rabi_scale(site, &spec)?;
            if site != center {
                strongest = strongest.max(s);
            }
            table.push(vec![idx[0] as f64, idx[1] as f64, idx[2] as f64, site[0], site[1], site[2], s]);
        }
        report.insert("max_nontarget_rabi_scale", strongest);
        tables.push(table);
    }
    Ok(Artifacts { tables, report })
}
