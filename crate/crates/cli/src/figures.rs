//! Figure reproductions with their parameters hard-wired.

use std::f64::consts::{FRAC_PI_2, PI};

use orir_core::addressing::{
    microwave_echo_schedule, simulate_role, AddressingParams, AtomRole, Protocol,
};
use orir_core::gate::GateParams;
use orir_core::orir::{DriveKind, OrirDriveSpec};
use orir_core::units::{mhz, ns};
use orir_core::{EdgeShape, IntegratorConfig, PulseEdge};

use crate::error::Result;
use crate::output::Artifacts;
use crate::scenarios::{self, AddressingRun};

/// Edge shape used when the caller does not pick one.
pub const DEFAULT_EDGE: EdgeShape = EdgeShape::Linear;
/// Gate Rabi frequency, MHz.
pub const GATE_RABI_MHZ: f64 = 2.0;
/// Addressing detuning, MHz.
pub const ADDRESSING_DELTA_MHZ: f64 = 4.0;
pub const NONTARGET_SCALE: f64 = 0.73;
pub const MICROWAVE_KAPPA: f64 = -52.6 / 56.2;
pub const FIG7_SIGMAS_NS: [f64; 5] = [0.2, 1.0, 2.0, 3.5, 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig3,
    Fig4,
    Fig4mu,
    Fig5,
    Fig6,
    Fig7,
}

/// Knobs that trade fidelity to the figure for run time.
#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub sweep_points: usize,
    pub sigmas_ns: Vec<f64>,
    pub ramp_ns: f64,
    pub edge: EdgeShape,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            sweep_points: 201,
            sigmas_ns: FIG7_SIGMAS_NS.to_vec(),
            ramp_ns: 20.0,
            edge: DEFAULT_EDGE,
        }
    }
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig4mu => "fig4mu",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }
}

pub fn run_figure(fig: Figure, opts: &FigureOptions, cfg: &IntegratorConfig) -> Result<Artifacts> {
    let name = fig.name();
    match fig {
        Figure::Fig1a => {
            // Δ/Ω = 2/π with one tone: capped at π²/(π²+4).
            let delta = mhz(1.0);
            let spec = OrirDriveSpec::new(FRAC_PI_2 * delta, delta, DriveKind::SingleDetunedPlus);
            scenarios::two_level(name, &spec, 2.0 * PI / delta, cfg)
        }
        Figure::Fig1b => {
            let delta = mhz(1.0);
            let spec = OrirDriveSpec::new(FRAC_PI_2 * delta, delta, DriveKind::CosPair);
            scenarios::two_level(name, &spec, PI / (2.0 * delta), cfg)
        }
        Figure::Fig3 => {
            let params = AddressingParams::method1(mhz(ADDRESSING_DELTA_MHZ));
            let run = AddressingRun {
                protocol: Protocol::Method1,
                params,
                scale: NONTARGET_SCALE,
                microwave: None,
            };
            let mut out = scenarios::addressing(name, &run, cfg)?;
            let (_, weak) = simulate_role(&run.sequence()?, AtomRole::NontargetPerpendicular, 0.3, cfg)?;
            out.report.insert("nontarget_perp_t_de_us_scale_0.3", weak.t_de);
            Ok(out)
        }
        Figure::Fig4 => {
            let run = AddressingRun {
                protocol: Protocol::Method2,
                params: AddressingParams::method2(mhz(ADDRESSING_DELTA_MHZ)),
                scale: NONTARGET_SCALE,
                microwave: None,
            };
            let mut out = scenarios::addressing(name, &run, cfg)?;
            let seq = run.sequence()?;
            let (twice, _) = simulate_role(&seq.repeated(2), AtomRole::Target, 1.0, cfg)?;
            let a1 = twice.final_state().amplitude("1")?;
            out.report.insert("double_application_amp1_re", a1.re);
            out.report.insert("double_application_amp1_im", a1.im);
            Ok(out)
        }
        Figure::Fig4mu => {
            let delta = mhz(ADDRESSING_DELTA_MHZ);
            let run = AddressingRun {
                protocol: Protocol::Method2Microwave,
                params: AddressingParams::method2(delta),
                scale: NONTARGET_SCALE,
                microwave: Some(microwave_echo_schedule(MICROWAVE_KAPPA, delta)?),
            };
            scenarios::addressing(name, &run, cfg)
        }
        Figure::Fig5 => {
            let om = mhz(GATE_RABI_MHZ);
            let mut out = scenarios::gate_sweep(name, om, 12.0 * om, (-0.25, 0.25), opts.sweep_points, PulseEdge::RECTANGULAR, cfg)?;
            let extra = [("wide", 12.0, 0.5), ("v0_30", 30.0, 0.25), ("v0_50", 50.0, 0.25)];
            for (tag, ratio, half) in extra {
                let run = scenarios::gate_sweep(
                    &format!("{name}_{tag}"),
                    om,
                    ratio * om,
                    (-half, half),
                    opts.sweep_points,
                    PulseEdge::RECTANGULAR,
                    cfg,
                )?;
                for key in ["average_orir", "average_traditional", "advantage"] {
                    out.report.insert(&format!("{key}_{tag}"), run.report.scalar(key).expect("sweep metric"));
                }
                if tag == "wide" {
                    out.tables.extend(run.tables);
                }
            }
            Ok(out)
        }
        Figure::Fig6 => {
            let om = mhz(GATE_RABI_MHZ);
            let v0 = 12.0 * om;
            let mut out = scenarios::gate_step2(&format!("{name}_orir"), &GateParams::orir(om, v0, v0), PulseEdge::RECTANGULAR, cfg)?;
            let trad = scenarios::gate_step2(
                &format!("{name}_traditional"),
                &GateParams::traditional(om, v0, v0),
                PulseEdge::RECTANGULAR,
                cfg,
            )?;
            out.report.scenario = name.to_string();
            let orir_metrics = std::mem::take(&mut out.report.metrics);
            for (scheme, metrics) in [("orir", orir_metrics), ("traditional", trad.report.metrics)] {
                for (k, v) in metrics {
                    out.report.metrics.insert(format!("{scheme}_{k}"), v);
                }
            }
            out.tables.extend(trad.tables);
            Ok(out)
        }
        Figure::Fig7 => {
            let om = mhz(GATE_RABI_MHZ);
            let v0 = 12.0 * om;
            let params = GateParams::orir(om, v0, 0.97 * v0);
            let edge = PulseEdge::ramps_ns(opts.ramp_ns, opts.edge)?;
            let sigmas: Vec<f64> = opts.sigmas_ns.iter().map(|&s| ns(s)).collect();
            scenarios::gate_timing(name, &params, edge, &sigmas, None, cfg)
        }
    }
}
