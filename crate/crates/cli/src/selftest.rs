//! Fast invariant suite: analytic oracle, echo restoration, unblocked 2π.

use std::f64::consts::{FRAC_PI_2, PI};

use orir_core::addressing::{
    method1_sequence, method2_sequence, simulate_role, AddressingParams, AddressingSequence, AtomRole,
};
use orir_core::gate::{step2_evolve, GateInput, GateParams, TimingOffsets};
use orir_core::orir::{analytic_amplitudes, simulate_orir, DriveKind, OrirDriveSpec};
use orir_core::units::mhz;
use orir_core::{IntegratorConfig, PulseEdge};

use crate::error::Result;

/// Deliberate defects for checking that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of the second optical stage of both echo protocols.
    FlipEchoSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.value < self.limit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub rows: Vec<CheckRow>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }

    pub fn render(&self) -> String {
        let mut s = format!("{:<34} {:>12} {:>10}  result\n", "check", "value", "limit");
        for r in &self.rows {
            s.push_str(&format!(
                "{:<34} {:>12.3e} {:>10.1e}  {}\n",
                r.name,
                r.value,
                r.limit,
                if r.passed() { "pass" } else { "FAIL" }
            ));
        }
        s
    }
}

fn mutate(mut seq: AddressingSequence, mutation: Option<Mutation>) -> AddressingSequence {
    if mutation == Some(Mutation::FlipEchoSign) {
        for p in seq.sequence.pulses.iter_mut().filter(|p| p.label == "pulse2") {
            p.tone.phase += PI;
        }
    }
    seq
}

fn worst_echo_error(seq: &AddressingSequence, cfg: &IntegratorConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=4 {
        let scale = 0.25 * k as f64;
        for role in [AtomRole::NontargetPerpendicular, AtomRole::NontargetParallel] {
            let (_, r) = simulate_role(seq, role, scale, cfg)?;
            worst = worst.max(1.0 - r.restoration_fidelity);
        }
    }
    Ok(worst)
}

pub fn self_test(cfg: &IntegratorConfig, mutation: Option<Mutation>) -> Result<SelfTestReport> {
    let mut rows = Vec::new();

    let delta = mhz(1.0);
    let mut worst = 0.0f64;
    for (ratio, phase) in [(0.3, 0.7), (FRAC_PI_2, 2.0), (2.2, 5.1), (4.7, 11.9)] {
        let spec = OrirDriveSpec::new(ratio * delta, delta, DriveKind::CosPair);
        let t = phase / delta;
        let psi = simulate_orir(&spec, t, &cfg.with_sample_interval(t))?.final_state();
        let (cg, ce) = analytic_amplitudes(spec.omega, delta, t)?;
        worst = worst.max((psi.amplitudes()[0] - cg).norm()).max((psi.amplitudes()[1] - ce).norm());
    }
    rows.push(CheckRow {
        name: "cos-pair vs closed form",
        value: worst,
        limit: 1e-8,
    });

    let t = PI / (2.0 * delta);
    let spec = OrirDriveSpec::new(FRAC_PI_2 * delta, delta, DriveKind::CosPair);
    let pe = simulate_orir(&spec, t, &cfg.with_sample_interval(t))?.final_state().population("e")?;
    rows.push(CheckRow {
        name: "cos-pair full transfer (1 - P_e)",
        value: 1.0 - pe,
        limit: 1e-8,
    });

    let d = mhz(4.0);
    let m1 = mutate(method1_sequence(&AddressingParams::method1(d))?, mutation);
    rows.push(CheckRow {
        name: "Method I echo restoration",
        value: worst_echo_error(&m1, cfg)?,
        limit: 1e-8,
    });
    let m2 = mutate(method2_sequence(&AddressingParams::method2(d))?, mutation);
    rows.push(CheckRow {
        name: "Method II echo restoration",
        value: worst_echo_error(&m2, cfg)?,
        limit: 1e-8,
    });

    let om = mhz(2.0);
    for (name, params) in [
        ("unblocked 2pi, traditional", GateParams::traditional(om, 12.0 * om, 12.0 * om)),
        ("unblocked 2pi, orir", GateParams::orir(om, 12.0 * om, 12.0 * om)),
    ] {
        let s = step2_evolve(&params, PulseEdge::RECTANGULAR, GateInput::Zero1, &TimingOffsets::ZERO, cfg)?;
        rows.push(CheckRow {
            name,
            value: (s.amplitude("1")? + 1.0).norm(),
            limit: 1e-9,
        });
    }
    Ok(SelfTestReport { rows })
}
