//! Criterion benchmarks of the hot paths: single propagations, echo
//! sequences, gate pulses and a short blockade sweep.

use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::Criterion;
use orir_core::addressing::{method1_sequence, method2_sequence, simulate_role, AddressingParams, AtomRole};
use orir_core::gate::{blockade_sweep, step2_leakages, GateParams, TimingOffsets};
use orir_core::orir::{simulate_orir, DriveKind, OrirDriveSpec};
use orir_core::units::{mhz, ns};
use orir_core::{EdgeShape, IntegratorConfig, PulseEdge};

pub fn two_level(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let delta = mhz(1.0);
    let spec = OrirDriveSpec::new(FRAC_PI_2 * delta, delta, DriveKind::CosPair);
    c.bench_function("orir/cos_pair_full_transfer", |b| {
        b.iter(|| simulate_orir(black_box(&spec), FRAC_PI_2 / delta, &cfg).unwrap())
    });
}

pub fn addressing(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let d = mhz(4.0);
    let m1 = method1_sequence(&AddressingParams::method1(d)).unwrap();
    let m2 = method2_sequence(&AddressingParams::method2(d)).unwrap();
    let mut g = c.benchmark_group("addressing");
    g.bench_function("method1_nontarget", |b| {
        b.iter(|| simulate_role(&m1, AtomRole::NontargetPerpendicular, black_box(0.73), &cfg).unwrap())
    });
    g.bench_function("method2_target", |b| {
        b.iter(|| simulate_role(&m2, AtomRole::Target, black_box(1.0), &cfg).unwrap())
    });
    g.finish();
}

pub fn gate(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let om = mhz(2.0);
    let v0 = 12.0 * om;
    let params = GateParams::orir(om, v0, 0.97 * v0);
    let edge = PulseEdge::ramps_ns(20.0, EdgeShape::Linear).unwrap();
    let offsets = TimingOffsets {
        start_plus: ns(1.0),
        start_minus: ns(-2.0),
        end_plus: ns(0.5),
        end_minus: ns(3.0),
    };
    let mut g = c.benchmark_group("gate");
    g.bench_function("step2_leakages_ramped", |b| {
        b.iter(|| step2_leakages(&params, edge, black_box(&offsets), &cfg).unwrap())
    });
    g.sample_size(10);
    g.bench_function("blockade_sweep_21", |b| {
        b.iter(|| blockade_sweep(&GateParams::orir(om, v0, v0), PulseEdge::RECTANGULAR, (-0.25, 0.25), 21, &cfg).unwrap())
    });
    g.finish();
}
