//! Invariants that must hold for every admissible input.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use crate::addressing::{method1_sequence, method2_sequence, simulate_role, AddressingParams, AtomRole};
use crate::gate::{step2_evolve, weighted_average, GateInput, GateParams, GateScheme, TimingOffsets, TimingSample};
use crate::geometry::{
    beam_radius, max_addressable_lattice, perpendicular_distance, rabi_scale, rayleigh_length, vdw_interaction,
    BeamSpec, InteractionModel,
};
use crate::orir::{analytic_amplitudes, simulate_orir, single_detuned_ceiling, DriveKind, OrirDriveSpec};
use crate::quantum::{
    apply_frame, evolve, propagate, Amplitude, FrameTransform, Hamiltonian, HamiltonianTerm, IntegratorConfig,
    LevelBasis, StateVector,
};
use crate::units::mhz;
use crate::{PulseEdge, Tone};

fn cfg() -> IntegratorConfig {
    IntegratorConfig::default()
}

fn qubit() -> Arc<LevelBasis> {
    Arc::new(LevelBasis::new(["g", "e"]).unwrap())
}

fn random_drive(omega: f64, delta: f64, phase: f64) -> Hamiltonian {
    Hamiltonian::new(
        qubit(),
        vec![
            HamiltonianTerm::coupling("e", "g", Amplitude::Tone(Tone::continuous(omega, delta, phase))),
            HamiltonianTerm::coupling("e", "g", Amplitude::Tone(Tone::continuous(0.5 * omega, -delta, 0.0))),
            HamiltonianTerm::energy("e", 0.3 * delta),
        ],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_is_preserved(omega in 0.1f64..20.0, delta in -20.0f64..20.0, phase in 0.0f64..6.3, t1 in 0.05f64..2.0) {
        let h = random_drive(omega, delta, phase);
        let psi = StateVector::basis_state(qubit(), "g").unwrap();
        let traj = evolve(&psi, &h, 0.0, t1, &cfg().with_sample_interval(0.01)).unwrap();
        prop_assert!(traj.max_norm_error() < 1e-10);
        prop_assert!(traj.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn evolution_is_linear(
        omega in 0.1f64..10.0, delta in -10.0f64..10.0, t1 in 0.1f64..2.0,
        theta in 0.0f64..PI, chi in 0.0f64..6.3,
    ) {
        let h = random_drive(omega, delta, 0.7);
        let g = StateVector::basis_state(qubit(), "g").unwrap();
        let e = StateVector::basis_state(qubit(), "e").unwrap();
        let (alpha, beta) = (Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), chi));
        let mix = StateVector::new(qubit(), vec![alpha, beta]).unwrap();
        let fg = propagate(&g, &h, 0.0, t1, &cfg()).unwrap();
        let fe = propagate(&e, &h, 0.0, t1, &cfg()).unwrap();
        let fm = propagate(&mix, &h, 0.0, t1, &cfg()).unwrap();
        for i in 0..2 {
            let lin = alpha * fg.amplitudes()[i] + beta * fe.amplitudes()[i];
            prop_assert!((lin - fm.amplitudes()[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn assembled_hamiltonian_is_hermitian(t in -1.0f64..2.0, scale in 0.0f64..1.0) {
        for seq in [
            method1_sequence(&AddressingParams::method1(mhz(4.0))).unwrap(),
            method2_sequence(&AddressingParams::method2(mhz(4.0))).unwrap(),
        ] {
            let terms = seq.sequence.terms(|_| Some(scale));
            let h = crate::assemble_hamiltonian(&seq.basis, &terms, t).unwrap();
            let diff = (&h - h.adjoint()).norm();
            prop_assert!(diff <= 1e-14 * h.norm().max(1e-300));
        }
    }

    #[test]
    fn cos_pair_matches_closed_form(ratio in 0.1f64..5.0, phase in 0.0f64..(4.0 * PI)) {
        let delta = mhz(1.0);
        let spec = OrirDriveSpec::new(ratio * delta, delta, DriveKind::CosPair);
        let t = phase / delta;
        prop_assume!(t > 1e-6);
        let traj = simulate_orir(&spec, t, &cfg().with_sample_interval(t)).unwrap();
        let (cg, ce) = analytic_amplitudes(spec.omega, delta, t).unwrap();
        let a = traj.final_state();
        prop_assert!((a.amplitudes()[0] - cg).norm() < 1e-8);
        prop_assert!((a.amplitudes()[1] - ce).norm() < 1e-8);
    }

    #[test]
    fn single_tone_respects_ceiling(omega in 0.2f64..10.0, delta in 0.2f64..10.0) {
        let spec = OrirDriveSpec::new(omega, delta, DriveKind::SingleDetunedMinus);
        let gen = (omega * omega + delta * delta).sqrt();
        let traj = simulate_orir(&spec, 3.0 * PI / gen, &cfg().with_sample_interval(0.01 / gen)).unwrap();
        let ceiling = single_detuned_ceiling(omega, delta).unwrap();
        let peak = traj.populations("e").unwrap().into_iter().fold(0.0, f64::max);
        prop_assert!(peak <= ceiling + 1e-9);
    }

    #[test]
    fn sin_pair_is_shifted_cos_pair(ratio in 0.2f64..4.0, t in 0.05f64..3.0) {
        // cos(Δ(t + π/2Δ)) = −sin(Δt): a constant phase of the coupling,
        // which leaves populations unchanged.
        let delta = mhz(0.5);
        let sin = OrirDriveSpec::new(ratio * delta, delta, DriveKind::SinPair);
        let shift = PI / (2.0 * delta);
        let cos_terms: Vec<HamiltonianTerm> = OrirDriveSpec::new(ratio * delta, delta, DriveKind::CosPair)
            .tones()
            .into_iter()
            .map(|tone| HamiltonianTerm::coupling("e", "g", Amplitude::Tone(tone.with_time_origin(-shift))))
            .collect();
        let h_cos = Hamiltonian::new(qubit(), cos_terms).unwrap();
        let psi = StateVector::basis_state(qubit(), "g").unwrap();
        let a = simulate_orir(&sin, t, &cfg().with_sample_interval(t)).unwrap().final_state();
        let b = propagate(&psi, &h_cos, 0.0, t, &cfg()).unwrap();
        prop_assert!((a.population("e").unwrap() - b.population("e").unwrap()).abs() < 1e-8);
    }

    #[test]
    fn method1_echo_restores_any_scale(scale in 0.0f64..1.0, wait_frac in 0.0f64..1.0) {
        let d = mhz(4.0);
        let p = AddressingParams::method1(d).with_wait(wait_frac * 2.0 * PI / d);
        let seq = method1_sequence(&p).unwrap();
        for role in [AtomRole::NontargetPerpendicular, AtomRole::NontargetParallel] {
            let (_, r) = simulate_role(&seq, role, scale, &cfg()).unwrap();
            prop_assert!(1.0 - r.restoration_fidelity < 1e-8);
        }
    }

    #[test]
    fn vdw_power_law(d in 0.1f64..100.0) {
        let m = InteractionModel { v0: 3.7, constant: 4.2 };
        let c = vdw_interaction(&m, d).unwrap() * d.powi(6);
        prop_assert!((c - 3.7 * 4.2f64.powi(6)).abs() <= 1e-12 * c);
    }

    #[test]
    fn beam_radius_identity(l in -200.0f64..200.0, w0 in 0.5f64..10.0, lambda in 0.2f64..2.0) {
        let x = rayleigh_length(w0, lambda);
        let w = beam_radius(l, w0, lambda);
        prop_assert!((w * w - w0 * w0 * (1.0 + l * l / (x * x))).abs() <= 1e-12 * w * w);
    }

    #[test]
    fn decomposition_is_orthogonal(
        sx in -50.0f64..50.0, sy in -50.0f64..50.0, sz in -50.0f64..50.0,
        dx in -3i32..4, dy in -3i32..4, dz in -3i32..4,
    ) {
        prop_assume!((dx, dy, dz) != (0, 0, 0));
        let beam = BeamSpec::new([dx, dy, dz], 2.5, 0.78, [1.0, -2.0, 0.5]).unwrap();
        let (l, r) = perpendicular_distance([sx, sy, sz], &beam).unwrap();
        let rel = [sx - 1.0, sy + 2.0, sz - 0.5];
        let d2: f64 = rel.iter().map(|x| x * x).sum();
        prop_assert!((l * l + r * r - d2).abs() <= 1e-12 * d2.max(1e-12));
    }

    #[test]
    fn rabi_scale_decreases_away_from_focus(l in 0.0f64..80.0, dl in 0.01f64..10.0, r in 0.0f64..5.0, dr in 0.01f64..2.0) {
        let beam = BeamSpec::new([0, 0, 1], 2.54, 0.78, [0.0; 3]).unwrap();
        let s = |l: f64, r: f64| rabi_scale([r, 0.0, l], &beam).unwrap();
        // Along the axis only: off axis the widening beam can brighten a site.
        prop_assert!(s(l + dl, 0.0) < s(l, 0.0));
        prop_assert!(s(l, r + dr) < s(l, r));
        prop_assert!(s(l, r) <= 1.0);
    }

    #[test]
    fn lattice_bound_is_monotone(c in 0.5f64..40.0, dc in 0.0f64..5.0, lam in 0.3f64..1.5, dl in 0.0f64..0.5) {
        let n = |c: f64, lam: f64| max_addressable_lattice(c, lam).unwrap().1;
        prop_assert!(n(c + dc, lam) >= n(c, lam));
        prop_assert!(n(c, lam + dl) <= n(c, lam));
    }

    #[test]
    fn weighted_average_ignores_order(seed in 0u64..1000) {
        use rand::{rngs::StdRng, seq::SliceRandom, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(seed);
        let mut samples: Vec<TimingSample> = (0..500)
            .map(|_| TimingSample {
                offsets: TimingOffsets::ZERO,
                weight: rng.random_range(1e-12..1.0),
                leakage_01: rng.random_range(0.0..1e-3),
                leakage_r1: rng.random_range(0.0..1e-3),
            })
            .collect();
        let (a, b) = weighted_average(&samples).unwrap();
        samples.shuffle(&mut rng);
        let (c, d) = weighted_average(&samples).unwrap();
        prop_assert!((a - c).abs() <= 1e-12 * a && (b - d).abs() <= 1e-12 * b);
    }
}

#[test]
fn frame_chain_is_consistent() {
    // Stage 1 of Method I at the target: coupling (Ω/2)(e^{iΔt} − e^{−iΔt}).
    // In the frame rotating |r⟩ at rate Δ the coupling becomes
    // (Ω/2)(e^{2iΔt} − 1) with an energy −Δ on |r⟩.
    let d = mhz(4.0);
    let omega = PI * d / 4.0;
    let basis = Arc::new(LevelBasis::new(["1", "r"]).unwrap());
    let lab = Hamiltonian::new(
        basis.clone(),
        vec![
            HamiltonianTerm::coupling("r", "1", Amplitude::Tone(Tone::continuous(omega, d, 0.0))),
            HamiltonianTerm::coupling("r", "1", Amplitude::Tone(Tone::continuous(omega, -d, PI))),
        ],
    )
    .unwrap();
    let rotated = Hamiltonian::new(
        basis.clone(),
        vec![
            HamiltonianTerm::coupling("r", "1", Amplitude::Tone(Tone::continuous(omega, 2.0 * d, 0.0))),
            HamiltonianTerm::constant("r", "1", Complex64::new(-omega / 2.0, 0.0)),
            HamiltonianTerm::energy("r", -d),
        ],
    )
    .unwrap();
    let frame = FrameTransform::new(basis.clone(), &[("r", d)], 0.0).unwrap();
    let psi = StateVector::basis_state(basis, "1").unwrap();
    for t in [0.03, 0.0711, PI / d] {
        let a = apply_frame(&propagate(&psi, &lab, 0.0, t, &cfg()).unwrap(), &frame, t).unwrap();
        let b = propagate(&psi, &rotated, 0.0, t, &cfg()).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-9, "t = {t}: {x} vs {y}");
        }
    }
}

#[test]
fn halving_tolerances_is_stable_on_method1() {
    let seq = method1_sequence(&AddressingParams::method1(mhz(4.0))).unwrap();
    let base = cfg();
    let tight = base.with_tolerances(base.rtol / 2.0, base.atol / 2.0);
    for (role, scale) in [(AtomRole::NontargetPerpendicular, 0.73), (AtomRole::Target, 1.0)] {
        let (a, _) = simulate_role(&seq, role, scale, &base).unwrap();
        let (b, _) = simulate_role(&seq, role, scale, &tight).unwrap();
        for level in ["1", "r"] {
            let pa = a.populations(level).unwrap();
            let pb = b.populations(level).unwrap();
            let worst = pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-9, "{role:?} {level}: {worst}");
        }
    }
}

#[test]
fn blockade_leakage_vanishes_with_strong_interaction() {
    let om = mhz(1.0);
    for scheme in [GateScheme::Traditional, GateScheme::Orir] {
        let mut last = f64::INFINITY;
        for ratio in [1e2, 1e3, 1e4] {
            let p = GateParams::new(scheme, om, ratio * om, ratio * om);
            let s = step2_evolve(&p, PulseEdge::RECTANGULAR, GateInput::One1, &TimingOffsets::ZERO, &cfg()).unwrap();
            let leak = 1.0 - s.population("r1").unwrap();
            assert!(leak < last, "{scheme:?} at V/Ω = {ratio}: {leak} !< {last}");
            last = leak;
        }
        assert!(last < 1e-7);
    }
}
