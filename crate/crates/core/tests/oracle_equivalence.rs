use coldclock::oracle::{integrate_sse, StepControl};
use coldclock::physics::{PhysicalConstants, Pulse, ScenarioConfig};
use coldclock::transfer::{scenario_amplitudes, ScatteringAmplitudes};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn worst_relative(a: &ScatteringAmplitudes, b: &ScatteringAmplitudes) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array().iter())
        .map(|(x, y)| (x - y).norm() / x.norm())
        .fold(0.0, f64::max)
}

#[test]
fn pi_pulse_t12_matches_transfer_matrix() {
    let cfg = ScenarioConfig::rabi(
        PhysicalConstants::dimensionless(),
        20.0,
        1.0,
        Pulse::PiPulse,
    );
    let omega = cfg.rabi_frequency();
    for delta in [0.0, 0.5 * omega, -0.5 * omega] {
        let tm = scenario_amplitudes(&cfg, delta).unwrap();
        let ode = integrate_sse(&cfg, delta, &StepControl::default()).unwrap();
        let dev = (tm.t12 - ode.t12).norm() / tm.t12.norm();
        assert!(dev < 1e-8, "delta={delta}: {dev:e}");
    }
}

#[test]
fn uncoupled_atom_is_transmitted() {
    let cfg = ScenarioConfig::rabi(
        PhysicalConstants::dimensionless(),
        7.0,
        1.0,
        Pulse::ExplicitOmega(0.0),
    );
    let ode = integrate_sse(&cfg, 1.3, &StepControl::default()).unwrap();
    assert!((ode.t11 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    assert!(ode.t12.norm() < 1e-10);
}

#[test]
fn randomized_cases_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let c = PhysicalConstants::dimensionless();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let kl = 10f64.powf(rng.gen_range(3f64.log10()..300f64.log10()));
        let cfg = if rng.gen_bool(0.5) {
            ScenarioConfig::rabi(c, kl, 1.0, Pulse::PiPulse)
        } else {
            ScenarioConfig::ramsey(c, kl, 1.0, rng.gen_range(0.5..3.0), Pulse::HalfPiPulse)
        };
        let omega = cfg.rabi_frequency();
        let delta = rng.gen_range(-omega..omega);
        let tm = scenario_amplitudes(&cfg, delta).unwrap();
        let ode = integrate_sse(&cfg, delta, &StepControl::default()).unwrap();
        assert!((ode.flux_sum() - 1.0).abs() < 1e-9);
        worst = worst.max(worst_relative(&tm, &ode));
    }
    assert!(worst < 1e-7, "{worst:e}");
}

// Global error of the fixed-step integrator falls at least as h^4.
#[test]
fn fixed_step_convergence_order() {
    let cfg = ScenarioConfig::rabi(
        PhysicalConstants::dimensionless(),
        10.0,
        1.0,
        Pulse::PiPulse,
    );
    let delta = 0.3 * cfg.rabi_frequency();
    let exact = scenario_amplitudes(&cfg, delta).unwrap().t12;
    let err = |h: f64| {
        let ode = integrate_sse(&cfg, delta, &StepControl::Fixed { step: h }).unwrap();
        (ode.t12 - exact).norm()
    };
    let (e1, e2) = (err(0.02), err(0.01));
    let order = (e1 / e2).log2();
    assert!(order >= 4.0, "order {order}");
}
