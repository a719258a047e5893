use coldclock::physics::{PhysicalConstants, Pulse, ScenarioConfig};
use coldclock::search::{bisect_level, golden_max};
use coldclock::semiclassical::{rabi_scl, ramsey_scl, semiclassical_probability};
use std::f64::consts::PI;

fn rabi_half_width(t: f64) -> f64 {
    let omega = PI / t;
    bisect_level(
        |d| Ok(rabi_scl(d, omega, t)),
        0.0,
        3f64.sqrt() * omega,
        0.5,
        1e-15,
    )
    .unwrap()
}

#[test]
fn central_peak_narrows_as_one_over_t() {
    for t in [1e-3, 0.37, 12.0] {
        let ratio = rabi_half_width(t) / rabi_half_width(2.0 * t);
        assert!((ratio - 2.0).abs() < 0.02 * 2.0, "{ratio}");
    }
}

#[test]
fn ramsey_curve_is_symmetric_and_bounded() {
    let cfg = ScenarioConfig::ramsey(
        PhysicalConstants::cesium(),
        0.05,
        1.5e-3,
        10.0,
        Pulse::HalfPiPulse,
    );
    let omega = cfg.rabi_frequency();
    for i in 0..500 {
        let d = i as f64 * 0.013 * omega;
        let (a, b) = (
            semiclassical_probability(&cfg, d),
            semiclassical_probability(&cfg, -d),
        );
        assert_eq!(a, b);
        assert!((0.0..=1.0 + 1e-15).contains(&a));
    }
}

// Adjacent Ramsey maxima are 2π/τ_R apart, with τ_R = τ_gap + 4τ/π for π/2
// pulses of duration τ; the spacing approaches 2π/τ_gap as N grows.
#[test]
fn ramsey_fringe_spacing_follows_gap_time() {
    for n in [5.0, 10.0, 40.0] {
        let tau = 1.0;
        let omega = PI / (2.0 * tau);
        let gap = n * tau;
        let tau_r = gap + 4.0 * tau / PI;
        let guess = 2.0 * PI / tau_r;
        let (x, _) = golden_max(
            |d| Ok(ramsey_scl(d, omega, tau, gap)),
            0.7 * guess,
            1.3 * guess,
            1e-12,
        )
        .unwrap();
        assert!((x / guess - 1.0).abs() < 0.01, "N={n}: {x} vs {guess}");
        let bare = 2.0 * PI / gap;
        assert!((x / bare - 1.0).abs() < 1.5 / n, "N={n}");
    }
}
